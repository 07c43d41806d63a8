/* geometry.hpp -- cylinder intervals, sizes and scales of the unstable/stable
 * Cantor sets, minimal-word scale families, and the empirical distortion and
 * symmetry constants.
 */

#ifndef SPECTRA_GEOMETRY_HPP_
#define SPECTRA_GEOMETRY_HPP_

#include <array>
#include <functional>
#include <vector>

#include "spectra/enclosure.hpp"
#include "spectra/model.hpp"
#include "spectra/sft.hpp"

namespace spectra {

struct Continuants {
    Rational p;       // numerator continuant K(a_2..a_n)
    Rational q;       // K(a_1..a_n)
    Rational q_prev;  // K(a_1..a_(n-1))
};

// Continued-fraction continuants of the digit word (letters are digit-1).
// Throws std::domain_error on non-CF models.
Continuants continuants(const Word& w, const CantorModel& model);

// Interval of Cantor points whose itinerary starts with w. Exact endpoints
// for both model kinds. Stable side uses the transposed word's geometry.
Enclosure cylinder_interval(const Word& w, const CantorModel& model,
                            Side side = Side::unstable);

// hi - lo of the cylinder interval, exact.
Rational cylinder_size(const Word& w, const CantorModel& model,
                       Side side = Side::unstable);

// floor(-ln size), never ambiguous for exact rational sizes.
long scale(const Word& w, const CantorModel& model, Side side = Side::unstable);
inline long unstable_scale(const Word& w, const CantorModel& model) {
    return scale(w, model, Side::unstable);
}

// Incremental size tracking along a DFS path; push/pop letters, read size and
// scale of the current word without recomputing from scratch (CF models keep
// the continuant matrix, branch models a stack of intervals).
class CylinderWalker {
public:
    CylinderWalker(const CantorModel& model, Side side);

    void push(Letter a);
    void pop();
    size_t depth() const { return word_.size(); }
    const Word& word() const { return word_; }
    Rational size() const;
    long scale() const { return floor_neg_log(size()); }

private:
    const CantorModel* model_;
    Side side_;
    Word word_;
    // CF: continuant matrix [[m11,m12],[m21,m22]] = [[p',p],[q',q]] of the
    // side-effective word, one snapshot per level.
    std::vector<std::array<Integer, 4>> cf_stack_;
    std::vector<Enclosure> iv_stack_;  // branch models
};

struct ScaleFamily {
    long r = 0;
    std::vector<Word> words;
};

// Minimal admissible words at scale r passing `keep`. `keep` must be monotone
// under extension-pruning (keep(w)==false prunes the whole subtree).
ScaleFamily scale_family(long r, const CantorModel& model,
                         const std::function<bool(const Word&)>& keep,
                         Side side = Side::unstable);
ScaleFamily scale_family(long r, const CantorModel& model,
                         Side side = Side::unstable);

// Empirical bounded-distortion constant: enclosure of
//   max |ln(|I(ab)| / (|I(a)||I(b)|))|
// over all admissible junctions with |a|+|b| <= sample_depth.
Enclosure distortion_constant(const CantorModel& model, int sample_depth);

// Empirical conservative-symmetry constant: enclosure of
//   max |ln(|I^u(w)| / |I^s(w^t)|)| over admissible |w| <= sample_depth.
Enclosure symmetry_constant(const CantorModel& model, int sample_depth);

}  // namespace spectra

#endif  // SPECTRA_GEOMETRY_HPP_
