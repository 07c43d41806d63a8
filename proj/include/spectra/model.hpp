/* model.hpp -- per-transition contraction data for the unstable/stable Cantor
 * sets, with contraction-rate bounds.
 *
 * Two kinds:
 *   - continued-fraction with digit cap N: letter a (0-based) is the digit
 *     a+1; cylinder geometry is exact via continuants.
 *   - explicit branches: one affine or Moebius contraction per transition in
 *     per-letter local unit coordinates. The branch for (a,b) is the inverse
 *     branch of the expanding map that continues letter a into letter b; it
 *     maps b's unit coordinates into a's. The base interval of a letter is
 *     the hull of its outgoing branch images, and the cylinder of w is
 *     h_(w1,w2) o ... o h_(w(n-1),wn) applied to base(wn), so a length-n
 *     cylinder contracts n times (a plain IFS is encoded by making h_(a,b)
 *     the map of the source letter a, independent of b).
 *
 * Rate bounds are expansion factors 1 < lambda1 <= lambda2 on each side;
 * sizes obey C_lo * lambda2u^-n <= |I(w)| <= C_hi * lambda1u^-n.
 */

#ifndef SPECTRA_MODEL_HPP_
#define SPECTRA_MODEL_HPP_

#include <optional>
#include <variant>
#include <vector>

#include "spectra/enclosure.hpp"
#include "spectra/sft.hpp"

namespace spectra {

struct AffineBranch {
    Rational c0, c1;  // x -> c0 + c1*x
};

struct MoebiusBranch {
    Rational p, q, r, s;  // x -> (p*x + q) / (r*x + s)
};

struct Branch {
    std::variant<AffineBranch, MoebiusBranch> map;
    int orientation = +1;  // sign of the derivative, validated at load

    Enclosure image(const Enclosure& domain) const;
    // Enclosure of |derivative| over [0,1].
    Enclosure abs_derivative_range() const;
};

struct RateBounds {
    Rational lambda1u, lambda2u, lambda1s, lambda2s;
};

enum class Side { unstable, stable };

class CantorModel {
public:
    // Built-in classical model: digits 1..digit_cap, full shift, the
    // continued-fraction Gauss geometry.
    static CantorModel classical(int digit_cap);

    // Continued-fraction model over a (possibly restricted) transition set.
    static CantorModel continued_fraction(int digit_cap, TransitionSet T,
                                          RateBounds rates);

    // Explicit-branch model; `branches[a][b]` present iff (a,b) allowed.
    static CantorModel branches(TransitionSet T,
                                std::vector<std::vector<std::optional<Branch>>> branches,
                                RateBounds rates);

    bool is_cf() const { return kind_ == Kind::cf; }
    int digit_cap() const { return digit_cap_; }
    const TransitionSet& transitions() const { return transitions_; }
    int alphabet_size() const { return transitions_.alphabet_size(); }
    const RateBounds& rates() const { return rates_; }
    const Branch& branch(Letter a, Letter b) const;
    // Branch models: hull of the outgoing branch images of letter a.
    const Enclosure& base_interval(Letter a) const;

    // Validates invariants; throws std::invalid_argument with a path-like
    // message on the first violation. Called by the factories.
    void validate() const;

    // Sandwich constants: C_lo * lambda2u^-n <= size(w) <= C_hi * lambda1u^-n.
    const Rational& sandwich_lo() const { return c_lo_; }
    const Rational& sandwich_hi() const { return c_hi_; }

    // Upper bound on any unstable cylinder size at word length n; also bounds
    // the change of a classical-potential arm when itineraries agree to depth n.
    Rational size_upper_bound(long n) const;

    // Whether stable-side geometry is available (CF kind, or symmetric T).
    bool supports_stable() const;

    // Canonical textual form, hashed into run manifests.
    std::string canonical_description() const;

private:
    enum class Kind { cf, branches };
    CantorModel(Kind k, TransitionSet T) : kind_(k), transitions_(std::move(T)) {}

    Kind kind_;
    TransitionSet transitions_;
    int digit_cap_ = 0;
    std::vector<std::vector<std::optional<Branch>>> branches_;
    std::vector<Enclosure> base_intervals_;
    RateBounds rates_;
    Rational c_lo_, c_hi_;
};

}  // namespace spectra

#endif  // SPECTRA_MODEL_HPP_
