/* enclosure.hpp -- closed rational intervals [lo, hi] enclosing real values.
 *
 * Arithmetic on rational endpoints is exact; transcendental maps (log, exp,
 * powers with non-integer exponent) go through MPFR with directed rounding,
 * so every result interval contains the true real value. Precision is raised
 * on demand when a comparison cannot be decided.
 */

#ifndef SPECTRA_ENCLOSURE_HPP_
#define SPECTRA_ENCLOSURE_HPP_

#include <functional>
#include <optional>
#include <string>

#include "spectra/rational.hpp"

namespace spectra {

struct Enclosure {
    Rational lo;
    Rational hi;

    Enclosure() : lo(0), hi(0) {}
    explicit Enclosure(const Rational& v) : lo(v), hi(v) {}
    Enclosure(Rational l, Rational h);

    Rational width() const { return hi - lo; }
    Rational mid() const { return (lo + hi) / 2; }
    bool contains(const Rational& v) const { return lo <= v && v <= hi; }
    bool contains(const Enclosure& e) const { return lo <= e.lo && e.hi <= hi; }
    bool overlaps(const Enclosure& e) const { return lo <= e.hi && e.lo <= hi; }
    bool is_point() const { return lo == hi; }

    Enclosure operator+(const Enclosure& o) const { return {lo + o.lo, hi + o.hi}; }
    Enclosure operator-(const Enclosure& o) const { return {lo - o.hi, hi - o.lo}; }
    Enclosure operator*(const Enclosure& o) const;
    Enclosure operator-() const { return {-hi, -lo}; }

    // 1/x; requires the interval not to contain 0.
    Enclosure inverse() const;

    static Enclosure hull(const Enclosure& a, const Enclosure& b);
};

Enclosure operator+(const Rational& r, const Enclosure& e);
Enclosure operator*(const Rational& r, const Enclosure& e);

// --- MPFR-backed transcendentals (outward rounded) ---------------------------

// Natural log of a positive rational, to roughly 2^-prec_bits width.
Enclosure log_enclosure(const Rational& x, unsigned prec_bits = 96);
Enclosure log_enclosure(const Enclosure& x, unsigned prec_bits = 96);

// e^x for rational x.
Enclosure exp_enclosure(const Rational& x, unsigned prec_bits = 96);

// x^s for x > 0 (enclosure) and rational exponent s (any sign).
Enclosure pow_enclosure(const Enclosure& x, const Rational& s, unsigned prec_bits = 96);

// sqrt of a nonnegative rational.
Enclosure sqrt_enclosure(const Rational& x, unsigned prec_bits = 96);

// floor(-ln size) for an exact positive rational size, i.e. the scale of a
// cylinder of that size. Raises precision until the floor is unambiguous;
// throws std::runtime_error if a rational power of e is hit (size == 1 aside,
// that cannot happen) or the refinement cap is exceeded.
long floor_neg_log(const Rational& size);

// floor(-ln size) for a size known only as an enclosure; `refine` is called to
// tighten the enclosure when the floor straddles an integer, up to `max_refines`
// times. Used by explicit-branch models.
long floor_neg_log(Enclosure size, const std::function<Enclosure()>& refine,
                   int max_refines);

// Outward decimal rendering with `digits` fractional digits: lo rounded toward
// -inf, hi toward +inf. Deterministic, used by the CSV writers.
std::string decimal_lower(const Rational& v, int digits);
std::string decimal_upper(const Rational& v, int digits);

}  // namespace spectra

#endif  // SPECTRA_ENCLOSURE_HPP_
