/* rational.hpp -- exact rational arithmetic substrate.
 *
 * Rational is GMP's mpq_class: arbitrary precision, always kept in canonical
 * reduced form with positive denominator. Everything real-valued in this
 * library is either a Rational or an Enclosure of Rationals.
 */

#ifndef SPECTRA_RATIONAL_HPP_
#define SPECTRA_RATIONAL_HPP_

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace spectra {

using Rational = mpq_class;
using Integer = mpz_class;

// Parses "p/q" or "p" (decimal integers, optional sign). Rejects q <= 0 after
// canonicalization only if q == 0; "1/-2" canonicalizes to -1/2.
inline Rational parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    Rational r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational literal: '" + s + "'");
    if (r.get_den() == 0)
        throw std::invalid_argument("zero denominator in rational literal: '" + s + "'");
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) {
    return r.get_str();
}

inline Integer floor_int(const Rational& r) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline Integer ceil_int(const Rational& r) {
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

// r^n for integer n (n may be negative if r != 0).
inline Rational pow_int(const Rational& r, long n) {
    if (n == 0) return Rational(1);
    bool inv = n < 0;
    unsigned long e = inv ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), r.get_num_mpz_t(), e);
    mpz_pow_ui(out.get_den_mpz_t(), r.get_den_mpz_t(), e);
    out.canonicalize();
    if (inv) {
        if (out == 0) throw std::domain_error("pow_int: negative power of zero");
        out = 1 / out;
    }
    return out;
}

}  // namespace spectra

#endif  // SPECTRA_RATIONAL_HPP_
