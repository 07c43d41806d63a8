#include "spectra/enclosure.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace spectra {

Enclosure::Enclosure(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo > hi) throw std::invalid_argument("Enclosure: lo > hi");
}

Enclosure Enclosure::operator*(const Enclosure& o) const {
    Rational a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
    return {std::min(std::min(a, b), std::min(c, d)),
            std::max(std::max(a, b), std::max(c, d))};
}

Enclosure Enclosure::inverse() const {
    if (lo <= 0 && hi >= 0)
        throw std::domain_error("Enclosure::inverse: interval contains 0");
    return {1 / hi, 1 / lo};
}

Enclosure Enclosure::hull(const Enclosure& a, const Enclosure& b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

Enclosure operator+(const Rational& r, const Enclosure& e) { return {r + e.lo, r + e.hi}; }

Enclosure operator*(const Rational& r, const Enclosure& e) {
    if (r >= 0) return {r * e.lo, r * e.hi};
    return {r * e.hi, r * e.lo};
}

namespace {

// mpfr values are dyadic rationals, so converting back is exact.
Rational mpfr_to_rational(const mpfr_t x) {
    if (mpfr_zero_p(x)) return Rational(0);
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
    Rational r(m);
    if (e >= 0) {
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e));
        r *= Rational(p);
    } else {
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(-e));
        r /= Rational(p);
    }
    r.canonicalize();
    return r;
}

struct MpfrVal {
    mpfr_t v;
    explicit MpfrVal(unsigned prec) { mpfr_init2(v, prec); }
    ~MpfrVal() { mpfr_clear(v); }
    MpfrVal(const MpfrVal&) = delete;
    MpfrVal& operator=(const MpfrVal&) = delete;
};

}  // namespace

Enclosure log_enclosure(const Rational& x, unsigned prec_bits) {
    if (x <= 0) throw std::domain_error("log_enclosure: nonpositive argument");
    MpfrVal lo(prec_bits), hi(prec_bits);
    // log is increasing, so rounding of the argument and of log compose.
    mpfr_set_q(lo.v, x.get_mpq_t(), MPFR_RNDD);
    mpfr_log(lo.v, lo.v, MPFR_RNDD);
    mpfr_set_q(hi.v, x.get_mpq_t(), MPFR_RNDU);
    mpfr_log(hi.v, hi.v, MPFR_RNDU);
    return {mpfr_to_rational(lo.v), mpfr_to_rational(hi.v)};
}

Enclosure log_enclosure(const Enclosure& x, unsigned prec_bits) {
    return {log_enclosure(x.lo, prec_bits).lo, log_enclosure(x.hi, prec_bits).hi};
}

Enclosure exp_enclosure(const Rational& x, unsigned prec_bits) {
    MpfrVal lo(prec_bits), hi(prec_bits);
    mpfr_set_q(lo.v, x.get_mpq_t(), MPFR_RNDD);
    mpfr_exp(lo.v, lo.v, MPFR_RNDD);
    mpfr_set_q(hi.v, x.get_mpq_t(), MPFR_RNDU);
    mpfr_exp(hi.v, hi.v, MPFR_RNDU);
    return {mpfr_to_rational(lo.v), mpfr_to_rational(hi.v)};
}

Enclosure pow_enclosure(const Enclosure& x, const Rational& s, unsigned prec_bits) {
    if (x.lo <= 0) throw std::domain_error("pow_enclosure: base must be positive");
    if (s == 0) return Enclosure(Rational(1));
    // Integer exponents stay exact.
    if (s.get_den() == 1 && mpz_fits_slong_p(s.get_num_mpz_t())) {
        long n = mpz_get_si(s.get_num_mpz_t());
        Rational a = pow_int(x.lo, n), b = pow_int(x.hi, n);
        return {std::min(a, b), std::max(a, b)};
    }
    // x^s monotone in x (direction given by sign of s).
    const bool inc = s > 0;
    const Rational& blo = inc ? x.lo : x.hi;
    const Rational& bhi = inc ? x.hi : x.lo;
    MpfrVal lo(prec_bits), hi(prec_bits), sv(prec_bits), b(prec_bits);
    mpfr_set_q(sv.v, s.get_mpq_t(), MPFR_RNDN);  // refined below via exact pow path
    // Compute x^s = exp(s*log(x)) with directed rounding end to end.
    auto directed = [&](const Rational& base, mpfr_rnd_t rnd, mpfr_t out) {
        MpfrVal lg(prec_bits), prod(prec_bits), se(prec_bits);
        mpfr_set_q(lg.v, base.get_mpq_t(), rnd);
        mpfr_log(lg.v, lg.v, rnd);
        // sign care: s*log(x): log(x) may be negative. Use directed mult by
        // rounding s in the direction that moves the product the right way.
        mpfr_rnd_t srnd = (mpfr_sgn(lg.v) >= 0) == (rnd == MPFR_RNDU) ? MPFR_RNDU : MPFR_RNDD;
        mpfr_set_q(se.v, s.get_mpq_t(), srnd);
        mpfr_mul(prod.v, se.v, lg.v, rnd);
        mpfr_exp(out, prod.v, rnd);
    };
    directed(blo, MPFR_RNDD, lo.v);
    directed(bhi, MPFR_RNDU, hi.v);
    return {mpfr_to_rational(lo.v), mpfr_to_rational(hi.v)};
}

Enclosure sqrt_enclosure(const Rational& x, unsigned prec_bits) {
    if (x < 0) throw std::domain_error("sqrt_enclosure: negative argument");
    MpfrVal lo(prec_bits), hi(prec_bits);
    mpfr_set_q(lo.v, x.get_mpq_t(), MPFR_RNDD);
    mpfr_sqrt(lo.v, lo.v, MPFR_RNDD);
    mpfr_set_q(hi.v, x.get_mpq_t(), MPFR_RNDU);
    mpfr_sqrt(hi.v, hi.v, MPFR_RNDU);
    return {mpfr_to_rational(lo.v), mpfr_to_rational(hi.v)};
}

long floor_neg_log(const Rational& size) {
    if (size <= 0) throw std::domain_error("floor_neg_log: size must be positive");
    for (unsigned prec = 96; prec <= 1u << 15; prec *= 2) {
        Enclosure l = log_enclosure(size, prec);
        Integer flo = floor_int(-l.hi), fhi = floor_int(-l.lo);
        if (flo == fhi) return mpz_get_si(flo.get_mpz_t());
        // ln of a rational equals an integer only for size == 1 (ln 1 = 0):
        // then -ln size == 0 exactly and floor is decided above.
        if (size == 1) return 0;
    }
    throw std::runtime_error("floor_neg_log: could not separate from integer boundary");
}

long floor_neg_log(Enclosure size, const std::function<Enclosure()>& refine,
                   int max_refines) {
    for (int i = 0;; ++i) {
        if (size.lo <= 0) throw std::domain_error("floor_neg_log: size not positive");
        Enclosure l = log_enclosure(size, 192);
        Integer flo = floor_int(-l.hi), fhi = floor_int(-l.lo);
        if (flo == fhi) return mpz_get_si(flo.get_mpz_t());
        if (i >= max_refines)
            throw std::runtime_error(
                "floor_neg_log: size enclosure straddles an integer scale boundary "
                "and could not be refined (degenerate model data)");
        size = refine();
    }
}

namespace {

std::string decimal_directed(const Rational& v, int digits, bool up) {
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    Rational scaled = v * Rational(scale);
    Integer n = up ? ceil_int(scaled) : floor_int(scaled);
    bool neg = n < 0;
    Integer a = abs(n);
    std::string ds = a.get_str();
    if (static_cast<int>(ds.size()) <= digits)
        ds = std::string(digits + 1 - ds.size(), '0') + ds;
    ds.insert(ds.size() - digits, ".");
    return (neg ? "-" : "") + ds;
}

}  // namespace

std::string decimal_lower(const Rational& v, int digits) {
    return decimal_directed(v, digits, false);
}

std::string decimal_upper(const Rational& v, int digits) {
    return decimal_directed(v, digits, true);
}

}  // namespace spectra
