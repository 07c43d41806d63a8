#include "spectra/dimension.hpp"

#include <algorithm>
#include <functional>

#include "spectra/parallel.hpp"

namespace spectra {

namespace {

// Sum_i coeff_i * base_i^s compared against 1, three-valued.
enum class Cmp { below, above, undecided };

struct PowerSum {
    std::vector<Enclosure> bases;  // all in (0, inf), enclosures

    // Exact evaluation at s = p/q when every base endpoint agrees (point
    // enclosures) and every base^s is rational; nullopt otherwise.
    std::optional<Rational> exact_value(const Rational& s) const {
        Rational total(0);
        for (const auto& b : bases) {
            if (!b.is_point()) return std::nullopt;
            const Rational& x = b.lo;
            Integer num, den;
            unsigned long p, q;
            if (!s.get_num().fits_ulong_p() || !s.get_den().fits_ulong_p()) return std::nullopt;
            p = mpz_get_ui(s.get_num_mpz_t());
            q = mpz_get_ui(s.get_den_mpz_t());
            if (p == 0) {
                total += 1;
                continue;
            }
            Integer np, dp;
            mpz_pow_ui(np.get_mpz_t(), x.get_num_mpz_t(), p);
            mpz_pow_ui(dp.get_mpz_t(), x.get_den_mpz_t(), p);
            if (q > 1) {
                Integer nr, dr;
                if (!mpz_root(nr.get_mpz_t(), np.get_mpz_t(), q)) return std::nullopt;
                if (!mpz_root(dr.get_mpz_t(), dp.get_mpz_t(), q)) return std::nullopt;
                np = nr;
                dp = dr;
            }
            Rational term(np, dp);
            term.canonicalize();
            total += term;
        }
        return total;
    }

    Cmp compare_to_one(const Rational& s) const {
        if (s < 0) throw std::invalid_argument("PowerSum: negative exponent");
        for (unsigned prec = 96; prec <= 4096; prec *= 2) {
            Rational lo(0), hi(0);
            for (const auto& b : bases) {
                Enclosure t = pow_enclosure(b, s, prec);
                lo += t.lo;
                hi += t.hi;
            }
            if (hi < 1) return Cmp::below;
            if (lo > 1) return Cmp::above;
        }
        if (auto v = exact_value(s)) return *v < 1 ? Cmp::below : (*v > 1 ? Cmp::above : Cmp::undecided);
        return Cmp::undecided;
    }
};

// Root of the strictly decreasing map s -> Sum base_i^s at value 1, bracketed
// in [0, cap]. Returns a pair (a, b) with sum(a) >= 1 >= sum(b) certified and
// b - a <= tol, except: (0,0) when the sum at 0 is already <= 1, and
// (cap, cap) when the sum at cap still exceeds 1.
std::pair<Rational, Rational> power_sum_root(const PowerSum& ps, const Rational& tol,
                                             const Rational& cap) {
    if (auto v0 = ps.exact_value(Rational(0)); v0 && *v0 == 1) return {Rational(0), Rational(0)};
    if (ps.compare_to_one(Rational(0)) == Cmp::below) return {Rational(0), Rational(0)};
    Cmp at_cap = ps.compare_to_one(cap);
    if (at_cap == Cmp::above) return {cap, cap};
    Rational a(0), b = cap;
    int stuck = 0;
    while (b - a > tol) {
        Rational mid = (a + b) / 2;
        if (stuck == 1) mid = a + (b - a) * Rational(5, 11);
        if (auto ev = ps.exact_value(mid); ev && *ev == 1) return {mid, mid};
        Cmp c = ps.compare_to_one(mid);
        if (c == Cmp::above) {
            a = mid;
            stuck = 0;
        } else if (c == Cmp::below) {
            b = mid;
            stuck = 0;
        } else {
            if (++stuck > 1) break;  // undecidable midpoint twice: keep the bracket
        }
    }
    return {a, b};
}

}  // namespace

BlockGeometry BlockGeometry::from_blocks(const BlockAlphabet& blocks, const CantorModel& model,
                                         const Enclosure& c1) {
    BlockGeometry g;
    g.blocks = blocks;
    g.distortion = c1;
    for (const auto& b : blocks.blocks)
        g.sizes.push_back(Enclosure(cylinder_size(b, model)));
    return g;
}

MoranBounds moran_bounds(const BlockGeometry& g, const Rational& tol) {
    if (g.blocks.blocks.empty()) throw std::invalid_argument("moran_bounds: no blocks");
    if (tol <= 0) throw std::invalid_argument("moran_bounds: tol must be > 0");
    if (g.distortion.lo < 0) throw std::invalid_argument("moran_bounds: negative distortion");
    for (const auto& s : g.sizes)
        if (s.lo <= 0 || s.hi >= 1)
            throw std::invalid_argument("moran_bounds: degenerate block size (touches 0 or 1)");

    // Deflated pieces -> smaller root -> certified lower bound; inflated
    // pieces -> larger root -> certified upper bound.
    Enclosure shrink = g.distortion.hi == 0 ? Enclosure(Rational(1))
                                            : exp_enclosure(-g.distortion.hi);
    Enclosure grow = g.distortion.hi == 0 ? Enclosure(Rational(1))
                                          : exp_enclosure(g.distortion.hi);
    PowerSum lo_sum, hi_sum;
    for (const auto& s : g.sizes) {
        lo_sum.bases.push_back(Enclosure(shrink.lo * s.lo));
        hi_sum.bases.push_back(Enclosure(grow.hi * s.hi));
    }
    const Rational cap(2);
    auto lo_root = power_sum_root(lo_sum, tol, cap);
    auto hi_root = power_sum_root(hi_sum, tol, cap);
    MoranBounds out;
    out.lower = lo_root.first;   // sum(lower) >= 1: valid mass-distribution exponent
    out.upper = hi_root.second;  // sum(upper) <= 1: valid covering exponent
    if (out.upper < out.lower) out.upper = out.lower;  // only when both clamp to 0-width
    return out;
}

namespace {

// lambda enclosure of the periodic point of cyclic word w: q + q'*x with
// x = [0; w repeated] enclosed by the doubled cylinder.
Enclosure cf_multiplier(const Word& w, const CantorModel& model) {
    Continuants k = continuants(w, model);
    std::vector<Letter> ww(w.letters());
    ww.insert(ww.end(), w.letters().begin(), w.letters().end());
    Enclosure x = cylinder_interval(Word(std::move(ww)), model);
    return Enclosure{k.q + k.q_prev * x.lo, k.q + k.q_prev * x.hi};
}

Rational pressure_root(const std::vector<Word>& blocks, const CantorModel& model, int order,
                       const Rational& tol) {
    // All block-tuples of length `order`; weight lambda^-2s.
    PowerSum ps;
    std::vector<std::vector<int>> tuples;
    std::vector<int> cur;
    std::function<void()> rec = [&]() {
        if (static_cast<int>(cur.size()) == order) {
            tuples.push_back(cur);
            return;
        }
        for (size_t i = 0; i < blocks.size(); ++i) {
            cur.push_back(static_cast<int>(i));
            rec();
            cur.pop_back();
        }
    };
    rec();
    std::vector<Enclosure> lambdas(tuples.size());
    parallel_for_index(tuples.size(), [&](size_t i) {
        std::vector<Letter> ls;
        for (int bi : tuples[i])
            ls.insert(ls.end(), blocks[bi].letters().begin(), blocks[bi].letters().end());
        lambdas[i] = cf_multiplier(Word(std::move(ls)), model);
    });
    for (const auto& lam : lambdas) {
        // base = lambda^-2, exponent s
        Enclosure inv2 = (lam * lam).inverse();
        ps.bases.push_back(inv2);
    }
    auto root = power_sum_root(ps, tol, Rational(2));
    return (root.first + root.second) / 2;
}

}  // namespace

Enclosure pressure_dimension_cf(const BlockAlphabet& blocks, const CantorModel& model,
                                int order, const Rational& tol) {
    if (!model.is_cf())
        throw std::domain_error("pressure_dimension_cf: model kind is not continued-fraction");
    if (order < 1) throw std::invalid_argument("pressure_dimension_cf: order >= 1");
    if (tol <= 0) throw std::invalid_argument("pressure_dimension_cf: tol must be > 0");
    const Rational rtol = tol / 8;
    Rational s_hi = pressure_root(blocks.blocks, model, order, rtol);
    Rational s_lo = order > 1 ? pressure_root(blocks.blocks, model, order - 1, rtol) : s_hi;
    Rational lo = std::min(s_lo, s_hi), hi = std::max(s_lo, s_hi);
    Rational pad = (hi - lo) / 2 + rtol;
    lo -= pad;
    if (lo < 0) lo = 0;
    return {lo, hi + pad};
}

}  // namespace spectra
