#include "spectra/model.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "spectra/geometry.hpp"

namespace spectra {

Enclosure Branch::image(const Enclosure& domain) const {
    if (const auto* a = std::get_if<AffineBranch>(&map)) {
        Rational x = a->c0 + a->c1 * domain.lo;
        Rational y = a->c0 + a->c1 * domain.hi;
        return {std::min(x, y), std::max(x, y)};
    }
    const auto& m = std::get<MoebiusBranch>(map);
    auto eval = [&](const Rational& x) { return (m.p * x + m.q) / (m.r * x + m.s); };
    Rational x = eval(domain.lo), y = eval(domain.hi);
    return {std::min(x, y), std::max(x, y)};
}

Enclosure Branch::abs_derivative_range() const {
    if (const auto* a = std::get_if<AffineBranch>(&map)) {
        Rational d = abs(a->c1);
        return Enclosure(d);
    }
    const auto& m = std::get<MoebiusBranch>(map);
    Rational det = m.p * m.s - m.q * m.r;
    Rational d0 = m.s;           // r*x+s at x=0
    Rational d1 = m.r + m.s;     // at x=1
    Rational lo = std::min(abs(d0), abs(d1));
    Rational hi = std::max(abs(d0), abs(d1));
    return {abs(det) / (hi * hi), abs(det) / (lo * lo)};
}

CantorModel CantorModel::classical(int digit_cap) {
    RateBounds r;
    r.lambda1u = r.lambda1s = Rational(64, 25);  // q_n >= (8/5)^(n-1)
    r.lambda2u = r.lambda2s = Rational((digit_cap + 1) * (digit_cap + 1));
    return continued_fraction(digit_cap, TransitionSet::full(digit_cap), r);
}

CantorModel CantorModel::continued_fraction(int digit_cap, TransitionSet T,
                                            RateBounds rates) {
    if (digit_cap != T.alphabet_size())
        throw std::invalid_argument("cf model: digit_cap must equal alphabet size");
    CantorModel m(Kind::cf, std::move(T));
    m.digit_cap_ = digit_cap;
    m.rates_ = std::move(rates);
    m.c_lo_ = Rational(1, 2);
    m.c_hi_ = Rational(64, 25);
    m.validate();
    return m;
}

CantorModel CantorModel::branches(TransitionSet T,
                                  std::vector<std::vector<std::optional<Branch>>> branches,
                                  RateBounds rates) {
    CantorModel m(Kind::branches, std::move(T));
    m.branches_ = std::move(branches);
    m.rates_ = std::move(rates);
    m.validate();

    const int n = m.alphabet_size();
    const Enclosure unit(Rational(0), Rational(1));
    m.base_intervals_.assign(n, Enclosure());
    Rational min_b, max_b;
    for (int a = 0; a < n; ++a) {
        std::optional<Enclosure> hull;
        for (int b = 0; b < n; ++b) {
            const auto& ob = m.branches_[a][b];
            if (!ob) continue;
            Enclosure img = ob->image(unit);
            hull = hull ? Enclosure::hull(*hull, img) : img;
        }
        m.base_intervals_[a] = *hull;  // no dead letters, so hull exists
        Rational w = hull->width();
        if (a == 0 || w < min_b) min_b = w;
        if (a == 0 || w > max_b) max_b = w;
    }
    if (min_b <= 0)
        throw std::invalid_argument("branches: a letter has a degenerate base interval");
    // size(w) lies in [minB * lambda2u^-(n-1), maxB * lambda1u^-(n-1)].
    m.c_lo_ = min_b * m.rates_.lambda2u;
    m.c_hi_ = max_b * m.rates_.lambda1u;

    // Sibling pieces h_(a,b)(base_b) must have disjoint interiors.
    for (int a = 0; a < n; ++a) {
        std::vector<std::pair<Enclosure, int>> pieces;
        for (int b = 0; b < n; ++b) {
            const auto& ob = m.branches_[a][b];
            if (!ob) continue;
            pieces.emplace_back(ob->image(m.base_intervals_[b]), b);
        }
        std::sort(pieces.begin(), pieces.end(),
                  [](const auto& x, const auto& y) { return x.first.lo < y.first.lo; });
        for (size_t i = 0; i + 1 < pieces.size(); ++i)
            if (pieces[i].first.hi > pieces[i + 1].first.lo)
                throw std::invalid_argument(
                    "branches from letter " + std::to_string(a) + ": depth-2 pieces of " +
                    std::to_string(pieces[i].second) + " and " +
                    std::to_string(pieces[i + 1].second) + " overlap in the interior");
    }
    return m;
}

const Branch& CantorModel::branch(Letter a, Letter b) const {
    if (kind_ != Kind::branches) throw std::logic_error("branch(): not a branch model");
    const auto& ob = branches_.at(a).at(b);
    if (!ob) throw std::logic_error("branch(): transition has no branch");
    return *ob;
}

const Enclosure& CantorModel::base_interval(Letter a) const {
    if (kind_ != Kind::branches) throw std::logic_error("base_interval(): not a branch model");
    return base_intervals_.at(a);
}

void CantorModel::validate() const {
    transitions_.validate_no_dead_letters();
    const auto& r = rates_;
    for (const auto* lam : {&r.lambda1u, &r.lambda2u, &r.lambda1s, &r.lambda2s})
        if (*lam <= 1)
            throw std::invalid_argument("rate_bounds: expansion factors must be > 1");
    if (r.lambda1u > r.lambda2u || r.lambda1s > r.lambda2s)
        throw std::invalid_argument("rate_bounds: lambda1 must be <= lambda2");

    if (kind_ == Kind::cf) {
        if (digit_cap_ < 1) throw std::invalid_argument("cf model: digit_cap < 1");
        // Length-1 cylinders must sit inside the rate-implied size range.
        for (int a = 0; a < alphabet_size(); ++a) {
            Rational size = cylinder_size(Word{a}, *this);
            if (size < c_lo_ / r.lambda2u || size > c_hi_ / r.lambda1u)
                throw std::invalid_argument(
                    "rate_bounds inconsistent with letter " + std::to_string(a) +
                    ": length-1 cylinder size " + to_string(size) + " outside implied range");
        }
        return;
    }

    // Branch models: structural completeness, contraction, rate containment.
    const int n = alphabet_size();
    if (static_cast<int>(branches_.size()) != n)
        throw std::invalid_argument("branches: outer size mismatch with alphabet");
    for (int a = 0; a < n; ++a) {
        if (static_cast<int>(branches_[a].size()) != n)
            throw std::invalid_argument("branches[" + std::to_string(a) + "]: size mismatch");
        for (int b = 0; b < n; ++b) {
            bool allowed = transitions_.allowed(static_cast<Letter>(a), static_cast<Letter>(b));
            const auto& ob = branches_[a][b];
            std::string at = "branches[" + std::to_string(a) + "][" + std::to_string(b) + "]";
            if (allowed != ob.has_value())
                throw std::invalid_argument(at + ": " + (allowed ? "missing branch for allowed transition"
                                                                 : "branch given for forbidden transition"));
            if (!ob) continue;
            if (const auto* mo = std::get_if<MoebiusBranch>(&ob->map)) {
                Rational det = mo->p * mo->s - mo->q * mo->r;
                if (det == 0) throw std::invalid_argument(at + ": singular Moebius map");
                Rational d0 = mo->s, d1 = mo->r + mo->s;
                if (d0 == 0 || d1 == 0 || (d0 > 0) != (d1 > 0))
                    throw std::invalid_argument(at + ": pole inside the unit domain");
                int orient = det > 0 ? +1 : -1;  // h' = det/(rx+s)^2
                if (orient != ob->orientation)
                    throw std::invalid_argument(at + ": orientation tag does not match derivative sign");
            } else {
                const auto& af = std::get<AffineBranch>(ob->map);
                if (af.c1 == 0) throw std::invalid_argument(at + ": degenerate affine map");
                if ((af.c1 > 0 ? +1 : -1) != ob->orientation)
                    throw std::invalid_argument(at + ": orientation tag does not match derivative sign");
            }
            Enclosure deriv = ob->abs_derivative_range();
            if (deriv.hi >= 1)
                throw std::invalid_argument(at + ": not a contraction (|derivative| reaches " +
                                            to_string(deriv.hi) + ")");
            if (deriv.lo < 1 / r.lambda2u || deriv.hi > 1 / r.lambda1u)
                throw std::invalid_argument(at + ": derivative range outside rate_bounds");
            Enclosure img = ob->image(Enclosure(Rational(0), Rational(1)));
            if (img.lo < 0 || img.hi > 1)
                throw std::invalid_argument(at + ": image leaves the unit interval");
        }
    }
}

Rational CantorModel::size_upper_bound(long n) const {
    if (n <= 0) return Rational(1);
    return c_hi_ * pow_int(rates_.lambda1u, -n);
}

bool CantorModel::supports_stable() const {
    // Stable-side machinery runs on transposed words against the same
    // transition set and branch data, which needs T symmetric.
    return transitions_ == transitions_.reversed();
}

std::string CantorModel::canonical_description() const {
    std::ostringstream os;
    os << "alphabet=" << alphabet_size() << ";transitions=";
    for (int a = 0; a < alphabet_size(); ++a)
        for (int b = 0; b < alphabet_size(); ++b)
            if (transitions_.allowed(static_cast<Letter>(a), static_cast<Letter>(b)))
                os << a << "-" << b << ",";
    os << ";rates=" << to_string(rates_.lambda1u) << "," << to_string(rates_.lambda2u) << ","
       << to_string(rates_.lambda1s) << "," << to_string(rates_.lambda2s) << ";";
    if (kind_ == Kind::cf) {
        os << "kind=cf;digit_cap=" << digit_cap_;
    } else {
        os << "kind=branches;";
        for (int a = 0; a < alphabet_size(); ++a)
            for (int b = 0; b < alphabet_size(); ++b) {
                const auto& ob = branches_[a][b];
                if (!ob) continue;
                os << a << "-" << b << ":";
                if (const auto* af = std::get_if<AffineBranch>(&ob->map))
                    os << "affine(" << to_string(af->c0) << "," << to_string(af->c1) << ")";
                else {
                    const auto& m = std::get<MoebiusBranch>(ob->map);
                    os << "moebius(" << to_string(m.p) << "," << to_string(m.q) << ","
                       << to_string(m.r) << "," << to_string(m.s) << ")";
                }
                os << ";";
            }
    }
    return os.str();
}

}  // namespace spectra
