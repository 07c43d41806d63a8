#include "spectra/potential.hpp"

#include <algorithm>
#include <sstream>

namespace spectra {

PotentialSpec PotentialSpec::classical() { return PotentialSpec(Kind::classical); }

PotentialSpec PotentialSpec::table(int radius, std::map<Word, Rational> values,
                                   Rational kappa, Rational rho) {
    if (radius < 0) throw std::invalid_argument("table potential: negative radius");
    PotentialSpec p(Kind::table);
    p.radius_ = radius;
    p.values_ = std::move(values);
    p.kappa_ = std::move(kappa);
    p.rho_ = std::move(rho);
    if (p.kappa_ < 0) throw std::invalid_argument("table potential: kappa must be >= 0");
    if (p.kappa_ > 0 && (p.rho_ <= 0 || p.rho_ >= 1))
        throw std::invalid_argument("table potential: rho must lie in (0,1)");
    return p;
}

void PotentialSpec::validate_against(const CantorModel& model) const {
    if (kind_ == Kind::classical) {
        if (!model.is_cf())
            throw std::invalid_argument("classical potential requires a continued-fraction model");
        return;
    }
    const int len = 2 * radius_ + 1;
    std::vector<Word> missing;
    enumerate_admissible(
        model.transitions(),
        [&](const Word& w) { return static_cast<int>(w.size()) == len; },
        [&](const Word& w) { return static_cast<int>(w.size()) < len; },
        [&](const Word& w) {
            if (!values_.count(w)) missing.push_back(w);
            return missing.size() < 8;
        });
    if (!missing.empty()) {
        std::string s;
        for (const auto& w : missing) s += " " + w.str();
        throw std::invalid_argument("table potential: missing entries for admissible words:" + s);
    }
    for (const auto& [w, v] : values_) {
        (void)v;
        if (static_cast<int>(w.size()) != len)
            throw std::invalid_argument("table potential: entry " + w.str() +
                                        " has wrong length (expected " + std::to_string(len) + ")");
        if (!is_admissible(w, model.transitions()))
            throw std::invalid_argument("table potential: entry " + w.str() + " is not admissible");
    }
    // var_k consistency for k < radius: entries sharing the central (2k+1)-word
    // may differ by at most kappa*rho^k.
    for (int k = 0; k < radius_; ++k) {
        Rational bound = kappa_ * pow_int(rho_, k);
        std::map<Word, std::pair<Rational, Rational>> range;  // central -> (min,max)
        for (const auto& [w, v] : values_) {
            std::vector<Letter> c(w.letters().begin() + (radius_ - k),
                                  w.letters().begin() + (radius_ + k + 1));
            Word cw(std::move(c));
            auto it = range.find(cw);
            if (it == range.end())
                range.emplace(cw, std::make_pair(v, v));
            else {
                it->second.first = std::min(it->second.first, v);
                it->second.second = std::max(it->second.second, v);
            }
        }
        for (const auto& [cw, mm] : range)
            if (mm.second - mm.first > bound)
                throw std::invalid_argument(
                    "table potential: oscillation " + to_string(mm.second - mm.first) +
                    " over the " + std::to_string(2 * k + 1) + "-cylinder " + cw.str() +
                    " exceeds kappa*rho^" + std::to_string(k) + " = " + to_string(bound));
    }
}

Rational PotentialSpec::variation_bound(const CantorModel& model, long d) const {
    if (kind_ == Kind::classical) return 2 * model.size_upper_bound(d);
    if (d >= radius_) return Rational(0);
    return kappa_ * pow_int(rho_, d);
}

std::string PotentialSpec::canonical_description() const {
    if (kind_ == Kind::classical) return "classical";
    std::ostringstream os;
    os << "table;radius=" << radius_ << ";kappa=" << to_string(kappa_)
       << ";rho=" << to_string(rho_) << ";";
    for (const auto& [w, v] : values_) os << w.str() << "=" << to_string(v) << ";";
    return os.str();
}

namespace {

// [0; d_1, d_2, ..., d_k, tail] by inward Moebius composition, exact.
Enclosure cf_arm(const std::vector<Letter>& digits, const CantorModel& model) {
    int cap = model.digit_cap();
    Enclosure v(Rational(1, cap + 1), Rational(1));
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        Rational d(*it + 1);
        v = Enclosure{d + v.lo, d + v.hi}.inverse();
    }
    return v;
}

Enclosure classical_window(const CylinderWindow& win, const CantorModel& model) {
    const auto& w = win.word;
    std::vector<Letter> right(w.letters().begin() + win.center + 1, w.letters().end());
    std::vector<Letter> left(w.letters().rend() - win.center, w.letters().rend());
    Rational a0(w[win.center] + 1);
    return a0 + cf_arm(right, model) + cf_arm(left, model);
}

// Hull of table values over all admissible completions of the central
// (2w+1)-window; exact once both arms reach the radius.
Enclosure table_window(const CylinderWindow& win, const PotentialSpec& pot,
                       const CantorModel& model) {
    const long r = pot.radius();
    const auto& w = win.word;
    const long c = static_cast<long>(win.center);
    const long n = static_cast<long>(w.size());
    // Positions c-r .. c+r; indices < 0 or >= n are free.
    std::optional<Rational> lo, hi;
    std::vector<Letter> buf(2 * r + 1);
    const auto& T = model.transitions();
    std::function<void(long)> rec = [&](long i) {
        if (i == 2 * r + 1) {
            Word key{std::vector<Letter>(buf)};
            auto it = pot.values().find(key);
            if (it == pot.values().end()) return;  // inadmissible completion
            if (!lo || it->second < *lo) lo = it->second;
            if (!hi || it->second > *hi) hi = it->second;
            return;
        }
        long pos = c - r + i;
        if (pos >= 0 && pos < n) {
            if (i > 0 && !T.allowed(buf[i - 1], w[pos])) return;
            buf[i] = w[pos];
            rec(i + 1);
            return;
        }
        for (int b = 0; b < T.alphabet_size(); ++b) {
            if (i > 0 && !T.allowed(buf[i - 1], static_cast<Letter>(b))) continue;
            buf[i] = static_cast<Letter>(b);
            rec(i + 1);
        }
    };
    rec(0);
    if (!lo) throw std::invalid_argument("table_window: no admissible completion");
    return {*lo, *hi};
}

}  // namespace

Enclosure window_bounds(const CylinderWindow& win, const PotentialSpec& pot,
                        const CantorModel& model) {
    if (!is_admissible(win.word, model.transitions()))
        throw std::invalid_argument("window_bounds: inadmissible window word");
    if (pot.is_classical()) {
        if (!model.is_cf())
            throw std::invalid_argument("window_bounds: classical potential needs a CF model");
        return classical_window(win, model);
    }
    return table_window(win, pot, model);
}

Enclosure markov_value_periodic(const Word& period_word, const PotentialSpec& pot,
                                const CantorModel& model, const Rational& tol) {
    if (tol <= 0) throw std::invalid_argument("markov_value_periodic: tol must be > 0");
    const size_t p = period_word.size();
    std::optional<Enclosure> best;
    for (size_t phase = 0; phase < p; ++phase) {
        // Window = period unrolled k times each side of the centered phase.
        for (size_t k = 1;; ++k) {
            std::vector<Letter> buf;
            buf.reserve((2 * k + 1) * p);
            for (size_t rep = 0; rep < 2 * k + 1; ++rep)
                buf.insert(buf.end(), period_word.letters().begin(), period_word.letters().end());
            size_t center = k * p + phase;
            Enclosure e = window_bounds(CylinderWindow(Word(std::move(buf)), center), pot, model);
            if (e.width() <= tol) {
                best = best ? Enclosure(std::max(best->lo, e.lo), std::max(best->hi, e.hi)) : e;
                break;
            }
            if (k > 64)
                throw std::runtime_error("markov_value_periodic: window enclosure does not tighten");
        }
    }
    return *best;
}

Enclosure markov_value_periodic(const PeriodicPoint& pp, const PotentialSpec& pot,
                                const CantorModel& model, const Rational& tol) {
    return markov_value_periodic(pp.period_word, pot, model, tol);
}

Enclosure lagrange_value_eventually_periodic(const Word& preperiod, const Word& period,
                                             const PotentialSpec& pot,
                                             const CantorModel& model,
                                             const Rational& tol) {
    const auto& T = model.transitions();
    if (!is_admissible(period, T) || !T.allowed(period.back(), period.front()))
        throw std::invalid_argument("lagrange value: period is not self-gluable");
    if (!preperiod.empty()) {
        if (!is_admissible(preperiod, T))
            throw std::invalid_argument("lagrange value: preperiod not admissible");
        if (!T.allowed(preperiod.back(), period.front()))
            throw std::invalid_argument("lagrange value: preperiod does not glue to period");
    }
    return markov_value_periodic(period, pot, model, tol);
}

}  // namespace spectra
