#include "spectra/spectrum.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "spectra/parallel.hpp"
#include "spectra/sha256.hpp"

namespace spectra {

namespace {

std::string word_key(const Word& w) {
    return std::string(reinterpret_cast<const char*>(w.letters().data()), w.size());
}

Word side_normalized(const Word& w, Side side) {
    return side == Side::unstable ? w : transpose(w);
}

}  // namespace

struct EngineAccess {
    // Everything below operates on side-normalized (unstable) words.

    static std::mutex& mu(SpectrumContext& ctx) { return ctx.mu_; }
    static std::map<std::string, CountResult>& counts(SpectrumContext& ctx) { return ctx.counts_; }
    static void bump(SpectrumContext& ctx, Verdict v) {
        ctx.stats_[static_cast<int>(v)].fetch_add(1);
    }

    static std::string verdict_key(const Rational& t, int depth, const Word& w) {
        return to_string(t) + "|" + std::to_string(depth) + "|" + word_key(w);
    }

    static std::optional<SurvivalVerdict> cache_get(SpectrumContext& ctx, const std::string& key) {
        {
            std::lock_guard<std::mutex> lk(ctx.mu_);
            auto it = ctx.verdicts_.find(key);
            if (it != ctx.verdicts_.end()) return it->second;
        }
        if (!ctx.disk_dir_.empty()) return disk_get(ctx, key);
        return std::nullopt;
    }

    static void cache_put(SpectrumContext& ctx, const std::string& key, const SurvivalVerdict& v) {
        {
            std::lock_guard<std::mutex> lk(ctx.mu_);
            ctx.verdicts_.emplace(key, v);
        }
        if (!ctx.disk_dir_.empty()) disk_put(ctx, key, v);
    }

    static std::optional<SurvivalVerdict> disk_get(SpectrumContext& ctx, const std::string& key) {
        std::string path = ctx.disk_dir_ + "/" + sha256_hex(ctx.instance_key_ + "|" + key) + ".v";
        std::ifstream in(path);
        if (!in) return std::nullopt;
        std::string kind;
        in >> kind;
        SurvivalVerdict v;
        if (kind == "S") {
            v.verdict = Verdict::survives;
            std::string letters, val_lo, val_hi;
            in >> letters >> val_lo >> val_hi;
            if (!in) return std::nullopt;
            std::vector<Letter> ls;
            for (size_t i = 0; i + 1 < letters.size(); i += 2)
                ls.push_back(static_cast<Letter>(std::stoi(letters.substr(i, 2), nullptr, 16)));
            v.witness_period = Word(std::move(ls));
            v.witness_value = Enclosure(parse_rational(val_lo), parse_rational(val_hi));
        } else if (kind == "D") {
            v.verdict = Verdict::dies;
        } else if (kind == "U") {
            v.verdict = Verdict::unknown;
        } else {
            return std::nullopt;
        }
        std::lock_guard<std::mutex> lk(ctx.mu_);
        ctx.verdicts_.emplace(key, v);
        return v;
    }

    static void disk_put(SpectrumContext& ctx, const std::string& key, const SurvivalVerdict& v) {
        std::string path = ctx.disk_dir_ + "/" + sha256_hex(ctx.instance_key_ + "|" + key) + ".v";
        std::string tmp = path + ".tmp";
        {
            std::ofstream out(tmp);
            if (!out) return;
            if (v.verdict == Verdict::survives) {
                static const char* hexd = "0123456789abcdef";
                std::string letters;
                for (Letter a : v.witness_period->letters()) {
                    letters.push_back(hexd[a >> 4]);
                    letters.push_back(hexd[a & 0xf]);
                }
                out << "S " << letters << " " << to_string(v.witness_value->lo) << " "
                    << to_string(v.witness_value->hi) << "\n";
            } else {
                out << (v.verdict == Verdict::dies ? "D" : "U") << "\n";
            }
        }
        std::error_code ec;
        std::filesystem::rename(tmp, path, ec);
    }

    // --- refutation tree ------------------------------------------------

    // True iff every bi-infinite admissible completion of W has some window
    // with f-lower-bound > t, exploring two-sided extensions up to total
    // length `depth`. `grow_left` fixes which side the next extension takes,
    // alternating down the tree so both arms grow.
    static bool refuted(SpectrumContext& ctx, const Rational& t, int depth, Word& W,
                        bool grow_left) {
        const std::string key = to_string(t) + "|" + std::to_string(depth) + "|" +
                                (grow_left ? "L" : "R") + word_key(W);
        {
            std::lock_guard<std::mutex> lk(ctx.mu_);
            auto it = ctx.refutations_.find(key);
            if (it != ctx.refutations_.end()) return it->second;
        }
        bool result = false;
        for (size_t c = 0; c < W.size() && !result; ++c)
            if (window_bounds(CylinderWindow(W, c), ctx.pot(), ctx.model()).lo > t) result = true;
        if (!result && static_cast<int>(W.size()) < depth) {
            result = true;
            const auto& T = ctx.model().transitions();
            if (grow_left) {
                for (Letter a : T.predecessors(W.front())) {
                    std::vector<Letter> ls;
                    ls.reserve(W.size() + 1);
                    ls.push_back(a);
                    ls.insert(ls.end(), W.letters().begin(), W.letters().end());
                    Word W2{std::move(ls)};
                    if (!refuted(ctx, t, depth, W2, false)) {
                        result = false;
                        break;
                    }
                }
            } else {
                for (Letter b : T.successors(W.back())) {
                    Word W2 = W;
                    W2.push_back(b);
                    if (!refuted(ctx, t, depth, W2, true)) {
                        result = false;
                        break;
                    }
                }
            }
        }
        std::lock_guard<std::mutex> lk(ctx.mu_);
        ctx.refutations_.emplace(key, result);
        return result;
    }

    static bool refute_check(SpectrumContext& ctx, const Rational& t, int depth, const Word& w) {
        Word W = w;
        return refuted(ctx, t, depth, W, false);
    }

    // --- witness search ---------------------------------------------------

    // Periodic completions w·s by increasing extension length, low letters
    // first; accepted when the Markov value is certified <= t.
    static std::optional<std::pair<Word, Enclosure>> find_witness(SpectrumContext& ctx,
                                                                  const Rational& t, int depth,
                                                                  const Word& w) {
        const auto& T = ctx.model().transitions();
        const int hard_cap = T.alphabet_size() <= 2 ? 9 : 6;
        const int ext_max = std::min(std::max(0, depth - static_cast<int>(w.size())), hard_cap);
        const Rational coarse_tol(1, 1 << 12);
        const Rational fine_tol(Integer(1), Integer(1) << 44);
        std::optional<std::pair<Word, Enclosure>> found;
        auto try_candidate = [&](const Word& cand) {
            if (!T.allowed(cand.back(), cand.front())) return false;
            Enclosure v = markov_value_periodic(cand, ctx.pot(), ctx.model(), coarse_tol);
            if (v.lo > t) return false;
            if (v.hi > t) {
                v = markov_value_periodic(cand, ctx.pot(), ctx.model(), fine_tol);
                if (v.hi > t) return false;
            }
            found = {cand, v};
            return true;
        };
        std::function<bool(Word&, int)> rec = [&](Word& cand, int remaining) {
            if (try_candidate(cand)) return true;
            if (remaining == 0) return false;
            for (Letter b : T.successors(cand.back())) {
                cand.push_back(b);
                bool done = rec(cand, remaining - 1);
                cand.pop_back();
                if (done) return true;
            }
            return false;
        };
        Word cand = w;
        rec(cand, ext_max);
        return found;
    }
};

SpectrumContext::SpectrumContext(const CantorModel& model, const PotentialSpec& pot)
    : model_(&model), pot_(&pot) {
    pot.validate_against(model);
    instance_key_ = sha256_hex(model.canonical_description() + "|" + pot.canonical_description());
}

void SpectrumContext::enable_disk_cache_from_env() {
    const char* dir = std::getenv("SPECTRA_CACHE_DIR");
    if (!dir || !*dir) return;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (!ec) disk_dir_ = dir;
}

SurvivalVerdict survives(const Word& w, const Rational& t, int depth, SpectrumContext& ctx,
                         Side side) {
    if (w.empty()) throw std::invalid_argument("survives: empty word");
    Word v = side_normalized(w, side);
    if (!is_admissible(v, ctx.model().transitions()))
        throw std::invalid_argument("survives: word not admissible");
    const int eff_depth = std::max<int>(depth, static_cast<int>(v.size()));
    const std::string key = EngineAccess::verdict_key(t, eff_depth, v);
    if (auto cached = EngineAccess::cache_get(ctx, key)) {
        EngineAccess::bump(ctx, cached->verdict);
        return *cached;
    }
    SurvivalVerdict out;
    if (EngineAccess::refute_check(ctx, t, eff_depth, v)) {
        out.verdict = Verdict::dies;
        out.refuted_window = v;
    } else if (auto wit = EngineAccess::find_witness(ctx, t, eff_depth, v)) {
        out.verdict = Verdict::survives;
        out.witness_period = wit->first;
        out.witness_value = wit->second;
    } else {
        out.verdict = Verdict::unknown;
    }
    EngineAccess::cache_put(ctx, key, out);
    EngineAccess::bump(ctx, out.verdict);
    return out;
}

const CountResult& count_sublevel(const Rational& t, long r, int depth, SpectrumContext& ctx,
                                  Side side) {
    if (r < 1) throw std::invalid_argument("count_sublevel: r must be >= 1");
    const std::string memo_key = (side == Side::unstable ? "u|" : "s|") + to_string(t) + "|" +
                                 std::to_string(r) + "|" + std::to_string(depth);
    {
        std::lock_guard<std::mutex> lk(EngineAccess::mu(ctx));
        auto it = EngineAccess::counts(ctx).find(memo_key);
        if (it != EngineAccess::counts(ctx).end()) return it->second;
    }

    struct Partial {
        std::vector<Word> survivors, unknowns;
    };

    auto classify_member = [&](const Word& w, Partial& into) {
        SurvivalVerdict v = survives(w, t, depth, ctx, side);
        if (v.verdict == Verdict::survives)
            into.survivors.push_back(w);
        else if (v.verdict == Verdict::unknown)
            into.unknowns.push_back(w);
    };

    auto dies_prune = [&](const Word& w) {
        // Dies prunes the whole subtree (cylinder monotonicity).
        Word nw = side_normalized(w, side);
        if (EngineAccess::refute_check(ctx, t, std::max<int>(depth, nw.size()), nw)) {
            EngineAccess::bump(ctx, Verdict::dies);
            return true;
        }
        return false;
    };

    // Work roots: admissible non-member, non-refuted prefixes of length <= 2.
    // Classified serially; their subtrees run in parallel and merge in root
    // order, so results are schedule-independent.
    Partial head;
    std::vector<Word> roots;
    const auto& T = ctx.model().transitions();
    {
        CylinderWalker walk(ctx.model(), side);
        std::function<void(int)> seed = [&](int budget) {
            if (walk.scale() >= r) {
                classify_member(walk.word(), head);
                return;
            }
            if (dies_prune(walk.word())) return;
            if (budget == 0) {
                roots.push_back(walk.word());
                return;
            }
            for (Letter b : T.successors(walk.word().back())) {
                walk.push(b);
                seed(budget - 1);
                walk.pop();
            }
        };
        for (int a = 0; a < T.alphabet_size(); ++a) {
            walk.push(static_cast<Letter>(a));
            seed(1);
            walk.pop();
        }
    }

    std::vector<Partial> parts(roots.size());
    parallel_for_index(roots.size(), [&](size_t i) {
        CylinderWalker walk(ctx.model(), side);
        for (Letter a : roots[i].letters()) walk.push(a);
        Partial& part = parts[i];
        std::function<void()> dfs = [&]() {
            if (walk.scale() >= r) {
                classify_member(walk.word(), part);
                return;
            }
            if (dies_prune(walk.word())) return;
            for (Letter b : T.successors(walk.word().back())) {
                walk.push(b);
                dfs();
                walk.pop();
            }
        };
        // The root itself was already screened (non-member, not refuted).
        for (Letter b : T.successors(walk.word().back())) {
            walk.push(b);
            dfs();
            walk.pop();
        }
    });

    CountResult res;
    res.record.t = t;
    res.record.r = r;
    res.survivors = std::move(head.survivors);
    res.unknowns = std::move(head.unknowns);
    for (auto& p : parts) {
        res.survivors.insert(res.survivors.end(), p.survivors.begin(), p.survivors.end());
        res.unknowns.insert(res.unknowns.end(), p.unknowns.begin(), p.unknowns.end());
    }
    std::sort(res.survivors.begin(), res.survivors.end());
    std::sort(res.unknowns.begin(), res.unknowns.end());
    res.record.lower_count = static_cast<long>(res.survivors.size());
    res.record.upper_count = static_cast<long>(res.survivors.size() + res.unknowns.size());

    std::lock_guard<std::mutex> lk(EngineAccess::mu(ctx));
    return EngineAccess::counts(ctx).emplace(memo_key, std::move(res)).first->second;
}

SubmultiplicativityCheck check_submultiplicative(const Rational& t, long m, long n, long c,
                                                 int depth, SpectrumContext& ctx, Side side) {
    if (m < 1 || n < 1) throw std::invalid_argument("check_submultiplicative: need m,n >= 1");
    SubmultiplicativityCheck out;
    out.n_m = count_sublevel(t, m, depth, ctx, side).record.upper_count;
    out.n_n = count_sublevel(t, n, depth, ctx, side).record.upper_count;
    out.n_mn = count_sublevel(t, m + n, depth, ctx, side).record.upper_count;
    Integer bound;
    mpz_ui_pow_ui(bound.get_mpz_t(), static_cast<unsigned long>(ctx.model().alphabet_size()),
                  static_cast<unsigned long>(c));
    out.holds = Integer(out.n_mn) <= bound * Integer(out.n_m) * Integer(out.n_n);
    return out;
}

long calibrate_submultiplicative_c(const std::vector<Rational>& ts, long grid_total, int depth,
                                   SpectrumContext& ctx, Side side) {
    for (long c = 0; c <= 64; ++c) {
        bool all = true;
        for (const auto& t : ts)
            for (long m = 1; all && m < grid_total; ++m)
                for (long n = m; all && m + n <= grid_total; ++n)
                    all = check_submultiplicative(t, m, n, c, depth, ctx, side).holds;
        if (all) return c;
    }
    throw std::runtime_error("calibrate_submultiplicative_c: no finite c found");
}

DimensionEstimate estimate_dimension(const Rational& t, long r_max, int depth, long c,
                                     SpectrumContext& ctx, Side side,
                                     const Rational& lower_bound) {
    if (r_max < 2) throw std::invalid_argument("estimate_dimension: r_max must be >= 2");
    DimensionEstimate est;
    est.t = t;
    est.r_max = r_max;
    est.c_used = c;
    est.lower_bound = lower_bound;
    std::optional<Rational> best;
    bool saw_zero = false;
    Integer ac;
    mpz_ui_pow_ui(ac.get_mpz_t(), static_cast<unsigned long>(ctx.model().alphabet_size()),
                  static_cast<unsigned long>(c));
    for (long r = 1; r <= r_max; ++r) {
        const auto& cr = count_sublevel(t, r, depth, ctx, side).record;
        DimensionEntry e;
        e.r = r;
        e.lower_count = cr.lower_count;
        e.upper_count = cr.upper_count;
        if (cr.upper_count == 0) {
            saw_zero = true;
        } else {
            Enclosure lg = log_enclosure(Rational(ac * Integer(cr.upper_count)));
            e.log_upper_over_r = Enclosure(lg.lo / r, lg.hi / r);
            if (!best || e.log_upper_over_r->hi < *best) best = e.log_upper_over_r->hi;
        }
        est.entries.push_back(std::move(e));
    }
    est.upper_bound = saw_zero ? Rational(0) : (best ? *best : Rational(0));
    if (est.upper_bound < est.lower_bound) est.upper_bound = est.lower_bound;
    return est;
}

SliceResult spectrum_slice(const Rational& t, int period_max, const Rational& tol,
                           SpectrumContext& ctx) {
    if (period_max < 1) throw std::invalid_argument("spectrum_slice: period_max >= 1");
    const auto& T = ctx.model().transitions();
    std::vector<Word> necklaces;
    enumerate_admissible(
        T,
        [&](const Word& w) {
            if (!T.allowed(w.back(), w.front())) return false;
            const auto& ls = w.letters();
            const size_t p = ls.size();
            // primitive: not a power of a shorter word
            for (size_t d = 1; d < p; ++d)
                if (p % d == 0) {
                    bool pw = true;
                    for (size_t i = d; i < p && pw; ++i) pw = ls[i] == ls[i % d];
                    if (pw) return false;
                }
            // canonical: lexicographically minimal among rotations
            for (size_t s = 1; s < p; ++s)
                for (size_t i = 0; i < p; ++i) {
                    Letter a = ls[(s + i) % p], b = ls[i];
                    if (a != b) {
                        if (a < b) return false;
                        break;
                    }
                }
            return true;
        },
        [&](const Word& w) { return static_cast<int>(w.size()) < period_max; },
        [&](const Word& w) {
            necklaces.push_back(w);
            return true;
        });

    std::vector<std::optional<Enclosure>> vals(necklaces.size());
    parallel_for_index(necklaces.size(), [&](size_t i) {
        vals[i] = markov_value_periodic(necklaces[i], ctx.pot(), ctx.model(), tol);
    });

    std::vector<SliceEntry> kept;
    SliceResult out;
    for (size_t i = 0; i < necklaces.size(); ++i) {
        const Enclosure& v = *vals[i];
        if (v.hi <= t)
            kept.push_back(SliceEntry{v, PeriodicPoint(necklaces[i], 0, T)});
        else if (v.lo <= t)
            out.boundary_warnings.push_back(necklaces[i]);
    }
    std::sort(kept.begin(), kept.end(), [](const SliceEntry& a, const SliceEntry& b) {
        if (a.value.lo != b.value.lo) return a.value.lo < b.value.lo;
        if (a.value.hi != b.value.hi) return a.value.hi < b.value.hi;
        if (a.point.period_word.size() != b.point.period_word.size())
            return a.point.period_word.size() < b.point.period_word.size();
        return a.point.period_word < b.point.period_word;
    });
    for (auto& e : kept) {
        if (!out.values.empty() && out.values.back().value.overlaps(e.value)) continue;
        out.values.push_back(std::move(e));
    }
    return out;
}

}  // namespace spectra
