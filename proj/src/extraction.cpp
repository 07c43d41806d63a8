#include "spectra/extraction.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "spectra/parallel.hpp"

namespace spectra {

namespace {

Enclosure div_enclosure(const Enclosure& a, const Enclosure& b) {
    // both positive
    return {a.lo / b.hi, a.hi / b.lo};
}

// Empirical distortion constant with the 3/2 safety multiplier, as a point
// enclosure usable by moran_bounds.
Enclosure c1_in_use(const CantorModel& model) {
    int depth = model.alphabet_size() <= 3 ? 6 : 5;
    Enclosure measured = distortion_constant(model, depth);
    Rational used = measured.hi * Rational(3, 2);
    return Enclosure(used);
}

}  // namespace

long m0_constant(const CantorModel& model, long r0) {
    if (r0 < 1) throw std::invalid_argument("m0_constant: r0 >= 1");
    const auto& rb = model.rates();
    // Equal rates give exact ratios; otherwise enclose ln-quotients.
    Enclosure a = rb.lambda1u == rb.lambda1s
                      ? Enclosure(Rational(1))
                      : div_enclosure(log_enclosure(rb.lambda1u), log_enclosure(rb.lambda1s));
    Enclosure b = rb.lambda2s == rb.lambda2u
                      ? Enclosure(Rational(1))
                      : div_enclosure(log_enclosure(rb.lambda2s), log_enclosure(rb.lambda2u));
    Enclosure theta(std::min(a.lo, b.lo) / 2, std::min(a.hi, b.hi) / 2);
    Enclosure inv_theta = theta.inverse();
    const Rational r_const(1);  // stands in for the transversality constant
    ScaleFamily fam = scale_family(r0, model);
    size_t l1 = fam.words.front().size(), l2 = l1;
    for (const auto& w : fam.words) {
        l1 = std::min(l1, w.size());
        l2 = std::max(l2, w.size());
    }
    Rational ratio(static_cast<long>(l2), static_cast<long>(l1));
    Rational q_hi = (inv_theta.hi + r_const) * ratio;
    long m0 = 3 * mpz_get_si(ceil_int(q_hi).get_mpz_t());
    return std::max(m0, 3L);
}

CriticalWindowReport detect_critical_windows(const std::vector<Word>& block_word,
                                             const Rational& t, long m0,
                                             const PotentialSpec& pot,
                                             const CantorModel& model) {
    if (block_word.empty()) throw std::invalid_argument("detect_critical_windows: empty word");
    const auto& T = model.transitions();
    for (size_t i = 0; i + 1 < block_word.size(); ++i)
        if (!T.allowed(block_word[i].back(), block_word[i + 1].front()))
            throw std::invalid_argument("detect_critical_windows: blocks do not glue at " +
                                        std::to_string(i));

    // Offsets of each block inside the flattened word.
    std::vector<size_t> offset(block_word.size() + 1, 0);
    std::vector<Letter> flat;
    for (size_t i = 0; i < block_word.size(); ++i) {
        offset[i + 1] = offset[i] + block_word[i].size();
        flat.insert(flat.end(), block_word[i].letters().begin(), block_word[i].letters().end());
    }

    auto completion_values = [&](const Word& eta, size_t center) {
        // f enclosures at `center` for a few explicit completions of eta.
        std::vector<Enclosure> out;
        // (a) periodic wrap, when self-gluable
        if (T.allowed(eta.back(), eta.front())) {
            std::vector<Letter> buf;
            for (int rep = 0; rep < 3; ++rep)
                buf.insert(buf.end(), eta.letters().begin(), eta.letters().end());
            out.push_back(window_bounds(
                CylinderWindow(Word(std::move(buf)), eta.size() + center), pot, model));
        }
        // (b)/(c) constant-letter tails on both sides
        for (int letter : {0, model.alphabet_size() - 1}) {
            Letter a = static_cast<Letter>(letter);
            if (!T.allowed(a, a) || !T.allowed(a, eta.front()) || !T.allowed(eta.back(), a))
                continue;
            size_t pad = eta.size() + 4;
            std::vector<Letter> buf(pad, a);
            buf.insert(buf.end(), eta.letters().begin(), eta.letters().end());
            buf.insert(buf.end(), pad, a);
            out.push_back(window_bounds(CylinderWindow(Word(std::move(buf)), pad + center),
                                        pot, model));
        }
        return out;
    };

    CriticalWindowReport report;
    const size_t k = block_word.size();
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = i + 2 * static_cast<size_t>(m0) + 2; j < k; j += 2) {
            size_t mid = (i + j) / 2;
            std::vector<Letter> eta_letters(flat.begin() + offset[i], flat.begin() + offset[j + 1]);
            Word eta{std::vector<Letter>(eta_letters)};
            for (size_t n = 0; n < block_word[mid].size(); ++n) {
                size_t center = offset[mid] - offset[i] + n;
                Enclosure e = window_bounds(CylinderWindow(eta, center), pot, model);
                if (e.lo > t || e.hi < t) continue;  // no straddle
                CriticalWindow cw;
                cw.i = i;
                cw.j = j;
                cw.pos_in_block = n;
                cw.radius = static_cast<long>((j - i) / 2);
                cw.value = e;
                bool has_low = false, has_high = false;
                for (const auto& v : completion_values(eta, center)) {
                    has_low = has_low || v.hi <= t;
                    has_high = has_high || v.lo >= t;
                }
                cw.certified = has_low && has_high;
                report.windows.push_back(std::move(cw));
            }
        }
    }
    return report;
}

CertifyResult certify_delta(const BlockAlphabet& blocks, const Rational& t, long certify_len,
                            const PotentialSpec& pot, const CantorModel& model) {
    if (blocks.blocks.empty()) throw std::invalid_argument("certify_delta: no blocks");
    const long lmax = static_cast<long>(blocks.max_block_length());
    const long lmin = static_cast<long>(blocks.min_block_length());
    if (certify_len < 3 * lmax)
        throw std::invalid_argument("certify_delta: certify_len must be >= 3 * max block length (" +
                                    std::to_string(3 * lmax) + ")");

    // Covering: any position of any concatenation sits in the middle block of
    // a (2K+1)-block context; wrapping that context cyclically changes f by
    // at most the variation bound at K full blocks of agreement. The letter
    // budget fixes K: every (2K+1)-block context has at most (2K+1)*lmax
    // letters, which must stay within certify_len.
    const long K = std::max(1L, (certify_len / lmax - 1) / 2);
    const long d = K * lmin;
    const Rational slack = pot.variation_bound(model, d);

    // All primitive, rotation-canonical block tuples of at most 2K+1 blocks
    // within the letter budget.
    std::vector<std::vector<int>> tuples;
    const int m = static_cast<int>(blocks.blocks.size());
    const size_t max_blocks = static_cast<size_t>(2 * K + 1);
    std::vector<int> cur;
    std::function<void(long)> rec = [&](long used) {
        if (!cur.empty()) tuples.push_back(cur);
        if (cur.size() == max_blocks || used + lmin > certify_len) return;
        for (int i = 0; i < m; ++i) {
            long len = static_cast<long>(blocks.blocks[i].size());
            if (used + len > certify_len) continue;
            cur.push_back(i);
            rec(used + len);
            cur.pop_back();
        }
    };
    rec(0);
    auto canonical_primitive = [](const std::vector<int>& v) {
        const size_t p = v.size();
        for (size_t dd = 1; dd < p; ++dd)
            if (p % dd == 0) {
                bool pw = true;
                for (size_t i = dd; i < p && pw; ++i) pw = v[i] == v[i % dd];
                if (pw) return false;
            }
        for (size_t s = 1; s < p; ++s)
            for (size_t i = 0; i < p; ++i) {
                int a = v[(s + i) % p], b = v[i];
                if (a != b) {
                    if (a < b) return false;
                    break;
                }
            }
        return true;
    };
    tuples.erase(std::remove_if(tuples.begin(), tuples.end(),
                                [&](const std::vector<int>& v) { return !canonical_primitive(v); }),
                 tuples.end());

    const Rational eval_tol(1, 1 << 20);
    std::vector<Enclosure> vals(tuples.size());
    parallel_for_index(tuples.size(), [&](size_t i) {
        std::vector<Letter> ls;
        for (int bi : tuples[i])
            ls.insert(ls.end(), blocks.blocks[bi].letters().begin(),
                      blocks.blocks[bi].letters().end());
        vals[i] = markov_value_periodic(Word(std::move(ls)), pot, model, eval_tol);
    });

    CertifyResult out;
    out.agreement_depth = d;
    out.tail_slack = slack;
    size_t arg_hi = 0;
    Rational max_hi = vals.empty() ? Rational(0) : vals[0].hi;
    Rational max_lo = vals.empty() ? Rational(0) : vals[0].lo;
    for (size_t i = 0; i < tuples.size(); ++i) {
        if (vals[i].hi > max_hi) {
            max_hi = vals[i].hi;
            arg_hi = i;
        }
        max_lo = std::max(max_lo, vals[i].lo);
        out.checked.push_back(CheckedWord{tuples[i], vals[i]});
    }
    out.pre_slack_sup = max_hi;
    out.sup_bound = Enclosure(max_lo, max_hi + slack);
    out.delta = t - out.sup_bound.hi;
    if (out.delta <= 0)
        throw NotBelowThresholdError(
            "certify_delta: certified sup " + to_string(out.sup_bound.hi) +
                " does not sit below t = " + to_string(t),
            tuples[arg_hi]);
    return out;
}

namespace {

// Largest strongly connected subgraph (Tarjan); nodes without a cycle through
// them are discarded. Ties by smallest node index set (lexicographic).
std::vector<int> largest_scc(int n, const std::vector<std::vector<int>>& adj) {
    std::vector<int> index(n, -1), low(n, 0), stack;
    std::vector<bool> on_stack(n, false);
    std::vector<std::vector<int>> comps;
    int counter = 0;
    std::function<void(int)> strongconnect = [&](int v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (int w : adj[v]) {
            if (index[w] < 0) {
                strongconnect(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<int> comp;
            for (;;) {
                int w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.push_back(w);
                if (w == v) break;
            }
            std::sort(comp.begin(), comp.end());
            comps.push_back(std::move(comp));
        }
    };
    for (int v = 0; v < n; ++v)
        if (index[v] < 0) strongconnect(v);

    auto has_cycle = [&](const std::vector<int>& comp) {
        if (comp.size() > 1) return true;
        int v = comp.front();
        return std::find(adj[v].begin(), adj[v].end(), v) != adj[v].end();
    };
    std::vector<int> best;
    for (const auto& comp : comps) {
        if (!has_cycle(comp)) continue;
        if (comp.size() > best.size() || (comp.size() == best.size() && comp < best)) best = comp;
    }
    return best;
}

std::vector<Word> prefix_free(std::vector<Word> words) {
    std::sort(words.begin(), words.end(),
              [](const Word& a, const Word& b) {
                  return a.size() != b.size() ? a.size() < b.size() : a < b;
              });
    std::vector<Word> kept;
    for (const auto& w : words) {
        bool shadowed = false;
        for (const auto& k : kept) {
            if (k.size() > w.size()) break;
            if (std::equal(k.letters().begin(), k.letters().end(), w.letters().begin()))
                shadowed = true;
            if (shadowed) break;
        }
        if (!shadowed) kept.push_back(w);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

}  // namespace

SubshiftCertificate extract_subshift(const ExtractionParams& params, SpectrumContext& ctx) {
    const CantorModel& model = ctx.model();
    const PotentialSpec& pot = ctx.pot();
    const auto& T = model.transitions();
    if (params.eta <= 0 || params.eta >= 1)
        throw std::invalid_argument("extract_subshift: eta must lie in (0,1)");
    if (params.r0 < 1) throw std::invalid_argument("extract_subshift: r0 >= 1");

    // Spectrum floor estimate for the eps0 schedule.
    Rational min_single;
    bool have_min = false;
    for (int a = 0; a < T.alphabet_size(); ++a) {
        if (!T.allowed(static_cast<Letter>(a), static_cast<Letter>(a))) continue;
        Enclosure v = markov_value_periodic(Word{std::vector<Letter>{static_cast<Letter>(a)}},
                                            pot, model, Rational(1, 1 << 20));
        if (!have_min || v.hi < min_single) min_single = v.hi;
        have_min = true;
    }
    if (!have_min) {
        // no fixed point; fall back to the shortest periodic words
        for (int a = 0; a < T.alphabet_size(); ++a)
            for (Letter b : T.successors(static_cast<Letter>(a))) {
                if (!T.allowed(b, static_cast<Letter>(a))) continue;
                Enclosure v = markov_value_periodic(
                    Word{std::vector<Letter>{static_cast<Letter>(a), b}}, pot, model,
                    Rational(1, 1 << 20));
                if (!have_min || v.hi < min_single) min_single = v.hi;
                have_min = true;
            }
    }
    if (!have_min) throw NoCertificateError("extract_subshift: no short periodic point exists");
    const Rational base = params.t - min_single;
    if (base <= 0)
        throw NoCertificateError("extract_subshift: t = " + to_string(params.t) +
                                 " is at or below the spectrum floor estimate " +
                                 to_string(min_single));

    const Enclosure c1 = c1_in_use(model);
    const Rational target_upper =
        estimate_dimension(params.t, std::max(params.r0, 4L), params.depth, 0, ctx).upper_bound;
    const Rational target = (1 - params.eta) * target_upper;

    std::optional<SubshiftCertificate> best;
    std::string failures;

    for (int k = 3; k <= 10; ++k) {
        const Rational eps0 = base * pow_int(Rational(1, 2), k);
        const Rational level = params.t - eps0;
        const auto& count = count_sublevel(level, params.r0, params.depth, ctx);
        const std::vector<Word>& survivors = count.survivors;
        if (survivors.empty()) {
            failures += "eps0=" + to_string(eps0) + ": no survivors; ";
            continue;
        }

        // Junction graph: edge i->j when every window near the junction of
        // survivors[i]·survivors[j] stays below t - eps0 (Unknowns = absent).
        // Windows are taken in the wrapped pair context so both arms carry
        // real content; the exhaustive certification below remains the actual
        // guarantee for arbitrary concatenations.
        const int n = static_cast<int>(survivors.size());
        std::vector<std::vector<int>> adj(n);
        std::vector<std::vector<char>> edge(n, std::vector<char>(n, 0));
        {
            std::vector<std::pair<int, int>> pairs;
            pairs.reserve(static_cast<size_t>(n) * n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) pairs.emplace_back(i, j);
            std::vector<char> ok(pairs.size(), 0);
            parallel_for_index(pairs.size(), [&](size_t pi) {
                auto [i, j] = pairs[pi];
                const Word &wi = survivors[i], &wj = survivors[j];
                if (!T.allowed(wi.back(), wj.front())) return;
                Word u = concat(wi, wj, T);
                const long reach = static_cast<long>(std::min(wi.size(), wj.size()));
                const long junction = static_cast<long>(wi.size());
                if (T.allowed(wj.back(), wi.front())) {
                    // wrap context u·u·u, centers in the middle copy
                    std::vector<Letter> ls;
                    for (int rep = 0; rep < 3; ++rep)
                        ls.insert(ls.end(), u.letters().begin(), u.letters().end());
                    Word ctx3(std::move(ls));
                    const long base = static_cast<long>(u.size());
                    for (long c = base + junction - reach; c < base + junction + reach; ++c)
                        if (window_bounds(CylinderWindow(ctx3, static_cast<size_t>(c)), pot,
                                          model)
                                .hi > level)
                            return;
                } else {
                    // no wrap: interior centers of the plain pair word
                    const long r2 = std::min<long>(reach, std::min(junction / 2 + 1,
                                                                   reach / 2 + 1));
                    for (long c = junction - r2; c < junction + r2; ++c) {
                        if (c < 0 || c >= static_cast<long>(u.size())) continue;
                        if (window_bounds(CylinderWindow(u, static_cast<size_t>(c)), pot, model)
                                .hi > level)
                            return;
                    }
                }
                ok[pi] = 1;
            });
            for (size_t pi = 0; pi < pairs.size(); ++pi)
                if (ok[pi]) {
                    auto [i, j] = pairs[pi];
                    adj[i].push_back(j);
                    edge[i][j] = 1;
                }
        }

        std::vector<int> scc = largest_scc(n, adj);
        if (scc.empty()) {
            failures += "eps0=" + to_string(eps0) + ": no cycle in junction graph; ";
            continue;
        }

        // A BlockAlphabet needs every ordered pair glued (complete subshift).
        // Peel the SCC greedily to its largest fully connected subset; fall
        // back to hub-routed cycles when peeling collapses.
        std::vector<Word> block_words;
        std::string construction;
        {
            std::vector<int> keep = scc;
            for (;;) {
                int worst = -1;
                long worst_missing = 0;
                for (int v : keep) {
                    long missing = 0;
                    for (int u : keep) missing += (!edge[v][u]) + (!edge[u][v]);
                    if (!edge[v][v]) missing -= 1;  // counted twice above
                    if (missing > worst_missing) {
                        worst_missing = missing;
                        worst = v;
                    }
                }
                if (worst < 0) break;  // fully connected
                keep.erase(std::find(keep.begin(), keep.end(), worst));
                if (keep.empty()) break;
            }
            if (!keep.empty()) {
                for (int i : keep) block_words.push_back(survivors[i]);
                construction = "fully glued survivor subgraph (" + std::to_string(keep.size()) +
                               " of " + std::to_string(scc.size()) + " SCC nodes)";
            }
        }
        if (block_words.empty()) {
            // Hub fallback: cycles through the best-connected node, at most
            // one intermediate, keeping the blocks short.
            int hub = scc.front();
            long best_score = -1;
            for (int v : scc) {
                long in = 0, out = 0;
                for (int u : scc) {
                    in += edge[u][v];
                    out += edge[v][u];
                }
                if (in * out > best_score) {
                    best_score = in * out;
                    hub = v;
                }
            }
            if (edge[hub][hub]) block_words.push_back(survivors[hub]);
            for (int a : scc)
                if (a != hub && edge[hub][a] && edge[a][hub])
                    block_words.push_back(concat(survivors[hub], survivors[a], T));
            block_words = prefix_free(std::move(block_words));
            construction = "hub-routed cycles through survivor " + std::to_string(hub);
        }
        if (block_words.empty()) {
            failures += "eps0=" + to_string(eps0) + ": no glued block set; ";
            continue;
        }

        // Short blocks force a coarse certification tail bound; keep only
        // blocks long enough that the one-block agreement variation fits
        // well inside the eps0 margin (unless that would empty the set).
        {
            long lstar = 1;
            while (lstar < 64 && pot.variation_bound(model, lstar) > eps0 / 3) ++lstar;
            std::vector<Word> filtered;
            for (const auto& w : block_words)
                if (static_cast<long>(w.size()) >= lstar) filtered.push_back(w);
            if (!filtered.empty()) block_words = std::move(filtered);
        }

        BlockAlphabet blocks;
        try {
            blocks = build_block_alphabet(block_words, T);
        } catch (const std::invalid_argument& e) {
            failures += "eps0=" + to_string(eps0) + ": glue failure; ";
            continue;
        }

        long clen = params.certify_len > 0
                        ? params.certify_len
                        : 3 * static_cast<long>(blocks.max_block_length());
        CertifyResult cert;
        try {
            cert = certify_delta(blocks, params.t, clen, pot, model);
        } catch (const NotBelowThresholdError& e) {
            failures += "eps0=" + to_string(eps0) + ": " + e.what() + "; ";
            break;  // smaller eps0 only enlarges the alphabet
        }

        BlockGeometry geom = BlockGeometry::from_blocks(blocks, model, c1);
        MoranBounds mb = moran_bounds(geom, Rational(1, 1 << 20));

        SubshiftCertificate sc;
        sc.blocks = std::move(blocks);
        sc.delta = cert.delta;
        sc.sup_bound = cert.sup_bound;
        sc.dim_lower = mb.lower;
        sc.certify_len = clen;
        sc.checked = std::move(cert.checked);
        sc.pre_slack_sup = cert.pre_slack_sup;
        sc.tail_slack = cert.tail_slack;
        sc.agreement_depth = cert.agreement_depth;
        sc.upper_estimate = target_upper;
        sc.achieved_quality =
            target_upper > 0 ? Rational(sc.dim_lower / target_upper) : Rational(0);
        sc.epsilon0_used = eps0;
        sc.method = construction + "; certified by exhaustive cyclic check (agreement depth " +
                    std::to_string(cert.agreement_depth) + ", tail slack " +
                    to_string(cert.tail_slack) + "); dimension via distortion-adjusted Moran roots";

        if (!best || sc.dim_lower > best->dim_lower) best = std::move(sc);
        if (best->dim_lower >= target) break;
    }

    if (!best)
        throw NoCertificateError(
            "extract_subshift: no certificate at any trial epsilon0 (" + failures + ")");
    return *best;
}

}  // namespace spectra
