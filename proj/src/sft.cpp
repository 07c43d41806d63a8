#include "spectra/sft.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace spectra {

std::string Word::str() const {
    std::string s = "(";
    for (size_t i = 0; i < letters_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(static_cast<int>(letters_[i]));
    }
    return s + ")";
}

Word transpose(const Word& w) {
    std::vector<Letter> ls(w.letters().rbegin(), w.letters().rend());
    return Word(std::move(ls));
}

TransitionSet TransitionSet::full(int n) {
    TransitionSet T;
    if (n < 1 || n > 64) throw std::invalid_argument("alphabet size out of range (1..64)");
    T.n_ = n;
    uint64_t row = n == 64 ? ~0ull : (1ull << n) - 1;
    T.rows_.assign(n, row);
    return T;
}

TransitionSet::TransitionSet(int n, const std::vector<std::pair<int, int>>& pairs) {
    if (n < 1 || n > 64) throw std::invalid_argument("alphabet size out of range (1..64)");
    n_ = n;
    rows_.assign(n, 0);
    for (auto [a, b] : pairs) {
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw std::invalid_argument("transition pair out of alphabet range");
        rows_[a] |= 1ull << b;
    }
}

bool TransitionSet::is_full() const {
    uint64_t want = n_ == 64 ? ~0ull : (1ull << n_) - 1;
    return std::all_of(rows_.begin(), rows_.end(), [&](uint64_t r) { return r == want; });
}

std::vector<Letter> TransitionSet::successors(Letter a) const {
    std::vector<Letter> out;
    for (int b = 0; b < n_; ++b)
        if (allowed(a, static_cast<Letter>(b))) out.push_back(static_cast<Letter>(b));
    return out;
}

std::vector<Letter> TransitionSet::predecessors(Letter b) const {
    std::vector<Letter> out;
    for (int a = 0; a < n_; ++a)
        if (allowed(static_cast<Letter>(a), b)) out.push_back(static_cast<Letter>(a));
    return out;
}

void TransitionSet::validate_no_dead_letters() const {
    for (int a = 0; a < n_; ++a) {
        if (rows_[a] == 0)
            throw std::invalid_argument("dead letter (no outgoing transition): " +
                                        std::to_string(a));
        bool incoming = false;
        for (int s = 0; s < n_; ++s) incoming |= allowed(static_cast<Letter>(s), static_cast<Letter>(a));
        if (!incoming)
            throw std::invalid_argument("dead letter (no incoming transition): " +
                                        std::to_string(a));
    }
}

bool TransitionSet::is_mixing() const {
    // Strong connectivity: forward and backward reachability from letter 0.
    auto reach = [&](bool forward) {
        std::vector<bool> seen(n_, false);
        std::vector<Letter> stack{0};
        seen[0] = true;
        while (!stack.empty()) {
            Letter v = stack.back();
            stack.pop_back();
            for (int w = 0; w < n_; ++w) {
                bool edge = forward ? allowed(v, static_cast<Letter>(w))
                                    : allowed(static_cast<Letter>(w), v);
                if (edge && !seen[w]) {
                    seen[w] = true;
                    stack.push_back(static_cast<Letter>(w));
                }
            }
        }
        return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
    };
    if (!reach(true) || !reach(false)) return false;
    // Aperiodicity: gcd of cycle lengths is 1. BFS levels from letter 0; the
    // gcd of (level(u) + 1 - level(v)) over edges u->v gives the period.
    std::vector<int> level(n_, -1);
    level[0] = 0;
    std::vector<Letter> queue{0};
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        Letter u = queue[qi];
        for (int w = 0; w < n_; ++w)
            if (allowed(u, static_cast<Letter>(w)) && level[w] < 0) {
                level[w] = level[u] + 1;
                queue.push_back(static_cast<Letter>(w));
            }
    }
    int g = 0;
    for (int u = 0; u < n_; ++u)
        for (int w = 0; w < n_; ++w)
            if (allowed(static_cast<Letter>(u), static_cast<Letter>(w)))
                g = std::gcd(g, level[u] + 1 - level[w]);
    return std::abs(g) == 1;
}

TransitionSet TransitionSet::reversed() const {
    TransitionSet T;
    T.n_ = n_;
    T.rows_.assign(n_, 0);
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b)
            if (allowed(static_cast<Letter>(a), static_cast<Letter>(b))) T.rows_[b] |= 1ull << a;
    return T;
}

bool is_admissible(const Word& w, const TransitionSet& T) {
    if (w.empty()) throw std::invalid_argument("is_admissible: empty word");
    for (size_t i = 0; i + 1 < w.size(); ++i)
        if (!T.allowed(w[i], w[i + 1])) return false;
    return true;
}

Word concat(const Word& w1, const Word& w2, const TransitionSet& T) {
    if (w1.empty() || w2.empty()) throw std::invalid_argument("concat: empty word");
    if (!T.allowed(w1.back(), w2.front()))
        throw std::invalid_argument("concat: junction not allowed: (" +
                                    std::to_string(static_cast<int>(w1.back())) + "," +
                                    std::to_string(static_cast<int>(w2.front())) + ")");
    std::vector<Letter> ls = w1.letters();
    ls.insert(ls.end(), w2.letters().begin(), w2.letters().end());
    return Word(std::move(ls));
}

namespace {

bool enum_dfs(Word& w, const TransitionSet& T,
              const std::function<bool(const Word&)>& accept,
              const std::function<bool(const Word&)>& extend,
              const std::function<bool(const Word&)>& emit) {
    if (accept(w))
        if (!emit(w)) return false;
    if (!extend(w)) return true;
    Letter last = w.back();
    for (int b = 0; b < T.alphabet_size(); ++b) {
        if (!T.allowed(last, static_cast<Letter>(b))) continue;
        w.push_back(static_cast<Letter>(b));
        bool cont = enum_dfs(w, T, accept, extend, emit);
        w.pop_back();
        if (!cont) return false;
    }
    return true;
}

}  // namespace

void enumerate_admissible(const TransitionSet& T,
                          const std::function<bool(const Word&)>& accept,
                          const std::function<bool(const Word&)>& extend,
                          const std::function<bool(const Word&)>& emit) {
    for (int a = 0; a < T.alphabet_size(); ++a) {
        Word w{};
        w.push_back(static_cast<Letter>(a));
        if (!enum_dfs(w, T, accept, extend, emit)) return;
    }
}

PeriodicPoint::PeriodicPoint(Word w, size_t ph, const TransitionSet& T)
    : period_word(std::move(w)), phase(ph) {
    if (period_word.empty()) throw std::invalid_argument("PeriodicPoint: empty period");
    if (phase >= period_word.size()) throw std::invalid_argument("PeriodicPoint: phase out of range");
    if (!is_admissible(period_word, T) || !T.allowed(period_word.back(), period_word.front()))
        throw std::invalid_argument("PeriodicPoint: cyclic word not admissible");
}

size_t BlockAlphabet::max_block_length() const {
    size_t m = 0;
    for (const auto& b : blocks) m = std::max(m, b.size());
    return m;
}

size_t BlockAlphabet::min_block_length() const {
    size_t m = blocks.empty() ? 0 : blocks.front().size();
    for (const auto& b : blocks) m = std::min(m, b.size());
    return m;
}

BlockAlphabet build_block_alphabet(const std::vector<Word>& blocks,
                                   const TransitionSet& T) {
    if (blocks.empty()) throw std::invalid_argument("build_block_alphabet: no blocks");
    for (const auto& b : blocks)
        if (!is_admissible(b, T))
            throw std::invalid_argument("build_block_alphabet: block not admissible: " + b.str());
    BlockAlphabet out;
    out.blocks = blocks;
    std::string bad;
    for (size_t i = 0; i < blocks.size(); ++i)
        for (size_t j = 0; j < blocks.size(); ++j) {
            if (T.allowed(blocks[i].back(), blocks[j].front()))
                out.glue.emplace_back(static_cast<int>(i), static_cast<int>(j));
            else
                bad += (bad.empty() ? "" : " ") + std::to_string(i) + "->" + std::to_string(j);
        }
    if (!bad.empty())
        throw std::invalid_argument("build_block_alphabet: inadmissible junction pairs: " + bad);
    return out;
}

}  // namespace spectra
