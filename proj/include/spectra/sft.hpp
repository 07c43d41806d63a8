/* sft.hpp -- subshifts of finite type: alphabets, transition sets, admissible
 * words, and complete subshifts built from block alphabets.
 *
 * Letters are dense indices 0..size-1; user-facing labels (e.g. continued
 * fraction digits, which are letter+1) live in the model layer only.
 */

#ifndef SPECTRA_SFT_HPP_
#define SPECTRA_SFT_HPP_

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spectra {

using Letter = uint8_t;

struct Alphabet {
    int size = 0;

    explicit Alphabet(int n) : size(n) {
        if (n < 1 || n > 255) throw std::invalid_argument("alphabet size out of range");
    }
};

class Word {
public:
    Word() = default;
    explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}
    Word(std::initializer_list<int> ls) {
        letters_.reserve(ls.size());
        for (int v : ls) letters_.push_back(static_cast<Letter>(v));
    }

    size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    Letter operator[](size_t i) const { return letters_[i]; }
    Letter front() const { return letters_.front(); }
    Letter back() const { return letters_.back(); }
    const std::vector<Letter>& letters() const { return letters_; }

    void push_back(Letter a) { letters_.push_back(a); }
    void pop_back() { letters_.pop_back(); }

    // Word with the last letter dropped (the alpha* of scale families).
    Word parent() const {
        Word w(*this);
        w.pop_back();
        return w;
    }

    bool operator==(const Word& o) const = default;
    auto operator<=>(const Word& o) const = default;

    std::string str() const;  // e.g. "(2,2,1,1)" printing letter+1 is the model's job; this prints raw letters

private:
    std::vector<Letter> letters_;
};

// Reversal; transpose(transpose(w)) == w.
Word transpose(const Word& w);

class TransitionSet {
public:
    // Full shift over n letters.
    static TransitionSet full(int n);
    // Explicit pair list.
    TransitionSet(int n, const std::vector<std::pair<int, int>>& pairs);

    int alphabet_size() const { return n_; }
    bool allowed(Letter a, Letter b) const { return rows_[a] >> b & 1u; }
    bool is_full() const;

    // Letters reachable in one step from a, in increasing order.
    std::vector<Letter> successors(Letter a) const;
    std::vector<Letter> predecessors(Letter b) const;

    // No dead letters: every letter has at least one outgoing and one incoming
    // transition. Throws std::invalid_argument otherwise (with the letter).
    void validate_no_dead_letters() const;
    // Strong connectivity + aperiodicity of the transition digraph.
    bool is_mixing() const;

    TransitionSet reversed() const;

    bool operator==(const TransitionSet&) const = default;

private:
    TransitionSet() = default;
    int n_ = 0;
    std::vector<uint64_t> rows_;  // rows_[a] bit b = allowed(a,b); n <= 64
};

bool is_admissible(const Word& w, const TransitionSet& T);

// Concatenation; throws std::invalid_argument naming the junction pair if
// (last(w1), first(w2)) is not allowed.
Word concat(const Word& w1, const Word& w2, const TransitionSet& T);

// Depth-first enumeration of admissible words in lexicographic order.
// `extend` must be monotone: extend(w)==false implies extend(w')==false for
// every extension w' (caller-asserted; this is the pruning contract).
// Emits exactly the words with accept(w)==true among those explored.
// Returning false from `emit` stops the enumeration early.
void enumerate_admissible(const TransitionSet& T,
                          const std::function<bool(const Word&)>& accept,
                          const std::function<bool(const Word&)>& extend,
                          const std::function<bool(const Word&)>& emit);

struct PeriodicPoint {
    Word period_word;
    size_t phase = 0;

    PeriodicPoint(Word w, size_t ph, const TransitionSet& T);

    // Letter at absolute position i of the bi-infinite sequence (phase shifts
    // the indexing: position 0 carries period_word[phase]).
    Letter at(long i) const {
        long n = static_cast<long>(period_word.size());
        long k = (static_cast<long>(phase) + i) % n;
        if (k < 0) k += n;
        return period_word[static_cast<size_t>(k)];
    }
};

struct BlockAlphabet {
    std::vector<Word> blocks;
    // Glue evidence: verified junction pairs (i,j) meaning blocks[i]·blocks[j]
    // is admissible; always all |blocks|^2 pairs for a constructed value.
    std::vector<std::pair<int, int>> glue;

    size_t max_block_length() const;
    size_t min_block_length() const;
};

// Verifies all |blocks|^2 junctions; throws std::invalid_argument listing the
// inadmissible ordered pairs when any junction fails.
BlockAlphabet build_block_alphabet(const std::vector<Word>& blocks,
                                   const TransitionSet& T);

}  // namespace spectra

#endif  // SPECTRA_SFT_HPP_
