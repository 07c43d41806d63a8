#include <doctest.h>

#include <random>
#include <set>

#include "spectra/sft.hpp"

using namespace spectra;

TEST_CASE("admissibility basics") {
    auto full2 = TransitionSet::full(2);
    CHECK(is_admissible(Word{0}, full2));
    CHECK(is_admissible(Word{0, 1, 1, 0}, full2));
    TransitionSet T(2, {{0, 1}, {1, 0}});
    CHECK(is_admissible(Word{0, 1, 0}, T));
    CHECK_FALSE(is_admissible(Word{0, 0}, T));
    CHECK_THROWS_AS(is_admissible(Word{}, T), std::invalid_argument);
}

TEST_CASE("concat respects junctions") {
    auto full2 = TransitionSet::full(2);
    CHECK(concat(Word{0, 1}, Word{1, 0}, full2) == Word{0, 1, 1, 0});
    TransitionSet chain(2, {{0, 1}});
    CHECK(concat(Word{0}, Word{1}, chain) == Word{0, 1});
    TransitionSet T(2, {{0, 1}, {1, 0}});
    CHECK_THROWS_AS(concat(Word{0}, Word{0}, T), std::invalid_argument);
}

TEST_CASE("transpose is an involution") {
    CHECK(transpose(Word{0, 1, 1}) == Word{1, 1, 0});
    CHECK(transpose(Word{1}) == Word{1});
    CHECK(transpose(Word{1, 1, 0, 0}) == Word{0, 0, 1, 1});
    std::mt19937 rng(7);
    for (int it = 0; it < 200; ++it) {
        std::vector<Letter> ls(1 + rng() % 12);
        for (auto& a : ls) a = static_cast<Letter>(rng() % 5);
        Word w(std::move(ls));
        CHECK(transpose(transpose(w)) == w);
        CHECK(transpose(w).size() == w.size());
    }
}

TEST_CASE("enumerate_admissible: order, counts, pruning") {
    auto full2 = TransitionSet::full(2);
    std::vector<Word> got;
    enumerate_admissible(
        full2, [](const Word& w) { return w.size() == 2; },
        [](const Word& w) { return w.size() < 2; },
        [&](const Word& w) {
            got.push_back(w);
            return true;
        });
    CHECK(got == std::vector<Word>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});

    TransitionSet T(2, {{0, 1}, {1, 0}});
    got.clear();
    enumerate_admissible(
        T, [](const Word& w) { return w.size() == 3; },
        [](const Word& w) { return w.size() < 3; },
        [&](const Word& w) {
            got.push_back(w);
            return true;
        });
    CHECK(got == std::vector<Word>{{0, 1, 0}, {1, 0, 1}});

    // full shift over k letters emits exactly k^n words of length n
    for (int k : {2, 3, 4}) {
        auto T2 = TransitionSet::full(k);
        for (int n : {1, 2, 3}) {
            long count = 0;
            enumerate_admissible(
                T2, [&](const Word& w) { return static_cast<int>(w.size()) == n; },
                [&](const Word& w) { return static_cast<int>(w.size()) < n; },
                [&](const Word& w) {
                    CHECK(is_admissible(w, T2));
                    ++count;
                    return true;
                });
            long expect = 1;
            for (int i = 0; i < n; ++i) expect *= k;
            CHECK(count == expect);
        }
    }
}

TEST_CASE("block alphabets: glue evidence and failures") {
    auto full2 = TransitionSet::full(2);
    auto ba = build_block_alphabet({Word{0}, Word{1}}, full2);
    CHECK(ba.glue.size() == 4);

    TransitionSet T(2, {{0, 1}, {1, 0}});
    auto single = build_block_alphabet({Word{0, 1}}, T);
    CHECK(single.glue.size() == 1);

    TransitionSet chain(2, {{0, 1}});
    CHECK_THROWS_WITH_AS(build_block_alphabet({Word{0}, Word{1}}, chain),
                         doctest::Contains("inadmissible junction pairs"),
                         std::invalid_argument);
}

TEST_CASE("block concatenations stay admissible") {
    TransitionSet T(3, {{0, 1}, {1, 0}, {1, 2}, {2, 0}, {0, 0}});
    auto ba = build_block_alphabet({Word{0, 0}, Word{0, 1, 0}, Word{1, 2, 0}}, T);

    // exhaustive up to 3 blocks
    const size_t m = ba.blocks.size();
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j)
            for (size_t k = 0; k < m; ++k) {
                Word w = concat(concat(ba.blocks[i], ba.blocks[j], T), ba.blocks[k], T);
                CHECK(is_admissible(w, T));
            }
    // random up to 6 blocks
    std::mt19937 rng(11);
    for (int it = 0; it < 100; ++it) {
        Word w = ba.blocks[rng() % m];
        int reps = 1 + rng() % 5;
        for (int s = 0; s < reps; ++s) w = concat(w, ba.blocks[rng() % m], T);
        CHECK(is_admissible(w, T));
    }
}

TEST_CASE("periodic points validate their wrap") {
    auto full2 = TransitionSet::full(2);
    CHECK_NOTHROW(PeriodicPoint(Word{0, 1}, 0, full2));
    TransitionSet chain(2, {{0, 1}});
    CHECK_THROWS_AS(PeriodicPoint(Word{0, 1}, 0, chain), std::invalid_argument);
    PeriodicPoint pp(Word{0, 1, 1}, 1, full2);
    CHECK(pp.at(0) == 1);
    CHECK(pp.at(1) == 1);
    CHECK(pp.at(2) == 0);
    CHECK(pp.at(-1) == 0);
}

TEST_CASE("mixing detection") {
    CHECK(TransitionSet::full(2).is_mixing());
    TransitionSet bip(2, {{0, 1}, {1, 0}});  // strongly connected, period 2
    CHECK_FALSE(bip.is_mixing());
    TransitionSet golden(2, {{0, 0}, {0, 1}, {1, 0}});
    CHECK(golden.is_mixing());
    TransitionSet dis(2, {{0, 0}, {1, 1}});
    CHECK_FALSE(dis.is_mixing());
    CHECK_THROWS_AS(TransitionSet(2, {{0, 1}}).validate_no_dead_letters(),
                    std::invalid_argument);
}
