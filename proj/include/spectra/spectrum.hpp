/* spectrum.hpp -- sublevel-set machinery: certified survival verdicts for
 * cylinders against a threshold t, the counting families C_u(t,r) with
 * two-sided counts, submultiplicativity checks, dimension estimates, and
 * periodic-point slices of the spectrum.
 *
 * Verdicts are conservative three-valued: Dies and Survives are certified
 * (closed refutation tree / explicit periodic witness), Unknown is honest.
 */

#ifndef SPECTRA_SPECTRUM_HPP_
#define SPECTRA_SPECTRUM_HPP_

#include <array>
#include <atomic>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "spectra/potential.hpp"

namespace spectra {

enum class Verdict { survives, dies, unknown };

struct SurvivalVerdict {
    Verdict verdict = Verdict::unknown;
    // Survives: a periodic completion whose Markov value is certified <= t.
    std::optional<Word> witness_period;
    std::optional<Enclosure> witness_value;
    // Dies: a representative violated window (the full certificate is the
    // closed refutation tree, which is not materialized).
    std::optional<Word> refuted_window;
};

struct CountRecord {
    Rational t;
    long r = 0;
    long lower_count = 0;  // certified members (Survives)
    long upper_count = 0;  // Survives + Unknown
};

struct CountResult {
    CountRecord record;
    std::vector<Word> survivors;
    std::vector<Word> unknowns;
};

struct DimensionEntry {
    long r = 0;
    long lower_count = 0;
    long upper_count = 0;
    // ln(|A|^c * upper_count)/r; absent when upper_count == 0.
    std::optional<Enclosure> log_upper_over_r;
};

struct DimensionEstimate {
    Rational t;
    long r_max = 0;
    std::vector<DimensionEntry> entries;
    Rational lower_bound;  // certified, from an extracted subshift (or 0)
    Rational upper_bound;  // min over r of ln(|A|^c * upper)/r (hi endpoint)
    long c_used = 0;
};

// Shared caches and counters for a fixed (model, potential) pair. Safe for
// concurrent use; all cached values are pure functions of their keys, so the
// final state is schedule-independent.
class SpectrumContext {
public:
    SpectrumContext(const CantorModel& model, const PotentialSpec& pot);

    const CantorModel& model() const { return *model_; }
    const PotentialSpec& pot() const { return *pot_; }

    // Verdict statistics since construction (for reporting).
    long stat(Verdict v) const { return stats_[static_cast<int>(v)].load(); }

    // Content-addressed on-disk verdict cache rooted at $SPECTRA_CACHE_DIR
    // (enabled when the variable is set; safe to delete at any time).
    void enable_disk_cache_from_env();

private:
    friend struct EngineAccess;
    const CantorModel* model_;
    const PotentialSpec* pot_;
    std::string instance_key_;  // hash of model+potential descriptions

    mutable std::mutex mu_;
    std::unordered_map<std::string, SurvivalVerdict> verdicts_;
    std::unordered_map<std::string, bool> refutations_;
    std::map<std::string, CountResult> counts_;
    mutable std::array<std::atomic<long>, 3> stats_{};
    std::string disk_dir_;
};

// Certified three-valued membership test for I^u(w) meeting K^u_t (stable
// side runs on the transposed word). `depth` bounds both the two-sided
// refutation window length and the witness period length; it is clamped up
// to |w| when smaller.
SurvivalVerdict survives(const Word& w, const Rational& t, int depth,
                         SpectrumContext& ctx, Side side = Side::unstable);

// Enumerates P_r with extension pruning by early Dies verdicts and returns
// certified (lower, upper) counts with the member words.
const CountResult& count_sublevel(const Rational& t, long r, int depth,
                                  SpectrumContext& ctx, Side side = Side::unstable);

struct SubmultiplicativityCheck {
    bool holds = false;
    long n_m = 0, n_n = 0, n_mn = 0;  // upper counts at m, n, m+n
};

// N(t,m+n) <= |A|^c * N(t,m) * N(t,n) on upper counts.
SubmultiplicativityCheck check_submultiplicative(const Rational& t, long m, long n,
                                                 long c, int depth, SpectrumContext& ctx,
                                                 Side side = Side::unstable);

// Smallest integer c >= 0 making every pair m+n <= grid_total pass at every
// threshold in `ts`.
long calibrate_submultiplicative_c(const std::vector<Rational>& ts, long grid_total,
                                   int depth, SpectrumContext& ctx,
                                   Side side = Side::unstable);

DimensionEstimate estimate_dimension(const Rational& t, long r_max, int depth, long c,
                                     SpectrumContext& ctx, Side side = Side::unstable,
                                     const Rational& lower_bound = Rational(0));

struct SliceEntry {
    Enclosure value;
    PeriodicPoint point;
};

struct SliceResult {
    std::vector<SliceEntry> values;  // sorted increasing, deduplicated
    // Periodic points whose value enclosure straddles t (boundary warning).
    std::vector<Word> boundary_warnings;
};

// All distinct certified Markov values <= t realized by periodic points of
// period <= period_max, deduplicated by enclosure overlap after refinement
// to tol.
SliceResult spectrum_slice(const Rational& t, int period_max, const Rational& tol,
                           SpectrumContext& ctx);

}  // namespace spectra

#endif  // SPECTRA_SPECTRUM_HPP_
