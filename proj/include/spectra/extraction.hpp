/* extraction.hpp -- constructive, certificate-producing subshift extraction:
 * from a level t and quality eta, build a block alphabet B_u whose complete
 * subshift sits inside the sublevel set at t - delta for a certified delta,
 * together with a certified dimension lower bound. Also critical-window
 * detection and the m0 contraction-rate constant.
 */

#ifndef SPECTRA_EXTRACTION_HPP_
#define SPECTRA_EXTRACTION_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include "spectra/dimension.hpp"
#include "spectra/spectrum.hpp"

namespace spectra {

struct ExtractionParams {
    Rational t;
    Rational eta;          // target quality in (0,1)
    long r0 = 4;           // base scale for the survivor alphabet
    int depth = 14;        // verdict search depth
    long certify_len = 0;  // max total letters per certified cyclic word;
                           // 0 = auto (3 * max block length)
};

struct CheckedWord {
    std::vector<int> block_tuple;  // indices into the certificate's blocks
    Enclosure value;               // Markov value enclosure of the cyclic word
};

struct SubshiftCertificate {
    BlockAlphabet blocks;
    Rational delta;       // > 0; the subshift sits below t - delta
    Enclosure sup_bound;  // certified sup of f over the closed orbit set
    Rational dim_lower;   // moran_bounds.lower of the block geometry
    long certify_len = 0;
    std::string method;
    // Audit trail: every cyclic block word checked, with its enclosure.
    std::vector<CheckedWord> checked;
    Rational pre_slack_sup;  // max over checked words of value.hi
    Rational tail_slack;     // variation bound added to cover all concatenations
    long agreement_depth = 0;
    // Quality report.
    Rational upper_estimate;
    Rational achieved_quality;  // dim_lower / upper_estimate (0 when upper is 0)
    Rational epsilon0_used;
};

struct CriticalWindow {
    size_t i = 0, j = 0;      // block positions, j-i even and >= 2*m0+2
    size_t pos_in_block = 0;  // position n inside the middle block
    long radius = 0;          // (j-i)/2
    bool certified = false;   // straddle witnessed by completions on both sides
    Enclosure value;
};

struct CriticalWindowReport {
    std::vector<CriticalWindow> windows;
};

class NoCertificateError : public std::runtime_error {
public:
    explicit NoCertificateError(const std::string& msg) : std::runtime_error(msg) {}
};

class NotBelowThresholdError : public std::runtime_error {
public:
    NotBelowThresholdError(const std::string& msg, std::vector<int> tuple)
        : std::runtime_error(msg), violating_tuple(std::move(tuple)) {}
    std::vector<int> violating_tuple;
};

// m0 = 3 * ceil((1/theta + R) * l2(r0)/l1(r0)) with theta from the rate
// bounds, R = 1 a fixed conservative constant, and l1/l2 measured as the
// min/max word length over the scale family P_r0.
long m0_constant(const CantorModel& model, long r0);

// Reports every (i, j, n) whose window enclosure straddles t; `certified`
// entries have completions realizing both sides of the straddle.
CriticalWindowReport detect_critical_windows(const std::vector<Word>& block_word,
                                             const Rational& t, long m0,
                                             const PotentialSpec& pot,
                                             const CantorModel& model);

// Certifies sup f over ALL bi-infinite concatenations of `blocks`: exhaustive
// enclosure check of every cyclic block word with total letter length
// <= certify_len, extended by the variation-decay tail bound. Throws
// NotBelowThresholdError when the certified sup reaches t.
struct CertifyResult {
    Rational delta;
    Enclosure sup_bound;
    Rational pre_slack_sup;
    Rational tail_slack;
    long agreement_depth = 0;
    std::vector<CheckedWord> checked;
};
CertifyResult certify_delta(const BlockAlphabet& blocks, const Rational& t, long certify_len,
                            const PotentialSpec& pot, const CantorModel& model);

// The constructive extraction loop: survivor alphabet at t - eps0, junction
// graph, largest strongly connected piece (hub-routed when not fully glued),
// exhaustive cyclic certification, Moran lower bound; eps0 shrinks along a
// geometric schedule until the quality target (1-eta) * upper estimate is hit
// or certification starts failing, returning the best certificate found.
SubshiftCertificate extract_subshift(const ExtractionParams& params, SpectrumContext& ctx);

}  // namespace spectra

#endif  // SPECTRA_EXTRACTION_HPP_
