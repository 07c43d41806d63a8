/* commands.hpp -- the command surface behind the CLI: each command resolves
 * its model, runs the computation, and returns the full artifact as a string
 * (with the run manifest embedded). The CLI binary is a thin flag wrapper.
 */

#ifndef SPECTRA_COMMANDS_HPP_
#define SPECTRA_COMMANDS_HPP_

#include <optional>
#include <string>

#include "spectra/io.hpp"

namespace spectra {

// "classical" (with digit_cap, possibly auto-selected from t) or a file path.
struct ModelChoice {
    std::string spec = "classical";
    int digit_cap = 0;  // 0 = auto: ceil(t) + 1 for the command's level t
};

LoadedModel resolve_model(const ModelChoice& choice, const std::optional<Rational>& level);

std::string cmd_validate(const ModelChoice& choice);

std::string cmd_slice(const ModelChoice& choice, const Rational& t, int period_max,
                      const Rational& tol);

std::string cmd_dimension_curve(const ModelChoice& choice, const Rational& t_min,
                                const Rational& t_max, int steps, long r_max, int depth,
                                long r0, const Rational& tol);

std::string cmd_extract(const ModelChoice& choice, const Rational& t, const Rational& eta,
                        long r0, int depth, long certify_len);  // throws NoCertificateError

struct AnchorsResult {
    std::string report;
    int rows_failed = 0;
};
AnchorsResult cmd_anchors(long r_max, int depth);

}  // namespace spectra

#endif  // SPECTRA_COMMANDS_HPP_
