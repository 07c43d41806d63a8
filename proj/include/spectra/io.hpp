/* io.hpp -- model-file loading, run manifests, and the CSV/JSON artifact
 * writers. CSV cells are decimal renderings of rational enclosure endpoints
 * rounded outward to 12 digits; JSON carries exact "p/q" strings. Every
 * artifact embeds its manifest, and equal manifests give byte-identical
 * output.
 */

#ifndef SPECTRA_IO_HPP_
#define SPECTRA_IO_HPP_

#include <map>
#include <string>
#include <vector>

#include "spectra/extraction.hpp"
#include "spectra/model.hpp"
#include "spectra/potential.hpp"
#include "spectra/spectrum.hpp"

namespace spectra {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kCsvDigits = 12;

struct LoadedModel {
    CantorModel model;
    PotentialSpec pot;
};

// Parses and validates the JSON model file; throws std::invalid_argument with
// a path-like message on schema or contraction violations.
LoadedModel load_model_file(const std::string& path);
LoadedModel load_model_json_text(const std::string& text);

// "p/q", integer, or decimal ("2.25" -> 9/4).
Rational parse_number(const std::string& s);

struct RunManifest {
    std::string model_hash;
    std::string potential_hash;
    std::string command;
    std::map<std::string, std::string> parameters;
    std::string tool_version = kToolVersion;

    static RunManifest make(const CantorModel& model, const PotentialSpec& pot,
                            const std::string& command,
                            std::map<std::string, std::string> parameters);
    std::string to_json_line() const;  // canonical single-line JSON
};

// --- artifact writers (return the full artifact as a string) -----------------

std::string slice_csv(const RunManifest& m, const SliceResult& slice);
std::string counts_csv(const RunManifest& m, const DimensionEstimate& est);
std::string dimension_estimate_json(const RunManifest& m, const DimensionEstimate& est);

struct CurveRow {
    Rational t;
    Rational d_lower, d_upper;
    Rational two_d_clipped_lower, two_d_clipped_upper;
};
std::string curve_csv(const RunManifest& m, const std::vector<CurveRow>& rows);

std::string certificate_json(const RunManifest& m, const SubshiftCertificate& cert);

struct ValidationReport {
    bool ok = false;
    std::string model_hash, potential_hash;
    int alphabet = 0;
    bool mixing = false;
    bool stable_side = false;
    Enclosure c1, c2;  // empirical constants (c2 only when stable_side)
    int sample_depth = 0;
    std::string error;  // set when !ok
};
std::string validation_report_json(const ValidationReport& rep);

// Writes `content` to `path` ("-" or empty = stdout).
void write_artifact(const std::string& path, const std::string& content);

}  // namespace spectra

#endif  // SPECTRA_IO_HPP_
