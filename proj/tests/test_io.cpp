#include <doctest.h>

#include "spectra/io.hpp"

using namespace spectra;

namespace {

const char* kCfModel = R"({
  "alphabet": 3,
  "transitions": "full",
  "mixing": true,
  "geometry": {"kind": "cf", "digit_cap": 3},
  "potential": {"kind": "classical"}
})";

const char* kBranchModel = R"({
  "alphabet": 2,
  "transitions": "full",
  "geometry": {"kind": "branches", "branches": [
    {"pair": [0,0], "coeffs": ["0", "1/4"], "orientation": "+"},
    {"pair": [0,1], "coeffs": ["0", "1/4"], "orientation": "+"},
    {"pair": [1,0], "coeffs": ["3/4", "1/4"], "orientation": "+"},
    {"pair": [1,1], "coeffs": ["3/4", "1/4"], "orientation": "+"}
  ]},
  "rate_bounds": {"lambda1u": "4", "lambda2u": "4", "lambda1s": "4", "lambda2s": "4"},
  "potential": {"kind": "table", "radius": 1, "kappa": "2", "rho": "1/2", "values": {
    "0,0,0": "1", "0,0,1": "1", "0,1,0": "2", "0,1,1": "2",
    "1,0,0": "1", "1,0,1": "3/2", "1,1,0": "2", "1,1,1": "5/2"
  }}
})";

}  // namespace

TEST_CASE("number parsing") {
    CHECK(parse_number("3") == Rational(3));
    CHECK(parse_number("2.25") == Rational(9, 4));
    CHECK(parse_number("-0.5") == Rational(-1, 2));
    CHECK(parse_number("7/3") == Rational(7, 3));
    CHECK_THROWS_AS(parse_number("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_number("1/0"), std::invalid_argument);
}

TEST_CASE("model file round trips") {
    auto lm = load_model_json_text(kCfModel);
    CHECK(lm.model.is_cf());
    CHECK(lm.model.digit_cap() == 3);
    CHECK(lm.pot.is_classical());

    auto bm = load_model_json_text(kBranchModel);
    CHECK_FALSE(bm.model.is_cf());
    CHECK(cylinder_size(Word{0, 1}, bm.model) == Rational(1, 16));
    CHECK_FALSE(bm.pot.is_classical());
}

TEST_CASE("model file schema errors carry paths") {
    CHECK_THROWS_WITH_AS(load_model_json_text("{}"), doctest::Contains("alphabet"),
                         std::invalid_argument);
    // non-contraction branch
    std::string bad = R"({
      "alphabet": 1, "transitions": "full",
      "geometry": {"kind": "branches", "branches": [
        {"pair": [0,0], "coeffs": ["0", "3/2"], "orientation": "+"}]},
      "rate_bounds": {"lambda1u": "2", "lambda2u": "2", "lambda1s": "2", "lambda2s": "2"},
      "potential": {"kind": "table", "radius": 0, "values": {"0": "1"}}
    })";
    CHECK_THROWS_WITH_AS(load_model_json_text(bad), doctest::Contains("contraction"),
                         std::invalid_argument);
    // missing table entry
    std::string missing = R"({
      "alphabet": 2, "transitions": "full",
      "geometry": {"kind": "branches", "branches": [
        {"pair": [0,0], "coeffs": ["0", "1/4"], "orientation": "+"},
        {"pair": [0,1], "coeffs": ["0", "1/4"], "orientation": "+"},
        {"pair": [1,0], "coeffs": ["3/4", "1/4"], "orientation": "+"},
        {"pair": [1,1], "coeffs": ["3/4", "1/4"], "orientation": "+"}]},
      "rate_bounds": {"lambda1u": "4", "lambda2u": "4", "lambda1s": "4", "lambda2s": "4"},
      "potential": {"kind": "table", "radius": 1, "values": {"0,0,0": "1"}}
    })";
    CHECK_THROWS_WITH_AS(load_model_json_text(missing), doctest::Contains("missing entries"),
                         std::invalid_argument);
    // mixing declared but false
    std::string notmix = R"({
      "alphabet": 2, "transitions": [[0,1],[1,0]], "mixing": true,
      "geometry": {"kind": "cf", "digit_cap": 2}
    })";
    CHECK_THROWS_WITH_AS(load_model_json_text(notmix), doctest::Contains("mixing"),
                         std::invalid_argument);
}

TEST_CASE("manifest determinism and embedding") {
    auto lm = load_model_json_text(kCfModel);
    auto m1 = RunManifest::make(lm.model, lm.pot, "slice", {{"t", "3"}, {"period_max", "6"}});
    auto m2 = RunManifest::make(lm.model, lm.pot, "slice", {{"period_max", "6"}, {"t", "3"}});
    CHECK(m1.to_json_line() == m2.to_json_line());

    SpectrumContext ctx(lm.model, lm.pot);
    auto slice = spectrum_slice(Rational(5, 2), 3, Rational(1, 1 << 30), ctx);
    std::string csv = slice_csv(m1, slice);
    CHECK(csv.find("# manifest: ") == 0);
    CHECK(csv.find("value_lo,value_hi,period_word") != std::string::npos);
    CHECK(csv == slice_csv(m1, slice));
}

TEST_CASE("csv decimal rendering is outward") {
    CHECK(decimal_lower(Rational(1, 3), 6) == "0.333333");
    CHECK(decimal_upper(Rational(1, 3), 6) == "0.333334");
    CHECK(decimal_lower(Rational(-1, 3), 6) == "-0.333334");
    CHECK(decimal_upper(Rational(1, 2), 6) == "0.500000");
    CHECK(decimal_lower(Rational(1, 2), 6) == "0.500000");
    CHECK(decimal_upper(Rational(7), 2) == "7.00");
}

TEST_CASE("counts csv and dimension json") {
    auto lm = load_model_json_text(kCfModel);
    SpectrumContext ctx(lm.model, lm.pot);
    auto est = estimate_dimension(Rational(5, 2), 4, 10, 0, ctx);
    auto m = RunManifest::make(lm.model, lm.pot, "estimate", {{"t", "5/2"}});
    std::string csv = counts_csv(m, est);
    CHECK(csv.find("t,r,lower,upper,log_upper_over_r") != std::string::npos);
    std::string js = dimension_estimate_json(m, est);
    CHECK(js.find("\"upper_bound\"") != std::string::npos);
    CHECK(js.find("\"entries\"") != std::string::npos);
}
