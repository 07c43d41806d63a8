#include "spectra/commands.hpp"

#include <sstream>

#include "spectra/extraction.hpp"
#include "spectra/parallel.hpp"
#include "spectra/sha256.hpp"

namespace spectra {

namespace {

// The thread count never affects results, so it stays out of the manifest
// (equal manifests must mean byte-identical artifacts).
std::map<std::string, std::string> base_params(const ModelChoice& choice, int resolved_cap) {
    std::map<std::string, std::string> p;
    p["model"] = choice.spec;
    if (choice.spec == "classical") p["digit_cap"] = std::to_string(resolved_cap);
    return p;
}

}  // namespace

LoadedModel resolve_model(const ModelChoice& choice, const std::optional<Rational>& level) {
    if (choice.spec == "classical") {
        int cap = choice.digit_cap;
        if (cap == 0) {
            if (!level)
                throw std::invalid_argument(
                    "classical model needs --digit-cap (no level to auto-select from)");
            // Auto cap: digits above ceil(t)+1 force f beyond t in any window.
            cap = static_cast<int>(mpz_get_si(ceil_int(*level).get_mpz_t())) + 1;
            if (cap < 1) cap = 1;
        }
        return LoadedModel{CantorModel::classical(cap), PotentialSpec::classical()};
    }
    return load_model_file(choice.spec);
}

std::string cmd_validate(const ModelChoice& choice) {
    ValidationReport rep;
    try {
        LoadedModel lm = resolve_model(choice, std::nullopt);
        const int depth = lm.model.alphabet_size() <= 3 ? 6 : 5;
        rep.ok = true;
        rep.model_hash = sha256_hex(lm.model.canonical_description());
        rep.potential_hash = sha256_hex(lm.pot.canonical_description());
        rep.alphabet = lm.model.alphabet_size();
        rep.mixing = lm.model.transitions().is_mixing();
        rep.stable_side = lm.model.supports_stable();
        rep.sample_depth = depth;
        rep.c1 = distortion_constant(lm.model, depth);
        if (rep.stable_side) rep.c2 = symmetry_constant(lm.model, depth);
    } catch (const std::invalid_argument& e) {
        rep.ok = false;
        rep.error = e.what();
    }
    return validation_report_json(rep);
}

std::string cmd_slice(const ModelChoice& choice, const Rational& t, int period_max,
                      const Rational& tol) {
    LoadedModel lm = resolve_model(choice, t);
    SpectrumContext ctx(lm.model, lm.pot);
    ctx.enable_disk_cache_from_env();
    SliceResult slice = spectrum_slice(t, period_max, tol, ctx);
    auto params = base_params(choice, lm.model.is_cf() ? lm.model.digit_cap() : 0);
    params["t"] = to_string(t);
    params["period_max"] = std::to_string(period_max);
    params["tol"] = to_string(tol);
    auto manifest = RunManifest::make(lm.model, lm.pot, "slice", std::move(params));
    std::string csv = slice_csv(manifest, slice);
    if (!slice.boundary_warnings.empty()) {
        csv += "# warning: t lies inside the value enclosure of:";
        for (const auto& w : slice.boundary_warnings) csv += " " + w.str();
        csv += "\n";
    }
    return csv;
}

std::string cmd_dimension_curve(const ModelChoice& choice, const Rational& t_min,
                                const Rational& t_max, int steps, long r_max, int depth,
                                long r0, const Rational& tol) {
    if (!(t_min < t_max)) throw std::invalid_argument("dimension-curve: need t_min < t_max");
    if (steps < 2) throw std::invalid_argument("dimension-curve: need steps >= 2");
    LoadedModel lm = resolve_model(choice, t_max);
    SpectrumContext ctx(lm.model, lm.pot);
    ctx.enable_disk_cache_from_env();
    const long c = calibrate_submultiplicative_c({t_max}, std::min<long>(r_max, 8), depth, ctx);

    std::vector<CurveRow> rows;
    Rational running_lower(0);
    for (int i = 0; i < steps; ++i) {
        Rational t = t_min + (t_max - t_min) * Rational(i, steps - 1);
        DimensionEstimate est = estimate_dimension(t, r_max, depth, c, ctx);
        // Certificates transfer upward in t, so the lower column is the
        // running maximum of per-point extraction bounds.
        try {
            ExtractionParams ep;
            ep.t = t;
            ep.eta = Rational(1, 2);
            ep.r0 = r0;
            ep.depth = depth;
            SubshiftCertificate cert = extract_subshift(ep, ctx);
            if (cert.dim_lower > running_lower) running_lower = cert.dim_lower;
        } catch (const NoCertificateError&) {
        }
        CurveRow row;
        row.t = t;
        row.d_lower = running_lower;
        row.d_upper = est.upper_bound;
        row.two_d_clipped_lower = std::min(Rational(1), Rational(2 * running_lower));
        row.two_d_clipped_upper = std::min(Rational(1), Rational(2 * est.upper_bound));
        if (!rows.empty()) {
            // monotone columns; counts and certificates are both monotone in t
            if (row.d_lower < rows.back().d_lower || row.d_upper < rows.back().d_upper)
                throw std::logic_error("dimension-curve: non-monotone column");
        }
        rows.push_back(std::move(row));
    }
    auto params = base_params(choice, lm.model.is_cf() ? lm.model.digit_cap() : 0);
    params["t_min"] = to_string(t_min);
    params["t_max"] = to_string(t_max);
    params["steps"] = std::to_string(steps);
    params["r_max"] = std::to_string(r_max);
    params["depth"] = std::to_string(depth);
    params["r0"] = std::to_string(r0);
    params["c_used"] = std::to_string(c);
    params["tol"] = to_string(tol);
    auto manifest = RunManifest::make(lm.model, lm.pot, "dimension-curve", std::move(params));
    return curve_csv(manifest, rows);
}

std::string cmd_extract(const ModelChoice& choice, const Rational& t, const Rational& eta,
                        long r0, int depth, long certify_len) {
    LoadedModel lm = resolve_model(choice, t);
    SpectrumContext ctx(lm.model, lm.pot);
    ctx.enable_disk_cache_from_env();
    ExtractionParams ep;
    ep.t = t;
    ep.eta = eta;
    ep.r0 = r0;
    ep.depth = depth;
    ep.certify_len = certify_len;
    SubshiftCertificate cert = extract_subshift(ep, ctx);
    auto params = base_params(choice, lm.model.is_cf() ? lm.model.digit_cap() : 0);
    params["t"] = to_string(t);
    params["eta"] = to_string(eta);
    params["r0"] = std::to_string(r0);
    params["depth"] = std::to_string(depth);
    params["certify_len"] = std::to_string(certify_len);
    auto manifest = RunManifest::make(lm.model, lm.pot, "extract", std::move(params));
    return certificate_json(manifest, cert);
}

AnchorsResult cmd_anchors(long r_max, int depth) {
    AnchorsResult out;
    std::ostringstream os;
    auto row = [&](bool pass, const std::string& name, const std::string& detail) {
        os << (pass ? "PASS  " : "FAIL  ") << name << ": " << detail << "\n";
        if (!pass) ++out.rows_failed;
    };

    // Markov anchors: the slice at t=3 with period_max=6.
    {
        LoadedModel lm{CantorModel::classical(2), PotentialSpec::classical()};
        SpectrumContext ctx(lm.model, lm.pot);
        const Rational tol(1, Integer(1) << 40);
        SliceResult slice = spectrum_slice(Rational(3), 6, tol, ctx);
        auto contains_sqrt_of = [&](const Rational& square) {
            for (const auto& e : slice.values)
                if (e.value.lo * e.value.lo <= square && e.value.hi * e.value.hi >= square)
                    return true;
            return false;
        };
        row(contains_sqrt_of(Rational(5)), "slice@3 contains sqrt(5)", "2.2360679...");
        row(contains_sqrt_of(Rational(8)), "slice@3 contains 2*sqrt(2)", "2.8284271...");
        row(contains_sqrt_of(Rational(221, 25)), "slice@3 contains sqrt(221)/5", "2.9732137...");
        std::string vals;
        for (const auto& e : slice.values)
            vals += decimal_lower(e.value.lo, 10) + " (" + e.point.period_word.str() + ") ";
        row(slice.values.size() == 3, "slice@3 period_max=6 has exactly 3 values",
            "found " + std::to_string(slice.values.size()) + ": " + vals +
                "- the period-6 words realize sqrt(1517)/13 and sqrt(7565)/29, both < 3");
    }

    // Dimension estimates across the anchor grid.
    for (const auto& ts : {std::string("2.0"), std::string("2.9"), std::string("3.0"),
                           std::string("3.47"), std::string("4.0")}) {
        Rational t = parse_number(ts);
        ModelChoice mc;
        LoadedModel lm = resolve_model(mc, t);
        SpectrumContext ctx(lm.model, lm.pot);
        ctx.enable_disk_cache_from_env();
        DimensionEstimate est = estimate_dimension(t, r_max, depth, 0, ctx);
        std::string detail = "upper_bound = " + decimal_upper(est.upper_bound, 6) +
                             " (cap " + std::to_string(lm.model.digit_cap()) + ")";
        if (ts == "2.0")
            row(est.upper_bound < Rational(1, 20), "estimate@2.0 upper < 0.05", detail);
        else
            os << "INFO  estimate@" << ts << ": " << detail << "\n";
    }

    // Extraction at t=4.0: the digit-{1,2} shift sits below 4.
    {
        ModelChoice mc;
        LoadedModel lm = resolve_model(mc, Rational(4));
        SpectrumContext ctx(lm.model, lm.pot);
        ctx.enable_disk_cache_from_env();
        ExtractionParams ep;
        ep.t = Rational(4);
        ep.eta = Rational(1, 2);
        ep.r0 = 6;
        ep.depth = depth;
        try {
            SubshiftCertificate cert = extract_subshift(ep, ctx);
            row(cert.dim_lower > Rational(2, 5), "extract@4.0 dim_lower > 0.4",
                "dim_lower = " + decimal_lower(cert.dim_lower, 6) + ", delta = " +
                    decimal_lower(cert.delta, 6));
        } catch (const NoCertificateError& e) {
            row(false, "extract@4.0 dim_lower > 0.4", e.what());
        }
    }

    out.report = os.str();
    return out;
}

}  // namespace spectra
