// spectra -- command line surface for the subshift spectra library.
//
// Subcommands: validate, anchors, slice, dimension-curve, extract.
// Exit codes: 0 success, 2 validation failure, 3 no certificate, 4 usage.

#include <CLI11.hpp>

#include <iostream>

#include "spectra/commands.hpp"
#include "spectra/extraction.hpp"
#include "spectra/parallel.hpp"

using namespace spectra;

int main(int argc, char** argv) {
    CLI::App app{"Dynamical Markov/Lagrange spectra over subshifts of finite type"};
    app.require_subcommand(1);

    std::string model = "classical";
    int digit_cap = 0;
    int threads = 1;
    std::string out;
    std::string t_str, t_min_str, t_max_str, tol_str = "1/1000000000";
    int steps = 26, depth = 14, period_max = 6;
    long r_max = 10, r0 = 5;
    long certify_len = 0;
    std::string eta_str = "1/2";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--model", model, "'classical' or a model file path");
        cmd->add_option("--digit-cap", digit_cap,
                        "digit cap for the classical model (0 = auto from t)");
        cmd->add_option("--threads", threads, "worker cap for parallel stages");
        cmd->add_option("--out", out, "output file ('-' = stdout)");
        cmd->add_option("--tol", tol_str, "enclosure width target (rational or decimal)");
    };

    CLI::App* validate = app.add_subcommand("validate", "load and validate a model file");
    add_common(validate);

    CLI::App* anchors = app.add_subcommand(
        "anchors", "check the built-in classical model against its anchor table");
    add_common(anchors);
    anchors->add_option("--r-max", r_max, "scale cap for the anchor estimates");
    anchors->add_option("--depth", depth, "verdict search depth");

    CLI::App* slice = app.add_subcommand("slice", "certified spectrum values below t");
    add_common(slice);
    slice->add_option("--t", t_str, "threshold")->required();
    slice->add_option("--period-max", period_max, "maximum period of witness orbits");

    CLI::App* curve = app.add_subcommand("dimension-curve",
                                         "dimension bounds on a grid of thresholds");
    add_common(curve);
    curve->add_option("--t-min", t_min_str)->required();
    curve->add_option("--t-max", t_max_str)->required();
    curve->add_option("--steps", steps, "grid points (>= 2)");
    curve->add_option("--r-max", r_max, "scale cap for counts");
    curve->add_option("--depth", depth, "verdict search depth");
    curve->add_option("--r0", r0, "base scale for the lower-bound extraction");

    CLI::App* extract = app.add_subcommand("extract",
                                           "certified complete-subshift extraction below t");
    add_common(extract);
    extract->add_option("--t", t_str, "threshold")->required();
    extract->add_option("--eta", eta_str, "quality target in (0,1)");
    extract->add_option("--r0", r0, "base scale for the survivor alphabet");
    extract->add_option("--depth", depth, "verdict search depth");
    extract->add_option("--certify-len", certify_len,
                        "cyclic certification letter budget (0 = auto)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 4;
    }

    set_thread_count(threads);
    ModelChoice choice{model, digit_cap};

    try {
        if (*validate) {
            std::string rep = cmd_validate(choice);
            write_artifact(out, rep);
            return rep.find("\"ok\": true") != std::string::npos ? 0 : 2;
        }
        if (*anchors) {
            AnchorsResult res = cmd_anchors(r_max, depth);
            write_artifact(out, res.report);
            return res.rows_failed == 0 ? 0 : 2;
        }
        if (*slice) {
            write_artifact(out, cmd_slice(choice, parse_number(t_str), period_max,
                                          parse_number(tol_str)));
            return 0;
        }
        if (*curve) {
            write_artifact(out, cmd_dimension_curve(choice, parse_number(t_min_str),
                                                    parse_number(t_max_str), steps, r_max,
                                                    depth, r0, parse_number(tol_str)));
            return 0;
        }
        if (*extract) {
            write_artifact(out, cmd_extract(choice, parse_number(t_str), parse_number(eta_str),
                                            r0, depth, certify_len));
            return 0;
        }
    } catch (const NoCertificateError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 4;
}
