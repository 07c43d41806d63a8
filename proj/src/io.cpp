#include "spectra/io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "spectra/sha256.hpp"

namespace spectra {

using nlohmann::json;

Rational parse_number(const std::string& s) {
    if (s.find('/') != std::string::npos) return parse_rational(s);
    auto dot = s.find('.');
    if (dot == std::string::npos) return parse_rational(s);
    std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    bool neg = !ip.empty() && ip[0] == '-';
    if (neg) ip = ip.substr(1);
    if (ip.empty()) ip = "0";
    for (char c : ip + fp)
        if (!isdigit(static_cast<unsigned char>(c)))
            throw std::invalid_argument("bad numeric literal: '" + s + "'");
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
    Integer num = Integer(ip) * scale + (fp.empty() ? Integer(0) : Integer(fp));
    Rational r(num, scale);
    r.canonicalize();
    return neg ? Rational(-r) : r;
}

namespace {

Rational json_rational(const json& j, const std::string& at) {
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
    if (j.is_string()) return parse_number(j.get<std::string>());
    throw std::invalid_argument(at + ": expected a rational as \"p/q\" string or integer");
}

Word parse_word_key(const std::string& key, const std::string& at) {
    std::vector<Letter> ls;
    std::stringstream ss(key);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        int v = std::stoi(tok);
        if (v < 0 || v > 255) throw std::invalid_argument(at + ": letter out of range in '" + key + "'");
        ls.push_back(static_cast<Letter>(v));
    }
    if (ls.empty()) throw std::invalid_argument(at + ": empty word key");
    return Word(std::move(ls));
}

}  // namespace

LoadedModel load_model_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("model file: JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("model file: top level must be an object");
    if (!j.contains("alphabet") || !j["alphabet"].is_number_integer())
        throw std::invalid_argument("model file: 'alphabet' must be an integer");
    const int n = j["alphabet"].get<int>();

    // transitions
    TransitionSet T = TransitionSet::full(n);
    if (j.contains("transitions")) {
        const auto& jt = j["transitions"];
        if (jt.is_string()) {
            if (jt.get<std::string>() != "full")
                throw std::invalid_argument("model file: 'transitions' string must be \"full\"");
        } else if (jt.is_array()) {
            std::vector<std::pair<int, int>> pairs;
            for (const auto& p : jt) {
                if (!p.is_array() || p.size() != 2)
                    throw std::invalid_argument("model file: transitions entries must be [a,b]");
                pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
            }
            T = TransitionSet(n, pairs);
        } else {
            throw std::invalid_argument("model file: 'transitions' must be \"full\" or a pair list");
        }
    }
    if (j.value("mixing", false) && !T.is_mixing())
        throw std::invalid_argument(
            "model file: 'mixing' declared but the transition graph is not mixing");

    if (!j.contains("geometry") || !j["geometry"].is_object())
        throw std::invalid_argument("model file: 'geometry' object required");
    const auto& jg = j["geometry"];
    const std::string kind = jg.value("kind", "");

    std::optional<RateBounds> rates;
    if (j.contains("rate_bounds")) {
        const auto& jr = j["rate_bounds"];
        RateBounds rb;
        rb.lambda1u = json_rational(jr.at("lambda1u"), "rate_bounds.lambda1u");
        rb.lambda2u = json_rational(jr.at("lambda2u"), "rate_bounds.lambda2u");
        rb.lambda1s = json_rational(jr.at("lambda1s"), "rate_bounds.lambda1s");
        rb.lambda2s = json_rational(jr.at("lambda2s"), "rate_bounds.lambda2s");
        rates = rb;
    }

    std::optional<CantorModel> model;
    if (kind == "cf") {
        const int cap = jg.value("digit_cap", 0);
        if (cap < 1) throw std::invalid_argument("geometry.digit_cap: must be >= 1");
        if (!rates) {
            RateBounds rb;
            rb.lambda1u = rb.lambda1s = Rational(64, 25);
            rb.lambda2u = rb.lambda2s = Rational((cap + 1) * (cap + 1));
            rates = rb;
        }
        model = CantorModel::continued_fraction(cap, T, *rates);
    } else if (kind == "branches") {
        if (!rates) throw std::invalid_argument("model file: branch models need 'rate_bounds'");
        if (!jg.contains("branches") || !jg["branches"].is_array())
            throw std::invalid_argument("geometry.branches: array required");
        std::vector<std::vector<std::optional<Branch>>> br(
            n, std::vector<std::optional<Branch>>(n));
        int idx = 0;
        for (const auto& jb : jg["branches"]) {
            std::string at = "geometry.branches[" + std::to_string(idx++) + "]";
            if (!jb.contains("pair") || !jb["pair"].is_array() || jb["pair"].size() != 2)
                throw std::invalid_argument(at + ".pair: [a,b] required");
            int a = jb["pair"][0].get<int>(), b = jb["pair"][1].get<int>();
            if (a < 0 || a >= n || b < 0 || b >= n)
                throw std::invalid_argument(at + ".pair: letter out of range");
            const auto& jc = jb.at("coeffs");
            Branch branch;
            if (jc.size() == 2) {
                AffineBranch ab;
                ab.c0 = json_rational(jc[0], at + ".coeffs[0]");
                ab.c1 = json_rational(jc[1], at + ".coeffs[1]");
                branch.map = ab;
            } else if (jc.size() == 4) {
                MoebiusBranch mb;
                mb.p = json_rational(jc[0], at + ".coeffs[0]");
                mb.q = json_rational(jc[1], at + ".coeffs[1]");
                mb.r = json_rational(jc[2], at + ".coeffs[2]");
                mb.s = json_rational(jc[3], at + ".coeffs[3]");
                branch.map = mb;
            } else {
                throw std::invalid_argument(at + ".coeffs: 2 (affine) or 4 (moebius) entries");
            }
            std::string orient = jb.value("orientation", "+");
            if (orient != "+" && orient != "-")
                throw std::invalid_argument(at + ".orientation: '+' or '-'");
            branch.orientation = orient == "+" ? +1 : -1;
            if (br[a][b]) throw std::invalid_argument(at + ": duplicate branch for pair");
            br[a][b] = branch;
        }
        model = CantorModel::branches(T, std::move(br), *rates);
    } else {
        throw std::invalid_argument("geometry.kind: must be \"cf\" or \"branches\"");
    }

    // potential
    PotentialSpec pot = PotentialSpec::classical();
    if (j.contains("potential")) {
        const auto& jp = j["potential"];
        const std::string pk = jp.value("kind", "");
        if (pk == "classical") {
            pot = PotentialSpec::classical();
        } else if (pk == "table") {
            int radius = jp.value("radius", -1);
            if (radius < 0) throw std::invalid_argument("potential.radius: required, >= 0");
            if (!jp.contains("values") || !jp["values"].is_object())
                throw std::invalid_argument("potential.values: object required");
            std::map<Word, Rational> vals;
            for (const auto& [k, v] : jp["values"].items())
                vals[parse_word_key(k, "potential.values")] =
                    json_rational(v, "potential.values['" + k + "']");
            Rational kappa = jp.contains("kappa")
                                 ? json_rational(jp["kappa"], "potential.kappa")
                                 : Rational(0);
            Rational rho = jp.contains("rho") ? json_rational(jp["rho"], "potential.rho")
                                              : Rational(1, 2);
            pot = PotentialSpec::table(radius, std::move(vals), kappa, rho);
        } else {
            throw std::invalid_argument("potential.kind: must be \"classical\" or \"table\"");
        }
    } else if (!model->is_cf()) {
        throw std::invalid_argument("model file: branch models need an explicit 'potential'");
    }
    pot.validate_against(*model);
    return LoadedModel{std::move(*model), std::move(pot)};
}

LoadedModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("model file: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_model_json_text(ss.str());
}

RunManifest RunManifest::make(const CantorModel& model, const PotentialSpec& pot,
                              const std::string& command,
                              std::map<std::string, std::string> parameters) {
    RunManifest m;
    m.model_hash = sha256_hex(model.canonical_description());
    m.potential_hash = sha256_hex(pot.canonical_description());
    m.command = command;
    m.parameters = std::move(parameters);
    return m;
}

std::string RunManifest::to_json_line() const {
    json j;
    j["command"] = command;
    j["model_hash"] = model_hash;
    j["potential_hash"] = potential_hash;
    j["parameters"] = parameters;
    j["tool_version"] = tool_version;
    return j.dump();
}

namespace {

std::string enclosure_cells(const Enclosure& e) {
    return decimal_lower(e.lo, kCsvDigits) + "," + decimal_upper(e.hi, kCsvDigits);
}

json enclosure_json(const Enclosure& e) {
    return json{{"lo", to_string(e.lo)}, {"hi", to_string(e.hi)}};
}

json word_json(const Word& w) {
    json a = json::array();
    for (Letter l : w.letters()) a.push_back(static_cast<int>(l));
    return a;
}

}  // namespace

std::string slice_csv(const RunManifest& m, const SliceResult& slice) {
    std::ostringstream os;
    os << "# manifest: " << m.to_json_line() << "\n";
    os << "value_lo,value_hi,period_word\n";
    for (const auto& e : slice.values) {
        os << enclosure_cells(e.value) << ",";
        const auto& ls = e.point.period_word.letters();
        for (size_t i = 0; i < ls.size(); ++i) os << (i ? " " : "") << static_cast<int>(ls[i]);
        os << "\n";
    }
    return os.str();
}

std::string counts_csv(const RunManifest& m, const DimensionEstimate& est) {
    std::ostringstream os;
    os << "# manifest: " << m.to_json_line() << "\n";
    os << "t,r,lower,upper,log_upper_over_r\n";
    for (const auto& e : est.entries) {
        os << decimal_upper(est.t, kCsvDigits) << "," << e.r << "," << e.lower_count << ","
           << e.upper_count << ",";
        if (e.log_upper_over_r) os << decimal_upper(e.log_upper_over_r->hi, kCsvDigits);
        os << "\n";
    }
    return os.str();
}

std::string dimension_estimate_json(const RunManifest& m, const DimensionEstimate& est) {
    json j;
    j["manifest"] = json::parse(m.to_json_line());
    j["t"] = to_string(est.t);
    j["r_max"] = est.r_max;
    j["c_used"] = est.c_used;
    j["lower_bound"] = to_string(est.lower_bound);
    j["upper_bound"] = to_string(est.upper_bound);
    json seq = json::array();
    for (const auto& e : est.entries) {
        json je;
        je["r"] = e.r;
        je["lower_count"] = e.lower_count;
        je["upper_count"] = e.upper_count;
        if (e.log_upper_over_r)
            je["log_upper_over_r"] = enclosure_json(*e.log_upper_over_r);
        else
            je["log_upper_over_r"] = nullptr;
        seq.push_back(std::move(je));
    }
    j["entries"] = std::move(seq);
    return j.dump(2) + "\n";
}

std::string curve_csv(const RunManifest& m, const std::vector<CurveRow>& rows) {
    std::ostringstream os;
    os << "# manifest: " << m.to_json_line() << "\n";
    os << "t,d_lower,d_upper,two_d_clipped_lower,two_d_clipped_upper\n";
    for (const auto& r : rows)
        os << decimal_upper(r.t, kCsvDigits) << "," << decimal_lower(r.d_lower, kCsvDigits) << ","
           << decimal_upper(r.d_upper, kCsvDigits) << ","
           << decimal_lower(r.two_d_clipped_lower, kCsvDigits) << ","
           << decimal_upper(r.two_d_clipped_upper, kCsvDigits) << "\n";
    return os.str();
}

std::string certificate_json(const RunManifest& m, const SubshiftCertificate& cert) {
    json j;
    j["manifest"] = json::parse(m.to_json_line());
    json blocks = json::array();
    for (const auto& b : cert.blocks.blocks) blocks.push_back(word_json(b));
    j["blocks"] = std::move(blocks);
    j["delta"] = to_string(cert.delta);
    j["sup_bound"] = enclosure_json(cert.sup_bound);
    j["dim_lower"] = to_string(cert.dim_lower);
    j["certify_len"] = cert.certify_len;
    j["agreement_depth"] = cert.agreement_depth;
    j["tail_slack"] = to_string(cert.tail_slack);
    j["pre_slack_sup"] = to_string(cert.pre_slack_sup);
    j["upper_estimate"] = to_string(cert.upper_estimate);
    j["achieved_quality"] = to_string(cert.achieved_quality);
    j["epsilon0_used"] = to_string(cert.epsilon0_used);
    j["method"] = cert.method;
    json checked = json::array();
    for (const auto& cw : cert.checked) {
        json e;
        e["blocks"] = cw.block_tuple;
        e["value"] = enclosure_json(cw.value);
        checked.push_back(std::move(e));
    }
    j["checked"] = std::move(checked);
    return j.dump(2) + "\n";
}

std::string validation_report_json(const ValidationReport& rep) {
    json j;
    j["ok"] = rep.ok;
    if (!rep.ok) {
        j["error"] = rep.error;
        return j.dump(2) + "\n";
    }
    j["model_hash"] = rep.model_hash;
    j["potential_hash"] = rep.potential_hash;
    j["alphabet"] = rep.alphabet;
    j["mixing"] = rep.mixing;
    j["stable_side"] = rep.stable_side;
    j["sample_depth"] = rep.sample_depth;
    j["c1"] = enclosure_json(rep.c1);
    if (rep.stable_side) j["c2"] = enclosure_json(rep.c2);
    return j.dump(2) + "\n";
}

void write_artifact(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file '" + path + "'");
    out << content;
}

}  // namespace spectra
