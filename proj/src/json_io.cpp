#include "linamp/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace linamp {

namespace {

double get_number(const Json& j, const std::string& key, const std::string& where) {
    if (!j.at(key).is_number())
        throw ConfigError(where + ": '" + key + "' must be a number");
    return j.at(key).get<double>();
}

int get_int(const Json& j, const std::string& key, const std::string& where) {
    if (!j.at(key).is_number_integer())
        throw ConfigError(where + ": '" + key + "' must be an integer");
    return j.at(key).get<int>();
}

} // namespace

void check_keys(const Json& obj, const std::string& where,
                const std::vector<std::string>& required,
                const std::vector<std::string>& optional) {
    if (!obj.is_object()) throw ConfigError(where + ": expected a JSON object");
    for (const auto& k : required)
        if (!obj.contains(k)) throw ConfigError(where + ": missing required key '" + k + "'");
    for (const auto& [k, v] : obj.items()) {
        if (std::find(required.begin(), required.end(), k) == required.end() &&
            std::find(optional.begin(), optional.end(), k) == optional.end())
            throw ConfigError(where + ": unknown key '" + k + "'");
    }
}

Cplx parse_complex(const Json& j, const std::string& where) {
    if (j.is_number()) return Cplx(j.get<double>(), 0.0);
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(where + ": complex values are [re, im]");
    return Cplx(j[0].get<double>(), j[1].get<double>());
}

Json complex_json(Cplx z) { return Json::array({z.real(), z.imag()}); }

StateKind parse_state(const Json& j) {
    if (!j.is_object() || !j.contains("kind")) throw ConfigError("state: expected {\"kind\": ...}");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "vacuum") {
        check_keys(j, "state(vacuum)", {"kind"});
        return Vacuum{};
    }
    if (kind == "fock") {
        check_keys(j, "state(fock)", {"kind", "n"});
        return Fock{get_int(j, "n", "state(fock)")};
    }
    if (kind == "coherent") {
        check_keys(j, "state(coherent)", {"kind", "alpha"});
        return Coherent{parse_complex(j.at("alpha"), "state(coherent).alpha")};
    }
    if (kind == "thermal") {
        check_keys(j, "state(thermal)", {"kind", "nbar"});
        return Thermal{get_number(j, "nbar", "state(thermal)")};
    }
    throw ConfigError("state: unknown kind '" + kind + "'");
}

Json state_json(const StateKind& s) {
    if (std::holds_alternative<Vacuum>(s)) return {{"kind", "vacuum"}};
    if (const auto* f = std::get_if<Fock>(&s)) return {{"kind", "fock"}, {"n", f->n}};
    if (const auto* c = std::get_if<Coherent>(&s))
        return {{"kind", "coherent"}, {"alpha", complex_json(c->alpha)}};
    return {{"kind", "thermal"}, {"nbar", std::get<Thermal>(s).nbar}};
}

AmplifierKind parse_amplifier(const Json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("amplifier: expected {\"kind\": ...}");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "A1") {
        check_keys(j, "amplifier(A1)", {"kind", "kappa_up", "kappa_down"});
        return A1Params{get_number(j, "kappa_up", "A1"), get_number(j, "kappa_down", "A1")};
    }
    if (kind == "A2") {
        check_keys(j, "amplifier(A2)", {"kind", "gamma"});
        return A2Params{get_number(j, "gamma", "A2")};
    }
    if (kind == "A3") {
        check_keys(j, "amplifier(A3)", {"kind", "gamma"});
        return A3Params{get_number(j, "gamma", "A3")};
    }
    if (kind == "TwoPhoton") {
        check_keys(j, "amplifier(TwoPhoton)", {"kind", "kappa_raise", "kappa_lower"});
        return TwoPhotonParams{get_number(j, "kappa_raise", "TwoPhoton"),
                               get_number(j, "kappa_lower", "TwoPhoton")};
    }
    throw ConfigError("amplifier: unknown kind '" + kind + "'");
}

Json amplifier_json(const AmplifierKind& k) {
    if (const auto* a1 = std::get_if<A1Params>(&k))
        return {{"kind", "A1"}, {"kappa_up", a1->kappa_up}, {"kappa_down", a1->kappa_down}};
    if (const auto* a2 = std::get_if<A2Params>(&k)) return {{"kind", "A2"}, {"gamma", a2->gamma}};
    if (const auto* a3 = std::get_if<A3Params>(&k)) return {{"kind", "A3"}, {"gamma", a3->gamma}};
    const auto& tp = std::get<TwoPhotonParams>(k);
    return {{"kind", "TwoPhoton"}, {"kappa_raise", tp.kappa_raise}, {"kappa_lower", tp.kappa_lower}};
}

LindbladSpec parse_jump_terms(const Json& j) {
    if (!j.is_array()) throw ConfigError("jump terms: expected an array");
    LindbladSpec spec;
    for (const auto& tj : j) {
        check_keys(tj, "jump term", {"rate", "op", "power"});
        JumpTerm t;
        t.rate = get_number(tj, "rate", "jump term");
        const std::string op = tj.at("op").get<std::string>();
        if (op == "lower")
            t.op = JumpTerm::Op::lower;
        else if (op == "raise")
            t.op = JumpTerm::Op::raise;
        else
            throw ConfigError("jump term: op must be 'lower' or 'raise'");
        t.power = get_int(tj, "power", "jump term");
        spec.terms.push_back(t);
    }
    spec.validate();
    return spec;
}

Json jump_terms_json(const LindbladSpec& spec) {
    Json arr = Json::array();
    for (const auto& t : spec.terms)
        arr.push_back({{"rate", t.rate},
                       {"op", t.op == JumpTerm::Op::lower ? "lower" : "raise"},
                       {"power", t.power}});
    return arr;
}

LindbladSpec parse_generator(const Json& j) {
    if (j.is_array()) return parse_jump_terms(j);
    if (j.is_object() && j.contains("terms")) {
        check_keys(j, "generator", {"terms"});
        return parse_jump_terms(j.at("terms"));
    }
    return to_spec(parse_amplifier(j));
}

ParampSpec parse_paramp(const Json& j) {
    check_keys(j, "paramp", {"G", "sigma", "dim_a"}, {"dim_b"});
    ParampSpec spec;
    spec.gain_G = get_number(j, "G", "paramp");
    spec.sigma = parse_state(j.at("sigma"));
    spec.dim_a = get_int(j, "dim_a", "paramp");
    spec.dim_b = j.contains("dim_b") ? get_int(j, "dim_b", "paramp") : spec.dim_a;
    spec.validate();
    return spec;
}

Json paramp_json(const ParampSpec& spec) {
    return {{"G", spec.gain_G},
            {"sigma", state_json(spec.sigma)},
            {"dim_a", spec.dim_a},
            {"dim_b", spec.dim_b}};
}

MomentRecord parse_record(const Json& j) {
    check_keys(j, "record", {"label", "in_amp", "in_n", "out_amp", "out_n"});
    MomentRecord r;
    r.label = j.at("label").get<std::string>();
    r.in_amp = parse_complex(j.at("in_amp"), "record.in_amp");
    r.in_n = get_number(j, "in_n", "record");
    r.out_amp = parse_complex(j.at("out_amp"), "record.out_amp");
    r.out_n = get_number(j, "out_n", "record");
    return r;
}

Json record_json(const MomentRecord& r) {
    return {{"label", r.label},
            {"in_amp", complex_json(r.in_amp)},
            {"in_n", r.in_n},
            {"out_amp", complex_json(r.out_amp)},
            {"out_n", r.out_n}};
}

std::vector<MomentRecord> read_records_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open records file '" + path + "'");
    std::vector<MomentRecord> records;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const Json::parse_error& e) {
            throw ConfigError("records line " + std::to_string(lineno) + ": " + e.what());
        }
        records.push_back(parse_record(j));
    }
    if (records.empty()) throw ConfigError("records file '" + path + "' holds no records");
    return records;
}

Json stats_json(const TrajectoryStats& stats, const LindbladSpec& spec) {
    Json counts = Json::array();
    for (size_t i = 0; i < stats.jump_counts.size(); ++i) {
        const auto& t = spec.terms[i];
        counts.push_back({{"op", t.op == JumpTerm::Op::lower ? "lower" : "raise"},
                          {"power", t.power},
                          {"count", stats.jump_counts[i]}});
    }
    Json j = {{"n_traj", stats.n_traj},
              {"t", stats.t},
              {"mean_n", stats.mean_n},
              {"mean_amp", complex_json(stats.mean_amp)},
              {"jump_counts", counts}};
    // stderr is undefined for a single trajectory; serialize as null.
    j["stderr_n"] = std::isnan(stats.stderr_n) ? Json(nullptr) : Json(stats.stderr_n);
    j["stderr_amp"] = std::isnan(stats.stderr_amp) ? Json(nullptr) : Json(stats.stderr_amp);
    return j;
}

Json certification_json(const CertificationResult& res) {
    Json j = {{"verdict", verdict_name(res.verdict)},
              {"g_est", res.g_est},
              {"bbdag_required", res.bbdag_required},
              {"spread", res.spread}};
    if (res.witness)
        j["witness"] = Json::array({res.witness->first, res.witness->second});
    else
        j["witness"] = nullptr;
    return j;
}

} // namespace linamp
