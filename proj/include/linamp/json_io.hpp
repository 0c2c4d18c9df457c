#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "linamp/amplifiers.hpp"
#include "linamp/certifier.hpp"
#include "linamp/fock.hpp"
#include "linamp/lindblad.hpp"
#include "linamp/paramp.hpp"
#include "linamp/trajectory.hpp"

namespace linamp {

using Json = nlohmann::json;

// Rejects unknown keys and reports missing required ones (ConfigError).
void check_keys(const Json& obj, const std::string& where,
                const std::vector<std::string>& required,
                const std::vector<std::string>& optional = {});

// Complex numbers travel as [re, im].
Cplx parse_complex(const Json& j, const std::string& where);
Json complex_json(Cplx z);

// States: {"kind":"vacuum"} | {"kind":"fock","n":..} |
// {"kind":"coherent","alpha":[re,im]} | {"kind":"thermal","nbar":..}
StateKind parse_state(const Json& j);
Json state_json(const StateKind& s);

// Amplifier kinds: {"kind":"A1","kappa_up":..,"kappa_down":..},
// {"kind":"A2","gamma":..}, {"kind":"A3","gamma":..},
// {"kind":"TwoPhoton","kappa_raise":..,"kappa_lower":..}.
AmplifierKind parse_amplifier(const Json& j);
Json amplifier_json(const AmplifierKind& k);

// Raw jump-term lists: [{"rate":..,"op":"lower"|"raise","power":..}, ...].
// parse_generator accepts either an amplifier kind object or such a list.
LindbladSpec parse_jump_terms(const Json& j);
Json jump_terms_json(const LindbladSpec& spec);
LindbladSpec parse_generator(const Json& j);

// {"G":..,"sigma":STATE,"dim_a":..,"dim_b":..} (dim_b defaults to dim_a).
ParampSpec parse_paramp(const Json& j);
Json paramp_json(const ParampSpec& spec);

// JSON-lines records:
// {"label":..,"in_amp":[re,im],"in_n":..,"out_amp":[re,im],"out_n":..}
MomentRecord parse_record(const Json& j);
Json record_json(const MomentRecord& r);
std::vector<MomentRecord> read_records_file(const std::string& path);

Json stats_json(const TrajectoryStats& stats, const LindbladSpec& spec);
Json certification_json(const CertificationResult& res);

} // namespace linamp
