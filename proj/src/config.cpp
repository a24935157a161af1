// Copyright 2026 The rdr-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rdr/config.hpp"

#include <cmath>
#include <set>

#include "rdr/error.hpp"

namespace rdr {
namespace {

void reject_unknown(const Json &j, const std::set<std::string> &known, const std::string &where) {
    if (!j.is_object()) fail(ErrorCode::kConfigError, where + " must be a JSON object");
    for (const auto &[key, value] : j.items()) {
        if (!known.count(key)) fail(ErrorCode::kConfigError, "unknown key '" + key + "' in " + where);
    }
}

double number(const Json &v, const std::string &key) {
    if (!v.is_number()) fail(ErrorCode::kConfigError, "'" + key + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(ErrorCode::kConfigError, "'" + key + "' must be finite");
    return x;
}

// Time constant: a number of us, or "inf".
double time_constant(const Json &v, const std::string &key) {
    if (v.is_string() && v.get<std::string>() == "inf") return kEffectivelyInfiniteUs;
    const double t = number(v, key);
    if (!(t > 0.0)) fail(ErrorCode::kConfigError, "'" + key + "' must be positive");
    return std::min(t, kEffectivelyInfiniteUs);
}

// Reads "<name>_over_2pi_mhz" or "<name>_rad_per_us" into `out` (rad/us).
void frequency(const Json &j, const std::string &name, double &out) {
    const std::string mhz = name + "_over_2pi_mhz";
    const std::string rad = name + "_rad_per_us";
    const bool has_mhz = j.contains(mhz), has_rad = j.contains(rad);
    if (has_mhz && has_rad) fail(ErrorCode::kConfigError, "give only one of '" + mhz + "' and '" + rad + "'");
    if (has_mhz) out = angular_from_mhz(number(j.at(mhz), mhz));
    if (has_rad) out = number(j.at(rad), rad);
}

Json both_units(double rad_per_us) {
    return Json{{"over_2pi_mhz", rad_per_us / kTwoPi}, {"rad_per_us", rad_per_us}};
}

Json complex_json(cplx v) { return Json::array({v.real(), v.imag()}); }

ModeDims dims_from_json(const Json &v) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
        fail(ErrorCode::kConfigError, "'dims' must be [N_m, N_r] integers");
    }
    ModeDims d{v[0].get<int>(), v[1].get<int>()};
    if (d.memory < 2 || d.readout < 2) fail(ErrorCode::kConfigError, "mode dimensions must be >= 2");
    return d;
}

double dt_from_ns(const Json &v) {
    const double dt_ns = number(v, "dt_ns");
    if (!(dt_ns > 0.0)) fail(ErrorCode::kConfigError, "'dt_ns' must be positive");
    return dt_ns / 1000.0;
}

std::vector<double> number_list(const Json &v, const std::string &key) {
    if (!v.is_array()) fail(ErrorCode::kConfigError, "'" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto &x : v) out.push_back(number(x, key));
    return out;
}

const char *noise_frame_name(QubitNoiseFrame f) {
    return f == QubitNoiseFrame::kPhysical ? "physical" : "renamed";
}

}  // namespace

Json parse_json(const std::string &text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error &e) {
        fail(ErrorCode::kConfigError, std::string("invalid JSON: ") + e.what());
    }
}

SystemParams params_from_json(const Json &j) {
    std::set<std::string> known{"t1_us", "t2_us"};
    for (const char *f : {"kappa", "omega_r", "chi_m", "chi_r"}) {
        known.insert(std::string(f) + "_over_2pi_mhz");
        known.insert(std::string(f) + "_rad_per_us");
    }
    reject_unknown(j, known, "params");
    SystemParams p = SystemParams::reference();
    frequency(j, "kappa", p.kappa);
    frequency(j, "omega_r", p.omega_r);
    frequency(j, "chi_m", p.chi_m);
    frequency(j, "chi_r", p.chi_r);
    if (j.contains("t1_us")) p.t1_us = time_constant(j.at("t1_us"), "t1_us");
    if (j.contains("t2_us")) p.t2_us = time_constant(j.at("t2_us"), "t2_us");
    try {
        p.validate();
    } catch (const Error &e) {
        fail(ErrorCode::kConfigError, e.what());
    }
    return p;
}

Json params_to_json(const SystemParams &p) {
    return Json{{"kappa", both_units(p.kappa)},
                {"omega_r", both_units(p.omega_r)},
                {"chi_m", both_units(p.chi_m)},
                {"chi_r", both_units(p.chi_r)},
                {"delta_q", both_units(p.delta_q)},
                {"eps_m_rad_per_us", complex_json(p.eps_m)},
                {"eps_r_rad_per_us", complex_json(p.eps_r)},
                {"t1_us", p.t1_us},
                {"t2_us", p.t2_us}};
}

ScenarioConfig scenario_from_json(const Json &j) {
    reject_unknown(j,
                   {"name", "form", "target_n_m", "params", "initial_state", "readout_at_steady_state", "dims",
                    "t_final_us", "dt_ns", "record_interval_us", "observables", "snapshot_times_us", "noise_frame",
                    "full_in_lab_basis"},
                   "config");
    ScenarioConfig c;
    c.name = "config";
    if (j.contains("name")) {
        if (!j.at("name").is_string() || j.at("name").get<std::string>().empty()) {
            fail(ErrorCode::kConfigError, "'name' must be a non-empty string");
        }
        c.name = j.at("name").get<std::string>();
    }
    if (j.contains("form")) {
        if (!j.at("form").is_string()) fail(ErrorCode::kConfigError, "'form' must be a string");
        c.form = parse_form(j.at("form").get<std::string>());
    }
    c.dt_us = ScenarioConfig::default_dt_us(c.form);
    if (j.contains("target_n_m")) c.target_n_m = number(j.at("target_n_m"), "target_n_m");
    if (j.contains("params")) c.params = params_from_json(j.at("params"));
    if (j.contains("initial_state")) {
        if (!j.at("initial_state").is_string()) fail(ErrorCode::kConfigError, "'initial_state' must be a string");
        c.initial = InitialStateSpec::parse(j.at("initial_state").get<std::string>());
    }
    if (j.contains("readout_at_steady_state")) {
        if (!j.at("readout_at_steady_state").is_boolean()) {
            fail(ErrorCode::kConfigError, "'readout_at_steady_state' must be a boolean");
        }
        c.readout_at_steady_state = j.at("readout_at_steady_state").get<bool>();
    }
    if (j.contains("dims")) c.dims = dims_from_json(j.at("dims"));
    if (j.contains("t_final_us")) c.t_final_us = number(j.at("t_final_us"), "t_final_us");
    if (j.contains("dt_ns")) c.dt_us = dt_from_ns(j.at("dt_ns"));
    if (j.contains("record_interval_us")) c.record_interval_us = number(j.at("record_interval_us"), "record_interval_us");
    if (j.contains("observables")) {
        const Json &o = j.at("observables");
        if (!o.is_array()) fail(ErrorCode::kConfigError, "'observables' must be an array of names");
        c.observables.clear();
        for (const auto &name : o) {
            if (!name.is_string()) fail(ErrorCode::kConfigError, "'observables' must be an array of names");
            c.observables.push_back(name.get<std::string>());
        }
    }
    if (j.contains("snapshot_times_us")) c.snapshot_times_us = number_list(j.at("snapshot_times_us"), "snapshot_times_us");
    if (j.contains("noise_frame")) {
        const Json &f = j.at("noise_frame");
        if (f == "physical") c.noise_frame = QubitNoiseFrame::kPhysical;
        else if (f == "renamed") c.noise_frame = QubitNoiseFrame::kRenamed;
        else fail(ErrorCode::kConfigError, "'noise_frame' must be \"physical\" or \"renamed\"");
    }
    if (j.contains("full_in_lab_basis")) {
        if (!j.at("full_in_lab_basis").is_boolean()) fail(ErrorCode::kConfigError, "'full_in_lab_basis' must be a boolean");
        c.full_in_lab_basis = j.at("full_in_lab_basis").get<bool>();
    }
    c.validate();
    return c;
}

Json scenario_to_json(const ScenarioConfig &c) {
    Json params{{"kappa_rad_per_us", c.params.kappa},
                {"omega_r_rad_per_us", c.params.omega_r},
                {"chi_m_rad_per_us", c.params.chi_m},
                {"chi_r_rad_per_us", c.params.chi_r},
                {"t1_us", c.params.t1_us},
                {"t2_us", c.params.t2_us}};
    return Json{{"name", c.name},
                {"form", form_name(c.form)},
                {"target_n_m", c.target_n_m},
                {"params", params},
                {"initial_state", c.initial.to_string()},
                {"readout_at_steady_state", c.readout_at_steady_state},
                {"dims", Json::array({c.dims.memory, c.dims.readout})},
                {"t_final_us", c.t_final_us},
                {"dt_ns", c.dt_us * 1e3},
                {"record_interval_us", c.record_interval_us},
                {"observables", c.observables},
                {"snapshot_times_us", c.snapshot_times_us},
                {"noise_frame", noise_frame_name(c.noise_frame)},
                {"full_in_lab_basis", c.full_in_lab_basis}};
}

ScenarioOverrides overrides_from_json(const Json &j) {
    ScenarioOverrides o;
    if (j.is_null()) return o;
    reject_unknown(j, {"dims", "dt_ns", "t_final_us", "form", "reduced"}, "overrides");
    if (j.contains("dims")) o.dims = dims_from_json(j.at("dims"));
    if (j.contains("dt_ns")) o.dt_us = dt_from_ns(j.at("dt_ns"));
    if (j.contains("t_final_us")) {
        const double t = number(j.at("t_final_us"), "t_final_us");
        if (t < 0.0) fail(ErrorCode::kConfigError, "'t_final_us' must be non-negative");
        o.t_final_us = t;
    }
    if (j.contains("form")) {
        if (!j.at("form").is_string()) fail(ErrorCode::kConfigError, "'form' must be a string");
        o.form = parse_form(j.at("form").get<std::string>());
    }
    if (j.contains("reduced")) {
        if (!j.at("reduced").is_boolean()) fail(ErrorCode::kConfigError, "'reduced' must be a boolean");
        o.reduced = j.at("reduced").get<bool>();
    }
    return o;
}

Json overrides_to_json(const ScenarioOverrides &o) {
    Json j = Json::object();
    if (o.dims) j["dims"] = Json::array({o.dims->memory, o.dims->readout});
    if (o.dt_us) j["dt_ns"] = *o.dt_us * 1e3;
    if (o.t_final_us) j["t_final_us"] = *o.t_final_us;
    if (o.form) j["form"] = form_name(*o.form);
    if (o.reduced) j["reduced"] = true;
    return j;
}

const char *weak_coupling_verdict(double g, double kappa) {
    const double ratio = g / (0.5 * kappa);
    if (ratio < 0.98) return "satisfied";
    if (ratio <= 1.02) return "boundary";
    return "violated";
}

Json calibration_to_json(const DriveCalibration &c, const SystemParams &base) {
    return Json{{"target_n_m", c.target_n_m},
                {"eps_m", both_units(std::abs(c.eps_m))},
                {"eps_r", both_units(std::abs(c.eps_r))},
                {"eps_m_rad_per_us", complex_json(c.eps_m)},
                {"eps_r_rad_per_us", complex_json(c.eps_r)},
                {"delta_q", both_units(c.delta_q)},
                {"abar_m", complex_json(c.abar_m)},
                {"abar_r", complex_json(c.abar_r)},
                {"g_m", both_units(c.g_m)},
                {"g_r", both_units(c.g_r)},
                {"weak_coupling",
                 {{"ok", c.weak_coupling_ok},
                  {"verdict", weak_coupling_verdict(c.g_r, base.kappa)},
                  {"g_over_half_kappa", c.g_r / (0.5 * base.kappa)}}},
                {"kappa_over_4_per_us", 0.25 * base.kappa},
                {"predicted_max_rate_per_us", c.predicted_max_rate},
                {"params", params_to_json(base)}};
}

}  // namespace rdr
