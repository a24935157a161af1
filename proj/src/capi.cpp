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

#include "rdr/rdr.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "rdr/config.hpp"
#include "rdr/diagnostics.hpp"
#include "rdr/error.hpp"
#include "rdr/experiments.hpp"

#ifndef RDR_VERSION_STRING
#define RDR_VERSION_STRING "0.0.0"
#endif

struct rdr_output {
    struct Table {
        std::string name;
        rdr_table_kind kind = RDR_TABLE_SERIES;
        std::vector<std::string> columns;
        std::vector<std::vector<double>> data;  // per column
    };
    std::vector<Table> tables;
    std::string metadata;
};

namespace rdr {
namespace {

constexpr double kNone = std::numeric_limits<double>::quiet_NaN();

thread_local std::string g_last_error;
thread_local std::optional<double> g_last_error_time;

using Table = rdr_output::Table;

bool is_complex_observable(const std::string &name) {
    return name == obs::kAmTilde || name == obs::kArTilde || name == obs::kSigmaMinus;
}

std::string format_value(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// time_us first, then observables alphabetically; complex ones as _im/_re.
Table series_table(const std::string &name, const Trajectory &traj) {
    Table t;
    t.name = name;
    t.kind = RDR_TABLE_SERIES;
    t.columns.push_back("time_us");
    t.data.push_back(traj.times());
    std::vector<std::pair<std::string, std::vector<double>>> cols;
    for (const auto &n : traj.names()) {
        if (is_complex_observable(n)) {
            const auto z = traj.complex_series(n);
            std::vector<double> re, im;
            for (const auto &v : z) {
                re.push_back(v.real());
                im.push_back(v.imag());
            }
            cols.emplace_back(n + "_re", std::move(re));
            cols.emplace_back(n + "_im", std::move(im));
        } else {
            cols.emplace_back(n, traj.series(n));
        }
    }
    std::sort(cols.begin(), cols.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    for (auto &[n, v] : cols) {
        t.columns.push_back(n);
        t.data.push_back(std::move(v));
    }
    return t;
}

Json opt_json(const std::optional<double> &v) { return v ? Json(*v) : Json(nullptr); }

Json run_json(const std::string &table, const ScenarioResult &r) {
    return Json{{"table", table},
                {"config", scenario_to_json(r.config)},
                {"calibration", calibration_to_json(r.calibration, r.config.params)},
                {"crossing_us", opt_json(r.crossing_us)},
                {"warnings", r.warnings}};
}

struct Output {
    std::vector<Table> tables;
    Json meta = Json::object();

    void add_run(const std::string &table, const ScenarioResult &r) {
        tables.push_back(series_table(table, r.trajectory));
        meta["runs"].push_back(run_json(table, r));
    }
};

std::string table_label(double v) {
    std::string s = format_value(v);
    std::replace(s.begin(), s.end(), '.', 'p');
    std::replace(s.begin(), s.end(), '-', 'm');
    return s;
}

// Sweep summary; per-point failures land in metadata.
void add_sweep(Output &out, const std::string &value_column, const std::vector<SweepPoint> &points,
               bool crossing, bool steady, const std::string &series_prefix) {
    Table t;
    t.name = "sweep";
    t.kind = RDR_TABLE_SWEEP;
    t.columns.push_back(value_column);
    t.data.emplace_back();
    if (crossing) {
        t.columns.push_back("crossing_us");
        t.data.emplace_back();
    }
    if (steady) {
        t.columns.push_back("steady_fidelity");
        t.data.emplace_back();
    }
    Json pts = Json::array();
    for (const auto &p : points) {
        size_t c = 0;
        t.data[c++].push_back(p.value);
        if (crossing) t.data[c++].push_back(p.crossing_us.value_or(kNone));
        if (steady) t.data[c++].push_back(p.steady_fidelity.value_or(kNone));
        Json pj{{"value", p.value},
                {"crossing_us", opt_json(p.crossing_us)},
                {"steady_fidelity", opt_json(p.steady_fidelity)},
                {"error", p.error}};
        if (p.result && !series_prefix.empty()) {
            const std::string name = series_prefix + table_label(p.value);
            out.add_run(name, *p.result);
            pj["table"] = name;
        }
        pts.push_back(std::move(pj));
    }
    out.tables.insert(out.tables.begin(), std::move(t));
    out.meta["sweep"] = {{"axis", value_column},
                         {"reports_crossing", crossing},
                         {"reports_steady_fidelity", steady},
                         {"points", pts}};
}

std::string get_string(const Json &j, const char *key) {
    if (!j.contains(key) || !j.at(key).is_string()) {
        fail(ErrorCode::kConfigError, std::string("request needs a string '") + key + "'");
    }
    return j.at(key).get<std::string>();
}

std::vector<double> get_numbers(const Json &j, const char *key) {
    if (!j.contains(key) || !j.at(key).is_array() || j.at(key).empty()) {
        fail(ErrorCode::kConfigError, std::string("request needs a non-empty array '") + key + "'");
    }
    std::vector<double> out;
    for (const auto &v : j.at(key)) {
        if (!v.is_number() || !std::isfinite(v.get<double>())) {
            fail(ErrorCode::kConfigError, std::string("'") + key + "' must hold finite numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

void check_request_keys(const Json &j, std::initializer_list<const char *> keys) {
    if (!j.is_object()) fail(ErrorCode::kConfigError, "request must be a JSON object");
    for (const auto &[k, v] : j.items()) {
        if (std::none_of(keys.begin(), keys.end(), [&](const char *s) { return k == s; })) {
            fail(ErrorCode::kConfigError, "unknown request key '" + k + "'");
        }
    }
}

void require_scenario(const std::string &name) {
    if (!is_catalog_scenario(name)) fail(ErrorCode::kUnknownScenario, "unknown scenario '" + name + "'");
}

const std::vector<double> &default_t_values() {
    static const std::vector<double> v{1.0, 3.0, 10.0, 30.0, 100.0};
    return v;
}

// ------------------------------------------------------------------ run

Output run_catalog(const std::string &name, const ScenarioOverrides &o) {
    Output out;
    if (name == "fig2a") {
        std::vector<HamiltonianForm> forms{HamiltonianForm::kFull, HamiltonianForm::kRwa};
        if (o.form) forms = {*o.form};
        std::vector<std::pair<std::string, ScenarioConfig>> cfgs;
        for (auto f : forms) {
            for (double n : {1.0, 3.0}) {
                ScenarioOverrides oo = o;
                oo.form.reset();
                ScenarioConfig c = initialization_config(n, f, oo);
                if (o.dt_us) c.dt_us = *o.dt_us;
                cfgs.emplace_back(std::string(form_name(f)) + "_n" + table_label(n), c);
            }
        }
        std::vector<std::optional<ScenarioResult>> res(cfgs.size());
        parallel_for(static_cast<int>(cfgs.size()), [&](int i) { res[static_cast<size_t>(i)] = run_scenario(cfgs[static_cast<size_t>(i)].second); });
        for (size_t i = 0; i < cfgs.size(); ++i) out.add_run(cfgs[i].first, *res[i]);
    } else if (name == "fig3") {
        MaxRateResult r = run_max_rate(o);
        ReferenceDecayModel occ;
        occ.n_tilde_0 = r.n_tilde_start;
        ReferenceDecayModel amp = occ;
        amp.occupation_decay = false;
        const auto &times = r.run.trajectory.times();
        r.run.trajectory.add_column("reference_occupation_decay", reference_exponential(occ, times));
        r.run.trajectory.add_column("reference_amplitude_decay", reference_exponential(amp, times));
        out.add_run("max_rate", r.run);
        out.meta["fit"] = {{"slope_per_us", r.fit.slope},
                           {"t_start_us", r.fit.t_start},
                           {"t_end_us", r.fit.t_end},
                           {"samples", r.fit.samples},
                           {"n_tilde_start", r.n_tilde_start},
                           {"kappa_over_4_per_us", 0.25 * r.run.config.params.kappa}};
        out.meta["reference_model"] = {{"T_ms", occ.T_ms}, {"xi", occ.xi}, {"n_tilde_0", occ.n_tilde_0}};
    } else if (name == "fig4") {
        for (auto &[state, r] : run_initial_state_comparison(o)) out.add_run(state, r);
    } else if (name == "fig5") {
        const std::vector<double> values{0.1, 0.25, 0.4, 0.5, 0.75, 1.0, 1.2, 1.5};
        add_sweep(out, "g_over_kappa", run_drive_power_sweep(values, o), true, false, "g_over_kappa_");
    } else if (name == "appA") {
        Json side = Json::object();
        for (int sign : {1, -1}) {
            const SidebandResult r = run_sideband_demo(sideband_demo_params(sign));
            const std::string table = sign > 0 ? "sign_plus" : "sign_minus";
            out.tables.push_back(series_table(table, r.trajectory));
            side[table] = {{"steady_p_plus", opt_json(r.steady_p_plus)},
                           {"steady_p_minus", opt_json(r.steady_p_minus)},
                           {"steady_error", r.steady_error},
                           {"chi_rad_per_us", r.params.chi},
                           {"kappa_rad_per_us", r.params.kappa}};
        }
        out.meta["sideband"] = side;
    } else if (name == "appB") {
        for (auto &[form, r] : run_frame_comparison(o)) out.add_run(form_name(form), r);
    } else if (name == "appD-t1" || name == "appD-t2") {
        const SweepAxis axis = name == "appD-t1" ? SweepAxis::kT1 : SweepAxis::kT2;
        add_sweep(out, std::string(axis_name(axis)) + "_us",
                  run_qubit_imperfection_sweep(axis, default_t_values(), o), true, false,
                  std::string(axis_name(axis)) + "_");
    } else if (name == "appD-omegaR") {
        RabiSweepResult r = run_rabi_frequency_sweep({2.0, 5.0, 10.0, 20.0}, o);
        add_sweep(out, "omega_R_over_2pi_mhz", r.points, true, false, "omega_R_");
        out.add_run("baseline_rwa", r.baseline);
    } else if (name == "appD-steady") {
        const ModeDims dims = o.dims.value_or(ModeDims{12, 4});
        Json all = Json::object();
        const std::vector<std::pair<SweepAxis, std::vector<double>>> sweeps{
            {SweepAxis::kT1, default_t_values()},
            {SweepAxis::kT2, default_t_values()},
            {SweepAxis::kOmegaR, {0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0, 20.0}}};
        for (const auto &[axis, values] : sweeps) {
            Output part;
            const std::string col = axis == SweepAxis::kOmegaR ? "omega_R_over_2pi_mhz" : std::string(axis_name(axis)) + "_us";
            add_sweep(part, col, run_steady_state_sweep(axis, values, dims), false, true, "");
            part.tables.front().name = axis_name(axis);
            out.tables.push_back(std::move(part.tables.front()));
            all[axis_name(axis)] = part.meta["sweep"];
        }
        out.meta["steady_sweeps"] = all;
        out.meta["dims"] = Json::array({dims.memory, dims.readout});
    } else if (name == "appE-timestep") {
        TimestepComparison r = run_timestep_comparison(o);
        out.add_run("dt_1ns", r.fine);
        out.add_run("dt_10ns", r.coarse);
        out.meta["max_abs_fidelity_difference"] = r.max_abs_fidelity_difference;
    } else {
        fail(ErrorCode::kUnknownScenario, "unknown scenario '" + name + "'");
    }
    return out;
}

Output handle_run(const Json &req) {
    check_request_keys(req, {"scenario", "config", "overrides"});
    Output out;
    const ScenarioOverrides o = overrides_from_json(req.value("overrides", Json()));
    if (req.contains("config")) {
        if (req.contains("scenario")) fail(ErrorCode::kConfigError, "give either 'scenario' or 'config', not both");
        ScenarioConfig cfg = scenario_from_json(req.at("config"));
        ScenarioOverrides oo = o;
        if (oo.reduced) fail(ErrorCode::kConfigError, "'reduced' applies to catalog scenarios only");
        if (oo.form) {
            cfg.form = *oo.form;
            if (!req.at("config").contains("dt_ns")) cfg.dt_us = ScenarioConfig::default_dt_us(cfg.form);
        }
        if (oo.dims) cfg.dims = *oo.dims;
        if (oo.dt_us) cfg.dt_us = *oo.dt_us;
        if (oo.t_final_us) cfg.t_final_us = *oo.t_final_us;
        out.add_run(cfg.name, run_scenario(cfg));
        out.meta["scenario"] = cfg.name;
    } else {
        const std::string name = get_string(req, "scenario");
        require_scenario(name);
        out = run_catalog(name, o);
        out.meta["scenario"] = name;
    }
    out.meta["request"] = req;
    return out;
}

// ---------------------------------------------------------------- sweep

Output handle_sweep(const Json &req) {
    check_request_keys(req, {"scenario", "config", "axis", "values", "overrides"});
    const SweepAxis axis = parse_axis(get_string(req, "axis"));
    const std::vector<double> values = get_numbers(req, "values");
    const ScenarioOverrides o = overrides_from_json(req.value("overrides", Json()));
    const std::string axis_col = axis == SweepAxis::kDrive    ? "g_over_kappa"
                                 : axis == SweepAxis::kOmegaR ? "omega_R_over_2pi_mhz"
                                                              : std::string(axis_name(axis)) + "_us";
    Output out;
    std::string name;
    auto unsupported = [&]() {
        fail(ErrorCode::kConfigError,
             std::string("axis '") + axis_name(axis) + "' is not sweepable for scenario '" + name + "'");
    };
    if (req.contains("config")) {
        const ScenarioConfig base = scenario_from_json(req.at("config"));
        name = base.name;
        if (axis == SweepAxis::kDrive) unsupported();
        std::vector<SweepPoint> pts(values.size());
        parallel_for(static_cast<int>(pts.size()), [&](int i) {
            SweepPoint &p = pts[static_cast<size_t>(i)];
            p.value = values[static_cast<size_t>(i)];
            try {
                ScenarioConfig c = base;
                if (axis == SweepAxis::kT1) c.params.t1_us = p.value;
                if (axis == SweepAxis::kT2) c.params.t2_us = p.value;
                if (axis == SweepAxis::kOmegaR) c.params.omega_r = angular_from_mhz(p.value);
                if (o.dims) c.dims = *o.dims;
                if (o.dt_us) c.dt_us = *o.dt_us;
                if (o.t_final_us) c.t_final_us = *o.t_final_us;
                p.result = run_scenario(c);
                p.crossing_us = p.result->crossing_us;
            } catch (const Error &e) {
                p.error = std::string(error_code_name(e.code())) + ": " + e.what();
            }
        });
        add_sweep(out, axis_col, pts, true, false, "");
    } else {
        name = get_string(req, "scenario");
        require_scenario(name);
        if (name == "fig5" && axis == SweepAxis::kDrive) {
            add_sweep(out, axis_col, run_drive_power_sweep(values, o), true, false, "");
        } else if ((name == "appD-t1" || name == "appD-t2") && (axis == SweepAxis::kT1 || axis == SweepAxis::kT2)) {
            add_sweep(out, axis_col, run_qubit_imperfection_sweep(axis, values, o), true, false, "");
        } else if (name == "appD-omegaR" && axis == SweepAxis::kOmegaR) {
            ScenarioOverrides oo = o;
            RabiSweepResult r = run_rabi_frequency_sweep(values, oo);
            add_sweep(out, axis_col, r.points, true, false, "");
            out.meta["baseline_rwa_crossing_us"] = opt_json(r.baseline.crossing_us);
        } else if (name == "appD-steady" && axis != SweepAxis::kDrive) {
            add_sweep(out, axis_col, run_steady_state_sweep(axis, values, o.dims.value_or(ModeDims{12, 4})), false,
                      true, "");
        } else {
            unsupported();
        }
    }
    for (const auto &p : out.meta["sweep"]["points"]) {
        if (!p["error"].get<std::string>().empty()) out.meta["failed_points"] = true;
    }
    out.meta["scenario"] = name;
    out.meta["request"] = req;
    return out;
}

// --------------------------------------------------------------- wigner

Output handle_wigner(const Json &req) {
    check_request_keys(req, {"scenario", "config", "times_us", "state", "half_width", "points", "overrides"});
    std::vector<double> times = get_numbers(req, "times_us");
    for (double t : times) {
        if (t < 0.0) fail(ErrorCode::kConfigError, "snapshot times must be non-negative");
    }
    const ScenarioOverrides o = overrides_from_json(req.value("overrides", Json()));
    double half_width = 6.0;
    int points = 81;
    if (req.contains("half_width")) {
        if (!req.at("half_width").is_number() || !(req.at("half_width").get<double>() > 0.0)) {
            fail(ErrorCode::kConfigError, "'half_width' must be positive");
        }
        half_width = req.at("half_width").get<double>();
    }
    if (req.contains("points")) {
        if (!req.at("points").is_number_integer() || req.at("points").get<int>() < 2 ||
            req.at("points").get<int>() > 2001) {
            fail(ErrorCode::kConfigError, "'points' must be an integer in [2, 2001]");
        }
        points = req.at("points").get<int>();
    }

    ScenarioConfig cfg;
    std::string name;
    if (req.contains("config")) {
        cfg = scenario_from_json(req.at("config"));
        if (o.dims) cfg.dims = *o.dims;
        if (o.dt_us) cfg.dt_us = *o.dt_us;
        name = cfg.name;
    } else {
        name = get_string(req, "scenario");
        require_scenario(name);
        if (name == "fig3") {
            cfg = max_rate_config(o);
        } else if (name == "fig4") {
            cfg = initial_state_config(req.contains("state") ? get_string(req, "state") : "cat", o);
        } else if (name == "fig2a" || name == "appB") {
            cfg = initialization_config(1.0, o.form.value_or(HamiltonianForm::kRwa), o);
        } else {
            fail(ErrorCode::kConfigError, "scenario '" + name + "' does not store snapshots");
        }
    }
    if (req.contains("state") && name != "fig4") fail(ErrorCode::kConfigError, "'state' applies to fig4 only");
    std::sort(times.begin(), times.end());
    cfg.snapshot_times_us = times;
    cfg.t_final_us = times.back();
    cfg.observables = {obs::kFidelity};
    const ScenarioResult r = run_scenario(cfg);

    Output out;
    const auto axis = linspace(-half_width, half_width, points);
    Json grids = Json::array();
    std::vector<std::string> warnings = r.warnings;
    for (double t : times) {
        const auto *snap = r.trajectory.nearest_snapshot(t);
        if (!snap) fail(ErrorCode::kInvalidArgument, "no snapshot stored");
        if (std::abs(snap->time_us - t) > 0.5 * cfg.dt_us) {
            warnings.push_back("no snapshot at t = " + format_value(t) + " us; using nearest t = " +
                               format_value(snap->time_us) + " us");
        }
        const WignerGrid g = wigner(snap->state, axis, axis, Mode::kMemory);
        Table tab;
        tab.name = "t_" + table_label(t) + "us";
        tab.kind = RDR_TABLE_GRID;
        tab.columns.push_back("x");
        tab.data.push_back(g.x_axis);
        for (size_t ip = 0; ip < g.p_axis.size(); ++ip) {
            tab.columns.push_back(format_value(g.p_axis[ip]));
            std::vector<double> col(g.x_axis.size());
            for (size_t ix = 0; ix < g.x_axis.size(); ++ix) {
                col[ix] = g.values(static_cast<Eigen::Index>(ip), static_cast<Eigen::Index>(ix));
            }
            tab.data.push_back(std::move(col));
        }
        grids.push_back({{"table", tab.name}, {"requested_us", t}, {"snapshot_us", snap->time_us},
                         {"integral", g.integral()}, {"max", g.values.maxCoeff()}});
        out.tables.push_back(std::move(tab));
    }
    out.meta["scenario"] = name;
    out.meta["frame"] = cfg.form == HamiltonianForm::kFull && cfg.full_in_lab_basis ? "lab" : "displaced";
    out.meta["config"] = scenario_to_json(cfg);
    out.meta["grids"] = grids;
    out.meta["warnings"] = warnings;
    out.meta["request"] = req;
    return out;
}

// ---------------------------------------------------------------- glue

rdr_status to_status(ErrorCode c) { return static_cast<rdr_status>(static_cast<int>(c)); }

void set_error(rdr_status s, const std::string &msg, std::optional<double> t = std::nullopt) {
    g_last_error = std::string(rdr_status_name(s)) + ": " + msg;
    g_last_error_time = t;
}

template <typename Fn>
rdr_status guarded(Fn &&fn) {
    g_last_error.clear();
    g_last_error_time.reset();
    try {
        fn();
        take_warnings();
        return RDR_OK;
    } catch (const Error &e) {
        const rdr_status s = to_status(e.code());
        set_error(s, e.what(), e.time_us());
        return s;
    } catch (const Json::exception &e) {
        set_error(RDR_CONFIG_ERROR, e.what());
        return RDR_CONFIG_ERROR;
    } catch (const std::bad_alloc &) {
        set_error(RDR_INTERNAL_ERROR, "out of memory");
        return RDR_INTERNAL_ERROR;
    } catch (const std::exception &e) {
        set_error(RDR_INTERNAL_ERROR, e.what());
        return RDR_INTERNAL_ERROR;
    } catch (...) {
        set_error(RDR_INTERNAL_ERROR, "unknown failure");
        return RDR_INTERNAL_ERROR;
    }
}

char *dup_string(const std::string &s) {
    char *p = static_cast<char *>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

rdr_status produce(const char *request_json, rdr_output **out, Output (*handler)(const Json &)) {
    if (out) *out = nullptr;
    return guarded([&]() {
        if (!out) fail(ErrorCode::kInvalidArgument, "output pointer is null");
        if (!request_json) fail(ErrorCode::kInvalidArgument, "request is null");
        Output o = handler(parse_json(request_json));
        auto *res = new rdr_output;
        res->tables = std::move(o.tables);
        res->metadata = o.meta.dump(2);
        *out = res;
    });
}

const rdr_output::Table *table_at(const rdr_output *out, size_t table) {
    if (!out || table >= out->tables.size()) return nullptr;
    return &out->tables[table];
}

}  // namespace
}  // namespace rdr

using rdr::table_at;

extern "C" {

const char *rdr_version(void) { return RDR_VERSION_STRING; }

const char *rdr_status_name(rdr_status status) {
    switch (status) {
        case RDR_OK: return "ok";
        case RDR_INTERNAL_ERROR: return "internal-error";
        default: break;
    }
    if (status > RDR_OK && status < RDR_INTERNAL_ERROR) {
        return rdr::error_code_name(static_cast<rdr::ErrorCode>(static_cast<int>(status)));
    }
    return "unknown-status";
}

rdr_status_class rdr_status_classify(rdr_status status) {
    switch (status) {
        case RDR_OK:
            return RDR_CLASS_OK;
        case RDR_TRUNCATION_ERROR:
        case RDR_INTEGRATION_UNSTABLE:
        case RDR_DEGENERATE_STEADY_STATE:
        case RDR_TOO_FEW_SAMPLES:
        case RDR_INTERNAL_ERROR:
            return RDR_CLASS_NUMERICAL;
        default:
            return RDR_CLASS_CONFIG;
    }
}

const char *rdr_last_error(void) { return rdr::g_last_error.c_str(); }

int rdr_last_error_time(double *time_us) {
    if (!rdr::g_last_error_time || !time_us) return 0;
    *time_us = *rdr::g_last_error_time;
    return 1;
}

void rdr_string_free(char *s) { std::free(s); }

rdr_status rdr_catalog(char **json_out) {
    if (json_out) *json_out = nullptr;
    return rdr::guarded([&]() {
        if (!json_out) rdr::fail(rdr::ErrorCode::kInvalidArgument, "output pointer is null");
        rdr::Json j = rdr::Json::array();
        for (const auto &e : rdr::scenario_catalog()) j.push_back({{"name", e.name}, {"description", e.description}});
        *json_out = rdr::dup_string(j.dump(2));
    });
}

rdr_status rdr_calibrate(const char *request_json, char **json_out) {
    if (json_out) *json_out = nullptr;
    return rdr::guarded([&]() {
        if (!json_out || !request_json) rdr::fail(rdr::ErrorCode::kInvalidArgument, "null argument");
        const rdr::Json req = rdr::parse_json(request_json);
        rdr::check_request_keys(req, {"target_n_m", "params"});
        if (!req.contains("target_n_m") || !req.at("target_n_m").is_number()) {
            rdr::fail(rdr::ErrorCode::kConfigError, "request needs a number 'target_n_m'");
        }
        const rdr::SystemParams base =
            req.contains("params") ? rdr::params_from_json(req.at("params")) : rdr::SystemParams::reference();
        const double target = req.at("target_n_m").get<double>();
        if (!(target >= 0.0) || !std::isfinite(target)) {
            rdr::fail(rdr::ErrorCode::kConfigError, "'target_n_m' must be a non-negative number");
        }
        const rdr::DriveCalibration cal = rdr::calibrate_drives(target, base);
        rdr::Json j = rdr::calibration_to_json(cal, base);
        j["warnings"] = rdr::take_warnings();
        *json_out = rdr::dup_string(j.dump(2));
    });
}

rdr_status rdr_run(const char *request_json, rdr_output **out) {
    return rdr::produce(request_json, out, rdr::handle_run);
}

rdr_status rdr_sweep(const char *request_json, rdr_output **out) {
    return rdr::produce(request_json, out, rdr::handle_sweep);
}

rdr_status rdr_wigner(const char *request_json, rdr_output **out) {
    return rdr::produce(request_json, out, rdr::handle_wigner);
}

void rdr_output_free(rdr_output *out) { delete out; }

const char *rdr_output_metadata(const rdr_output *out) { return out ? out->metadata.c_str() : ""; }

size_t rdr_output_table_count(const rdr_output *out) { return out ? out->tables.size() : 0; }

const char *rdr_output_table_name(const rdr_output *out, size_t table) {
    const auto *t = table_at(out, table);
    return t ? t->name.c_str() : nullptr;
}

rdr_table_kind rdr_output_table_kind(const rdr_output *out, size_t table) {
    const auto *t = table_at(out, table);
    return t ? t->kind : RDR_TABLE_SERIES;
}

size_t rdr_output_column_count(const rdr_output *out, size_t table) {
    const auto *t = table_at(out, table);
    return t ? t->columns.size() : 0;
}

size_t rdr_output_row_count(const rdr_output *out, size_t table) {
    const auto *t = table_at(out, table);
    return t && !t->data.empty() ? t->data.front().size() : 0;
}

const char *rdr_output_column_name(const rdr_output *out, size_t table, size_t column) {
    const auto *t = table_at(out, table);
    return t && column < t->columns.size() ? t->columns[column].c_str() : nullptr;
}

const double *rdr_output_column(const rdr_output *out, size_t table, size_t column) {
    const auto *t = table_at(out, table);
    return t && column < t->data.size() ? t->data[column].data() : nullptr;
}

}  // extern "C"
