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

#include "rdr/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>

#include "rdr/diagnostics.hpp"
#include "rdr/error.hpp"

namespace rdr {
namespace {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_complex(cplx v, bool force_sign) {
    std::string out = format_double(v.real());
    if (force_sign && v.real() >= 0.0) out = "+" + out;
    if (v.imag() != 0.0) out += "," + format_double(v.imag());
    return out;
}

double parse_number(const std::string &text, const std::string &context) {
    double v = 0.0;
    const char *begin = text.data();
    const char *end = text.data() + text.size();
    if (begin != end && *begin == '+') ++begin;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
        fail(ErrorCode::kConfigError, "cannot parse number '" + text + "' in " + context);
    }
    return v;
}

// Displaced-frame truncation for a lab state moved by -abar.
int displaced_memory_dim(const InitialStateSpec &s, cplx abar) {
    const double r = std::abs(abar);
    if (s.kind == InitialStateSpec::Kind::kThermal) return s.required_dim() + recommended_dim(r * r);
    const double reach = std::sqrt(std::max(s.mean_occupation(), static_cast<double>(s.fock_n))) + r;
    return std::max(2, recommended_dim(reach * reach));
}

QuantumState qubit_state_index(int index) { return fock_state(2, index); }

// (|0> - |1>)/sqrt(2): the working-basis index-1 state seen from the lab.
QuantumState lab_qubit_start() {
    StateVector v(2);
    v << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    return QuantumState::pure(SpaceDescriptor::single(2), std::move(v));
}

Operator hadamard_conjugate(const Operator &op_working, const ModeDims &dims) {
    DenseMatrix h(2, 2);
    h << 1.0, 1.0, 1.0, -1.0;
    h /= std::sqrt(2.0);
    const Operator had = embed(Operator(SpaceDescriptor::single(2), h), dims.space(), 0);
    return had * op_working * had;
}

struct Basis {
    bool lab = false;
    cplx abar_m = 0.0;
    cplx abar_r = 0.0;
};

Operator observable_operator(const std::string &name, const ModeDims &dims, const Basis &b) {
    const Operator id = Operator::identity(dims.space());
    auto qubit = [&](const Operator &working) {
        return b.lab ? hadamard_conjugate(working, dims) : working;
    };
    const Operator p_exc = 0.5 * (id + qubit_operator(dims, PauliAxis::kZ));
    // Displaced-frame quantities are relative to abar; lab ones to zero.
    const cplx shift_m = b.lab ? b.abar_m : -b.abar_m;
    const cplx shift_r = b.lab ? b.abar_r : -b.abar_r;
    const Mode m = Mode::kMemory, r = Mode::kReadout;
    if (name == obs::kFidelity) return mode_coherent_projector(dims, m, b.lab ? b.abar_m : 0.0);
    if (name == obs::kNm) return b.lab ? mode_number(dims, m) : mode_displaced_number(dims, m, shift_m);
    if (name == obs::kNmTilde) return b.lab ? mode_displaced_number(dims, m, shift_m) : mode_number(dims, m);
    if (name == obs::kNr) return b.lab ? mode_number(dims, r) : mode_displaced_number(dims, r, shift_r);
    if (name == obs::kNrTilde) return b.lab ? mode_displaced_number(dims, r, shift_r) : mode_number(dims, r);
    if (name == obs::kAmTilde) return mode_annihilation(dims, m) - (b.lab ? b.abar_m : 0.0) * id;
    if (name == obs::kArTilde) return mode_annihilation(dims, r) - (b.lab ? b.abar_r : 0.0) * id;
    if (name == obs::kSigmaMinus) return qubit(qubit_operator(dims, PauliAxis::kMinus));
    if (name == obs::kPExcited) return qubit(p_exc);
    if (name == obs::kNExc) {
        return observable_operator(obs::kNmTilde, dims, b) + observable_operator(obs::kNrTilde, dims, b) +
               qubit(p_exc);
    }
    fail(ErrorCode::kConfigError, "unknown observable '" + name + "'");
}

ScenarioConfig apply_overrides(ScenarioConfig cfg, const ScenarioOverrides &o) {
    if (o.form) {
        cfg.form = *o.form;
        cfg.dt_us = ScenarioConfig::default_dt_us(cfg.form);
    }
    if (o.dims) cfg.dims = *o.dims;
    if (o.dt_us) cfg.dt_us = *o.dt_us;
    if (o.t_final_us) cfg.t_final_us = *o.t_final_us;
    return cfg;
}

double reduced_factor(const ScenarioOverrides &o) { return o.reduced ? 0.25 : 1.0; }
double time_factor(const ScenarioOverrides &o) { return o.reduced ? 0.5 : 1.0; }

// Scales a lab-frame initial state's occupation.
InitialStateSpec scale_occupation(InitialStateSpec s, double f) {
    const double a = std::sqrt(f);
    switch (s.kind) {
        case InitialStateSpec::Kind::kVacuum:
            break;
        case InitialStateSpec::Kind::kCoherent:
        case InitialStateSpec::Kind::kCat:
        case InitialStateSpec::Kind::kCatNode:
            s.alpha *= a;
            break;
        case InitialStateSpec::Kind::kFock:
            s.fock_n = static_cast<int>(std::lround(s.fock_n * f));
            break;
        case InitialStateSpec::Kind::kThermal:
            s.mean_n *= f;
            break;
    }
    return s;
}

constexpr double kMaxRateTarget = 24.8;
constexpr double kMaxRateLabStart = 99.4;
constexpr double kComparisonTarget = 24.8;
constexpr double kComparisonStart = 49.6;
constexpr int kComparisonFock = 50;

std::string point_error(const std::exception &e) {
    if (const auto *err = dynamic_cast<const Error *>(&e)) {
        return std::string(error_code_name(err->code())) + ": " + err->what();
    }
    return e.what();
}

}  // namespace

// ------------------------------------------------------------ initial states

InitialStateSpec InitialStateSpec::coherent(cplx alpha) {
    InitialStateSpec s;
    s.kind = Kind::kCoherent;
    s.alpha = alpha;
    return s;
}

InitialStateSpec InitialStateSpec::fock(int n) {
    if (n < 0) fail(ErrorCode::kInvalidArgument, "Fock index must be >= 0");
    InitialStateSpec s;
    s.kind = Kind::kFock;
    s.fock_n = n;
    return s;
}

InitialStateSpec InitialStateSpec::thermal(double mean_n) {
    if (!(mean_n >= 0.0) || !std::isfinite(mean_n)) {
        fail(ErrorCode::kInvalidArgument, "thermal occupation must be >= 0");
    }
    InitialStateSpec s;
    s.kind = Kind::kThermal;
    s.mean_n = mean_n;
    return s;
}

InitialStateSpec InitialStateSpec::cat(cplx alpha) {
    InitialStateSpec s;
    s.kind = Kind::kCat;
    s.alpha = alpha;
    return s;
}

InitialStateSpec InitialStateSpec::cat_node(cplx alpha) {
    InitialStateSpec s;
    s.kind = Kind::kCatNode;
    s.alpha = alpha;
    return s;
}

InitialStateSpec InitialStateSpec::parse(const std::string &text) {
    static const std::regex re(R"(^\s*([a-z_]+)\s*(?:\(\s*([^,\s)]+)\s*(?:,\s*([^,\s)]+)\s*)?\))?\s*$)");
    std::smatch m;
    if (!std::regex_match(text, m, re)) fail(ErrorCode::kConfigError, "malformed initial state '" + text + "'");
    const std::string kind = m[1];
    const bool has_arg = m[2].matched;
    const bool has_imag = m[3].matched;
    auto complex_arg = [&]() {
        if (!has_arg) fail(ErrorCode::kConfigError, "initial state '" + kind + "' needs an amplitude");
        const double re_part = parse_number(m[2], text);
        const double im_part = has_imag ? parse_number(m[3], text) : 0.0;
        return cplx(re_part, im_part);
    };
    auto real_arg = [&]() {
        if (!has_arg || has_imag) fail(ErrorCode::kConfigError, "initial state '" + kind + "' needs one real value");
        return parse_number(m[2], text);
    };
    if (kind == "vacuum") {
        if (has_arg) fail(ErrorCode::kConfigError, "vacuum takes no argument");
        return vacuum();
    }
    if (kind == "coherent") return coherent(complex_arg());
    if (kind == "cat") return cat(complex_arg());
    if (kind == "cat_node") return cat_node(complex_arg());
    if (kind == "thermal") {
        const double n = real_arg();
        if (n < 0.0) fail(ErrorCode::kConfigError, "thermal occupation must be >= 0");
        return thermal(n);
    }
    if (kind == "fock") {
        const double n = real_arg();
        if (n < 0.0 || n != std::floor(n) || n > 1e6) {
            fail(ErrorCode::kConfigError, "fock index must be a non-negative integer");
        }
        return fock(static_cast<int>(n));
    }
    fail(ErrorCode::kConfigError, "unknown initial state kind '" + kind + "'");
}

std::string InitialStateSpec::to_string() const {
    switch (kind) {
        case Kind::kVacuum:
            return "vacuum";
        case Kind::kCoherent:
            return "coherent(" + format_complex(alpha, false) + ")";
        case Kind::kFock:
            return "fock(" + std::to_string(fock_n) + ")";
        case Kind::kThermal:
            return "thermal(" + format_double(mean_n) + ")";
        case Kind::kCat:
            return "cat(" + format_complex(alpha, false) + ")";
        case Kind::kCatNode:
            return "cat_node(" + format_complex(alpha, true) + ")";
    }
    return "vacuum";
}

double InitialStateSpec::mean_occupation() const {
    const double a2 = std::norm(alpha);
    switch (kind) {
        case Kind::kVacuum:
            return 0.0;
        case Kind::kCoherent:
        case Kind::kCatNode:
            return a2;
        case Kind::kFock:
            return fock_n;
        case Kind::kThermal:
            return mean_n;
        case Kind::kCat:
            return a2 * std::tanh(a2);
    }
    return 0.0;
}

int InitialStateSpec::required_dim() const {
    switch (kind) {
        case Kind::kVacuum:
            return 2;
        case Kind::kCoherent:
        case Kind::kCatNode:
        case Kind::kCat:
            return std::max(2, recommended_dim(std::norm(alpha)));
        case Kind::kFock:
            return std::max(2, fock_n + 1);
        case Kind::kThermal: {
            if (mean_n == 0.0) return 2;
            const double ratio = mean_n / (1.0 + mean_n);
            // Geometric tail an order below the truncation tolerance.
            return std::max(2, static_cast<int>(std::ceil(std::log(0.1 * kTailError) / std::log(ratio))));
        }
    }
    return 2;
}

QuantumState InitialStateSpec::lab_state(int dim) const {
    switch (kind) {
        case Kind::kVacuum:
            return fock_state(dim, 0);
        case Kind::kCoherent:
        case Kind::kCatNode:
            return coherent_state(dim, alpha);
        case Kind::kFock:
            return fock_state(dim, fock_n);
        case Kind::kThermal:
            return thermal_state(dim, mean_n);
        case Kind::kCat:
            return cat_state(dim, alpha);
    }
    return fock_state(dim, 0);
}

const std::vector<std::string> &observable_names() {
    static const std::vector<std::string> names{obs::kFidelity, obs::kNm,      obs::kNmTilde, obs::kNr,
                                                obs::kNrTilde,  obs::kAmTilde, obs::kArTilde, obs::kSigmaMinus,
                                                obs::kPExcited, obs::kNExc};
    return names;
}

// ------------------------------------------------------------------ scenario

double ScenarioConfig::default_dt_us(HamiltonianForm form) {
    return form == HamiltonianForm::kRwa ? 0.01 : 0.001;
}

void ScenarioConfig::validate() const {
    params.validate();
    if (!(target_n_m >= 0.0) || !std::isfinite(target_n_m)) {
        fail(ErrorCode::kConfigError, "target_n_m must be a non-negative number");
    }
    if (dims.memory < 2 || dims.readout < 2) fail(ErrorCode::kConfigError, "mode dimensions must be >= 2");
    if (!(dt_us > 0.0) || !std::isfinite(dt_us)) fail(ErrorCode::kConfigError, "dt must be positive");
    if (!(t_final_us >= 0.0) || !std::isfinite(t_final_us)) {
        fail(ErrorCode::kConfigError, "t_final must be non-negative");
    }
    if (!(record_interval_us > 0.0)) fail(ErrorCode::kConfigError, "record interval must be positive");
    if (full_in_lab_basis && form != HamiltonianForm::kFull) {
        fail(ErrorCode::kConfigError, "the lab basis applies to the full form only");
    }
    const auto &known = observable_names();
    for (const auto &o : observables) {
        if (std::find(known.begin(), known.end(), o) == known.end()) {
            fail(ErrorCode::kConfigError, "unknown observable '" + o + "'");
        }
    }
    for (double t : snapshot_times_us) {
        if (!(t >= 0.0)) fail(ErrorCode::kConfigError, "snapshot times must be non-negative");
    }
}

ScenarioResult run_scenario(const ScenarioConfig &cfg) {
    cfg.validate();
    ScenarioResult out;
    out.config = cfg;
    out.calibration = calibrate_drives(cfg.target_n_m, cfg.params);
    const DriveCalibration &cal = out.calibration;
    const SystemParams p = cal.apply(cfg.params);
    const ModeDims &dims = cfg.dims;

    Basis basis;
    basis.lab = cfg.form == HamiltonianForm::kFull && cfg.full_in_lab_basis;
    basis.abar_m = cal.abar_m;
    basis.abar_r = cal.abar_r;

    Operator h;
    CollapseSet c;
    EvolveOptions eo;
    switch (cfg.form) {
        case HamiltonianForm::kRwa:
            h = build_rwa_hamiltonian(cal, p.chi_m, p.chi_r, dims);
            c = standard_collapses(p, HamiltonianForm::kRwa, dims, cfg.noise_frame);
            eo.charges = excitation_charges(dims);
            break;
        case HamiltonianForm::kDisplaced:
            h = build_displaced_hamiltonian(p, cal, dims);
            c = standard_collapses(p, HamiltonianForm::kDisplaced, dims, cfg.noise_frame);
            break;
        case HamiltonianForm::kFull:
            if (basis.lab) {
                h = build_full_hamiltonian(p, dims);
                c = standard_collapses(p, HamiltonianForm::kFull, dims);
            } else {
                // The exact image of the lab noise is the physical frame.
                h = build_full_hamiltonian_displaced(p, dims);
                c = standard_collapses(p, HamiltonianForm::kDisplaced, dims, QubitNoiseFrame::kPhysical);
            }
            break;
    }

    std::vector<NamedObservable> observables;
    for (const auto &name : cfg.observables) {
        observables.push_back({name, observable_operator(name, dims, basis)});
    }

    std::vector<QuantumState> factors;
    if (basis.lab) {
        factors.push_back(lab_qubit_start());
        factors.push_back(cfg.initial.lab_state(dims.memory));
        factors.push_back(cfg.readout_at_steady_state ? coherent_state(dims.readout, cal.abar_r)
                                                      : fock_state(dims.readout, 0));
    } else {
        factors.push_back(qubit_state_index(1));
        const int in_dim = std::max(dims.memory, cfg.initial.required_dim());
        factors.push_back(displace_state(cfg.initial.lab_state(in_dim), -cal.abar_m, dims.memory));
        factors.push_back(cfg.readout_at_steady_state ? fock_state(dims.readout, 0)
                                                      : coherent_state(dims.readout, -cal.abar_r));
    }

    eo.record_every = std::max(1, static_cast<int>(std::lround(cfg.record_interval_us / cfg.dt_us)));
    eo.snapshot_times_us = cfg.snapshot_times_us;
    out.trajectory = evolve(h, c, factors, cfg.t_final_us, cfg.dt_us, observables, eo);
    if (out.trajectory.has(obs::kFidelity)) {
        out.crossing_us = crossing_time(out.trajectory, obs::kFidelity, kFidelityThreshold);
    }
    out.warnings = take_warnings();
    return out;
}

// ------------------------------------------------------------------- runners

ScenarioConfig initialization_config(double target_n_m, HamiltonianForm form, const ScenarioOverrides &o) {
    ScenarioConfig cfg;
    cfg.name = "fig2a";
    cfg.form = form;
    cfg.target_n_m = target_n_m * reduced_factor(o);
    cfg.dims = ModeDims{16, 6};
    cfg.t_final_us = 160.0 * time_factor(o);
    cfg.dt_us = ScenarioConfig::default_dt_us(form);
    return apply_overrides(cfg, o);
}

ScenarioResult run_initialization(double target_n_m, HamiltonianForm form, const ScenarioOverrides &o) {
    return run_scenario(initialization_config(target_n_m, form, o));
}

ScenarioConfig max_rate_config(const ScenarioOverrides &o, double drive_scale) {
    if (!(drive_scale > 0.0) || !std::isfinite(drive_scale)) {
        fail(ErrorCode::kInvalidArgument, "drive scale must be positive");
    }
    ScenarioConfig cfg;
    cfg.name = "fig3";
    cfg.form = HamiltonianForm::kRwa;
    cfg.target_n_m = kMaxRateTarget * drive_scale * drive_scale;
    // Displaced start sqrt(99.4) - sqrt(24.8); halved in the reduced variant.
    double offset = std::sqrt(kMaxRateLabStart) - std::sqrt(kMaxRateTarget);
    offset *= std::sqrt(reduced_factor(o));
    cfg.initial = InitialStateSpec::coherent(std::sqrt(cfg.target_n_m) + offset);
    cfg.readout_at_steady_state = true;
    cfg.dims = o.reduced ? ModeDims{recommended_dim(offset * offset), 8} : ModeDims{60, 8};
    cfg.t_final_us = 80.0 * time_factor(o);
    cfg.dt_us = ScenarioConfig::default_dt_us(cfg.form);
    cfg.observables = {obs::kFidelity, obs::kNmTilde, obs::kNrTilde, obs::kArTilde,
                       obs::kSigmaMinus, obs::kPExcited, obs::kNExc};
    return apply_overrides(cfg, o);
}

std::pair<double, double> plateau_window(const Trajectory &traj, const std::string &observable) {
    const auto n = traj.series(observable);
    if (n.empty()) fail(ErrorCode::kTooFewSamples, "empty trajectory");
    const double n0 = n.front();
    std::optional<double> t_hi, t_lo;
    for (size_t i = 0; i < n.size(); ++i) {
        if (!t_hi && n[i] <= kPlateauUpper * n0) t_hi = traj.times()[i];
        if (!t_lo && n[i] <= kPlateauLower * n0) t_lo = traj.times()[i];
    }
    if (!t_hi || !t_lo) fail(ErrorCode::kTooFewSamples, "occupation never left the plateau window");
    return {*t_hi, *t_lo};
}

MaxRateResult run_max_rate(const ScenarioOverrides &o, double drive_scale) {
    MaxRateResult out;
    out.run = run_scenario(max_rate_config(o, drive_scale));
    out.n_tilde_start = out.run.trajectory.series(obs::kNmTilde).front();
    const auto [t0, t1] = plateau_window(out.run.trajectory, obs::kNmTilde);
    out.fit = linear_rate_fit(out.run.trajectory, obs::kNmTilde, t0, t1);
    return out;
}

void ReferenceDecayModel::validate() const {
    if (!(T_ms > 0.0) || !std::isfinite(T_ms)) fail(ErrorCode::kInvalidParameters, "decay time must be positive");
    if (!(n_tilde_0 >= 0.0)) fail(ErrorCode::kInvalidParameters, "initial occupation must be >= 0");
}

std::vector<double> reference_exponential(const ReferenceDecayModel &model, std::span<const double> times_us) {
    model.validate();
    const double t_us = model.T_ms * 1000.0;
    const double k = model.occupation_decay ? 1.0 : 2.0;
    std::vector<double> out;
    out.reserve(times_us.size());
    for (double t : times_us) out.push_back(model.n_tilde_0 * std::exp(-k * t / t_us));
    return out;
}

std::vector<std::string> initial_state_names() {
    return {"cat", "fock", "thermal", "plus_node", "minus_node"};
}

ScenarioConfig initial_state_config(const std::string &state, const ScenarioOverrides &o) {
    const double f = reduced_factor(o);
    const double alpha = std::sqrt(kComparisonStart);
    InitialStateSpec spec;
    if (state == "cat") spec = InitialStateSpec::cat(alpha);
    else if (state == "fock") spec = InitialStateSpec::fock(kComparisonFock);
    else if (state == "thermal") spec = InitialStateSpec::thermal(kComparisonStart);
    else if (state == "plus_node") spec = InitialStateSpec::cat_node(alpha);
    else if (state == "minus_node") spec = InitialStateSpec::cat_node(-alpha);
    else fail(ErrorCode::kInvalidArgument, "unknown initial state '" + state + "'");

    ScenarioConfig cfg;
    cfg.name = "fig4";
    cfg.form = HamiltonianForm::kRwa;
    cfg.target_n_m = kComparisonTarget * f;
    cfg.initial = scale_occupation(spec, f);
    cfg.readout_at_steady_state = true;
    cfg.dims = ModeDims{displaced_memory_dim(cfg.initial, std::sqrt(cfg.target_n_m)), 6};
    // The reduced target cools at g = kappa/4, so the window is not shortened.
    cfg.t_final_us = 600.0;
    cfg.dt_us = ScenarioConfig::default_dt_us(cfg.form);
    cfg.record_interval_us = 0.5;
    cfg.observables = {obs::kFidelity, obs::kNmTilde, obs::kNrTilde, obs::kPExcited};
    return apply_overrides(cfg, o);
}

std::map<std::string, ScenarioResult> run_initial_state_comparison(const ScenarioOverrides &o,
                                                                   const std::vector<double> &snapshot_times_us) {
    const auto names = initial_state_names();
    std::vector<std::optional<ScenarioResult>> results(names.size());
    std::vector<std::exception_ptr> errors(names.size());
    parallel_for(static_cast<int>(names.size()), [&](int i) {
        try {
            ScenarioConfig cfg = initial_state_config(names[static_cast<size_t>(i)], o);
            cfg.snapshot_times_us = snapshot_times_us;
            results[static_cast<size_t>(i)] = run_scenario(cfg);
        } catch (...) {
            errors[static_cast<size_t>(i)] = std::current_exception();
        }
    });
    std::map<std::string, ScenarioResult> out;
    for (size_t i = 0; i < names.size(); ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        out.emplace(names[i], std::move(*results[i]));
    }
    return out;
}

ScenarioConfig drive_power_config(double g_over_kappa, const ScenarioOverrides &o) {
    if (!(g_over_kappa >= 0.0) || !std::isfinite(g_over_kappa)) {
        fail(ErrorCode::kInvalidArgument, "g/kappa must be non-negative");
    }
    ScenarioConfig cfg;
    cfg.name = "fig5";
    cfg.form = HamiltonianForm::kRwa;
    cfg.params.kappa /= 10.0;
    const double g = g_over_kappa * cfg.params.kappa;
    const double abar = g / std::abs(cfg.params.chi_m);
    cfg.target_n_m = abar * abar;
    cfg.initial = InitialStateSpec::thermal(1.0 * reduced_factor(o));
    cfg.dims = ModeDims{std::max(20, displaced_memory_dim(cfg.initial, abar)), 6};
    cfg.t_final_us = 400.0 * time_factor(o);
    cfg.dt_us = ScenarioConfig::default_dt_us(cfg.form);
    cfg.record_interval_us = 0.2;
    cfg.observables = {obs::kFidelity, obs::kNmTilde};
    return apply_overrides(cfg, o);
}

std::vector<SweepPoint> run_drive_power_sweep(const std::vector<double> &g_over_kappa, const ScenarioOverrides &o) {
    std::vector<SweepPoint> out(g_over_kappa.size());
    parallel_for(static_cast<int>(out.size()), [&](int i) {
        SweepPoint &pt = out[static_cast<size_t>(i)];
        pt.value = g_over_kappa[static_cast<size_t>(i)];
        try {
            pt.result = run_scenario(drive_power_config(pt.value, o));
            pt.crossing_us = pt.result->crossing_us;
        } catch (const std::exception &e) {
            pt.error = point_error(e);
        }
    });
    return out;
}

const char *axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::kT1:
            return "T1";
        case SweepAxis::kT2:
            return "T2";
        case SweepAxis::kOmegaR:
            return "omega_R";
        case SweepAxis::kDrive:
            return "drive";
    }
    return "?";
}

SweepAxis parse_axis(const std::string &name) {
    if (name == "T1") return SweepAxis::kT1;
    if (name == "T2") return SweepAxis::kT2;
    if (name == "omega_R") return SweepAxis::kOmegaR;
    if (name == "drive") return SweepAxis::kDrive;
    fail(ErrorCode::kConfigError, "unknown sweep axis '" + name + "' (expected T1, T2, omega_R or drive)");
}

std::vector<SweepPoint> run_qubit_imperfection_sweep(SweepAxis which, const std::vector<double> &values,
                                                     const ScenarioOverrides &o) {
    if (which != SweepAxis::kT1 && which != SweepAxis::kT2) {
        fail(ErrorCode::kInvalidArgument, "qubit imperfection sweeps run over T1 or T2");
    }
    std::vector<SweepPoint> out(values.size());
    parallel_for(static_cast<int>(out.size()), [&](int i) {
        SweepPoint &pt = out[static_cast<size_t>(i)];
        pt.value = values[static_cast<size_t>(i)];
        try {
            ScenarioConfig cfg = initialization_config(1.0, HamiltonianForm::kFull, o);
            cfg.name = which == SweepAxis::kT1 ? "appD-t1" : "appD-t2";
            (which == SweepAxis::kT1 ? cfg.params.t1_us : cfg.params.t2_us) = pt.value;
            pt.result = run_scenario(cfg);
            pt.crossing_us = pt.result->crossing_us;
        } catch (const std::exception &e) {
            pt.error = point_error(e);
        }
    });
    return out;
}

std::vector<SweepPoint> run_steady_state_sweep(SweepAxis which, const std::vector<double> &values,
                                               const ModeDims &dims) {
    if (which == SweepAxis::kDrive) fail(ErrorCode::kInvalidArgument, "steady-state sweeps run over T1, T2 or omega_R");
    std::vector<SweepPoint> out(values.size());
    parallel_for(static_cast<int>(out.size()), [&](int i) {
        SweepPoint &pt = out[static_cast<size_t>(i)];
        pt.value = values[static_cast<size_t>(i)];
        try {
            SystemParams base = SystemParams::reference();
            if (which == SweepAxis::kT1) base.t1_us = pt.value;
            if (which == SweepAxis::kT2) base.t2_us = pt.value;
            if (which == SweepAxis::kOmegaR) base.omega_r = angular_from_mhz(pt.value);
            const DriveCalibration cal = calibrate_drives(kMaxRateTarget, base);
            const SystemParams p = cal.apply(base);
            const Operator h = build_displaced_hamiltonian(p, cal, dims);
            const CollapseSet c = standard_collapses(p, HamiltonianForm::kDisplaced, dims);
            const QuantumState ss = steady_state(h, c);
            pt.steady_fidelity = fidelity_to_target(ss, 0.0, Mode::kMemory);
            take_warnings();
        } catch (const std::exception &e) {
            pt.error = point_error(e);
        }
    });
    return out;
}

RabiSweepResult run_rabi_frequency_sweep(const std::vector<double> &omega_r_mhz, const ScenarioOverrides &o) {
    RabiSweepResult out;
    out.points.resize(omega_r_mhz.size());
    std::optional<ScenarioResult> baseline;
    std::exception_ptr baseline_error;
    const int n = static_cast<int>(omega_r_mhz.size());
    parallel_for(n + 1, [&](int i) {
        if (i == n) {
            try {
                ScenarioConfig cfg = initialization_config(1.0, HamiltonianForm::kRwa, o);
                cfg.name = "appD-omegaR";
                baseline = run_scenario(cfg);
            } catch (...) {
                baseline_error = std::current_exception();
            }
            return;
        }
        SweepPoint &pt = out.points[static_cast<size_t>(i)];
        pt.value = omega_r_mhz[static_cast<size_t>(i)];
        try {
            ScenarioOverrides oo = o;
            oo.form.reset();
            ScenarioConfig cfg = initialization_config(1.0, HamiltonianForm::kDisplaced, oo);
            cfg.name = "appD-omegaR";
            cfg.params.omega_r = angular_from_mhz(pt.value);
            pt.result = run_scenario(cfg);
            pt.crossing_us = pt.result->crossing_us;
        } catch (const std::exception &e) {
            pt.error = point_error(e);
        }
    });
    if (baseline_error) std::rethrow_exception(baseline_error);
    out.baseline = std::move(*baseline);
    return out;
}

std::map<HamiltonianForm, ScenarioResult> run_frame_comparison(const ScenarioOverrides &o) {
    const std::vector<HamiltonianForm> forms{HamiltonianForm::kFull, HamiltonianForm::kDisplaced,
                                             HamiltonianForm::kRwa};
    std::vector<std::optional<ScenarioResult>> results(forms.size());
    std::vector<std::exception_ptr> errors(forms.size());
    parallel_for(static_cast<int>(forms.size()), [&](int i) {
        try {
            ScenarioOverrides oo = o;
            oo.form.reset();
            oo.dt_us.reset();
            ScenarioConfig cfg = initialization_config(1.0, forms[static_cast<size_t>(i)], oo);
            cfg.name = "appB";
            results[static_cast<size_t>(i)] = run_scenario(cfg);
        } catch (...) {
            errors[static_cast<size_t>(i)] = std::current_exception();
        }
    });
    std::map<HamiltonianForm, ScenarioResult> out;
    for (size_t i = 0; i < forms.size(); ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        out.emplace(forms[i], std::move(*results[i]));
    }
    return out;
}

SidebandParams sideband_demo_params(int detuning_sign) {
    const SystemParams ref = SystemParams::reference();
    SidebandParams p;
    p.omega_r = ref.omega_r;
    p.chi = ref.chi_r;
    p.kappa = ref.kappa;
    p.detuning_sign = detuning_sign;
    // |chi abar| = kappa/4: well inside weak coupling.
    const double abar = 0.25 * ref.kappa / std::abs(ref.chi_r);
    p.eps_c = abar * std::abs(cplx(detuning_sign * ref.omega_r, 0.5 * ref.kappa));
    p.delta_q = -p.chi * (abar * abar + 1.0);
    return p;
}

SidebandResult run_sideband_demo(const SidebandParams &p, double t_final_us, int dim) {
    SidebandResult out;
    out.params = p;
    const auto hams = build_sideband_hamiltonians(p, dim);
    const Operator &h = hams.second;
    const SpaceDescriptor space({2, dim});
    CollapseSet c(space);
    c.add("cavity_decay", embed(annihilation(dim), space, 1), p.kappa);

    DenseMatrix proj_plus = DenseMatrix::Zero(2, 2), proj_minus = DenseMatrix::Zero(2, 2);
    proj_plus(1, 1) = 1.0;
    proj_minus(0, 0) = 1.0;
    const Operator p_plus = embed(Operator(SpaceDescriptor::single(2), proj_plus), space, 0);
    const Operator p_minus = embed(Operator(SpaceDescriptor::single(2), proj_minus), space, 0);
    const std::vector<NamedObservable> observables{
        {"p_plus", p_plus}, {"p_minus", p_minus}, {"n_tilde", embed(number_operator(dim), space, 1)}};

    StateVector q(2);
    q << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const std::vector<QuantumState> factors{QuantumState::pure(SpaceDescriptor::single(2), q),
                                            fock_state(dim, 0)};
    EvolveOptions eo;
    eo.record_every = 10;
    out.trajectory = evolve(h, c, factors, t_final_us, 0.01, observables, eo);
    try {
        const QuantumState ss = steady_state(h, c);
        out.steady_p_plus = expectation(p_plus, ss).real();
        out.steady_p_minus = expectation(p_minus, ss).real();
    } catch (const Error &e) {
        out.steady_error = e.what();
    }
    take_warnings();
    return out;
}

TimestepComparison run_timestep_comparison(const ScenarioOverrides &o) {
    TimestepComparison out;
    ScenarioOverrides oo = o;
    oo.form.reset();
    oo.dt_us.reset();
    ScenarioConfig fine = initialization_config(1.0, HamiltonianForm::kRwa, oo);
    fine.name = "appE-timestep";
    fine.dt_us = 0.001;
    fine.observables = {obs::kFidelity, obs::kNmTilde};
    ScenarioConfig coarse = fine;
    coarse.dt_us = 0.01;
    std::optional<ScenarioResult> a, b;
    std::exception_ptr ea, eb;
    parallel_for(2, [&](int i) {
        try {
            if (i == 0) a = run_scenario(fine);
            else b = run_scenario(coarse);
        } catch (...) {
            (i == 0 ? ea : eb) = std::current_exception();
        }
    });
    if (ea) std::rethrow_exception(ea);
    if (eb) std::rethrow_exception(eb);
    out.fine = std::move(*a);
    out.coarse = std::move(*b);
    const auto &tf = out.fine.trajectory.times();
    const auto &tc = out.coarse.trajectory.times();
    const auto ff = out.fine.trajectory.series(obs::kFidelity);
    const auto fc = out.coarse.trajectory.series(obs::kFidelity);
    size_t j = 0;
    for (size_t i = 0; i < tc.size(); ++i) {
        while (j < tf.size() && tf[j] < tc[i] - 1e-9) ++j;
        if (j < tf.size() && std::abs(tf[j] - tc[i]) < 1e-9) {
            out.max_abs_fidelity_difference = std::max(out.max_abs_fidelity_difference, std::abs(ff[j] - fc[i]));
        }
    }
    return out;
}

// ------------------------------------------------------------------- catalog

const std::vector<CatalogEntry> &scenario_catalog() {
    static const std::vector<CatalogEntry> catalog{
        {"fig2a", "initialization from vacuum to n_m = 1 and 3, full and RWA forms"},
        {"fig3", "maximum cooling rate from n_tilde = 24.8 with the reference exponential"},
        {"fig4", "cooling of cat, Fock, thermal and cat-node initial states"},
        {"fig5", "cooling time versus normalized drive g/kappa' with kappa' = kappa/10"},
        {"appA", "single-cavity sideband demo: dressed-state selection by detuning sign"},
        {"appB", "n_m = 1 initialization under the full, displaced and RWA forms"},
        {"appD-t1", "full-form n_m = 1 initialization for several T1 values"},
        {"appD-t2", "full-form n_m = 1 initialization for several T2 values"},
        {"appD-omegaR", "displaced-form n_m = 1 initialization for several Rabi frequencies"},
        {"appD-steady", "steady-state memory fidelity versus T1, T2 or Rabi frequency"},
        {"appE-timestep", "RWA-form fidelity at dt = 1 ns versus dt = 10 ns"},
    };
    return catalog;
}

bool is_catalog_scenario(const std::string &name) {
    const auto &c = scenario_catalog();
    return std::any_of(c.begin(), c.end(), [&](const CatalogEntry &e) { return e.name == name; });
}

int sweep_threads() {
    if (const char *env = std::getenv("RDR_SIM_THREADS")) {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min<long>(v, 1024));
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int n, const std::function<void(int)> &fn) {
    if (n <= 0) return;
    const int workers = std::min(n, sweep_threads());
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (int i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto &t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace rdr
