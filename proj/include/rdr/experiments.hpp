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

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rdr/dynamics.hpp"
#include "rdr/model.hpp"
#include "rdr/observables.hpp"

namespace rdr {

/// Memory-mode initial state in the lab frame.
struct InitialStateSpec {
    enum class Kind { kVacuum, kCoherent, kFock, kThermal, kCat, kCatNode };

    Kind kind = Kind::kVacuum;
    cplx alpha = 0.0;    ///< coherent, cat, cat_node
    int fock_n = 0;      ///< fock
    double mean_n = 0.0; ///< thermal

    static InitialStateSpec vacuum() { return {}; }
    static InitialStateSpec coherent(cplx alpha);
    static InitialStateSpec fock(int n);
    static InitialStateSpec thermal(double mean_n);
    static InitialStateSpec cat(cplx alpha);
    /// One coherent component +alpha or -alpha of the cat.
    static InitialStateSpec cat_node(cplx alpha);

    /// Accepts "vacuum", "coherent(a)", "fock(n)", "thermal(n)", "cat(a)",
    /// "cat_node(+a)" / "cat_node(-a)". Throws kConfigError.
    static InitialStateSpec parse(const std::string &text);
    std::string to_string() const;

    /// Mean lab-frame occupation.
    double mean_occupation() const;
    /// Smallest truncation that holds the state to the tail tolerance.
    int required_dim() const;
    /// The state truncated to `dim` levels.
    QuantumState lab_state(int dim) const;
};

/// Observables a scenario can record; names double as output columns.
namespace obs {
inline constexpr const char *kFidelity = "fidelity";
inline constexpr const char *kNm = "n_m";
inline constexpr const char *kNmTilde = "n_tilde_m";
inline constexpr const char *kNr = "n_r";
inline constexpr const char *kNrTilde = "n_tilde_r";
inline constexpr const char *kAmTilde = "a_m_tilde";
inline constexpr const char *kArTilde = "a_r_tilde";
inline constexpr const char *kSigmaMinus = "sigma_minus";
inline constexpr const char *kPExcited = "p_excited";
inline constexpr const char *kNExc = "n_exc";
}  // namespace obs

/// All recognised observable names.
const std::vector<std::string> &observable_names();

struct ScenarioConfig {
    std::string name;
    HamiltonianForm form = HamiltonianForm::kRwa;
    SystemParams params = SystemParams::reference();
    double target_n_m = 1.0;
    InitialStateSpec initial;
    /// Readout starts in its driven steady state instead of the lab vacuum.
    bool readout_at_steady_state = false;
    ModeDims dims;
    double t_final_us = 100.0;
    double dt_us = 0.01;
    /// Recording interval; rounded to a whole number of steps.
    double record_interval_us = 0.1;
    std::vector<std::string> observables{obs::kFidelity, obs::kNm, obs::kNmTilde, obs::kNrTilde,
                                         obs::kPExcited};
    std::vector<double> snapshot_times_us;
    QubitNoiseFrame noise_frame = QubitNoiseFrame::kPhysical;
    /// Integrate the full form in the lab basis instead of its displaced image.
    bool full_in_lab_basis = false;

    /// 1 ns for the full and displaced forms, 10 ns for the RWA form.
    static double default_dt_us(HamiltonianForm form);
    /// Throws kConfigError on inconsistent settings.
    void validate() const;
};

struct ScenarioResult {
    ScenarioConfig config;
    DriveCalibration calibration;
    Trajectory trajectory;
    /// First 0.99 fidelity crossing, if fidelity was recorded and crossed.
    std::optional<double> crossing_us;
    std::vector<std::string> warnings;
};

/// Fidelity threshold used for every crossing time.
inline constexpr double kFidelityThreshold = 0.99;

/// Builds the Hamiltonian, collapses and initial state for `cfg` and evolves.
ScenarioResult run_scenario(const ScenarioConfig &cfg);

/// Overrides applied on top of a catalog scenario.
struct ScenarioOverrides {
    std::optional<ModeDims> dims;
    std::optional<double> dt_us;
    std::optional<double> t_final_us;
    std::optional<HamiltonianForm> form;
    /// Occupations divided by 4 and times by 2.
    bool reduced = false;
};

// ------------------------------------------------------------------ runners

ScenarioConfig initialization_config(double target_n_m, HamiltonianForm form,
                                     const ScenarioOverrides &o = {});
ScenarioResult run_initialization(double target_n_m, HamiltonianForm form,
                                  const ScenarioOverrides &o = {});

struct MaxRateResult {
    ScenarioResult run;
    RateFit fit;
    double n_tilde_start = 0.0;
};
/// Max-rate calibration (g = kappa/2 at target 24.8); `drive_scale` scales
/// every drive amplitude.
ScenarioConfig max_rate_config(const ScenarioOverrides &o = {}, double drive_scale = 1.0);
MaxRateResult run_max_rate(const ScenarioOverrides &o = {}, double drive_scale = 1.0);
/// Window of the plateau fit: n_tilde between these fractions of its start.
inline constexpr double kPlateauUpper = 0.9;
inline constexpr double kPlateauLower = 0.55;
/// Times where n_tilde_m first drops below upper*n0 and lower*n0.
std::pair<double, double> plateau_window(const Trajectory &traj, const std::string &observable);

struct ReferenceDecayModel {
    double T_ms = 0.6;
    double xi = 0.15;
    double n_tilde_0 = 24.8;
    /// Occupation decays as exp(-t/T); otherwise the amplitude does.
    bool occupation_decay = true;
    void validate() const;
};
std::vector<double> reference_exponential(const ReferenceDecayModel &model,
                                          std::span<const double> times_us);

/// Names: cat, fock, thermal, plus_node, minus_node.
std::vector<std::string> initial_state_names();
ScenarioConfig initial_state_config(const std::string &state, const ScenarioOverrides &o = {});
std::map<std::string, ScenarioResult> run_initial_state_comparison(
    const ScenarioOverrides &o = {}, const std::vector<double> &snapshot_times_us = {});

struct SweepPoint {
    double value = 0.0;
    std::optional<ScenarioResult> result;
    std::optional<double> crossing_us;
    std::optional<double> steady_fidelity;
    /// Non-empty when the point failed; the sweep itself keeps going.
    std::string error;
};

/// Drive sweep at kappa' = kappa/10 from a lab thermal state nbar = 1.
ScenarioConfig drive_power_config(double g_over_kappa, const ScenarioOverrides &o = {});
std::vector<SweepPoint> run_drive_power_sweep(const std::vector<double> &g_over_kappa,
                                              const ScenarioOverrides &o = {});

enum class SweepAxis { kT1, kT2, kOmegaR, kDrive };
const char *axis_name(SweepAxis axis);
/// "T1", "T2", "omega_R", "drive". Throws kConfigError.
SweepAxis parse_axis(const std::string &name);

/// Time evolutions of the full form at target 1; values in us.
std::vector<SweepPoint> run_qubit_imperfection_sweep(SweepAxis which, const std::vector<double> &values,
                                                     const ScenarioOverrides &o = {});
/// Steady-state memory fidelity of the displaced form at target 24.8.
/// T1/T2 values in us, omega_R values in MHz (Omega_R / 2pi).
std::vector<SweepPoint> run_steady_state_sweep(SweepAxis which, const std::vector<double> &values,
                                               const ModeDims &dims = {12, 4});
/// Displaced-form evolutions at target 1 for each Omega_R / 2pi (MHz).
struct RabiSweepResult {
    std::vector<SweepPoint> points;
    ScenarioResult baseline;  ///< RWA form
};
RabiSweepResult run_rabi_frequency_sweep(const std::vector<double> &omega_r_mhz,
                                         const ScenarioOverrides &o = {});

/// Target-1 initialization under the full, displaced and RWA forms.
std::map<HamiltonianForm, ScenarioResult> run_frame_comparison(const ScenarioOverrides &o = {});

struct SidebandResult {
    SidebandParams params;
    Trajectory trajectory;  ///< p_plus, p_minus, n_tilde
    std::optional<double> steady_p_plus;
    std::optional<double> steady_p_minus;
    std::string steady_error;
};
/// Reference single-cavity demo parameters: chi = chi_r, g = kappa/4.
SidebandParams sideband_demo_params(int detuning_sign);
SidebandResult run_sideband_demo(const SidebandParams &p, double t_final_us = 20.0, int dim = 8);

struct TimestepComparison {
    ScenarioResult fine;
    ScenarioResult coarse;
    double max_abs_fidelity_difference = 0.0;
};
/// RWA target-1 run at dt = 1 ns and dt = 10 ns on a common grid.
TimestepComparison run_timestep_comparison(const ScenarioOverrides &o = {});

// ------------------------------------------------------------------ catalog

struct CatalogEntry {
    std::string name;
    std::string description;
};
const std::vector<CatalogEntry> &scenario_catalog();
bool is_catalog_scenario(const std::string &name);

/// Worker count for sweeps: RDR_SIM_THREADS if set and positive, else the
/// hardware concurrency.
int sweep_threads();
/// Runs fn(i) for i in [0, n) on sweep_threads() workers.
void parallel_for(int n, const std::function<void(int)> &fn);

}  // namespace rdr
