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

// JSON configuration with explicit unit suffixes. Frequencies are given as
// "<name>_over_2pi_mhz" or "<name>_rad_per_us" (exactly one of the two);
// times as "<name>_us" or "dt_ns". Unknown keys are rejected.

#include <json.hpp>

#include "rdr/experiments.hpp"

namespace rdr {

using Json = nlohmann::json;

/// Keys: kappa, omega_r, chi_m, chi_r (frequencies), t1_us, t2_us (number or
/// "inf"). Missing keys keep the reference values.
SystemParams params_from_json(const Json &j);
/// Every frequency with both its MHz and rad/us form.
Json params_to_json(const SystemParams &p);

/// Keys: name, form, target_n_m, params, initial_state, readout_at_steady_state,
/// dims [N_m, N_r], t_final_us, dt_ns, record_interval_us, observables,
/// snapshot_times_us, noise_frame ("physical" | "renamed"), full_in_lab_basis.
ScenarioConfig scenario_from_json(const Json &j);
/// Fully resolved form; scenario_from_json(scenario_to_json(c)) reproduces c.
Json scenario_to_json(const ScenarioConfig &c);

/// Keys: dims, dt_ns, t_final_us, form, reduced.
ScenarioOverrides overrides_from_json(const Json &j);
Json overrides_to_json(const ScenarioOverrides &o);

/// Weak-coupling verdict on g = |chi_r abar_r| against kappa/2:
/// "satisfied" below 98%, "boundary" within 2%, "violated" above.
const char *weak_coupling_verdict(double g, double kappa);
Json calibration_to_json(const DriveCalibration &c, const SystemParams &base);

/// Parses text; syntax errors become kConfigError.
Json parse_json(const std::string &text);

}  // namespace rdr
