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

#include <gtest/gtest.h>

#include <cmath>

#include "rdr/config.hpp"
#include "test_support.hpp"

namespace rdr {
namespace {

using testing::code_of;

TEST(Config, MhzKeysAreConvertedToAngular) {
    const SystemParams p = params_from_json(parse_json(R"({"kappa_over_2pi_mhz": 0.5, "chi_r_rad_per_us": -8.0})"));
    EXPECT_DOUBLE_EQ(p.kappa, 2.0 * M_PI * 0.5);
    EXPECT_DOUBLE_EQ(p.chi_r, -8.0);
    EXPECT_DOUBLE_EQ(p.omega_r, SystemParams::reference().omega_r);
}

TEST(Config, BothUnitsForOneFrequencyAreRejected) {
    const Json j = parse_json(R"({"kappa_over_2pi_mhz": 0.5, "kappa_rad_per_us": 3.0})");
    EXPECT_EQ(code_of([&] { params_from_json(j); }), ErrorCode::kConfigError);
}

TEST(Config, UnknownKeysAreRejected) {
    EXPECT_EQ(code_of([] { params_from_json(parse_json(R"({"kappa": 1.0})")); }), ErrorCode::kConfigError);
    EXPECT_EQ(code_of([] { scenario_from_json(parse_json(R"({"t_final": 1.0})")); }), ErrorCode::kConfigError);
    EXPECT_EQ(code_of([] { overrides_from_json(parse_json(R"({"dt": 1.0})")); }), ErrorCode::kConfigError);
}

TEST(Config, InvalidValuesBecomeConfigErrors) {
    for (const char *text : {R"({"t1_us": -1})", R"({"t1_us": "forever"})", R"({"kappa_rad_per_us": 0})",
                             R"({"t1_us": 10, "t2_us": 30})", R"({"omega_r_over_2pi_mhz": "20"})"}) {
        EXPECT_EQ(code_of([&] { params_from_json(parse_json(text)); }), ErrorCode::kConfigError) << text;
    }
    for (const char *text : {R"({"dims": [1, 4]})", R"({"dims": [10]})", R"({"dims": [10.5, 4]})",
                             R"({"dt_ns": 0})", R"({"form": "B1"})", R"({"observables": ["x"]})",
                             R"({"noise_frame": "lab"})", R"j({"initial_state": "fock(-1)"})j",
                             R"({"form": "rwa", "full_in_lab_basis": true})", R"([1, 2])"}) {
        EXPECT_EQ(code_of([&] { scenario_from_json(parse_json(text)); }), ErrorCode::kConfigError) << text;
    }
    EXPECT_EQ(code_of([] { parse_json("{not json"); }), ErrorCode::kConfigError);
}

TEST(Config, InfiniteTimeConstants) {
    const SystemParams p = params_from_json(parse_json(R"({"t1_us": "inf", "t2_us": 1e12})"));
    EXPECT_TRUE(is_effectively_infinite(p.t1_us));
    EXPECT_TRUE(is_effectively_infinite(p.t2_us));
}

TEST(Config, ScenarioDefaultsFollowForm) {
    EXPECT_DOUBLE_EQ(scenario_from_json(parse_json(R"({"form": "full"})")).dt_us, 0.001);
    EXPECT_DOUBLE_EQ(scenario_from_json(parse_json(R"({"form": "rwa"})")).dt_us, 0.01);
    EXPECT_DOUBLE_EQ(scenario_from_json(parse_json(R"({"form": "rwa", "dt_ns": 5})")).dt_us, 0.005);
}

TEST(Config, ScenarioRoundTrip) {
    const Json in = parse_json(R"j({
        "name": "custom", "form": "displaced", "target_n_m": 2.5,
        "params": {"t1_us": 30, "t2_us": 40, "omega_r_over_2pi_mhz": 10},
        "initial_state": "cat_node(-1.5)", "readout_at_steady_state": true,
        "dims": [18, 5], "t_final_us": 3, "dt_ns": 2, "record_interval_us": 0.05,
        "observables": ["fidelity", "n_m"], "snapshot_times_us": [1, 2],
        "noise_frame": "renamed"})j");
    const ScenarioConfig a = scenario_from_json(in);
    const ScenarioConfig b = scenario_from_json(scenario_to_json(a));
    EXPECT_EQ(scenario_to_json(a), scenario_to_json(b));
    EXPECT_EQ(b.name, "custom");
    EXPECT_EQ(b.form, HamiltonianForm::kDisplaced);
    EXPECT_EQ(b.initial.kind, InitialStateSpec::Kind::kCatNode);
    EXPECT_EQ(b.dims.memory, 18);
    EXPECT_DOUBLE_EQ(b.dt_us, 0.002);
    EXPECT_DOUBLE_EQ(b.params.omega_r, 2.0 * M_PI * 10.0);
    EXPECT_EQ(b.noise_frame, QubitNoiseFrame::kRenamed);
    EXPECT_EQ(b.snapshot_times_us, (std::vector<double>{1.0, 2.0}));
}

TEST(Config, OverridesRoundTrip) {
    const Json in = parse_json(R"({"dims": [9, 3], "dt_ns": 5, "t_final_us": 7, "form": "full", "reduced": true})");
    const ScenarioOverrides o = overrides_from_json(in);
    EXPECT_EQ(o.dims->memory, 9);
    EXPECT_DOUBLE_EQ(*o.dt_us, 0.005);
    EXPECT_EQ(*o.form, HamiltonianForm::kFull);
    EXPECT_TRUE(o.reduced);
    EXPECT_EQ(overrides_to_json(overrides_from_json(overrides_to_json(o))), overrides_to_json(o));
    EXPECT_FALSE(overrides_from_json(Json()).reduced);
}

TEST(Config, ParamsCarryBothUnits) {
    const Json j = params_to_json(SystemParams::reference());
    EXPECT_NEAR(j["kappa"]["over_2pi_mhz"].get<double>(), 0.419, 1e-12);
    EXPECT_NEAR(j["kappa"]["rad_per_us"].get<double>(), 2.0 * M_PI * 0.419, 1e-12);
}

TEST(Config, WeakCouplingVerdict) {
    EXPECT_STREQ(weak_coupling_verdict(0.9, 2.0), "satisfied");
    EXPECT_STREQ(weak_coupling_verdict(1.0, 2.0), "boundary");
    EXPECT_STREQ(weak_coupling_verdict(1.019, 2.0), "boundary");
    EXPECT_STREQ(weak_coupling_verdict(1.1, 2.0), "violated");
    const SystemParams base = SystemParams::reference();
    const Json c = calibration_to_json(calibrate_drives(24.8, base), base);
    EXPECT_EQ(c["weak_coupling"]["verdict"], "boundary");
    EXPECT_EQ(calibration_to_json(calibrate_drives(1.0, base), base)["weak_coupling"]["verdict"], "satisfied");
}

}  // namespace
}  // namespace rdr
