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

// Readouts on states and trajectories.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdr/dynamics.hpp"
#include "rdr/hilbert.hpp"
#include "rdr/model.hpp"

namespace rdr {

enum class Mode { kMemory, kReadout };

const char *mode_name(Mode mode);

/// Factor index of `mode` in a space: single-mode spaces use factor 0,
/// qubit + cavity spaces factor 1, qubit x memory x readout factor 1 or 2.
int mode_factor(const SpaceDescriptor &space, Mode mode);

double photon_number(const QuantumState &state, Mode mode);

/// <alpha| rho_mode |alpha>, a probability.
double fidelity_to_target(const QuantumState &state, cplx alpha_target, Mode mode);

/// <(a^dagger - alpha^*)(a - alpha)>.
double displaced_photon_number(const QuantumState &state, cplx alpha_ref, Mode mode);

/// tr(sigma_- rho) on the qubit factor (factor 0).
cplx sigma_minus_expectation(const QuantumState &state);

struct WignerGrid {
    std::vector<double> x_axis;  ///< Re(beta)
    std::vector<double> p_axis;  ///< Im(beta)
    Eigen::MatrixXd values;      ///< values(ip, ix)

    /// Trapezoid-free cell sum of W dx dp.
    double integral() const;
};

/// W(beta) = (2/pi) tr(D(beta) P D(-beta) rho_mode). Single-mode states are
/// used as is; composite states are reduced onto `mode` first.
WignerGrid wigner(const QuantumState &state, std::span<const double> x_axis,
                  std::span<const double> p_axis, Mode mode = Mode::kMemory);

/// n evenly spaced values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, int n);

/// First time the series reaches `threshold`, linearly interpolated.
std::optional<double> crossing_time(const Trajectory &traj, const std::string &observable,
                                    double threshold);

struct RateFit {
    double slope = 0.0;  ///< per us; negative while cooling
    double intercept = 0.0;
    double t_start = 0.0;
    double t_end = 0.0;
    double residual = 0.0;  ///< rms deviation from the line
    int samples = 0;
};

/// Least-squares line over samples with t in [t_start, t_end]. Throws
/// kTooFewSamples below 10 samples.
RateFit linear_rate_fit(const Trajectory &traj, const std::string &observable, double t_start,
                        double t_end);

// Operators for evolve() on qubit x memory x readout.
Operator mode_annihilation(const ModeDims &dims, Mode mode);
Operator mode_number(const ModeDims &dims, Mode mode);
/// (a^dagger - alpha^*)(a - alpha).
Operator mode_displaced_number(const ModeDims &dims, Mode mode, cplx alpha);
/// |alpha><alpha| on one mode. Fidelity observable.
Operator mode_coherent_projector(const ModeDims &dims, Mode mode, cplx alpha);
Operator qubit_operator(const ModeDims &dims, PauliAxis axis);

}  // namespace rdr
