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

// System parameters, drive calibration and Hamiltonian builders.
//
// Units: every frequency and rate is angular, in rad/us. Inputs quoted as
// "f/2pi in MHz" go through angular_from_mhz(). Drive amplitudes epsilon are
// already angular in the reference parameter set (epsilon_m = 125.7 rad/us
// gives <n_m> = 1 at Omega_R/2pi = 20 MHz), so they are taken verbatim.
//
// Dressed qubit states: |+> is the Rabi-dressed state with energy +Omega_R/2
// in the drive frame (sigma_x = -1), |-> the one with -Omega_R/2. After the
// sigma_x <-> sigma_z rename, |+> is basis index 1 and |-> is index 0.

#include <numbers>
#include <utility>

#include "rdr/hilbert.hpp"

namespace rdr {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// 1e10 ns. Time constants at or above this value produce zero rates.
inline constexpr double kEffectivelyInfiniteUs = 1e7;

inline double angular_from_mhz(double f_over_2pi_mhz) { return kTwoPi * f_over_2pi_mhz; }
inline bool is_effectively_infinite(double t_us) { return !(t_us < kEffectivelyInfiniteUs); }

struct SystemParams {
    double kappa = 0.0;    ///< readout decay rate
    double omega_r = 0.0;  ///< Rabi frequency
    double chi_m = 0.0;    ///< memory dispersive shift (signed)
    double chi_r = 0.0;    ///< readout dispersive shift (signed)
    cplx eps_m{0.0, 0.0};
    cplx eps_r{0.0, 0.0};
    double delta_q = 0.0;  ///< Rabi-drive detuning
    double t1_us = kEffectivelyInfiniteUs;
    double t2_us = kEffectivelyInfiniteUs;

    /// kappa/2pi = 0.419 MHz, Omega_R/2pi = 20 MHz, chi_r/2pi = -1.3 MHz,
    /// chi_m/2pi = -0.042 MHz, ideal qubit, drives off.
    static SystemParams reference();

    /// Throws kInvalidParameters on kappa <= 0, omega_r <= 0 or T2 > 2 T1.
    void validate() const;
};

struct ModeDims {
    int memory = 16;
    int readout = 6;
    SpaceDescriptor space() const { return SpaceDescriptor({2, memory, readout}); }
};

struct SteadyAmplitudes {
    cplx memory;
    cplx readout;
};

struct DriveCalibration {
    double target_n_m = 0.0;
    cplx abar_m;
    cplx abar_r;
    cplx eps_m;
    cplx eps_r;
    double g_m = 0.0;  ///< |chi_m| |abar_m|
    double g_r = 0.0;  ///< |chi_r| |abar_r|
    double delta_q = 0.0;
    bool weak_coupling_ok = true;
    double predicted_max_rate = 0.0;  ///< photons/us

    /// Copy of `base` with the calibrated drives and detuning filled in.
    SystemParams apply(const SystemParams &base) const;
};

struct SidebandParams {
    double omega_r = 0.0;
    double delta_q = 0.0;
    double chi = 0.0;
    cplx eps_c{0.0, 0.0};
    double kappa = 0.0;
    int detuning_sign = 1;  ///< cavity detuning Delta = sign * Omega_R
};

/// abar_m = eps_m / Omega_R, abar_r = eps_r / (Omega_R + i kappa/2).
SteadyAmplitudes steady_amplitudes(const SystemParams &params);

/// Delta_q = -chi_m (|abar_m|^2 + 1) - chi_r (|abar_r|^2 + 1).
double stark_detuning(cplx abar_m, cplx abar_r, double chi_m, double chi_r);

/// Matches g_r = g_m for a memory target occupation, with abar_m real positive
/// and eps_r real positive.
DriveCalibration calibrate_drives(double target_n_m, const SystemParams &base);

/// |chi_r abar_r| <= kappa/2, equality included.
bool weak_coupling_ok(const DriveCalibration &calib, double kappa);

double max_cooling_rate(double kappa);

/// Operators on qubit (x) memory (x) readout, reused by every builder.
struct CompositeOps {
    SpaceDescriptor space;
    Operator id, a_m, a_r, n_m, n_r, sx, sy, sz, sp, sm;
};
CompositeOps composite_ops(const ModeDims &dims);

/// Drive-frame Hamiltonian with every term of the dispersive model.
Operator build_full_hamiltonian(const SystemParams &params, const ModeDims &dims);

/// The full Hamiltonian expressed exactly in the displaced basis
/// a -> a + abar (abar from steady_amplitudes) with a Hadamard on the qubit.
/// Equals the displaced form plus the leftover constant sigma_x term, so
/// occupations stay small and the integrator step is set by the couplings.
Operator build_full_hamiltonian_displaced(const SystemParams &params, const ModeDims &dims);

/// Displaced frame with sigma_x <-> sigma_z renamed, before the RWA.
Operator build_displaced_hamiltonian(const SystemParams &params, const DriveCalibration &calib,
                                     const ModeDims &dims);

/// Dual Jaynes-Cummings Hamiltonian with complex couplings |chi| abar.
Operator build_rwa_hamiltonian(const DriveCalibration &calib, double chi_m, double chi_r,
                               const ModeDims &dims);

/// Single cavity + qubit on [2, dim]: first the drive-frame form, second the
/// displaced Jaynes-Cummings form. The second keeps the co-rotating pair
/// selected by `detuning_sign`.
std::pair<Operator, Operator> build_sideband_hamiltonians(const SidebandParams &p, int dim);

/// Steady cavity amplitude of the single-cavity sideband model.
cplx sideband_steady_amplitude(const SidebandParams &p);

}  // namespace rdr
