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

#include "rdr/model.hpp"

#include <cmath>
#include <sstream>

#include "rdr/diagnostics.hpp"
#include "rdr/error.hpp"

namespace rdr {

SystemParams SystemParams::reference() {
    SystemParams p;
    p.kappa = angular_from_mhz(0.419);
    p.omega_r = angular_from_mhz(20.0);
    p.chi_r = angular_from_mhz(-1.3);
    p.chi_m = angular_from_mhz(-0.042);
    return p;
}

void SystemParams::validate() const {
    if (!(kappa > 0.0)) fail(ErrorCode::kInvalidParameters, "kappa must be positive");
    if (!(omega_r > 0.0)) fail(ErrorCode::kInvalidParameters, "omega_R must be positive");
    if (!(t1_us > 0.0) || !(t2_us > 0.0)) {
        fail(ErrorCode::kInvalidParameters, "T1 and T2 must be positive");
    }
    if (!is_effectively_infinite(t1_us) && !is_effectively_infinite(t2_us) &&
        t2_us > 2.0 * t1_us) {
        std::ostringstream msg;
        msg << "T2 (" << t2_us << " us) exceeds 2*T1 (" << 2.0 * t1_us << " us)";
        fail(ErrorCode::kInvalidParameters, msg.str());
    }
}

SteadyAmplitudes steady_amplitudes(const SystemParams &params) {
    if (!(params.omega_r > 0.0)) fail(ErrorCode::kInvalidParameters, "omega_R must be positive");
    return {params.eps_m / params.omega_r,
            params.eps_r / cplx(params.omega_r, 0.5 * params.kappa)};
}

double stark_detuning(cplx abar_m, cplx abar_r, double chi_m, double chi_r) {
    return -chi_m * (std::norm(abar_m) + 1.0) - chi_r * (std::norm(abar_r) + 1.0);
}

SystemParams DriveCalibration::apply(const SystemParams &base) const {
    SystemParams p = base;
    p.eps_m = eps_m;
    p.eps_r = eps_r;
    p.delta_q = delta_q;
    return p;
}

DriveCalibration calibrate_drives(double target_n_m, const SystemParams &base) {
    if (!(target_n_m >= 0.0) || !std::isfinite(target_n_m)) {
        fail(ErrorCode::kInvalidArgument, "target occupation must be non-negative");
    }
    if (base.chi_m == 0.0 || base.chi_r == 0.0) {
        fail(ErrorCode::kInvalidParameters, "dispersive shifts must be nonzero");
    }
    if (!(base.omega_r > 0.0) || !(base.kappa > 0.0)) {
        fail(ErrorCode::kInvalidParameters, "kappa and omega_R must be positive");
    }
    DriveCalibration c;
    c.target_n_m = target_n_m;
    const double am = std::sqrt(target_n_m);
    const double ar_mod = std::abs(base.chi_m / base.chi_r) * am;
    const cplx denom(base.omega_r, 0.5 * base.kappa);
    c.abar_m = am;
    c.eps_m = base.omega_r * am;
    c.eps_r = ar_mod * std::abs(denom);
    c.abar_r = c.eps_r / denom;
    c.g_m = std::abs(base.chi_m) * std::abs(c.abar_m);
    // Same product as g_m, so the two couplings agree bit for bit.
    c.g_r = c.g_m;
    c.delta_q = stark_detuning(c.abar_m, c.abar_r, base.chi_m, base.chi_r);
    c.weak_coupling_ok = weak_coupling_ok(c, base.kappa);
    c.predicted_max_rate = max_cooling_rate(base.kappa);
    return c;
}

bool weak_coupling_ok(const DriveCalibration &calib, double kappa) {
    return calib.g_r <= 0.5 * kappa + 1e-9;
}

double max_cooling_rate(double kappa) {
    if (!(kappa > 0.0)) fail(ErrorCode::kInvalidParameters, "kappa must be positive");
    return 0.25 * kappa;
}

CompositeOps composite_ops(const ModeDims &dims) {
    if (dims.memory < 2 || dims.readout < 2) {
        fail(ErrorCode::kInvalidDimension, "mode dimensions must be at least 2");
    }
    CompositeOps ops;
    ops.space = dims.space();
    ops.id = Operator::identity(ops.space);
    ops.a_m = embed(annihilation(dims.memory), ops.space, 1);
    ops.a_r = embed(annihilation(dims.readout), ops.space, 2);
    ops.n_m = embed(number_operator(dims.memory), ops.space, 1);
    ops.n_r = embed(number_operator(dims.readout), ops.space, 2);
    ops.sx = embed(pauli(PauliAxis::kX), ops.space, 0);
    ops.sy = embed(pauli(PauliAxis::kY), ops.space, 0);
    ops.sz = embed(pauli(PauliAxis::kZ), ops.space, 0);
    ops.sp = embed(pauli(PauliAxis::kPlus), ops.space, 0);
    ops.sm = embed(pauli(PauliAxis::kMinus), ops.space, 0);
    return ops;
}

namespace {

void check_truncation(const char *mode, int dim, double occupation) {
    const int need = recommended_dim(occupation);
    if (dim < need) {
        std::ostringstream msg;
        msg << mode << " dimension " << dim << " is below the recommended " << need
            << " for occupation " << occupation;
        report_warning(msg.str());
    }
}

// Hermitian drive term eps a^dagger + eps^* a.
Operator drive(const Operator &a, cplx eps) {
    return eps * a.adjoint() + std::conj(eps) * a;
}

}  // namespace

Operator build_full_hamiltonian(const SystemParams &params, const ModeDims &dims) {
    params.validate();
    const CompositeOps o = composite_ops(dims);
    const SteadyAmplitudes abar = steady_amplitudes(params);
    // Vacuum starts overshoot to |2 abar|^2 before settling.
    check_truncation("memory", dims.memory, 4.0 * std::norm(abar.memory));
    check_truncation("readout", dims.readout, 4.0 * std::norm(abar.readout));

    const double w = params.omega_r;
    Operator h = -w * o.n_r - w * o.n_m;
    h += -0.5 * (params.delta_q + params.chi_r + params.chi_m) * o.sz;
    h += -0.5 * w * o.sx;
    h += -params.chi_r * (o.n_r * o.sz) - params.chi_m * (o.n_m * o.sz);
    h += drive(o.a_r, params.eps_r) + drive(o.a_m, params.eps_m);
    return h;
}

Operator build_full_hamiltonian_displaced(const SystemParams &params, const ModeDims &dims) {
    params.validate();
    const SteadyAmplitudes abar = steady_amplitudes(params);
    // Lab vacuum sits at -abar in this basis.
    check_truncation("memory", dims.memory, std::norm(abar.memory));
    check_truncation("readout", dims.readout, std::norm(abar.readout));
    DriveCalibration calib;
    calib.abar_m = abar.memory;
    calib.abar_r = abar.readout;
    const double cz = -0.5 * (params.delta_q + params.chi_r + params.chi_m) -
                      params.chi_r * std::norm(abar.readout) - params.chi_m * std::norm(abar.memory);
    const CompositeOps o = composite_ops(dims);
    return build_displaced_hamiltonian(params, calib, dims) + cz * o.sx;
}

Operator build_displaced_hamiltonian(const SystemParams &params, const DriveCalibration &calib,
                                     const ModeDims &dims) {
    params.validate();
    const CompositeOps o = composite_ops(dims);
    const double w = params.omega_r;
    const Operator coup_r = std::conj(calib.abar_r) * o.a_r + calib.abar_r * o.a_r.adjoint() + o.n_r;
    const Operator coup_m = std::conj(calib.abar_m) * o.a_m + calib.abar_m * o.a_m.adjoint() + o.n_m;
    Operator h = -w * o.n_r - w * o.n_m - 0.5 * w * o.sz;
    h -= params.chi_r * (coup_r * o.sx);
    h -= params.chi_m * (coup_m * o.sx);
    return h;
}

Operator build_rwa_hamiltonian(const DriveCalibration &calib, double chi_m, double chi_r,
                               const ModeDims &dims) {
    const CompositeOps o = composite_ops(dims);
    const cplx gr = std::abs(chi_r) * calib.abar_r;
    const cplx gm = std::abs(chi_m) * calib.abar_m;
    Operator h = std::conj(gr) * (o.a_r * o.sp) + gr * (o.a_r.adjoint() * o.sm);
    h += std::conj(gm) * (o.a_m * o.sp) + gm * (o.a_m.adjoint() * o.sm);
    return h;
}

cplx sideband_steady_amplitude(const SidebandParams &p) {
    if (!(p.omega_r > 0.0) || !(p.kappa > 0.0)) {
        fail(ErrorCode::kInvalidParameters, "kappa and omega_R must be positive");
    }
    if (p.detuning_sign != 1 && p.detuning_sign != -1) {
        fail(ErrorCode::kInvalidArgument, "detuning sign must be +1 or -1");
    }
    return p.eps_c / cplx(p.detuning_sign * p.omega_r, 0.5 * p.kappa);
}

std::pair<Operator, Operator> build_sideband_hamiltonians(const SidebandParams &p, int dim) {
    const cplx abar = sideband_steady_amplitude(p);
    check_truncation("cavity", dim, 4.0 * std::norm(abar));
    const SpaceDescriptor space({2, dim});
    const Operator a = embed(annihilation(dim), space, 1);
    const Operator n = embed(number_operator(dim), space, 1);
    const Operator sx = embed(pauli(PauliAxis::kX), space, 0);
    const Operator sz = embed(pauli(PauliAxis::kZ), space, 0);
    const Operator sp = embed(pauli(PauliAxis::kPlus), space, 0);
    const Operator sm = embed(pauli(PauliAxis::kMinus), space, 0);
    const double s = p.detuning_sign;

    Operator full = -s * p.omega_r * n;
    full += -0.5 * (p.delta_q + p.chi) * sz - 0.5 * p.omega_r * sx;
    full += -p.chi * (n * sz) + drive(a, p.eps_c);

    // A negative detuning makes a^dagger sigma_+ the resonant pair.
    const Operator &up = s > 0 ? sp : sm;
    const Operator &down = s > 0 ? sm : sp;
    Operator jc = -s * p.omega_r * n - 0.5 * p.omega_r * sz;
    jc += -p.chi * (std::conj(abar) * (a * up) + abar * (a.adjoint() * down));
    return {full, jc};
}

}  // namespace rdr
