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

#include "rdr/observables.hpp"

#include <cmath>
#include <numbers>

#include "rdr/error.hpp"

namespace rdr {

const char *mode_name(Mode mode) { return mode == Mode::kMemory ? "memory" : "readout"; }

int mode_factor(const SpaceDescriptor &space, Mode mode) {
    switch (space.num_factors()) {
        case 1: return 0;
        case 2: return 1;
        case 3: return mode == Mode::kMemory ? 1 : 2;
        default: break;
    }
    fail(ErrorCode::kSpaceMismatch, "no cavity mode in space " + space.to_string());
}

namespace {

DenseMatrix mode_density(const QuantumState &state, Mode mode) {
    const int f = mode_factor(state.space(), mode);
    if (state.space().num_factors() == 1) return state.density_matrix();
    return reduced_state(state, f).matrix();
}

}  // namespace

double photon_number(const QuantumState &state, Mode mode) {
    return displaced_photon_number(state, 0.0, mode);
}

double fidelity_to_target(const QuantumState &state, cplx alpha_target, Mode mode) {
    const DenseMatrix rho = mode_density(state, mode);
    const StateVector v = coherent_amplitudes(static_cast<int>(rho.rows()), alpha_target);
    const double f = (v.adjoint() * rho * v)(0, 0).real();
    return std::clamp(f, 0.0, 1.0);
}

double displaced_photon_number(const QuantumState &state, cplx alpha_ref, Mode mode) {
    const DenseMatrix rho = mode_density(state, mode);
    const int d = static_cast<int>(rho.rows());
    double n = 0.0;
    cplx a = 0.0;
    for (int k = 1; k < d; ++k) {
        n += k * rho(k, k).real();
        a += std::sqrt(static_cast<double>(k)) * rho(k, k - 1);  // tr(a rho)
    }
    // <n> - 2 Re(alpha^* <a>) + |alpha|^2
    return n - 2.0 * (std::conj(alpha_ref) * a).real() + std::norm(alpha_ref);
}

cplx sigma_minus_expectation(const QuantumState &state) {
    if (state.space().factor(0) != 2) fail(ErrorCode::kSpaceMismatch, "factor 0 is not a qubit");
    const DenseMatrix q = state.space().num_factors() == 1 ? state.density_matrix()
                                                            : reduced_state(state, 0).matrix();
    // sigma_- = |1><0|, tr(sigma_- rho) = rho(0, 1).
    return q(0, 1);
}

double WignerGrid::integral() const {
    if (x_axis.size() < 2 || p_axis.size() < 2) return 0.0;
    const double dx = (x_axis.back() - x_axis.front()) / static_cast<double>(x_axis.size() - 1);
    const double dp = (p_axis.back() - p_axis.front()) / static_cast<double>(p_axis.size() - 1);
    return values.sum() * dx * dp;
}

WignerGrid wigner(const QuantumState &state, std::span<const double> x_axis,
                  std::span<const double> p_axis, Mode mode) {
    const DenseMatrix rho = mode_density(state, mode);
    const int m = static_cast<int>(rho.rows());
    WignerGrid g;
    g.x_axis.assign(x_axis.begin(), x_axis.end());
    g.p_axis.assign(p_axis.begin(), p_axis.end());
    g.values.resize(static_cast<Eigen::Index>(p_axis.size()), static_cast<Eigen::Index>(x_axis.size()));

    std::vector<double> sq(static_cast<size_t>(m));
    for (int k = 0; k < m; ++k) sq[static_cast<size_t>(k)] = std::sqrt(static_cast<double>(k));
    std::vector<cplx> w(static_cast<size_t>(m));
    // Recurrence over the Wigner functions of |k><l| (Laguerre polynomials).
    for (size_t ip = 0; ip < p_axis.size(); ++ip) {
        for (size_t ix = 0; ix < x_axis.size(); ++ix) {
            const cplx a(x_axis[ix], p_axis[ip]);
            w[0] = std::exp(-2.0 * std::norm(a)) / std::numbers::pi;
            double acc = rho(0, 0).real() * w[0].real();
            for (int n = 1; n < m; ++n) {
                w[static_cast<size_t>(n)] = 2.0 * a * w[static_cast<size_t>(n - 1)] / sq[static_cast<size_t>(n)];
                acc += 2.0 * (rho(0, n) * w[static_cast<size_t>(n)]).real();
            }
            for (int k = 1; k < m; ++k) {
                cplx temp = w[static_cast<size_t>(k)];
                w[static_cast<size_t>(k)] = (2.0 * std::conj(a) * temp - sq[static_cast<size_t>(k)] * w[static_cast<size_t>(k - 1)]) /
                                            sq[static_cast<size_t>(k)];
                acc += (rho(k, k) * w[static_cast<size_t>(k)]).real();
                for (int n = k + 1; n < m; ++n) {
                    const cplx next = (2.0 * a * w[static_cast<size_t>(n - 1)] - sq[static_cast<size_t>(k)] * temp) /
                                      sq[static_cast<size_t>(n)];
                    temp = w[static_cast<size_t>(n)];
                    w[static_cast<size_t>(n)] = next;
                    acc += 2.0 * (rho(k, n) * w[static_cast<size_t>(n)]).real();
                }
            }
            g.values(static_cast<Eigen::Index>(ip), static_cast<Eigen::Index>(ix)) = 2.0 * acc;
        }
    }
    return g;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<size_t>(std::max(n, 0)));
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return v;
}

std::optional<double> crossing_time(const Trajectory &traj, const std::string &observable,
                                    double threshold) {
    const std::vector<double> v = traj.series(observable);
    const std::vector<double> &t = traj.times();
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i] < threshold) continue;
        if (i == 0) return t[0];
        const double f = (threshold - v[i - 1]) / (v[i] - v[i - 1]);
        return t[i - 1] + f * (t[i] - t[i - 1]);
    }
    return std::nullopt;
}

RateFit linear_rate_fit(const Trajectory &traj, const std::string &observable, double t_start,
                        double t_end) {
    if (!(t_start < t_end)) fail(ErrorCode::kInvalidArgument, "fit window must have t_start < t_end");
    const std::vector<double> v = traj.series(observable);
    const std::vector<double> &t = traj.times();
    std::vector<double> xs, ys;
    for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] >= t_start && t[i] <= t_end) {
            xs.push_back(t[i]);
            ys.push_back(v[i]);
        }
    }
    if (xs.size() < 10) {
        fail(ErrorCode::kTooFewSamples, "rate fit needs at least 10 samples, window has " + std::to_string(xs.size()));
    }
    Eigen::MatrixXd a(static_cast<Eigen::Index>(xs.size()), 2);
    Eigen::VectorXd b(static_cast<Eigen::Index>(xs.size()));
    for (size_t i = 0; i < xs.size(); ++i) {
        a(static_cast<Eigen::Index>(i), 0) = xs[i] - t_start;
        a(static_cast<Eigen::Index>(i), 1) = 1.0;
        b(static_cast<Eigen::Index>(i)) = ys[i];
    }
    const Eigen::Vector2d coef = a.colPivHouseholderQr().solve(b);
    RateFit fit;
    fit.slope = coef(0);
    fit.intercept = coef(1) - coef(0) * t_start;
    fit.t_start = t_start;
    fit.t_end = t_end;
    fit.samples = static_cast<int>(xs.size());
    fit.residual = std::sqrt((a * coef - b).squaredNorm() / static_cast<double>(xs.size()));
    return fit;
}

Operator mode_annihilation(const ModeDims &dims, Mode mode) {
    const int f = mode == Mode::kMemory ? 1 : 2;
    return embed(annihilation(f == 1 ? dims.memory : dims.readout), dims.space(), f);
}

Operator mode_number(const ModeDims &dims, Mode mode) {
    const int f = mode == Mode::kMemory ? 1 : 2;
    return embed(number_operator(f == 1 ? dims.memory : dims.readout), dims.space(), f);
}

Operator mode_displaced_number(const ModeDims &dims, Mode mode, cplx alpha) {
    const Operator a = mode_annihilation(dims, mode);
    const Operator id = Operator::identity(dims.space());
    const Operator shifted = a - alpha * id;
    return shifted.adjoint() * shifted;
}

Operator mode_coherent_projector(const ModeDims &dims, Mode mode, cplx alpha) {
    const int f = mode == Mode::kMemory ? 1 : 2;
    const int d = f == 1 ? dims.memory : dims.readout;
    const StateVector v = coherent_amplitudes(d, alpha);
    const DenseMatrix proj = v * v.adjoint();
    return embed(Operator(SpaceDescriptor::single(d), proj), dims.space(), f);
}

Operator qubit_operator(const ModeDims &dims, PauliAxis axis) {
    return embed(pauli(axis), dims.space(), 0);
}

}  // namespace rdr
