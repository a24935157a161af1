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

#include "rdr/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include <Eigen/SparseLU>

#include "block_engine.hpp"
#include "rdr/diagnostics.hpp"
#include "rdr/error.hpp"

namespace rdr {

const char *form_name(HamiltonianForm form) {
    switch (form) {
        case HamiltonianForm::kFull: return "full";
        case HamiltonianForm::kDisplaced: return "displaced";
        case HamiltonianForm::kRwa: return "rwa";
    }
    return "unknown";
}

HamiltonianForm parse_form(const std::string &name) {
    if (name == "full") return HamiltonianForm::kFull;
    if (name == "displaced") return HamiltonianForm::kDisplaced;
    if (name == "rwa") return HamiltonianForm::kRwa;
    fail(ErrorCode::kConfigError, "unknown Hamiltonian form '" + name + "'");
}

// ---------------------------------------------------------------- CollapseSet

void CollapseSet::add(std::string label, const Operator &op, double rate) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
        fail(ErrorCode::kInvalidParameters, "collapse rate for '" + label + "' must be finite and >= 0");
    }
    if (space_.factors().empty()) space_ = op.space();
    if (!(op.space() == space_)) {
        fail(ErrorCode::kSpaceMismatch, "collapse '" + label + "' lives on " + op.space().to_string() +
                                            ", expected " + space_.to_string());
    }
    entries_.push_back(Entry{std::move(label), op, rate});
}

Operator CollapseSet::jump(size_t i) const {
    const Entry &e = entry(i);
    return std::sqrt(e.rate) * e.op;
}

bool CollapseSet::has_nonzero_rate() const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [](const Entry &e) { return e.rate > 0.0 && e.op.max_abs() > 0.0; });
}

// ----------------------------------------------------------------- Trajectory

void Trajectory::append(double time_us, std::vector<cplx> row) {
    if (row.size() != names_.size()) {
        fail(ErrorCode::kInvalidArgument, "record row does not match the observable set");
    }
    if (!times_.empty() && !(time_us > times_.back())) {
        fail(ErrorCode::kInvalidArgument, "trajectory times must be strictly increasing");
    }
    times_.push_back(time_us);
    rows_.push_back(std::move(row));
}

void Trajectory::add_snapshot(double time_us, QuantumState state) {
    snapshots_.push_back(Snapshot{time_us, std::move(state)});
}

bool Trajectory::has(const std::string &name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

size_t Trajectory::index_of(const std::string &name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) fail(ErrorCode::kInvalidArgument, "observable '" + name + "' not recorded");
    return static_cast<size_t>(it - names_.begin());
}

std::vector<double> Trajectory::series(const std::string &name) const {
    const size_t k = index_of(name);
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto &r : rows_) out.push_back(r[k].real());
    return out;
}

std::vector<cplx> Trajectory::complex_series(const std::string &name) const {
    const size_t k = index_of(name);
    std::vector<cplx> out;
    out.reserve(rows_.size());
    for (const auto &r : rows_) out.push_back(r[k]);
    return out;
}

cplx Trajectory::value(size_t row, const std::string &name) const {
    return rows_.at(row)[index_of(name)];
}

void Trajectory::add_column(const std::string &name, const std::vector<double> &values) {
    if (values.size() != times_.size()) {
        fail(ErrorCode::kInvalidArgument, "column '" + name + "' length does not match the time grid");
    }
    if (has(name)) fail(ErrorCode::kInvalidArgument, "column '" + name + "' already exists");
    names_.push_back(name);
    for (size_t i = 0; i < rows_.size(); ++i) rows_[i].emplace_back(values[i], 0.0);
}

const Trajectory::Snapshot *Trajectory::nearest_snapshot(double t_us) const {
    const Snapshot *best = nullptr;
    for (const auto &s : snapshots_) {
        if (!best || std::abs(s.time_us - t_us) < std::abs(best->time_us - t_us)) best = &s;
    }
    return best;
}

// ------------------------------------------------------------------ evolution

DenseMatrix lindblad_rhs(const Operator &h, const CollapseSet &c, const DenseMatrix &rho) {
    const int n = h.dim();
    if (rho.rows() != n || rho.cols() != n) {
        fail(ErrorCode::kSpaceMismatch, "density matrix shape does not match the Hamiltonian");
    }
    if (!c.empty() && !(c.space() == h.space())) {
        fail(ErrorCode::kSpaceMismatch, "collapse operators and Hamiltonian live on different spaces");
    }
    const SparseMatrix &hs = h.sparse();
    DenseMatrix hr = hs * rho;
    DenseMatrix out = -kI * (hr - hr.adjoint());
    for (size_t k = 0; k < c.size(); ++k) {
        const SparseMatrix j = c.jump(k).sparse();
        const SparseMatrix jd = j.adjoint();
        const DenseMatrix jr = j * rho;
        const DenseMatrix jdjr = jd * jr;
        out += jr * jd;
        out -= 0.5 * (jdjr + jdjr.adjoint());
    }
    return out;
}

namespace {

// RK4 substep limits: |h| times the generator norm bound, and |h| times the
// fastest phase carried by interaction-picture entries.
constexpr double kMaxStepNorm = 2.5;
constexpr double kMaxStepPhase = 0.5;

}  // namespace

namespace {

using Packer = std::function<Eigen::VectorXcd(const detail::BlockEngine &)>;

Trajectory evolve_packed(const Operator &h, const CollapseSet &c, const Packer &pack,
                         double t_final_us, double dt_us,
                         std::span<const NamedObservable> observables, const EvolveOptions &options) {
    if (!(dt_us > 0.0) || !std::isfinite(dt_us)) fail(ErrorCode::kInvalidArgument, "dt must be positive");
    if (!(t_final_us >= 0.0) || !std::isfinite(t_final_us)) {
        fail(ErrorCode::kInvalidArgument, "t_final must be non-negative");
    }
    if (options.record_every < 1) fail(ErrorCode::kInvalidArgument, "record_every must be >= 1");
    if (!c.empty() && !(c.space() == h.space())) {
        fail(ErrorCode::kSpaceMismatch, "collapse operators and Hamiltonian live on different spaces");
    }

    int band = options.band;
    if (!options.snapshot_times_us.empty()) {
        band = -1;  // snapshots need the whole matrix
    } else if (band < 0) {
        band = 0;
        for (const auto &o : observables) {
            band = std::max(band, detail::BlockEngine::required_band(o.op, options.charges));
        }
    }
    detail::BlockEngine eng(h, c, options.charges, band, options.interaction_picture);

    std::vector<std::string> names;
    std::vector<detail::BlockEngine::Compiled> compiled;
    for (const auto &o : observables) {
        names.push_back(o.name);
        compiled.push_back(eng.compile(o.op));
    }
    Trajectory traj(std::move(names));

    Eigen::VectorXcd x = pack(eng);

    const long long n_steps = std::llround(t_final_us / dt_us);
    if (std::abs(static_cast<double>(n_steps) * dt_us - t_final_us) > 1e-9 * std::max(1.0, t_final_us)) {
        std::ostringstream msg;
        msg << "t_final " << t_final_us << " us is not a multiple of dt; integrating to "
            << static_cast<double>(n_steps) * dt_us << " us";
        report_warning(msg.str());
    }
    const double by_norm = std::ceil(dt_us * eng.spectral_radius_bound() / kMaxStepNorm);
    const double by_phase = std::ceil(dt_us * eng.max_phase_rate() / kMaxStepPhase);
    const int substeps = std::max(1, static_cast<int>(std::max(by_norm, by_phase)));
    const double h_sub = dt_us / substeps;

    std::set<long long> snap_steps;
    for (double t : options.snapshot_times_us) {
        snap_steps.insert(std::clamp<long long>(std::llround(t / dt_us), 0, n_steps));
    }

    auto record = [&](long long k) {
        const double t = static_cast<double>(k) * dt_us;
        std::vector<cplx> row;
        row.reserve(compiled.size());
        for (const auto &co : compiled) row.push_back(detail::BlockEngine::evaluate(co, x, t));
        traj.append(t, std::move(row));
        if (snap_steps.count(k)) {
            traj.add_snapshot(t, QuantumState::density(h.space(), eng.unpack(x, t)));
        }
    };
    auto check = [&](long long k) {
        const double t = static_cast<double>(k) * dt_us;
        const cplx tr = eng.trace(x);
        const double pmin = eng.min_population(x);
        if (!std::isfinite(tr.real()) || !std::isfinite(pmin) || std::abs(tr - 1.0) > 1e-6 || pmin < -1e-6) {
            std::ostringstream msg;
            msg << "integration unstable at t = " << t << " us (trace " << tr.real()
                << ", min population " << pmin << ")";
            throw Error(ErrorCode::kIntegrationUnstable, msg.str(), t);
        }
    };

    record(0);
    Eigen::VectorXcd acc(x.size()), k(x.size()), tmp(x.size());
    for (long long step = 1; step <= n_steps; ++step) {
        const double t0 = static_cast<double>(step - 1) * dt_us;
        for (int s = 0; s < substeps; ++s) {
            const double ts = t0 + s * h_sub;
            eng.rhs(x, ts, k);
            acc = k;
            tmp = x + (0.5 * h_sub) * k;
            eng.rhs(tmp, ts + 0.5 * h_sub, k);
            acc += 2.0 * k;
            tmp = x + (0.5 * h_sub) * k;
            eng.rhs(tmp, ts + 0.5 * h_sub, k);
            acc += 2.0 * k;
            tmp = x + h_sub * k;
            eng.rhs(tmp, ts + h_sub, k);
            acc += k;
            x += (h_sub / 6.0) * acc;
        }
        if (options.symmetrize) eng.symmetrize(x);
        check(step);
        if (step % options.record_every == 0 || step == n_steps || snap_steps.count(step)) record(step);
    }
    return traj;
}

}  // namespace

Trajectory evolve(const Operator &h, const CollapseSet &c, const QuantumState &rho0,
                  double t_final_us, double dt_us, std::span<const NamedObservable> observables,
                  const EvolveOptions &options) {
    if (!(rho0.space() == h.space())) {
        fail(ErrorCode::kSpaceMismatch, "initial state lives on " + rho0.space().to_string() +
                                            ", Hamiltonian on " + h.space().to_string());
    }
    rho0.validate();
    const Packer pack = [&](const detail::BlockEngine &eng) {
        return rho0.is_pure() ? eng.pack_pure(rho0.vector()) : eng.pack(rho0.matrix());
    };
    return evolve_packed(h, c, pack, t_final_us, dt_us, observables, options);
}

Trajectory evolve(const Operator &h, const CollapseSet &c, std::span<const QuantumState> factors,
                  double t_final_us, double dt_us, std::span<const NamedObservable> observables,
                  const EvolveOptions &options) {
    if (factors.empty()) fail(ErrorCode::kInvalidArgument, "product state needs at least one factor");
    std::vector<int> dims;
    std::vector<DenseMatrix> mats;
    for (const auto &f : factors) {
        f.validate();
        for (int d : f.space().factors()) dims.push_back(d);
        mats.push_back(f.density_matrix());
    }
    const SpaceDescriptor space(dims);
    if (!(space == h.space())) {
        fail(ErrorCode::kSpaceMismatch, "initial state lives on " + space.to_string() +
                                            ", Hamiltonian on " + h.space().to_string());
    }
    const Packer pack = [&](const detail::BlockEngine &eng) { return eng.pack_product(mats); };
    return evolve_packed(h, c, pack, t_final_us, dt_us, observables, options);
}

// ------------------------------------------------------------------ collapses

QubitRates qubit_rates(const SystemParams &params) {
    params.validate();
    QubitRates r;
    if (!is_effectively_infinite(params.t1_us)) r.relaxation = 1.0 / params.t1_us;
    if (!is_effectively_infinite(params.t2_us)) {
        r.dephasing = 1.0 / params.t2_us - 0.5 * r.relaxation;
    }
    if (r.relaxation < 1e-12) r.relaxation = 0.0;
    if (r.dephasing < 1e-12) r.dephasing = 0.0;
    return r;
}

CollapseSet standard_collapses(const SystemParams &params, HamiltonianForm form,
                               const ModeDims &dims, QubitNoiseFrame qubit_frame) {
    const QubitRates q = qubit_rates(params);
    if (!(params.kappa > 0.0)) fail(ErrorCode::kInvalidParameters, "kappa must be positive");
    const SpaceDescriptor space = dims.space();
    CollapseSet set(space);
    set.add("readout_decay", embed(annihilation(dims.readout), space, 2), params.kappa);

    const Operator sm = embed(pauli(PauliAxis::kMinus), space, 0);
    const Operator sp = embed(pauli(PauliAxis::kPlus), space, 0);
    const Operator sz = embed(pauli(PauliAxis::kZ), space, 0);
    const Operator sx = embed(pauli(PauliAxis::kX), space, 0);

    if (form == HamiltonianForm::kFull || qubit_frame == QubitNoiseFrame::kRenamed) {
        if (q.relaxation > 0.0) set.add("qubit_relaxation", sm, q.relaxation);
        if (q.dephasing > 0.0) set.add("qubit_dephasing", sz, 0.5 * q.dephasing);
        return set;
    }
    // Bare sigma_- and sigma_z after the Hadamard rename.
    if (form == HamiltonianForm::kDisplaced) {
        if (q.relaxation > 0.0) set.add("qubit_relaxation", 0.5 * (sz + sp - sm), q.relaxation);
        if (q.dephasing > 0.0) set.add("qubit_dephasing", sx, 0.5 * q.dephasing);
        return set;
    }
    // Rotating frame: keep only the secular parts of the same dissipators.
    if (q.relaxation > 0.0) {
        set.add("qubit_relaxation_z", sz, 0.25 * q.relaxation);
        set.add("qubit_relaxation_up", sp, 0.25 * q.relaxation);
        set.add("qubit_relaxation_down", sm, 0.25 * q.relaxation);
    }
    if (q.dephasing > 0.0) {
        set.add("qubit_dephasing_up", sp, 0.5 * q.dephasing);
        set.add("qubit_dephasing_down", sm, 0.5 * q.dephasing);
    }
    return set;
}

std::vector<int> excitation_charges(const ModeDims &dims) {
    std::vector<int> q;
    q.reserve(static_cast<size_t>(2 * dims.memory * dims.readout));
    for (int s = 0; s < 2; ++s) {
        for (int m = 0; m < dims.memory; ++m) {
            for (int r = 0; r < dims.readout; ++r) q.push_back(m + r + (s == 0 ? 1 : 0));
        }
    }
    return q;
}

// --------------------------------------------------------------- steady state

namespace {

using ColSparse = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;

}  // namespace

QuantumState steady_state(const Operator &h, const CollapseSet &c, std::span<const int> charges) {
    if (!c.has_nonzero_rate()) {
        fail(ErrorCode::kDegenerateSteadyState, "no dissipation: the steady state is not unique");
    }
    if (!(c.space() == h.space())) {
        fail(ErrorCode::kSpaceMismatch, "collapse operators and Hamiltonian live on different spaces");
    }
    const int n = h.dim();
    if (!charges.empty() && static_cast<int>(charges.size()) != n) {
        fail(ErrorCode::kSpaceMismatch, "charge vector length does not match the space");
    }
    auto same_sector = [&](int i, int j) { return charges.empty() || charges[static_cast<size_t>(i)] == charges[static_cast<size_t>(j)]; };

    std::vector<int> pidx(static_cast<size_t>(n) * static_cast<size_t>(n), -1);
    std::vector<std::pair<int, int>> pairs;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (!same_sector(i, j)) continue;
            pidx[static_cast<size_t>(i) + static_cast<size_t>(n) * static_cast<size_t>(j)] =
                static_cast<int>(pairs.size());
            pairs.emplace_back(i, j);
        }
    }
    auto index = [&](int i, int j) {
        const int p = pidx[static_cast<size_t>(i) + static_cast<size_t>(n) * static_cast<size_t>(j)];
        if (p < 0) fail(ErrorCode::kInvalidArgument, "generator does not conserve the supplied charges");
        return p;
    };

    SparseMatrix heff = h.sparse();
    std::vector<SparseMatrix> js;
    for (size_t k = 0; k < c.size(); ++k) {
        if (c.entry(k).rate == 0.0) continue;
        js.push_back(c.jump(k).sparse());
        const SparseMatrix jdj = SparseMatrix(js.back().adjoint()) * js.back();
        heff -= (0.5 * kI) * jdj;
    }

    std::vector<Eigen::Triplet<cplx>> trip;
    for (int r = 0; r < static_cast<int>(pairs.size()); ++r) {
        const auto [i, j] = pairs[static_cast<size_t>(r)];
        for (SparseMatrix::InnerIterator it(heff, i); it; ++it) {
            trip.emplace_back(r, index(static_cast<int>(it.col()), j), -kI * it.value());
        }
        for (SparseMatrix::InnerIterator it(heff, j); it; ++it) {
            trip.emplace_back(r, index(i, static_cast<int>(it.col())), kI * std::conj(it.value()));
        }
        for (const auto &jm : js) {
            for (SparseMatrix::InnerIterator a(jm, i); a; ++a) {
                for (SparseMatrix::InnerIterator b(jm, j); b; ++b) {
                    trip.emplace_back(r, index(static_cast<int>(a.col()), static_cast<int>(b.col())),
                                      a.value() * std::conj(b.value()));
                }
            }
        }
    }
    const int m = static_cast<int>(pairs.size());
    ColSparse lmat(m, m);
    lmat.setFromTriplets(trip.begin(), trip.end());
    lmat.makeCompressed();
    double scale = 1.0;
    for (int k = 0; k < lmat.outerSize(); ++k) {
        for (ColSparse::InnerIterator it(lmat, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
    }

    // Liouvillian with the first diagonal row replaced by the trace.
    const int r0 = index(0, 0);
    const int r1 = index(n - 1, n - 1);
    std::vector<Eigen::Triplet<cplx>> t2;
    t2.reserve(trip.size() + static_cast<size_t>(n));
    Eigen::VectorXcd row0 = Eigen::VectorXcd::Zero(m), row1 = Eigen::VectorXcd::Zero(m);
    Eigen::VectorXcd trace_row = Eigen::VectorXcd::Zero(m);
    for (const auto &t : trip) {
        if (t.row() == r0) row0[t.col()] += t.value();
        else t2.push_back(t);
        if (t.row() == r1) row1[t.col()] += t.value();
    }
    for (int d = 0; d < n; ++d) {
        t2.emplace_back(r0, index(d, d), 1.0);
        trace_row[index(d, d)] = 1.0;
    }
    ColSparse a(m, m);
    a.setFromTriplets(t2.begin(), t2.end());
    a.makeCompressed();
    Eigen::SparseLU<ColSparse, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) {
        fail(ErrorCode::kDegenerateSteadyState, "Liouvillian factorization failed: null space is not one-dimensional");
    }
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(m, 2);
    e(r0, 0) = 1.0;
    e(r1, 1) = 1.0;
    const Eigen::MatrixXcd w = lu.solve(e);
    if (lu.info() != Eigen::Success || !w.allFinite()) {
        fail(ErrorCode::kDegenerateSteadyState, "Liouvillian solve failed: null space is not one-dimensional");
    }
    const Eigen::VectorXcd x1 = w.col(0);
    // Second normalisation (trace in the last diagonal row) as a rank-2
    // update of the same factorization; the two must agree.
    Eigen::MatrixXcd vt(2, m);
    vt.row(0) = (row0 - trace_row).transpose();
    vt.row(1) = (trace_row - row1).transpose();
    const Eigen::Matrix2cd s = Eigen::Matrix2cd::Identity() + vt * w;
    const Eigen::Vector2cd rhs = vt * w.col(1);
    const Eigen::VectorXcd x2 = w.col(1) - w * s.fullPivLu().solve(rhs);
    if (!x2.allFinite()) {
        fail(ErrorCode::kDegenerateSteadyState, "Liouvillian solve failed: null space is not one-dimensional");
    }
    const double resid = (lmat * x1).cwiseAbs().maxCoeff();
    const double spread = (x1 - x2).cwiseAbs().maxCoeff();
    if (resid > 1e-10 * scale || spread > 1e-6) {
        std::ostringstream msg;
        msg << "steady state is not unique (residual " << resid << ", solution spread " << spread << ")";
        fail(ErrorCode::kDegenerateSteadyState, msg.str());
    }

    DenseMatrix rho = DenseMatrix::Zero(n, n);
    for (int r = 0; r < m; ++r) rho(pairs[static_cast<size_t>(r)].first, pairs[static_cast<size_t>(r)].second) = x1[r];
    rho = (0.5 * (rho + rho.adjoint())).eval();
    rho /= rho.trace().real();
    return QuantumState::density(h.space(), std::move(rho));
}

double liouvillian_residual(const Operator &h, const CollapseSet &c, const DenseMatrix &rho) {
    return lindblad_rhs(h, c, rho).cwiseAbs().maxCoeff();
}

}  // namespace rdr
