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
#include <random>

#include "rdr/diagnostics.hpp"
#include "rdr/dynamics.hpp"
#include "rdr/observables.hpp"
#include "test_support.hpp"

namespace rdr {
namespace {

using testing::code_of;
using testing::max_abs;

struct RwaSetup {
    ModeDims dims{8, 4};
    SystemParams params;
    DriveCalibration calib;
    Operator h;
    CollapseSet c;
};

RwaSetup rwa_setup(double target, double t1_us, double t2_us, ModeDims dims = {10, 4}) {
    RwaSetup s;
    s.dims = dims;
    SystemParams base = SystemParams::reference();
    base.t1_us = t1_us;
    base.t2_us = t2_us;
    s.calib = calibrate_drives(target, base);
    s.params = s.calib.apply(base);
    s.h = build_rwa_hamiltonian(s.calib, s.params.chi_m, s.params.chi_r, dims);
    s.c = standard_collapses(s.params, HamiltonianForm::kRwa, dims);
    return s;
}

std::vector<QuantumState> displaced_start(const ModeDims &dims, cplx abar_m) {
    return {fock_state(2, 1), coherent_state(dims.memory, -abar_m), fock_state(dims.readout, 0)};
}

double max_series_difference(const Trajectory &a, const Trajectory &b) {
    EXPECT_EQ(a.times(), b.times());
    double worst = 0.0;
    for (const auto &name : a.names()) {
        const auto x = a.complex_series(name), y = b.complex_series(name);
        for (size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    }
    return worst;
}

TEST(Dynamics, RhsIsTracelessAndHermitian) {
    std::mt19937_64 rng(7);
    const RwaSetup s = rwa_setup(1.0, 30.0, 40.0);
    const DenseMatrix rho = testing::random_density(s.dims.space().total(), rng);
    const DenseMatrix d = lindblad_rhs(s.h, s.c, rho);
    EXPECT_LT(std::abs(d.trace()), 1e-12);
    EXPECT_LT(max_abs(d - d.adjoint()), 1e-12);
}

TEST(Dynamics, ExcitationBookkeepingAtRhsLevel) {
    // Only the readout decay: d<N_exc>/dt = -kappa <n_r>.
    std::mt19937_64 rng(11);
    const RwaSetup s = rwa_setup(1.0, kEffectivelyInfiniteUs, kEffectivelyInfiniteUs);
    ASSERT_EQ(s.c.size(), 1u);
    const CompositeOps o = composite_ops(s.dims);
    const DenseMatrix nexc = (o.sp * o.sm + o.n_m + o.n_r).dense();
    const DenseMatrix nr = o.n_r.dense();
    for (int trial = 0; trial < 20; ++trial) {
        const DenseMatrix rho = testing::random_density(s.dims.space().total(), rng);
        const cplx lhs = (nexc * lindblad_rhs(s.h, s.c, rho)).trace();
        const cplx rhs = -s.params.kappa * (nr * rho).trace();
        EXPECT_NEAR(std::abs(lhs - rhs) / std::abs(rhs), 0.0, 1e-6);
    }
}

TEST(Dynamics, QubitRelaxationIsExponential) {
    const SpaceDescriptor space = SpaceDescriptor::single(2);
    const Operator h = Operator::zero(space);
    CollapseSet c(space);
    const double gamma = 0.5;
    c.add("relax", pauli(PauliAxis::kMinus), gamma);
    const Operator pe = pauli(PauliAxis::kPlus) * pauli(PauliAxis::kMinus);
    const std::vector<NamedObservable> obs{{"pe", pe}};
    EvolveOptions eo;
    eo.record_every = 10;
    const Trajectory t = evolve(h, c, fock_state(2, 0), 4.0, 0.01, obs, eo);
    const auto pe_t = t.series("pe");
    for (size_t i = 0; i < t.size(); ++i) {
        EXPECT_NEAR(pe_t[i], std::exp(-gamma * t.times()[i]), 1e-9);
    }
}

TEST(Dynamics, QubitRatesFromT1T2) {
    SystemParams p = SystemParams::reference();
    p.t1_us = 20.0;
    p.t2_us = 30.0;
    const QubitRates q = qubit_rates(p);
    EXPECT_NEAR(q.relaxation, 1.0 / 20.0, 1e-15);
    EXPECT_NEAR(q.dephasing, 1.0 / 30.0 - 1.0 / 40.0, 1e-15);
}

TEST(Dynamics, DrivenDampedCavitySteadyStateMatchesAnalyticAmplitude) {
    // Sideband model with chi = 0: the cavity decouples and relaxes to
    // eps / (Delta + i kappa/2). Qubit relaxation makes the steady state unique.
    SidebandParams p;
    p.omega_r = 10.0;
    p.kappa = 2.0;
    p.chi = 0.0;
    p.eps_c = 5.0;
    p.detuning_sign = 1;
    const int dim = 16;
    const Operator h = build_sideband_hamiltonians(p, dim).first;
    CollapseSet c(h.space());
    c.add("cavity", embed(annihilation(dim), h.space(), 1), p.kappa);
    c.add("qubit", embed(pauli(PauliAxis::kMinus), h.space(), 0), 1.0);
    const QuantumState ss = steady_state(h, c);
    const cplx expected = p.eps_c / cplx(p.omega_r, 0.5 * p.kappa);
    const cplx got = expectation(embed(annihilation(dim), h.space(), 1), ss);
    EXPECT_NEAR(std::abs(got - expected), 0.0, 1e-6);
    EXPECT_NEAR(expectation(embed(number_operator(dim), h.space(), 1), ss).real(), std::norm(expected),
                1e-6);
    EXPECT_LT(liouvillian_residual(h, c, ss.matrix()), 1e-9);
}

TEST(Dynamics, SteadyStateIsAFixedPoint) {
    const RwaSetup s = rwa_setup(1.0, 30.0, 40.0);
    const std::vector<int> q = excitation_charges(s.dims);
    const QuantumState ss = steady_state(s.h, s.c, q);
    const std::vector<NamedObservable> obs{
        {"n_m", mode_number(s.dims, Mode::kMemory)},
        {"n_r", mode_number(s.dims, Mode::kReadout)},
        {"p_e", qubit_operator(s.dims, PauliAxis::kZ)}};
    EvolveOptions eo;
    eo.record_every = 10;
    const Trajectory t = evolve(s.h, s.c, ss, 1.0, 0.01, obs, eo);
    for (const auto &name : t.names()) {
        const auto v = t.series(name);
        for (double x : v) EXPECT_NEAR(x, v.front(), 1e-8) << name;
    }
}

TEST(Dynamics, SteadyStateRejectsMissingDissipation) {
    const RwaSetup s = rwa_setup(1.0, kEffectivelyInfiniteUs, kEffectivelyInfiniteUs);
    const CollapseSet empty(s.h.space());
    EXPECT_EQ(code_of([&] { steady_state(s.h, empty); }), ErrorCode::kDegenerateSteadyState);
}

TEST(Dynamics, ChargeVectorMustMatchGenerator) {
    const RwaSetup s = rwa_setup(1.0, 30.0, 40.0);
    std::vector<int> bad(static_cast<size_t>(s.h.dim()), 0);
    bad[0] = 1;
    EXPECT_EQ(code_of([&] { steady_state(s.h, s.c, bad); }), ErrorCode::kInvalidArgument);
    std::vector<int> short_q(3, 0);
    EXPECT_EQ(code_of([&] { steady_state(s.h, s.c, short_q); }), ErrorCode::kSpaceMismatch);
}

TEST(Dynamics, BandIntegratorMatchesFullIntegrator) {
    const RwaSetup s = rwa_setup(1.0, 30.0, 40.0);
    const auto start = displaced_start(s.dims, s.calib.abar_m);
    const std::vector<NamedObservable> obs{
        {"n_m", mode_number(s.dims, Mode::kMemory)},
        {"a_m", mode_annihilation(s.dims, Mode::kMemory)},
        {"sm", qubit_operator(s.dims, PauliAxis::kMinus)}};
    EvolveOptions full;
    full.record_every = 10;
    EvolveOptions band = full;
    band.charges = excitation_charges(s.dims);
    const Trajectory a = evolve(s.h, s.c, start, 2.0, 0.01, obs, full);
    const Trajectory b = evolve(s.h, s.c, start, 2.0, 0.01, obs, band);
    EXPECT_LT(max_series_difference(a, b), 1e-10);
}

TEST(Dynamics, ProductAndDenseStartsAgree) {
    const RwaSetup s = rwa_setup(1.0, 30.0, 40.0);
    const auto start = displaced_start(s.dims, s.calib.abar_m);
    const std::vector<NamedObservable> obs{{"n_m", mode_number(s.dims, Mode::kMemory)}};
    EvolveOptions eo;
    eo.record_every = 10;
    const Trajectory a = evolve(s.h, s.c, start, 1.0, 0.01, obs, eo);
    const Trajectory b = evolve(s.h, s.c, tensor_states(start), 1.0, 0.01, obs, eo);
    EXPECT_LT(max_series_difference(a, b), 1e-12);
}

TEST(Dynamics, InteractionPictureMatchesDirectIntegration) {
    SystemParams base = SystemParams::reference();
    base.t1_us = 30.0;
    base.t2_us = 40.0;
    const ModeDims dims{10, 4};
    const DriveCalibration calib = calibrate_drives(1.0, base);
    const SystemParams p = calib.apply(base);
    take_warnings();
    const Operator h = build_full_hamiltonian_displaced(p, dims);
    const CollapseSet c = standard_collapses(p, HamiltonianForm::kDisplaced, dims);
    const std::vector<NamedObservable> obs{{"n_m", mode_number(dims, Mode::kMemory)},
                                           {"n_r", mode_number(dims, Mode::kReadout)}};
    EvolveOptions ip;
    ip.record_every = 20;
    EvolveOptions direct = ip;
    direct.interaction_picture = false;
    const auto start = displaced_start(dims, calib.abar_m);
    const Trajectory a = evolve(h, c, start, 0.2, 0.00025, obs, ip);
    const Trajectory b = evolve(h, c, start, 0.2, 0.00025, obs, direct);
    EXPECT_LT(max_series_difference(a, b), 1e-7);
    take_warnings();
}

TEST(Dynamics, HalvedTimestepChangesObservablesBelowTolerance) {
    const RwaSetup s = rwa_setup(1.0, 30.0, 40.0);
    const auto start = displaced_start(s.dims, s.calib.abar_m);
    const std::vector<NamedObservable> obs{{"n_m", mode_number(s.dims, Mode::kMemory)},
                                           {"n_r", mode_number(s.dims, Mode::kReadout)}};
    EvolveOptions coarse;
    coarse.record_every = 10;
    coarse.charges = excitation_charges(s.dims);
    EvolveOptions fine = coarse;
    fine.record_every = 20;
    const Trajectory a = evolve(s.h, s.c, start, 5.0, 0.01, obs, coarse);
    const Trajectory b = evolve(s.h, s.c, start, 5.0, 0.005, obs, fine);
    EXPECT_LT(max_series_difference(a, b), 1e-6);
}

TEST(Dynamics, PurityPreservedWithoutDissipation) {
    const RwaSetup s = rwa_setup(1.0, kEffectivelyInfiniteUs, kEffectivelyInfiniteUs);
    const CollapseSet none(s.h.space());
    EvolveOptions eo;
    eo.snapshot_times_us = {3.0};
    const Trajectory t = evolve(s.h, none, displaced_start(s.dims, s.calib.abar_m), 3.0, 0.01, {}, eo);
    ASSERT_EQ(t.snapshots().size(), 1u);
    const DenseMatrix &rho = t.snapshots().front().state.matrix();
    EXPECT_NEAR((rho * rho).trace().real(), 1.0, 1e-8);
}

TEST(Dynamics, EvolutionIsDeterministic) {
    const RwaSetup s = rwa_setup(1.0, 30.0, 40.0);
    const auto start = displaced_start(s.dims, s.calib.abar_m);
    const std::vector<NamedObservable> obs{{"n_m", mode_number(s.dims, Mode::kMemory)}};
    EvolveOptions eo;
    eo.charges = excitation_charges(s.dims);
    const Trajectory a = evolve(s.h, s.c, start, 1.0, 0.01, obs, eo);
    const Trajectory b = evolve(s.h, s.c, start, 1.0, 0.01, obs, eo);
    EXPECT_EQ(a.series("n_m"), b.series("n_m"));
}

TEST(Dynamics, EvolveRejectsBadArguments) {
    const RwaSetup s = rwa_setup(1.0, 30.0, 40.0);
    const auto start = displaced_start(s.dims, s.calib.abar_m);
    EXPECT_EQ(code_of([&] { evolve(s.h, s.c, start, 1.0, 0.0, {}); }), ErrorCode::kInvalidArgument);
    EXPECT_EQ(code_of([&] { evolve(s.h, s.c, start, -1.0, 0.01, {}); }), ErrorCode::kInvalidArgument);
    const std::vector<QuantumState> wrong{fock_state(2, 1), fock_state(5, 0), fock_state(4, 0)};
    EXPECT_EQ(code_of([&] { evolve(s.h, s.c, wrong, 1.0, 0.01, {}); }), ErrorCode::kSpaceMismatch);
    CollapseSet c(s.h.space());
    EXPECT_EQ(code_of([&] { c.add("neg", Operator::identity(s.h.space()), -1.0); }),
              ErrorCode::kInvalidParameters);
}

TEST(Dynamics, TrajectoryBookkeeping) {
    Trajectory t({"x"});
    t.append(0.0, {1.0});
    t.append(1.0, {2.0});
    EXPECT_EQ(code_of([&] { t.append(1.0, {3.0}); }), ErrorCode::kInvalidArgument);
    EXPECT_EQ(code_of([&] { t.append(2.0, {3.0, 4.0}); }), ErrorCode::kInvalidArgument);
    EXPECT_EQ(code_of([&] { t.series("y"); }), ErrorCode::kInvalidArgument);
    t.add_column("y", {5.0, 6.0});
    EXPECT_EQ(t.series("y")[1], 6.0);
    EXPECT_EQ(t.nearest_snapshot(0.3), nullptr);
}

TEST(Dynamics, FormNames) {
    for (auto f : {HamiltonianForm::kFull, HamiltonianForm::kDisplaced, HamiltonianForm::kRwa}) {
        EXPECT_EQ(parse_form(form_name(f)), f);
    }
    EXPECT_EQ(code_of([] { parse_form("nope"); }), ErrorCode::kConfigError);
}

}  // namespace
}  // namespace rdr
