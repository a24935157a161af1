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

// Lindblad evolution and steady states.
//
// evolve() integrates d rho/dt = -i[H, rho] + sum_k D[A_k] rho with classical
// fixed-step RK4. When the step would leave the RK4 stability region it is
// split into equal substeps; recorded times are unaffected.
//
// If every operator moves a per-basis-state integer charge by a fixed amount
// (the dual Jaynes-Cummings form with Q = n_m + n_r + qubit excitation), the
// state splits into charge blocks and only coherences |Q_a - Q_b| <= band are
// integrated. The band is chosen from the observables and is exact for them.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdr/hilbert.hpp"
#include "rdr/model.hpp"

namespace rdr {

enum class HamiltonianForm { kFull, kDisplaced, kRwa };

const char *form_name(HamiltonianForm form);
/// Accepts "full", "displaced", "rwa". Throws kConfigError otherwise.
HamiltonianForm parse_form(const std::string &name);

/// Basis used for qubit relaxation and dephasing in the displaced forms.
enum class QubitNoiseFrame {
    kRenamed,   ///< sigma_- and sigma_z of the renamed frame
    kPhysical,  ///< bare-qubit operators carried through the rename
};

class CollapseSet {
  public:
    struct Entry {
        std::string label;
        Operator op;
        double rate = 0.0;
    };

    CollapseSet() = default;
    explicit CollapseSet(SpaceDescriptor space) : space_(std::move(space)) {}

    /// Adds sqrt(rate) * op. Throws on negative rate or space mismatch.
    void add(std::string label, const Operator &op, double rate);

    const SpaceDescriptor &space() const { return space_; }
    size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const Entry &entry(size_t i) const { return entries_.at(i); }
    const std::vector<Entry> &entries() const { return entries_; }
    Operator jump(size_t i) const;
    bool has_nonzero_rate() const;

  private:
    SpaceDescriptor space_;
    std::vector<Entry> entries_;
};

struct NamedObservable {
    std::string name;
    Operator op;
};

class Trajectory {
  public:
    struct Snapshot {
        double time_us = 0.0;
        QuantumState state;
    };

    Trajectory() = default;
    explicit Trajectory(std::vector<std::string> names) : names_(std::move(names)) {}

    void append(double time_us, std::vector<cplx> row);
    void add_snapshot(double time_us, QuantumState state);

    const std::vector<double> &times() const { return times_; }
    const std::vector<std::string> &names() const { return names_; }
    const std::vector<Snapshot> &snapshots() const { return snapshots_; }
    size_t size() const { return times_.size(); }
    bool has(const std::string &name) const;

    /// Real parts of one observable. Throws kInvalidArgument for unknown names.
    std::vector<double> series(const std::string &name) const;
    std::vector<cplx> complex_series(const std::string &name) const;
    cplx value(size_t row, const std::string &name) const;

    /// Adds a derived real column computed elsewhere (same length as times).
    void add_column(const std::string &name, const std::vector<double> &values);

    /// Snapshot with time closest to `t_us`, or nullptr if none were stored.
    const Snapshot *nearest_snapshot(double t_us) const;

  private:
    size_t index_of(const std::string &name) const;

    std::vector<std::string> names_;
    std::vector<double> times_;
    std::vector<std::vector<cplx>> rows_;
    std::vector<Snapshot> snapshots_;
};

struct EvolveOptions {
    int record_every = 100;
    std::vector<double> snapshot_times_us;
    /// Per-basis-state charges enabling the block integrator. Empty disables it.
    std::vector<int> charges;
    /// Coherence band; negative selects the narrowest band the observables need.
    int band = -1;
    /// Intermediate states are symmetrized onto the Hermitian subspace.
    bool symmetrize = true;
    /// Integrate in the frame rotating with the diagonal of H. The diagonal
    /// part is then applied exactly and only the remainder limits the step.
    bool interaction_picture = true;
};

/// -i[H, rho] + sum_k (A rho A^dagger - {A^dagger A, rho}/2).
DenseMatrix lindblad_rhs(const Operator &h, const CollapseSet &c, const DenseMatrix &rho);

/// Fixed-step RK4 from rho0 to t_final. Records at t = 0, every
/// `record_every` steps and at the last step. Throws kIntegrationUnstable
/// when the trace drifts or a population drops below tolerance.
Trajectory evolve(const Operator &h, const CollapseSet &c, const QuantumState &rho0,
                  double t_final_us, double dt_us, std::span<const NamedObservable> observables,
                  const EvolveOptions &options = {});

/// Same as above for the product state factors[0] (x) factors[1] (x) ...
/// The full density matrix is never formed, so large truncations stay cheap
/// when the charge blocks are narrow.
Trajectory evolve(const Operator &h, const CollapseSet &c, std::span<const QuantumState> factors,
                  double t_final_us, double dt_us, std::span<const NamedObservable> observables,
                  const EvolveOptions &options = {});

/// Readout decay plus qubit T1 and pure dephasing in the form's basis.
CollapseSet standard_collapses(const SystemParams &params, HamiltonianForm form,
                               const ModeDims &dims,
                               QubitNoiseFrame qubit_frame = QubitNoiseFrame::kPhysical);

/// Relaxation and pure dephasing rates (1/us) after the infinity clamp.
struct QubitRates {
    double relaxation = 0.0;
    double dephasing = 0.0;  ///< 1/T_phi
};
QubitRates qubit_rates(const SystemParams &params);

/// Q = n_m + n_r + [qubit index 0] for every basis state of qubit x memory x readout.
std::vector<int> excitation_charges(const ModeDims &dims);

/// Unique fixed point of the Liouvillian. With `charges`, only the
/// charge-diagonal blocks are solved (exact for charge-conserving generators
/// with a unique steady state). Throws kDegenerateSteadyState otherwise.
QuantumState steady_state(const Operator &h, const CollapseSet &c,
                          std::span<const int> charges = {});

/// Largest |L(rho)| entry, for residual checks.
double liouvillian_residual(const Operator &h, const CollapseSet &c, const DenseMatrix &rho);

}  // namespace rdr
