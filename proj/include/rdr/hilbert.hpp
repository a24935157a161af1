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

// Truncated Fock-space and qubit operator algebra.
//
// Composite spaces are ordered qubit (x) memory (x) readout. The qubit basis
// uses index 0 for the +1 eigenstate of sigma_z ("excited") and index 1 for
// the -1 eigenstate ("ground"), so sigma_- maps index 0 onto index 1.

#include <complex>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace rdr {

using cplx = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using StateVector = Eigen::VectorXcd;

inline constexpr cplx kI{0.0, 1.0};

class SpaceDescriptor {
  public:
    SpaceDescriptor() = default;
    explicit SpaceDescriptor(std::vector<int> factors);

    static SpaceDescriptor single(int dim) { return SpaceDescriptor({dim}); }

    const std::vector<int> &factors() const { return factors_; }
    int num_factors() const { return static_cast<int>(factors_.size()); }
    int factor(int i) const { return factors_.at(static_cast<size_t>(i)); }
    int total() const { return total_; }
    std::string to_string() const;

    bool operator==(const SpaceDescriptor &other) const { return factors_ == other.factors_; }

  private:
    std::vector<int> factors_;
    int total_ = 0;
};

/// Linear operator on a composite space, backed by a row-major sparse matrix.
class Operator {
  public:
    Operator() = default;
    Operator(SpaceDescriptor space, SparseMatrix matrix);
    Operator(SpaceDescriptor space, const DenseMatrix &matrix);

    static Operator identity(const SpaceDescriptor &space);
    static Operator zero(const SpaceDescriptor &space);

    const SpaceDescriptor &space() const { return space_; }
    const SparseMatrix &sparse() const { return matrix_; }
    DenseMatrix dense() const { return DenseMatrix(matrix_); }
    int dim() const { return space_.total(); }

    Operator adjoint() const;
    /// max|A - A^dagger| / max(1, max|A|).
    double hermiticity_defect() const;
    double max_abs() const;

    Operator &operator+=(const Operator &rhs);
    Operator &operator-=(const Operator &rhs);
    Operator &operator*=(cplx s);

    friend Operator operator+(Operator lhs, const Operator &rhs) { return lhs += rhs; }
    friend Operator operator-(Operator lhs, const Operator &rhs) { return lhs -= rhs; }
    friend Operator operator*(Operator lhs, cplx s) { return lhs *= s; }
    friend Operator operator*(cplx s, Operator rhs) { return rhs *= s; }
    friend Operator operator*(double s, Operator rhs) { return rhs *= cplx(s, 0.0); }
    friend Operator operator*(const Operator &lhs, const Operator &rhs);
    friend Operator operator-(Operator op) { return op *= cplx(-1.0, 0.0); }

  private:
    SpaceDescriptor space_;
    SparseMatrix matrix_;
};

Operator commutator(const Operator &a, const Operator &b);

enum class PauliAxis { kX, kY, kZ, kPlus, kMinus };

/// Ladder operator with <n-1|a|n> = sqrt(n). Throws kInvalidDimension for dim < 2.
Operator annihilation(int dim);
Operator number_operator(int dim);
Operator identity(int dim);
Operator pauli(PauliAxis axis);

/// Kronecker product in the given order (callers pass qubit, memory, readout).
Operator tensor(std::span<const Operator> parts);
Operator tensor(std::initializer_list<Operator> parts);

/// Lifts a single-factor operator into `space` at position `factor`.
Operator embed(const Operator &local, const SpaceDescriptor &space, int factor);

class QuantumState {
  public:
    enum class Kind { kPure, kDensity };

    QuantumState() = default;
    static QuantumState pure(SpaceDescriptor space, StateVector psi, double tail = 0.0);
    static QuantumState density(SpaceDescriptor space, DenseMatrix rho, double tail = 0.0);

    Kind kind() const { return kind_; }
    bool is_pure() const { return kind_ == Kind::kPure; }
    const SpaceDescriptor &space() const { return space_; }
    int dim() const { return space_.total(); }
    const StateVector &vector() const { return psi_; }
    const DenseMatrix &matrix() const { return rho_; }
    /// |psi><psi| for pure states, the stored matrix otherwise.
    DenseMatrix density_matrix() const;
    /// Probability mass discarded by Fock truncation before renormalization.
    double truncation_tail() const { return tail_; }

    /// Throws kInvalidArgument when the normalization, Hermiticity or
    /// positivity invariants are violated.
    void validate() const;

  private:
    Kind kind_ = Kind::kPure;
    SpaceDescriptor space_;
    StateVector psi_;
    DenseMatrix rho_;
    double tail_ = 0.0;
};

/// Truncated probability mass above which state constructors refuse to renormalize.
inline constexpr double kTailError = 1e-6;

/// Smallest dimension satisfying n + 6 sqrt(n) + 10 for mean occupation n.
int recommended_dim(double mean_n);

/// <n|alpha> for n < dim without renormalization.
StateVector coherent_amplitudes(int dim, cplx alpha);

QuantumState coherent_state(int dim, cplx alpha);
QuantumState fock_state(int dim, int n);
QuantumState thermal_state(int dim, double mean_n);
QuantumState cat_state(int dim, cplx alpha);

/// exp(alpha a^dagger - alpha^* a), computed in a padded space and cut back
/// to `dim` levels.
Operator displacement(int dim, cplx alpha);

/// D(alpha) rho D(alpha)^dagger for a single-mode state, evaluated in a padded
/// space and truncated to `out_dim` (renormalized, tail recorded).
QuantumState displace_state(const QuantumState &state, cplx alpha, int out_dim);

cplx expectation(const Operator &op, const QuantumState &state);

/// Product state in the given factor order. Pure only if every part is pure.
QuantumState tensor_states(std::span<const QuantumState> parts);
QuantumState tensor_states(std::initializer_list<QuantumState> parts);

/// Reduced density matrix of one factor.
QuantumState reduced_state(const QuantumState &state, int factor);

}  // namespace rdr
