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

#include "rdr/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "rdr/error.hpp"

namespace rdr {

namespace {

using Triplet = Eigen::Triplet<cplx>;

SparseMatrix kron(const SparseMatrix &a, const SparseMatrix &b) {
    const Eigen::Index n = b.rows();
    std::vector<Triplet> entries;
    entries.reserve(static_cast<size_t>(a.nonZeros() * b.nonZeros()));
    for (Eigen::Index i = 0; i < a.outerSize(); ++i) {
        for (SparseMatrix::InnerIterator ia(a, i); ia; ++ia) {
            for (Eigen::Index k = 0; k < b.outerSize(); ++k) {
                for (SparseMatrix::InnerIterator ib(b, k); ib; ++ib) {
                    entries.emplace_back(ia.row() * n + ib.row(), ia.col() * n + ib.col(),
                                         ia.value() * ib.value());
                }
            }
        }
    }
    SparseMatrix out(a.rows() * n, a.cols() * n);
    out.setFromTriplets(entries.begin(), entries.end());
    return out;
}

void require_same_space(const SpaceDescriptor &a, const SpaceDescriptor &b, const char *what) {
    if (!(a == b)) {
        throw Error(ErrorCode::kSpaceMismatch,
                    std::string(what) + ": space " + a.to_string() + " vs " + b.to_string());
    }
}

// Padding (in Fock levels) that keeps the boundary of the work space away from
// every level reachable by D(alpha) from the first `dim` levels.
int displacement_padding(int dim, double abs_alpha) {
    const double root = std::sqrt(static_cast<double>(dim));
    return static_cast<int>(std::ceil(2.0 * abs_alpha * root + abs_alpha * abs_alpha +
                                      6.0 * (root + abs_alpha))) +
           20;
}

DenseMatrix displacement_dense(int dim, cplx alpha) {
    // exp(G) with G = alpha a^dag - alpha^* a anti-Hermitian; K = iG is Hermitian.
    DenseMatrix k = DenseMatrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) {
        const double s = std::sqrt(static_cast<double>(n));
        k(n, n - 1) = kI * alpha * s;
        k(n - 1, n) = -kI * std::conj(alpha) * s;
    }
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(k);
    const Eigen::VectorXd &lambda = es.eigenvalues();
    Eigen::VectorXcd phases(dim);
    for (int i = 0; i < dim; ++i) phases(i) = std::exp(-kI * lambda(i));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double trace_real(const DenseMatrix &m) { return m.trace().real(); }

}  // namespace

SpaceDescriptor::SpaceDescriptor(std::vector<int> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) {
        throw Error(ErrorCode::kInvalidDimension, "space needs at least one factor");
    }
    total_ = 1;
    for (int f : factors_) {
        if (f < 1) throw Error(ErrorCode::kInvalidDimension, "factor dimensions must be positive");
        total_ *= f;
    }
}

std::string SpaceDescriptor::to_string() const {
    std::ostringstream out;
    out << '[';
    for (size_t i = 0; i < factors_.size(); ++i) {
        if (i) out << 'x';
        out << factors_[i];
    }
    out << ']';
    return out.str();
}

Operator::Operator(SpaceDescriptor space, SparseMatrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != space_.total() || matrix_.cols() != space_.total()) {
        throw Error(ErrorCode::kSpaceMismatch, "operator matrix does not match space " + space_.to_string());
    }
    matrix_.makeCompressed();
}

Operator::Operator(SpaceDescriptor space, const DenseMatrix &matrix)
    : Operator(std::move(space), SparseMatrix(matrix.sparseView(cplx(0.0), 0.0))) {}

Operator Operator::identity(const SpaceDescriptor &space) {
    SparseMatrix m(space.total(), space.total());
    m.setIdentity();
    return Operator(space, std::move(m));
}

Operator Operator::zero(const SpaceDescriptor &space) {
    return Operator(space, SparseMatrix(space.total(), space.total()));
}

Operator Operator::adjoint() const { return Operator(space_, SparseMatrix(matrix_.adjoint())); }

double Operator::max_abs() const {
    double m = 0.0;
    for (Eigen::Index k = 0; k < matrix_.nonZeros(); ++k) m = std::max(m, std::abs(matrix_.valuePtr()[k]));
    return m;
}

double Operator::hermiticity_defect() const {
    SparseMatrix diff = matrix_ - SparseMatrix(matrix_.adjoint());
    double d = 0.0;
    for (Eigen::Index k = 0; k < diff.nonZeros(); ++k) d = std::max(d, std::abs(diff.valuePtr()[k]));
    const double scale = max_abs();
    return scale > 0.0 ? d / scale : d;
}

Operator &Operator::operator+=(const Operator &rhs) {
    require_same_space(space_, rhs.space_, "operator +");
    matrix_ = matrix_ + rhs.matrix_;
    return *this;
}

Operator &Operator::operator-=(const Operator &rhs) {
    require_same_space(space_, rhs.space_, "operator -");
    matrix_ = matrix_ - rhs.matrix_;
    return *this;
}

Operator &Operator::operator*=(cplx s) {
    matrix_ *= s;
    return *this;
}

Operator operator*(const Operator &lhs, const Operator &rhs) {
    require_same_space(lhs.space_, rhs.space_, "operator *");
    return Operator(lhs.space_, SparseMatrix(lhs.matrix_ * rhs.matrix_));
}

Operator commutator(const Operator &a, const Operator &b) { return a * b - b * a; }

Operator annihilation(int dim) {
    if (dim < 2) throw Error(ErrorCode::kInvalidDimension, "annihilation operator needs dim >= 2");
    std::vector<Triplet> entries;
    for (int n = 1; n < dim; ++n) entries.emplace_back(n - 1, n, std::sqrt(static_cast<double>(n)));
    SparseMatrix m(dim, dim);
    m.setFromTriplets(entries.begin(), entries.end());
    return Operator(SpaceDescriptor::single(dim), std::move(m));
}

Operator number_operator(int dim) {
    if (dim < 1) throw Error(ErrorCode::kInvalidDimension, "number operator needs dim >= 1");
    std::vector<Triplet> entries;
    for (int n = 1; n < dim; ++n) entries.emplace_back(n, n, static_cast<double>(n));
    SparseMatrix m(dim, dim);
    m.setFromTriplets(entries.begin(), entries.end());
    return Operator(SpaceDescriptor::single(dim), std::move(m));
}

Operator identity(int dim) { return Operator::identity(SpaceDescriptor::single(dim)); }

Operator pauli(PauliAxis axis) {
    DenseMatrix m = DenseMatrix::Zero(2, 2);
    switch (axis) {
        case PauliAxis::kX: m << 0.0, 1.0, 1.0, 0.0; break;
        case PauliAxis::kY: m << cplx(0.0), -kI, kI, cplx(0.0); break;
        case PauliAxis::kZ: m << 1.0, 0.0, 0.0, -1.0; break;
        case PauliAxis::kPlus: m << 0.0, 1.0, 0.0, 0.0; break;
        case PauliAxis::kMinus: m << 0.0, 0.0, 1.0, 0.0; break;
    }
    return Operator(SpaceDescriptor::single(2), m);
}

Operator tensor(std::span<const Operator> parts) {
    if (parts.empty()) throw Error(ErrorCode::kInvalidArgument, "tensor of zero operators");
    std::vector<int> factors;
    SparseMatrix acc = parts.front().sparse();
    for (int f : parts.front().space().factors()) factors.push_back(f);
    for (size_t i = 1; i < parts.size(); ++i) {
        acc = kron(acc, parts[i].sparse());
        for (int f : parts[i].space().factors()) factors.push_back(f);
    }
    return Operator(SpaceDescriptor(std::move(factors)), std::move(acc));
}

Operator tensor(std::initializer_list<Operator> parts) {
    return tensor(std::span<const Operator>(parts.begin(), parts.size()));
}

Operator embed(const Operator &local, const SpaceDescriptor &space, int factor) {
    if (local.space().num_factors() != 1 || local.dim() != space.factor(factor)) {
        throw Error(ErrorCode::kSpaceMismatch, "embed: local operator does not match factor dimension");
    }
    std::vector<Operator> parts;
    for (int i = 0; i < space.num_factors(); ++i) {
        parts.push_back(i == factor ? local : identity(space.factor(i)));
    }
    return tensor(parts);
}

QuantumState QuantumState::pure(SpaceDescriptor space, StateVector psi, double tail) {
    if (psi.size() != space.total()) throw Error(ErrorCode::kSpaceMismatch, "state vector size mismatch");
    QuantumState s;
    s.kind_ = Kind::kPure;
    s.space_ = std::move(space);
    s.psi_ = std::move(psi);
    s.tail_ = tail;
    return s;
}

QuantumState QuantumState::density(SpaceDescriptor space, DenseMatrix rho, double tail) {
    if (rho.rows() != space.total() || rho.cols() != space.total()) {
        throw Error(ErrorCode::kSpaceMismatch, "density matrix size mismatch");
    }
    QuantumState s;
    s.kind_ = Kind::kDensity;
    s.space_ = std::move(space);
    s.rho_ = std::move(rho);
    s.tail_ = tail;
    return s;
}

DenseMatrix QuantumState::density_matrix() const {
    if (kind_ == Kind::kPure) return psi_ * psi_.adjoint();
    return rho_;
}

void QuantumState::validate() const {
    if (kind_ == Kind::kPure) {
        const double norm = psi_.norm();
        if (std::abs(norm - 1.0) > 1e-10) {
            throw Error(ErrorCode::kInvalidArgument, "pure state not normalized");
        }
        return;
    }
    if (std::abs(trace_real(rho_) - 1.0) > 1e-10) {
        throw Error(ErrorCode::kInvalidArgument, "density matrix trace differs from 1");
    }
    const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-12) throw Error(ErrorCode::kInvalidArgument, "density matrix not Hermitian");
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(rho_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8) {
        throw Error(ErrorCode::kInvalidArgument, "density matrix has a negative eigenvalue");
    }
}

int recommended_dim(double mean_n) {
    const double n = std::max(0.0, mean_n);
    return static_cast<int>(std::ceil(n + 6.0 * std::sqrt(n) + 10.0));
}

StateVector coherent_amplitudes(int dim, cplx alpha) {
    StateVector psi = StateVector::Zero(dim);
    const double r = std::abs(alpha);
    if (r == 0.0) {
        if (dim > 0) psi(0) = 1.0;
        return psi;
    }
    const double phase = std::arg(alpha);
    const double log_r = std::log(r);
    for (int n = 0; n < dim; ++n) {
        const double log_mag = -0.5 * r * r + n * log_r - 0.5 * std::lgamma(n + 1.0);
        psi(n) = std::polar(std::exp(log_mag), n * phase);
    }
    return psi;
}

QuantumState coherent_state(int dim, cplx alpha) {
    if (dim < 1) throw Error(ErrorCode::kInvalidDimension, "coherent state needs dim >= 1");
    StateVector psi = coherent_amplitudes(dim, alpha);
    const double r = std::abs(alpha);
    const double kept = psi.squaredNorm();
    const double tail = std::max(0.0, 1.0 - kept);
    if (tail > kTailError) {
        throw Error(ErrorCode::kTruncationError,
                    "coherent state |alpha|=" + std::to_string(r) + " does not fit in dim " + std::to_string(dim));
    }
    psi /= std::sqrt(kept);
    return QuantumState::pure(SpaceDescriptor::single(dim), std::move(psi), tail);
}

QuantumState fock_state(int dim, int n) {
    if (dim < 1) throw Error(ErrorCode::kInvalidDimension, "fock state needs dim >= 1");
    if (n < 0 || n >= dim) throw Error(ErrorCode::kInvalidArgument, "fock index out of range");
    StateVector psi = StateVector::Zero(dim);
    psi(n) = 1.0;
    return QuantumState::pure(SpaceDescriptor::single(dim), std::move(psi));
}

QuantumState thermal_state(int dim, double mean_n) {
    if (dim < 1) throw Error(ErrorCode::kInvalidDimension, "thermal state needs dim >= 1");
    if (!(mean_n >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "thermal occupation must be >= 0");
    DenseMatrix rho = DenseMatrix::Zero(dim, dim);
    if (mean_n == 0.0) {
        rho(0, 0) = 1.0;
        return QuantumState::density(SpaceDescriptor::single(dim), std::move(rho));
    }
    const double ratio = mean_n / (1.0 + mean_n);
    const double tail = std::pow(ratio, dim);
    if (tail > kTailError) {
        throw Error(ErrorCode::kTruncationError, "thermal state does not fit in dim " + std::to_string(dim));
    }
    double p = 1.0;
    double total = 0.0;
    for (int n = 0; n < dim; ++n) {
        rho(n, n) = p;
        total += p;
        p *= ratio;
    }
    rho /= total;
    return QuantumState::density(SpaceDescriptor::single(dim), std::move(rho), tail);
}

QuantumState cat_state(int dim, cplx alpha) {
    const QuantumState plus = coherent_state(dim, alpha);
    const QuantumState minus = coherent_state(dim, -alpha);
    StateVector psi = plus.vector() + minus.vector();
    const double tail = std::max(plus.truncation_tail(), minus.truncation_tail());
    psi.normalize();
    return QuantumState::pure(SpaceDescriptor::single(dim), std::move(psi), tail);
}

Operator displacement(int dim, cplx alpha) {
    if (dim < 1) throw Error(ErrorCode::kInvalidDimension, "displacement needs dim >= 1");
    const double r = std::abs(alpha);
    if (r == 0.0) return identity(dim);
    const int work = dim + displacement_padding(dim, r);
    const DenseMatrix full = displacement_dense(work, alpha);
    const DenseMatrix block = full.topLeftCorner(dim, dim);

    const int low = std::min(dim, static_cast<int>(std::ceil(r * r + 3.0 * r)));
    double defect = 0.0;
    for (int n = 0; n < low; ++n) defect = std::max(defect, std::abs(1.0 - block.col(n).squaredNorm()));
    if (defect > kTailError) {
        throw Error(ErrorCode::kTruncationError,
                    "displacement |alpha|=" + std::to_string(r) + " leaks out of dim " + std::to_string(dim));
    }
    return Operator(SpaceDescriptor::single(dim), SparseMatrix(block.sparseView(cplx(0.0), 0.0)));
}

QuantumState displace_state(const QuantumState &state, cplx alpha, int out_dim) {
    if (state.space().num_factors() != 1) {
        throw Error(ErrorCode::kInvalidArgument, "displace_state expects a single-mode state");
    }
    if (out_dim < 1) throw Error(ErrorCode::kInvalidDimension, "output dimension must be positive");
    const int in_dim = state.dim();
    const int base = std::max(in_dim, out_dim);
    const int work = base + displacement_padding(base, std::abs(alpha));
    const DenseMatrix d = displacement_dense(work, alpha);
    const auto space = SpaceDescriptor::single(out_dim);

    if (state.is_pure()) {
        StateVector padded = StateVector::Zero(work);
        padded.head(in_dim) = state.vector();
        StateVector moved = d * padded;
        StateVector kept = moved.head(out_dim);
        const double norm2 = kept.squaredNorm();
        const double tail = std::max(0.0, moved.squaredNorm() - norm2);
        if (tail > kTailError) throw Error(ErrorCode::kTruncationError, "displaced state does not fit");
        kept /= std::sqrt(norm2);
        return QuantumState::pure(space, std::move(kept), std::max(tail, state.truncation_tail()));
    }
    DenseMatrix padded = DenseMatrix::Zero(work, work);
    padded.topLeftCorner(in_dim, in_dim) = state.matrix();
    const DenseMatrix moved = d * padded * d.adjoint();
    DenseMatrix kept = moved.topLeftCorner(out_dim, out_dim);
    const double tr = trace_real(kept);
    const double tail = std::max(0.0, trace_real(moved) - tr);
    if (tail > kTailError) throw Error(ErrorCode::kTruncationError, "displaced state does not fit");
    kept /= tr;
    kept = 0.5 * (kept + kept.adjoint()).eval();
    return QuantumState::density(space, std::move(kept), std::max(tail, state.truncation_tail()));
}

cplx expectation(const Operator &op, const QuantumState &state) {
    require_same_space(op.space(), state.space(), "expectation");
    const SparseMatrix &a = op.sparse();
    if (state.is_pure()) {
        const StateVector &psi = state.vector();
        return psi.dot(a * psi);
    }
    const DenseMatrix &rho = state.matrix();
    cplx acc = 0.0;
    for (Eigen::Index i = 0; i < a.outerSize(); ++i) {
        for (SparseMatrix::InnerIterator it(a, i); it; ++it) acc += it.value() * rho(it.col(), it.row());
    }
    return acc;
}

QuantumState tensor_states(std::span<const QuantumState> parts) {
    if (parts.empty()) throw Error(ErrorCode::kInvalidArgument, "tensor of zero states");
    std::vector<int> factors;
    bool all_pure = true;
    double tail = 0.0;
    for (const auto &p : parts) {
        for (int f : p.space().factors()) factors.push_back(f);
        all_pure = all_pure && p.is_pure();
        tail = std::max(tail, p.truncation_tail());
    }
    SpaceDescriptor space(std::move(factors));
    if (all_pure) {
        StateVector acc = parts.front().vector();
        for (size_t i = 1; i < parts.size(); ++i) {
            const StateVector &b = parts[i].vector();
            StateVector next(acc.size() * b.size());
            for (Eigen::Index k = 0; k < acc.size(); ++k) next.segment(k * b.size(), b.size()) = acc(k) * b;
            acc = std::move(next);
        }
        return QuantumState::pure(std::move(space), std::move(acc), tail);
    }
    DenseMatrix acc = parts.front().density_matrix();
    for (size_t i = 1; i < parts.size(); ++i) {
        const DenseMatrix b = parts[i].density_matrix();
        DenseMatrix next(acc.rows() * b.rows(), acc.cols() * b.cols());
        for (Eigen::Index r = 0; r < acc.rows(); ++r) {
            for (Eigen::Index c = 0; c < acc.cols(); ++c) {
                next.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = acc(r, c) * b;
            }
        }
        acc = std::move(next);
    }
    return QuantumState::density(std::move(space), std::move(acc), tail);
}

QuantumState tensor_states(std::initializer_list<QuantumState> parts) {
    return tensor_states(std::span<const QuantumState>(parts.begin(), parts.size()));
}

QuantumState reduced_state(const QuantumState &state, int factor) {
    const auto &f = state.space().factors();
    if (factor < 0 || factor >= static_cast<int>(f.size())) {
        throw Error(ErrorCode::kInvalidArgument, "reduced_state: factor out of range");
    }
    const int d = f[static_cast<size_t>(factor)];
    int before = 1;
    int after = 1;
    for (int i = 0; i < factor; ++i) before *= f[static_cast<size_t>(i)];
    for (size_t i = static_cast<size_t>(factor) + 1; i < f.size(); ++i) after *= f[i];

    DenseMatrix out = DenseMatrix::Zero(d, d);
    if (state.is_pure()) {
        const StateVector &psi = state.vector();
        for (int p = 0; p < before; ++p) {
            for (int q = 0; q < after; ++q) {
                for (int a = 0; a < d; ++a) {
                    const cplx va = psi((p * d + a) * after + q);
                    if (va == cplx(0.0)) continue;
                    for (int b = 0; b < d; ++b) out(a, b) += va * std::conj(psi((p * d + b) * after + q));
                }
            }
        }
    } else {
        const DenseMatrix &rho = state.matrix();
        for (int p = 0; p < before; ++p) {
            for (int q = 0; q < after; ++q) {
                for (int a = 0; a < d; ++a) {
                    const Eigen::Index ia = (p * d + a) * after + q;
                    for (int b = 0; b < d; ++b) out(a, b) += rho(ia, (p * d + b) * after + q);
                }
            }
        }
    }
    return QuantumState::density(SpaceDescriptor::single(d), std::move(out), state.truncation_tail());
}

}  // namespace rdr
