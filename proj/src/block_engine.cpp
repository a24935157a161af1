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

#include "block_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include "rdr/error.hpp"

namespace rdr::detail {
namespace {

using Triplets = std::vector<Eigen::Triplet<cplx>>;

SparseMatrix from_triplets(int rows, int cols, const Triplets &t) {
    SparseMatrix m(rows, cols);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}

// Upper bound on the spectral norm via sqrt(|A|_1 |A|_inf).
double norm_bound(const SparseMatrix &a) {
    std::vector<double> col(static_cast<size_t>(a.cols()), 0.0);
    double row_max = 0.0;
    for (int i = 0; i < a.outerSize(); ++i) {
        double row = 0.0;
        for (SparseMatrix::InnerIterator it(a, i); it; ++it) {
            row += std::abs(it.value());
            col[static_cast<size_t>(it.col())] += std::abs(it.value());
        }
        row_max = std::max(row_max, row);
    }
    const double col_max = col.empty() ? 0.0 : *std::max_element(col.begin(), col.end());
    return std::sqrt(row_max * col_max);
}

}  // namespace

void BlockEngine::Phased::init(const std::vector<int> &rows, const std::vector<int> &cols,
                               const std::vector<double> &d) {
    base.assign(m.valuePtr(), m.valuePtr() + m.nonZeros());
    omega.clear();
    if (d.empty()) return;
    omega.reserve(base.size());
    for (int i = 0; i < m.outerSize(); ++i) {
        for (SparseMatrix::InnerIterator it(m, i); it; ++it) {
            omega.push_back(d[static_cast<size_t>(rows[static_cast<size_t>(it.row())])] -
                            d[static_cast<size_t>(cols[static_cast<size_t>(it.col())])]);
        }
    }
}

void BlockEngine::Phased::set_time(double t) {
    if (omega.empty()) return;
    cplx *v = m.valuePtr();
    for (size_t k = 0; k < base.size(); ++k) {
        v[k] = omega[k] == 0.0 ? base[k] : base[k] * std::polar(1.0, omega[k] * t);
    }
}

void BlockEngine::set_time(double t) {
    if (!ip_ || t == time_) return;
    time_ = t;
    for (Sector &sec : sectors_) sec.m.set_time(t);
    for (auto &blocks : jumps_) {
        for (JumpBlock &b : blocks) {
            if (b.source < 0) continue;
            b.c.set_time(t);
            b.c_adj.set_time(t);
        }
    }
}

int BlockEngine::required_band(const Operator &op, std::span<const int> charges) {
    if (charges.empty()) return 0;
    int band = 0;
    const SparseMatrix &m = op.sparse();
    for (int i = 0; i < m.outerSize(); ++i) {
        for (SparseMatrix::InnerIterator it(m, i); it; ++it) {
            if (it.value() == cplx(0.0)) continue;
            band = std::max(band, std::abs(charges[static_cast<size_t>(it.row())] -
                                           charges[static_cast<size_t>(it.col())]));
        }
    }
    return band;
}

BlockEngine::BlockEngine(const Operator &h, const CollapseSet &c, std::span<const int> charges,
                         int band, bool interaction_picture)
    : dim_(h.dim()), ip_(interaction_picture) {
    if (!charges.empty() && static_cast<int>(charges.size()) != dim_) {
        fail(ErrorCode::kSpaceMismatch, "charge vector length does not match the space");
    }
    std::vector<int> q(static_cast<size_t>(dim_), 0);
    if (!charges.empty()) std::copy(charges.begin(), charges.end(), q.begin());

    std::map<int, int> index_of_charge;
    for (int v : q) index_of_charge.emplace(v, 0);
    for (auto &[charge, idx] : index_of_charge) {
        idx = static_cast<int>(sectors_.size());
        sectors_.push_back(Sector{charge, {}, {}, {}});
    }
    nsec_ = static_cast<int>(sectors_.size());
    charge_span_ = sectors_.back().charge - sectors_.front().charge;
    band_ = band < 0 ? charge_span_ : std::min(band, charge_span_);

    sector_of_.resize(static_cast<size_t>(dim_));
    local_of_.resize(static_cast<size_t>(dim_));
    for (int i = 0; i < dim_; ++i) {
        const int s = index_of_charge.at(q[static_cast<size_t>(i)]);
        sector_of_[static_cast<size_t>(i)] = s;
        local_of_[static_cast<size_t>(i)] = static_cast<int>(sectors_[static_cast<size_t>(s)].basis.size());
        sectors_[static_cast<size_t>(s)].basis.push_back(i);
    }

    if (ip_) {
        d_.assign(static_cast<size_t>(dim_), 0.0);
        const SparseMatrix &hs = h.sparse();
        for (int i = 0; i < hs.outerSize(); ++i) {
            for (SparseMatrix::InnerIterator it(hs, i); it; ++it) {
                if (it.row() == it.col()) d_[static_cast<size_t>(i)] = it.value().real();
            }
        }
    }
    auto diag_shift = [&](int r, int col) {
        return ip_ && r == col ? d_[static_cast<size_t>(r)] : 0.0;
    };

    // Jump operators and their charge shifts.
    std::vector<SparseMatrix> js;
    std::vector<int> shifts;
    SparseMatrix heff = h.sparse();
    for (size_t k = 0; k < c.size(); ++k) {
        if (c.entry(k).rate == 0.0) continue;
        SparseMatrix j = c.jump(k).sparse();
        std::optional<int> shift;
        for (int i = 0; i < j.outerSize(); ++i) {
            for (SparseMatrix::InnerIterator it(j, i); it; ++it) {
                if (it.value() == cplx(0.0)) continue;
                const int d = q[static_cast<size_t>(it.row())] - q[static_cast<size_t>(it.col())];
                if (shift && *shift != d) {
                    fail(ErrorCode::kInvalidArgument,
                         "collapse '" + c.entry(k).label + "' mixes charge shifts");
                }
                shift = d;
            }
        }
        if (!shift) continue;
        SparseMatrix jdj = SparseMatrix(j.adjoint()) * j;
        heff -= (0.5 * kI) * jdj;
        dissipation_bound_ += 2.0 * norm_bound(j) * norm_bound(j);
        js.push_back(std::move(j));
        shifts.push_back(*shift);
    }

    std::vector<Triplets> ht(static_cast<size_t>(nsec_)), et(static_cast<size_t>(nsec_));
    for (int i = 0; i < heff.outerSize(); ++i) {
        for (SparseMatrix::InnerIterator it(heff, i); it; ++it) {
            const int r = static_cast<int>(it.row()), col = static_cast<int>(it.col());
            const int s = sector_of_[static_cast<size_t>(r)];
            if (s != sector_of_[static_cast<size_t>(col)]) {
                if (it.value() == cplx(0.0)) continue;
                fail(ErrorCode::kInvalidArgument, "Hamiltonian does not conserve the supplied charges");
            }
            et[static_cast<size_t>(s)].emplace_back(local_of_[static_cast<size_t>(r)],
                                                    local_of_[static_cast<size_t>(col)],
                                                    -kI * (it.value() - diag_shift(r, col)));
        }
    }
    const SparseMatrix &hs = h.sparse();
    for (int i = 0; i < hs.outerSize(); ++i) {
        for (SparseMatrix::InnerIterator it(hs, i); it; ++it) {
            const int r = static_cast<int>(it.row()), col = static_cast<int>(it.col());
            const int s = sector_of_[static_cast<size_t>(r)];
            if (s != sector_of_[static_cast<size_t>(col)]) continue;
            ht[static_cast<size_t>(s)].emplace_back(local_of_[static_cast<size_t>(r)],
                                                    local_of_[static_cast<size_t>(col)],
                                                    it.value() - diag_shift(r, col));
        }
    }
    Eigen::Index max_d = 0;
    for (int s = 0; s < nsec_; ++s) {
        Sector &sec = sectors_[static_cast<size_t>(s)];
        const int d = static_cast<int>(sec.basis.size());
        max_d = std::max<Eigen::Index>(max_d, d);
        sec.h = from_triplets(d, d, ht[static_cast<size_t>(s)]);
        sec.m.m = from_triplets(d, d, et[static_cast<size_t>(s)]);
        sec.m.init(sec.basis, sec.basis, d_);
    }

    for (size_t k = 0; k < js.size(); ++k) {
        std::vector<JumpBlock> blocks(static_cast<size_t>(nsec_));
        std::vector<Triplets> trip(static_cast<size_t>(nsec_));
        for (int s = 0; s < nsec_; ++s) {
            auto it = index_of_charge.find(sectors_[static_cast<size_t>(s)].charge - shifts[k]);
            if (it != index_of_charge.end()) blocks[static_cast<size_t>(s)].source = it->second;
        }
        const SparseMatrix &j = js[k];
        for (int i = 0; i < j.outerSize(); ++i) {
            for (SparseMatrix::InnerIterator it(j, i); it; ++it) {
                if (it.value() == cplx(0.0)) continue;
                const int r = static_cast<int>(it.row()), col = static_cast<int>(it.col());
                trip[static_cast<size_t>(sector_of_[static_cast<size_t>(r)])].emplace_back(
                    local_of_[static_cast<size_t>(r)], local_of_[static_cast<size_t>(col)], it.value());
            }
        }
        for (int s = 0; s < nsec_; ++s) {
            JumpBlock &b = blocks[static_cast<size_t>(s)];
            if (b.source < 0) continue;
            if (trip[static_cast<size_t>(s)].empty()) {
                b.source = -1;
                continue;
            }
            const int rows = static_cast<int>(sectors_[static_cast<size_t>(s)].basis.size());
            const int cols = static_cast<int>(sectors_[static_cast<size_t>(b.source)].basis.size());
            b.c.m = from_triplets(rows, cols, trip[static_cast<size_t>(s)]);
            b.c.init(sectors_[static_cast<size_t>(s)].basis,
                     sectors_[static_cast<size_t>(b.source)].basis, d_);
            b.c_adj.m = b.c.m.adjoint();
            b.c_adj.init(sectors_[static_cast<size_t>(b.source)].basis,
                         sectors_[static_cast<size_t>(s)].basis, d_);
        }
        jumps_.push_back(std::move(blocks));
    }

    pair_of_.assign(static_cast<size_t>(nsec_ * nsec_), -1);
    for (int s = 0; s < nsec_; ++s) {
        for (int t = 0; t < nsec_; ++t) {
            if (std::abs(sectors_[static_cast<size_t>(s)].charge -
                         sectors_[static_cast<size_t>(t)].charge) > band_) {
                continue;
            }
            pair_of_[static_cast<size_t>(s * nsec_ + t)] = static_cast<int>(pairs_.size());
            pairs_.push_back(Pair{s, t, size_});
            size_ += static_cast<Eigen::Index>(sectors_[static_cast<size_t>(s)].basis.size()) *
                     static_cast<Eigen::Index>(sectors_[static_cast<size_t>(t)].basis.size());
        }
    }
    y_.resize(size_);
    scratch_.resize(max_d * max_d);

    auto track = [&](const Phased &ph) {
        for (double w : ph.omega) max_omega_ = std::max(max_omega_, std::abs(w));
    };
    for (const Sector &sec : sectors_) track(sec.m);
    for (const auto &blocks : jumps_) {
        for (const JumpBlock &b : blocks) {
            if (b.source < 0) continue;
            track(b.c);
            track(b.c_adj);
        }
    }
}

Eigen::Map<DenseMatrix> BlockEngine::block(Eigen::VectorXcd &x, int p) const {
    const Pair &pr = pairs_[static_cast<size_t>(p)];
    return {x.data() + pr.offset,
            static_cast<Eigen::Index>(sectors_[static_cast<size_t>(pr.row)].basis.size()),
            static_cast<Eigen::Index>(sectors_[static_cast<size_t>(pr.col)].basis.size())};
}

Eigen::Map<const DenseMatrix> BlockEngine::block(const Eigen::VectorXcd &x, int p) const {
    const Pair &pr = pairs_[static_cast<size_t>(p)];
    return {x.data() + pr.offset,
            static_cast<Eigen::Index>(sectors_[static_cast<size_t>(pr.row)].basis.size()),
            static_cast<Eigen::Index>(sectors_[static_cast<size_t>(pr.col)].basis.size())};
}

template <typename Fn>
Eigen::VectorXcd BlockEngine::pack_with(Fn &&entry) const {
    Eigen::VectorXcd x(size_);
    for (int p = 0; p < static_cast<int>(pairs_.size()); ++p) {
        auto b = block(x, p);
        const auto &rows = sectors_[static_cast<size_t>(pairs_[static_cast<size_t>(p)].row)].basis;
        const auto &cols = sectors_[static_cast<size_t>(pairs_[static_cast<size_t>(p)].col)].basis;
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            for (Eigen::Index i = 0; i < b.rows(); ++i) {
                b(i, j) = entry(rows[static_cast<size_t>(i)], cols[static_cast<size_t>(j)]);
            }
        }
    }
    return x;
}

Eigen::VectorXcd BlockEngine::pack(const DenseMatrix &rho) const {
    if (rho.rows() != dim_ || rho.cols() != dim_) {
        fail(ErrorCode::kSpaceMismatch, "density matrix does not match the generator");
    }
    return pack_with([&](int r, int c) { return rho(r, c); });
}

Eigen::VectorXcd BlockEngine::pack_pure(const StateVector &psi) const {
    if (psi.size() != dim_) fail(ErrorCode::kSpaceMismatch, "state does not match the generator");
    return pack_with([&](int r, int c) { return psi[r] * std::conj(psi[c]); });
}

Eigen::VectorXcd BlockEngine::pack_product(std::span<const DenseMatrix> factors) const {
    long long total = 1;
    for (const auto &f : factors) {
        if (f.rows() != f.cols() || f.rows() < 1) {
            fail(ErrorCode::kInvalidArgument, "product factors must be square");
        }
        total *= f.rows();
    }
    if (total != dim_) fail(ErrorCode::kSpaceMismatch, "product state does not match the generator");
    // digits[k][i]: index of basis state i in factor k (last factor fastest).
    std::vector<std::vector<int>> digits(factors.size(), std::vector<int>(static_cast<size_t>(dim_)));
    for (int i = 0; i < dim_; ++i) {
        int rest = i;
        for (size_t k = factors.size(); k-- > 0;) {
            const int d = static_cast<int>(factors[k].rows());
            digits[k][static_cast<size_t>(i)] = rest % d;
            rest /= d;
        }
    }
    return pack_with([&](int r, int c) {
        cplx v = 1.0;
        for (size_t k = 0; k < factors.size(); ++k) {
            v *= factors[k](digits[k][static_cast<size_t>(r)], digits[k][static_cast<size_t>(c)]);
        }
        return v;
    });
}

DenseMatrix BlockEngine::unpack(const Eigen::VectorXcd &x, double t) const {
    DenseMatrix rho = DenseMatrix::Zero(dim_, dim_);
    for (int p = 0; p < static_cast<int>(pairs_.size()); ++p) {
        auto b = block(x, p);
        const auto &rows = sectors_[static_cast<size_t>(pairs_[static_cast<size_t>(p)].row)].basis;
        const auto &cols = sectors_[static_cast<size_t>(pairs_[static_cast<size_t>(p)].col)].basis;
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            for (Eigen::Index i = 0; i < b.rows(); ++i) {
                const int r = rows[static_cast<size_t>(i)], c = cols[static_cast<size_t>(j)];
                rho(r, c) = ip_ ? b(i, j) * std::polar(1.0, -(d_[static_cast<size_t>(r)] -
                                                               d_[static_cast<size_t>(c)]) * t)
                                : b(i, j);
            }
        }
    }
    return rho;
}

void BlockEngine::rhs(const Eigen::VectorXcd &x, double t, Eigen::VectorXcd &out) {
    set_time(t);
    out.resize(size_);
    const int np = static_cast<int>(pairs_.size());
    for (int p = 0; p < np; ++p) {
        block(y_, p).noalias() =
            sectors_[static_cast<size_t>(pairs_[static_cast<size_t>(p)].row)].m.m * block(x, p);
    }
    for (int p = 0; p < np; ++p) {
        const Pair &pr = pairs_[static_cast<size_t>(p)];
        auto o = block(out, p);
        o = block(y_, p) + block(y_, pair_index(pr.col, pr.row)).adjoint();
        for (const auto &jb : jumps_) {
            const JumpBlock &js = jb[static_cast<size_t>(pr.row)];
            const JumpBlock &jt = jb[static_cast<size_t>(pr.col)];
            if (js.source < 0 || jt.source < 0) continue;
            const int q = pair_index(js.source, jt.source);
            const auto src = block(x, q);
            Eigen::Map<DenseMatrix> tmp(scratch_.data(), js.c.m.rows(), src.cols());
            tmp.noalias() = js.c.m * src;
            o.noalias() += tmp * jt.c_adj.m;
        }
    }
}

cplx BlockEngine::trace(const Eigen::VectorXcd &x) const {
    cplx tr = 0.0;
    for (int s = 0; s < nsec_; ++s) tr += block(x, pair_index(s, s)).trace();
    return tr;
}

double BlockEngine::min_population(const Eigen::VectorXcd &x) const {
    double m = std::numeric_limits<double>::infinity();
    for (int s = 0; s < nsec_; ++s) {
        m = std::min(m, block(x, pair_index(s, s)).diagonal().real().minCoeff());
    }
    return m;
}

void BlockEngine::symmetrize(Eigen::VectorXcd &x) const {
    for (int p = 0; p < static_cast<int>(pairs_.size()); ++p) {
        const Pair &pr = pairs_[static_cast<size_t>(p)];
        if (pr.row > pr.col) continue;
        auto b = block(x, p);
        if (pr.row == pr.col) {
            const DenseMatrix avg = 0.5 * (b + b.adjoint());
            b = avg;
        } else {
            auto bt = block(x, pair_index(pr.col, pr.row));
            const DenseMatrix avg = 0.5 * (b + bt.adjoint());
            b = avg;
            bt = avg.adjoint();
        }
    }
}

BlockEngine::Compiled BlockEngine::compile(const Operator &op) const {
    if (op.dim() != dim_) fail(ErrorCode::kSpaceMismatch, "observable does not match the generator");
    Compiled out;
    const SparseMatrix &m = op.sparse();
    for (int i = 0; i < m.outerSize(); ++i) {
        for (SparseMatrix::InnerIterator it(m, i); it; ++it) {
            if (it.value() == cplx(0.0)) continue;
            // tr(A rho) picks rho(col, row).
            const size_t r = static_cast<size_t>(it.row()), c = static_cast<size_t>(it.col());
            const int s = sector_of_[c], t = sector_of_[r];
            const int p = pair_index(s, t);
            if (p < 0) {
                fail(ErrorCode::kInvalidArgument, "observable needs coherences outside the evolved band");
            }
            const Eigen::Index rows = static_cast<Eigen::Index>(sectors_[static_cast<size_t>(s)].basis.size());
            out.offsets.push_back(pairs_[static_cast<size_t>(p)].offset + local_of_[c] +
                                  static_cast<Eigen::Index>(local_of_[r]) * rows);
            out.coeffs.push_back(it.value());
            // rho(c, r) is stored with the phase e^{i(d_c - d_r)t}.
            out.omegas.push_back(ip_ ? d_[c] - d_[r] : 0.0);
        }
    }
    return out;
}

cplx BlockEngine::evaluate(const Compiled &obs, const Eigen::VectorXcd &x, double t) {
    cplx acc = 0.0;
    for (size_t k = 0; k < obs.offsets.size(); ++k) {
        const double w = obs.omegas[k];
        const cplx v = x[obs.offsets[k]];
        acc += obs.coeffs[k] * (w == 0.0 ? v : v * std::polar(1.0, -w * t));
    }
    return acc;
}

double BlockEngine::spectral_radius_bound() const {
    std::vector<double> lo(static_cast<size_t>(nsec_)), hi(static_cast<size_t>(nsec_));
    for (int s = 0; s < nsec_; ++s) {
        const SparseMatrix &h = sectors_[static_cast<size_t>(s)].h;
        double a = 0.0, b = 0.0;
        if (h.rows() <= 1500) {
            DenseMatrix dense(h);
            dense = 0.5 * (dense + dense.adjoint()).eval();
            Eigen::SelfAdjointEigenSolver<DenseMatrix> es(dense, Eigen::EigenvaluesOnly);
            a = es.eigenvalues().minCoeff();
            b = es.eigenvalues().maxCoeff();
        } else {
            a = std::numeric_limits<double>::infinity();
            b = -a;
            for (int i = 0; i < h.outerSize(); ++i) {
                double center = 0.0, radius = 0.0;
                for (SparseMatrix::InnerIterator it(h, i); it; ++it) {
                    if (it.col() == i) center = it.value().real();
                    else radius += std::abs(it.value());
                }
                a = std::min(a, center - radius);
                b = std::max(b, center + radius);
            }
        }
        lo[static_cast<size_t>(s)] = a;
        hi[static_cast<size_t>(s)] = b;
    }
    double spread = 0.0;
    for (const Pair &p : pairs_) {
        spread = std::max(spread, hi[static_cast<size_t>(p.row)] - lo[static_cast<size_t>(p.col)]);
        spread = std::max(spread, hi[static_cast<size_t>(p.col)] - lo[static_cast<size_t>(p.row)]);
    }
    return std::hypot(spread, dissipation_bound_);
}

}  // namespace rdr::detail
