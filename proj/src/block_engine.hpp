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

// Internal: density matrix stored as charge blocks packed into one vector.
//
// With the interaction picture enabled, the real diagonal D of H is removed
// and applied exactly: the stored state is e^{iDt} rho e^{-iDt} and every
// remaining matrix entry (i, j) carries the phase e^{i(d_i - d_j)t}.

#include <algorithm>
#include <span>
#include <vector>

#include "rdr/dynamics.hpp"

namespace rdr::detail {

class BlockEngine {
  public:
    /// Empty `charges` puts every basis state in one sector.
    BlockEngine(const Operator &h, const CollapseSet &c, std::span<const int> charges, int band,
                bool interaction_picture);

    struct Compiled {
        std::vector<Eigen::Index> offsets;
        std::vector<cplx> coeffs;
        std::vector<double> omegas;
    };

    /// Widest |Q_i - Q_j| among the nonzero entries of `op`.
    static int required_band(const Operator &op, std::span<const int> charges);

    Eigen::Index size() const { return size_; }
    int band() const { return band_; }
    int charge_span() const { return charge_span_; }

    Eigen::VectorXcd pack(const DenseMatrix &rho) const;
    /// Same as pack() for |psi><psi| without forming the full matrix.
    Eigen::VectorXcd pack_pure(const StateVector &psi) const;
    /// Same as pack() for a tensor product; factors follow the space layout.
    Eigen::VectorXcd pack_product(std::span<const DenseMatrix> factors) const;
    DenseMatrix unpack(const Eigen::VectorXcd &x, double t) const;

    void rhs(const Eigen::VectorXcd &x, double t, Eigen::VectorXcd &out);
    cplx trace(const Eigen::VectorXcd &x) const;
    double min_population(const Eigen::VectorXcd &x) const;
    void symmetrize(Eigen::VectorXcd &x) const;

    Compiled compile(const Operator &op) const;
    static cplx evaluate(const Compiled &obs, const Eigen::VectorXcd &x, double t);

    /// Radius of a disc containing the generator spectrum, for step control.
    double spectral_radius_bound() const;
    /// Largest phase rate carried by the generator entries (0 without the
    /// interaction picture).
    double max_phase_rate() const { return max_omega_; }

  private:
    struct Phased {
        SparseMatrix m;
        std::vector<cplx> base;
        std::vector<double> omega;

        void init(const std::vector<int> &rows, const std::vector<int> &cols,
                  const std::vector<double> &d);
        void set_time(double t);
    };
    struct Sector {
        int charge = 0;
        std::vector<int> basis;  // original indices, ascending
        SparseMatrix h;          // Hermitian part without D, for the step bound
        Phased m;                // -i (H - D) - sum A^dagger A / 2
    };
    struct Pair {
        int row = 0, col = 0;  // sector indices
        Eigen::Index offset = 0;
    };
    struct JumpBlock {
        int source = -1;  // sector fed into this one, or -1
        Phased c;         // d_target x d_source
        Phased c_adj;
    };

    void set_time(double t);

    int pair_index(int s, int t) const { return pair_of_[static_cast<size_t>(s * nsec_ + t)]; }
    Eigen::Map<DenseMatrix> block(Eigen::VectorXcd &x, int p) const;
    Eigen::Map<const DenseMatrix> block(const Eigen::VectorXcd &x, int p) const;

    template <typename Fn>
    Eigen::VectorXcd pack_with(Fn &&entry) const;

    int dim_ = 0;
    bool ip_ = false;
    std::vector<double> d_;
    double time_ = 0.0;
    double max_omega_ = 0.0;
    int nsec_ = 0;
    int band_ = 0;
    int charge_span_ = 0;
    std::vector<Sector> sectors_;
    std::vector<int> sector_of_;  // per basis index
    std::vector<int> local_of_;
    std::vector<Pair> pairs_;
    std::vector<int> pair_of_;
    std::vector<std::vector<JumpBlock>> jumps_;  // [collapse][target sector]
    double dissipation_bound_ = 0.0;
    Eigen::Index size_ = 0;
    Eigen::VectorXcd y_;
    Eigen::VectorXcd scratch_;
};

}  // namespace rdr::detail
