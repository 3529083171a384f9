// Copyright 2026 The gausstopo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GAUSSTOPO_GAUSSIAN_HPP
#define GAUSSTOPO_GAUSSIAN_HPP

#include <cmath>
#include <complex>
#include <memory>

#include "gausstopo/core.hpp"

namespace gausstopo {

/// Zero-mean Gaussian pure state written as Z = V + iU.
///
/// The wavefunction is proportional to exp(i/2 q^T Z q); U must be positive
/// definite. An empty graph (zero modes) is allowed as the result of measuring
/// out every mode.
class GaussGraph {
   public:
    GaussGraph() = default;

    GaussGraph(Mat v, Mat u) : v_(std::move(v)), u_(std::move(u)) {
        if (v_.rows() != u_.rows() || v_.rows() != v_.cols() || u_.rows() != u_.cols()) {
            throw DomainError("V and U must be square matrices of equal size");
        }
        if (!is_symmetric(v_, 1e-12) || !is_symmetric(u_, 1e-12)) {
            throw DomainError("V and U must be symmetric within 1e-12");
        }
        v_ = 0.5 * (v_ + v_.transpose()).eval();
        u_ = 0.5 * (u_ + u_.transpose()).eval();
        if (u_.rows() > 0) {
            Eigen::LLT<Mat> llt(u_);
            if (llt.info() != Eigen::Success) {
                throw DomainError("U must be positive definite");
            }
        }
        v_zero_ = v_.rows() == 0 || (v_.array() == 0.0).all();
    }

    static GaussGraph from_z(const CMat &z) { return GaussGraph(z.real(), z.imag()); }

    int n_modes() const { return static_cast<int>(u_.rows()); }
    const Mat &v() const { return v_; }
    const Mat &u() const { return u_; }
    bool v_is_zero() const { return v_zero_; }

    CMat z() const {
        CMat out(n_modes(), n_modes());
        out.real() = v_;
        out.imag() = u_;
        return out;
    }

   private:
    Mat v_;
    Mat u_;
    bool v_zero_ = true;
};

/// Data retained from the graph a covariance matrix was built from. The
/// spectrum and negativity routines use it for exact pure-state identities.
struct PureSource {
    GaussGraph graph;
    Mat u_inv;
};

/// Symmetrized second moments in the ordering (q_1..q_N, p_1..p_N).
class CovMatrix {
   public:
    CovMatrix(Mat gamma, double kappa = 1.0, std::shared_ptr<const PureSource> source = nullptr)
        : gamma_(std::move(gamma)), kappa_(kappa), source_(std::move(source)) {
        if (gamma_.rows() != gamma_.cols() || gamma_.rows() % 2 != 0) {
            throw DomainError("covariance matrix must be square with even dimension");
        }
        if (!is_symmetric(gamma_, 1e-10 * std::max(1.0, gamma_.cwiseAbs().maxCoeff()))) {
            throw DomainError("covariance matrix must be symmetric");
        }
        if (kappa_ < 1.0) {
            throw DomainError("kappa must be >= 1");
        }
        int n = n_modes();
        block_diagonal_ = n == 0 || (gamma_.topRightCorner(n, n).array() == 0.0).all();
    }

    int n_modes() const { return static_cast<int>(gamma_.rows() / 2); }
    const Mat &gamma() const { return gamma_; }
    double kappa() const { return kappa_; }
    bool block_diagonal() const { return block_diagonal_; }
    const std::shared_ptr<const PureSource> &source() const { return source_; }

    auto q_block() const { return gamma_.topLeftCorner(n_modes(), n_modes()); }
    auto p_block() const { return gamma_.bottomRightCorner(n_modes(), n_modes()); }

   private:
    Mat gamma_;
    double kappa_;
    bool block_diagonal_ = true;
    std::shared_ptr<const PureSource> source_;
};

struct CovarianceOptions {
    /// Reciprocal condition estimate of U below 1/max_condition is rejected.
    double max_condition = 1e13;
};

inline CovMatrix covariance_from_graph(const GaussGraph &g, const CovarianceOptions &opts = {}) {
    const int n = g.n_modes();
    Mat u_inv = Mat::Zero(n, n);
    if (n > 0) {
        Eigen::LLT<Mat> llt(g.u());
        if (llt.info() != Eigen::Success || llt.rcond() * opts.max_condition < 1.0) {
            throw IllConditionedError(
                fmt::format("U is numerically singular (rcond estimate {:.3g})", llt.rcond()));
        }
        u_inv = llt.solve(Mat::Identity(n, n));
        u_inv = 0.5 * (u_inv + u_inv.transpose()).eval();
    }
    Mat gamma(2 * n, 2 * n);
    gamma.topLeftCorner(n, n) = 0.5 * u_inv;
    if (g.v_is_zero()) {
        gamma.topRightCorner(n, n).setZero();
        gamma.bottomLeftCorner(n, n).setZero();
        gamma.bottomRightCorner(n, n) = 0.5 * g.u();
    } else {
        Mat uv = u_inv * g.v();
        gamma.topRightCorner(n, n) = 0.5 * uv;
        gamma.bottomLeftCorner(n, n) = 0.5 * uv.transpose();
        Mat pp = g.u() + g.v() * uv;
        gamma.bottomRightCorner(n, n) = 0.25 * (pp + pp.transpose());
    }
    auto source = std::make_shared<PureSource>(PureSource{g, std::move(u_inv)});
    return CovMatrix(std::move(gamma), 1.0, std::move(source));
}

inline CovMatrix thermal_scale(const CovMatrix &c, double kappa) {
    if (!(kappa >= 1.0)) {
        throw DomainError(fmt::format("thermal scale kappa = {} is below 1", kappa));
    }
    return CovMatrix(kappa * c.gamma(), kappa * c.kappa(), c.source());
}

namespace detail {

inline std::vector<int> all_but(int n, int skip) {
    std::vector<int> idx;
    idx.reserve(n - 1);
    for (int i = 0; i < n; ++i) {
        if (i != skip) {
            idx.push_back(i);
        }
    }
    return idx;
}

inline void check_node(const GaussGraph &g, int node) {
    if (node < 0 || node >= g.n_modes()) {
        throw DomainError(fmt::format("node {} out of range for {} modes", node, g.n_modes()));
    }
}

}  // namespace detail

/// Homodyne q-measurement with outcome 0: drop the row and column.
inline GaussGraph measure_q(const GaussGraph &g, int node) {
    detail::check_node(g, node);
    auto keep = detail::all_but(g.n_modes(), node);
    return GaussGraph(select(g.v(), keep, keep), select(g.u(), keep, keep));
}

/// Homodyne p-measurement with outcome 0 (Schur complement on Z).
inline GaussGraph measure_p(const GaussGraph &g, int node, double pivot_tol = 1e-14) {
    detail::check_node(g, node);
    CMat z = g.z();
    std::complex<double> pivot = z(node, node);
    if (std::abs(pivot) < pivot_tol) {
        throw SingularPivotError(fmt::format("|Z_kk| = {:.3g} at node {}", std::abs(pivot), node));
    }
    auto keep = detail::all_but(g.n_modes(), node);
    const int m = static_cast<int>(keep.size());
    CMat out(m, m);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            out(i, j) = z(keep[i], keep[j]) - z(keep[i], node) * z(node, keep[j]) / pivot;
        }
    }
    return GaussGraph::from_z(0.5 * (out + out.transpose()));
}

/// Measures p on every node of `p_nodes` and q on every node of `q_nodes` in
/// one pass. Sequential Schur complements compose to the block complement
/// Z_KK - Z_KP Z_PP^{-1} Z_PK, so this equals any sequential order.
/// Returns the graph on the remaining modes in increasing index order.
inline GaussGraph measure_many(const GaussGraph &g, const std::vector<int> &p_nodes,
                               const std::vector<int> &q_nodes) {
    const int n = g.n_modes();
    std::vector<char> role(n, 0);
    for (int k : p_nodes) {
        detail::check_node(g, k);
        role[k] = 1;
    }
    for (int k : q_nodes) {
        detail::check_node(g, k);
        if (role[k] != 0) {
            throw DomainError(fmt::format("node {} appears in both measurement sets", k));
        }
        role[k] = 2;
    }
    std::vector<int> keep, p;
    for (int i = 0; i < n; ++i) {
        if (role[i] == 0) {
            keep.push_back(i);
        } else if (role[i] == 1) {
            p.push_back(i);
        }
    }
    CMat z = g.z();
    const int nk = static_cast<int>(keep.size());
    const int np = static_cast<int>(p.size());
    CMat zkk(nk, nk), zkp(nk, np), zpp(np, np);
    for (int j = 0; j < nk; ++j) {
        for (int i = 0; i < nk; ++i) {
            zkk(i, j) = z(keep[i], keep[j]);
        }
    }
    for (int j = 0; j < np; ++j) {
        for (int i = 0; i < nk; ++i) {
            zkp(i, j) = z(keep[i], p[j]);
        }
        for (int i = 0; i < np; ++i) {
            zpp(i, j) = z(p[i], p[j]);
        }
    }
    if (np > 0) {
        Eigen::PartialPivLU<CMat> lu(zpp);
        if (lu.rcond() < 1e-14) {
            throw SingularPivotError("p-measured block of Z is singular");
        }
        zkk -= zkp * lu.solve(CMat(zkp.transpose()));
    }
    return GaussGraph::from_z(0.5 * (zkk + zkk.transpose()));
}

/// Z' = (C + D Z)(A + B Z)^{-1} for the symplectic map r' = [[A, B], [C, D]] r.
inline GaussGraph apply_symplectic(const GaussGraph &g, const Mat &a, const Mat &b, const Mat &c,
                                   const Mat &d, double tol = 1e-10) {
    const int n = g.n_modes();
    for (const Mat *blk : {&a, &b, &c, &d}) {
        if (blk->rows() != n || blk->cols() != n) {
            throw DomainError("symplectic blocks must be N x N");
        }
    }
    Mat y(2 * n, 2 * n);
    y << a, b, c, d;
    Mat omega = symplectic_form(n);
    double defect = n == 0 ? 0.0 : (y * omega * y.transpose() - omega).cwiseAbs().maxCoeff();
    if (defect > tol) {
        throw DomainError(fmt::format("blocks are not symplectic (defect {:.3g})", defect));
    }
    CMat z = g.z();
    CMat den = a.cast<std::complex<double>>() + b.cast<std::complex<double>>() * z;
    CMat num = c.cast<std::complex<double>>() + d.cast<std::complex<double>>() * z;
    Eigen::PartialPivLU<CMat> lu(den.transpose());
    if (n > 0 && lu.rcond() < 1e-13) {
        throw SingularTransformError("A + B Z is singular");
    }
    // Z' = num den^{-1}, solved as den^T Z'^T = num^T.
    CMat out = lu.solve(CMat(num.transpose())).transpose();
    return GaussGraph::from_z(0.5 * (out + out.transpose()));
}

struct SymplecticBlocks {
    Mat a, b, c, d;
};

/// Phase rotation by `angle` on a single mode: q' = cos q + sin p, p' = -sin q + cos p.
inline SymplecticBlocks phase_shift(int n_modes, int node, double angle = M_PI / 2) {
    SymplecticBlocks y{Mat::Identity(n_modes, n_modes), Mat::Zero(n_modes, n_modes),
                       Mat::Zero(n_modes, n_modes), Mat::Identity(n_modes, n_modes)};
    double co = std::cos(angle), si = std::sin(angle);
    if (std::abs(co) < 1e-15) {
        co = 0.0;
    }
    y.a(node, node) = co;
    y.b(node, node) = si;
    y.c(node, node) = -si;
    y.d(node, node) = co;
    return y;
}

}  // namespace gausstopo

#endif
