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

#ifndef GAUSSTOPO_SPECTRUM_HPP
#define GAUSSTOPO_SPECTRUM_HPP

#include <cmath>
#include <functional>

#include "gausstopo/gaussian.hpp"

namespace gausstopo {

/// Positive symplectic eigenvalues of a (reduced) covariance matrix, sorted
/// descending.
class SymplecticSpectrum {
   public:
    SymplecticSpectrum() = default;

    explicit SymplecticSpectrum(std::vector<double> values, double tol_half = 1e-9)
        : values_(std::move(values)), tol_half_(tol_half) {
        std::sort(values_.begin(), values_.end(), std::greater<>());
        if (!values_.empty() && values_.back() < 0.5 - tol_half_) {
            throw DiagnosticError(fmt::format(
                "symplectic eigenvalue {:.12g} violates the uncertainty bound", values_.back()));
        }
    }

    const std::vector<double> &values() const { return values_; }
    double tol_half() const { return tol_half_; }
    size_t size() const { return values_.size(); }

    /// Number of values strictly above 1/2 + tol_half.
    int n_greater() const {
        return static_cast<int>(std::count_if(values_.begin(), values_.end(),
                                              [&](double s) { return s > 0.5 + tol_half_; }));
    }

    /// Number of values within tol_half of 1/2.
    int n_equal() const {
        return static_cast<int>(std::count_if(values_.begin(), values_.end(), [&](double s) {
            return std::abs(s - 0.5) <= tol_half_;
        }));
    }

    SymplecticSpectrum scaled(double factor) const {
        std::vector<double> v = values_;
        for (double &x : v) {
            x *= factor;
        }
        return SymplecticSpectrum(std::move(v), tol_half_);
    }

   private:
    std::vector<double> values_;
    double tol_half_ = 1e-9;
};

enum class SpectrumMethod {
    /// Exact pure-state identity when the state carries its source graph,
    /// otherwise the direct reduction.
    automatic,
    /// Delete modes outside the region and diagonalize the reduction.
    direct,
};

struct SpectrumOptions {
    SpectrumMethod method = SpectrumMethod::automatic;
    double tol_half = 1e-9;
};

namespace detail {

inline std::vector<double> real_eigenvalues(const Mat &m) {
    std::vector<double> out;
    if (m.rows() == 0) {
        return out;
    }
    Eigen::EigenSolver<Mat> es(m, false);
    if (es.info() != Eigen::Success) {
        throw NumericalError("eigenvalue iteration did not converge");
    }
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        out.push_back(es.eigenvalues()[i].real());
    }
    return out;
}

inline std::vector<double> pad_half(std::vector<double> sig, size_t length, double half) {
    std::sort(sig.begin(), sig.end(), std::greater<>());
    if (sig.size() > length) {
        sig.resize(length);
    }
    sig.resize(length, half);
    return sig;
}

// sigma^2 - 1/4 = (1/4) eig(-U_{dR} (U^{-1})_{Rd}) for a V = 0 pure state,
// with d the modes outside R that couple to R through U. The other side of
// the cut gives the same nonzero values, so the smaller one is used.
inline std::vector<double> pure_block_spectrum(const PureSource &src, const Region &region) {
    const Mat &u = src.graph.u();
    const int n = static_cast<int>(u.rows());
    std::vector<char> in(n, 0);
    for (int i : region) {
        in[i] = 1;
    }
    std::vector<char> outer_edge(n, 0), inner_edge(n, 0);
    for (int i : region) {
        for (int j = 0; j < n; ++j) {
            if (!in[j] && u(i, j) != 0.0) {
                inner_edge[i] = 1;
                outer_edge[j] = 1;
            }
        }
    }
    std::vector<int> d_out, d_in;
    for (int i = 0; i < n; ++i) {
        if (outer_edge[i]) {
            d_out.push_back(i);
        }
        if (inner_edge[i]) {
            d_in.push_back(i);
        }
    }
    std::vector<double> sig;
    if (d_out.empty()) {
        return sig;
    }
    Mat e;
    if (d_out.size() <= d_in.size()) {
        e = -select(u, d_out, region) * select(src.u_inv, region, d_out);
    } else {
        Region rest = complement(region, n);
        e = -select(u, d_in, rest) * select(src.u_inv, rest, d_in);
    }
    for (double lam : real_eigenvalues(e)) {
        sig.push_back(0.5 * std::sqrt(1.0 + std::max(lam, 0.0)));
    }
    return sig;
}

// General pure state. With C = Gamma_{R Rbar},
//   -(Gamma_R Omega_R)^2 - 1/4 = C Omega_Rbar C^T Omega_R,
// whose nonzero eigenvalues are sigma^2 - 1/4, each twice. Local real parts
// V_RR and V_RbarRbar are removed first; that is a local symplectic map on
// each side and leaves the spectrum unchanged while making C sparse.
inline std::vector<double> pure_general_spectrum(const PureSource &src, const Region &region) {
    const Mat &u = src.graph.u();
    const Mat &v = src.graph.v();
    const Mat &p = src.u_inv;
    const int n = static_cast<int>(u.rows());
    Region rest = complement(region, n);
    const int r = static_cast<int>(region.size());
    const int b = static_cast<int>(rest.size());
    if (b == 0) {
        return {};
    }
    Mat x = select(v, region, rest);
    Mat p_rr = select(p, region, region);
    Mat p_rb = select(p, region, rest);
    Mat p_bb = select(p, rest, rest);
    Mat c(2 * r, 2 * b);
    c.topLeftCorner(r, b) = 0.5 * p_rb;
    c.topRightCorner(r, b) = 0.5 * p_rr * x;
    c.bottomLeftCorner(r, b) = 0.5 * x * p_bb;
    c.bottomRightCorner(r, b) = 0.5 * (select(u, region, rest) + x * p_rb.transpose() * x);

    std::vector<int> rows, cols;
    for (int i = 0; i < 2 * r; ++i) {
        if ((c.row(i).array() != 0.0).any()) {
            rows.push_back(i);
        }
    }
    for (int j = 0; j < 2 * b; ++j) {
        if ((c.col(j).array() != 0.0).any()) {
            cols.push_back(j);
        }
    }
    auto restricted_form = [](const std::vector<int> &idx, int half) {
        Mat om = Mat::Zero(idx.size(), idx.size());
        for (size_t i = 0; i < idx.size(); ++i) {
            for (size_t j = 0; j < idx.size(); ++j) {
                if (idx[i] < half && idx[j] == idx[i] + half) {
                    om(i, j) = 1.0;
                } else if (idx[i] >= half && idx[j] == idx[i] - half) {
                    om(i, j) = -1.0;
                }
            }
        }
        return om;
    };
    Mat t;
    if (rows.size() <= cols.size()) {
        Mat cs(rows.size(), 2 * b);
        for (size_t i = 0; i < rows.size(); ++i) {
            cs.row(i) = c.row(rows[i]);
        }
        t = cs * symplectic_form(b) * cs.transpose() * restricted_form(rows, r);
    } else {
        Mat cs(2 * r, cols.size());
        for (size_t j = 0; j < cols.size(); ++j) {
            cs.col(j) = c.col(cols[j]);
        }
        t = cs.transpose() * symplectic_form(r) * cs * restricted_form(cols, b);
    }
    std::vector<double> ev = real_eigenvalues(t);
    std::sort(ev.begin(), ev.end(), std::greater<>());
    std::vector<double> sig;
    for (size_t i = 0; i + 1 < ev.size(); i += 2) {
        double excess = std::max(0.0, 0.5 * (ev[i] + ev[i + 1]));
        sig.push_back(std::sqrt(0.25 + excess));
    }
    return sig;
}

inline std::vector<double> direct_block_spectrum(const CovMatrix &c, const Region &region) {
    const int n = c.n_modes();
    std::vector<int> pidx(region.size());
    for (size_t i = 0; i < region.size(); ++i) {
        pidx[i] = region[i] + n;
    }
    Mat gx = select(c.gamma(), region, region);
    Mat gp = select(c.gamma(), pidx, pidx);
    Eigen::LLT<Mat> llt(gx);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("q block of the reduced state is not positive definite");
    }
    Mat l = llt.matrixL();
    Mat m = l.transpose() * gp * l;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
    std::vector<double> sig;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        sig.push_back(std::sqrt(std::max(es.eigenvalues()[i], 0.0)));
    }
    return sig;
}

// Gamma_R = L L^T; L^T Omega L is antisymmetric with eigenvalues +-i sigma,
// so the symmetric matrix (L^T Omega L)^T (L^T Omega L) has each sigma^2 twice.
inline std::vector<double> direct_general_spectrum(const CovMatrix &c, const Region &region) {
    const int n = c.n_modes();
    const int r = static_cast<int>(region.size());
    std::vector<int> idx(region);
    for (int i : region) {
        idx.push_back(i + n);
    }
    Mat g = select(c.gamma(), idx, idx);
    Eigen::LLT<Mat> llt(g);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("reduced covariance matrix is not positive definite");
    }
    Mat l = llt.matrixL();
    Mat m = l.transpose() * symplectic_form(r) * l;
    Eigen::SelfAdjointEigenSolver<Mat> es(m.transpose() * m, Eigen::EigenvaluesOnly);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + 2 * r);
    std::sort(ev.begin(), ev.end(), std::greater<>());
    std::vector<double> sig;
    for (int i = 0; i < r; ++i) {
        sig.push_back(std::sqrt(std::max(0.0, 0.5 * (ev[2 * i] + ev[2 * i + 1]))));
    }
    return sig;
}

}  // namespace detail

inline SymplecticSpectrum symplectic_spectrum(const CovMatrix &c, const std::vector<int> &modes,
                                              const SpectrumOptions &opts = {}) {
    Region region = make_region(modes, c.n_modes());
    std::vector<double> sig;
    const auto &src = c.source();
    if (opts.method == SpectrumMethod::automatic && src) {
        sig = src->graph.v_is_zero() ? detail::pure_block_spectrum(*src, region)
                                     : detail::pure_general_spectrum(*src, region);
        sig = detail::pad_half(std::move(sig), region.size(), 0.5);
        for (double &s : sig) {
            s *= c.kappa();
        }
    } else if (c.block_diagonal()) {
        sig = detail::direct_block_spectrum(c, region);
    } else {
        sig = detail::direct_general_spectrum(c, region);
    }
    return SymplecticSpectrum(std::move(sig), opts.tol_half);
}

/// Entropy in bits of a single symplectic eigenvalue.
inline double mode_entropy(double sigma, double tol_half = 1e-9) {
    if (sigma <= 0.5 + tol_half) {
        return 0.0;
    }
    // (s + 1/2) log(s + 1/2) - (s - 1/2) log(s - 1/2) rewritten without the
    // cancellation between two large terms at strong squeezing.
    double lo = sigma - 0.5;
    return std::log2(lo) + (sigma + 0.5) * std::log1p(1.0 / lo) / std::log(2.0);
}

inline double von_neumann_entropy(const SymplecticSpectrum &spec) {
    double s = 0.0;
    for (double sigma : spec.values()) {
        s += mode_entropy(sigma, spec.tol_half());
    }
    return s;
}

inline double purity(const SymplecticSpectrum &spec) {
    double p = 1.0;
    for (double sigma : spec.values()) {
        p /= 2.0 * std::max(sigma, 0.5);
    }
    return p;
}

/// Convenience: entropy of a region in bits.
inline double entropy(const CovMatrix &c, const std::vector<int> &modes,
                      const SpectrumOptions &opts = {}) {
    return von_neumann_entropy(symplectic_spectrum(c, modes, opts));
}

/// -1/2 sum log2 min(1, lambda_i(G_x mu G_p mu)) with G_x = 2 Gamma_qq and
/// G_p = 2 Gamma_pp, so that a vacuum gives exactly zero.
inline double log_negativity(const CovMatrix &c, const std::vector<int> &modes,
                             SpectrumMethod method = SpectrumMethod::automatic) {
    if (!c.block_diagonal()) {
        throw UnsupportedStateError("log-negativity requires a q/p block-diagonal state");
    }
    const int n = c.n_modes();
    Region region = make_region(modes, n);
    std::vector<char> in(n, 0);
    for (int i : region) {
        in[i] = 1;
    }
    std::vector<double> lambdas;
    const auto &src = c.source();
    if (method == SpectrumMethod::automatic && src && c.kappa() == 1.0) {
        // U^{-1} mu U mu = I - 2 U^{-1} X with X the part of U crossing the cut.
        const Mat &u = src->graph.u();
        std::vector<int> support;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (in[i] != in[j] && u(i, j) != 0.0) {
                    support.push_back(i);
                    break;
                }
            }
        }
        if (support.empty()) {
            return 0.0;
        }
        Mat x = select(u, support, support);
        for (size_t i = 0; i < support.size(); ++i) {
            for (size_t j = 0; j < support.size(); ++j) {
                if (in[support[i]] == in[support[j]]) {
                    x(i, j) = 0.0;
                }
            }
        }
        for (double mu : detail::real_eigenvalues(select(src->u_inv, support, support) * x)) {
            lambdas.push_back(1.0 - 2.0 * mu);
        }
    } else {
        Mat gx = 2.0 * c.q_block();
        Mat gp = 2.0 * c.p_block();
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (in[i] != in[j]) {
                    gp(i, j) = -gp(i, j);
                }
            }
        }
        Eigen::LLT<Mat> llt(gx);
        if (llt.info() != Eigen::Success) {
            throw NumericalError("q block is not positive definite");
        }
        Mat l = llt.matrixL();
        Mat m = l.transpose() * gp * l;
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
        for (int i = 0; i < n; ++i) {
            lambdas.push_back(es.eigenvalues()[i]);
        }
    }
    double total = 0.0;
    for (double lam : lambdas) {
        if (lam <= 0.0) {
            throw NumericalError("non-positive eigenvalue in the partial-transpose product");
        }
        total += std::log2(std::min(1.0, lam));
    }
    return -0.5 * total;
}

/// I_X = S_X + S_{X^c} - S_{total}.
inline double mutual_information(const CovMatrix &c, const std::vector<int> &modes,
                                 const SpectrumOptions &opts = {}) {
    Region region = make_region(modes, c.n_modes());
    Region rest = complement(region, c.n_modes());
    std::vector<int> all(c.n_modes());
    for (int i = 0; i < c.n_modes(); ++i) {
        all[i] = i;
    }
    double s_rest = rest.empty() ? 0.0 : entropy(c, rest, opts);
    return entropy(c, region, opts) + s_rest - entropy(c, all, opts);
}

}  // namespace gausstopo

#endif
