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

#ifndef GAUSSTOPO_CORRELATIONS_HPP
#define GAUSSTOPO_CORRELATIONS_HPP

#include <cmath>
#include <map>

#include "gausstopo/lattice.hpp"
#include "gausstopo/spectrum.hpp"

namespace gausstopo {

namespace detail {
inline void require_pair(const CovMatrix &c, int i, int j) {
    if (!c.block_diagonal()) {
        throw UnsupportedStateError("correlations are defined here for block-diagonal states");
    }
    if (i < 0 || j < 0 || i >= c.n_modes() || j >= c.n_modes()) {
        throw DomainError(fmt::format("mode pair ({}, {}) out of range", i, j));
    }
}
}  // namespace detail

/// <q_i q_j> (symmetrized), which is kappa / 2 (U^{-1})_ij for these states.
inline double qq_correlation(const CovMatrix &c, int i, int j) {
    detail::require_pair(c, i, j);
    return c.gamma()(i, j);
}

inline double pp_correlation(const CovMatrix &c, int i, int j) {
    detail::require_pair(c, i, j);
    const int n = c.n_modes();
    return c.gamma()(n + i, n + j);
}

inline double qp_correlation(const CovMatrix &c, int i, int j) {
    if (i < 0 || j < 0 || i >= c.n_modes() || j >= c.n_modes()) {
        throw DomainError("mode index out of range");
    }
    return c.gamma()(i, c.n_modes() + j);
}

/// Chebyshev distance on mode coordinates, wrapped on tori.
inline int graph_distance(const SurfaceGraph &sg, int i, int j) {
    if (i < 0 || j < 0 || i >= sg.n_modes || j >= sg.n_modes) {
        throw DomainError("mode index out of range");
    }
    return sg.geometry.distance(i, j);
}

struct CorrelationBound {
    double c_const = 0.0;
    double xi = 0.0;
    double a_spec = 0.0;
    double b_spec = 0.0;
    double q = 0.0;

    double value(int d, double kappa = 1.0) const { return kappa * c_const * std::exp(-(d + 1) / xi); }
};

inline CorrelationBound dms_bound(double s) {
    if (!(s > 0.0)) {
        throw DomainError("s must be positive");
    }
    double r = std::sqrt(8.0 * std::pow(s, 4) + 1.0);
    CorrelationBound b;
    b.a_spec = 1.0 / (s * s);
    b.b_spec = s * s * (8.0 + std::pow(s, -4));
    b.c_const = (1.0 + r) * (1.0 + r) / (4.0 * (8.0 * s * s + 1.0 / (s * s)));
    b.xi = 2.0 / std::log((r + 1.0) / (r - 1.0));
    double ratio = std::sqrt(b.b_spec / b.a_spec);
    b.q = (ratio - 1.0) / (ratio + 1.0);
    return b;
}

struct BoundReport {
    long pairs_checked = 0;
    long violations = 0;
    /// max over checked pairs of |<q_i q_j>| - bound(d); negative when clean.
    double max_excess = -1e300;
    double max_ratio = 0.0;
};

/// Checks |<q_i q_j>| <= kappa C exp(-(d + 1) / xi) for all pairs with d > 2.
inline BoundReport verify_bound(const CovMatrix &c, const SurfaceGraph &sg,
                                const CorrelationBound &bound) {
    if (sg.n_modes != c.n_modes()) {
        throw DomainError("surface graph and state disagree on the mode count");
    }
    BoundReport rep;
    for (int i = 0; i < c.n_modes(); ++i) {
        for (int j = i + 1; j < c.n_modes(); ++j) {
            int d = sg.geometry.distance(i, j);
            if (d <= 2) {
                continue;
            }
            double value = std::abs(qq_correlation(c, i, j));
            double limit = bound.value(d, c.kappa());
            ++rep.pairs_checked;
            rep.max_excess = std::max(rep.max_excess, value - limit);
            rep.max_ratio = std::max(rep.max_ratio, value / limit);
            if (value > limit) {
                ++rep.violations;
            }
        }
    }
    return rep;
}

struct CorrelationSample {
    int separation;
    double value;
};

/// |<q_o q_k>| for modes k = origin + t * step, t = 0..count-1, with the
/// Chebyshev separation as abscissa.
inline std::vector<CorrelationSample> axis_samples(const CovMatrix &c, const SurfaceGraph &sg,
                                                   int origin, std::array<int, 2> step, int count) {
    const auto &geo = sg.geometry;
    std::map<std::array<int, 2>, int> index;
    for (int i = 0; i < geo.n_modes(); ++i) {
        index[geo.coords[i]] = i;
    }
    std::vector<CorrelationSample> out;
    auto base = geo.coords.at(origin);
    for (int t = 0; t < count; ++t) {
        std::array<int, 2> at{base[0] + t * step[0], base[1] + t * step[1]};
        if (geo.period0 > 0) at[0] = ((at[0] % geo.period0) + geo.period0) % geo.period0;
        if (geo.period1 > 0) at[1] = ((at[1] % geo.period1) + geo.period1) % geo.period1;
        auto it = index.find(at);
        if (it == index.end()) {
            throw GeometryError("correlation axis leaves the lattice");
        }
        out.push_back({geo.distance(origin, it->second), std::abs(qq_correlation(c, origin, it->second))});
    }
    return out;
}

struct FitOptions {
    double xi_a0 = 0.5;
    double xi_b0 = 3.0;
    int max_iterations = 500;
    double residual_threshold = 1e-4;
};

struct FitResult {
    double a = 0.0, xi_a = 0.0, b = 0.0, xi_b = 0.0;
    /// Root-mean-square log residual.
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

namespace detail {

// Amplitudes for fixed lengths from the linearized problem with relative
// weights, which approximates the log-domain objective. Non-positive
// amplitudes are replaced by a small positive fraction of the data scale.
inline void amplitudes_for(const std::vector<CorrelationSample> &data, double xa, double xb,
                           double &a, double &b) {
    Mat design(data.size(), 2);
    Vec rhs(data.size());
    for (size_t k = 0; k < data.size(); ++k) {
        double w = 1.0 / data[k].value;
        design(k, 0) = w * std::exp(-data[k].separation / xa);
        design(k, 1) = w * std::exp(-data[k].separation / xb);
        rhs[k] = 1.0;
    }
    Vec sol = design.colPivHouseholderQr().solve(rhs);
    double scale = 0.0;
    for (const auto &s : data) scale = std::max(scale, s.value);
    a = sol[0] > 0.0 ? sol[0] : 1e-3 * scale;
    b = sol[1] > 0.0 ? sol[1] : 1e-3 * scale;
}

}  // namespace detail

/// Fits a e^{-d/xi_a} + b e^{-d/xi_b} to the samples by Levenberg-Marquardt on
/// log residuals in the parameters (ln a, ln xi_a, ln b, ln xi_b). Starting
/// amplitudes come from a separable linear solve at the initial lengths.
inline FitResult fit_correlation_length(const std::vector<CorrelationSample> &data,
                                        const FitOptions &opts = {}) {
    if (data.size() < 8) {
        throw DomainError("fit needs at least 8 separations");
    }
    for (const auto &s : data) {
        if (!(s.value > 0.0)) {
            throw DomainError("correlation samples must be positive for a log-domain fit");
        }
    }
    double a0, b0;
    detail::amplitudes_for(data, opts.xi_a0, opts.xi_b0, a0, b0);
    Eigen::Vector4d theta(std::log(a0), std::log(opts.xi_a0), std::log(b0), std::log(opts.xi_b0));
    const Eigen::Index n = static_cast<Eigen::Index>(data.size());

    auto residuals = [&](const Eigen::Vector4d &th, Vec &r, Mat *jac) {
        double a = std::exp(th[0]), xa = std::exp(th[1]), b = std::exp(th[2]), xb = std::exp(th[3]);
        r.resize(n);
        if (jac) jac->resize(n, 4);
        for (Eigen::Index k = 0; k < n; ++k) {
            double d = data[k].separation;
            double ea = a * std::exp(-d / xa), eb = b * std::exp(-d / xb);
            double model = ea + eb;
            r[k] = std::log(model) - std::log(data[k].value);
            if (jac) {
                (*jac)(k, 0) = ea / model;
                (*jac)(k, 1) = ea * (d / xa) / model;
                (*jac)(k, 2) = eb / model;
                (*jac)(k, 3) = eb * (d / xb) / model;
            }
        }
    };

    Vec r;
    Mat jac;
    residuals(theta, r, &jac);
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    std::vector<double> trace{cost};
    FitResult out;
    for (int it = 1; it <= opts.max_iterations; ++it) {
        out.iterations = it;
        Mat jtj = jac.transpose() * jac;
        Vec g = jac.transpose() * r;
        if (g.cwiseAbs().maxCoeff() < 1e-14) {
            out.converged = true;
            break;
        }
        bool accepted = false;
        for (int tries = 0; tries < 40 && !accepted; ++tries) {
            Mat lhs = jtj;
            lhs.diagonal() += lambda * (jtj.diagonal().array() + 1e-12).matrix();
            Eigen::Vector4d step = lhs.ldlt().solve(-g);
            Eigen::Vector4d trial = theta + step;
            Vec rt;
            residuals(trial, rt, nullptr);
            double ct = rt.squaredNorm();
            if (std::isfinite(ct) && ct <= cost) {
                double gain = cost - ct;
                theta = trial;
                residuals(theta, r, &jac);
                cost = ct;
                lambda = std::max(lambda / 3.0, 1e-15);
                accepted = true;
                trace.push_back(cost);
                if (gain <= 1e-15 * std::max(cost, 1e-300) || step.norm() < 1e-13) {
                    out.converged = true;
                }
            } else {
                lambda *= 4.0;
            }
        }
        if (!accepted) {
            out.converged = true;  // no descent direction left at machine precision
        }
        if (out.converged) {
            break;
        }
    }
    out.a = std::exp(theta[0]);
    out.xi_a = std::exp(theta[1]);
    out.b = std::exp(theta[2]);
    out.xi_b = std::exp(theta[3]);
    if (out.xi_a > out.xi_b) {
        std::swap(out.a, out.b);
        std::swap(out.xi_a, out.xi_b);
    }
    out.residual = std::sqrt(cost / n);
    if (!out.converged && out.residual > opts.residual_threshold) {
        throw FitFailedError(
            fmt::format("double-exponential fit did not converge in {} iterations (rms {:.3g})",
                        opts.max_iterations, out.residual),
            trace);
    }
    return out;
}

struct AreaLawFit {
    double alpha = 0.0;
    double gamma = 0.0;
    std::vector<std::pair<int, double>> points;  // (perimeter, entropy)
};

/// Entropy of centred k x k squares of modes, k in `sides`, regressed as
/// S = alpha |dA| - gamma with |dA| = 4k.
inline AreaLawFit area_law_fit(const CovMatrix &c, const ModeGeometry &geo,
                               std::array<double, 2> center, const std::vector<int> &sides) {
    if (sides.size() < 2) {
        throw DomainError("area-law fit needs at least two region sizes");
    }
    AreaLawFit out;
    Mat design(sides.size(), 2);
    Vec rhs(sides.size());
    for (size_t t = 0; t < sides.size(); ++t) {
        int k = sides[t];
        long x0 = std::lround(center[0] - k / 2.0), y0 = std::lround(center[1] - k / 2.0);
        std::vector<int> region;
        for (int i = 0; i < geo.n_modes(); ++i) {
            long x = geo.coords[i][0], y = geo.coords[i][1];
            if (x >= x0 && x < x0 + k && y >= y0 && y < y0 + k) {
                region.push_back(i);
            }
        }
        if (static_cast<int>(region.size()) != k * k) {
            throw GeometryError(fmt::format("square of side {} does not fit around the centre", k));
        }
        double s = entropy(c, region);
        out.points.emplace_back(4 * k, s);
        design(t, 0) = 4.0 * k;
        design(t, 1) = -1.0;
        rhs[t] = s;
    }
    Vec sol = design.colPivHouseholderQr().solve(rhs);
    out.alpha = sol[0];
    out.gamma = sol[1];
    return out;
}

}  // namespace gausstopo

#endif
