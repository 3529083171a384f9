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

#ifndef GAUSSTOPO_SPECTRA_HPP
#define GAUSSTOPO_SPECTRA_HPP

#include <cmath>

#include "gausstopo/core.hpp"

namespace gausstopo {

/// Vertex-nullifier overlaps w(d) on the torus, keyed by d^2 (0, 1, 2, 4).
struct OverlapWeights {
    double w0, w1, w_sqrt2, w2;
    double x0, x1;
};

inline OverlapWeights overlap_weights(double s) {
    double s4 = std::pow(s, 4);
    double den = 1.0 + 5.0 * s4;
    return {1.0, (1.0 + 8.0 * s4) / (4.0 * den), s4 / (2.0 * den), s4 / (4.0 * den), 1.0, 0.25};
}

/// w evaluated at a Euclidean distance on the vertex lattice.
inline double overlap_w(double d, double s) {
    auto w = overlap_weights(s);
    double d2 = d * d;
    if (std::abs(d2) < 1e-9) return w.w0;
    if (std::abs(d2 - 1.0) < 1e-9) return w.w1;
    if (std::abs(d2 - 2.0) < 1e-9) return w.w_sqrt2;
    if (std::abs(d2 - 4.0) < 1e-9) return w.w2;
    return 0.0;
}

inline double overlap_x(double d) {
    double d2 = d * d;
    if (std::abs(d2) < 1e-9) return 1.0;
    if (std::abs(d2 - 1.0) < 1e-9) return 0.25;
    return 0.0;
}

struct SpectrumResult {
    int n = 0, m = 0;
    double s = 1.0;
    /// Grids indexed (j_x, j_y), row-major.
    Mat omegas, deltas;
    double gap = 0.0;
    double gap_asymptotic = 0.0;
    bool zero_mode = false;
    /// Smallest energies of each branch separately.
    double vertex_gap = 0.0, face_gap = 0.0;
};

inline double gap_asymptotic(int n, double s) {
    if (n < 1) {
        throw DomainError("n must be positive");
    }
    return 4.0 * M_PI * M_PI / (s * s * double(n) * n);
}

inline double vertex_energy(double omega, double s) {
    return 8.0 * s * s * omega / (1.0 + 5.0 * std::pow(s, 4));
}

inline double face_energy(double delta, double s) { return 8.0 * delta / (s * s); }

inline SpectrumResult normal_modes(int n, int m, double s) {
    if (n < 3 || m < 3) {
        throw DomainError("normal modes need n, m >= 3");
    }
    auto w = overlap_weights(s);
    SpectrumResult r;
    r.n = n;
    r.m = m;
    r.s = s;
    r.omegas.resize(n, m);
    r.deltas.resize(n, m);
    for (int jx = 0; jx < n; ++jx) {
        for (int jy = 0; jy < m; ++jy) {
            double kx = 2.0 * M_PI * jx / n, ky = 2.0 * M_PI * jy / m;
            double om = 1.0 + 2.0 * w.w1 * (std::cos(kx) + std::cos(ky)) +
                        2.0 * w.w_sqrt2 * (std::cos(kx + ky) + std::cos(kx - ky)) +
                        2.0 * w.w2 * (std::cos(2.0 * kx) + std::cos(2.0 * ky));
            double de = 1.0 + 2.0 * w.x1 * (std::cos(kx) + std::cos(ky));
            r.omegas(jx, jy) = std::max(om, 0.0);
            r.deltas(jx, jy) = std::max(de, 0.0);
        }
    }
    r.vertex_gap = vertex_energy(r.omegas.minCoeff(), s);
    r.face_gap = face_energy(r.deltas.minCoeff(), s);
    r.zero_mode = n % 2 == 0 && m % 2 == 0;
    r.gap = r.zero_mode ? 0.0 : std::min(r.vertex_gap, r.face_gap);
    r.gap_asymptotic = gap_asymptotic(std::min(n, m), s);
    return r;
}

inline double gap(int n, int m, double s) { return normal_modes(n, m, s).gap; }

/// Cyclic shift |k> -> |k + 1 mod r>.
inline Mat cyclic_shift(int r, int power = 1) {
    Mat x = Mat::Zero(r, r);
    for (int k = 0; k < r; ++k) {
        x(((k + power) % r + r) % r, k) = 1.0;
    }
    return x;
}

inline Mat kron(const Mat &a, const Mat &b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

struct CommutatorMatrices {
    Mat m_v, m_f;
};

inline CommutatorMatrices commutator_matrices(int n, int m, double s) {
    if (n < 3 || m < 3) {
        throw DomainError("commutator matrices need n, m >= 3");
    }
    auto w = overlap_weights(s);
    Mat in = Mat::Identity(n, n), im = Mat::Identity(m, m);
    Mat xn = cyclic_shift(n), xm = cyclic_shift(m);
    Mat xn2 = cyclic_shift(n, 2), xm2 = cyclic_shift(m, 2);
    Mat nearest = kron(in, xm + xm.transpose()) + kron(xn + xn.transpose(), im);
    Mat diagonal = kron(xn, xm) + kron(xn.transpose(), xm.transpose()) + kron(xn, xm.transpose()) +
                   kron(xn.transpose(), xm);
    Mat second = kron(in, xm2 + xm2.transpose()) + kron(xn2 + xn2.transpose(), im);
    CommutatorMatrices out;
    out.m_v = kron(in, im) + w.w1 * nearest + w.w_sqrt2 * diagonal + w.w2 * second;
    out.m_f = kron(in, im) + w.x1 * nearest;
    return out;
}

/// Gap of the cluster-state parent Hamiltonian, independent of lattice size.
inline double cluster_gap(double s) { return 2.0 / (s * s); }

}  // namespace gausstopo

#endif
