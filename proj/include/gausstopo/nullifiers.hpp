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

#ifndef GAUSSTOPO_NULLIFIERS_HPP
#define GAUSSTOPO_NULLIFIERS_HPP

#include "gausstopo/lattice.hpp"

namespace gausstopo {

/// Nullifiers as complex coefficient vectors c over (q_1..q_N, p_1..p_N):
/// eta = sum_k c_k r_k.
struct NullifierSet {
    std::vector<CVec> vertex_nullifiers;
    std::vector<CVec> face_nullifiers;
    double norm_sprime = 0.0;
    std::vector<double> norm_sv;
};

/// [c1 . r, (c2 . r)^dagger] = i c1^T Omega conj(c2).
inline std::complex<double> commutator_dagger(const CVec &c1, const CVec &c2) {
    const Eigen::Index n = c1.size() / 2;
    std::complex<double> acc = c1.head(n).dot(c2.tail(n)) - c1.tail(n).dot(c2.head(n));
    // Eigen's dot conjugates its left operand; undo that on c1.
    acc = std::conj(acc);
    return std::complex<double>(0.0, 1.0) * acc;
}

/// [c1 . r, c2 . r] = i c1^T Omega c2.
inline std::complex<double> commutator_plain(const CVec &c1, const CVec &c2) {
    return commutator_dagger(c1, c2.conjugate());
}

/// Vertex nullifiers N (U 1_v . q + i 1_v . p) with N^{-2} = 2 1_v^T U 1_v, and
/// face nullifiers s / sqrt(2|df|) sum_e o(e, f) (p_e - i s^{-2} q_e).
///
/// On the torus the vertex form equals (s'/sqrt 8)[sum (q + i p / s'^2) +
/// (s^2 / s'^2) sum_nnb q] with s'^2 = 5 s^2 + s^{-2}.
inline NullifierSet nullifier_vectors(const SurfaceGraph &sg, double s) {
    const int n = sg.n_modes;
    const std::complex<double> i1(0.0, 1.0);
    Mat u = surface_u_exact(sg, s);
    NullifierSet ns;
    ns.norm_sprime = std::sqrt(5.0 * s * s + 1.0 / (s * s));
    for (const auto &edges : sg.vertex_edges) {
        Vec ind = Vec::Zero(n);
        for (int e : edges) {
            ind[e] = 1.0;
        }
        Vec uq = u * ind;
        double norm = 1.0 / std::sqrt(2.0 * ind.dot(uq));
        CVec c(2 * n);
        c.head(n) = (norm * uq).cast<std::complex<double>>();
        c.tail(n) = (norm * ind).cast<std::complex<double>>() * i1;
        ns.vertex_nullifiers.push_back(std::move(c));
        ns.norm_sv.push_back(std::sqrt(edges.size() * s * s + 1.0 / (s * s)));
    }
    for (const auto &bnd : sg.face_boundaries) {
        double norm = s / std::sqrt(2.0 * bnd.size());
        CVec c = CVec::Zero(2 * n);
        for (auto [e, o] : bnd) {
            c[e] = -i1 * (norm * o / (s * s));
            c[n + e] = norm * o;
        }
        ns.face_nullifiers.push_back(std::move(c));
    }
    return ns;
}

struct CommutatorTable {
    CMat vertex_vertex_dagger;  // [a_v, a_v'^dagger]
    CMat face_face_dagger;      // [b_f, b_f'^dagger]
    CMat vertex_vertex;         // [a_v, a_v']
    CMat face_face;             // [b_f, b_f']
    CMat vertex_face;           // [a_v, b_f]
    CMat vertex_face_dagger;    // [a_v, b_f^dagger]
};

inline CommutatorTable nullifier_commutators(const NullifierSet &ns) {
    const auto &a = ns.vertex_nullifiers;
    const auto &b = ns.face_nullifiers;
    const Eigen::Index nv = a.size(), nf = b.size();
    CommutatorTable t{CMat(nv, nv), CMat(nf, nf), CMat(nv, nv),
                      CMat(nf, nf), CMat(nv, nf), CMat(nv, nf)};
    for (Eigen::Index i = 0; i < nv; ++i) {
        for (Eigen::Index j = 0; j < nv; ++j) {
            t.vertex_vertex_dagger(i, j) = commutator_dagger(a[i], a[j]);
            t.vertex_vertex(i, j) = commutator_plain(a[i], a[j]);
        }
        for (Eigen::Index j = 0; j < nf; ++j) {
            t.vertex_face(i, j) = commutator_plain(a[i], b[j]);
            t.vertex_face_dagger(i, j) = commutator_dagger(a[i], b[j]);
        }
    }
    for (Eigen::Index i = 0; i < nf; ++i) {
        for (Eigen::Index j = 0; j < nf; ++j) {
            t.face_face_dagger(i, j) = commutator_dagger(b[i], b[j]);
            t.face_face(i, j) = commutator_plain(b[i], b[j]);
        }
    }
    return t;
}

/// <eta^dagger eta> on a Gaussian state with zero mean: c^dagger Gamma c
/// minus the commutator offset. Evaluates to 0 when eta annihilates the state.
inline double nullifier_occupation(const CovMatrix &c, const CVec &eta) {
    // <eta^dag eta> = sum conj(c_j) c_k <r_j r_k>, with <r_j r_k> = Gamma_jk + (i/2) Omega_jk.
    const int n = c.n_modes();
    CMat second = c.gamma().cast<std::complex<double>>() +
                  std::complex<double>(0.0, 0.5) * symplectic_form(n).cast<std::complex<double>>();
    return (eta.adjoint() * second * eta)(0, 0).real();
}

}  // namespace gausstopo

#endif
