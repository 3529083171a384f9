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

#ifndef GAUSSTOPO_LATTICE_HPP
#define GAUSSTOPO_LATTICE_HPP

#include <array>
#include <cmath>
#include <cstdlib>

#include "gausstopo/gaussian.hpp"

namespace gausstopo {

enum class Boundary { torus, planar };

/// Which lattice `rows` x `cols` counts.
///
/// `cluster`: sites of the square-lattice cluster state. The measurement
/// pattern is applied to 1-based (row, col) labels and the surface code lives
/// on the mixed-parity sites.
///
/// `surface`: modes of the surface code itself, laid out on an n x m grid
/// (the cluster lattice rotated by 45 degrees). The cluster state behind it
/// has one extra site per grid plaquette.
enum class Frame { cluster, surface };

struct LatticeSpec {
    int rows = 0;
    int cols = 0;
    Boundary boundary = Boundary::torus;
    double log_s = 0.0;
    Frame frame = Frame::cluster;

    double s() const { return std::exp(log_s); }

    void validate() const {
        if (rows < 1 || cols < 1) {
            throw DomainError(fmt::format("lattice dimensions {}x{} must be positive", rows, cols));
        }
        if (!std::isfinite(log_s)) {
            throw DomainError("log_s must be finite");
        }
    }

    bool rows_even() const { return rows % 2 == 0; }
    bool cols_even() const { return cols % 2 == 0; }
};

/// Placement of surface-code modes used for regions and graph distances.
///
/// `coords` are the plotting/region coordinates: grid (x, y) for the surface
/// frame, (row, col) for the cluster frame. `distance` implements the
/// Chebyshev distance on the rotated grid; in cluster coordinates that is
/// (|dr| + |dc|) / 2.
struct ModeGeometry {
    enum class Metric { chebyshev, half_manhattan };
    std::vector<std::array<int, 2>> coords;
    Metric metric = Metric::chebyshev;
    int period0 = 0;  // 0 means open along this axis
    int period1 = 0;

    int n_modes() const { return static_cast<int>(coords.size()); }

    static int wrap(int delta, int period) {
        delta = std::abs(delta);
        if (period > 0) {
            delta %= period;
            delta = std::min(delta, period - delta);
        }
        return delta;
    }

    int distance(int i, int j) const {
        int d0 = wrap(coords[i][0] - coords[j][0], period0);
        int d1 = wrap(coords[i][1] - coords[j][1], period1);
        return metric == Metric::chebyshev ? std::max(d0, d1) : (d0 + d1) / 2;
    }

    /// Euclidean distance in coordinate units, minimal image on periodic axes.
    double euclid(int i, int j) const {
        double d0 = wrap(coords[i][0] - coords[j][0], period0);
        double d1 = wrap(coords[i][1] - coords[j][1], period1);
        return std::hypot(d0, d1);
    }
};

/// A cluster-state graph together with its measurement roles.
struct ClusterLayout {
    Mat adjacency;
    std::vector<int> p_nodes, q_nodes, kept;
    /// face (q-node) -> list of (cluster site, orientation sign)
    std::vector<std::vector<std::pair<int, int>>> face_signs;
    /// Coordinates of kept modes, in kept order.
    ModeGeometry kept_geometry;
    /// Coordinates of p-nodes and q-nodes on the vertex / face lattices, in
    /// units of the lattice spacing of those lattices (unit edge length).
    std::vector<std::array<double, 2>> vertex_xy, face_xy;
    std::array<double, 2> vertex_period{0.0, 0.0};
    int n_sites() const { return static_cast<int>(adjacency.rows()); }
};

inline int site_id(int row1, int col1, int cols) { return (row1 - 1) * cols + (col1 - 1); }

/// Square-lattice adjacency on rows x cols sites, node id (r-1)*cols + (c-1).
/// Torus wrap on dimensions below 3 would create multi-edges or loops; entries
/// saturate at 1 and loops are dropped.
inline Mat cluster_adjacency(const LatticeSpec &spec) {
    spec.validate();
    const int n = spec.rows * spec.cols;
    Mat a = Mat::Zero(n, n);
    const bool torus = spec.boundary == Boundary::torus;
    auto link = [&](int r1, int c1, int r2, int c2) {
        if (torus) {
            r2 = (r2 - 1 + spec.rows) % spec.rows + 1;
            c2 = (c2 - 1 + spec.cols) % spec.cols + 1;
        } else if (r2 < 1 || r2 > spec.rows || c2 < 1 || c2 > spec.cols) {
            return;
        }
        int i = site_id(r1, c1, spec.cols), j = site_id(r2, c2, spec.cols);
        if (i != j) {
            a(i, j) = a(j, i) = 1.0;
        }
    };
    for (int r = 1; r <= spec.rows; ++r) {
        for (int c = 1; c <= spec.cols; ++c) {
            link(r, c, r + 1, c);
            link(r, c, r, c + 1);
        }
    }
    return a;
}

/// Z = A + i s^{-2} I.
inline GaussGraph cluster_graph_from_adjacency(const Mat &adjacency, double s) {
    return GaussGraph(adjacency, Mat::Identity(adjacency.rows(), adjacency.cols()) / (s * s));
}

inline GaussGraph cluster_graph(const LatticeSpec &spec) {
    return cluster_graph_from_adjacency(cluster_adjacency(spec), spec.s());
}

/// (row, col) coordinates of every cluster site, 0-based, in node-id order.
inline ModeGeometry cluster_geometry(const LatticeSpec &spec) {
    spec.validate();
    ModeGeometry geo;
    geo.metric = ModeGeometry::Metric::chebyshev;
    if (spec.boundary == Boundary::torus) {
        geo.period0 = spec.rows;
        geo.period1 = spec.cols;
    }
    for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < spec.cols; ++c) {
            geo.coords.push_back({r, c});
        }
    }
    return geo;
}

struct MeasurementPattern {
    std::vector<int> q_nodes, p_nodes, kept_nodes;
};

/// p on (odd, odd) labels, q on (even, even), keep the rest (1-based labels).
inline MeasurementPattern measurement_pattern(const LatticeSpec &spec) {
    spec.validate();
    MeasurementPattern pat;
    for (int r = 1; r <= spec.rows; ++r) {
        for (int c = 1; c <= spec.cols; ++c) {
            int id = site_id(r, c, spec.cols);
            if (r % 2 == 1 && c % 2 == 1) {
                pat.p_nodes.push_back(id);
            } else if (r % 2 == 0 && c % 2 == 0) {
                pat.q_nodes.push_back(id);
            } else {
                pat.kept_nodes.push_back(id);
            }
        }
    }
    return pat;
}

namespace detail {

inline void require_surface_torus_dims(const LatticeSpec &spec) {
    if (spec.boundary != Boundary::torus) {
        return;
    }
    if (spec.frame == Frame::cluster) {
        if (!spec.rows_even() || !spec.cols_even() || spec.rows < 6 || spec.cols < 6) {
            throw DomainError(fmt::format(
                "cluster torus {}x{} is incompatible with the measurement pattern: both dimensions "
                "must be even and at least 6",
                spec.rows, spec.cols));
        }
    } else if (!spec.rows_even() || !spec.cols_even() || spec.rows < 4 || spec.cols < 4) {
        throw DomainError(fmt::format(
            "surface torus {}x{} needs even dimensions of at least 4 for a consistent "
            "vertex/face colouring",
            spec.rows, spec.cols));
    }
}

inline ClusterLayout rectangular_layout(const LatticeSpec &spec) {
    ClusterLayout lay;
    lay.adjacency = cluster_adjacency(spec);
    auto pat = measurement_pattern(spec);
    lay.p_nodes = pat.p_nodes;
    lay.q_nodes = pat.q_nodes;
    lay.kept = pat.kept_nodes;
    const bool torus = spec.boundary == Boundary::torus;
    lay.kept_geometry.metric = ModeGeometry::Metric::half_manhattan;
    lay.kept_geometry.period0 = torus ? spec.rows : 0;
    lay.kept_geometry.period1 = torus ? spec.cols : 0;
    for (int id : lay.kept) {
        lay.kept_geometry.coords.push_back({id / spec.cols, id % spec.cols});
    }
    for (int id : lay.p_nodes) {
        lay.vertex_xy.push_back({(id / spec.cols) / 2.0, (id % spec.cols) / 2.0});
    }
    for (int id : lay.q_nodes) {
        lay.face_xy.push_back({(id / spec.cols - 1) / 2.0, (id % spec.cols - 1) / 2.0});
    }
    if (torus) {
        lay.vertex_period = {spec.rows / 2.0, spec.cols / 2.0};
    }
    // Edges entering a face from above or below carry +1, from the sides -1.
    for (int f : lay.q_nodes) {
        std::vector<std::pair<int, int>> signs;
        for (int j = 0; j < lay.n_sites(); ++j) {
            if (lay.adjacency(f, j) != 0.0) {
                bool same_col = (j % spec.cols) == (f % spec.cols);
                signs.emplace_back(j, same_col ? 1 : -1);
            }
        }
        lay.face_signs.push_back(std::move(signs));
    }
    return lay;
}

// Grid modes (x, y), id m*x + y, followed by plaquette centres. Plaquette
// (x, y) has corners (x, y), (x+1, y), (x, y+1), (x+1, y+1); it is a p-node
// when x + y is even.
inline ClusterLayout rotated_layout(const LatticeSpec &spec) {
    const int n = spec.rows, m = spec.cols;
    const bool torus = spec.boundary == Boundary::torus;
    if (!torus && (n < 2 || m < 2)) {
        throw DomainError("planar surface lattice needs at least 2x2 modes");
    }
    const int pn = torus ? n : n - 1;
    const int pm = torus ? m : m - 1;
    const int n_modes = n * m;
    const int n_sites = n_modes + pn * pm;
    ClusterLayout lay;
    lay.adjacency = Mat::Zero(n_sites, n_sites);
    lay.kept_geometry.metric = ModeGeometry::Metric::chebyshev;
    lay.kept_geometry.period0 = torus ? n : 0;
    lay.kept_geometry.period1 = torus ? m : 0;
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < m; ++y) {
            lay.kept.push_back(m * x + y);
            lay.kept_geometry.coords.push_back({x, y});
        }
    }
    // Vertex lattice axes run along the grid diagonals, spacing sqrt(2).
    const double unit = std::sqrt(2.0);
    for (int x = 0; x < pn; ++x) {
        for (int y = 0; y < pm; ++y) {
            int id = n_modes + pm * x + y;
            std::vector<std::pair<int, int>> signs;
            for (int dx = 0; dx < 2; ++dx) {
                for (int dy = 0; dy < 2; ++dy) {
                    int corner = m * ((x + dx) % n) + (y + dy) % m;
                    lay.adjacency(id, corner) = lay.adjacency(corner, id) = 1.0;
                    signs.emplace_back(corner, (dx + dy) % 2 == 0 ? 1 : -1);
                }
            }
            std::array<double, 2> centre{(x + 0.5) / unit, (y + 0.5) / unit};
            if ((x + y) % 2 == 0) {
                lay.p_nodes.push_back(id);
                lay.vertex_xy.push_back(centre);
            } else {
                lay.q_nodes.push_back(id);
                lay.face_xy.push_back(centre);
                std::sort(signs.begin(), signs.end());
                lay.face_signs.push_back(std::move(signs));
            }
        }
    }
    if (torus) {
        lay.vertex_period = {n / unit, m / unit};
    }
    return lay;
}

}  // namespace detail

inline ClusterLayout cluster_layout(const LatticeSpec &spec) {
    spec.validate();
    detail::require_surface_torus_dims(spec);
    return spec.frame == Frame::cluster ? detail::rectangular_layout(spec)
                                        : detail::rotated_layout(spec);
}

/// The surface-code graph Lambda: vertices (p-nodes), edges (kept modes) and
/// faces (q-nodes), with the mode-level adjacency A_SC.
struct SurfaceGraph {
    int n_modes = 0;
    /// Kept modes incident to each vertex.
    std::vector<std::vector<int>> vertex_edges;
    /// Endpoints of each edge-mode, ordered by vertex index. Boundary edges on
    /// planar lattices may have a single endpoint (second entry -1).
    std::vector<std::array<int, 2>> edge_endpoints;
    /// Boundary of each face as (edge-mode, o(e, f)) pairs ordered by mode.
    std::vector<std::vector<std::pair<int, int>>> face_boundaries;
    Mat adjacency_sc;
    ModeGeometry geometry;
    std::vector<std::array<double, 2>> vertex_xy, face_xy;
    std::array<double, 2> vertex_period{0.0, 0.0};
    bool torus = true;

    int n_vertices() const { return static_cast<int>(vertex_edges.size()); }
    int n_faces() const { return static_cast<int>(face_boundaries.size()); }

    static double lattice_distance(const std::array<double, 2> &a, const std::array<double, 2> &b,
                                   const std::array<double, 2> &period) {
        double d[2];
        for (int k = 0; k < 2; ++k) {
            d[k] = std::abs(a[k] - b[k]);
            if (period[k] > 0) {
                d[k] = std::fmod(d[k], period[k]);
                d[k] = std::min(d[k], period[k] - d[k]);
            }
        }
        return std::hypot(d[0], d[1]);
    }

    double vertex_distance(int v, int w) const {
        return lattice_distance(vertex_xy[v], vertex_xy[w], vertex_period);
    }
    double face_distance(int f, int g) const {
        return lattice_distance(face_xy[f], face_xy[g], vertex_period);
    }
};

inline SurfaceGraph surface_graph(const ClusterLayout &lay) {
    const int n_sites = lay.n_sites();
    std::vector<int> mode_of(n_sites, -1), vertex_of(n_sites, -1);
    for (size_t k = 0; k < lay.kept.size(); ++k) {
        mode_of[lay.kept[k]] = static_cast<int>(k);
    }
    for (size_t v = 0; v < lay.p_nodes.size(); ++v) {
        vertex_of[lay.p_nodes[v]] = static_cast<int>(v);
    }
    SurfaceGraph sg;
    sg.n_modes = static_cast<int>(lay.kept.size());
    sg.geometry = lay.kept_geometry;
    sg.vertex_xy = lay.vertex_xy;
    sg.face_xy = lay.face_xy;
    sg.vertex_period = lay.vertex_period;
    sg.torus = lay.vertex_period[0] > 0;
    sg.edge_endpoints.assign(sg.n_modes, {-1, -1});
    for (int p : lay.p_nodes) {
        std::vector<int> edges;
        for (int j = 0; j < n_sites; ++j) {
            if (lay.adjacency(p, j) != 0.0 && mode_of[j] >= 0) {
                edges.push_back(mode_of[j]);
            }
        }
        std::sort(edges.begin(), edges.end());
        for (int e : edges) {
            auto &ends = sg.edge_endpoints[e];
            (ends[0] < 0 ? ends[0] : ends[1]) = vertex_of[p];
        }
        sg.vertex_edges.push_back(std::move(edges));
    }
    for (const auto &signs : lay.face_signs) {
        std::vector<std::pair<int, int>> bnd;
        for (auto [site, o] : signs) {
            if (mode_of[site] >= 0) {
                bnd.emplace_back(mode_of[site], o);
            }
        }
        std::sort(bnd.begin(), bnd.end());
        sg.face_boundaries.push_back(std::move(bnd));
    }
    sg.adjacency_sc = Mat::Zero(sg.n_modes, sg.n_modes);
    for (const auto &edges : sg.vertex_edges) {
        for (int a : edges) {
            for (int b : edges) {
                if (a != b) {
                    sg.adjacency_sc(a, b) = 1.0;
                }
            }
        }
    }
    return sg;
}

inline SurfaceGraph surface_graph(const LatticeSpec &spec) { return surface_graph(cluster_layout(spec)); }

/// U = s^{-2} I + s^2 sum_v 1_v 1_v^T, the exact result of the measurement
/// pattern on any layout (each p-measured vertex adds its clique).
inline Mat surface_u_exact(const SurfaceGraph &sg, double s) {
    Mat u = Mat::Identity(sg.n_modes, sg.n_modes) / (s * s);
    for (const auto &edges : sg.vertex_edges) {
        for (int a : edges) {
            for (int b : edges) {
                u(a, b) += s * s;
            }
        }
    }
    return u;
}

struct AnalyticSurfaceCode {
    GaussGraph graph;
    /// True on planar lattices, where the bulk formula misses boundary terms.
    bool approximate_at_boundary = false;
};

/// V = 0, U = s^2 A_SC + (s^{-2} + 2 s^2) I.
inline AnalyticSurfaceCode surface_code_graph_analytic(const LatticeSpec &spec) {
    SurfaceGraph sg = surface_graph(spec);
    const double s = spec.s();
    Mat u = s * s * sg.adjacency_sc +
            (1.0 / (s * s) + 2.0 * s * s) * Mat::Identity(sg.n_modes, sg.n_modes);
    return {GaussGraph(Mat::Zero(sg.n_modes, sg.n_modes), u), spec.boundary == Boundary::planar};
}

struct MappedSurfaceCode {
    GaussGraph graph;
    /// Cluster site id of every surviving mode, in mode order.
    std::vector<int> kept_sites;
    SurfaceGraph surface;
};

inline GaussGraph run_pattern(const GaussGraph &cluster, const ClusterLayout &lay) {
    return measure_many(cluster, lay.p_nodes, lay.q_nodes);
}

/// Builds the cluster state, applies the measurement pattern, and returns the
/// surface-code graph on the kept modes.
inline MappedSurfaceCode map_cluster_to_surface(const LatticeSpec &spec) {
    ClusterLayout lay = cluster_layout(spec);
    GaussGraph cluster = cluster_graph_from_adjacency(lay.adjacency, spec.s());
    MappedSurfaceCode out{run_pattern(cluster, lay), lay.kept, surface_graph(lay)};
    return out;
}

struct RescaledGraph {
    GaussGraph graph;
    double effective_s;
};

/// s~ = sqrt(g / eps), the squeezing of the canonical state equivalent to a
/// weight-g graph with imaginary part eps I.
inline double effective_squeezing(double weight, double eps) {
    if (!(weight > 0.0) || !(eps > 0.0)) {
        throw DomainError("weight and eps must be positive");
    }
    return std::sqrt(weight / eps);
}

/// Z = g V0 + i eps I  ->  V0 + i (eps / g) I via a q-squeeze by sqrt(g) on
/// every mode; the result is a canonical cluster state with s = sqrt(g/eps).
inline RescaledGraph rescale_gauge(const GaussGraph &g, double weight, double eps) {
    if (!(weight > 0.0 && weight < 0.25)) {
        throw DomainError(fmt::format("coupling weight {} outside (0, 1/4)", weight));
    }
    if (!(eps > 0.0)) {
        throw DomainError("eps must be positive");
    }
    const int n = g.n_modes();
    if (n > 0 && (g.u() - eps * Mat::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-12 * eps) {
        throw DomainError("graph imaginary part is not eps * I");
    }
    double a = std::sqrt(weight);
    Mat id = Mat::Identity(n, n);
    GaussGraph out = apply_symplectic(g, a * id, Mat::Zero(n, n), Mat::Zero(n, n), id / a);
    return {out, effective_squeezing(weight, eps)};
}

}  // namespace gausstopo

#endif
