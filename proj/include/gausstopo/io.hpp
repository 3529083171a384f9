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

#ifndef GAUSSTOPO_IO_HPP
#define GAUSSTOPO_IO_HPP

#include <fstream>

#include "gausstopo/correlations.hpp"
#include "gausstopo/topo.hpp"
#include "json.hpp"

namespace gausstopo {

using json = nlohmann::json;

inline constexpr int kStateFormatVersion = 1;

inline json matrix_to_json(const Mat &m) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            arr.push_back(m(i, j));
        }
    }
    return arr;
}

inline Mat matrix_from_json(const json &arr, int n) {
    if (!arr.is_array() || arr.size() != static_cast<size_t>(n) * n) {
        throw ValidationError(fmt::format("expected {} matrix entries", n * n));
    }
    Mat m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m(i, j) = arr[static_cast<size_t>(i) * n + j].get<double>();
        }
    }
    return m;
}

/// {version, n_modes, ordering: "qqpp", kappa, v (row-major or null), u}.
inline json state_to_json(const GaussGraph &g, double kappa = 1.0) {
    json j;
    j["version"] = kStateFormatVersion;
    j["n_modes"] = g.n_modes();
    j["ordering"] = "qqpp";
    j["kappa"] = kappa;
    j["v"] = g.v_is_zero() ? json(nullptr) : matrix_to_json(g.v());
    j["u"] = matrix_to_json(g.u());
    return j;
}

struct LoadedState {
    GaussGraph graph;
    double kappa = 1.0;

    CovMatrix covariance() const {
        CovMatrix c = covariance_from_graph(graph);
        return kappa == 1.0 ? c : thermal_scale(c, kappa);
    }
};

inline LoadedState state_from_json(const json &j) {
    try {
        if (j.at("version").get<int>() != kStateFormatVersion) {
            throw ValidationError("unsupported state format version");
        }
        if (j.at("ordering").get<std::string>() != "qqpp") {
            throw ValidationError("state ordering must be qqpp");
        }
        int n = j.at("n_modes").get<int>();
        Mat u = matrix_from_json(j.at("u"), n);
        Mat v = j.at("v").is_null() ? Mat::Zero(n, n) : matrix_from_json(j.at("v"), n);
        return {GaussGraph(v, u), j.at("kappa").get<double>()};
    } catch (const json::exception &e) {
        throw ValidationError(fmt::format("malformed state file: {}", e.what()));
    }
}

inline json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError(fmt::format("cannot open {}", path));
    }
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw ValidationError(fmt::format("{}: {}", path, e.what()));
    }
}

inline void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError(fmt::format("cannot write {}", path));
    }
    out << text;
}

/// Edge list with orientation signs, vertex incidence, and mode coordinates.
inline json surface_graph_to_json(const SurfaceGraph &sg) {
    json j;
    j["n_modes"] = sg.n_modes;
    j["torus"] = sg.torus;
    json edges = json::array();
    for (int e = 0; e < sg.n_modes; ++e) {
        edges.push_back({{"mode", e},
                         {"endpoints", {sg.edge_endpoints[e][0], sg.edge_endpoints[e][1]}},
                         {"coord", {sg.geometry.coords[e][0], sg.geometry.coords[e][1]}}});
    }
    j["edges"] = edges;
    json vertices = json::array();
    for (const auto &ve : sg.vertex_edges) {
        vertices.push_back(ve);
    }
    j["vertices"] = vertices;
    json faces = json::array();
    for (const auto &bnd : sg.face_boundaries) {
        json f = json::array();
        for (auto [e, o] : bnd) {
            f.push_back({{"edge", e}, {"sign", o}});
        }
        faces.push_back(f);
    }
    j["faces"] = faces;
    return j;
}

inline json region_set_to_json(const RegionSet &r) {
    json j;
    j["kind"] = r.kind == RegionKind::kp ? "KP" : r.kind == RegionKind::lw ? "LW" : "custom";
    j["center"] = {r.center[0], r.center[1]};
    if (r.kind == RegionKind::kp) {
        j["radius"] = r.radius;
    } else if (r.kind == RegionKind::lw) {
        j["inner"] = r.inner;
        j["width"] = r.width;
    }
    json sizes;
    for (const auto &[name, reg] : r.regions) {
        sizes[name] = reg.size();
    }
    j["sizes"] = sizes;
    return j;
}

inline json topo_report_to_json(const TopoReport &rep) {
    json j;
    j["log_s"] = rep.log_s;
    j["kappa"] = rep.kappa;
    auto put = [&](const char *key, const std::optional<double> &v) {
        j[key] = v ? json(*v) : json(nullptr);
    };
    put("tee_kp", rep.tee_kp);
    put("tee_lw", rep.tee_lw);
    put("tln_kp", rep.tln_kp);
    put("tmi", rep.tmi);
    put("tmi_lower", rep.tmi_lower);
    put("tee_upper", rep.tee_upper);
    if (rep.sandwich) {
        j["sandwich"] = {{"lower", rep.sandwich->lower}, {"upper", rep.sandwich->upper}};
    }
    j["region_entropies"] = rep.region_entropies;
    json meta;
    for (const auto &[name, counts] : rep.spectra_meta) {
        meta[name] = {{"n_greater", counts.n_greater}, {"n_equal", counts.n_equal}};
    }
    j["spectra_meta"] = meta;
    return j;
}

inline json fit_to_json(const FitResult &f) {
    return {{"a", f.a},           {"xi_a", f.xi_a},         {"b", f.b},
            {"xi_b", f.xi_b},     {"residual", f.residual}, {"iterations", f.iterations},
            {"converged", f.converged}};
}

/// Shortest representation that parses back to the same double.
inline std::string fmt_double(double x) { return fmt::format("{}", x); }

}  // namespace gausstopo

#endif
