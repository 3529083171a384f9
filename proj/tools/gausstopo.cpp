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

// Command-line driver. Exit codes: 0 success, 2 validation error, 3 numerical
// failure, 4 threshold violation (bounds).

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "gausstopo/gausstopo.hpp"
#include "gausstopo/io.hpp"

namespace gt = gausstopo;
using gt::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitThreshold = 4;
constexpr const char *kSweepColumns = "log_s,tee_kp,tee_lw,tln,tmi,tmi_lower,tee_upper,kappa";

struct LatticeFlags {
    int rows = 0;
    int cols = 0;
    std::string boundary = "torus";
    std::string frame;
    double log_s = 0.0;

    gt::LatticeSpec spec(double override_log_s) const {
        gt::LatticeSpec s;
        s.rows = rows;
        s.cols = cols;
        s.boundary = boundary == "planar" ? gt::Boundary::planar : gt::Boundary::torus;
        s.frame = frame == "cluster" ? gt::Frame::cluster : gt::Frame::surface;
        s.log_s = override_log_s;
        s.validate();
        return s;
    }
    gt::LatticeSpec spec() const { return spec(log_s); }
};

void add_lattice_flags(CLI::App *cmd, LatticeFlags &f, int default_size, const std::string &default_frame,
                       bool with_log_s = true) {
    f.rows = f.cols = default_size;
    f.frame = default_frame;
    cmd->add_option("--rows", f.rows, "lattice rows")->capture_default_str();
    cmd->add_option("--cols", f.cols, "lattice columns")->capture_default_str();
    cmd->add_option("--boundary", f.boundary)
        ->check(CLI::IsMember({"torus", "planar"}))
        ->capture_default_str();
    cmd->add_option("--frame", f.frame,
                    "cluster: rows x cols cluster sites; surface: rows x cols surface-code modes")
        ->check(CLI::IsMember({"cluster", "surface"}))
        ->capture_default_str();
    if (with_log_s) {
        cmd->add_option("--log-s", f.log_s, "natural log of the squeezing parameter s")->capture_default_str();
    }
}

struct RegionFlags {
    double radius = 7.0;
    double lw_inner = 6.0;
    double lw_width = 3.0;
    std::vector<double> center;
};

void add_region_flags(CLI::App *cmd, RegionFlags &f) {
    cmd->add_option("--radius", f.radius, "Kitaev-Preskill disk radius")->capture_default_str();
    cmd->add_option("--lw-inner", f.lw_inner, "Levin-Wen annulus hole side")->capture_default_str();
    cmd->add_option("--lw-width", f.lw_width, "Levin-Wen annulus thickness")->capture_default_str();
    cmd->add_option("--center", f.center, "region centre x,y (default: lattice centre)")
        ->expected(2)
        ->delimiter(',');
}

std::array<double, 2> resolve_center(const gt::ModeGeometry &geo, const std::vector<double> &given) {
    if (given.size() == 2) {
        return {given[0], given[1]};
    }
    double lo[2], hi[2];
    gt::detail::bounding_box(geo, lo, hi);
    return {0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])};
}

struct Regions {
    gt::RegionSet kp;
    std::optional<gt::RegionSet> lw;
};

Regions make_regions(const gt::ModeGeometry &geo, const RegionFlags &f, bool with_lw) {
    auto c = resolve_center(geo, f.center);
    Regions r{gt::kp_regions(geo, c, f.radius), std::nullopt};
    if (with_lw) {
        r.lw = gt::lw_regions(geo, c, f.lw_inner, f.lw_width);
    }
    return r;
}

/// Pure surface-code state and its graph for the given spec.
struct SurfaceState {
    gt::GaussGraph graph;
    gt::SurfaceGraph sg;
};

SurfaceState surface_state(const gt::LatticeSpec &spec, const std::string &kind) {
    if (kind == "surface-pipeline" || kind == "pipeline") {
        gt::MappedSurfaceCode m = gt::map_cluster_to_surface(spec);
        return {m.graph, m.surface};
    }
    return {gt::surface_code_graph_analytic(spec).graph, gt::surface_graph(spec)};
}

std::string now_iso() {
    std::time_t t = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

unsigned worker_count(size_t jobs) {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("GAUSSTOPO_THREADS")) {
        try {
            int cap = std::stoi(env);
            if (cap >= 1) n = std::min<unsigned>(n, cap);
        } catch (const std::exception &) {
            throw gt::ValidationError(fmt::format("GAUSSTOPO_THREADS={} is not an integer", env));
        }
    }
    return static_cast<unsigned>(std::max<size_t>(1, std::min<size_t>(n, jobs)));
}

void emit(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        gt::write_text_file(path, text);
    }
}

std::string opt(const std::optional<double> &v) { return v ? gt::fmt_double(*v) : std::string(); }

// ------------------------------------------------------------------ build

struct BuildArgs {
    LatticeFlags lat;
    std::string kind = "cluster";
    std::string out = "state.json";
    std::string map_out;
};

int cmd_build(const BuildArgs &a) {
    gt::LatticeSpec spec = a.lat.spec();
    json index;
    gt::GaussGraph g;
    if (a.kind == "cluster") {
        g = gt::cluster_graph(spec);
        gt::ModeGeometry geo = gt::cluster_geometry(spec);
        json coords = json::array();
        for (const auto &c : geo.coords) coords.push_back({c[0], c[1]});
        index = {{"kind", "cluster"}, {"coords", coords}};
    } else if (a.kind == "surface-analytic") {
        gt::SurfaceGraph sg = gt::surface_graph(spec);
        g = gt::surface_code_graph_analytic(spec).graph;
        index = gt::surface_graph_to_json(sg);
        index["kind"] = "surface-analytic";
    } else {
        gt::MappedSurfaceCode m = gt::map_cluster_to_surface(spec);
        g = m.graph;
        index = gt::surface_graph_to_json(m.surface);
        index["kind"] = "surface-pipeline";
        index["kept_sites"] = m.kept_sites;
    }
    index["lattice"] = {{"rows", spec.rows},
                        {"cols", spec.cols},
                        {"boundary", a.lat.boundary},
                        {"frame", a.lat.frame},
                        {"log_s", spec.log_s}};
    std::string map_path = a.map_out;
    if (map_path.empty()) {
        std::filesystem::path p(a.out);
        map_path = (p.parent_path() / (p.stem().string() + ".map.json")).string();
    }
    gt::write_text_file(a.out, gt::state_to_json(g).dump() + "\n");
    gt::write_text_file(map_path, index.dump(1) + "\n");
    fmt::print("modes: {}\nstate: {}\nindex map: {}\n", g.n_modes(), a.out, map_path);
    return 0;
}

// ------------------------------------------------------------------ map

struct MapArgs {
    LatticeFlags lat;
    std::string out;
    std::string graph_out;
};

int cmd_map(const MapArgs &a) {
    gt::LatticeSpec spec = a.lat.spec();
    gt::MappedSurfaceCode m = gt::map_cluster_to_surface(spec);
    double s = spec.s();
    double dev_exact = (m.graph.u() - gt::surface_u_exact(m.surface, s)).cwiseAbs().maxCoeff();
    double dv = m.graph.v().size() ? m.graph.v().cwiseAbs().maxCoeff() : 0.0;
    fmt::print("modes: {}\nvertices: {}\nfaces: {}\n", m.graph.n_modes(), m.surface.n_vertices(),
               m.surface.n_faces());
    fmt::print("max |V|: {}\nmax |U - U_exact|: {}\n", gt::fmt_double(dv), gt::fmt_double(dev_exact));
    if (spec.boundary == gt::Boundary::torus) {
        gt::Mat closed = s * s * m.surface.adjacency_sc +
                     (1.0 / (s * s) + 2.0 * s * s) * gt::Mat::Identity(m.graph.n_modes(), m.graph.n_modes());
        fmt::print("max |U - U_closed_form|: {}\n",
                   gt::fmt_double((m.graph.u() - closed).cwiseAbs().maxCoeff()));
    }
    if (!a.out.empty()) {
        gt::write_text_file(a.out, gt::state_to_json(m.graph).dump() + "\n");
    }
    if (!a.graph_out.empty()) {
        json j = gt::surface_graph_to_json(m.surface);
        j["kept_sites"] = m.kept_sites;
        gt::write_text_file(a.graph_out, j.dump(1) + "\n");
    }
    return 0;
}

// ------------------------------------------------------------------ tee / tln / tmi

struct PointArgs {
    LatticeFlags lat;
    RegionFlags reg;
    std::string kind = "analytic";
    std::string state_path;
    double kappa = 1.0;
};

struct PointSetup {
    gt::CovMatrix pure;
    gt::SurfaceGraph sg;
    double kappa = 1.0;
};

PointSetup point_setup(const PointArgs &a) {
    gt::LatticeSpec spec = a.lat.spec();
    if (!a.state_path.empty()) {
        gt::LoadedState st = gt::state_from_json(gt::read_json_file(a.state_path));
        gt::SurfaceGraph sg = gt::surface_graph(spec);
        if (sg.n_modes != st.graph.n_modes()) {
            throw gt::ValidationError(fmt::format("state has {} modes but the lattice flags describe {}",
                                                  st.graph.n_modes(), sg.n_modes));
        }
        return {gt::covariance_from_graph(st.graph), sg, st.kappa};
    }
    SurfaceState ss = surface_state(spec, a.kind);
    return {gt::covariance_from_graph(ss.graph), ss.sg, 1.0};
}

int cmd_point(const PointArgs &a, const std::string &metric) {
    PointSetup p = point_setup(a);
    double kappa = a.state_path.empty() ? a.kappa : p.kappa * a.kappa;
    Regions r = make_regions(p.sg.geometry, a.reg, metric == "tee");
    json out;
    out["log_s"] = a.lat.log_s;
    out["n_modes"] = p.sg.n_modes;
    out["regions"] = {{"kp", gt::region_set_to_json(r.kp)}};
    gt::EntropyCache cache(p.pure);
    if (metric == "tee") {
        out["regions"]["lw"] = gt::region_set_to_json(*r.lw);
        out["tee_kp"] = gt::tee_kp(cache, r.kp);
        out["tee_lw"] = gt::tee_lw(cache, *r.lw);
    } else if (metric == "tln") {
        out["tln_kp"] = gt::tln_kp(p.pure, r.kp);
    } else {
        out["kappa"] = kappa;
        out["tmi_lower"] = gt::tmi_lower_bound(cache, r.kp);
        if (kappa == 1.0) {
            out["tmi"] = gt::tmi(cache, r.kp);
        } else {
            out["tmi"] = gt::tmi(gt::thermal_scale(p.pure, kappa), r.kp);
        }
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

// ------------------------------------------------------------------ sweep

struct SweepArgs {
    LatticeFlags lat;
    RegionFlags reg;
    std::string kind = "analytic";
    double log_s_min = 0.0;
    double log_s_max = 3.2;
    int steps = 9;
    std::vector<double> kappas{1.0};
    std::vector<std::string> metrics{"tee_kp", "tee_lw", "tln", "tmi", "tmi_lower", "tee_upper"};
    std::string csv = "sweep.csv";
    std::string json_path;
    bool fresh = false;
};

using RowKey = std::pair<std::string, std::string>;  // (log_s, kappa) as written

std::map<RowKey, std::string> read_existing_rows(const std::string &path, const std::string &config_line) {
    std::map<RowKey, std::string> rows;
    std::ifstream in(path);
    if (!in) {
        return rows;
    }
    std::string line;
    bool config_seen = false;
    while (std::getline(in, line)) {
        if (line.rfind("# config ", 0) == 0) {
            if (line != config_line) {
                throw gt::ValidationError(fmt::format(
                    "{} was produced by a different sweep configuration; use --fresh to overwrite", path));
            }
            config_seen = true;
            continue;
        }
        if (line.empty() || line[0] == '#' || line == kSweepColumns) {
            continue;
        }
        auto first = line.find(',');
        auto last = line.rfind(',');
        if (first == std::string::npos || first == last) {
            continue;  // truncated line from an interrupted run
        }
        if (std::count(line.begin(), line.end(), ',') != 7) {
            continue;
        }
        rows[{line.substr(0, first), line.substr(last + 1)}] = line;
    }
    if (!rows.empty() && !config_seen) {
        throw gt::ValidationError(fmt::format("{} has no configuration header; use --fresh", path));
    }
    return rows;
}

std::map<RowKey, std::string> read_existing_json(const std::string &path) {
    std::map<RowKey, std::string> out;
    std::ifstream in(path);
    std::string line;
    while (in && std::getline(in, line)) {
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || j.value("type", "") != "point") {
            continue;
        }
        out[{gt::fmt_double(j["log_s"].get<double>()), gt::fmt_double(j["kappa"].get<double>())}] = line;
    }
    return out;
}

int cmd_sweep(const SweepArgs &a) {
    if (a.steps < 1) throw gt::ValidationError("--steps must be at least 1");
    if (!(a.log_s_min <= a.log_s_max)) throw gt::ValidationError("--log-s-min must not exceed --log-s-max");
    if (a.kappas.empty()) throw gt::ValidationError("--kappa needs at least one value");
    for (double k : a.kappas) {
        if (!(k >= 1.0)) throw gt::ValidationError(fmt::format("kappa {} must be at least 1", k));
    }
    gt::MetricSelection sel;
    sel.tee_kp = sel.tee_lw = sel.tln = sel.tmi = sel.tmi_lower = sel.tee_upper = false;
    for (const auto &m : a.metrics) {
        if (m == "tee_kp") sel.tee_kp = true;
        else if (m == "tee_lw") sel.tee_lw = true;
        else if (m == "tln") sel.tln = true;
        else if (m == "tmi") sel.tmi = true;
        else if (m == "tmi_lower") sel.tmi_lower = true;
        else if (m == "tee_upper") sel.tee_upper = true;
        else throw gt::ValidationError(fmt::format("unknown metric '{}'", m));
    }

    // Geometry is validated up front, before any state is built.
    gt::LatticeSpec spec0 = a.lat.spec(a.log_s_min);
    gt::SurfaceGraph sg0 = gt::surface_graph(spec0);
    Regions regions = make_regions(sg0.geometry, a.reg, sel.tee_lw);

    std::vector<double> grid(a.steps);
    for (int k = 0; k < a.steps; ++k) {
        grid[k] = a.steps == 1 ? a.log_s_min
                               : a.log_s_min + (a.log_s_max - a.log_s_min) * k / (a.steps - 1);
    }

    json config = {{"rows", spec0.rows},
                   {"cols", spec0.cols},
                   {"boundary", a.lat.boundary},
                   {"frame", a.lat.frame},
                   {"kind", a.kind},
                   {"log_s_min", a.log_s_min},
                   {"log_s_max", a.log_s_max},
                   {"steps", a.steps},
                   {"kappa", a.kappas},
                   {"metrics", a.metrics},
                   {"kp", gt::region_set_to_json(regions.kp)}};
    if (regions.lw) config["lw"] = gt::region_set_to_json(*regions.lw);
    const std::string config_line = "# config " + config.dump();

    std::map<RowKey, std::string> csv_rows, json_rows;
    if (!a.fresh) {
        csv_rows = read_existing_rows(a.csv, config_line);
        if (!a.json_path.empty()) json_rows = read_existing_json(a.json_path);
    }
    auto key = [](double log_s, double kappa) { return RowKey{gt::fmt_double(log_s), gt::fmt_double(kappa)}; };
    auto done = [&](double log_s) {
        for (double kappa : a.kappas) {
            if (!csv_rows.count(key(log_s, kappa))) return false;
            if (!a.json_path.empty() && !json_rows.count(key(log_s, kappa))) return false;
        }
        return true;
    };
    std::vector<int> todo;
    for (int k = 0; k < a.steps; ++k) {
        if (!done(grid[k])) todo.push_back(k);
    }

    const std::string header = fmt::format("# gausstopo sweep csv v1\n# generated {}\n{}\n{}\n", now_iso(),
                                           config_line, kSweepColumns);
    // Partial output: header plus every already known row, then rows appended
    // as points finish.
    std::mutex io_mu;
    std::ofstream csv_out(a.csv, std::ios::binary | std::ios::trunc);
    if (!csv_out) throw gt::ValidationError(fmt::format("cannot write {}", a.csv));
    csv_out << header;
    for (const auto &[k, line] : csv_rows) csv_out << line << "\n";
    csv_out.flush();
    std::ofstream json_out;
    if (!a.json_path.empty()) {
        json_out.open(a.json_path, std::ios::binary | std::ios::trunc);
        if (!json_out) throw gt::ValidationError(fmt::format("cannot write {}", a.json_path));
        json_out << json{{"type", "config"}, {"config", config}}.dump() << "\n";
        for (const auto &[k, line] : json_rows) json_out << line << "\n";
        json_out.flush();
    }

    std::vector<std::string> failures;
    auto run_point = [&](int k) {
        const double log_s = grid[k];
        try {
            gt::LatticeSpec spec = a.lat.spec(log_s);
            SurfaceState ss = surface_state(spec, a.kind);
            gt::CovMatrix pure = gt::covariance_from_graph(ss.graph);
            gt::TopoReport base = gt::evaluate_topology(pure, log_s, 1.0, regions.kp, regions.lw, sel);
            std::vector<std::pair<std::string, std::string>> lines;
            for (double kappa : a.kappas) {
                gt::TopoReport rep = base;
                rep.kappa = kappa;
                if (kappa != 1.0) {
                    rep.tln_kp.reset();  // defined for the pure state only
                    if (sel.tmi) rep.tmi = gt::tmi(gt::thermal_scale(pure, kappa), regions.kp);
                }
                std::string row = fmt::format("{},{},{},{},{},{},{},{}", gt::fmt_double(log_s), opt(rep.tee_kp),
                                              opt(rep.tee_lw), opt(rep.tln_kp), opt(rep.tmi),
                                              opt(rep.tmi_lower), opt(rep.tee_upper), gt::fmt_double(kappa));
                json j = gt::topo_report_to_json(rep);
                j["type"] = "point";
                lines.emplace_back(row, j.dump());
            }
            std::lock_guard<std::mutex> lock(io_mu);
            for (size_t t = 0; t < lines.size(); ++t) {
                csv_rows[key(log_s, a.kappas[t])] = lines[t].first;
                csv_out << lines[t].first << "\n";
                if (json_out.is_open()) {
                    json_rows[key(log_s, a.kappas[t])] = lines[t].second;
                    json_out << lines[t].second << "\n";
                }
            }
            csv_out.flush();
            if (json_out.is_open()) json_out.flush();
            std::cerr << fmt::format("log_s {} done\n", gt::fmt_double(log_s));
        } catch (const std::exception &e) {
            std::lock_guard<std::mutex> lock(io_mu);
            failures.push_back(fmt::format("log_s {}: {}", gt::fmt_double(log_s), e.what()));
            if (json_out.is_open()) {
                json_out << json{{"type", "failure"}, {"log_s", log_s}, {"error", e.what()}}.dump() << "\n";
                json_out.flush();
            }
            std::cerr << "failed: " << failures.back() << "\n";
        }
    };

    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    unsigned workers = worker_count(todo.size());
    for (unsigned w = 0; w < workers && !todo.empty(); ++w) {
        pool.emplace_back([&] {
            for (size_t i; (i = next.fetch_add(1)) < todo.size();) run_point(todo[i]);
        });
    }
    for (auto &t : pool) t.join();
    csv_out.close();
    if (json_out.is_open()) json_out.close();

    // Final ordering: by log_s, then by the order of --kappa.
    std::ostringstream csv_final, json_final;
    csv_final << header;
    json_final << json{{"type", "config"}, {"config", config}}.dump() << "\n";
    for (double log_s : grid) {
        for (double kappa : a.kappas) {
            auto it = csv_rows.find(key(log_s, kappa));
            if (it != csv_rows.end()) csv_final << it->second << "\n";
            auto jt = json_rows.find(key(log_s, kappa));
            if (jt != json_rows.end()) json_final << jt->second << "\n";
        }
    }
    for (const auto &f : failures) json_final << json{{"type", "failure"}, {"error", f}}.dump() << "\n";
    gt::write_text_file(a.csv, csv_final.str());
    if (!a.json_path.empty()) gt::write_text_file(a.json_path, json_final.str());
    fmt::print("points computed: {}, reused: {}, failed: {}\n", todo.size() - failures.size(),
               a.steps - static_cast<int>(todo.size()), failures.size());
    return failures.empty() ? 0 : kExitNumerical;
}

// ------------------------------------------------------------------ spectrum

struct SpectrumArgs {
    std::vector<int> n{3};
    std::vector<int> m;
    std::vector<double> log_s{0.0};
    std::string out;
};

int cmd_spectrum(const SpectrumArgs &a) {
    if (!a.m.empty() && a.m.size() != a.n.size()) {
        throw gt::ValidationError("--m must be omitted or have as many values as --n");
    }
    std::string text = "# gausstopo spectrum csv v1\nn,m,log_s,gap,gap_asymptotic,ratio\n";
    for (size_t k = 0; k < a.n.size(); ++k) {
        int n = a.n[k], m = a.m.empty() ? a.n[k] : a.m[k];
        for (double log_s : a.log_s) {
            gt::SpectrumResult r = gt::normal_modes(n, m, std::exp(log_s));
            text += fmt::format("{},{},{},{},{},{}\n", n, m, gt::fmt_double(log_s), gt::fmt_double(r.gap),
                                gt::fmt_double(r.gap_asymptotic), gt::fmt_double(r.gap / r.gap_asymptotic));
        }
    }
    emit(a.out, text);
    return 0;
}

// ------------------------------------------------------------------ correlations / bounds

struct CorrelationArgs {
    LatticeFlags lat;
    std::string kind = "analytic";
    std::vector<int> origin;
    std::vector<int> step{1, 1};
    int count = 9;
    double kappa = 1.0;
    bool fit = false;
    std::string out;
};

int cmd_correlations(const CorrelationArgs &a) {
    gt::LatticeSpec spec = a.lat.spec();
    SurfaceState ss = surface_state(spec, a.kind);
    gt::CovMatrix c = gt::covariance_from_graph(ss.graph);
    if (a.kappa != 1.0) c = gt::thermal_scale(c, a.kappa);
    const auto &geo = ss.sg.geometry;
    std::array<int, 2> o;
    if (a.origin.size() == 2) {
        o = {a.origin[0], a.origin[1]};
    } else {
        auto ctr = resolve_center(geo, {});
        o = {static_cast<int>(std::ceil(ctr[0])), static_cast<int>(std::ceil(ctr[1]))};
    }
    int origin = -1;
    for (int i = 0; i < geo.n_modes(); ++i) {
        if (geo.coords[i] == o) origin = i;
    }
    if (origin < 0) throw gt::GeometryError(fmt::format("no mode at ({}, {})", o[0], o[1]));
    auto samples = gt::axis_samples(c, ss.sg, origin, {a.step[0], a.step[1]}, a.count);
    gt::CorrelationBound bound = gt::dms_bound(spec.s());
    if (a.fit) {
        gt::FitResult f = gt::fit_correlation_length(samples);
        json j = {{"log_s", spec.log_s}, {"origin", {o[0], o[1]}}, {"fit", gt::fit_to_json(f)}};
        json pts = json::array();
        for (const auto &s : samples) pts.push_back({s.separation, s.value});
        j["samples"] = pts;
        emit(a.out, j.dump(2) + "\n");
        return 0;
    }
    std::string text = "# gausstopo correlations csv v1\nseparation,correlation,bound_value\n";
    for (const auto &s : samples) {
        text += fmt::format("{},{},{}\n", s.separation, gt::fmt_double(s.value),
                            gt::fmt_double(bound.value(s.separation, c.kappa())));
    }
    emit(a.out, text);
    return 0;
}

struct BoundsArgs {
    LatticeFlags lat;
    double kappa = 1.0;
};

int cmd_bounds(const BoundsArgs &a) {
    gt::LatticeSpec spec = a.lat.spec();
    SurfaceState ss = surface_state(spec, "analytic");
    gt::CovMatrix c = gt::covariance_from_graph(ss.graph);
    if (a.kappa != 1.0) c = gt::thermal_scale(c, a.kappa);
    gt::BoundReport rep = gt::verify_bound(c, ss.sg, gt::dms_bound(spec.s()));
    json j = {{"log_s", spec.log_s},
              {"kappa", a.kappa},
              {"pairs_checked", rep.pairs_checked},
              {"violations", rep.violations},
              {"max_excess", rep.max_excess},
              {"max_ratio", rep.max_ratio}};
    std::cout << j.dump(2) << "\n";
    return rep.violations == 0 ? 0 : kExitThreshold;
}

// ------------------------------------------------------------------ upper-bound

struct UpperArgs {
    std::vector<double> log_s{-1.0, 0.0, 1.0, 2.0, 3.0};
    std::string out;
};

int cmd_upper(const UpperArgs &a) {
    std::string text = "# gausstopo upper-bound csv v1\nlog_s,sigma1,tee_upper,network_entropy\n";
    for (double log_s : a.log_s) {
        double s = std::exp(log_s);
        gt::CovMatrix c = gt::covariance_from_graph(gt::upper_bound_network(s));
        text += fmt::format("{},{},{},{}\n", gt::fmt_double(log_s), gt::fmt_double(gt::upper_bound_sigma(s)),
                            gt::fmt_double(gt::tee_upper_bound(s)), gt::fmt_double(gt::entropy(c, {0})));
    }
    emit(a.out, text);
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"gausstopo: Gaussian surface-code states and their topological diagnostics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "gausstopo 1.0.0");

    BuildArgs build;
    auto *c_build = app.add_subcommand("build", "write a cluster or surface-code state as JSON");
    add_lattice_flags(c_build, build.lat, 4, "cluster");
    c_build->add_option("--kind", build.kind)
        ->check(CLI::IsMember({"cluster", "surface-analytic", "surface-pipeline"}))
        ->capture_default_str();
    c_build->add_option("--out", build.out, "state file")->capture_default_str();
    c_build->add_option("--map-out", build.map_out, "index map file (default: <out stem>.map.json)");

    MapArgs map;
    auto *c_map = app.add_subcommand("map", "run the measurement pattern and compare with the closed form");
    add_lattice_flags(c_map, map.lat, 8, "cluster");
    c_map->add_option("--out", map.out, "surface-code state file");
    c_map->add_option("--graph-out", map.graph_out, "surface graph file");

    std::array<PointArgs, 3> point;
    std::array<CLI::App *, 3> c_point{};
    const std::array<std::pair<const char *, const char *>, 3> point_cmds{
        {{"tee", "Kitaev-Preskill and Levin-Wen entropies"},
         {"tln", "topological logarithmic negativity"},
         {"tmi", "topological mutual information and its kappa-independent lower bound"}}};
    for (size_t k = 0; k < 3; ++k) {
        c_point[k] = app.add_subcommand(point_cmds[k].first, point_cmds[k].second);
        add_lattice_flags(c_point[k], point[k].lat, 24, "surface");
        add_region_flags(c_point[k], point[k].reg);
        c_point[k]->add_option("--kind", point[k].kind)
            ->check(CLI::IsMember({"analytic", "pipeline"}))
            ->capture_default_str();
        c_point[k]->add_option("--state", point[k].state_path, "load the state from a file instead");
        if (k == 2) c_point[k]->add_option("--kappa", point[k].kappa, "thermal factor")->capture_default_str();
    }

    SweepArgs sweep;
    auto *c_sweep = app.add_subcommand("sweep", "evaluate diagnostics over a log s grid");
    add_lattice_flags(c_sweep, sweep.lat, 36, "surface", false);
    add_region_flags(c_sweep, sweep.reg);
    c_sweep->add_option("--kind", sweep.kind)->check(CLI::IsMember({"analytic", "pipeline"}))->capture_default_str();
    c_sweep->add_option("--log-s-min", sweep.log_s_min)->capture_default_str();
    c_sweep->add_option("--log-s-max", sweep.log_s_max)->capture_default_str();
    c_sweep->add_option("--steps", sweep.steps)->capture_default_str();
    c_sweep->add_option("--kappa", sweep.kappas, "thermal factors")->delimiter(',')->capture_default_str();
    c_sweep->add_option("--metrics", sweep.metrics)->delimiter(',')->capture_default_str();
    c_sweep->add_option("--csv", sweep.csv)->capture_default_str();
    c_sweep->add_option("--json", sweep.json_path, "JSON-lines report");
    c_sweep->add_flag("--fresh", sweep.fresh, "ignore existing partial output");

    SpectrumArgs spectrum;
    auto *c_spec = app.add_subcommand("spectrum", "normal-mode gap on an n x m torus");
    c_spec->add_option("--n", spectrum.n)->delimiter(',')->capture_default_str();
    c_spec->add_option("--m", spectrum.m, "defaults to n")->delimiter(',');
    c_spec->add_option("--log-s", spectrum.log_s)->delimiter(',')->capture_default_str();
    c_spec->add_option("--out", spectrum.out, "CSV file (default stdout)");

    CorrelationArgs corr;
    corr.lat.boundary = "planar";
    corr.lat.log_s = 3.2;
    auto *c_corr = app.add_subcommand("correlations", "q-q correlations along a lattice axis");
    add_lattice_flags(c_corr, corr.lat, 36, "surface");
    c_corr->add_option("--kind", corr.kind)->check(CLI::IsMember({"analytic", "pipeline"}))->capture_default_str();
    c_corr->add_option("--origin", corr.origin, "origin mode x,y (default: centre)")->expected(2)->delimiter(',');
    c_corr->add_option("--step", corr.step, "axis step dx,dy")->expected(2)->delimiter(',')->capture_default_str();
    c_corr->add_option("--count", corr.count)->capture_default_str();
    c_corr->add_option("--kappa", corr.kappa)->capture_default_str();
    c_corr->add_flag("--fit", corr.fit, "fit a double exponential and print JSON");
    c_corr->add_option("--out", corr.out, "output file (default stdout)");

    BoundsArgs bounds;
    auto *c_bounds = app.add_subcommand("bounds", "check the q-q decay bound on every pair (exit 4 on violation)");
    add_lattice_flags(c_bounds, bounds.lat, 16, "surface");
    c_bounds->add_option("--kappa", bounds.kappa)->capture_default_str();

    UpperArgs upper;
    auto *c_upper = app.add_subcommand("upper-bound", "closed-form TEE upper bound and its 3-mode network");
    c_upper->add_option("--log-s", upper.log_s)->delimiter(',')->capture_default_str();
    c_upper->add_option("--out", upper.out, "CSV file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (c_build->parsed()) return cmd_build(build);
        if (c_map->parsed()) return cmd_map(map);
        for (size_t k = 0; k < 3; ++k) {
            if (c_point[k]->parsed()) return cmd_point(point[k], point_cmds[k].first);
        }
        if (c_sweep->parsed()) return cmd_sweep(sweep);
        if (c_spec->parsed()) return cmd_spectrum(spectrum);
        if (c_corr->parsed()) return cmd_correlations(corr);
        if (c_bounds->parsed()) return cmd_bounds(bounds);
        if (c_upper->parsed()) return cmd_upper(upper);
    } catch (const gt::ValidationError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const gt::NumericalError &e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
