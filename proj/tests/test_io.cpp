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

#include <gtest/gtest.h>

#include "gausstopo/io.hpp"
#include "test_util.hpp"

using namespace gausstopo;
using namespace gausstopo::testing;

TEST(StateJson, RoundTripIsBitExact) {
    std::mt19937_64 rng(99);
    for (bool with_v : {false, true}) {
        GaussGraph g = random_graph(rng, 7, with_v);
        std::string text = state_to_json(g, 2.5).dump();
        LoadedState back = state_from_json(json::parse(text));
        EXPECT_EQ(back.kappa, 2.5);
        EXPECT_TRUE((back.graph.u().array() == g.u().array()).all());
        EXPECT_TRUE((back.graph.v().array() == g.v().array()).all());
        EXPECT_EQ(back.graph.v_is_zero(), !with_v);
        EXPECT_EQ(state_to_json(back.graph, back.kappa).dump(), text);
    }
}

TEST(StateJson, NullVForZeroGraphs) {
    GaussGraph g = surface_code_graph_analytic(make_spec(4, 4, Boundary::torus, 0.5, Frame::surface)).graph;
    json j = state_to_json(g);
    EXPECT_TRUE(j["v"].is_null());
    EXPECT_EQ(j["ordering"], "qqpp");
    EXPECT_EQ(j["n_modes"], 16);
    EXPECT_FALSE(state_to_json(cluster_graph(make_spec(3, 3, Boundary::planar, 0.5)))["v"].is_null());
}

TEST(StateJson, LoadedCovarianceAppliesKappa) {
    GaussGraph g = cluster_graph(make_spec(3, 3, Boundary::planar, 0.5));
    LoadedState st = state_from_json(state_to_json(g, 3.0));
    CovMatrix c = st.covariance();
    EXPECT_EQ(c.kappa(), 3.0);
    EXPECT_LT(max_abs(c.gamma() - 3.0 * covariance_from_graph(g).gamma()), 1e-15);
}

TEST(StateJson, Rejections) {
    GaussGraph g = cluster_graph(make_spec(2, 2, Boundary::planar, 0.0));
    json good = state_to_json(g);
    json bad_version = good;
    bad_version["version"] = 99;
    EXPECT_THROW(state_from_json(bad_version), ValidationError);
    json bad_order = good;
    bad_order["ordering"] = "qpqp";
    EXPECT_THROW(state_from_json(bad_order), ValidationError);
    json short_u = good;
    short_u["u"].erase(0);
    EXPECT_THROW(state_from_json(short_u), ValidationError);
    json missing = good;
    missing.erase("kappa");
    EXPECT_THROW(state_from_json(missing), ValidationError);
    json not_pd = good;
    for (auto &x : not_pd["u"]) x = 0.0;
    EXPECT_THROW(state_from_json(not_pd), ValidationError);
    EXPECT_THROW(read_json_file("/nonexistent/state.json"), ValidationError);
}

TEST(SurfaceGraphJson, CarriesEdgesAndSigns) {
    SurfaceGraph sg = surface_graph(make_spec(4, 4, Boundary::torus, 0.0, Frame::surface));
    json j = surface_graph_to_json(sg);
    EXPECT_EQ(j["n_modes"], sg.n_modes);
    EXPECT_TRUE(j["torus"].get<bool>());
    ASSERT_EQ(j["edges"].size(), static_cast<size_t>(sg.n_modes));
    ASSERT_EQ(j["faces"].size(), static_cast<size_t>(sg.n_faces()));
    for (const auto &face : j["faces"]) {
        int sum = 0;
        for (const auto &entry : face) {
            int sign = entry["sign"].get<int>();
            EXPECT_TRUE(sign == 1 || sign == -1);
            sum += sign;
        }
        EXPECT_EQ(sum, 0);
    }
    EXPECT_EQ(j["edges"][0]["endpoints"].size(), 2u);
}

TEST(ReportJson, NullsForSkippedMetrics) {
    TopoReport rep;
    rep.log_s = 1.0;
    rep.kappa = 2.0;
    rep.tee_kp = 0.25;
    rep.region_entropies["A"] = 1.5;
    json j = topo_report_to_json(rep);
    EXPECT_EQ(j["tee_kp"], 0.25);
    EXPECT_TRUE(j["tmi"].is_null());
    EXPECT_FALSE(j.contains("sandwich"));
    EXPECT_EQ(j["region_entropies"]["A"], 1.5);
}

TEST(ReportJson, RegionSetGeometry) {
    ModeGeometry geo;
    for (int x = 0; x < 16; ++x)
        for (int y = 0; y < 16; ++y) geo.coords.push_back({x, y});
    json j = region_set_to_json(kp_regions(geo, {7.5, 7.5}, 4.0));
    EXPECT_EQ(j["kind"], "KP");
    EXPECT_EQ(j["radius"], 4.0);
    EXPECT_EQ(j["sizes"].size(), 4u);
}

TEST(Format, ShortestRoundTrip) {
    for (double x : {0.1, 1.0 / 3.0, 2.885390081777927, 1e-300, -7.25}) {
        EXPECT_EQ(std::stod(fmt_double(x)), x);
    }
    EXPECT_EQ(fmt_double(0.5), "0.5");
}
