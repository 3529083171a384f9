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

#include "test_util.hpp"

using namespace gausstopo;
using namespace gausstopo::testing;

namespace {

GaussGraph single(double v, double u) { return GaussGraph(Mat::Constant(1, 1, v), Mat::Constant(1, 1, u)); }

GaussGraph two_mode_cluster(double s) {
    Mat v(2, 2);
    v << 0, 1, 1, 0;
    return GaussGraph(v, Mat::Identity(2, 2) / (s * s));
}

// Kept pair around one p-measured vertex: U = s^-2 I + s^2 J.
CovMatrix two_mode_fragment(double s) {
    Mat adj = Mat::Zero(3, 3);
    adj(0, 1) = adj(1, 0) = adj(0, 2) = adj(2, 0) = 1.0;
    return covariance_from_graph(measure_p(cluster_graph_from_adjacency(adj, s), 0));
}

}  // namespace

// ---------------------------------------------------------------- construction

TEST(GaussGraph, RejectsAsymmetricAndIndefinite) {
    Mat v = Mat::Zero(2, 2);
    Mat u = Mat::Identity(2, 2);
    Mat bad = u;
    bad(0, 1) = 1e-9;
    EXPECT_THROW(GaussGraph(v, bad), DomainError);
    Mat indefinite(2, 2);
    indefinite << 1, 2, 2, 1;
    EXPECT_THROW(GaussGraph(v, indefinite), DomainError);
    EXPECT_THROW(GaussGraph(Mat::Zero(3, 3), u), DomainError);
}

TEST(GaussGraph, SymmetryToleranceAcceptsRoundoff) {
    Mat u = Mat::Identity(2, 2);
    u(0, 1) = 0.3;
    u(1, 0) = 0.3 + 5e-13;
    GaussGraph g(Mat::Zero(2, 2), u);
    EXPECT_EQ(g.u()(0, 1), g.u()(1, 0));
    EXPECT_TRUE(g.v_is_zero());
}

TEST(Covariance, VacuumIsHalfIdentity) {
    CovMatrix c = covariance_from_graph(single(0.0, 1.0));
    EXPECT_TRUE(c.gamma().isApprox(0.5 * Mat::Identity(2, 2), 1e-15));
    EXPECT_EQ(c.kappa(), 1.0);
    EXPECT_TRUE(c.block_diagonal());
}

TEST(Covariance, SqueezedSingleMode) {
    const double s = 2.0;
    CovMatrix c = covariance_from_graph(single(0.0, 1.0 / (s * s)));
    EXPECT_NEAR(c.gamma()(0, 0), 2.0, 1e-14);
    EXPECT_NEAR(c.gamma()(1, 1), 0.125, 1e-14);
    EXPECT_EQ(c.gamma()(0, 1), 0.0);
}

TEST(Covariance, HandSubstitutionWithRealPart) {
    CovMatrix c = covariance_from_graph(single(1.0, 1.0));
    Mat expected(2, 2);
    expected << 1, 1, 1, 2;
    EXPECT_TRUE(c.gamma().isApprox(0.5 * expected, 1e-15));
    EXPECT_FALSE(c.block_diagonal());
}

TEST(Covariance, MatchesBlockFormulaOnRandomGraphs) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + trial % 7;
        GaussGraph g = random_graph(rng, n);
        Mat ui = g.u().inverse();
        Mat expected(2 * n, 2 * n);
        expected << ui, ui * g.v(), g.v() * ui, g.u() + g.v() * ui * g.v();
        EXPECT_LT(max_abs(covariance_from_graph(g).gamma() - 0.5 * expected), 1e-10);
    }
}

TEST(Covariance, IllConditionedGraphRejected) {
    Mat u = Mat::Identity(2, 2);
    u(1, 1) = 1e-15;
    EXPECT_THROW(covariance_from_graph(GaussGraph(Mat::Zero(2, 2), u)), IllConditionedError);
    CovarianceOptions loose;
    loose.max_condition = 1e17;
    EXPECT_NO_THROW(covariance_from_graph(GaussGraph(Mat::Zero(2, 2), u), loose));
}

// ---------------------------------------------------------------- spectra

TEST(Spectrum, VacuumAndThermal) {
    CovMatrix vac = covariance_from_graph(single(0.0, 1.0));
    auto sp = symplectic_spectrum(vac, {0});
    ASSERT_EQ(sp.size(), 1u);
    EXPECT_NEAR(sp.values()[0], 0.5, 1e-15);
    EXPECT_EQ(sp.n_equal(), 1);
    auto hot = symplectic_spectrum(thermal_scale(vac, 3.0), {0});
    EXPECT_NEAR(hot.values()[0], 1.5, 1e-14);
    EXPECT_EQ(hot.n_greater(), 1);
}

TEST(Spectrum, ThreeModeNetworkAtUnitSqueezing) {
    CovMatrix c = covariance_from_graph(upper_bound_network(1.0));
    for (auto method : {SpectrumMethod::automatic, SpectrumMethod::direct}) {
        auto sp = symplectic_spectrum(c, {1}, {method});
        EXPECT_NEAR(sp.values()[0], 0.5 * std::sqrt(6.0 / 4.0), 1e-12);
    }
}

TEST(Spectrum, EmptyOrOutOfRangeRegion) {
    CovMatrix c = covariance_from_graph(two_mode_cluster(1.0));
    EXPECT_THROW(symplectic_spectrum(c, {}), DomainError);
    EXPECT_THROW(symplectic_spectrum(c, {2}), DomainError);
    EXPECT_THROW(symplectic_spectrum(c, {-1}), DomainError);
}

TEST(Spectrum, UncertaintyViolationIsDiagnosed) {
    EXPECT_THROW(SymplecticSpectrum({0.4}), DiagnosticError);
    EXPECT_NO_THROW(SymplecticSpectrum({0.5 - 1e-10}));
}

TEST(Spectrum, PartitionCountsCoverSpectrum) {
    SymplecticSpectrum sp({0.5, 0.5 + 1e-12, 0.7, 2.0});
    EXPECT_EQ(sp.n_greater(), 2);
    EXPECT_EQ(sp.n_equal(), 2);
    EXPECT_EQ(sp.values().front(), 2.0);
}

TEST(Spectrum, MatchesBruteForceOnRandomStates) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + trial % 9;
        GaussGraph g = random_graph(rng, n, trial % 2 == 0);
        CovMatrix c = covariance_from_graph(g);
        auto region = random_region(rng, n);
        std::vector<int> idx;
        for (int i : region) idx.push_back(i);
        for (int i : region) idx.push_back(n + i);
        auto expected = brute_symplectic(select(c.gamma(), idx, idx));
        for (auto method : {SpectrumMethod::automatic, SpectrumMethod::direct}) {
            auto sp = symplectic_spectrum(c, region, {method});
            ASSERT_EQ(sp.size(), expected.size());
            for (size_t k = 0; k < expected.size(); ++k) {
                EXPECT_NEAR(sp.values()[k], expected[k], 1e-8);
            }
        }
    }
}

// ---------------------------------------------------------------- entropy

TEST(Entropy, ClosedFormValues) {
    EXPECT_EQ(von_neumann_entropy(SymplecticSpectrum({0.5})), 0.0);
    EXPECT_NEAR(von_neumann_entropy(SymplecticSpectrum({1.5})), 2.0, 1e-14);
    const double sigma = 0.5 * std::sqrt(1.5);
    const double hi = sigma + 0.5, lo = sigma - 0.5;
    double expected = hi * std::log2(hi) - lo * std::log2(lo);
    EXPECT_NEAR(von_neumann_entropy(SymplecticSpectrum({sigma})), expected, 1e-15);
    EXPECT_NEAR(expected, 0.525, 5e-3);
}

TEST(Entropy, UndershootContributesZero) {
    EXPECT_EQ(mode_entropy(0.5 - 5e-10), 0.0);
    EXPECT_EQ(mode_entropy(0.5 + 5e-10), 0.0);
}

TEST(Purity, ProductFormula) {
    EXPECT_EQ(purity(SymplecticSpectrum({0.5})), 1.0);
    EXPECT_NEAR(purity(SymplecticSpectrum({1.5})), 1.0 / 3.0, 1e-15);
    EXPECT_EQ(purity(SymplecticSpectrum({0.5, 0.5})), 1.0);
}

TEST(Purity, AgreesWithRenyiTwoOfThermalMode) {
    // Tr rho^2 = 1 / (2 n + 1) for a thermal mode with occupation n = sigma - 1/2.
    for (double sigma : {0.75, 1.5, 4.0}) {
        EXPECT_NEAR(purity(SymplecticSpectrum({sigma})), 1.0 / (2.0 * (sigma - 0.5) + 1.0), 1e-14);
    }
}

TEST(Entropy, ComplementSymmetryForPureStates) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + trial % 11;
        CovMatrix c = covariance_from_graph(random_graph(rng, n, trial % 3 != 0));
        auto region = random_region(rng, n);
        auto rest = complement(region, n);
        for (auto method : {SpectrumMethod::automatic, SpectrumMethod::direct}) {
            EXPECT_NEAR(entropy(c, region, {method}), entropy(c, rest, {method}), 1e-8);
        }
        EXPECT_NEAR(entropy(c, region), entropy(c, region, {SpectrumMethod::direct}), 1e-8);
    }
}

TEST(Entropy, MutualInformationOfPureStateIsTwiceEntropy) {
    std::mt19937_64 rng(3);
    CovMatrix c = covariance_from_graph(random_graph(rng, 6));
    EXPECT_NEAR(mutual_information(c, {0, 2}), 2.0 * entropy(c, {0, 2}), 1e-10);
    CovMatrix vac = covariance_from_graph(GaussGraph(Mat::Zero(3, 3), Mat::Identity(3, 3)));
    EXPECT_NEAR(mutual_information(thermal_scale(vac, 4.0), {1}), 0.0, 1e-12);
}

// ---------------------------------------------------------------- purity / uncertainty

TEST(Properties, FullStateIsPure) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + trial % 12;
        CovMatrix c = covariance_from_graph(random_graph(rng, n));
        for (double sigma : brute_symplectic(c.gamma())) {
            EXPECT_NEAR(sigma, 0.5, 1e-9);
        }
        auto sp = symplectic_spectrum(c, all_modes(n), {SpectrumMethod::direct});
        EXPECT_EQ(sp.n_equal(), n);
    }
}

TEST(Properties, UncertaintyRelationHolds) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + trial % 10;
        CovMatrix c = covariance_from_graph(random_graph(rng, n));
        for (double kappa : {1.0, 2.5}) {
            CMat h = thermal_scale(c, kappa).gamma().cast<std::complex<double>>() +
                     std::complex<double>(0.0, 0.5) * symplectic_form(n).cast<std::complex<double>>();
            Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
            EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9);
        }
    }
}

TEST(Properties, KappaLinearity) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + trial % 9;
        CovMatrix c = covariance_from_graph(random_graph(rng, n, trial % 2 == 0));
        auto region = random_region(rng, n);
        const double kappa = 1.0 + trial * 0.37;
        for (auto method : {SpectrumMethod::automatic, SpectrumMethod::direct}) {
            auto base = symplectic_spectrum(c, region, {method});
            auto hot = symplectic_spectrum(thermal_scale(c, kappa), region, {method});
            for (size_t k = 0; k < base.size(); ++k) {
                EXPECT_NEAR(hot.values()[k], kappa * base.values()[k], 1e-10 * kappa);
            }
        }
    }
}

// ---------------------------------------------------------------- thermal scaling

TEST(ThermalScale, IdentityCompositionAndDomain) {
    CovMatrix vac = covariance_from_graph(GaussGraph(Mat::Zero(2, 2), Mat::Identity(2, 2)));
    EXPECT_EQ(thermal_scale(vac, 1.0).gamma(), vac.gamma());
    CovMatrix three = thermal_scale(vac, 3.0);
    EXPECT_NEAR(three.gamma()(0, 0), 1.5, 1e-15);
    EXPECT_EQ(three.kappa(), 3.0);
    std::mt19937_64 rng(2);
    CovMatrix c = covariance_from_graph(random_graph(rng, 4));
    EXPECT_LT(max_abs(thermal_scale(thermal_scale(c, 2.0), 2.0).gamma() - thermal_scale(c, 4.0).gamma()),
              1e-14);
    EXPECT_EQ(thermal_scale(thermal_scale(c, 2.0), 2.0).kappa(), 4.0);
    EXPECT_THROW(thermal_scale(c, 0.5), DomainError);
}

// ---------------------------------------------------------------- negativity

TEST(LogNegativity, VacuaAndFullRegionGiveZero) {
    CovMatrix vac = covariance_from_graph(GaussGraph(Mat::Zero(4, 4), Mat::Identity(4, 4)));
    EXPECT_NEAR(log_negativity(vac, {0, 2}), 0.0, 1e-14);
    EXPECT_NEAR(log_negativity(vac, {0, 2}, SpectrumMethod::direct), 0.0, 1e-14);
    CovMatrix frag = two_mode_fragment(M_E);
    EXPECT_NEAR(log_negativity(frag, {0, 1}), 0.0, 1e-12);
    EXPECT_NEAR(log_negativity(frag, {0, 1}, SpectrumMethod::direct), 0.0, 1e-12);
}

TEST(LogNegativity, TwoModeFragmentMatchesPartialTransposeOracle) {
    CovMatrix c = two_mode_fragment(M_E);
    // Partial transpose flips p on mode 0.
    Mat flip = Mat::Identity(4, 4);
    flip(2, 2) = -1.0;
    auto nu = brute_symplectic(flip * c.gamma() * flip);
    double oracle = 0.0;
    for (double v : nu) {
        if (2.0 * v < 1.0) oracle -= std::log2(2.0 * v);
    }
    EXPECT_GT(oracle, 0.0);
    EXPECT_NEAR(log_negativity(c, {0}), oracle, 1e-10);
    EXPECT_NEAR(log_negativity(c, {0}, SpectrumMethod::direct), oracle, 1e-10);
}

TEST(LogNegativity, EqualsRenyiHalfEntropyForPureStates) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + trial % 10;
        CovMatrix c = covariance_from_graph(random_graph(rng, n, false));
        auto region = random_region(rng, n);
        double renyi = 0.0;
        SymplecticSpectrum spec = symplectic_spectrum(c, region);
        for (double sigma : spec.values()) {
            renyi -= 2.0 * std::log2(std::sqrt(sigma + 0.5) - std::sqrt(std::max(sigma - 0.5, 0.0)));
        }
        EXPECT_NEAR(log_negativity(c, region), renyi, 1e-8);
        EXPECT_NEAR(log_negativity(c, region, SpectrumMethod::direct), renyi, 1e-8);
    }
}

TEST(LogNegativity, ComplementSymmetryForPureStates) {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + trial % 10;
        CovMatrix c = covariance_from_graph(random_graph(rng, n, false));
        auto region = random_region(rng, n);
        EXPECT_NEAR(log_negativity(c, region), log_negativity(c, complement(region, n)), 1e-9);
    }
}

TEST(LogNegativity, ThermalStateUsesDenseRoute) {
    CovMatrix c = two_mode_fragment(2.0);
    CovMatrix hot = thermal_scale(c, 1.5);
    EXPECT_NEAR(log_negativity(hot, {0}), log_negativity(hot, {0}, SpectrumMethod::direct), 1e-14);
    EXPECT_LT(log_negativity(hot, {0}), log_negativity(c, {0}));
}

TEST(LogNegativity, RejectsNonBlockDiagonalStates) {
    CovMatrix c = covariance_from_graph(two_mode_cluster(1.0));
    EXPECT_THROW(log_negativity(c, {0}), UnsupportedStateError);
}

// ---------------------------------------------------------------- measurements

TEST(Measurement, QDeletesRowAndColumn) {
    const double s = 1.7;
    GaussGraph g = measure_q(two_mode_cluster(s), 1);
    ASSERT_EQ(g.n_modes(), 1);
    EXPECT_EQ(g.v()(0, 0), 0.0);
    EXPECT_NEAR(g.u()(0, 0), 1.0 / (s * s), 1e-15);
    EXPECT_EQ(measure_q(single(0.0, 2.0), 0).n_modes(), 0);
    EXPECT_THROW(measure_q(single(0.0, 2.0), 1), DomainError);
}

TEST(Measurement, QOnChainMiddleDisconnects) {
    LatticeSpec spec = make_spec(1, 3, Boundary::planar, 0.4);
    GaussGraph g = measure_q(cluster_graph(spec), 1);
    ASSERT_EQ(g.n_modes(), 2);
    EXPECT_EQ(g.v()(0, 1), 0.0);
    EXPECT_EQ(g.u()(0, 1), 0.0);
    CovMatrix c = covariance_from_graph(g);
    EXPECT_NEAR(entropy(c, {0}, {SpectrumMethod::direct}), 0.0, 1e-12);
}

TEST(Measurement, PSchurComplementOnTwoModeCluster) {
    const double s = 1.3;
    GaussGraph g = measure_p(two_mode_cluster(s), 1);
    ASSERT_EQ(g.n_modes(), 1);
    EXPECT_NEAR(g.v()(0, 0), 0.0, 1e-14);
    EXPECT_NEAR(g.u()(0, 0), s * s + 1.0 / (s * s), 1e-12);
}

TEST(Measurement, PIsolatedModeLeavesRestUnchanged) {
    std::mt19937_64 rng(7);
    GaussGraph base = random_graph(rng, 3);
    Mat v = Mat::Zero(4, 4), u = Mat::Zero(4, 4);
    v.topLeftCorner(3, 3) = base.v();
    u.topLeftCorner(3, 3) = base.u();
    u(3, 3) = 0.7;
    v(3, 3) = 0.2;
    GaussGraph g = measure_p(GaussGraph(v, u), 3);
    EXPECT_EQ(max_abs(g.v() - base.v()), 0.0);
    EXPECT_EQ(max_abs(g.u() - base.u()), 0.0);
}

TEST(Measurement, PSingularPivot) {
    Mat u = Mat::Identity(2, 2);
    u(1, 1) = 1e-16;
    EXPECT_THROW(measure_p(GaussGraph(Mat::Zero(2, 2), u), 1), SingularPivotError);
}

TEST(Measurement, PEqualsPhaseShiftThenQOnRandomGraphs) {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 12;
        GaussGraph g = random_graph(rng, n, trial % 4 != 0);
        int node = std::uniform_int_distribution<int>(0, n - 1)(rng);
        GaussGraph direct = measure_p(g, node);
        auto y = phase_shift(n, node);
        GaussGraph oracle = measure_q(apply_symplectic(g, y.a, y.b, y.c, y.d), node);
        ASSERT_EQ(direct.n_modes(), oracle.n_modes());
        EXPECT_LT(max_abs(direct.z() - oracle.z()), 1e-9) << "trial " << trial;
    }
}

TEST(Measurement, OrderIndependence) {
    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 4 + trial % 8;
        GaussGraph g = random_graph(rng, n);
        std::vector<int> order = all_modes(n);
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<int> p_nodes(order.begin(), order.begin() + 2);
        std::vector<int> q_nodes(order.begin() + 2, order.begin() + 3);
        GaussGraph batch = measure_many(g, p_nodes, q_nodes);

        // Sequential p then q, tracking how indices shift after each deletion.
        auto run = [&](std::vector<std::pair<int, bool>> steps) {
            GaussGraph cur = g;
            std::vector<int> alive = all_modes(n);
            for (auto [node, is_p] : steps) {
                int pos = static_cast<int>(std::find(alive.begin(), alive.end(), node) - alive.begin());
                cur = is_p ? measure_p(cur, pos) : measure_q(cur, pos);
                alive.erase(alive.begin() + pos);
            }
            return cur;
        };
        GaussGraph a = run({{p_nodes[0], true}, {p_nodes[1], true}, {q_nodes[0], false}});
        GaussGraph b = run({{q_nodes[0], false}, {p_nodes[1], true}, {p_nodes[0], true}});
        EXPECT_LT(max_abs(a.z() - b.z()), 1e-10);
        EXPECT_LT(max_abs(a.z() - batch.z()), 1e-10);
    }
}

TEST(Measurement, OverlappingSetsRejected) {
    std::mt19937_64 rng(1);
    GaussGraph g = random_graph(rng, 4);
    EXPECT_THROW(measure_many(g, {1}, {1}), DomainError);
    EXPECT_THROW(measure_many(g, {4}, {}), DomainError);
}

// ---------------------------------------------------------------- symplectic maps

TEST(Symplectic, IdentityLeavesGraphUnchanged) {
    std::mt19937_64 rng(9);
    GaussGraph g = random_graph(rng, 5);
    Mat id = Mat::Identity(5, 5), zero = Mat::Zero(5, 5);
    EXPECT_LT(max_abs(apply_symplectic(g, id, zero, zero, id).z() - g.z()), 1e-14);
}

TEST(Symplectic, FourierTwiceIsParity) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        GaussGraph g = random_graph(rng, 1);
        auto y = phase_shift(1, 0);
        GaussGraph once = apply_symplectic(g, y.a, y.b, y.c, y.d);
        GaussGraph twice = apply_symplectic(once, y.a, y.b, y.c, y.d);
        EXPECT_LT(max_abs(twice.z() - g.z()), 1e-12);
        EXPECT_LT(std::abs(once.z()(0, 0) + 1.0 / g.z()(0, 0)), 1e-12);
    }
}

TEST(Symplectic, NonSymplecticBlocksRejected) {
    GaussGraph g = single(0.0, 1.0);
    Mat two = Mat::Constant(1, 1, 2.0), zero = Mat::Zero(1, 1);
    EXPECT_THROW(apply_symplectic(g, two, zero, zero, two), DomainError);
}

TEST(Symplectic, SqueezeMapsWeightedGraphToCanonical) {
    LatticeSpec spec = make_spec(3, 3, Boundary::planar, 0.0);
    Mat adj = cluster_adjacency(spec);
    const double weight = 0.2, eps = 0.05;
    GaussGraph weighted(weight * adj, eps * Mat::Identity(9, 9));
    RescaledGraph r = rescale_gauge(weighted, weight, eps);
    EXPECT_NEAR(r.effective_s, 2.0, 1e-14);
    EXPECT_LT(max_abs(r.graph.v() - adj), 1e-12);
    EXPECT_LT(max_abs(r.graph.u() - (eps / weight) * Mat::Identity(9, 9)), 1e-12);
}
