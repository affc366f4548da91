// Copyright 2026 The surfdec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <set>

#include "surfdec/dense.hpp"
#include "surfdec/lattice.hpp"
#include "test_util.hpp"

namespace surfdec {
namespace {

using testing::kPi;

TEST(Lattice, Counts) {
    for (auto [lx, ly] : {std::pair{2, 1}, {3, 2}, {4, 16}}) {
        Lattice lat(lx, ly);
        EXPECT_EQ(lat.num_qubits(), lx * (ly + 1) + ly * (lx - 1));
        EXPECT_EQ(lat.num_plaquettes(), lx * ly);
        EXPECT_EQ(lat.num_stars(), (lx - 1) * (ly + 1));
        // one logical qubit: N - (independent generators) = 1
        EXPECT_EQ(lat.num_qubits() - lat.num_plaquettes() - lat.num_stars(), 1);
    }
    EXPECT_THROW(Lattice(1, 2), std::invalid_argument);
}

TEST(Lattice, IndexFormulas) {
    Lattice lat(3, 2);
    EXPECT_EQ(lat.h(0, 0), 0);
    EXPECT_EQ(lat.h(2, 1), 7);
    EXPECT_EQ(lat.v(0, 1), 9);
    EXPECT_EQ(lat.v(1, 2), 12);
    std::set<int> seen;
    for (int q = 0; q < lat.num_qubits(); q++) {
        auto [a, b] = lat.coords(q);
        EXPECT_EQ(lat.is_horizontal(q) ? lat.h(a, b) : lat.v(a, b), q);
        seen.insert(q);
    }
    EXPECT_EQ((int)seen.size(), lat.num_qubits());
}

TEST(Lattice, SupportsHaveExpectedWeight) {
    Lattice lat(3, 3);
    EXPECT_EQ(lat.plaquette_support(1, 1).size(), 4u);
    EXPECT_EQ(lat.plaquette_support(1, 0).size(), 3u);  // rough side
    EXPECT_EQ(lat.star_support(0, 1).size(), 3u);       // smooth side
    EXPECT_EQ(lat.star_support(1, 1).size(), 4u);
}

TEST(Stabilizers, CommuteAndHaveFullRank) {
    for (auto [lx, ly] : {std::pair{2, 1}, {3, 2}, {4, 3}}) {
        Lattice lat(lx, ly);
        auto g = stabilizers(lat);
        ASSERT_EQ((int)g.size(), lat.num_plaquettes() + lat.num_stars());
        for (std::size_t a = 0; a < g.size(); a++) {
            for (std::size_t b = a + 1; b < g.size(); b++) {
                EXPECT_TRUE(commutes(g[a], g[b]));
            }
        }
        EXPECT_EQ(symplectic_rank(g), (int)g.size());
        Logicals lg = logicals(lat);
        for (const auto &s : g) {
            EXPECT_TRUE(commutes(s, lg.x_bar));
            EXPECT_TRUE(commutes(s, lg.z_bar));
        }
        EXPECT_FALSE(commutes(lg.x_bar, lg.z_bar));
        // logicals are not in the stabilizer group
        auto with = g;
        with.push_back(lg.x_bar);
        EXPECT_EQ(symplectic_rank(with), (int)g.size() + 1);
    }
}

TEST(Syndrome, HexRoundTripAndErrors) {
    Lattice lat(3, 2);
    Syndrome s = Syndrome::trivial(lat);
    EXPECT_TRUE(s.is_trivial());
    s.plaquette_bits[4] = 1;
    s.star_bits[5] = 1;
    EXPECT_EQ(Syndrome::from_hex(lat, s.to_hex()), s);
    // single X on an interior vertical edge flips its two plaquettes
    PauliString e = pauli_x(lat.num_qubits(), {lat.v(0, 1)});
    Syndrome t = syndrome_of(lat, e);
    EXPECT_EQ(t.plaquette_bits[lat.plaquette_index(0, 0)], 1);
    EXPECT_EQ(t.plaquette_bits[lat.plaquette_index(0, 1)], 1);
    int flips = 0;
    for (auto b : t.plaquette_bits) {
        flips += b;
    }
    EXPECT_EQ(flips, 2);
    for (auto b : t.star_bits) {
        EXPECT_EQ(b, 0);
    }
    EXPECT_THROW(Syndrome::from_hex(lat, "zz"), std::invalid_argument);
}

TEST(ErrorModel, PauliCoefficientsMatchMatrix) {
    std::mt19937_64 rng(21);
    for (int k = 0; k < 5; k++) {
        auto n = testing::random_axis(rng);
        ErrorModel m = ErrorModel::general(0.3 + 0.1 * k, 0.1, n);
        Eigen::Matrix2cd X, Y, Z, I = Eigen::Matrix2cd::Identity();
        X << 0, 1, 1, 0;
        Y << 0, cplx(0, -1), cplx(0, 1), 0;
        Z << 1, 0, 0, -1;
        Eigen::Matrix2cd u = std::cos(m.theta) * I + cplx(0, std::sin(m.theta)) * (n[0] * X + n[1] * Y + n[2] * Z);
        for (int x = 0; x < 2; x++) {
            for (int z = 0; z < 2; z++) {
                Eigen::Matrix2cd p = (x ? X : I) * (z ? Z : I);
                cplx want = (p.adjoint() * u).trace() / 2.0;
                EXPECT_NEAR(std::abs(m.pauli_coefficient(x, z) - want), 0, 1e-14);
            }
        }
    }
}

TEST(ErrorModel, Validation) {
    EXPECT_TRUE(ErrorModel::x_xx(0.1, 0.2).validate());
    EXPECT_FALSE(ErrorModel::x_only(1.0).validate());  // outside [0, pi/4]: warning, not an error
    EXPECT_THROW(ErrorModel::general(0.1, 0.1, {1, 1, 0}).validate(), std::invalid_argument);
    EXPECT_THROW(ErrorModel::x_only(NAN).validate(), std::invalid_argument);
    ErrorModel g = ErrorModel::general_from_xy(0.2 * kPi, 0.06 * kPi, 0.2 * kPi);
    EXPECT_NEAR(g.theta, std::hypot(0.2, 0.06) * kPi, 1e-14);
    EXPECT_NEAR(g.n[0] * g.n[0] + g.n[1] * g.n[1], 1, 1e-14);
    EXPECT_EQ(parse_model("x-xx"), ModelKind::X_XX);
    EXPECT_STREQ(model_name(ModelKind::GENERAL_XX), "xyz-xx");
    EXPECT_THROW(parse_model("y"), std::invalid_argument);
}

TEST(Dense, LogicalStatesAreStabilized) {
    Lattice lat(3, 2);
    for (LogicalInit init : {LogicalInit::ZERO, LogicalInit::PLUS}) {
        StateVector psi = exact_logical_state(lat, init);
        EXPECT_NEAR(norm(psi), 1, 1e-12);
        for (const auto &s : stabilizers(lat)) {
            EXPECT_NEAR(std::abs(pauli_expectation(psi, s) - 1.0), 0, 1e-12);
        }
        Logicals lg = logicals(lat);
        const PauliString &l = init == LogicalInit::ZERO ? lg.z_bar : lg.x_bar;
        EXPECT_NEAR(std::abs(pauli_expectation(psi, l) - 1.0), 0, 1e-12);
    }
}

TEST(Dense, CorruptionIsUnitary) {
    Lattice lat(2, 2);
    std::mt19937_64 rng(22);
    for (ModelKind kind : testing::kAllModels) {
        ErrorModel m = testing::random_model(kind, rng);
        StateVector psi = exact_corrupt(exact_logical_state(lat, LogicalInit::PLUS), lat, m);
        EXPECT_NEAR(norm(psi), 1, 1e-12);
    }
}

TEST(Dense, SingleQubitRotationAgainstClosedForm) {
    // X rotations on the 2x1 code. Overlap with the start picks up the identity and the
    // three star-group elements (two weight-3 stars and their weight-4 product).
    Lattice lat(2, 1);
    ASSERT_EQ(lat.num_qubits(), 5);
    double t = 0.2, c = std::cos(t), s = std::sin(t);
    StateVector zero = exact_logical_state(lat, LogicalInit::ZERO);
    StateVector psi = exact_corrupt(zero, lat, ErrorModel::x_only(t));
    cplx want = std::pow(c, 5) + 2.0 * std::pow(c, 2) * std::pow(cplx(0, s), 3) + c * std::pow(s, 4);
    EXPECT_NEAR(std::abs(inner(zero, psi) - want), 0, 1e-14);
}

TEST(Dense, SyndromeDistributionSumsToOne) {
    Lattice lat(2, 2);
    std::mt19937_64 rng(23);
    for (ModelKind kind : testing::kAllModels) {
        ErrorModel m = testing::random_model(kind, rng);
        auto dist = exact_syndrome_distribution(exact_corrupt(exact_logical_state(lat, LogicalInit::PLUS), lat, m), lat);
        double total = 0;
        for (const auto &[s, p] : dist) {
            EXPECT_GE(p, 0);
            total += p;
            if (kind != ModelKind::GENERAL_XX) {
                for (auto b : s.star_bits) {
                    EXPECT_EQ(b, 0);
                }
            }
        }
        EXPECT_NEAR(total, 1, 1e-12);
    }
    auto trivial = exact_syndrome_distribution(exact_logical_state(lat, LogicalInit::PLUS), lat);
    ASSERT_EQ(trivial.size(), 1u);
    EXPECT_TRUE(trivial.begin()->first.is_trivial());
}

TEST(Dense, ProjectionIsIdempotent) {
    Lattice lat(2, 2);
    StateVector psi = exact_corrupt(exact_logical_state(lat, LogicalInit::PLUS), lat,
                                    ErrorModel::general(0.3, 0.2, {0.6, 0, 0.8}));
    auto dist = exact_syndrome_distribution(psi, lat);
    const Syndrome &s = dist.begin()->first;
    StateVector once = project_syndrome(psi, lat, s);
    StateVector twice = project_syndrome(once, lat, s);
    EXPECT_NEAR(std::pow(norm(once), 2), dist.begin()->second, 1e-12);
    double d = 0;
    for (std::size_t i = 0; i < once.size(); i++) {
        d = std::max(d, std::abs(once[i] - twice[i]));
    }
    EXPECT_LT(d, 1e-14);
}

TEST(Dense, GuardsLargeLattices) {
    Lattice big(5, 5);
    EXPECT_THROW(exact_logical_state(big, LogicalInit::ZERO), std::length_error);
}

}  // namespace
}  // namespace surfdec
