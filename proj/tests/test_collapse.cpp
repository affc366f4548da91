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

#include <cmath>
#include <random>

#include "surfdec/collapse.hpp"

namespace surfdec {
namespace {

std::vector<FssPoint> planted(double tc, double nu, double noise, std::uint64_t seed,
                              std::vector<int> sizes = {8, 12, 16, 24}) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0, 1);
    std::vector<FssPoint> out;
    for (int l : sizes) {
        for (int i = 0; i <= 12; i++) {
            double t = 0.2 + 0.2 * i / 12;
            double y = 3 + 2 * std::tanh(-1.5 * (t - tc) * std::pow(l, 1 / nu));
            out.push_back({t, l, y * (1 + noise * g(rng)), std::max(noise, 1e-3) * y});
        }
    }
    return out;
}

TEST(Collapse, RecoversPlantedParameters) {
    for (auto [tc, nu] : {std::pair{0.3, 2.0}, {0.27, 1.3}}) {
        auto data = planted(tc, nu, 0.01, 11);
        CollapseFit f = collapse_fit(data, SearchBox{0.2, 0.4, 0.5, 5, 41});
        EXPECT_NEAR(f.theta_c, tc, 0.01);
        EXPECT_NEAR(f.nu, nu, 0.15 * nu);
        EXPECT_FALSE(f.on_boundary);
        EXPECT_GT(f.pairs, 0);
        EXPECT_EQ(f.grid.size(), 41u * 41u);
    }
}

TEST(Collapse, PerfectDataCollapsesExactly) {
    // Unweighted, so the residual is a plain mean square; what is left is the interpolation error.
    auto data = planted(0.3, 2.0, 0.0, 12);
    for (auto &p : data) {
        p.sigma = 0;
    }
    EXPECT_LT(collapse_residual(data, 0.3, 2.0), 1e-3);
    EXPECT_GT(collapse_residual(data, 0.25, 2.0), 100 * collapse_residual(data, 0.3, 2.0));
    EXPECT_THROW(collapse_residual(data, 0.3, -1.0), std::invalid_argument);
}

TEST(Collapse, SizeIndependentDataLeavesNuUndetermined) {
    // Curves that do not depend on L collapse at theta_c only if nu -> infinity; the fit must say so.
    std::vector<FssPoint> data;
    for (int l : {8, 16, 32}) {
        for (int i = 0; i <= 12; i++) {
            double t = 0.2 + 0.2 * i / 12;
            data.push_back({t, l, 1 + t * t, 0.01});
        }
    }
    CollapseFit f = collapse_fit(data, SearchBox{0.2, 0.4, 0.5, 5, 21});
    EXPECT_TRUE(f.nu_unidentifiable);
}

TEST(Collapse, RejectsTooLittleData) {
    auto one = planted(0.3, 2.0, 0.0, 13, {8});
    EXPECT_THROW(collapse_fit(one, SearchBox{}), std::invalid_argument);
    EXPECT_THROW(crossing_estimate(one), std::invalid_argument);
    auto data = planted(0.3, 2.0, 0.0, 13);
    EXPECT_THROW(collapse_fit(data, SearchBox{0.4, 0.2, 0.5, 5, 11}), std::invalid_argument);
}

TEST(Crossing, PlantedCurvesCrossAtThetaC) {
    auto data = planted(0.3, 2.0, 0.0, 14);
    auto cs = crossing_estimate(data);
    ASSERT_EQ(cs.size(), 6u);
    for (const auto &c : cs) {
        EXPECT_TRUE(c.found);
        EXPECT_EQ(c.count, 1);
        // linear interpolation between grid points of spacing 1/60
        EXPECT_NEAR(c.theta, 0.3, 2e-3) << c.size_a << " vs " << c.size_b;
    }
}

TEST(Crossing, ParallelCurvesNeverCross) {
    std::vector<FssPoint> data;
    for (int l : {4, 8}) {
        for (int i = 0; i < 6; i++) {
            data.push_back({0.1 * i, l, 0.5 * i + l, 0.1});
        }
    }
    auto cs = crossing_estimate(data);
    ASSERT_EQ(cs.size(), 1u);
    EXPECT_FALSE(cs[0].found);
    EXPECT_EQ(cs[0].count, 0);
}

}  // namespace
}  // namespace surfdec
