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

#include <map>

#include "surfdec/dense.hpp"
#include "surfdec/isotns.hpp"
#include "test_util.hpp"

namespace surfdec {
namespace {

using testing::kPi;

double fidelity(const StateVector &a, const StateVector &b) {
    return std::norm(inner(a, b)) / (std::pow(norm(a), 2) * std::pow(norm(b), 2));
}

TEST(IsoTns, RolesAreIsometricWithDeclaredLegs) {
    for (TensorRole r : kAllRoles) {
        Tensor t = role_tensor(r);
        ASSERT_EQ(t.rank(), 5u) << role_name(r);
        EXPECT_EQ(t.shape()[0], 2u);
        auto legs = role_legs(r);
        for (int k = 0; k < 4; k++) {
            EXPECT_EQ(t.shape()[(std::size_t)k + 1], legs[(std::size_t)k] ? 2u : 1u) << role_name(r) << " leg " << k;
        }
        EXPECT_LT(isometry_error(t), 1e-12) << role_name(r);
    }
}

TEST(IsoTns, ContractsToLogicalPlus) {
    for (auto [lx, ly] : {std::pair{2, 1}, {2, 2}, {3, 2}, {3, 3}}) {
        Lattice lat(lx, ly);
        StateVector a = contract_dense(build_isotns(lat));
        StateVector b = exact_logical_state(lat, LogicalInit::PLUS);
        EXPECT_NEAR(norm(a), 1, 1e-12) << lx << "x" << ly;
        EXPECT_GT(fidelity(a, b), 1 - 1e-12) << lx << "x" << ly;
    }
}

TEST(IsoTns, ErrorsMatchDenseCorruption) {
    std::mt19937_64 rng(31);
    Lattice lat(3, 2);
    for (ModelKind kind : testing::kAllModels) {
        ErrorModel m = testing::random_model(kind, rng);
        StateVector a = contract_dense(apply_errors(build_isotns(lat), m));
        StateVector b = exact_corrupt(exact_logical_state(lat, LogicalInit::PLUS), lat, m);
        EXPECT_GT(fidelity(a, b), 1 - 1e-12) << model_name(kind);
    }
}

// Single-qubit projector onto outcome k of qubit q in the given basis; qubit 0 is the most significant bit.
StateVector project_qubit(const StateVector &psi, int n, int q, RetireBasis basis, int k) {
    StateVector out(psi.size());
    std::size_t bit = std::size_t{1} << (n - 1 - q);
    for (std::size_t i = 0; i < psi.size(); i++) {
        if (i & bit) {
            continue;
        }
        cplx a0 = psi[i], a1 = psi[i | bit];
        if (basis == RetireBasis::Z) {
            out[i] = k == 0 ? a0 : 0;
            out[i | bit] = k == 1 ? a1 : 0;
        } else {
            cplx c = (a0 + (k == 0 ? 1.0 : -1.0) * a1) / 2.0;
            out[i] = c;
            out[i | bit] = (k == 0 ? 1.0 : -1.0) * c;
        }
    }
    return out;
}

TEST(Sampler, BornFactorsAreExact) {
    // The joint weight of syndrome and retirement outcomes is exact in either basis. The stabilizer factors
    // alone give P(s) only when the retirement outcomes carry no information about later stabilizers: always
    // for X retirement, but not for Z retirement once the star outcomes are random.
    std::mt19937_64 rng(32);
    for (auto [lx, ly] : {std::pair{2, 2}, {3, 2}}) {
        Lattice lat(lx, ly);
        for (ModelKind kind : testing::kAllModels) {
            ErrorModel m = testing::random_model(kind, rng);
            StateVector psi = exact_corrupt(exact_logical_state(lat, LogicalInit::PLUS), lat, m);
            IsoTns tns = apply_errors(build_isotns(lat), m);
            for (RetireBasis basis : {RetireBasis::X, RetireBasis::Z}) {
                bool marginal_exact = basis == RetireBasis::X || kind != ModelKind::GENERAL_XX;
                for (std::uint64_t k = 0; k < 10; k++) {
                    SampleRecord r = sample_syndrome(tns, SamplerOptions{4096, 1e-14, basis}, RngKey{33, k});
                    StateVector ps = project_syndrome(psi, lat, r.syndrome);
                    double p = std::pow(norm(ps), 2);
                    ASSERT_GT(p, 0);
                    if (marginal_exact) {
                        EXPECT_NEAR(r.log_prob, std::log(p), 1e-10) << model_name(kind) << " " << lx << "x" << ly;
                    }
                    for (auto [q, o] : r.retired) {
                        ps = project_qubit(ps, lat.num_qubits(), q, basis, o);
                    }
                    EXPECT_NEAR(r.log_prob + r.log_prob_retired, 2 * std::log(norm(ps)), 1e-10)
                        << model_name(kind) << " " << lx << "x" << ly;
                }
            }
        }
    }
}

TEST(Sampler, TrivialWithoutErrors) {
    Lattice lat(4, 3);
    IsoTns tns = apply_errors(build_isotns(lat), ErrorModel::x_xx(0, 0));
    for (std::uint64_t k = 0; k < 5; k++) {
        SampleRecord r = sample_syndrome(tns, SamplerOptions{}, RngKey{34, k});
        EXPECT_TRUE(r.syndrome.is_trivial());
        EXPECT_EQ(r.log_prob, 0.0);
    }
}

TEST(Sampler, XModelsNeverFireStars) {
    Lattice lat(4, 3);
    for (ErrorModel m : {ErrorModel::x_only(0.2 * kPi), ErrorModel::x_xx(0.15 * kPi, 0.2 * kPi)}) {
        IsoTns tns = apply_errors(build_isotns(lat), m);
        for (std::uint64_t k = 0; k < 5; k++) {
            SampleRecord r = sample_syndrome(tns, SamplerOptions{}, RngKey{35, k});
            for (auto b : r.syndrome.star_bits) {
                EXPECT_EQ(b, 0);
            }
        }
    }
}

TEST(Sampler, DistributionMatchesExact) {
    Lattice lat(2, 1);
    ErrorModel m = ErrorModel::general(0.2 * kPi, 0.15 * kPi, {0.6, 0.8, 0});
    auto exact = exact_syndrome_distribution(exact_corrupt(exact_logical_state(lat, LogicalInit::PLUS), lat, m), lat);
    IsoTns tns = apply_errors(build_isotns(lat), m);
    const int n = 20000;
    std::map<Syndrome, int> counts;
    for (int k = 0; k < n; k++) {
        counts[sample_syndrome(tns, SamplerOptions{}, RngKey{36, (std::uint64_t)k}).syndrome]++;
    }
    double tvd = 0, floor = 0;
    for (const auto &[s, p] : exact) {
        double q = counts.count(s) ? (double)counts[s] / n : 0.0;
        tvd += std::abs(p - q) / 2;
        floor += std::sqrt(2 * p * (1 - p) / (kPi * n)) / 2;
        // each syndrome within 4 sigma of its binomial count
        EXPECT_NEAR(q, p, 4 * std::sqrt(p * (1 - p) / n) + 1e-12);
    }
    for (const auto &[s, c] : counts) {
        EXPECT_TRUE(exact.count(s)) << "sampled a zero-probability syndrome " << s.to_hex();
    }
    EXPECT_LT(tvd, 2 * floor);
}

TEST(Sampler, DeterministicPerKey) {
    Lattice lat(3, 3);
    IsoTns tns = apply_errors(build_isotns(lat), ErrorModel::general(0.2, 0.3, {0, 0.6, 0.8}));
    SampleRecord a = sample_syndrome(tns, SamplerOptions{}, RngKey{37, 5});
    SampleRecord b = sample_syndrome(tns, SamplerOptions{}, RngKey{37, 5});
    EXPECT_EQ(a.syndrome, b.syndrome);
    EXPECT_EQ(a.log_prob, b.log_prob);
    EXPECT_EQ(a.retired, b.retired);
}

TEST(Sampler, RejectsTinyBond) {
    Lattice lat(2, 1);
    IsoTns tns = build_isotns(lat);
    EXPECT_THROW(sample_syndrome(tns, SamplerOptions{1}, RngKey{}), std::invalid_argument);
}

}  // namespace
}  // namespace surfdec
