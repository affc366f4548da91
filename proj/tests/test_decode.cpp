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

#include "surfdec/decode.hpp"
#include "surfdec/dense.hpp"
#include "surfdec/isotns.hpp"
#include "test_util.hpp"

namespace surfdec {
namespace {

using testing::kPi;

Syndrome sampled(const Lattice &lat, const ErrorModel &m, std::uint64_t k) {
    return sample_syndrome(apply_errors(build_isotns(lat), m), SamplerOptions{4096, 1e-14}, RngKey{51, k}).syndrome;
}

// |<a|b>|^2 / (|a|^2 |b|^2) for coefficient pairs.
double overlap2(const std::array<cplx, 2> &a, const std::array<cplx, 2> &b) {
    cplx ip = std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
    double na = std::norm(a[0]) + std::norm(a[1]), nb = std::norm(b[0]) + std::norm(b[1]);
    return std::norm(ip) / (na * nb);
}

ClassAmplitudes from_values(ModelKind kind, std::vector<cplx> z) {
    ClassAmplitudes a;
    a.kind = kind;
    for (cplx v : z) {
        a.log_z.push_back(v == 0.0 ? cplx(-INFINITY, 0) : std::log(v));
    }
    return a;
}

TEST(Decode, NoErrorsGiveSentinelAndUnitFidelity) {
    Lattice lat(3, 3);
    for (ErrorModel m : {ErrorModel::x_only(0), ErrorModel::x_xx(0, 0), ErrorModel::general(0, 0, {0, 1, 0})}) {
        ClassAmplitudes amps = class_amplitudes(m, lat, Syndrome::trivial(lat), 16);
        ASSERT_EQ(amps.num_classes(), m.num_classes());
        DecodeResult d = decode(amps, LogicalInit::ZERO);
        EXPECT_EQ(d.chosen_class, 0);
        EXPECT_TRUE(d.fe.capped);
        EXPECT_EQ(d.fe.dF_X, kFreeEnergySentinel);
        EXPECT_EQ(d.success_prob_contrib, 1.0);
        EXPECT_NEAR(std::abs(d.post_coeffs[0]), 1, 1e-14);
        EXPECT_EQ(std::abs(d.post_coeffs[1]), 0.0);
        EXPECT_EQ(d.steady_S, 0.0);
    }
}

TEST(Decode, AmplitudesMatchDenseOracle) {
    std::mt19937_64 rng(52);
    for (auto [lx, ly] : {std::pair{2, 2}, {3, 2}}) {
        Lattice lat(lx, ly);
        for (ModelKind kind : testing::kAllModels) {
            for (std::uint64_t k = 0; k < 4; k++) {
                ErrorModel m = testing::random_model(kind, rng);
                OracleCheck oc = oracle_check(m, lat, sampled(lat, m, k), 4096, 0.0);
                EXPECT_LT(oc.max_rel_err, 1e-9) << model_name(kind);
                EXPECT_LT(oc.p_rel_err, 1e-9) << model_name(kind);
            }
        }
    }
}

TEST(Decode, FreeEnergiesMatchOracleAmplitudes) {
    std::mt19937_64 rng(53);
    Lattice lat(2, 2);
    for (ModelKind kind : testing::kAllModels) {
        ErrorModel m = testing::random_model(kind, rng);
        Syndrome s = sampled(lat, m, 0);
        ClassAmplitudes amps = class_amplitudes(m, lat, s, 4096, 0.0);
        auto z = exact_class_amplitudes(lat, m, s, amps.rx, amps.rz);
        FreeEnergies fe = defect_free_energies(amps);
        if (kind != ModelKind::GENERAL_XX) {
            EXPECT_NEAR(fe.dF, std::abs(std::log(z[1] / z[0])), 1e-8);
            EXPECT_NEAR(fe.dF_re, std::log(std::abs(z[0] / z[1])), 1e-8);
            EXPECT_EQ(fe.dF, fe.dF_X);
            continue;
        }
        int ref = 0;
        for (int c = 1; c < 4; c++) {
            if (std::abs(z[c]) > std::abs(z[ref])) {
                ref = c;
            }
        }
        int a0 = ref / 2, b0 = ref % 2;
        EXPECT_EQ(fe.reference_class, ref);
        EXPECT_NEAR(fe.dF_X, std::abs(std::log(z[2 * (1 - a0) + b0] / z[ref])), 1e-8);
        EXPECT_NEAR(fe.dF_Z, std::abs(std::log(z[2 * a0 + 1 - b0] / z[ref])), 1e-8);
    }
}

TEST(Decode, FreeEnergyEdgeCases) {
    // equal moduli: only the phase is left
    FreeEnergies fe = defect_free_energies(from_values(ModelKind::X_ONLY, {1.0, cplx(0, 1)}));
    EXPECT_NEAR(fe.dF, kPi / 2, 1e-14);
    EXPECT_NEAR(fe.dF_re, 0, 1e-14);
    // one class vanishes
    fe = defect_free_energies(from_values(ModelKind::X_ONLY, {0.0, 0.5}));
    EXPECT_TRUE(fe.capped);
    EXPECT_EQ(fe.reference_class, 1);
    EXPECT_EQ(fe.dF, kFreeEnergySentinel);
    // nothing left
    fe = defect_free_energies(from_values(ModelKind::X_ONLY, {0.0, 0.0}));
    EXPECT_TRUE(fe.degenerate);
    DecodeResult d = decode(from_values(ModelKind::X_ONLY, {0.0, 0.0}), LogicalInit::ZERO);
    EXPECT_EQ(d.success_prob_contrib, 0.5);
    EXPECT_TRUE(std::isnan(d.post_coeffs[0].real()));
    // ties go to the lower class index
    EXPECT_EQ(decode(from_values(ModelKind::X_ONLY, {1.0, -1.0}), LogicalInit::ZERO).chosen_class, 0);
    EXPECT_THROW(defect_free_energies(from_values(ModelKind::X_ONLY, {1.0, 1.0, 1.0})), std::invalid_argument);
}

TEST(Decode, PostCorrectionMatchesDenseState) {
    std::mt19937_64 rng(54);
    Lattice lat(2, 2);
    for (ModelKind kind : testing::kAllModels) {
        ErrorModel m = testing::random_model(kind, rng);
        for (std::uint64_t k = 0; k < 4; k++) {
            Syndrome s = sampled(lat, m, k);
            ClassAmplitudes amps = class_amplitudes(m, lat, s, 4096, 0.0);
            std::vector<LogicalInit> inits{LogicalInit::ZERO};
            if (kind == ModelKind::GENERAL_XX) {
                inits.push_back(LogicalInit::PLUS);
            }
            for (LogicalInit init : inits) {
                StateVector psi = exact_corrupt(exact_logical_state(lat, init), lat, m);
                auto want = exact_logical_coefficients(psi, lat, s, amps.rx, amps.rz, init);
                auto got = post_correction_coeffs(amps, init);
                EXPECT_NEAR(std::norm(got[0]) + std::norm(got[1]), 1, 1e-12);
                EXPECT_GT(overlap2(got, want), 1 - 1e-8) << model_name(kind);
            }
            if (kind != ModelKind::GENERAL_XX) {
                // |c_flip / c_keep| = exp(-Re dF') with dF' = -log(Z1 / Z0)
                auto c = post_correction_coeffs(amps, LogicalInit::ZERO);
                double dfp = -(amps.log_z[1] - amps.log_z[0]).real();
                EXPECT_NEAR(std::abs(c[1] / c[0]), std::exp(-dfp), 1e-10);
            }
        }
    }
}

TEST(Decode, SampledFidelityMatchesEnumeration) {
    Lattice lat(2, 2);
    ErrorModel m = ErrorModel::x_only(0.1 * kPi);
    // Syndromes follow the Born rule of the corrupted |+> state; each contributes max |Z_a|^2 / sum |Z_a|^2.
    auto dist = exact_syndrome_distribution(exact_corrupt(exact_logical_state(lat, LogicalInit::PLUS), lat, m), lat);
    double want = 0;
    for (const auto &[s, p] : dist) {
        StraightGauge g = straight_gauge(lat, s);
        auto z = exact_class_amplitudes(lat, m, s, g.rx, g.rz);
        double a = std::norm(z[0]), b = std::norm(z[1]);
        want += p * std::max(a, b) / (a + b);
    }
    IsoTns tns = apply_errors(build_isotns(lat), m);
    std::vector<DecodeResult> runs;
    for (std::uint64_t k = 0; k < 3000; k++) {
        Syndrome s = sample_syndrome(tns, SamplerOptions{}, RngKey{55, k}).syndrome;
        runs.push_back(decode(class_amplitudes(m, lat, s, 64), LogicalInit::PLUS));
    }
    Estimate e = fidelity_estimate(runs);
    EXPECT_GT(e.stderr_, 0);
    EXPECT_NEAR(e.mean, want, 3 * e.stderr_);
    EXPECT_THROW(fidelity_estimate({}), std::invalid_argument);
}

TEST(Decode, TruncationConverges) {
    Lattice lat(4, 8);
    ErrorModel m = ErrorModel::x_xx(0.1 * kPi, 0.2 * kPi);
    Syndrome s = sampled(lat, m, 3);
    double prev_disc = INFINITY;
    cplx last{};
    for (std::size_t chi : {2, 4, 8, 64}) {
        ClassAmplitudes a = class_amplitudes(m, lat, s, chi);
        double disc = a.traces[0].max_discarded;
        EXPECT_LE(disc, prev_disc + 1e-15) << "chi " << chi;
        prev_disc = disc;
        last = a.log_z[0];
        EXPECT_LE(a.traces[0].max_bond, chi);
    }
    ClassAmplitudes big = class_amplitudes(m, lat, s, 256);
    EXPECT_NEAR(std::abs(big.log_z[0] - last), 0, 1e-8);
}

TEST(Decode, RejectsBadModel) {
    Lattice lat(2, 2);
    EXPECT_THROW(class_amplitudes(ErrorModel::x_only(NAN), lat, Syndrome::trivial(lat), 8), std::invalid_argument);
}

}  // namespace
}  // namespace surfdec
