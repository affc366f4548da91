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

#include <functional>

#include "surfdec/mps.hpp"
#include "test_util.hpp"

namespace surfdec {
namespace {

using testing::max_abs_diff;
using testing::random_tensor;

// Dense vector over qubits, first site most significant.
using Vec = std::vector<cplx>;

std::size_t bit_of(std::size_t idx, std::size_t n, std::size_t site) {
    return (idx >> (n - 1 - site)) & 1;
}

// Applies an operator given entrywise as op(outs, ins) on the sites [first, first + k).
Vec apply_dense(const Vec &psi, std::size_t n, std::size_t first, std::size_t k,
                const std::function<cplx(std::size_t, std::size_t)> &op) {
    Vec out(psi.size());
    std::size_t shift = n - first - k, mask = ((1u << k) - 1) << shift;
    for (std::size_t idx = 0; idx < psi.size(); idx++) {
        std::size_t o = (idx & mask) >> shift;
        for (std::size_t in = 0; in < (1u << k); in++) {
            std::size_t src = (idx & ~mask) | (in << shift);
            out[idx] += op(o, in) * psi[src];
        }
    }
    return out;
}

// op(outs, ins) of an MPO by summing over its bonds.
cplx mpo_entry(const Mpo &m, std::size_t o, std::size_t in) {
    std::size_t k = m.sites.size();
    std::vector<cplx> vec{1};
    for (std::size_t s = 0; s < k; s++) {
        const Tensor &w = m.sites[s];
        std::size_t oi = (o >> (k - 1 - s)) & 1, ii = (in >> (k - 1 - s)) & 1;
        std::vector<cplx> next(w.extent(1));
        for (std::size_t a = 0; a < w.extent(0); a++) {
            for (std::size_t b = 0; b < w.extent(1); b++) {
                next[b] += vec[a] * w.at({a, b, oi, ii});
            }
        }
        vec = next;
    }
    return vec[0];
}

cplx dot(const Vec &a, const Vec &b) {
    cplx s = 0;
    for (std::size_t i = 0; i < a.size(); i++) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

// Random entangled state: product state followed by random two-site gates, tracked densely as well.
struct Pair {
    Mps mps;
    Vec dense;
};

Pair random_state(std::size_t n, std::mt19937_64 &rng, int layers = 2) {
    std::vector<std::vector<cplx>> vals;
    std::normal_distribution<double> g;
    for (std::size_t i = 0; i < n; i++) {
        vals.push_back({cplx(g(rng), g(rng)), cplx(g(rng), g(rng))});
    }
    Pair p{Mps::product_state(vals), {}};
    p.dense = p.mps.to_dense();
    for (int l = 0; l < layers; l++) {
        for (std::size_t i = l % 2; i + 1 < n; i += 2) {
            Tensor gate = random_tensor({2, 2, 2, 2}, rng);
            p.mps.apply_two_site(i, gate, 64, 0.0);
            p.dense = apply_dense(p.dense, n, i, 2, [&](std::size_t o, std::size_t in) {
                return gate.at({o >> 1, o & 1, in >> 1, in & 1});
            });
        }
    }
    return p;
}

TEST(Mps, ProductStateDense) {
    std::vector<std::vector<cplx>> v{{1, 0}, {0, 2}, {1, 1}};
    Mps m = Mps::product_state(v);
    Vec d = m.to_dense();
    ASSERT_EQ(d.size(), 8u);
    // |0> x 2|1> x (|0> + |1>)
    EXPECT_NEAR(std::abs(d[2] - 2.0), 0, 1e-14);
    EXPECT_NEAR(std::abs(d[3] - 2.0), 0, 1e-14);
    EXPECT_NEAR(std::abs(d[0]), 0, 1e-14);
    EXPECT_EQ(m.max_bond_dim(), 1u);
}

TEST(Mps, TwoSiteGatesMatchDense) {
    std::mt19937_64 rng(11);
    Pair p = random_state(6, rng, 4);
    EXPECT_LT(max_abs_diff(p.mps.to_dense(), p.dense), 1e-10 * std::sqrt(std::real(dot(p.dense, p.dense))));
    EXPECT_LT(p.mps.canonical_error(), 1e-12);
}

TEST(Mps, MoveCenterKeepsState) {
    std::mt19937_64 rng(12);
    Pair p = random_state(5, rng);
    for (std::size_t c : {4u, 0u, 2u}) {
        p.mps.move_center(c);
        EXPECT_EQ(p.mps.center(), c);
        EXPECT_LT(p.mps.canonical_error(), 1e-12);
        EXPECT_LT(max_abs_diff(p.mps.to_dense(), p.dense), 1e-9);
    }
}

TEST(Mps, ApplyMpoMatchesDense) {
    std::mt19937_64 rng(13);
    Pair p = random_state(6, rng);
    Mpo m;
    m.first = 1;
    m.sites = {random_tensor({1, 3, 2, 2}, rng), random_tensor({3, 2, 2, 2}, rng), random_tensor({2, 1, 2, 2}, rng)};
    p.mps.apply_mpo(m, 256, 0.0);
    Vec want = apply_dense(p.dense, 6, 1, 3, [&](std::size_t o, std::size_t in) { return mpo_entry(m, o, in); });
    double scale = std::sqrt(std::real(dot(want, want)));
    EXPECT_LT(max_abs_diff(p.mps.to_dense(), want), 1e-10 * scale);
    EXPECT_EQ(p.mps.center(), 1u);
    EXPECT_LT(p.mps.canonical_error(), 1e-12);
}

TEST(Mps, ExpectationMatchesDense) {
    std::mt19937_64 rng(14);
    Pair p = random_state(5, rng);
    Tensor x = Tensor::matrix(2, 2, {0, 1, 1, 0}), z = Tensor::matrix(2, 2, {1, 0, 0, -1});
    Mpo proj = product_projector_mpo(1, {x, Tensor::identity(2), z}, -1);
    cplx got = p.mps.expectation(proj);
    Vec pd = apply_dense(p.dense, 5, 1, 3, [&](std::size_t o, std::size_t in) { return mpo_entry(proj, o, in); });
    cplx want = dot(p.dense, pd) / dot(p.dense, p.dense);
    EXPECT_NEAR(std::abs(got - want), 0, 1e-12);
    EXPECT_GE(got.real(), -1e-12);
    EXPECT_LE(got.real(), 1 + 1e-12);
}

TEST(Mps, ProjectorMpoIsAProjector) {
    Tensor x = Tensor::matrix(2, 2, {0, 1, 1, 0});
    Mpo p = product_projector_mpo(0, {x, x}, +1);
    // (1 + XX)/2 entrywise
    for (std::size_t o = 0; o < 4; o++) {
        for (std::size_t in = 0; in < 4; in++) {
            double want = 0.5 * ((o == in) + (o == (in ^ 3)));
            EXPECT_NEAR(std::abs(mpo_entry(p, o, in) - want), 0, 1e-15);
        }
    }
}

TEST(Mps, ProjectionWeightIsBornFactor) {
    std::mt19937_64 rng(15);
    Pair p = random_state(6, rng);
    Tensor z = Tensor::matrix(2, 2, {1, 0, 0, -1});
    Mpo proj = product_projector_mpo(2, {z, z, z}, +1);
    cplx before = p.mps.log_norm();
    ProjectionResult r = p.mps.project_and_renormalize(proj, 256, 0.0);
    Vec pd = apply_dense(p.dense, 6, 2, 3, [&](std::size_t o, std::size_t in) { return mpo_entry(proj, o, in); });
    double born = std::real(dot(pd, pd) / dot(p.dense, p.dense));
    EXPECT_NEAR(r.log_weight, std::log(born), 1e-12);
    EXPECT_EQ(p.mps.log_norm(), before);
    // state is P psi rescaled to the old norm
    Vec got = p.mps.to_dense();
    double f = std::norm(dot(got, pd)) / std::real(dot(got, got) * dot(pd, pd));
    EXPECT_NEAR(f, 1, 1e-12);
}

TEST(Mps, ZeroProjectionThrowsAndRestores) {
    std::vector<std::vector<cplx>> v{{1, 0}, {1, 0}, {0, 1}};
    Mps m = Mps::product_state(v);
    Vec before = m.to_dense();
    Tensor z = Tensor::matrix(2, 2, {1, 0, 0, -1});
    // Z on the last qubit is -1, so the +1 projector annihilates the state.
    EXPECT_THROW(m.project_and_renormalize(product_projector_mpo(1, {Tensor::identity(2), z}, +1), 16),
                 ZeroProbabilityError);
    EXPECT_EQ(max_abs_diff(m.to_dense(), before), 0.0);
}

TEST(Mps, MeasureOutMatchesDenseMarginal) {
    std::mt19937_64 rng(16);
    Pair p = random_state(4, rng);
    const double r2 = 1 / std::sqrt(2.0);
    Tensor basis = Tensor::matrix(2, 2, {r2, r2, r2, -r2});
    // dense probability of outcome 0 (|+>) on site 2
    double total = std::real(dot(p.dense, p.dense)), p0 = 0;
    for (std::size_t idx = 0; idx < 16; idx++) {
        if (bit_of(idx, 4, 2) == 0) {
            cplx a = r2 * (p.dense[idx] + p.dense[idx | 2]);
            p0 += std::norm(a);
        }
    }
    p0 /= total;
    Mps copy = p.mps;
    MeasureResult r0 = copy.measure_out(2, basis, 0.0);
    EXPECT_EQ(r0.outcome, 0u);
    EXPECT_NEAR(r0.probability, p0, 1e-12);
    EXPECT_EQ(copy.size(), 3u);
    EXPECT_NEAR(copy.log_norm().real(), p.mps.log_norm().real(), 1e-12);
    MeasureResult r1 = p.mps.measure_out(2, basis, 0.999999);
    EXPECT_EQ(r1.outcome, 1u);
    EXPECT_NEAR(r1.probability, 1 - p0, 1e-12);
}

TEST(Mps, ReplaceBlockInsertsAndConsumes) {
    std::mt19937_64 rng(17);
    Pair p = random_state(3, rng);
    // Insert a fresh |+> qubit before site 1.
    const double r2 = 1 / std::sqrt(2.0);
    Tensor plus = Tensor::vector({r2, r2});
    p.mps.replace_block(1, 0, plus, 64, 0.0);
    ASSERT_EQ(p.mps.size(), 4u);
    Vec d = p.mps.to_dense();
    for (std::size_t idx = 0; idx < 16; idx++) {
        std::size_t a = bit_of(idx, 4, 0), c = idx & 3;
        cplx want = r2 * p.dense[(a << 2) | c];
        EXPECT_NEAR(std::abs(d[idx] - want), 0, 1e-12);
    }
    // CNOT-like map from sites (1, 2) to a single output: out = in1 xor in2.
    Tensor x({2, 2, 2});
    for (std::size_t a = 0; a < 2; a++) {
        for (std::size_t b = 0; b < 2; b++) {
            x.at({a ^ b, a, b}) = 1;
        }
    }
    p.mps.replace_block(1, 2, x, 64, 0.0);
    ASSERT_EQ(p.mps.size(), 3u);
    Vec e = p.mps.to_dense();
    for (std::size_t idx = 0; idx < 8; idx++) {
        std::size_t a = bit_of(idx, 3, 0), o = bit_of(idx, 3, 1), c = bit_of(idx, 3, 2);
        cplx want = 0;
        for (std::size_t in1 = 0; in1 < 2; in1++) {
            std::size_t in2 = in1 ^ o;
            want += d[(a << 3) | (in1 << 2) | (in2 << 1) | c];
        }
        EXPECT_NEAR(std::abs(e[idx] - want), 0, 1e-12);
    }
}

TEST(Mps, BellCutEntropy) {
    std::vector<std::vector<cplx>> v{{1, 0}, {1, 0}};
    Mps m = Mps::product_state(v);
    const double r2 = 1 / std::sqrt(2.0);
    // |00> -> (|00> + |11>)/sqrt2
    Tensor g({2, 2, 2, 2});
    g.at({0, 0, 0, 0}) = r2;
    g.at({1, 1, 0, 0}) = r2;
    g.at({0, 1, 0, 1}) = 1;
    g.at({1, 0, 1, 0}) = 1;
    g.at({0, 0, 1, 1}) = r2;
    g.at({1, 1, 1, 1}) = -r2;
    m.apply_two_site(0, g, 8);
    auto ent = m.cut_entropies();
    ASSERT_EQ(ent.size(), 1u);
    EXPECT_NEAR(ent[0].second, std::log(2.0), 1e-12);
}

TEST(Mps, OverlapWithProductBra) {
    std::mt19937_64 rng(18);
    Pair p = random_state(4, rng);
    std::vector<std::vector<cplx>> bra{{1, 2}, {0.5, -1}, {cplx(0, 1), 1}, {1, 1}};
    cplx want = 0;
    for (std::size_t idx = 0; idx < 16; idx++) {
        cplx w = 1;
        for (std::size_t s = 0; s < 4; s++) {
            w *= bra[s][bit_of(idx, 4, s)];
        }
        want += w * p.dense[idx];
    }
    cplx got = std::exp(p.mps.log_overlap_product(bra));
    EXPECT_NEAR(std::abs(got - want), 0, 1e-10 * std::abs(want));
}

TEST(Mps, TruncationObeysChi) {
    std::mt19937_64 rng(19);
    Pair p = random_state(8, rng, 6);
    Mps small = p.mps;
    Tensor gate = random_tensor({2, 2, 2, 2}, rng);
    double dw = small.apply_two_site(3, gate, 2, 0.0);
    EXPECT_LE(small.bond_dim(4), 2u);
    EXPECT_GE(dw, 0.0);
    EXPECT_LE(dw, 1.0);
}

}  // namespace
}  // namespace surfdec
