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

#ifndef SURFDEC_TEST_UTIL_HPP
#define SURFDEC_TEST_UTIL_HPP

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "surfdec/lattice.hpp"
#include "surfdec/tensor.hpp"

namespace surfdec::testing {

inline constexpr double kPi = std::numbers::pi;

inline Tensor random_tensor(std::vector<std::size_t> shape, std::mt19937_64 &rng) {
    Tensor t(std::move(shape));
    std::normal_distribution<double> g;
    for (auto &x : t.data()) {
        x = cplx(g(rng), g(rng));
    }
    return t;
}

inline double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) {
        return INFINITY;
    }
    double d = 0;
    for (std::size_t i = 0; i < a.size(); i++) {
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

inline std::array<double, 3> random_axis(std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    std::array<double, 3> n{g(rng), g(rng), g(rng)};
    double r = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    for (auto &x : n) {
        x /= r;
    }
    return n;
}

inline ErrorModel random_model(ModelKind kind, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> ang(0.02, kPi / 4);
    double t = ang(rng), p = ang(rng);
    switch (kind) {
        case ModelKind::X_ONLY:
            return ErrorModel::x_only(t);
        case ModelKind::X_XX:
            return ErrorModel::x_xx(t, p);
        case ModelKind::GENERAL_XX:
            return ErrorModel::general(t, p, random_axis(rng));
    }
    return {};
}

inline constexpr ModelKind kAllModels[] = {ModelKind::X_ONLY, ModelKind::X_XX, ModelKind::GENERAL_XX};

}  // namespace surfdec::testing

#endif
