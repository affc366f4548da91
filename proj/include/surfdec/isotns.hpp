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

// Isometric tensor network for the plus logical state and a row-by-row syndrome sampler.
//
// One tensor per qubit. Bonds run diagonally between horizontal and vertical edges: h(r, c) has upper
// neighbours v(r, c), v(r, c + 1) and lower neighbours v(r - 1, c), v(r - 1, c + 1); v(y, j) has upper
// neighbours h(y + 1, j - 1), h(y + 1, j) and lower neighbours h(y, j - 1), h(y, j). Each tensor is an
// isometry from its lower legs to its physical and upper legs, so the network runs bottom-up as a circuit.

#ifndef SURFDEC_ISOTNS_HPP
#define SURFDEC_ISOTNS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "surfdec/dense.hpp"
#include "surfdec/lattice.hpp"
#include "surfdec/mps.hpp"
#include "surfdec/rng.hpp"

namespace surfdec {

enum class TensorRole { TT_L, TT_C, T1_L, T1_R, T1, T2, T2_L, TB_L, TB_R, TB_C };

inline constexpr std::array<TensorRole, 10> kAllRoles{TensorRole::TT_L, TensorRole::TT_C, TensorRole::T1_L,
                                                      TensorRole::T1_R, TensorRole::T1,   TensorRole::T2,
                                                      TensorRole::T2_L, TensorRole::TB_L, TensorRole::TB_R,
                                                      TensorRole::TB_C};

const char *role_name(TensorRole role);

enum Leg { LEG_UL = 0, LEG_UR = 1, LEG_LL = 2, LEG_LR = 3 };

/// Closed-form tensor with axes [p, uL, uR, lL, lR]; absent legs have extent 1.
Tensor role_tensor(TensorRole role);
/// Which of uL, uR, lL, lR the role carries.
std::array<bool, 4> role_legs(TensorRole role);
/// max |sum_{p, upper} T T* - identity on the lower legs|.
double isometry_error(const Tensor &t);

struct SiteTensor {
    TensorRole role = TensorRole::T1;
    int qubit = -1;
    Tensor t;                         // [p, uL, uR, lL, lR]
    std::array<int, 4> neighbor{-1, -1, -1, -1};  // qubit across each leg, -1 if absent
};

struct IsoTns {
    Lattice lat{2, 1};
    std::vector<SiteTensor> sites;  // indexed by qubit
    double xx_phi = 0;              // exp(i phi XX) on neighbouring horizontal edges, applied row by row

    explicit IsoTns(const Lattice &l) : lat(l) {
    }
};

IsoTns build_isotns(const Lattice &lat);
/// Absorbs the single-qubit rotations into the site tensors and records the XX rotation.
IsoTns apply_errors(const IsoTns &tns, const ErrorModel &model);
/// Exact contraction to a state vector (XX rotations included). Small lattices only.
StateVector contract_dense(const IsoTns &tns);

enum class RetireBasis { X, Z };

struct SamplerOptions {
    std::size_t chi_max = 64;
    double tol = kDefaultSvdTol;
    RetireBasis basis = RetireBasis::X;
};

struct SampleRecord {
    Syndrome syndrome;
    double log_prob = 0;          // log of the product of the stabilizer Born factors
    double log_prob_retired = 0;  // log of the Born factors of the retirement outcomes
    double max_discarded_weight = 0;
    std::size_t chi_max_reached = 1;
    std::size_t peak_sites = 0;
    int resampled_events = 0;
    RngKey rng_key;
    std::vector<std::pair<int, std::uint8_t>> retired;  // (qubit, outcome) in retirement order
};

SampleRecord sample_syndrome(const IsoTns &tns, const SamplerOptions &opts, const RngKey &key);

}  // namespace surfdec

#endif
