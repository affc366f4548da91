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

// Complex-weight random-bond Ising networks whose partition functions are class amplitudes.
//
// Spins: sigma on the vertices of the primal lattice (interior columns j = 1..Lx-1, rows r = 0..Ly; the
// boundary columns 0 and Lx are pinned to +1), and for the two-copy model tau on the plaquettes
// (pinned up below row 0 and above row Ly-1). Every qubit edge is both a sigma bond and a tau bond, so the
// bond variables below are indexed by qubit.

#ifndef SURFDEC_RBIM_HPP
#define SURFDEC_RBIM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "surfdec/lattice.hpp"
#include "surfdec/mps.hpp"
#include "surfdec/tensor.hpp"

namespace surfdec {

struct BondConfig {
    std::vector<std::int8_t> eta;     // -1 on the X reference string
    std::vector<std::int8_t> xi;      // -1 on the Z reference string
    std::vector<std::int8_t> zeta_x;  // -1 on the X logical defect path
    std::vector<std::int8_t> zeta_z;  // -1 on the Z logical defect path
    bool defect_x = false;
    bool defect_z = false;

    static BondConfig trivial(const Lattice &lat);
    bool operator==(const BondConfig &other) const = default;
};

struct StraightGauge {
    PauliString rx;
    PauliString rz;
    BondConfig bonds;
};

/// Reference strings on horizontal edges only: X strings run up to the top boundary, Z strings run right.
StraightGauge straight_gauge(const Lattice &lat, const Syndrome &s);

enum class DefectKind { X, Z };

/// Flips zeta along a non-contractible path: X uses the column h(0..Ly, path), Z the row h(path, 0..Lx-1).
/// The canonical path is 0 for both.
BondConfig insert_defect(const BondConfig &bonds, const Lattice &lat, DefectKind which, int path = 0);

/// Flips the bond variables around vertex (r, j), 1 <= j <= Lx-1: eta for the X models, zeta_x for GENERAL_XX.
BondConfig gauge_transform(const BondConfig &bonds, const Lattice &lat, ModelKind kind, int r, int j);
/// Flips zeta_z around plaquette (y, c) (tau gauge of the two-copy model).
BondConfig gauge_transform_plaquette(const BondConfig &bonds, const Lattice &lat, int y, int c);

/// J = log(1 / tan theta) / 2; the single-qubit weight is proportional to exp((J - i pi/4) eta s s').
double coupling_constant(double theta);

enum class SiteKind { SIGMA, TAU };

struct NetworkLayer {
    char kind = 'W';  // 'W' horizontal-edge row, 'V' vertical edges
    int y = 1;        // 1-based layer index
    std::vector<Tensor> mpo;        // per chain site, axes [left bond, right bond, out, in]
    std::vector<std::string> tags;  // per chain site, what the tensor encodes

    Mpo as_mpo() const;
};

struct LayeredNetwork {
    ModelKind kind = ModelKind::X_ONLY;
    int lx = 0, ly = 0;
    std::vector<SiteKind> sites;     // chain layout
    std::vector<int> site_column;    // vertex column (sigma) or plaquette column (tau)
    std::vector<std::vector<cplx>> ket, bra;
    std::vector<NetworkLayer> layers;  // application order W_1, V_1, W_2, ..., V_Ly, W_{Ly+1}

    std::string dump() const;
};

LayeredNetwork build_network(const ErrorModel &model, const BondConfig &bonds, const Lattice &lat);

/// Direct sum over every spin configuration of the product of local Boltzmann weights.
cplx spin_sum_amplitude(const ErrorModel &model, const BondConfig &bonds, const Lattice &lat);
/// Number of free binary variables the spin sum enumerates.
int spin_sum_variables(const ErrorModel &model, const Lattice &lat);

}  // namespace surfdec

#endif
