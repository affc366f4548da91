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

// Finite-size scaling: data collapse with the ansatz y = f((theta - theta_c) L^{1/nu}) and curve crossings.

#ifndef SURFDEC_COLLAPSE_HPP
#define SURFDEC_COLLAPSE_HPP

#include <array>
#include <span>
#include <vector>

namespace surfdec {

struct FssPoint {
    double theta = 0;
    int size = 0;
    double value = 0;
    double sigma = 0;
};

struct SearchBox {
    double theta_lo = 0, theta_hi = 1;
    double nu_lo = 0.5, nu_hi = 5;
    int grid = 41;  // coarse grid points per axis
};

struct CollapseFit {
    double theta_c = 0;
    double nu = 0;
    double residual = 0;
    int pairs = 0;                    // interpolation pairs entering the residual at the minimum
    bool nu_unidentifiable = false;  // residual flat in nu at the minimum
    bool on_boundary = false;        // minimizer sits on the search box edge
    std::vector<std::array<double, 3>> grid;  // (theta_c, nu, residual) of the coarse scan
};

/// Error-weighted mean squared deviation of each point from the local-linear interpolation of every other
/// size's rescaled curve, evaluated at the same scaling variable. Returns +inf if no pair overlaps.
double collapse_residual(std::span<const FssPoint> data, double theta_c, double nu, int *pairs = nullptr);

/// Coarse grid over the box followed by Nelder-Mead refinement from the best grid point.
CollapseFit collapse_fit(std::span<const FssPoint> data, const SearchBox &box);

struct Crossing {
    int size_a = 0, size_b = 0;
    double theta = 0;
    bool found = false;
    int count = 0;  // sign changes seen; more than one means the curves tangle
};

/// Pairwise crossings of piecewise-linear curves on their common theta grid.
std::vector<Crossing> crossing_estimate(std::span<const FssPoint> data);

}  // namespace surfdec

#endif
