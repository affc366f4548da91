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

#ifndef SURFDEC_DECODE_HPP
#define SURFDEC_DECODE_HPP

#include <array>
#include <span>
#include <vector>

#include "surfdec/dense.hpp"
#include "surfdec/lattice.hpp"
#include "surfdec/rbim.hpp"

namespace surfdec {

/// Stand-in for an infinite defect free energy (one competing amplitude is exactly zero).
inline constexpr double kFreeEnergySentinel = 1e6;

struct TraceStep {
    char kind = 'W';
    int y = 0;
    double entropy = 0;           // half-cut entropy after the layer
    std::vector<double> spectrum;  // half-cut singular values after the layer
    std::size_t max_bond = 1;
    double discarded = 0;
};

struct ContractionTrace {
    std::vector<TraceStep> steps;
    double steady_S = 0;  // mean half-cut entropy over the last ceil((Ly+1)/4) W layers
    std::size_t max_bond = 1;
    double max_discarded = 0;
    double total_discarded = 0;
};

struct ContractionResult {
    cplx log_amplitude{0, 0};  // real part -inf for an exactly vanishing amplitude
    bool zero = false;
    ContractionTrace trace;
};

/// Applies the layers in order to the ket boundary and closes with the bra boundary.
ContractionResult contract(const LayeredNetwork &net, std::size_t chi_max, double tol = kDefaultSvdTol);

struct ClassAmplitudes {
    ModelKind kind = ModelKind::X_ONLY;
    std::vector<cplx> log_z;  // index a, or 2a + b for GENERAL_XX
    std::vector<ContractionTrace> traces;
    PauliString rx, rz;
    double reference_sign = 1;  // (-1)^{|Rx & Rz|}

    int num_classes() const {
        return (int)log_z.size();
    }
    std::vector<cplx> values() const;  // plain amplitudes, may underflow
};

ClassAmplitudes class_amplitudes(const ErrorModel &model, const Lattice &lat, const Syndrome &s, std::size_t chi_max,
                                 double tol = kDefaultSvdTol);

struct FreeEnergies {
    double dF = 0;      // |log(Z1/Z0)| for the X models
    double dF_re = 0;   // log|Z0/Z1|
    double dF_X = 0;    // |log(Z_{~a0 b0}/Z_{a0 b0})|; equals dF for the X models
    double dF_Z = 0;    // |log(Z_{a0 ~b0}/Z_{a0 b0})|; two-copy model only
    double dF_X_re = 0;
    double dF_Z_re = 0;
    int reference_class = 0;  // a0 or 2 a0 + b0
    bool capped = false;      // a competing amplitude vanished; sentinel used
    bool degenerate = false;  // every amplitude vanished
};

FreeEnergies defect_free_energies(const ClassAmplitudes &amps);

/// Normalized logical coefficients of the corrected state.
std::array<cplx, 2> post_correction_coeffs(const ClassAmplitudes &amps, LogicalInit init);

struct DecodeResult {
    int chosen_class = 0;
    FreeEnergies fe;
    double success_prob_contrib = 1;  // max |Z|^2 / sum |Z|^2
    std::array<cplx, 2> post_coeffs{1, 0};
    double steady_S = 0;  // from the reference-class contraction
};

DecodeResult decode(const ClassAmplitudes &amps, LogicalInit init);

struct Estimate {
    double mean = 0;
    double stderr_ = 0;
};

Estimate fidelity_estimate(std::span<const DecodeResult> samples);

/// Contraction against the dense oracle for one syndrome. max_rel_err is measured against the amplitude scale
/// sqrt(sum_k |Z_k|^2) of the syndrome; max_class_rel_err against each class amplitude itself. The dense
/// oracle separates the two-copy classes by differences of O(1) overlaps, so its own accuracy on a class far
/// below the largest one is limited to about eps * max|Z| / |Z_k|.
struct OracleCheck {
    std::vector<cplx> exact, network;
    double max_rel_err = 0;
    double max_class_rel_err = 0;
    double p_exact = 0, p_network = 0;  // mixed-input syndrome probability vs sum |Z|^2
    double p_rel_err = 0;
};
OracleCheck oracle_check(const ErrorModel &model, const Lattice &lat, const Syndrome &s, std::size_t chi_max,
                         double tol = kDefaultSvdTol);

}  // namespace surfdec

#endif
