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

#ifndef SURFDEC_MPS_HPP
#define SURFDEC_MPS_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "surfdec/tensor.hpp"

namespace surfdec {

/// Raised when a projection leaves (numerically) nothing behind.
struct ZeroProbabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operator acting on the contiguous sites [first, first + sites.size()).
/// Each site tensor has axes [left bond, right bond, out, in]; the outer bonds have extent 1.
struct Mpo {
    std::size_t first = 0;
    std::vector<Tensor> sites;

    std::size_t last() const {
        return first + sites.size() - 1;
    }
};

/// MPO for (1 + sign * P1 (x) P2 (x) ...) / 2 where ops[k] acts on site first + k and squares to one.
Mpo product_projector_mpo(std::size_t first, const std::vector<Tensor> &ops, int sign);

struct CutSpectrum {
    std::size_t position = 0;  // bond between sites position - 1 and position
    std::vector<double> s;
};

struct ProjectionResult {
    double log_weight = 0;  // log of the Born factor <psi|P|psi>
    double discarded_weight = 0;
};

struct MeasureResult {
    std::size_t outcome = 0;
    double probability = 0;
};

/// Open-boundary matrix product state. The represented vector is exp(log_norm) times the
/// contraction of the site tensors, which are kept in mixed canonical form with unit norm.
/// Site tensors have axes [left bond, physical, right bond].
class Mps {
   public:
    Mps() = default;

    static Mps product_state(std::span<const std::vector<cplx>> values);

    std::size_t size() const {
        return sites_.size();
    }
    bool empty() const {
        return sites_.empty();
    }
    const Tensor &site(std::size_t i) const {
        return sites_.at(i);
    }
    std::size_t phys_dim(std::size_t i) const {
        return sites_.at(i).extent(1);
    }
    /// Extent of the bond to the left of site `cut` (cut == size() gives the right edge).
    std::size_t bond_dim(std::size_t cut) const;
    std::size_t max_bond_dim() const;
    std::size_t center() const {
        return center_;
    }
    cplx log_norm() const {
        return log_norm_;
    }
    void add_log_norm(cplx x) {
        log_norm_ += x;
    }
    /// True once some operation annihilated the state exactly.
    bool is_zero() const;

    void move_center(std::size_t i);

    void apply_one_site(std::size_t i, const Tensor &op);
    /// Gate axes [out_i, out_i+1, in_i, in_i+1]. Leaves the center at i + 1. Returns discarded weight.
    double apply_two_site(std::size_t i, const Tensor &gate, std::size_t chi_max, double tol = kDefaultSvdTol);
    /// Applies the MPO exactly, then recompresses the touched window. Leaves the center at mpo.first.
    double apply_mpo(const Mpo &mpo, std::size_t chi_max, double tol = kDefaultSvdTol);
    /// <psi|O|psi> for the normalized state.
    cplx expectation(const Mpo &op);
    /// Applies a projector, renormalizes, and reports the Born factor. log_norm is left untouched.
    ProjectionResult project_and_renormalize(const Mpo &projector, std::size_t chi_max, double tol = kDefaultSvdTol);
    /// Measures site i in the basis whose k-th vector is the conjugate of row k of `basis`, then removes the site.
    /// `u` in [0, 1) selects the outcome. The normalization of the state is preserved.
    MeasureResult measure_out(std::size_t i, const Tensor &basis, double u);
    /// Replaces sites [first, first + count) by the outputs of `map` (axes [out..., in...]).
    /// With count == 0 the outputs are inserted before site `first`. Returns the total discarded weight.
    double replace_block(std::size_t first, std::size_t count, const Tensor &map, std::size_t chi_max,
                         double tol = kDefaultSvdTol);

    std::vector<CutSpectrum> cut_spectra() const;
    std::vector<std::pair<std::size_t, double>> cut_entropies() const;
    CutSpectrum spectrum_at(std::size_t cut);

    /// log of sum_p prod_i bra_i[p_i] psi[p] (bilinear, no conjugation), including log_norm.
    cplx log_overlap_product(std::span<const std::vector<cplx>> bra) const;
    /// Dense amplitudes, first site most significant.
    std::vector<cplx> to_dense() const;
    /// Largest deviation from the canonical-form isometry conditions.
    double canonical_error() const;

   private:
    void normalize_center();
    void check_site(std::size_t i) const;

    std::vector<Tensor> sites_;
    std::size_t center_ = 0;
    cplx log_norm_{0, 0};
};

}  // namespace surfdec

#endif
