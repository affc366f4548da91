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

#ifndef SURFDEC_TENSOR_HPP
#define SURFDEC_TENSOR_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace surfdec {

using cplx = std::complex<double>;

/// Raised when extents of two operands do not line up.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Relative singular value cutoff used unless a call site says otherwise.
inline constexpr double kDefaultSvdTol = 1e-14;

/// Dense complex tensor. Data is stored row-major: the last index runs fastest.
class Tensor {
   public:
    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> shape);
    Tensor(std::vector<std::size_t> shape, std::vector<cplx> data);

    static Tensor identity(std::size_t n);
    static Tensor vector(std::vector<cplx> values);
    static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<cplx> values);

    const std::vector<std::size_t> &shape() const {
        return shape_;
    }
    std::size_t rank() const {
        return shape_.size();
    }
    std::size_t extent(std::size_t axis) const {
        return shape_.at(axis);
    }
    std::size_t size() const {
        return data_.size();
    }

    std::span<cplx> data() {
        return data_;
    }
    std::span<const cplx> data() const {
        return data_;
    }
    cplx *raw() {
        return data_.data();
    }
    const cplx *raw() const {
        return data_.data();
    }

    cplx &operator[](std::size_t flat) {
        return data_[flat];
    }
    const cplx &operator[](std::size_t flat) const {
        return data_[flat];
    }
    cplx &at(std::initializer_list<std::size_t> index);
    const cplx &at(std::initializer_list<std::size_t> index) const;
    std::size_t flat_index(std::span<const std::size_t> index) const;

    Tensor reshape(std::vector<std::size_t> new_shape) const &;
    Tensor reshape(std::vector<std::size_t> new_shape) &&;
    Tensor permute(std::span<const std::size_t> perm) const;
    Tensor permute(std::initializer_list<std::size_t> perm) const;
    Tensor conj() const;

    double norm() const;
    bool all_finite() const;
    Tensor &operator*=(cplx factor);

   private:
    std::vector<std::size_t> shape_;
    std::vector<cplx> data_;
};

/// Contracts the listed (axis of a, axis of b) pairs. Free axes of a come first, then b, each in original order.
Tensor contract(const Tensor &a, const Tensor &b, std::span<const std::pair<std::size_t, std::size_t>> pairs);
Tensor contract(const Tensor &a, const Tensor &b, std::initializer_list<std::pair<std::size_t, std::size_t>> pairs);

struct SvdResult {
    Tensor u;  // [row extents..., k]
    std::vector<double> s;
    Tensor v;  // [k, column extents...]
    double discarded_weight = 0;
};

/// Truncated SVD with `row_axes` forming the row space and the remaining axes (in order) the columns.
SvdResult svd_truncate(const Tensor &t, std::span<const std::size_t> row_axes, std::size_t chi_max,
                       double tol = kDefaultSvdTol);
SvdResult svd_truncate(const Tensor &t, std::initializer_list<std::size_t> row_axes, std::size_t chi_max,
                       double tol = kDefaultSvdTol);

/// Von Neumann entropy (natural log) of the normalized squared spectrum.
double entropy_from_spectrum(std::span<const double> s);

}  // namespace surfdec

#endif
