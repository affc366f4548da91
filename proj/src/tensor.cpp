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

#include "surfdec/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace surfdec {

namespace {

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::size_t product(std::span<const std::size_t> xs) {
    std::size_t p = 1;
    for (auto x : xs) {
        p *= x;
    }
    return p;
}

std::string shape_str(const std::vector<std::size_t> &s) {
    std::string out = "(";
    for (std::size_t k = 0; k < s.size(); k++) {
        if (k) {
            out += ",";
        }
        out += std::to_string(s[k]);
    }
    return out + ")";
}

// Full thin SVD of a row-major m x n matrix: u is m x k, vt is k x n, k = min(m, n).
void thin_svd(std::size_t m, std::size_t n, const cplx *a, std::vector<cplx> &u, std::vector<double> &s,
              std::vector<cplx> &vt) {
    std::size_t k = std::min(m, n);
    u.assign(m * k, 0.0);
    s.assign(k, 0.0);
    vt.assign(k * n, 0.0);
    std::vector<cplx> work(a, a + m * n);
    lapack_int info = LAPACKE_zgesdd(LAPACK_ROW_MAJOR, 'S', (lapack_int)m, (lapack_int)n, work.data(), (lapack_int)n,
                                     s.data(), u.data(), (lapack_int)k, vt.data(), (lapack_int)n);
    if (info == 0) {
        return;
    }
    // Divide and conquer occasionally fails on nasty inputs; fall back to one-sided Jacobi.
    Eigen::Map<const RowMat> am(a, (Eigen::Index)m, (Eigen::Index)n);
    Eigen::JacobiSVD<RowMat> svd(am, Eigen::ComputeThinU | Eigen::ComputeThinV);
    RowMat um = svd.matrixU();
    RowMat vtm = svd.matrixV().adjoint();
    for (std::size_t j = 0; j < k; j++) {
        s[j] = svd.singularValues()[(Eigen::Index)j];
    }
    std::copy(um.data(), um.data() + m * k, u.begin());
    std::copy(vtm.data(), vtm.data() + k * n, vt.begin());
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape) : shape_(std::move(shape)) {
    for (auto e : shape_) {
        if (e == 0) {
            throw DimensionError("tensor extents must be positive: " + shape_str(shape_));
        }
    }
    data_.assign(product(shape_), cplx{0, 0});
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<cplx> data) : shape_(std::move(shape)), data_(std::move(data)) {
    for (auto e : shape_) {
        if (e == 0) {
            throw DimensionError("tensor extents must be positive: " + shape_str(shape_));
        }
    }
    if (product(shape_) != data_.size()) {
        throw DimensionError("data length " + std::to_string(data_.size()) + " does not match shape " +
                             shape_str(shape_));
    }
}

Tensor Tensor::identity(std::size_t n) {
    Tensor t({n, n});
    for (std::size_t k = 0; k < n; k++) {
        t.data_[k * n + k] = 1;
    }
    return t;
}

Tensor Tensor::vector(std::vector<cplx> values) {
    std::size_t n = values.size();
    return Tensor({n}, std::move(values));
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::vector<cplx> values) {
    return Tensor({rows, cols}, std::move(values));
}

std::size_t Tensor::flat_index(std::span<const std::size_t> index) const {
    if (index.size() != shape_.size()) {
        throw DimensionError("index rank mismatch");
    }
    std::size_t flat = 0;
    for (std::size_t k = 0; k < index.size(); k++) {
        if (index[k] >= shape_[k]) {
            throw DimensionError("index out of range");
        }
        flat = flat * shape_[k] + index[k];
    }
    return flat;
}

cplx &Tensor::at(std::initializer_list<std::size_t> index) {
    return data_[flat_index(std::span<const std::size_t>(index.begin(), index.size()))];
}

const cplx &Tensor::at(std::initializer_list<std::size_t> index) const {
    return data_[flat_index(std::span<const std::size_t>(index.begin(), index.size()))];
}

Tensor Tensor::reshape(std::vector<std::size_t> new_shape) const & {
    Tensor copy = *this;
    return std::move(copy).reshape(std::move(new_shape));
}

Tensor Tensor::reshape(std::vector<std::size_t> new_shape) && {
    if (product(new_shape) != data_.size()) {
        throw DimensionError("cannot reshape " + shape_str(shape_) + " to " + shape_str(new_shape));
    }
    return Tensor(std::move(new_shape), std::move(data_));
}

Tensor Tensor::permute(std::initializer_list<std::size_t> perm) const {
    return permute(std::span<const std::size_t>(perm.begin(), perm.size()));
}

Tensor Tensor::permute(std::span<const std::size_t> perm) const {
    std::size_t r = shape_.size();
    if (perm.size() != r) {
        throw DimensionError("permutation rank mismatch");
    }
    std::vector<bool> seen(r, false);
    bool is_identity = true;
    for (std::size_t k = 0; k < r; k++) {
        if (perm[k] >= r || seen[perm[k]]) {
            throw DimensionError("invalid permutation");
        }
        seen[perm[k]] = true;
        is_identity &= perm[k] == k;
    }
    if (is_identity) {
        return *this;
    }
    std::vector<std::size_t> old_strides(r, 1);
    for (std::size_t k = r; k-- > 1;) {
        old_strides[k - 1] = old_strides[k] * shape_[k];
    }
    std::vector<std::size_t> new_shape(r), strides(r);
    for (std::size_t k = 0; k < r; k++) {
        new_shape[k] = shape_[perm[k]];
        strides[k] = old_strides[perm[k]];
    }
    Tensor out(new_shape);
    std::vector<std::size_t> idx(r, 0);
    std::size_t src = 0;
    std::size_t n = data_.size();
    // Innermost loop unrolled over the last new axis.
    std::size_t inner = new_shape[r - 1];
    std::size_t inner_stride = strides[r - 1];
    for (std::size_t dst = 0; dst < n; dst += inner) {
        for (std::size_t j = 0; j < inner; j++) {
            out.data_[dst + j] = data_[src + j * inner_stride];
        }
        for (std::size_t k = r - 1; k-- > 0;) {
            idx[k]++;
            src += strides[k];
            if (idx[k] < new_shape[k]) {
                break;
            }
            src -= strides[k] * new_shape[k];
            idx[k] = 0;
        }
    }
    return out;
}

Tensor Tensor::conj() const {
    Tensor out = *this;
    for (auto &x : out.data_) {
        x = std::conj(x);
    }
    return out;
}

double Tensor::norm() const {
    double acc = 0;
    for (const auto &x : data_) {
        acc += std::norm(x);
    }
    return std::sqrt(acc);
}

bool Tensor::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const cplx &x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); });
}

Tensor &Tensor::operator*=(cplx factor) {
    for (auto &x : data_) {
        x *= factor;
    }
    return *this;
}

Tensor contract(const Tensor &a, const Tensor &b, std::initializer_list<std::pair<std::size_t, std::size_t>> pairs) {
    return contract(a, b, std::span<const std::pair<std::size_t, std::size_t>>(pairs.begin(), pairs.size()));
}

Tensor contract(const Tensor &a, const Tensor &b, std::span<const std::pair<std::size_t, std::size_t>> pairs) {
    std::vector<bool> a_used(a.rank(), false), b_used(b.rank(), false);
    std::vector<std::size_t> a_perm, b_perm;
    std::size_t k = 1;
    for (auto [ia, ib] : pairs) {
        if (ia >= a.rank() || ib >= b.rank() || a_used[ia] || b_used[ib]) {
            throw DimensionError("invalid contraction pair");
        }
        if (a.extent(ia) != b.extent(ib)) {
            throw DimensionError("contracted extents differ: " + std::to_string(a.extent(ia)) + " vs " +
                                 std::to_string(b.extent(ib)));
        }
        a_used[ia] = b_used[ib] = true;
        k *= a.extent(ia);
    }
    std::vector<std::size_t> out_shape;
    std::size_t m = 1, n = 1;
    for (std::size_t i = 0; i < a.rank(); i++) {
        if (!a_used[i]) {
            a_perm.push_back(i);
            out_shape.push_back(a.extent(i));
            m *= a.extent(i);
        }
    }
    for (auto [ia, ib] : pairs) {
        a_perm.push_back(ia);
        b_perm.push_back(ib);
    }
    for (std::size_t i = 0; i < b.rank(); i++) {
        if (!b_used[i]) {
            b_perm.push_back(i);
            out_shape.push_back(b.extent(i));
            n *= b.extent(i);
        }
    }
    Tensor ap = a.permute(a_perm);
    Tensor bp = b.permute(b_perm);
    Tensor out(out_shape.empty() ? std::vector<std::size_t>{1} : out_shape);
    Eigen::Map<const RowMat> am(ap.raw(), (Eigen::Index)m, (Eigen::Index)k);
    Eigen::Map<const RowMat> bm(bp.raw(), (Eigen::Index)k, (Eigen::Index)n);
    Eigen::Map<RowMat> om(out.raw(), (Eigen::Index)m, (Eigen::Index)n);
    om.noalias() = am * bm;
    if (out_shape.empty()) {
        return std::move(out).reshape({1});
    }
    return out;
}

SvdResult svd_truncate(const Tensor &t, std::initializer_list<std::size_t> row_axes, std::size_t chi_max, double tol) {
    return svd_truncate(t, std::span<const std::size_t>(row_axes.begin(), row_axes.size()), chi_max, tol);
}

SvdResult svd_truncate(const Tensor &t, std::span<const std::size_t> row_axes, std::size_t chi_max, double tol) {
    if (chi_max < 1) {
        throw std::invalid_argument("chi_max must be at least 1");
    }
    if (!(tol >= 0)) {
        throw std::invalid_argument("tol must be nonnegative");
    }
    std::vector<bool> is_row(t.rank(), false);
    std::vector<std::size_t> perm, row_shape, col_shape;
    for (auto ax : row_axes) {
        if (ax >= t.rank() || is_row[ax]) {
            throw DimensionError("invalid row axis");
        }
        is_row[ax] = true;
        perm.push_back(ax);
        row_shape.push_back(t.extent(ax));
    }
    for (std::size_t ax = 0; ax < t.rank(); ax++) {
        if (!is_row[ax]) {
            perm.push_back(ax);
            col_shape.push_back(t.extent(ax));
        }
    }
    std::size_t m = product(row_shape), n = product(col_shape);
    Tensor tp = t.permute(perm);

    std::vector<cplx> u, vt;
    std::vector<double> s;
    double total = 0;
    for (const auto &x : tp.data()) {
        total += std::norm(x);
    }
    SvdResult res;
    if (total == 0) {
        // Zero input: a single zero singular value with arbitrary unit vectors.
        row_shape.push_back(1);
        std::vector<std::size_t> vshape{1};
        vshape.insert(vshape.end(), col_shape.begin(), col_shape.end());
        res.u = Tensor(row_shape);
        res.u[0] = 1;
        res.v = Tensor(vshape);
        res.v[0] = 1;
        res.s = {0.0};
        res.discarded_weight = 0;
        return res;
    }
    thin_svd(m, n, tp.raw(), u, s, vt);
    std::size_t full = s.size();
    std::size_t keep = 0;
    while (keep < full && keep < chi_max && s[keep] > 0 && s[keep] >= tol * s[0]) {
        keep++;
    }
    keep = std::max<std::size_t>(keep, 1);
    double dropped = 0;
    for (std::size_t j = keep; j < full; j++) {
        dropped += s[j] * s[j];
    }
    std::vector<cplx> uk(m * keep);
    for (std::size_t i = 0; i < m; i++) {
        std::copy_n(u.begin() + i * full, keep, uk.begin() + i * keep);
    }
    vt.resize(keep * n);
    row_shape.push_back(keep);
    std::vector<std::size_t> vshape{keep};
    vshape.insert(vshape.end(), col_shape.begin(), col_shape.end());
    res.u = Tensor(row_shape, std::move(uk));
    res.v = Tensor(vshape, std::move(vt));
    s.resize(keep);
    res.s = std::move(s);
    res.discarded_weight = std::clamp(dropped / total, 0.0, 1.0);
    return res;
}

double entropy_from_spectrum(std::span<const double> s) {
    double total = 0;
    for (double x : s) {
        if (x < 0 || !std::isfinite(x)) {
            throw std::invalid_argument("spectrum entries must be finite and nonnegative");
        }
        total += x * x;
    }
    if (total == 0) {
        throw std::invalid_argument("entropy of an all-zero spectrum is undefined");
    }
    double h = 0;
    for (double x : s) {
        double p = x * x / total;
        if (p > 0) {
            h -= p * std::log(p);
        }
    }
    return std::max(h, 0.0);
}

}  // namespace surfdec
