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

#include "surfdec/mps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

namespace surfdec {

namespace {

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Thin QR of a row-major m x n matrix.
void thin_qr(std::size_t m, std::size_t n, const cplx *a, std::vector<cplx> &q, std::vector<cplx> &r, std::size_t &k) {
    k = std::min(m, n);
    Eigen::Map<const RowMat> am(a, (Eigen::Index)m, (Eigen::Index)n);
    Eigen::HouseholderQR<RowMat> qr(am);
    RowMat qm = qr.householderQ() * RowMat::Identity((Eigen::Index)m, (Eigen::Index)k);
    RowMat rm = qr.matrixQR().topRows((Eigen::Index)k).template triangularView<Eigen::Upper>();
    q.assign(qm.data(), qm.data() + m * k);
    r.assign(rm.data(), rm.data() + k * n);
}

}  // namespace

Mpo product_projector_mpo(std::size_t first, const std::vector<Tensor> &ops, int sign) {
    if (ops.empty()) {
        throw std::invalid_argument("projector needs at least one site");
    }
    Mpo mpo;
    mpo.first = first;
    std::size_t n = ops.size();
    for (std::size_t k = 0; k < n; k++) {
        const Tensor &op = ops[k];
        if (op.rank() != 2 || op.extent(0) != op.extent(1)) {
            throw DimensionError("projector factors must be square matrices");
        }
        std::size_t d = op.extent(0);
        Tensor id = Tensor::identity(d);
        std::size_t wl = k == 0 ? 1 : 2;
        std::size_t wr = k + 1 == n ? 1 : 2;
        Tensor w({wl, wr, d, d});
        auto put = [&](std::size_t a, std::size_t b, const Tensor &m, cplx f) {
            for (std::size_t o = 0; o < d; o++) {
                for (std::size_t i = 0; i < d; i++) {
                    w.at({a, b, o, i}) += f * m.at({o, i});
                }
            }
        };
        if (n == 1) {
            put(0, 0, id, 0.5);
            put(0, 0, op, 0.5 * sign);
        } else if (k == 0) {
            put(0, 0, id, 0.5);
            put(0, 1, op, 0.5 * sign);
        } else if (k + 1 == n) {
            put(0, 0, id, 1);
            put(1, 0, op, 1);
        } else {
            put(0, 0, id, 1);
            put(1, 1, op, 1);
        }
        mpo.sites.push_back(std::move(w));
    }
    return mpo;
}

Mps Mps::product_state(std::span<const std::vector<cplx>> values) {
    Mps mps;
    for (const auto &v : values) {
        double nrm = 0;
        for (auto x : v) {
            nrm += std::norm(x);
        }
        nrm = std::sqrt(nrm);
        if (v.empty() || nrm == 0) {
            throw std::invalid_argument("product_state: zero site vector");
        }
        std::vector<cplx> data(v.begin(), v.end());
        for (auto &x : data) {
            x /= nrm;
        }
        mps.sites_.emplace_back(std::vector<std::size_t>{1, v.size(), 1}, std::move(data));
        mps.log_norm_ += std::log(nrm);
    }
    return mps;
}

std::size_t Mps::bond_dim(std::size_t cut) const {
    if (sites_.empty()) {
        return 1;
    }
    if (cut >= sites_.size()) {
        return sites_.back().extent(2);
    }
    return sites_[cut].extent(0);
}

std::size_t Mps::max_bond_dim() const {
    std::size_t m = 1;
    for (const auto &t : sites_) {
        m = std::max(m, t.extent(2));
    }
    return m;
}

bool Mps::is_zero() const {
    return log_norm_.real() == kNegInf;
}

void Mps::check_site(std::size_t i) const {
    if (i >= sites_.size()) {
        throw std::out_of_range("site " + std::to_string(i) + " out of range for chain of " +
                                std::to_string(sites_.size()));
    }
}

void Mps::normalize_center() {
    if (sites_.empty()) {
        return;
    }
    double nrm = sites_[center_].norm();
    if (!std::isfinite(nrm)) {
        throw std::runtime_error("non-finite value in MPS tensor");
    }
    if (nrm == 0) {
        log_norm_ = cplx(kNegInf, 0);
        return;
    }
    sites_[center_] *= 1.0 / nrm;
    log_norm_ += std::log(nrm);
}

void Mps::move_center(std::size_t i) {
    check_site(i);
    std::vector<cplx> q, r;
    std::size_t k;
    while (center_ < i) {
        Tensor &a = sites_[center_];
        std::size_t l = a.extent(0), p = a.extent(1), rr = a.extent(2);
        thin_qr(l * p, rr, a.raw(), q, r, k);
        a = Tensor({l, p, k}, std::move(q));
        Tensor rt({k, rr}, std::move(r));
        sites_[center_ + 1] = contract(rt, sites_[center_ + 1], {{1, 0}});
        center_++;
    }
    while (center_ > i) {
        Tensor &a = sites_[center_];
        std::size_t l = a.extent(0), p = a.extent(1), rr = a.extent(2);
        // A = R^dag Q^dag from the QR of A^dag.
        RowMat adag = Eigen::Map<const RowMat>(a.raw(), (Eigen::Index)l, (Eigen::Index)(p * rr)).adjoint();
        thin_qr(p * rr, l, adag.data(), q, r, k);
        Eigen::Map<const RowMat> qm(q.data(), (Eigen::Index)(p * rr), (Eigen::Index)k);
        Eigen::Map<const RowMat> rm(r.data(), (Eigen::Index)k, (Eigen::Index)l);
        RowMat qd = qm.adjoint();
        RowMat rd = rm.adjoint();
        a = Tensor({k, p, rr}, std::vector<cplx>(qd.data(), qd.data() + k * p * rr));
        Tensor rt({l, k}, std::vector<cplx>(rd.data(), rd.data() + l * k));
        sites_[center_ - 1] = contract(sites_[center_ - 1], rt, {{2, 0}});
        center_--;
    }
}

void Mps::apply_one_site(std::size_t i, const Tensor &op) {
    check_site(i);
    if (op.rank() != 2 || op.extent(1) != phys_dim(i)) {
        throw DimensionError("one-site operator does not match physical extent");
    }
    move_center(i);
    // [o, p] x [l, p, r] -> [o, l, r] -> [l, o, r]
    sites_[i] = contract(op, sites_[i], {{1, 1}}).permute({1, 0, 2});
    normalize_center();
}

double Mps::apply_two_site(std::size_t i, const Tensor &gate, std::size_t chi_max, double tol) {
    check_site(i);
    check_site(i + 1);
    std::size_t d1 = phys_dim(i), d2 = phys_dim(i + 1);
    if (gate.rank() != 4 || gate.extent(2) != d1 || gate.extent(3) != d2) {
        throw DimensionError("two-site gate does not match physical extents");
    }
    move_center(i);
    Tensor theta = contract(sites_[i], sites_[i + 1], {{2, 0}});    // [l, p1, p2, r]
    theta = contract(gate, theta, {{2, 1}, {3, 2}}).permute({2, 0, 1, 3});  // [l, o1, o2, r]
    SvdResult svd = svd_truncate(theta, {0, 1}, chi_max, tol);
    std::size_t k = svd.s.size();
    Tensor right = std::move(svd.v);  // [k, o2, r]
    for (std::size_t a = 0; a < k; a++) {
        std::size_t stride = right.size() / k;
        for (std::size_t j = 0; j < stride; j++) {
            right[a * stride + j] *= svd.s[a];
        }
    }
    sites_[i] = std::move(svd.u);
    sites_[i + 1] = std::move(right);
    center_ = i + 1;
    normalize_center();
    return svd.discarded_weight;
}

double Mps::apply_mpo(const Mpo &mpo, std::size_t chi_max, double tol) {
    if (mpo.sites.empty()) {
        return 0;
    }
    std::size_t first = mpo.first, last = mpo.last();
    check_site(last);
    if (mpo.sites.front().extent(0) != 1 || mpo.sites.back().extent(1) != 1) {
        throw DimensionError("MPO outer bonds must have extent 1");
    }
    for (std::size_t k = 0; k + 1 < mpo.sites.size(); k++) {
        if (mpo.sites[k].extent(1) != mpo.sites[k + 1].extent(0)) {
            throw DimensionError("MPO bond extents differ");
        }
    }
    move_center(first);
    for (std::size_t i = first; i <= last; i++) {
        const Tensor &w = mpo.sites[i - first];
        if (w.rank() != 4 || w.extent(3) != phys_dim(i)) {
            throw DimensionError("MPO site does not match physical extent");
        }
        std::size_t l = sites_[i].extent(0), r = sites_[i].extent(2);
        std::size_t wl = w.extent(0), wr = w.extent(1), o = w.extent(2);
        // [l, p, r] x [wl, wr, o, p] -> [l, r, wl, wr, o] -> [l, wl, o, r, wr]
        Tensor t = contract(sites_[i], w, {{1, 3}}).permute({0, 2, 4, 1, 3});
        sites_[i] = std::move(t).reshape({l * wl, o, r * wr});
    }
    if (first == last) {
        normalize_center();
        return 0;
    }
    std::vector<cplx> q, rr;
    std::size_t k;
    for (std::size_t i = first; i < last; i++) {
        Tensor &a = sites_[i];
        std::size_t l = a.extent(0), p = a.extent(1), r = a.extent(2);
        thin_qr(l * p, r, a.raw(), q, rr, k);
        a = Tensor({l, p, k}, std::move(q));
        Tensor rt({k, r}, std::move(rr));
        sites_[i + 1] = contract(rt, sites_[i + 1], {{1, 0}});
    }
    double discarded = 0;
    for (std::size_t i = last; i > first; i--) {
        SvdResult svd = svd_truncate(sites_[i], {0}, chi_max, tol);
        discarded += svd.discarded_weight;
        std::size_t kk = svd.s.size();
        Tensor us = std::move(svd.u);  // [l, kk]
        for (std::size_t a = 0; a < us.extent(0); a++) {
            for (std::size_t b = 0; b < kk; b++) {
                us[a * kk + b] *= svd.s[b];
            }
        }
        sites_[i] = std::move(svd.v);
        sites_[i - 1] = contract(sites_[i - 1], us, {{2, 0}});
    }
    center_ = first;
    normalize_center();
    return discarded;
}

cplx Mps::expectation(const Mpo &op) {
    if (op.sites.empty()) {
        return 1;
    }
    check_site(op.last());
    move_center(op.first);
    std::size_t l0 = sites_[op.first].extent(0);
    // env axes [bra bond, mpo bond, ket bond]
    Tensor env({l0, 1, l0});
    for (std::size_t a = 0; a < l0; a++) {
        env.at({a, 0, a}) = 1;
    }
    for (std::size_t i = op.first; i <= op.last(); i++) {
        const Tensor &a = sites_[i];
        const Tensor &w = op.sites[i - op.first];
        Tensor t = contract(env, a, {{2, 0}});                  // [lb, w, p, r]
        t = contract(t, w, {{1, 0}, {2, 3}});                   // [lb, r, w', o]
        t = contract(a.conj(), t, {{0, 0}, {1, 3}});            // [rb, r, w']
        env = t.permute({0, 2, 1});
    }
    cplx acc = 0;
    std::size_t r = env.extent(0);
    for (std::size_t a = 0; a < r; a++) {
        acc += env.at({a, 0, a});
    }
    return acc;
}

ProjectionResult Mps::project_and_renormalize(const Mpo &projector, std::size_t chi_max, double tol) {
    ProjectionResult res;
    if (projector.sites.empty()) {
        return res;
    }
    check_site(projector.last());
    // Only the window changes once the center sits at its left end, so a failed projection restores that alone.
    move_center(projector.first);
    auto lo = sites_.begin() + (std::ptrdiff_t)projector.first;
    std::vector<Tensor> saved(lo, lo + (std::ptrdiff_t)projector.sites.size());
    cplx saved_norm = log_norm_;
    auto restore = [&]() {
        std::move(saved.begin(), saved.end(), sites_.begin() + (std::ptrdiff_t)projector.first);
        center_ = projector.first;
        log_norm_ = saved_norm;
    };
    log_norm_ = 0;
    double dw = 0;
    try {
        dw = apply_mpo(projector, chi_max, tol);
    } catch (...) {
        restore();
        throw;
    }
    if (is_zero() || log_norm_.real() < std::log(1e-14)) {
        restore();
        throw ZeroProbabilityError("projection onto a zero-probability branch");
    }
    res.log_weight = 2 * log_norm_.real();
    res.discarded_weight = dw;
    log_norm_ = saved_norm;
    return res;
}

MeasureResult Mps::measure_out(std::size_t i, const Tensor &basis, double u) {
    check_site(i);
    std::size_t d = phys_dim(i);
    if (basis.rank() != 2 || basis.extent(1) != d) {
        throw DimensionError("measurement basis does not match physical extent");
    }
    move_center(i);
    Tensor proj = contract(basis, sites_[i], {{1, 1}});  // [k, l, r]
    std::size_t nk = basis.extent(0);
    std::size_t block = proj.size() / nk;
    std::vector<double> p(nk, 0.0);
    double total = 0;
    for (std::size_t k = 0; k < nk; k++) {
        for (std::size_t j = 0; j < block; j++) {
            p[k] += std::norm(proj[k * block + j]);
        }
        total += p[k];
    }
    if (!(total > 0)) {
        throw ZeroProbabilityError("measuring a zero state");
    }
    double target = u * total;
    std::size_t outcome = nk - 1;
    double acc = 0;
    for (std::size_t k = 0; k < nk; k++) {
        acc += p[k];
        if (target < acc && p[k] > 0) {
            outcome = k;
            break;
        }
    }
    while (p[outcome] == 0 && outcome > 0) {
        outcome--;
    }
    std::size_t l = sites_[i].extent(0), r = sites_[i].extent(2);
    Tensor m({l, r}, std::vector<cplx>(proj.raw() + outcome * block, proj.raw() + (outcome + 1) * block));
    m *= 1.0 / std::sqrt(p[outcome]);
    MeasureResult res{outcome, p[outcome] / total};
    std::size_t n = sites_.size();
    if (i + 1 < n) {
        sites_[i + 1] = contract(m, sites_[i + 1], {{1, 0}});
        sites_.erase(sites_.begin() + (std::ptrdiff_t)i);
        center_ = i;
    } else if (i > 0) {
        sites_[i - 1] = contract(sites_[i - 1], m, {{2, 0}});
        sites_.erase(sites_.begin() + (std::ptrdiff_t)i);
        center_ = i - 1;
    } else {
        // Last remaining site: what is left is a pure phase.
        log_norm_ += std::log(m[0]) - std::log(std::abs(m[0]));
        sites_.clear();
        center_ = 0;
        return res;
    }
    normalize_center();
    return res;
}

double Mps::replace_block(std::size_t first, std::size_t count, const Tensor &map, std::size_t chi_max, double tol) {
    std::size_t n = sites_.size();
    if (first + count > n) {
        throw std::out_of_range("replace_block range exceeds chain");
    }
    if (map.rank() < count) {
        throw DimensionError("map has fewer axes than consumed sites");
    }
    std::size_t m_out = map.rank() - count;
    if (count == 0 && n > 0) {
        // Fold a neighbouring site in with an identity so the canonical form survives.
        bool absorb_right = first < n;
        std::size_t s = absorb_right ? first : n - 1;
        std::size_t d = phys_dim(s);
        Tensor id = Tensor::identity(d);
        Tensor ext = absorb_right ? contract(map, id, {}) : contract(id, map, {});
        // ext axes: right: [outs..., d_out, d_in]; left: [d_out, d_in, outs...]
        std::vector<std::size_t> perm;
        if (absorb_right) {
            for (std::size_t k = 0; k <= m_out; k++) {
                perm.push_back(k);
            }
            perm.push_back(m_out + 1);
        } else {
            perm.push_back(0);
            for (std::size_t k = 0; k < m_out; k++) {
                perm.push_back(2 + k);
            }
            perm.push_back(1);
        }
        return replace_block(s, 1, ext.permute(perm), chi_max, tol);
    }
    Tensor block;
    if (count == 0) {
        block = Tensor({1, 1}, {cplx(1, 0)});
    } else {
        move_center(first);
        block = sites_[first];
        for (std::size_t k = 1; k < count; k++) {
            block = contract(block, sites_[first + k], {{block.rank() - 1, 0}});
        }
    }
    for (std::size_t k = 0; k < count; k++) {
        if (map.extent(m_out + k) != block.extent(1 + k)) {
            throw DimensionError("map input extent does not match site");
        }
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t k = 0; k < count; k++) {
        pairs.emplace_back(m_out + k, 1 + k);
    }
    Tensor out = contract(map, block, pairs);  // [outs..., l, r]
    std::vector<std::size_t> perm{m_out};
    for (std::size_t k = 0; k < m_out; k++) {
        perm.push_back(k);
    }
    perm.push_back(m_out + 1);
    out = out.permute(perm);  // [l, outs..., r]

    std::vector<Tensor> fresh;
    double discarded = 0;
    if (m_out == 0) {
        // Everything consumed: fold the leftover [l, r] matrix into a neighbour.
        sites_.erase(sites_.begin() + (std::ptrdiff_t)first, sites_.begin() + (std::ptrdiff_t)(first + count));
        if (sites_.empty()) {
            log_norm_ += std::log(out[0]);
            center_ = 0;
            return 0;
        }
        if (first < sites_.size()) {
            sites_[first] = contract(out, sites_[first], {{1, 0}});
            center_ = first;
        } else {
            sites_[first - 1] = contract(sites_[first - 1], out, {{2, 0}});
            center_ = first - 1;
        }
        normalize_center();
        return 0;
    }
    while (out.rank() > 3) {
        SvdResult svd = svd_truncate(out, {0, 1}, chi_max, tol);
        discarded += svd.discarded_weight;
        fresh.push_back(std::move(svd.u));
        Tensor rest = std::move(svd.v);
        std::size_t k = svd.s.size();
        std::size_t stride = rest.size() / k;
        for (std::size_t a = 0; a < k; a++) {
            for (std::size_t j = 0; j < stride; j++) {
                rest[a * stride + j] *= svd.s[a];
            }
        }
        out = std::move(rest);
    }
    fresh.push_back(std::move(out));
    sites_.erase(sites_.begin() + (std::ptrdiff_t)first, sites_.begin() + (std::ptrdiff_t)(first + count));
    sites_.insert(sites_.begin() + (std::ptrdiff_t)first, std::make_move_iterator(fresh.begin()),
                  std::make_move_iterator(fresh.end()));
    center_ = first + m_out - 1;
    normalize_center();
    return discarded;
}

CutSpectrum Mps::spectrum_at(std::size_t cut) {
    CutSpectrum cs;
    cs.position = cut;
    if (cut == 0 || cut >= sites_.size()) {
        cs.s = {1.0};
        return cs;
    }
    move_center(cut);
    SvdResult svd = svd_truncate(sites_[cut], {0}, sites_[cut].extent(0), 0.0);
    cs.s = std::move(svd.s);
    return cs;
}

std::vector<CutSpectrum> Mps::cut_spectra() const {
    std::vector<CutSpectrum> out;
    if (sites_.size() < 2) {
        return out;
    }
    Mps tmp = *this;
    tmp.move_center(0);
    for (std::size_t c = 1; c < sites_.size(); c++) {
        out.push_back(tmp.spectrum_at(c));
    }
    return out;
}

std::vector<std::pair<std::size_t, double>> Mps::cut_entropies() const {
    std::vector<std::pair<std::size_t, double>> out;
    for (const auto &cs : cut_spectra()) {
        out.emplace_back(cs.position, entropy_from_spectrum(cs.s));
    }
    return out;
}

cplx Mps::log_overlap_product(std::span<const std::vector<cplx>> bra) const {
    if (bra.size() != sites_.size()) {
        throw DimensionError("boundary vector count does not match chain length");
    }
    if (is_zero()) {
        return {kNegInf, 0};
    }
    std::vector<cplx> v{1.0};
    cplx log_scale = log_norm_;
    for (std::size_t i = 0; i < sites_.size(); i++) {
        const Tensor &a = sites_[i];
        std::size_t l = a.extent(0), p = a.extent(1), r = a.extent(2);
        if (bra[i].size() != p) {
            throw DimensionError("boundary vector extent does not match site");
        }
        std::vector<cplx> nv(r, 0.0);
        for (std::size_t x = 0; x < l; x++) {
            if (v[x] == 0.0) {
                continue;
            }
            for (std::size_t y = 0; y < p; y++) {
                cplx f = v[x] * bra[i][y];
                if (f == 0.0) {
                    continue;
                }
                const cplx *row = a.raw() + (x * p + y) * r;
                for (std::size_t z = 0; z < r; z++) {
                    nv[z] += f * row[z];
                }
            }
        }
        double nrm = 0;
        for (auto x : nv) {
            nrm += std::norm(x);
        }
        nrm = std::sqrt(nrm);
        if (nrm == 0) {
            return {kNegInf, 0};
        }
        for (auto &x : nv) {
            x /= nrm;
        }
        log_scale += std::log(nrm);
        v = std::move(nv);
    }
    return log_scale + std::log(v[0]);
}

std::vector<cplx> Mps::to_dense() const {
    Tensor acc({1, 1}, {std::exp(log_norm_)});
    for (const auto &a : sites_) {
        acc = contract(acc, a, {{acc.rank() - 1, 0}});
    }
    return std::vector<cplx>(acc.data().begin(), acc.data().end());
}

double Mps::canonical_error() const {
    double worst = 0;
    for (std::size_t i = 0; i < sites_.size(); i++) {
        if (i == center_) {
            continue;
        }
        const Tensor &a = sites_[i];
        std::size_t l = a.extent(0), p = a.extent(1), r = a.extent(2);
        Eigen::Map<const RowMat> m(a.raw(), (Eigen::Index)(l * p), (Eigen::Index)r);
        RowMat g;
        if (i < center_) {
            g = m.adjoint() * m;
        } else {
            Eigen::Map<const RowMat> mr(a.raw(), (Eigen::Index)l, (Eigen::Index)(p * r));
            g = mr * mr.adjoint();
        }
        g -= RowMat::Identity(g.rows(), g.cols());
        worst = std::max(worst, g.cwiseAbs().maxCoeff());
    }
    return worst;
}

}  // namespace surfdec
