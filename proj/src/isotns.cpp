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

#include "surfdec/isotns.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace surfdec {

namespace {

constexpr std::uint64_t kStabilizerStream = 0;
constexpr std::uint64_t kRetireStream = 1;
constexpr double kResampleThreshold = 1e-12;
constexpr double kCertainThreshold = 1e-14;

std::size_t bit(std::size_t a) {
    return a & 1;
}

// Single-qubit error as a 2x2 matrix, [out, in].
Tensor error_unitary(const ErrorModel &model) {
    cplx c00 = model.pauli_coefficient(0, 0), cx = model.pauli_coefficient(1, 0);
    cplx cxz = model.pauli_coefficient(1, 1), cz = model.pauli_coefficient(0, 1);
    // I, X, XZ = [[0, -1], [1, 0]], Z
    return Tensor::matrix(2, 2, {c00 + cz, cx - cxz, cx + cxz, c00 - cz});
}

struct Label {
    int a = -1;
    int b = -1;  // -1 for the physical leg of qubit a, else the bond a -> b (lower to upper)

    bool operator==(const Label &) const = default;
};

Label qubit_label(int q) {
    return {q, -1};
}
Label bond_label(int lower, int upper) {
    return {lower, upper};
}

// Site tensor as a map [outs..., ins...] with the present legs only. Outputs are ordered uL, p, uR.
struct SiteMap {
    Tensor map;
    std::vector<Label> outs, ins;
};

SiteMap site_map(const SiteTensor &s) {
    auto legs = role_legs(s.role);
    SiteMap m;
    std::vector<std::size_t> shape;
    auto upper = [&](int leg) {
        if (legs[leg]) {
            m.outs.push_back(bond_label(s.qubit, s.neighbor[leg]));
            shape.push_back(2);
        }
    };
    upper(LEG_UL);
    m.outs.push_back(qubit_label(s.qubit));
    shape.push_back(2);
    upper(LEG_UR);
    for (int leg : {LEG_LL, LEG_LR}) {
        if (legs[leg]) {
            m.ins.push_back(bond_label(s.neighbor[leg], s.qubit));
            shape.push_back(2);
        }
    }
    m.map = s.t.permute({1, 0, 2, 3, 4}).reshape(shape);
    return m;
}

}  // namespace

const char *role_name(TensorRole role) {
    switch (role) {
        case TensorRole::TT_L:
            return "T_t^L";
        case TensorRole::TT_C:
            return "T_t^C";
        case TensorRole::T1_L:
            return "T_1^L";
        case TensorRole::T1_R:
            return "T_1^R";
        case TensorRole::T1:
            return "T_1";
        case TensorRole::T2:
            return "T_2";
        case TensorRole::T2_L:
            return "T_2^L";
        case TensorRole::TB_L:
            return "T_b^L";
        case TensorRole::TB_R:
            return "T_b^R";
        case TensorRole::TB_C:
            return "T_b^C";
    }
    return "?";
}

std::array<bool, 4> role_legs(TensorRole role) {
    // uL, uR, lL, lR
    switch (role) {
        case TensorRole::TT_L:
            return {false, false, false, true};
        case TensorRole::TT_C:
            return {false, false, true, false};
        case TensorRole::T1_L:
            return {false, true, false, true};
        case TensorRole::T1_R:
            return {true, false, true, false};
        case TensorRole::T1:
            return {true, true, true, false};
        case TensorRole::T2:
            return {false, true, true, true};
        case TensorRole::T2_L:
            return {true, true, true, true};
        case TensorRole::TB_L:
            return {false, true, false, false};
        case TensorRole::TB_R:
            return {true, false, false, false};
        case TensorRole::TB_C:
            return {true, true, false, false};
    }
    return {};
}

Tensor role_tensor(TensorRole role) {
    auto legs = role_legs(role);
    std::size_t e[4];
    for (int k = 0; k < 4; k++) {
        e[k] = legs[k] ? 2 : 1;
    }
    const double r2 = 1 / std::sqrt(2.0);
    Tensor t({2, e[0], e[1], e[2], e[3]});
    for (std::size_t p = 0; p < 2; p++) {
        for (std::size_t ul = 0; ul < e[0]; ul++) {
            for (std::size_t ur = 0; ur < e[1]; ur++) {
                for (std::size_t ll = 0; ll < e[2]; ll++) {
                    for (std::size_t lr = 0; lr < e[3]; lr++) {
                        double v = 0;
                        switch (role) {
                            case TensorRole::TT_L:
                                v = p == lr;
                                break;
                            case TensorRole::TT_C:
                                v = p == ll;
                                break;
                            case TensorRole::T1_L:
                                v = (p == ur && p == lr);
                                break;
                            case TensorRole::T1_R:
                                v = (p == ul && p == ll);
                                break;
                            case TensorRole::T1:
                                v = (p == bit(ul + ur) && p == ll) ? r2 : 0;
                                break;
                            case TensorRole::T2:
                                v = (p == ll && bit(p + ur) == lr);
                                break;
                            case TensorRole::T2_L:
                                v = (bit(ul + p) == ll && bit(p + ur) == lr) ? r2 : 0;
                                break;
                            case TensorRole::TB_L:
                                v = p == ur ? r2 : 0;
                                break;
                            case TensorRole::TB_R:
                                v = p == ul ? r2 : 0;
                                break;
                            case TensorRole::TB_C:
                                v = p == bit(ul + ur) ? 0.5 : 0;
                                break;
                        }
                        t.at({p, ul, ur, ll, lr}) = v;
                    }
                }
            }
        }
    }
    return t;
}

double isometry_error(const Tensor &t) {
    if (t.rank() != 5) {
        throw DimensionError("isometry check expects [p, uL, uR, lL, lR]");
    }
    std::size_t cols = t.extent(3) * t.extent(4);
    std::size_t rows = t.size() / cols;
    double err = 0;
    for (std::size_t a = 0; a < cols; a++) {
        for (std::size_t b = 0; b < cols; b++) {
            cplx acc = 0;
            for (std::size_t r = 0; r < rows; r++) {
                acc += std::conj(t[r * cols + a]) * t[r * cols + b];
            }
            err = std::max(err, std::abs(acc - (a == b ? 1.0 : 0.0)));
        }
    }
    return err;
}

IsoTns build_isotns(const Lattice &lat) {
    int lx = lat.lx(), ly = lat.ly();
    if (lx < 2 || ly < 1) {
        throw std::invalid_argument("isoTNS needs Lx >= 2 and Ly >= 1");
    }
    IsoTns tns(lat);
    tns.sites.resize(lat.num_qubits());
    for (int r = 0; r <= ly; r++) {
        for (int c = 0; c < lx; c++) {
            SiteTensor &s = tns.sites[lat.h(r, c)];
            s.qubit = lat.h(r, c);
            if (r == 0) {
                s.role = c == 0 ? TensorRole::TB_L : (c == lx - 1 ? TensorRole::TB_R : TensorRole::TB_C);
            } else if (r == ly) {
                s.role = c == 0 ? TensorRole::TT_L : TensorRole::TT_C;
            } else {
                s.role = c == 0 ? TensorRole::T1_L : (c == lx - 1 ? TensorRole::T1_R : TensorRole::T1);
            }
            auto legs = role_legs(s.role);
            if (legs[LEG_UL]) {
                s.neighbor[LEG_UL] = lat.v(r, c);
            }
            if (legs[LEG_UR]) {
                s.neighbor[LEG_UR] = lat.v(r, c + 1);
            }
            if (legs[LEG_LL]) {
                s.neighbor[LEG_LL] = lat.v(r - 1, c);
            }
            if (legs[LEG_LR]) {
                s.neighbor[LEG_LR] = lat.v(r - 1, c + 1);
            }
            s.t = role_tensor(s.role);
        }
    }
    for (int y = 0; y < ly; y++) {
        for (int j = 1; j < lx; j++) {
            SiteTensor &s = tns.sites[lat.v(y, j)];
            s.qubit = lat.v(y, j);
            s.role = j == 1 ? TensorRole::T2_L : TensorRole::T2;
            auto legs = role_legs(s.role);
            if (legs[LEG_UL]) {
                s.neighbor[LEG_UL] = lat.h(y + 1, j - 1);
            }
            s.neighbor[LEG_UR] = lat.h(y + 1, j);
            s.neighbor[LEG_LL] = lat.h(y, j - 1);
            s.neighbor[LEG_LR] = lat.h(y, j);
            s.t = role_tensor(s.role);
        }
    }
    return tns;
}

IsoTns apply_errors(const IsoTns &tns, const ErrorModel &model) {
    model.validate();
    IsoTns out = tns;
    Tensor u = error_unitary(model);
    for (auto &s : out.sites) {
        s.t = contract(u, s.t, {{1, 0}});
    }
    out.xx_phi = model.kind == ModelKind::X_ONLY ? 0.0 : model.phi;
    return out;
}

StateVector contract_dense(const IsoTns &tns) {
    const Lattice &lat = tns.lat;
    int n = lat.num_qubits();
    if (n > kMaxDenseQubits) {
        throw std::length_error("lattice too large for dense contraction");
    }
    // Sequential order: horizontal row r, then vertical row r.
    std::vector<int> order;
    for (int r = 0; r <= lat.ly(); r++) {
        for (int c = 0; c < lat.lx(); c++) {
            order.push_back(lat.h(r, c));
        }
        if (r < lat.ly()) {
            for (int j = 1; j < lat.lx(); j++) {
                order.push_back(lat.v(r, j));
            }
        }
    }
    Tensor state({1}, {cplx(1, 0)});
    std::vector<Label> labels;
    bool scalar = true;
    for (int q : order) {
        SiteMap m = site_map(tns.sites[q]);
        std::size_t nout = m.outs.size();
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        std::vector<Label> rest;
        std::vector<bool> used(labels.size(), false);
        for (std::size_t k = 0; k < m.ins.size(); k++) {
            auto it = std::find(labels.begin(), labels.end(), m.ins[k]);
            if (it == labels.end()) {
                throw std::logic_error("dangling bond in isoTNS");
            }
            std::size_t idx = (std::size_t)(it - labels.begin());
            used[idx] = true;
            pairs.emplace_back(idx, nout + k);
        }
        for (std::size_t k = 0; k < labels.size(); k++) {
            if (!used[k]) {
                rest.push_back(labels[k]);
            }
        }
        if (scalar) {
            state = m.map;
            scalar = false;
        } else {
            state = contract(state, m.map, pairs);
        }
        rest.insert(rest.end(), m.outs.begin(), m.outs.end());
        labels = std::move(rest);
    }
    std::vector<std::size_t> perm(n);
    if ((int)labels.size() != n) {
        throw std::logic_error("open bonds left after contraction");
    }
    for (std::size_t k = 0; k < labels.size(); k++) {
        perm[labels[k].a] = k;
    }
    Tensor dense = state.permute(perm);
    StateVector psi(dense.data().begin(), dense.data().end());
    if (tns.xx_phi != 0) {
        cplx cp = std::cos(tns.xx_phi), sp(0, std::sin(tns.xx_phi));
        for (auto [a, b] : lat.xx_pairs()) {
            std::size_t mask = (std::size_t{1} << (n - 1 - a)) | (std::size_t{1} << (n - 1 - b));
            StateVector next(psi.size());
            for (std::size_t i = 0; i < psi.size(); i++) {
                next[i] = cp * psi[i] + sp * psi[i ^ mask];
            }
            psi = std::move(next);
        }
    }
    return psi;
}

namespace {

class Sampler {
   public:
    Sampler(const IsoTns &tns, const SamplerOptions &opts, const RngKey &key)
        : tns_(tns), lat_(tns.lat), opts_(opts), key_(key) {
        rec_.rng_key = key;
        rec_.syndrome = Syndrome::trivial(lat_);
    }

    SampleRecord run() {
        int lx = lat_.lx(), ly = lat_.ly();
        for (int r = 0; r <= ly; r++) {
            for (int c = 0; c < lx; c++) {
                produce(lat_.h(r, c));
            }
            apply_xx_row(r);
            if (r >= 1) {
                for (int c = 0; c < lx; c++) {
                    measure(lat_.plaquette_support(r - 1, c), false, &rec_.syndrome.plaquette_bits[lat_.plaquette_index(r - 1, c)]);
                }
                for (int c = 0; c < lx; c++) {
                    retire(lat_.h(r - 1, c));
                }
            }
            if (r == ly) {
                measure_stars(r);
                while (!chain_.empty()) {
                    retire(chain_.front().a);
                }
                break;
            }
            for (int j = 1; j < lx; j++) {
                produce(lat_.v(r, j));
            }
            measure_stars(r);
            if (r >= 1) {
                for (int j = 1; j < lx; j++) {
                    retire(lat_.v(r - 1, j));
                }
            }
        }
        return rec_;
    }

   private:
    std::size_t position(const Label &l) const {
        auto it = std::find(chain_.begin(), chain_.end(), l);
        if (it == chain_.end()) {
            throw std::logic_error("label not on the live chain");
        }
        return (std::size_t)(it - chain_.begin());
    }

    void track(double dw) {
        rec_.max_discarded_weight = std::max(rec_.max_discarded_weight, dw);
        rec_.chi_max_reached = std::max(rec_.chi_max_reached, mps_.max_bond_dim());
        rec_.peak_sites = std::max(rec_.peak_sites, chain_.size());
    }

    // Applies the site tensor of qubit q as a map from its input bonds to its outputs. Sites sitting between
    // the inputs are passed through and end up in front of the new outputs.
    void produce(int q) {
        SiteMap m = site_map(tns_.sites[q]);
        std::size_t nout = m.outs.size(), nin = m.ins.size();
        if (nin == 0) {
            std::size_t first = chain_.size();
            track(mps_.replace_block(first, 0, m.map, opts_.chi_max, opts_.tol));
            chain_.insert(chain_.end(), m.outs.begin(), m.outs.end());
            track(0);
            return;
        }
        std::vector<std::size_t> pos;
        for (const auto &l : m.ins) {
            pos.push_back(position(l));
        }
        std::size_t lo = *std::min_element(pos.begin(), pos.end());
        std::size_t hi = *std::max_element(pos.begin(), pos.end());
        std::size_t count = hi - lo + 1;
        std::size_t npass = count - nin;
        Tensor full = m.map;
        for (std::size_t k = 0; k < npass; k++) {
            full = contract(full, Tensor::identity(2), {});
        }
        // full axes: [outs (nout), ins (nin), (pass_out, pass_in) * npass]
        std::vector<std::size_t> perm;
        std::vector<Label> fresh;
        std::size_t pass_k = 0;
        for (std::size_t p = lo; p <= hi; p++) {
            if (std::find(pos.begin(), pos.end(), p) == pos.end()) {
                perm.push_back(nout + nin + 2 * pass_k);
                fresh.push_back(chain_[p]);
                pass_k++;
            }
        }
        for (std::size_t k = 0; k < nout; k++) {
            perm.push_back(k);
        }
        fresh.insert(fresh.end(), m.outs.begin(), m.outs.end());
        pass_k = 0;
        for (std::size_t p = lo; p <= hi; p++) {
            auto it = std::find(pos.begin(), pos.end(), p);
            if (it != pos.end()) {
                perm.push_back(nout + (std::size_t)(it - pos.begin()));
            } else {
                perm.push_back(nout + nin + 2 * pass_k + 1);
                pass_k++;
            }
        }
        track(mps_.replace_block(lo, count, full.permute(perm), opts_.chi_max, opts_.tol));
        chain_.erase(chain_.begin() + (std::ptrdiff_t)lo, chain_.begin() + (std::ptrdiff_t)(hi + 1));
        chain_.insert(chain_.begin() + (std::ptrdiff_t)lo, fresh.begin(), fresh.end());
        track(0);
    }

    void apply_xx_row(int r) {
        if (tns_.xx_phi == 0) {
            return;
        }
        int lx = lat_.lx();
        std::vector<std::size_t> pos;
        for (int c = 0; c < lx; c++) {
            pos.push_back(position(qubit_label(lat_.h(r, c))));
        }
        if (!std::is_sorted(pos.begin(), pos.end())) {
            throw std::logic_error("horizontal row out of order on the chain");
        }
        cplx w[2] = {std::cos(tns_.xx_phi), cplx(0, std::sin(tns_.xx_phi))};
        const Tensor id = Tensor::identity(2);
        const Tensor x = Tensor::matrix(2, 2, {0, 1, 1, 0});
        Mpo mpo;
        mpo.first = pos.front();
        int c = 0;
        for (std::size_t p = pos.front(); p <= pos.back(); p++) {
            bool member = c < lx && p == pos[c];
            std::size_t wl = (member && c == 0) ? 1 : 2;
            std::size_t wr = (member && c == lx - 1) ? 1 : 2;
            Tensor t({wl, wr, 2, 2});
            for (std::size_t kl = 0; kl < wl; kl++) {
                for (std::size_t kr = 0; kr < wr; kr++) {
                    if (!member && kl != kr) {
                        continue;
                    }
                    cplx weight = 1;
                    std::size_t flips = 0;
                    if (member) {
                        weight = c == lx - 1 ? cplx(1) : w[kr];
                        flips = (kl + kr) & 1;
                    }
                    const Tensor &op = flips ? x : id;
                    for (std::size_t o = 0; o < 2; o++) {
                        for (std::size_t i = 0; i < 2; i++) {
                            t.at({kl, kr, o, i}) = weight * op.at({o, i});
                        }
                    }
                }
            }
            mpo.sites.push_back(std::move(t));
            if (member) {
                c++;
            }
        }
        track(mps_.apply_mpo(mpo, opts_.chi_max, opts_.tol));
    }

    void measure_stars(int r) {
        for (int j = 1; j < lat_.lx(); j++) {
            measure(lat_.star_support(r, j), true, &rec_.syndrome.star_bits[lat_.star_index(r, j)]);
        }
    }

    void measure(const std::vector<int> &support, bool x_type, std::uint8_t *bit_out) {
        std::vector<std::size_t> pos;
        for (int q : support) {
            pos.push_back(position(qubit_label(q)));
        }
        std::size_t lo = *std::min_element(pos.begin(), pos.end());
        std::size_t hi = *std::max_element(pos.begin(), pos.end());
        const Tensor pauli = x_type ? Tensor::matrix(2, 2, {0, 1, 1, 0}) : Tensor::matrix(2, 2, {1, 0, 0, -1});
        std::vector<Tensor> ops;
        for (std::size_t p = lo; p <= hi; p++) {
            bool member = std::find(pos.begin(), pos.end(), p) != pos.end();
            ops.push_back(member ? pauli : Tensor::identity(2));
        }
        double p_plus = mps_.expectation(product_projector_mpo(lo, ops, +1)).real();
        p_plus = std::clamp(p_plus, 0.0, 1.0);
        double u = uniform(key_, kStabilizerStream, stabilizer_events_++);
        int outcome = u < p_plus ? 0 : 1;
        double chosen = outcome == 0 ? p_plus : 1 - p_plus;
        if (chosen < kResampleThreshold) {
            outcome ^= 1;
            rec_.resampled_events++;
        }
        double other = outcome == 0 ? 1 - p_plus : p_plus;
        if (other < kCertainThreshold) {
            // Already an eigenstate to working precision; projecting would only add round-off.
            *bit_out = (std::uint8_t)outcome;
            return;
        }
        ProjectionResult pr = mps_.project_and_renormalize(product_projector_mpo(lo, ops, outcome == 0 ? 1 : -1),
                                                           opts_.chi_max, opts_.tol);
        rec_.log_prob += pr.log_weight;
        *bit_out = (std::uint8_t)outcome;
        track(pr.discarded_weight);
    }

    void retire(int q) {
        std::size_t p = position(qubit_label(q));
        const double r2 = 1 / std::sqrt(2.0);
        Tensor basis = opts_.basis == RetireBasis::X ? Tensor::matrix(2, 2, {r2, r2, r2, -r2}) : Tensor::identity(2);
        double u = uniform(key_, kRetireStream, retire_events_++);
        MeasureResult mr = mps_.measure_out(p, basis, u);
        rec_.log_prob_retired += std::log(mr.probability);
        rec_.retired.emplace_back(q, (std::uint8_t)mr.outcome);
        chain_.erase(chain_.begin() + (std::ptrdiff_t)p);
    }

    const IsoTns &tns_;
    const Lattice &lat_;
    SamplerOptions opts_;
    RngKey key_;
    Mps mps_;
    std::vector<Label> chain_;
    SampleRecord rec_;
    std::uint64_t stabilizer_events_ = 0, retire_events_ = 0;
};

}  // namespace

SampleRecord sample_syndrome(const IsoTns &tns, const SamplerOptions &opts, const RngKey &key) {
    if (opts.chi_max < 2) {
        throw std::invalid_argument("sampler needs chi_max >= 2");
    }
    Sampler s(tns, opts, key);
    return s.run();
}

}  // namespace surfdec
