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

#include "surfdec/decode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace surfdec {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool vanishes(cplx lz) {
    return lz.real() == kNegInf;
}

// Principal-branch log of exp(num) / exp(den).
cplx log_ratio(cplx num, cplx den) {
    cplx d = num - den;
    double im = std::remainder(d.imag(), 2 * std::numbers::pi);
    if (im <= -std::numbers::pi) {
        im += 2 * std::numbers::pi;
    }
    return {d.real(), im};
}

struct PairEnergy {
    double abs = 0, re = 0;
    bool capped = false;
};

// Free energy of `other` relative to `ref` (ref assumed to dominate or tie).
PairEnergy pair_energy(cplx ref, cplx other) {
    PairEnergy p;
    if (vanishes(other)) {
        p.abs = p.re = kFreeEnergySentinel;
        p.capped = true;
        return p;
    }
    cplx lr = log_ratio(other, ref);
    p.abs = std::min(std::abs(lr), kFreeEnergySentinel);
    p.re = -lr.real();
    return p;
}

}  // namespace

ContractionResult contract(const LayeredNetwork &net, std::size_t chi_max, double tol) {
    ContractionResult res;
    Mps mps = Mps::product_state(net.ket);
    std::size_t n = mps.size();
    std::size_t half = n / 2;
    for (const auto &layer : net.layers) {
        double dw = mps.apply_mpo(layer.as_mpo(), chi_max, tol);
        TraceStep step;
        step.kind = layer.kind;
        step.y = layer.y;
        step.discarded = dw;
        step.max_bond = mps.max_bond_dim();
        if (mps.is_zero()) {
            res.zero = true;
            res.log_amplitude = {kNegInf, 0};
            step.spectrum = {0.0};
            res.trace.steps.push_back(std::move(step));
            break;
        }
        if (half >= 1) {
            step.spectrum = mps.spectrum_at(half).s;
            step.entropy = entropy_from_spectrum(step.spectrum);
        } else {
            step.spectrum = {1.0};
        }
        res.trace.max_bond = std::max(res.trace.max_bond, step.max_bond);
        res.trace.max_discarded = std::max(res.trace.max_discarded, dw);
        res.trace.total_discarded += dw;
        res.trace.steps.push_back(std::move(step));
    }
    if (!res.zero) {
        res.log_amplitude = mps.log_overlap_product(net.bra);
        res.zero = vanishes(res.log_amplitude);
    }
    if (std::isnan(res.log_amplitude.real()) || std::isnan(res.log_amplitude.imag())) {
        throw std::runtime_error("NaN in contraction");
    }
    std::vector<double> w_entropies;
    for (const auto &st : res.trace.steps) {
        if (st.kind == 'W') {
            w_entropies.push_back(st.entropy);
        }
    }
    std::size_t q = (std::size_t)((net.ly + 1 + 3) / 4);
    q = std::min(q, w_entropies.size());
    if (q > 0) {
        double acc = 0;
        for (std::size_t k = w_entropies.size() - q; k < w_entropies.size(); k++) {
            acc += w_entropies[k];
        }
        res.trace.steady_S = acc / (double)q;
    }
    return res;
}

std::vector<cplx> ClassAmplitudes::values() const {
    std::vector<cplx> out;
    for (auto lz : log_z) {
        out.push_back(vanishes(lz) ? cplx(0, 0) : std::exp(lz));
    }
    return out;
}

ClassAmplitudes class_amplitudes(const ErrorModel &model, const Lattice &lat, const Syndrome &s, std::size_t chi_max,
                                 double tol) {
    StraightGauge sg = straight_gauge(lat, s);
    ClassAmplitudes out;
    out.kind = model.kind;
    out.rx = sg.rx;
    out.rz = sg.rz;
    int overlap = 0;
    for (int q = 0; q < lat.num_qubits(); q++) {
        overlap ^= sg.rx.x[q] & sg.rz.z[q];
    }
    out.reference_sign = overlap ? -1 : 1;
    bool general = model.kind == ModelKind::GENERAL_XX;
    int nb = general ? 2 : 1;
    bool star_flip = std::any_of(s.star_bits.begin(), s.star_bits.end(), [](auto b) { return b != 0; });
    for (int a = 0; a < 2; a++) {
        for (int b = 0; b < nb; b++) {
            if (!general && star_flip) {
                // X-only errors never flip a star: every class amplitude vanishes.
                out.log_z.emplace_back(kNegInf, 0);
                out.traces.emplace_back();
                continue;
            }
            BondConfig bonds = sg.bonds;
            if (a) {
                bonds = insert_defect(bonds, lat, DefectKind::X);
            }
            if (b) {
                bonds = insert_defect(bonds, lat, DefectKind::Z);
            }
            ContractionResult r = contract(build_network(model, bonds, lat), chi_max, tol);
            out.log_z.push_back(r.log_amplitude);
            out.traces.push_back(std::move(r.trace));
        }
    }
    return out;
}

FreeEnergies defect_free_energies(const ClassAmplitudes &amps) {
    FreeEnergies fe;
    int nc = amps.num_classes();
    if (nc != 2 && nc != 4) {
        throw std::invalid_argument("class amplitudes must have 2 or 4 entries");
    }
    int ref = -1;
    for (int k = 0; k < nc; k++) {
        if (vanishes(amps.log_z[k])) {
            continue;
        }
        if (ref < 0 || amps.log_z[k].real() > amps.log_z[ref].real()) {
            ref = k;
        }
    }
    if (ref < 0) {
        fe.degenerate = true;
        return fe;
    }
    fe.reference_class = ref;
    if (nc == 2) {
        // |log(Z1/Z0)| is symmetric in the two classes.
        if (vanishes(amps.log_z[0]) || vanishes(amps.log_z[1])) {
            fe.dF = fe.dF_X = kFreeEnergySentinel;
            fe.dF_re = fe.dF_X_re = vanishes(amps.log_z[1]) ? kFreeEnergySentinel : -kFreeEnergySentinel;
            fe.capped = true;
            return fe;
        }
        cplx lr = log_ratio(amps.log_z[1], amps.log_z[0]);
        fe.dF = fe.dF_X = std::min(std::abs(lr), kFreeEnergySentinel);
        fe.dF_re = -lr.real();
        fe.dF_X_re = std::abs(lr.real());
        return fe;
    }
    int a0 = ref / 2, b0 = ref % 2;
    PairEnergy px = pair_energy(amps.log_z[ref], amps.log_z[2 * (1 - a0) + b0]);
    PairEnergy pz = pair_energy(amps.log_z[ref], amps.log_z[2 * a0 + (1 - b0)]);
    fe.dF_X = px.abs;
    fe.dF_X_re = px.re;
    fe.dF_Z = pz.abs;
    fe.dF_Z_re = pz.re;
    fe.dF = fe.dF_X;
    fe.dF_re = fe.dF_X_re;
    fe.capped = px.capped || pz.capped;
    return fe;
}

std::array<cplx, 2> post_correction_coeffs(const ClassAmplitudes &amps, LogicalInit init) {
    int nc = amps.num_classes();
    double top = kNegInf;
    for (auto lz : amps.log_z) {
        top = std::max(top, lz.real());
    }
    if (top == kNegInf) {
        throw std::invalid_argument("all class amplitudes vanish");
    }
    std::vector<cplx> z;
    for (auto lz : amps.log_z) {
        z.push_back(vanishes(lz) ? cplx(0, 0) : std::exp(lz - top));
    }
    std::array<cplx, 2> c;
    if (nc == 2) {
        c = {z[0], z[1]};
    } else if (init == LogicalInit::ZERO) {
        c = {z[0] + z[1], z[2] + z[3]};
    } else {
        c = {z[0] + z[2], z[1] - z[3]};
    }
    if (nc == 4) {
        c[0] *= amps.reference_sign;
        c[1] *= amps.reference_sign;
    }
    double nrm = std::sqrt(std::norm(c[0]) + std::norm(c[1]));
    if (nrm == 0) {
        throw std::invalid_argument("corrected state vanishes");
    }
    return {c[0] / nrm, c[1] / nrm};
}

DecodeResult decode(const ClassAmplitudes &amps, LogicalInit init) {
    DecodeResult d;
    d.fe = defect_free_energies(amps);
    if (d.fe.degenerate) {
        d.success_prob_contrib = 1.0 / amps.num_classes();
        d.post_coeffs = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
        return d;
    }
    d.chosen_class = d.fe.reference_class;
    double top = amps.log_z[d.chosen_class].real();
    double acc = 0;
    for (auto lz : amps.log_z) {
        if (!vanishes(lz)) {
            acc += std::exp(2 * (lz.real() - top));
        }
    }
    d.success_prob_contrib = 1.0 / acc;
    d.post_coeffs = post_correction_coeffs(amps, init);
    if (!amps.traces.empty()) {
        d.steady_S = amps.traces[d.chosen_class].steady_S;
    }
    return d;
}

Estimate fidelity_estimate(std::span<const DecodeResult> samples) {
    if (samples.empty()) {
        throw std::invalid_argument("fidelity estimate needs at least one sample");
    }
    double n = (double)samples.size();
    double mean = 0;
    for (const auto &s : samples) {
        mean += s.success_prob_contrib;
    }
    mean /= n;
    double var = 0;
    for (const auto &s : samples) {
        var += (s.success_prob_contrib - mean) * (s.success_prob_contrib - mean);
    }
    Estimate e;
    e.mean = mean;
    e.stderr_ = samples.size() > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
    return e;
}

OracleCheck oracle_check(const ErrorModel &model, const Lattice &lat, const Syndrome &s, std::size_t chi_max,
                         double tol) {
    OracleCheck out;
    ClassAmplitudes amps = class_amplitudes(model, lat, s, chi_max, tol);
    out.network = amps.values();
    out.exact = exact_class_amplitudes(lat, model, s, amps.rx, amps.rz);
    if (out.exact.size() != out.network.size()) {
        throw std::logic_error("class count mismatch between oracle and network");
    }
    double scale = 0;
    for (const auto &z : out.exact) {
        scale += std::norm(z);
    }
    scale = std::sqrt(scale);
    for (std::size_t k = 0; k < out.exact.size(); k++) {
        double diff = std::abs(out.network[k] - out.exact[k]);
        out.max_rel_err = std::max(out.max_rel_err, scale > 0 ? diff / scale : diff);
        double own = std::abs(out.exact[k]);
        if (own > 0) {
            out.max_class_rel_err = std::max(out.max_class_rel_err, diff / own);
        } else if (diff > 0) {
            out.max_class_rel_err = INFINITY;
        }
        out.p_network += std::norm(out.network[k]);
    }
    out.p_exact = exact_mixed_syndrome_probability(lat, model, s);
    double pden = std::max(out.p_exact, 1e-300);
    out.p_rel_err = std::abs(out.p_network - out.p_exact) / pden;
    if (out.p_exact == 0 && out.p_network == 0) {
        out.p_rel_err = 0;
    }
    return out;
}

}  // namespace surfdec

