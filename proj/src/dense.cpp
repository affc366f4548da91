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

#include "surfdec/dense.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace surfdec {

namespace {

using u64 = std::uint64_t;

void guard(const Lattice &lat, int limit) {
    if (lat.num_qubits() > limit) {
        throw std::length_error("dense oracle limited to " + std::to_string(limit) + " qubits, lattice has " +
                                std::to_string(lat.num_qubits()));
    }
}

u64 bit_of(int n, int q) {
    return 1ULL << (n - 1 - q);
}

u64 mask_of(int n, const std::vector<std::uint8_t> &bits) {
    u64 m = 0;
    for (int q = 0; q < (int)bits.size(); q++) {
        if (bits[q]) {
            m |= bit_of(n, q);
        }
    }
    return m;
}

u64 mask_of(int n, const std::vector<int> &support) {
    u64 m = 0;
    for (int q : support) {
        m |= bit_of(n, q);
    }
    return m;
}

int parity(u64 x) {
    return std::popcount(x) & 1;
}

void check_state(const StateVector &state, const Lattice &lat) {
    if (state.size() != (std::size_t(1) << lat.num_qubits())) {
        throw std::invalid_argument("state size does not match lattice");
    }
}

void apply_single(StateVector &psi, int n, int q, const std::array<std::complex<double>, 4> &u) {
    u64 b = bit_of(n, q);
    for (u64 i = 0; i < psi.size(); i++) {
        if (i & b) {
            continue;
        }
        auto a0 = psi[i], a1 = psi[i | b];
        psi[i] = u[0] * a0 + u[1] * a1;
        psi[i | b] = u[2] * a0 + u[3] * a1;
    }
}

void project_x_type(StateVector &psi, u64 xm, int sign) {
    StateVector out(psi.size());
    for (u64 i = 0; i < psi.size(); i++) {
        out[i] = 0.5 * (psi[i] + (double)sign * psi[i ^ xm]);
    }
    psi.swap(out);
}

void check_reference(const Lattice &lat, const Syndrome &s, const PauliString &rx, const PauliString &rz) {
    PauliString both = rx;
    both *= rz;
    if (syndrome_of(lat, both) != s) {
        throw std::invalid_argument("reference strings do not reproduce the syndrome");
    }
}

}  // namespace

StateVector exact_logical_state(const Lattice &lat, LogicalInit which) {
    guard(lat, kMaxDenseQubits);
    int n = lat.num_qubits();
    StateVector psi(std::size_t(1) << n, 0.0);
    if (which == LogicalInit::PLUS) {
        std::vector<u64> plaq;
        for (int y = 0; y < lat.ly(); y++) {
            for (int c = 0; c < lat.lx(); c++) {
                plaq.push_back(mask_of(n, lat.plaquette_support(y, c)));
            }
        }
        std::size_t count = 0;
        for (u64 i = 0; i < psi.size(); i++) {
            bool even = true;
            for (u64 m : plaq) {
                if (parity(i & m)) {
                    even = false;
                    break;
                }
            }
            if (even) {
                psi[i] = 1;
                count++;
            }
        }
        for (auto &x : psi) {
            x /= std::sqrt((double)count);
        }
    } else {
        std::vector<u64> stars;
        for (int r = 0; r <= lat.ly(); r++) {
            for (int j = 1; j < lat.lx(); j++) {
                stars.push_back(mask_of(n, lat.star_support(r, j)));
            }
        }
        std::size_t m = stars.size();
        std::vector<u64> elem(std::size_t(1) << m, 0);
        for (std::size_t g = 1; g < elem.size(); g++) {
            elem[g] = elem[g & (g - 1)] ^ stars[std::countr_zero(g)];
        }
        for (u64 e : elem) {
            psi[e] = 1;
        }
        double amp = 1 / std::sqrt((double)elem.size());
        for (auto &x : psi) {
            x *= amp;
        }
    }
    return psi;
}

StateVector exact_corrupt(const StateVector &state, const Lattice &lat, const ErrorModel &model) {
    guard(lat, kMaxDenseQubits);
    check_state(state, lat);
    model.validate();
    int n = lat.num_qubits();
    StateVector psi = state;
    double c = std::cos(model.theta), s = std::sin(model.theta);
    const auto &ax = model.n;
    using C = std::complex<double>;
    std::array<C, 4> u{C(c, ax[2] * s), C(ax[1] * s, ax[0] * s), C(-ax[1] * s, ax[0] * s), C(c, -ax[2] * s)};
    for (int q = 0; q < n; q++) {
        apply_single(psi, n, q, u);
    }
    if (model.phi != 0) {
        C cp = std::cos(model.phi), sp(0, std::sin(model.phi));
        for (auto [q1, q2] : lat.xx_pairs()) {
            u64 m = bit_of(n, q1) | bit_of(n, q2);
            StateVector out(psi.size());
            for (u64 i = 0; i < psi.size(); i++) {
                out[i] = cp * psi[i] + sp * psi[i ^ m];
            }
            psi.swap(out);
        }
    }
    return psi;
}

StateVector apply_pauli(const StateVector &state, const PauliString &p) {
    int n = p.size();
    if (state.size() != (std::size_t(1) << n)) {
        throw std::invalid_argument("state size does not match Pauli");
    }
    u64 xm = mask_of(n, p.x), zm = mask_of(n, p.z);
    static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    std::complex<double> ph = ipow[p.phase & 3];
    StateVector out(state.size());
    for (u64 i = 0; i < state.size(); i++) {
        out[i ^ xm] = (parity(i & zm) ? -ph : ph) * state[i];
    }
    return out;
}

std::complex<double> inner(const StateVector &a, const StateVector &b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("state sizes differ");
    }
    std::complex<double> acc = 0;
    for (std::size_t i = 0; i < a.size(); i++) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

double norm(const StateVector &a) {
    return std::sqrt(std::abs(inner(a, a)));
}

std::complex<double> pauli_expectation(const StateVector &state, const PauliString &p) {
    return inner(state, apply_pauli(state, p));
}

StateVector project_syndrome(const StateVector &state, const Lattice &lat, const Syndrome &s) {
    check_state(state, lat);
    int n = lat.num_qubits();
    StateVector psi = state;
    for (int y = 0; y < lat.ly(); y++) {
        for (int c = 0; c < lat.lx(); c++) {
            u64 m = mask_of(n, lat.plaquette_support(y, c));
            int want = s.plaquette_bits.at(lat.plaquette_index(y, c));
            for (u64 i = 0; i < psi.size(); i++) {
                if (parity(i & m) != want) {
                    psi[i] = 0;
                }
            }
        }
    }
    for (int r = 0; r <= lat.ly(); r++) {
        for (int j = 1; j < lat.lx(); j++) {
            int bit = s.star_bits.at(lat.star_index(r, j));
            project_x_type(psi, mask_of(n, lat.star_support(r, j)), bit ? -1 : 1);
        }
    }
    return psi;
}

std::map<Syndrome, double> exact_syndrome_distribution(const StateVector &state, const Lattice &lat) {
    guard(lat, kMaxDistributionQubits);
    check_state(state, lat);
    int n = lat.num_qubits();
    int np = lat.num_plaquettes(), ns = lat.num_stars();
    std::vector<u64> plaq, stars;
    for (int y = 0; y < lat.ly(); y++) {
        for (int c = 0; c < lat.lx(); c++) {
            plaq.push_back(mask_of(n, lat.plaquette_support(y, c)));
        }
    }
    for (int r = 0; r <= lat.ly(); r++) {
        for (int j = 1; j < lat.lx(); j++) {
            stars.push_back(mask_of(n, lat.star_support(r, j)));
        }
    }
    std::size_t ng = std::size_t(1) << ns;
    std::vector<u64> group(ng, 0);
    for (std::size_t g = 1; g < ng; g++) {
        group[g] = group[g & (g - 1)] ^ stars[std::countr_zero(g)];
    }
    // corr[pb][g] = <psi_pb| X(g) |psi_pb> with psi_pb the component of fixed plaquette outcome pb.
    std::map<u64, std::vector<double>> corr;
    for (u64 i = 0; i < state.size(); i++) {
        if (state[i] == 0.0) {
            continue;
        }
        u64 pb = 0;
        for (int k = 0; k < np; k++) {
            pb |= (u64)parity(i & plaq[k]) << k;
        }
        auto &row = corr[pb];
        if (row.empty()) {
            row.assign(ng, 0.0);
        }
        for (std::size_t g = 0; g < ng; g++) {
            row[g] += (std::conj(state[i]) * state[i ^ group[g]]).real();
        }
    }
    std::map<Syndrome, double> out;
    for (auto &[pb, row] : corr) {
        // Walsh-Hadamard transform over the star group.
        for (std::size_t len = 1; len < ng; len <<= 1) {
            for (std::size_t i = 0; i < ng; i += 2 * len) {
                for (std::size_t j = i; j < i + len; j++) {
                    double a = row[j], b = row[j + len];
                    row[j] = a + b;
                    row[j + len] = a - b;
                }
            }
        }
        for (std::size_t t = 0; t < ng; t++) {
            double p = row[t] / (double)ng;
            if (p <= 1e-15) {
                continue;
            }
            Syndrome s = Syndrome::trivial(lat);
            for (int k = 0; k < np; k++) {
                s.plaquette_bits[k] = (pb >> k) & 1;
            }
            for (int k = 0; k < ns; k++) {
                s.star_bits[k] = (t >> k) & 1;
            }
            out[s] = p;
        }
    }
    return out;
}

std::complex<double> exact_class_amplitude(const StateVector &state, const Lattice &lat, const Syndrome &s,
                                          const PauliString &rx, const PauliString &rz, int a) {
    guard(lat, kMaxDenseQubits);
    check_reference(lat, s, rx, rz);
    StateVector phi = apply_pauli(apply_pauli(project_syndrome(state, lat, s), rx), rz);
    StateVector ref = exact_logical_state(lat, LogicalInit::ZERO);
    if (a & 1) {
        ref = apply_pauli(ref, logicals(lat).x_bar);
    }
    return inner(ref, phi);
}

std::array<std::complex<double>, 2> exact_logical_coefficients(const StateVector &state, const Lattice &lat,
                                                               const Syndrome &s, const PauliString &rx,
                                                               const PauliString &rz, LogicalInit basis) {
    guard(lat, kMaxDenseQubits);
    check_reference(lat, s, rx, rz);
    StateVector phi = apply_pauli(apply_pauli(project_syndrome(state, lat, s), rx), rz);
    StateVector ref = exact_logical_state(lat, basis);
    Logicals lg = logicals(lat);
    StateVector flipped = apply_pauli(ref, basis == LogicalInit::ZERO ? lg.x_bar : lg.z_bar);
    return {inner(ref, phi), inner(flipped, phi)};
}

std::vector<std::complex<double>> exact_class_amplitudes(const Lattice &lat, const ErrorModel &model,
                                                         const Syndrome &s, const PauliString &rx,
                                                         const PauliString &rz) {
    StateVector zero = exact_corrupt(exact_logical_state(lat, LogicalInit::ZERO), lat, model);
    auto g = exact_logical_coefficients(zero, lat, s, rx, rz, LogicalInit::ZERO);
    if (model.kind != ModelKind::GENERAL_XX) {
        return {g[0], g[1]};
    }
    StateVector plus = exact_corrupt(exact_logical_state(lat, LogicalInit::PLUS), lat, model);
    auto h = exact_logical_coefficients(plus, lat, s, rx, rz, LogicalInit::PLUS);
    int overlap = 0;
    for (int q = 0; q < rx.size(); q++) {
        overlap ^= rx.x[q] & rz.z[q];
    }
    double u = overlap ? -1.0 : 1.0;
    std::complex<double> z00 = u * (g[0] - g[1] + h[0] - h[1]) / 2.0;
    std::complex<double> z01 = u * g[0] - z00;
    std::complex<double> z10 = u * h[0] - z00;
    std::complex<double> z11 = u * g[1] - z10;
    return {z00, z01, z10, z11};
}

double exact_mixed_syndrome_probability(const Lattice &lat, const ErrorModel &model, const Syndrome &s) {
    StateVector zero = exact_logical_state(lat, LogicalInit::ZERO);
    StateVector one = apply_pauli(zero, logicals(lat).x_bar);
    double p0 = std::pow(norm(project_syndrome(exact_corrupt(zero, lat, model), lat, s)), 2);
    double p1 = std::pow(norm(project_syndrome(exact_corrupt(one, lat, model), lat, s)), 2);
    return 0.5 * (p0 + p1);
}

}  // namespace surfdec
