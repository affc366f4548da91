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

#include "surfdec/rbim.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace surfdec {

namespace {

int spin(std::size_t idx) {
    return idx == 0 ? 1 : -1;
}

int xbit(int prod) {
    return prod == 1 ? 0 : 1;
}

void check_bonds(const BondConfig &b, const Lattice &lat) {
    std::size_t n = lat.num_qubits();
    if (b.eta.size() != n || b.xi.size() != n || b.zeta_x.size() != n || b.zeta_z.size() != n) {
        throw std::invalid_argument("bond configuration does not match lattice");
    }
}

// Local weights shared by the network builder and the spin-sum oracle.
struct Weights {
    const ErrorModel &model;
    const BondConfig &b;
    cplx cphi, sphi;

    Weights(const ErrorModel &m, const BondConfig &bonds)
        : model(m), b(bonds), cphi(std::cos(m.phi)), sphi(0, std::sin(m.phi)) {
    }

    // Single-qubit weight on edge e: X part from the product of the two vertex spins, Z part from the two
    // plaquette spins (always aligned for the X models).
    cplx teal(int e, int vertex_prod, int plaq_prod) const {
        int x = xbit(b.eta[e] * b.zeta_x[e] * vertex_prod);
        int z = xbit(b.xi[e] * b.zeta_z[e] * plaq_prod);
        return model.pauli_coefficient(x, z);
    }
    cplx purple(int sigma, int alpha) const {
        return sigma == alpha ? cphi : sphi;
    }
    bool crosses(int e) const {
        return b.xi[e] == -1;
    }
};

}  // namespace

BondConfig BondConfig::trivial(const Lattice &lat) {
    BondConfig b;
    std::size_t n = lat.num_qubits();
    b.eta.assign(n, 1);
    b.xi.assign(n, 1);
    b.zeta_x.assign(n, 1);
    b.zeta_z.assign(n, 1);
    return b;
}

StraightGauge straight_gauge(const Lattice &lat, const Syndrome &s) {
    if ((int)s.plaquette_bits.size() != lat.num_plaquettes() || (int)s.star_bits.size() != lat.num_stars()) {
        throw std::invalid_argument("syndrome shape does not match lattice");
    }
    int n = lat.num_qubits();
    StraightGauge g{PauliString(n), PauliString(n), BondConfig::trivial(lat)};
    for (int y = 0; y < lat.ly(); y++) {
        for (int c = 0; c < lat.lx(); c++) {
            if (!s.plaquette_bits[lat.plaquette_index(y, c)]) {
                continue;
            }
            for (int r = y + 1; r <= lat.ly(); r++) {
                g.rx.x[lat.h(r, c)] ^= 1;
            }
        }
    }
    for (int r = 0; r <= lat.ly(); r++) {
        for (int j = 1; j < lat.lx(); j++) {
            if (!s.star_bits[lat.star_index(r, j)]) {
                continue;
            }
            for (int c = j; c < lat.lx(); c++) {
                g.rz.z[lat.h(r, c)] ^= 1;
            }
        }
    }
    PauliString both = g.rx;
    both *= g.rz;
    if (syndrome_of(lat, both) != s) {
        throw std::logic_error("straight-gauge strings fail to reproduce the syndrome");
    }
    for (int q = 0; q < n; q++) {
        g.bonds.eta[q] = g.rx.x[q] ? -1 : 1;
        g.bonds.xi[q] = g.rz.z[q] ? -1 : 1;
    }
    return g;
}

BondConfig insert_defect(const BondConfig &bonds, const Lattice &lat, DefectKind which, int path) {
    check_bonds(bonds, lat);
    BondConfig out = bonds;
    if (which == DefectKind::X) {
        if (out.defect_x) {
            throw std::logic_error("X defect already inserted");
        }
        if (path < 0 || path >= lat.lx()) {
            throw std::out_of_range("X defect column out of range");
        }
        for (int r = 0; r <= lat.ly(); r++) {
            out.zeta_x[lat.h(r, path)] *= -1;
        }
        out.defect_x = true;
    } else {
        if (out.defect_z) {
            throw std::logic_error("Z defect already inserted");
        }
        if (path < 0 || path > lat.ly()) {
            throw std::out_of_range("Z defect row out of range");
        }
        for (int c = 0; c < lat.lx(); c++) {
            out.zeta_z[lat.h(path, c)] *= -1;
        }
        out.defect_z = true;
    }
    return out;
}

BondConfig gauge_transform(const BondConfig &bonds, const Lattice &lat, ModelKind kind, int r, int j) {
    check_bonds(bonds, lat);
    if (j < 1 || j >= lat.lx() || r < 0 || r > lat.ly()) {
        throw std::out_of_range("gauge transform needs a vertex with a free spin");
    }
    BondConfig out = bonds;
    auto &target = kind == ModelKind::GENERAL_XX ? out.zeta_x : out.eta;
    for (int e : lat.vertex_edges(r, j)) {
        target[e] *= -1;
    }
    return out;
}

BondConfig gauge_transform_plaquette(const BondConfig &bonds, const Lattice &lat, int y, int c) {
    check_bonds(bonds, lat);
    BondConfig out = bonds;
    for (int e : lat.plaquette_support(y, c)) {
        out.zeta_z[e] *= -1;
    }
    return out;
}

double coupling_constant(double theta) {
    if (!(theta > 0 && theta < std::acos(-1.0) / 2)) {
        throw std::domain_error("coupling constant needs 0 < theta < pi/2");
    }
    return 0.5 * std::log(1.0 / std::tan(theta));
}

Mpo NetworkLayer::as_mpo() const {
    return Mpo{0, mpo};
}

LayeredNetwork build_network(const ErrorModel &model, const BondConfig &bonds, const Lattice &lat) {
    model.validate();
    check_bonds(bonds, lat);
    bool general = model.kind == ModelKind::GENERAL_XX;
    if (!general) {
        for (std::size_t q = 0; q < bonds.xi.size(); q++) {
            if (bonds.xi[q] != 1 || bonds.zeta_z[q] != 1) {
                throw std::invalid_argument("Z-type bond variables given to an X-only model");
            }
        }
    }
    Weights w(model, bonds);
    int lx = lat.lx(), ly = lat.ly();
    LayeredNetwork net;
    net.kind = model.kind;
    net.lx = lx;
    net.ly = ly;
    const std::vector<cplx> plus{1, 1}, up{1, 0};

    if (!general) {
        for (int j = 1; j < lx; j++) {
            net.sites.push_back(SiteKind::SIGMA);
            net.site_column.push_back(j);
            net.ket.push_back(plus);
            net.bra.push_back(plus);
        }
        for (int y = 1; y <= ly + 1; y++) {
            int r = y - 1;
            NetworkLayer W{'W', y, {}, {}};
            for (int j = 1; j < lx; j++) {
                bool last = j == lx - 1;
                std::size_t dl = j == 1 ? 1 : 2, dr = last ? 1 : 2;
                Tensor t({dl, dr, 2, 2});
                for (std::size_t al = 0; al < dl; al++) {
                    int a_left = j == 1 ? 1 : spin(al);
                    for (std::size_t s = 0; s < 2; s++) {
                        int sg = spin(s);
                        // alpha_j travels on the right bond, or is summed here for the last column.
                        for (std::size_t aj = 0; aj < 2; aj++) {
                            int a = spin(aj);
                            cplx val = w.purple(sg, a) * w.teal(lat.h(r, j - 1), a_left * a, 1);
                            if (last) {
                                val *= w.teal(lat.h(r, j), a, 1);
                                t.at({al, 0, s, s}) += val;
                            } else {
                                t.at({al, aj, s, s}) += val;
                            }
                        }
                    }
                }
                W.mpo.push_back(std::move(t));
                std::ostringstream tag;
                tag << "purple(r=" << r << ",j=" << j << ") teal h(" << r << "," << j - 1 << ")";
                if (last) {
                    tag << " teal h(" << r << "," << j << ")";
                }
                W.tags.push_back(tag.str());
            }
            net.layers.push_back(std::move(W));
            if (y == ly + 1) {
                break;
            }
            NetworkLayer V{'V', y, {}, {}};
            for (int j = 1; j < lx; j++) {
                int e = lat.v(r, j);
                Tensor t({1, 1, 2, 2});
                for (std::size_t so = 0; so < 2; so++) {
                    for (std::size_t si = 0; si < 2; si++) {
                        t.at({0, 0, so, si}) = w.teal(e, spin(so) * spin(si), 1);
                    }
                }
                V.mpo.push_back(std::move(t));
                V.tags.push_back("teal v(" + std::to_string(r) + "," + std::to_string(j) + ")");
            }
            net.layers.push_back(std::move(V));
        }
        return net;
    }

    // Two-copy chain tau_0, sigma_1, tau_1, ..., sigma_{Lx-1}, tau_{Lx-1}.
    for (int c = 0; c < lx; c++) {
        if (c >= 1) {
            net.sites.push_back(SiteKind::SIGMA);
            net.site_column.push_back(c);
            net.ket.push_back(plus);
            net.bra.push_back(plus);
        }
        net.sites.push_back(SiteKind::TAU);
        net.site_column.push_back(c);
        net.ket.push_back(up);
        net.bra.push_back(up);
    }
    for (int y = 1; y <= ly + 1; y++) {
        int r = y - 1;
        NetworkLayer W{'W', y, {}, {}};
        for (int c = 0; c < lx; c++) {
            if (c >= 1) {
                // sigma_c: passes alpha_c along, purple weight, and the sigma factors of the crossing signs.
                int k = (w.crosses(lat.h(r, c - 1)) ? 1 : 0) + (w.crosses(lat.h(r, c)) ? 1 : 0);
                Tensor t({2, 2, 2, 2});
                for (std::size_t a = 0; a < 2; a++) {
                    for (std::size_t s = 0; s < 2; s++) {
                        double sign = (k % 2 == 1) ? spin(s) : 1;
                        t.at({a, a, s, s}) = w.purple(spin(s), spin(a)) * sign;
                    }
                }
                W.mpo.push_back(std::move(t));
                W.tags.push_back("purple(r=" + std::to_string(r) + ",j=" + std::to_string(c) + ") crossing-sign^" +
                                 std::to_string(k % 2));
            }
            int e = lat.h(r, c);
            std::size_t dl = c == 0 ? 1 : 2, dr = c == lx - 1 ? 1 : 2;
            double csign = w.crosses(e) ? (double)(bonds.eta[e] * bonds.zeta_x[e]) : 1.0;
            Tensor t({dl, dr, 2, 2});
            for (std::size_t al = 0; al < dl; al++) {
                for (std::size_t ar = 0; ar < dr; ar++) {
                    int a0 = c == 0 ? 1 : spin(al);
                    int a1 = c == lx - 1 ? 1 : spin(ar);
                    for (std::size_t to = 0; to < 2; to++) {
                        for (std::size_t ti = 0; ti < 2; ti++) {
                            t.at({al, ar, to, ti}) = w.teal(e, a0 * a1, spin(to) * spin(ti)) * csign;
                        }
                    }
                }
            }
            W.mpo.push_back(std::move(t));
            W.tags.push_back("teal h(" + std::to_string(r) + "," + std::to_string(c) + ")" +
                             (w.crosses(e) ? " crossing-constant" : ""));
        }
        net.layers.push_back(std::move(W));
        if (y == ly + 1) {
            break;
        }
        NetworkLayer V{'V', y, {}, {}};
        for (int c = 0; c < lx; c++) {
            if (c >= 1) {
                // sigma_c: vertical edge v(r, c) between tau_{c-1} (left bond) and tau_c (right bond).
                int e = lat.v(r, c);
                Tensor t({2, 2, 2, 2});
                for (std::size_t gl = 0; gl < 2; gl++) {
                    for (std::size_t gr = 0; gr < 2; gr++) {
                        for (std::size_t so = 0; so < 2; so++) {
                            for (std::size_t si = 0; si < 2; si++) {
                                int vp = spin(so) * spin(si);
                                cplx val = w.teal(e, vp, spin(gl) * spin(gr));
                                if (w.crosses(e) && xbit(bonds.eta[e] * bonds.zeta_x[e] * vp)) {
                                    val = -val;
                                }
                                t.at({gl, gr, so, si}) = val;
                            }
                        }
                    }
                }
                V.mpo.push_back(std::move(t));
                V.tags.push_back("teal v(" + std::to_string(r) + "," + std::to_string(c) + ")" +
                                 (w.crosses(e) ? " crossing-sign" : ""));
            }
            std::size_t dl = c == 0 ? 1 : 2, dr = c == lx - 1 ? 1 : 2;
            Tensor t({dl, dr, 2, 2});
            for (std::size_t s = 0; s < 2; s++) {
                std::size_t gl = dl == 1 ? 0 : s, gr = dr == 1 ? 0 : s;
                t.at({gl, gr, s, s}) = 1;
            }
            V.mpo.push_back(std::move(t));
            V.tags.push_back("copy tau(" + std::to_string(r) + "," + std::to_string(c) + ")");
        }
        net.layers.push_back(std::move(V));
    }
    return net;
}

std::string LayeredNetwork::dump() const {
    std::ostringstream out;
    out << "network model=" << model_name(kind) << " Lx=" << lx << " Ly=" << ly << " chain=";
    for (std::size_t i = 0; i < sites.size(); i++) {
        out << (sites[i] == SiteKind::SIGMA ? "s" : "t") << site_column[i] << (i + 1 < sites.size() ? "," : "");
    }
    out << "\n";
    for (const auto &layer : layers) {
        out << layer.kind << "_" << layer.y << ":\n";
        for (std::size_t i = 0; i < layer.mpo.size(); i++) {
            const auto &t = layer.mpo[i];
            out << "  [" << i << "] bonds " << t.extent(0) << "x" << t.extent(1) << "  " << layer.tags[i] << "\n";
        }
    }
    return out.str();
}

int spin_sum_variables(const ErrorModel &model, const Lattice &lat) {
    int nv = (lat.lx() - 1) * (lat.ly() + 1);
    switch (model.kind) {
        case ModelKind::X_ONLY:
            return nv;
        case ModelKind::X_XX:
            return 2 * nv;
        case ModelKind::GENERAL_XX:
            return 2 * nv + lat.num_plaquettes();
    }
    return 0;
}

cplx spin_sum_amplitude(const ErrorModel &model, const BondConfig &bonds, const Lattice &lat) {
    model.validate();
    check_bonds(bonds, lat);
    int nbits = spin_sum_variables(model, lat);
    if (nbits > 26) {
        throw std::length_error("spin sum too large to enumerate");
    }
    int lx = lat.lx(), ly = lat.ly();
    int nv = (lx - 1) * (ly + 1);
    bool has_alpha = model.kind != ModelKind::X_ONLY;
    bool general = model.kind == ModelKind::GENERAL_XX;
    Weights w(model, bonds);
    std::vector<int> sigma((ly + 1) * (lx + 1)), alpha((ly + 1) * (lx + 1)), tau((ly + 2) * lx);
    auto sg = [&](int r, int j) -> int & { return sigma[r * (lx + 1) + j]; };
    auto al = [&](int r, int j) -> int & { return alpha[r * (lx + 1) + j]; };
    // tau rows shifted by one so rows -1 and Ly are the pinned boundaries.
    auto ta = [&](int y, int c) -> int & { return tau[(y + 1) * lx + c]; };
    cplx total = 0;
    for (std::uint64_t cfg = 0; cfg < (1ULL << nbits); cfg++) {
        std::uint64_t bits = cfg;
        auto take = [&]() {
            int b = bits & 1;
            bits >>= 1;
            return b ? -1 : 1;
        };
        for (int r = 0; r <= ly; r++) {
            sg(r, 0) = sg(r, lx) = al(r, 0) = al(r, lx) = 1;
            for (int j = 1; j < lx; j++) {
                sg(r, j) = take();
            }
        }
        for (int r = 0; r <= ly; r++) {
            for (int j = 1; j < lx; j++) {
                al(r, j) = has_alpha ? take() : sg(r, j);
            }
        }
        for (int c = 0; c < lx; c++) {
            ta(-1, c) = ta(ly, c) = 1;
        }
        for (int y = 0; y < ly; y++) {
            for (int c = 0; c < lx; c++) {
                ta(y, c) = general ? take() : 1;
            }
        }
        (void)nv;
        cplx weight = 1;
        for (int r = 0; r <= ly && weight != 0.0; r++) {
            for (int j = 1; j < lx; j++) {
                if (has_alpha) {
                    weight *= w.purple(sg(r, j), al(r, j));
                }
            }
            for (int c = 0; c < lx; c++) {
                int e = lat.h(r, c);
                weight *= w.teal(e, al(r, c) * al(r, c + 1), ta(r - 1, c) * ta(r, c));
                if (w.crosses(e) && xbit(bonds.eta[e] * bonds.zeta_x[e] * sg(r, c) * sg(r, c + 1))) {
                    weight = -weight;
                }
            }
        }
        for (int y = 0; y < ly && weight != 0.0; y++) {
            for (int j = 1; j < lx; j++) {
                int e = lat.v(y, j);
                int vp = sg(y, j) * sg(y + 1, j);
                weight *= w.teal(e, vp, ta(y, j - 1) * ta(y, j));
                if (w.crosses(e) && xbit(bonds.eta[e] * bonds.zeta_x[e] * vp)) {
                    weight = -weight;
                }
            }
        }
        total += weight;
    }
    return total;
}

}  // namespace surfdec
