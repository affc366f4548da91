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

#include "surfdec/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace surfdec {

Lattice::Lattice(int lx, int ly) : lx_(lx), ly_(ly), n_(lx * (ly + 1) + (lx - 1) * ly) {
    if (lx < 2 || ly < 1) {
        throw std::invalid_argument("lattice needs Lx >= 2 and Ly >= 1, got (" + std::to_string(lx) + ", " +
                                    std::to_string(ly) + ")");
    }
}

Lattice build_lattice(int lx, int ly) {
    return Lattice(lx, ly);
}

int Lattice::h(int r, int c) const {
    if (r < 0 || r > ly_ || c < 0 || c >= lx_) {
        throw std::out_of_range("horizontal edge out of range");
    }
    return r * lx_ + c;
}

int Lattice::v(int y, int j) const {
    if (y < 0 || y >= ly_ || j < 1 || j >= lx_) {
        throw std::out_of_range("vertical edge out of range");
    }
    return lx_ * (ly_ + 1) + y * (lx_ - 1) + (j - 1);
}

std::pair<int, int> Lattice::coords(int q) const {
    if (q < 0 || q >= n_) {
        throw std::out_of_range("qubit index out of range");
    }
    if (is_horizontal(q)) {
        return {q / lx_, q % lx_};
    }
    int k = q - num_horizontal();
    return {k / (lx_ - 1), k % (lx_ - 1) + 1};
}

std::vector<int> Lattice::plaquette_support(int y, int c) const {
    std::vector<int> out{h(y, c), h(y + 1, c)};
    if (c >= 1) {
        out.push_back(v(y, c));
    }
    if (c + 1 <= lx_ - 1) {
        out.push_back(v(y, c + 1));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> Lattice::star_support(int r, int j) const {
    if (j < 1 || j >= lx_) {
        throw std::out_of_range("star column out of range");
    }
    return vertex_edges(r, j);
}

std::vector<int> Lattice::vertex_edges(int r, int j) const {
    if (r < 0 || r > ly_ || j < 0 || j > lx_) {
        throw std::out_of_range("vertex out of range");
    }
    std::vector<int> out;
    if (j >= 1) {
        out.push_back(h(r, j - 1));
    }
    if (j <= lx_ - 1) {
        out.push_back(h(r, j));
    }
    if (j >= 1 && j <= lx_ - 1) {
        if (r >= 1) {
            out.push_back(v(r - 1, j));
        }
        if (r < ly_) {
            out.push_back(v(r, j));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<int, int>> Lattice::xx_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int r = 0; r <= ly_; r++) {
        for (int c = 0; c + 1 < lx_; c++) {
            out.emplace_back(h(r, c), h(r, c + 1));
        }
    }
    return out;
}

int PauliString::weight() const {
    int w = 0;
    for (std::size_t k = 0; k < x.size(); k++) {
        w += (x[k] | z[k]) != 0;
    }
    return w;
}

bool PauliString::is_identity() const {
    return weight() == 0;
}

PauliString &PauliString::operator*=(const PauliString &other) {
    if (other.x.size() != x.size()) {
        throw std::invalid_argument("Pauli size mismatch");
    }
    int flips = 0;
    for (std::size_t k = 0; k < x.size(); k++) {
        flips += z[k] & other.x[k];
        x[k] ^= other.x[k];
        z[k] ^= other.z[k];
    }
    phase = ((phase + other.phase + 2 * flips) % 4 + 4) % 4;
    return *this;
}

PauliString pauli_x(int n, const std::vector<int> &support) {
    PauliString p(n);
    for (int q : support) {
        p.x.at(q) ^= 1;
    }
    return p;
}

PauliString pauli_z(int n, const std::vector<int> &support) {
    PauliString p(n);
    for (int q : support) {
        p.z.at(q) ^= 1;
    }
    return p;
}

bool commutes(const PauliString &a, const PauliString &b) {
    if (a.x.size() != b.x.size()) {
        throw std::invalid_argument("Pauli size mismatch");
    }
    int acc = 0;
    for (std::size_t k = 0; k < a.x.size(); k++) {
        acc ^= (a.x[k] & b.z[k]) ^ (a.z[k] & b.x[k]);
    }
    return acc == 0;
}

int symplectic_rank(const std::vector<PauliString> &ops) {
    if (ops.empty()) {
        return 0;
    }
    std::size_t n = ops[0].x.size();
    std::size_t words = (2 * n + 63) / 64;
    std::vector<std::vector<std::uint64_t>> rows;
    for (const auto &p : ops) {
        std::vector<std::uint64_t> r(words, 0);
        for (std::size_t k = 0; k < n; k++) {
            if (p.x[k]) {
                r[k / 64] |= 1ULL << (k % 64);
            }
            if (p.z[k]) {
                r[(n + k) / 64] |= 1ULL << ((n + k) % 64);
            }
        }
        rows.push_back(std::move(r));
    }
    int rank = 0;
    for (std::size_t col = 0; col < 2 * n && rank < (int)rows.size(); col++) {
        std::size_t w = col / 64;
        std::uint64_t bit = 1ULL << (col % 64);
        int piv = -1;
        for (std::size_t i = rank; i < rows.size(); i++) {
            if (rows[i][w] & bit) {
                piv = (int)i;
                break;
            }
        }
        if (piv < 0) {
            continue;
        }
        std::swap(rows[rank], rows[piv]);
        for (std::size_t i = 0; i < rows.size(); i++) {
            if ((int)i != rank && (rows[i][w] & bit)) {
                for (std::size_t k = 0; k < words; k++) {
                    rows[i][k] ^= rows[rank][k];
                }
            }
        }
        rank++;
    }
    return rank;
}

std::vector<PauliString> stabilizers(const Lattice &lat) {
    std::vector<PauliString> out;
    int n = lat.num_qubits();
    for (int y = 0; y < lat.ly(); y++) {
        for (int c = 0; c < lat.lx(); c++) {
            out.push_back(pauli_z(n, lat.plaquette_support(y, c)));
        }
    }
    for (int r = 0; r <= lat.ly(); r++) {
        for (int j = 1; j < lat.lx(); j++) {
            out.push_back(pauli_x(n, lat.star_support(r, j)));
        }
    }
    return out;
}

Logicals logicals(const Lattice &lat) {
    std::vector<int> column, row;
    for (int r = 0; r <= lat.ly(); r++) {
        column.push_back(lat.h(r, 0));
    }
    for (int c = 0; c < lat.lx(); c++) {
        row.push_back(lat.h(0, c));
    }
    return {pauli_x(lat.num_qubits(), column), pauli_z(lat.num_qubits(), row)};
}

Syndrome Syndrome::trivial(const Lattice &lat) {
    Syndrome s;
    s.plaquette_bits.assign(lat.num_plaquettes(), 0);
    s.star_bits.assign(lat.num_stars(), 0);
    return s;
}

bool Syndrome::is_trivial() const {
    return std::all_of(plaquette_bits.begin(), plaquette_bits.end(), [](auto b) { return b == 0; }) &&
           std::all_of(star_bits.begin(), star_bits.end(), [](auto b) { return b == 0; });
}

std::string Syndrome::to_hex() const {
    std::vector<std::uint8_t> bits(plaquette_bits);
    bits.insert(bits.end(), star_bits.begin(), star_bits.end());
    static const char *digits = "0123456789abcdef";
    std::string out;
    for (std::size_t k = 0; k < bits.size(); k += 4) {
        int v = 0;
        for (std::size_t j = 0; j < 4; j++) {
            v = 2 * v + (k + j < bits.size() ? (bits[k + j] & 1) : 0);
        }
        out.push_back(digits[v]);
    }
    return out;
}

Syndrome Syndrome::from_hex(const Lattice &lat, const std::string &hex) {
    std::size_t np = lat.num_plaquettes(), ns = lat.num_stars();
    std::size_t total = np + ns;
    if (hex.size() != (total + 3) / 4) {
        throw std::invalid_argument("syndrome hex has wrong length for this lattice");
    }
    std::vector<std::uint8_t> bits;
    for (char ch : hex) {
        int v;
        if (ch >= '0' && ch <= '9') {
            v = ch - '0';
        } else if (ch >= 'a' && ch <= 'f') {
            v = ch - 'a' + 10;
        } else if (ch >= 'A' && ch <= 'F') {
            v = ch - 'A' + 10;
        } else {
            throw std::invalid_argument("bad hex digit in syndrome");
        }
        for (int j = 3; j >= 0; j--) {
            bits.push_back((v >> j) & 1);
        }
    }
    for (std::size_t k = total; k < bits.size(); k++) {
        if (bits[k]) {
            throw std::invalid_argument("syndrome hex has nonzero padding");
        }
    }
    Syndrome s;
    s.plaquette_bits.assign(bits.begin(), bits.begin() + (std::ptrdiff_t)np);
    s.star_bits.assign(bits.begin() + (std::ptrdiff_t)np, bits.begin() + (std::ptrdiff_t)total);
    return s;
}

Syndrome syndrome_of(const Lattice &lat, const PauliString &error) {
    if (error.size() != lat.num_qubits()) {
        throw std::invalid_argument("Pauli size does not match lattice");
    }
    Syndrome s = Syndrome::trivial(lat);
    for (int y = 0; y < lat.ly(); y++) {
        for (int c = 0; c < lat.lx(); c++) {
            int parity = 0;
            for (int q : lat.plaquette_support(y, c)) {
                parity ^= error.x[q];
            }
            s.plaquette_bits[lat.plaquette_index(y, c)] = parity;
        }
    }
    for (int r = 0; r <= lat.ly(); r++) {
        for (int j = 1; j < lat.lx(); j++) {
            int parity = 0;
            for (int q : lat.star_support(r, j)) {
                parity ^= error.z[q];
            }
            s.star_bits[lat.star_index(r, j)] = parity;
        }
    }
    return s;
}

const char *model_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::X_ONLY:
            return "x";
        case ModelKind::X_XX:
            return "x-xx";
        case ModelKind::GENERAL_XX:
            return "xyz-xx";
    }
    return "?";
}

ModelKind parse_model(const std::string &name) {
    if (name == "x" || name == "X_ONLY") {
        return ModelKind::X_ONLY;
    }
    if (name == "x-xx" || name == "X_XX") {
        return ModelKind::X_XX;
    }
    if (name == "xyz-xx" || name == "GENERAL_XX") {
        return ModelKind::GENERAL_XX;
    }
    throw std::invalid_argument("unknown model '" + name + "' (expected x, x-xx or xyz-xx)");
}

ErrorModel ErrorModel::x_only(double theta) {
    return {ModelKind::X_ONLY, theta, 0.0, {1, 0, 0}};
}

ErrorModel ErrorModel::x_xx(double theta, double phi) {
    return {ModelKind::X_XX, theta, phi, {1, 0, 0}};
}

ErrorModel ErrorModel::general(double theta, double phi, std::array<double, 3> n) {
    return {ModelKind::GENERAL_XX, theta, phi, n};
}

ErrorModel ErrorModel::general_from_xy(double theta_x, double theta_y, double phi) {
    double theta = std::hypot(theta_x, theta_y);
    std::array<double, 3> n{1, 0, 0};
    if (theta > 0) {
        n = {theta_x / theta, theta_y / theta, 0};
    }
    return general(theta, phi, n);
}

bool ErrorModel::validate() const {
    if (!std::isfinite(theta) || !std::isfinite(phi)) {
        throw std::invalid_argument("error-model angles must be finite");
    }
    double nn = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    if (std::abs(nn - 1) > 1e-12) {
        throw std::invalid_argument("rotation axis must be a unit vector");
    }
    if (kind != ModelKind::GENERAL_XX && (std::abs(n[0] - 1) > 1e-12)) {
        throw std::invalid_argument("X models need the axis (1, 0, 0)");
    }
    if (kind == ModelKind::X_ONLY && phi != 0) {
        throw std::invalid_argument("X_ONLY model has no XX rotation; phi must be 0");
    }
    constexpr double quarter = std::numbers::pi / 4 + 1e-12;
    return theta >= 0 && theta <= quarter && phi >= 0 && phi <= quarter;
}

std::complex<double> ErrorModel::pauli_coefficient(int x, int z) const {
    double c = std::cos(theta), s = std::sin(theta);
    if (x == 0 && z == 0) {
        return c;
    }
    if (x == 1 && z == 0) {
        return {0, n[0] * s};
    }
    if (x == 1 && z == 1) {
        return -n[1] * s;
    }
    return {0, n[2] * s};
}

}  // namespace surfdec
