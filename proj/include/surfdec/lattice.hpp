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

#ifndef SURFDEC_LATTICE_HPP
#define SURFDEC_LATTICE_HPP

#include <array>
#include <compare>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace surfdec {

/// Planar surface code with Lx x Ly plaquettes: rough boundaries on the left and right,
/// smooth boundaries on the top and bottom.
///
/// Horizontal edge h(r, c), r in [0, Ly], c in [0, Lx), has index r * Lx + c.
/// Vertical edge v(y, j), y in [0, Ly), j in [1, Lx), has index Lx (Ly + 1) + y (Lx - 1) + j - 1.
/// Plaquette (y, c) is bounded by h(y, c), h(y + 1, c) and the vertical edges v(y, c), v(y, c + 1) that exist.
/// Star (r, j) sits on vertex column j in [1, Lx) and touches h(r, j - 1), h(r, j), v(r - 1, j), v(r, j).
class Lattice {
   public:
    Lattice(int lx, int ly);

    int lx() const {
        return lx_;
    }
    int ly() const {
        return ly_;
    }
    int num_qubits() const {
        return n_;
    }
    int num_plaquettes() const {
        return lx_ * ly_;
    }
    int num_stars() const {
        return (lx_ - 1) * (ly_ + 1);
    }
    int num_horizontal() const {
        return lx_ * (ly_ + 1);
    }

    int h(int r, int c) const;
    int v(int y, int j) const;
    bool is_horizontal(int q) const {
        return q < num_horizontal();
    }
    /// (row, col) of a horizontal edge or (y, j) of a vertical edge.
    std::pair<int, int> coords(int q) const;

    int plaquette_index(int y, int c) const {
        return y * lx_ + c;
    }
    int star_index(int r, int j) const {
        return r * (lx_ - 1) + (j - 1);
    }
    std::vector<int> plaquette_support(int y, int c) const;
    std::vector<int> star_support(int r, int j) const;
    /// Edges incident to vertex (r, j) for any j in [0, Lx]; boundary columns have no star but still have edges.
    std::vector<int> vertex_edges(int r, int j) const;
    /// Horizontal-edge pairs (h(r, c), h(r, c + 1)) carrying two-qubit XX rotations.
    std::vector<std::pair<int, int>> xx_pairs() const;

   private:
    int lx_, ly_, n_;
};

Lattice build_lattice(int lx, int ly);

/// Pauli operator i^phase X^x Z^z over the lattice qubits.
struct PauliString {
    std::vector<std::uint8_t> x, z;
    int phase = 0;

    PauliString() = default;
    explicit PauliString(int n) : x(n, 0), z(n, 0) {
    }
    int size() const {
        return (int)x.size();
    }
    int weight() const;
    bool is_identity() const;
    PauliString &operator*=(const PauliString &other);
    bool operator==(const PauliString &other) const = default;
};

PauliString pauli_x(int n, const std::vector<int> &support);
PauliString pauli_z(int n, const std::vector<int> &support);
bool commutes(const PauliString &a, const PauliString &b);
/// Rank over GF(2) of the symplectic vectors of the given operators.
int symplectic_rank(const std::vector<PauliString> &ops);

/// Plaquette (Z-type) generators row-major, followed by star (X-type) generators row-major.
std::vector<PauliString> stabilizers(const Lattice &lat);

struct Logicals {
    PauliString x_bar;  // X on the leftmost column of horizontal edges
    PauliString z_bar;  // Z on the bottom row of horizontal edges
};
Logicals logicals(const Lattice &lat);

/// Measured stabilizer outcomes; a set bit means the -1 eigenvalue.
struct Syndrome {
    std::vector<std::uint8_t> plaquette_bits;  // index y * Lx + c
    std::vector<std::uint8_t> star_bits;       // index r * (Lx - 1) + j - 1

    static Syndrome trivial(const Lattice &lat);
    bool is_trivial() const;
    /// Plaquette bits then star bits, four bits per hex digit, first bit most significant, zero padded.
    std::string to_hex() const;
    static Syndrome from_hex(const Lattice &lat, const std::string &hex);
    auto operator<=>(const Syndrome &other) const = default;
    bool operator==(const Syndrome &other) const = default;
};

/// Syndrome flipped by a Pauli error.
Syndrome syndrome_of(const Lattice &lat, const PauliString &error);

enum class ModelKind { X_ONLY, X_XX, GENERAL_XX };

const char *model_name(ModelKind kind);
ModelKind parse_model(const std::string &name);

/// Unitary error exp(i phi XX) on neighbouring horizontal edges times exp(i theta n.S) on every qubit.
struct ErrorModel {
    ModelKind kind = ModelKind::X_ONLY;
    double theta = 0;
    double phi = 0;
    std::array<double, 3> n{1, 0, 0};

    static ErrorModel x_only(double theta);
    static ErrorModel x_xx(double theta, double phi);
    static ErrorModel general(double theta, double phi, std::array<double, 3> n);
    /// theta = sqrt(tx^2 + ty^2) with axis (tx, ty, 0) / theta.
    static ErrorModel general_from_xy(double theta_x, double theta_y, double phi);

    /// Throws on malformed parameters; returns false when angles lie outside [0, pi/4].
    bool validate() const;
    int num_classes() const {
        return kind == ModelKind::GENERAL_XX ? 4 : 2;
    }
    /// Coefficient of X^x Z^z in exp(i theta n.S).
    std::complex<double> pauli_coefficient(int x, int z) const;
};

}  // namespace surfdec

#endif
