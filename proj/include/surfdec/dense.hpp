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

// Exact state-vector routines for small codes. They serve as ground truth for the tensor-network code.

#ifndef SURFDEC_DENSE_HPP
#define SURFDEC_DENSE_HPP

#include <array>
#include <complex>
#include <map>
#include <vector>

#include "surfdec/lattice.hpp"

namespace surfdec {

/// Amplitudes over 2^N basis states. Qubit q is bit N - 1 - q of the index, so qubit 0 is most significant,
/// matching the last-index-fastest layout of a tensor with one leg per qubit.
using StateVector = std::vector<std::complex<double>>;

inline constexpr int kMaxDenseQubits = 22;
inline constexpr int kMaxDistributionQubits = 16;

enum class LogicalInit { PLUS, ZERO };

StateVector exact_logical_state(const Lattice &lat, LogicalInit which);
StateVector exact_corrupt(const StateVector &state, const Lattice &lat, const ErrorModel &model);

StateVector apply_pauli(const StateVector &state, const PauliString &p);
std::complex<double> inner(const StateVector &a, const StateVector &b);
double norm(const StateVector &a);
std::complex<double> pauli_expectation(const StateVector &state, const PauliString &p);
/// Applies prod_k (1 + (-1)^{s_k} S_k) / 2 over all generators; no renormalization.
StateVector project_syndrome(const StateVector &state, const Lattice &lat, const Syndrome &s);

std::map<Syndrome, double> exact_syndrome_distribution(const StateVector &state, const Lattice &lat);

/// <Psi_0| Xbar^a Z^{Rz} X^{Rx} Pi_s |state>.
std::complex<double> exact_class_amplitude(const StateVector &state, const Lattice &lat, const Syndrome &s,
                                          const PauliString &rx, const PauliString &rz, int a);

/// Coefficients of Z^{Rz} X^{Rx} Pi_s |state> on (|Psi_0>, |Psi_1>) for ZERO or (|Psi_+>, |Psi_->) for PLUS.
std::array<std::complex<double>, 2> exact_logical_coefficients(const StateVector &state, const Lattice &lat,
                                                               const Syndrome &s, const PauliString &rx,
                                                               const PauliString &rz, LogicalInit basis);

/// Class amplitudes of the model for syndrome s relative to the reference strings (Rx, Rz).
/// Two entries (Z_0, Z_1) for the X models; four entries Z_{ab} at index 2a + b for GENERAL_XX.
/// GENERAL_XX needs the corrupted |Psi_0> and |Psi_+> to pin all four amplitudes.
std::vector<std::complex<double>> exact_class_amplitudes(const Lattice &lat, const ErrorModel &model,
                                                         const Syndrome &s, const PauliString &rx,
                                                         const PauliString &rz);

/// Probability of syndrome s for a logically maximally mixed input (average over |Psi_0>, |Psi_1>).
double exact_mixed_syndrome_probability(const Lattice &lat, const ErrorModel &model, const Syndrome &s);

}  // namespace surfdec

#endif
