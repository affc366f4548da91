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

// Counter-based random numbers: every draw is a pure function of (seed, sample, stream, event).

#ifndef SURFDEC_RNG_HPP
#define SURFDEC_RNG_HPP

#include <cstdint>
#include <string>

namespace surfdec {

std::uint64_t splitmix64(std::uint64_t x);

struct RngKey {
    std::uint64_t seed = 0;
    std::uint64_t sample = 0;

    /// 64-bit digest, used as the printable key of a sample.
    std::uint64_t digest() const;
    std::string to_string() const;
};

/// Uniform double in [0, 1) with 53 random bits.
double uniform(const RngKey &key, std::uint64_t stream, std::uint64_t event);

}  // namespace surfdec

#endif
