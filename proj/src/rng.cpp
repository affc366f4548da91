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

#include "surfdec/rng.hpp"

#include <cstdio>

namespace surfdec {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t RngKey::digest() const {
    return splitmix64(splitmix64(seed) ^ (sample * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
}

std::string RngKey::to_string() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)digest());
    return buf;
}

double uniform(const RngKey &key, std::uint64_t stream, std::uint64_t event) {
    std::uint64_t h = key.digest();
    h = splitmix64(h ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
    h = splitmix64(h ^ (event * 0x9e3779b97f4a7c15ULL));
    return (double)(h >> 11) * 0x1.0p-53;
}

}  // namespace surfdec
