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

// Batch sweeps: configuration, parallel (point, sample) execution, CSV output and per-point aggregates.

#ifndef SURFDEC_SWEEP_HPP
#define SURFDEC_SWEEP_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "surfdec/decode.hpp"
#include "surfdec/dense.hpp"
#include "surfdec/isotns.hpp"
#include "surfdec/lattice.hpp"
#include "surfdec/rng.hpp"

namespace surfdec {

inline constexpr const char *kCsvSchema = "surfdec-sweep/1";

struct SweepConfig {
    ModelKind model = ModelKind::X_ONLY;
    std::vector<double> theta{0.0};
    std::vector<double> phi{0.0};
    bool diagonal = false;  // phi follows theta point by point instead of forming a grid
    std::array<double, 3> n{1, 0, 0};
    std::vector<double> theta_x, theta_y;  // GENERAL_XX only; grid of (theta_x, theta_y) replaces theta and n
    std::vector<int> sizes{4};              // Lx values
    int aspect = 4;                         // Ly = aspect * Lx
    int ly = 0;                             // fixed Ly when positive
    std::size_t chi = 64;
    double tol = kDefaultSvdTol;
    int samples = 1;
    std::uint64_t seed = 1;
    LogicalInit init = LogicalInit::PLUS;
    RetireBasis basis = RetireBasis::X;
    int workers = 0;  // 0 picks the hardware concurrency
    std::string out;
    bool trace = false;
};

/// Accepts plain numbers, "<x>pi" multiples of pi, comma lists, and "start:stop:count" ranges.
std::vector<double> parse_grid(const std::string &text);
double parse_angle(const std::string &text);

/// Sets one configuration key (the same keys serve the config file and the command line).
void apply_setting(SweepConfig &cfg, const std::string &key, const std::string &value);
/// Reads "key = value" lines; '#' starts a comment.
SweepConfig load_config(const std::string &path, SweepConfig base = {});
void validate(const SweepConfig &cfg);

struct SweepPoint {
    int index = 0;
    ErrorModel model;
    int lx = 0, ly = 0;
};

std::vector<SweepPoint> expand_points(const SweepConfig &cfg);
RngKey sample_key(std::uint64_t seed, int point, int sample);

struct SampleRow {
    int point = 0, sample = 0;
    SweepPoint where;
    std::size_t chi = 0;
    double tol = 0;
    std::uint64_t seed = 0;
    RngKey key;
    std::string syndrome_hex;
    double log_prob = 0;
    double sample_max_dw = 0;
    std::size_t sample_max_chi = 0;
    std::vector<cplx> log_z;  // per class, natural log
    FreeEnergies fe;
    double steady_S = 0;
    double max_dw_contract = 0;
    std::size_t max_chi_contract = 0;
    double fidelity_contrib = 0;
    int resampled = 0;
    std::string status = "ok";
    double seconds = 0;
    std::vector<ContractionTrace> traces;

    bool ok() const {
        return status == "ok";
    }
    std::string flags() const;
};

/// Samples one syndrome at the point and decodes it.
SampleRow run_sample(const SweepPoint &pt, const SweepConfig &cfg, int sample, const IsoTns *tns = nullptr);

struct Aggregate {
    double mean = 0, stderr_ = 0;
    int count = 0;
};

struct PointSummary {
    SweepPoint where;
    int rows = 0, failed = 0, flagged = 0;
    Aggregate dF_X, dF_X_filtered, dF_Z, dF_Z_filtered, steady_S, fidelity;
    Aggregate dF_X_re;  // mean of |Re log ratio|, for comparison with the modulus
};

std::vector<PointSummary> summarize(const std::vector<SampleRow> &rows, const std::vector<SweepPoint> &points);

std::string csv_header();
std::string csv_row(const SampleRow &row);

struct SweepResult {
    std::vector<SweepPoint> points;
    std::vector<SampleRow> rows;  // ordered by (point, sample)
    std::vector<PointSummary> summary;
};

/// Runs every (point, sample) task. Writes <out>, <out>.summary.csv, <out>.timing.csv and optionally
/// <out>.trace.csv when cfg.out is set. Output is independent of the worker count.
SweepResult run_sweep(const SweepConfig &cfg, const std::function<void(int, int)> &progress = {});

/// Reads a <out>.summary.csv sidecar back.
std::vector<PointSummary> read_summary(const std::string &path);

}  // namespace surfdec

#endif
