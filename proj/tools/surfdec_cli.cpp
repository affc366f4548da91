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

// surfdec command line: sample, decode, sweep, collapse, oracle-check.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "surfdec/collapse.hpp"
#include "surfdec/decode.hpp"
#include "surfdec/dense.hpp"
#include "surfdec/isotns.hpp"
#include "surfdec/rbim.hpp"
#include "surfdec/sweep.hpp"

using namespace surfdec;

namespace {

// Flags shared by every subcommand. They are kept as strings and funnelled through apply_setting so the
// command line and config files accept the same spellings.
struct Common {
    std::vector<std::pair<std::string, std::string>> given;
    std::string config;
};

void add_common(CLI::App *app, Common &c) {
    static const std::vector<std::pair<std::string, std::string>> keys = {
        {"model", "x, x-xx or xyz-xx"},
        {"theta", "rotation angle(s); '0.1pi', lists a,b,c or ranges start:stop:count"},
        {"phi", "XX angle(s), or 'theta' to follow theta"},
        {"nx", "rotation axis x"},
        {"ny", "rotation axis y"},
        {"nz", "rotation axis z"},
        {"theta-x", "xyz-xx: angle about x"},
        {"theta-y", "xyz-xx: angle about y"},
        {"lx", "plaquette columns (list for sweeps)"},
        {"l", "same as --lx"},
        {"ly", "plaquette rows; default aspect * Lx"},
        {"aspect", "Ly = aspect * Lx"},
        {"chi", "maximum bond dimension"},
        {"tol", "relative singular value cutoff"},
        {"samples", "syndrome samples per point"},
        {"seed", "base seed"},
        {"init", "plus or zero"},
        {"basis", "retirement basis of the sampler, x or z"},
        {"workers", "worker threads (0 = all cores)"},
        {"out", "output path"},
    };
    for (const auto &[key, help] : keys) {
        std::string k = key;
        app->add_option_function<std::string>(
            "--" + k, [&c, k](const std::string &v) { c.given.emplace_back(k, v); }, help);
    }
    app->add_flag_function(
        "--trace", [&c](std::int64_t) { c.given.emplace_back("trace", "1"); }, "write per-step entropies");
    app->add_option("--config", c.config, "key = value file; flags override it");
}

SweepConfig make_config(const Common &c) {
    SweepConfig cfg;
    cfg.workers = 1;
    if (!c.config.empty()) {
        cfg = load_config(c.config, cfg);
    }
    for (const auto &[k, v] : c.given) {
        apply_setting(cfg, k, v);
    }
    return cfg;
}

// Single point: first entry of every grid.
SweepPoint single_point(const SweepConfig &cfg) {
    SweepConfig one = cfg;
    validate(one);
    auto pts = expand_points(one);
    if (pts.size() != 1) {
        std::cerr << "note: " << pts.size() << " points configured, using the first\n";
    }
    return pts.front();
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

int cmd_sample(const Common &c) {
    SweepConfig cfg = make_config(c);
    SweepPoint pt = single_point(cfg);
    Lattice lat(pt.lx, pt.ly);
    IsoTns tns = apply_errors(build_isotns(lat), pt.model);
    std::ofstream file;
    std::ostream *out = &std::cout;
    if (!cfg.out.empty()) {
        file.open(cfg.out);
        if (!file) {
            throw std::runtime_error("cannot write " + cfg.out);
        }
        out = &file;
    }
    *out << "sample,rng_key,syndrome_hex,log_prob,log_prob_retired,max_discarded,max_chi,peak_sites,resampled\n";
    for (int k = 0; k < cfg.samples; k++) {
        RngKey key = sample_key(cfg.seed, 0, k);
        SampleRecord r = sample_syndrome(tns, SamplerOptions{cfg.chi, cfg.tol, cfg.basis}, key);
        *out << k << ',' << key.to_string() << ',' << r.syndrome.to_hex() << ',' << fmt(r.log_prob) << ','
             << fmt(r.log_prob_retired) << ',' << fmt(r.max_discarded_weight) << ',' << r.chi_max_reached << ','
             << r.peak_sites << ',' << r.resampled_events << '\n';
    }
    return 0;
}

int cmd_decode(const Common &c, const std::string &hex, bool dump) {
    SweepConfig cfg = make_config(c);
    SweepPoint pt = single_point(cfg);
    Lattice lat(pt.lx, pt.ly);
    Syndrome s;
    if (hex.empty()) {
        IsoTns tns = apply_errors(build_isotns(lat), pt.model);
        s = sample_syndrome(tns, SamplerOptions{cfg.chi, cfg.tol, cfg.basis}, sample_key(cfg.seed, 0, 0)).syndrome;
    } else {
        s = Syndrome::from_hex(lat, hex);
    }
    if (dump) {
        StraightGauge sg = straight_gauge(lat, s);
        std::cout << build_network(pt.model, sg.bonds, lat).dump();
        return 0;
    }
    ClassAmplitudes amps = class_amplitudes(pt.model, lat, s, cfg.chi, cfg.tol);
    DecodeResult d = decode(amps, cfg.init);
    std::cout << "model " << model_name(pt.model.kind) << "  Lx " << pt.lx << "  Ly " << pt.ly << "\n"
              << "syndrome " << s.to_hex() << "\n";
    for (std::size_t k = 0; k < amps.log_z.size(); k++) {
        double l10 = amps.log_z[k].real() / std::numbers::ln10;
        std::cout << "class " << k << "  log10|Z| " << fmt(l10) << "  arg " << fmt(amps.log_z[k].imag()) << "\n";
    }
    std::cout << "chosen_class " << d.chosen_class << "\n"
              << "dF " << fmt(d.fe.dF) << "  dF_re " << fmt(d.fe.dF_re) << "\n"
              << "dF_X " << fmt(d.fe.dF_X) << "  dF_Z " << fmt(d.fe.dF_Z) << "\n"
              << "capped " << d.fe.capped << "  degenerate " << d.fe.degenerate << "\n"
              << "success_prob_contrib " << fmt(d.success_prob_contrib) << "\n"
              << "post_coeffs (" << fmt(d.post_coeffs[0].real()) << "," << fmt(d.post_coeffs[0].imag()) << ") ("
              << fmt(d.post_coeffs[1].real()) << "," << fmt(d.post_coeffs[1].imag()) << ")\n"
              << "steady_S " << fmt(d.steady_S) << "\n";
    if (c.given.end() != std::find_if(c.given.begin(), c.given.end(), [](auto &g) { return g.first == "trace"; })) {
        const auto &tr = amps.traces[d.chosen_class];
        std::cout << "step kind y entropy max_bond discarded\n";
        for (std::size_t k = 0; k < tr.steps.size(); k++) {
            const auto &st = tr.steps[k];
            std::cout << k << ' ' << st.kind << ' ' << st.y << ' ' << fmt(st.entropy) << ' ' << st.max_bond << ' '
                      << fmt(st.discarded) << "\n";
        }
    }
    return 0;
}

int cmd_sweep(const Common &c, bool quiet) {
    SweepConfig cfg = make_config(c);
    if (cfg.out.empty()) {
        throw std::invalid_argument("sweep needs --out");
    }
    int last = -1;
    auto progress = [&](int done, int total) {
        int pct = (int)(100.0 * done / total);
        if (!quiet && pct != last) {
            last = pct;
            std::fprintf(stderr, "\r%d/%d (%d%%)", done, total, pct);
            if (done == total) {
                std::fprintf(stderr, "\n");
            }
        }
    };
    SweepResult res = run_sweep(cfg, progress);
    std::printf("%-7s %3s %4s %10s %10s %12s %10s %12s %10s %6s\n", "model", "Lx", "Ly", "theta/pi", "phi/pi", "dF_X",
                "+-", "steady_S", "+-", "flag");
    for (const auto &s : res.summary) {
        std::printf("%-7s %3d %4d %10.4f %10.4f %12.5g %10.3g %12.5g %10.3g %3d/%d\n", model_name(s.where.model.kind),
                    s.where.lx, s.where.ly, s.where.model.theta / std::numbers::pi,
                    s.where.model.phi / std::numbers::pi, s.dF_X.mean, s.dF_X.stderr_, s.steady_S.mean,
                    s.steady_S.stderr_, s.flagged + s.failed, s.rows);
    }
    return 0;
}

int cmd_collapse(const std::string &in, const std::string &column, const SearchBox &box_in) {
    auto summary = read_summary(in);
    std::vector<FssPoint> data;
    for (const auto &s : summary) {
        const Aggregate *a = nullptr;
        if (column == "dF_X") {
            a = &s.dF_X;
        } else if (column == "dF_X_filtered") {
            a = &s.dF_X_filtered;
        } else if (column == "dF_Z") {
            a = &s.dF_Z;
        } else if (column == "dF_X_re") {
            a = &s.dF_X_re;
        } else if (column == "steady_S") {
            a = &s.steady_S;
        } else {
            throw std::invalid_argument("unknown column " + column);
        }
        data.push_back({s.where.model.theta, s.where.lx, a->mean, a->stderr_});
    }
    CollapseFit fit = collapse_fit(data, box_in);
    std::cout << "theta_c " << fmt(fit.theta_c) << " (" << fmt(fit.theta_c / std::numbers::pi) << " pi)\n"
              << "nu " << fmt(fit.nu) << "\n"
              << "residual " << fmt(fit.residual) << " over " << fit.pairs << " pairs\n"
              << "on_boundary " << fit.on_boundary << "  nu_unidentifiable " << fit.nu_unidentifiable << "\n";
    for (const auto &cr : crossing_estimate(data)) {
        std::cout << "crossing L=" << cr.size_a << ",L=" << cr.size_b << ": ";
        if (cr.found) {
            std::cout << fmt(cr.theta / std::numbers::pi) << " pi (" << cr.count << " sign changes)\n";
        } else {
            std::cout << "none\n";
        }
    }
    return 0;
}

int cmd_oracle(const Common &c, int instances) {
    SweepConfig cfg = make_config(c);
    cfg.tol = 0;
    cfg.chi = std::max<std::size_t>(cfg.chi, 1u << 12);
    SweepPoint pt = single_point(cfg);
    Lattice lat(pt.lx, pt.ly);
    if (lat.num_qubits() > kMaxDenseQubits) {
        throw std::invalid_argument("lattice too large for the dense oracle");
    }
    IsoTns tns = apply_errors(build_isotns(lat), pt.model);
    double worst = 0, worst_p = 0;
    for (int k = 0; k < instances; k++) {
        Syndrome s = sample_syndrome(tns, SamplerOptions{cfg.chi, kDefaultSvdTol, cfg.basis},
                                     sample_key(cfg.seed, 0, k))
                         .syndrome;
        OracleCheck oc = oracle_check(pt.model, lat, s, cfg.chi, cfg.tol);
        worst = std::max(worst, oc.max_rel_err);
        worst_p = std::max(worst_p, oc.p_rel_err);
        std::cout << s.to_hex() << "  amp_rel_err " << fmt(oc.max_rel_err) << "  per_class "
                  << fmt(oc.max_class_rel_err) << "  P_s " << fmt(oc.p_exact)
                  << "  P_s_rel_err " << fmt(oc.p_rel_err) << "\n";
    }
    bool ok = worst <= 1e-9 && worst_p <= 1e-9;
    std::cout << (ok ? "PASS" : "FAIL") << "  max amp_rel_err " << fmt(worst) << "  max P_s_rel_err " << fmt(worst_p)
              << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Tensor-network maximum-likelihood decoding of the surface code under unitary errors"};
    app.require_subcommand(1);

    Common c_sample, c_decode, c_sweep, c_oracle;
    auto *sample = app.add_subcommand("sample", "draw Born syndromes from the isometric network");
    add_common(sample, c_sample);

    auto *decode_cmd = app.add_subcommand("decode", "class amplitudes and defect free energies for one syndrome");
    add_common(decode_cmd, c_decode);
    std::string hex;
    bool dump = false;
    decode_cmd->add_option("--syndrome", hex, "syndrome hex; sampled when omitted");
    decode_cmd->add_flag("--dump-network", dump, "print the class-0 network and exit");

    auto *sweep = app.add_subcommand("sweep", "batch sweep to CSV");
    add_common(sweep, c_sweep);
    bool quiet = false;
    sweep->add_flag("--quiet", quiet, "no progress on stderr");

    auto *collapse = app.add_subcommand("collapse", "finite-size scaling fit of a sweep summary");
    std::string in, column = "dF_X", tlo = "0", thi = "0.25pi";
    SearchBox box;
    collapse->add_option("--in", in, "<sweep>.summary.csv")->required();
    collapse->add_option("--column", column, "dF_X, dF_X_filtered, dF_X_re, dF_Z or steady_S");
    collapse->add_option("--theta-lo", tlo, "search box");
    collapse->add_option("--theta-hi", thi, "search box");
    collapse->add_option("--nu-lo", box.nu_lo, "search box");
    collapse->add_option("--nu-hi", box.nu_hi, "search box");
    collapse->add_option("--grid", box.grid, "coarse grid points per axis");

    auto *oracle = app.add_subcommand("oracle-check", "compare contraction with the dense state vector");
    add_common(oracle, c_oracle);
    int instances = 10;
    oracle->add_option("--instances", instances, "sampled syndromes to check");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*sample) {
            return cmd_sample(c_sample);
        }
        if (*decode_cmd) {
            return cmd_decode(c_decode, hex, dump);
        }
        if (*sweep) {
            return cmd_sweep(c_sweep, quiet);
        }
        if (*collapse) {
            box.theta_lo = parse_angle(tlo);
            box.theta_hi = parse_angle(thi);
            return cmd_collapse(in, column, box);
        }
        if (*oracle) {
            return cmd_oracle(c_oracle, instances);
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
