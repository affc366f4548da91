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

#include "surfdec/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace surfdec {

namespace {

std::string trim(const std::string &s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        out.push_back(trim(item));
    }
    return out;
}

double to_double(const std::string &s) {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    return v;
}

long to_long(const std::string &s) {
    std::size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size()) {
        throw std::invalid_argument("not an integer: '" + s + "'");
    }
    return v;
}

bool to_bool(const std::string &s) {
    if (s == "1" || s == "true" || s == "yes" || s == "on") {
        return true;
    }
    if (s == "0" || s == "false" || s == "no" || s == "off") {
        return false;
    }
    throw std::invalid_argument("not a boolean: '" + s + "'");
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

Aggregate aggregate(const std::vector<double> &v) {
    Aggregate a;
    a.count = (int)v.size();
    if (v.empty()) {
        a.mean = std::nan("");
        return a;
    }
    double m = 0;
    for (double x : v) {
        m += x;
    }
    m /= (double)v.size();
    double var = 0;
    for (double x : v) {
        var += (x - m) * (x - m);
    }
    a.mean = m;
    a.stderr_ = v.size() > 1 ? std::sqrt(var / (double)(v.size() - 1) / (double)v.size()) : 0.0;
    return a;
}

}  // namespace

double parse_angle(const std::string &text) {
    std::string t = trim(text);
    if (t.empty()) {
        throw std::invalid_argument("empty angle");
    }
    if (t.size() >= 2 && t.substr(t.size() - 2) == "pi") {
        std::string head = trim(t.substr(0, t.size() - 2));
        if (!head.empty() && head.back() == '*') {
            head.pop_back();
        }
        return (head.empty() ? 1.0 : to_double(head)) * std::numbers::pi;
    }
    return to_double(t);
}

std::vector<double> parse_grid(const std::string &text) {
    std::vector<double> out;
    for (const auto &item : split(text, ',')) {
        if (item.empty()) {
            continue;
        }
        if (item.find(':') != std::string::npos) {
            auto parts = split(item, ':');
            if (parts.size() != 3) {
                throw std::invalid_argument("range must be start:stop:count");
            }
            double a = parse_angle(parts[0]), b = parse_angle(parts[1]);
            long n = to_long(parts[2]);
            if (n < 1) {
                throw std::invalid_argument("range count must be positive");
            }
            for (long k = 0; k < n; k++) {
                out.push_back(n == 1 ? a : a + (b - a) * (double)k / (double)(n - 1));
            }
        } else {
            out.push_back(parse_angle(item));
        }
    }
    if (out.empty()) {
        throw std::invalid_argument("empty grid");
    }
    return out;
}

void apply_setting(SweepConfig &cfg, const std::string &key_in, const std::string &value_in) {
    std::string key = trim(key_in), value = trim(value_in);
    std::replace(key.begin(), key.end(), '-', '_');
    if (key == "model") {
        cfg.model = parse_model(value);
    } else if (key == "theta") {
        cfg.theta = parse_grid(value);
    } else if (key == "phi") {
        if (value == "theta") {
            cfg.diagonal = true;
        } else {
            cfg.phi = parse_grid(value);
            cfg.diagonal = false;
        }
    } else if (key == "diagonal") {
        cfg.diagonal = to_bool(value);
    } else if (key == "n") {
        auto parts = split(value, ',');
        if (parts.size() != 3) {
            throw std::invalid_argument("n needs three components");
        }
        for (int k = 0; k < 3; k++) {
            cfg.n[k] = to_double(parts[k]);
        }
    } else if (key == "nx") {
        cfg.n[0] = to_double(value);
    } else if (key == "ny") {
        cfg.n[1] = to_double(value);
    } else if (key == "nz") {
        cfg.n[2] = to_double(value);
    } else if (key == "theta_x") {
        cfg.theta_x = parse_grid(value);
    } else if (key == "theta_y") {
        cfg.theta_y = parse_grid(value);
    } else if (key == "sizes" || key == "l" || key == "lx") {
        cfg.sizes.clear();
        for (const auto &s : split(value, ',')) {
            cfg.sizes.push_back((int)to_long(s));
        }
    } else if (key == "aspect") {
        cfg.aspect = (int)to_long(value);
    } else if (key == "ly") {
        cfg.ly = (int)to_long(value);
    } else if (key == "chi") {
        cfg.chi = (std::size_t)to_long(value);
    } else if (key == "tol") {
        cfg.tol = to_double(value);
    } else if (key == "samples") {
        cfg.samples = (int)to_long(value);
    } else if (key == "seed") {
        cfg.seed = std::stoull(value);
    } else if (key == "init") {
        if (value == "plus") {
            cfg.init = LogicalInit::PLUS;
        } else if (value == "zero") {
            cfg.init = LogicalInit::ZERO;
        } else {
            throw std::invalid_argument("init must be plus or zero");
        }
    } else if (key == "basis") {
        if (value == "x" || value == "X") {
            cfg.basis = RetireBasis::X;
        } else if (value == "z" || value == "Z") {
            cfg.basis = RetireBasis::Z;
        } else {
            throw std::invalid_argument("basis must be x or z");
        }
    } else if (key == "workers") {
        cfg.workers = (int)to_long(value);
    } else if (key == "out") {
        cfg.out = value;
    } else if (key == "trace") {
        cfg.trace = to_bool(value);
    } else {
        throw std::invalid_argument("unknown setting '" + key + "'");
    }
}

SweepConfig load_config(const std::string &path, SweepConfig base) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read config " + path);
    }
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        try {
            apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
        } catch (const std::exception &e) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return base;
}

void validate(const SweepConfig &cfg) {
    if (cfg.theta.empty() || cfg.phi.empty() || cfg.sizes.empty()) {
        throw std::invalid_argument("grids must be nonempty");
    }
    if (cfg.samples < 1) {
        throw std::invalid_argument("samples must be at least 1");
    }
    if (cfg.aspect < 1) {
        throw std::invalid_argument("aspect must be at least 1");
    }
    if (cfg.chi < 2) {
        throw std::invalid_argument("chi must be at least 2");
    }
    if (!(cfg.tol >= 0)) {
        throw std::invalid_argument("tol must be nonnegative");
    }
    if (cfg.theta_x.empty() != cfg.theta_y.empty()) {
        throw std::invalid_argument("theta_x and theta_y come together");
    }
    if (!cfg.theta_x.empty() && cfg.model != ModelKind::GENERAL_XX) {
        throw std::invalid_argument("theta_x/theta_y need the xyz-xx model");
    }
    for (int l : cfg.sizes) {
        if (l < 2) {
            throw std::invalid_argument("Lx must be at least 2");
        }
    }
    for (const auto &p : expand_points(cfg)) {
        p.model.validate();
    }
}

std::vector<SweepPoint> expand_points(const SweepConfig &cfg) {
    std::vector<SweepPoint> pts;
    auto make = [&](double theta, double phi, std::array<double, 3> n) {
        switch (cfg.model) {
            case ModelKind::X_ONLY:
                return ErrorModel::x_only(theta);
            case ModelKind::X_XX:
                return ErrorModel::x_xx(theta, phi);
            case ModelKind::GENERAL_XX:
                return ErrorModel::general(theta, phi, n);
        }
        return ErrorModel{};
    };
    std::vector<double> phis = cfg.model == ModelKind::X_ONLY ? std::vector<double>{0.0} : cfg.phi;
    for (int lx : cfg.sizes) {
        int ly = cfg.ly > 0 ? cfg.ly : cfg.aspect * lx;
        auto push = [&](ErrorModel m) {
            pts.push_back(SweepPoint{(int)pts.size(), m, lx, ly});
        };
        if (!cfg.theta_x.empty()) {
            for (double tx : cfg.theta_x) {
                for (double ty : cfg.theta_y) {
                    for (double ph : phis) {
                        push(ErrorModel::general_from_xy(tx, ty, ph));
                    }
                }
            }
            continue;
        }
        for (double th : cfg.theta) {
            if (cfg.diagonal) {
                push(make(th, cfg.model == ModelKind::X_ONLY ? 0.0 : th, cfg.n));
                continue;
            }
            for (double ph : phis) {
                push(make(th, ph, cfg.n));
            }
        }
    }
    return pts;
}

RngKey sample_key(std::uint64_t seed, int point, int sample) {
    RngKey k;
    k.seed = splitmix64(seed ^ splitmix64(0x5eedULL + (std::uint64_t)point));
    k.sample = (std::uint64_t)sample;
    return k;
}

std::string SampleRow::flags() const {
    std::string f;
    auto add = [&](const char *s) {
        f += f.empty() ? "" : "|";
        f += s;
    };
    if (fe.capped) {
        add("capped");
    }
    if (fe.degenerate) {
        add("degenerate");
    }
    if (resampled > 0) {
        add("resampled");
    }
    if (!ok()) {
        add("failed");
    }
    return f;
}

SampleRow run_sample(const SweepPoint &pt, const SweepConfig &cfg, int sample, const IsoTns *tns) {
    auto t0 = std::chrono::steady_clock::now();
    SampleRow row;
    row.point = pt.index;
    row.sample = sample;
    row.where = pt;
    row.chi = cfg.chi;
    row.tol = cfg.tol;
    row.seed = cfg.seed;
    row.key = sample_key(cfg.seed, pt.index, sample);
    try {
        Lattice lat(pt.lx, pt.ly);
        IsoTns local(lat);
        if (!tns) {
            local = apply_errors(build_isotns(lat), pt.model);
            tns = &local;
        }
        SampleRecord rec = sample_syndrome(*tns, SamplerOptions{cfg.chi, cfg.tol, cfg.basis}, row.key);
        row.syndrome_hex = rec.syndrome.to_hex();
        row.log_prob = rec.log_prob;
        row.sample_max_dw = rec.max_discarded_weight;
        row.sample_max_chi = rec.chi_max_reached;
        row.resampled = rec.resampled_events;
        ClassAmplitudes amps = class_amplitudes(pt.model, lat, rec.syndrome, cfg.chi, cfg.tol);
        row.log_z = amps.log_z;
        DecodeResult d = decode(amps, cfg.init);
        row.fe = d.fe;
        row.steady_S = d.steady_S;
        row.fidelity_contrib = d.success_prob_contrib;
        for (const auto &tr : amps.traces) {
            row.max_dw_contract = std::max(row.max_dw_contract, tr.max_discarded);
            row.max_chi_contract = std::max(row.max_chi_contract, tr.max_bond);
        }
        if (cfg.trace) {
            row.traces = amps.traces;
        }
    } catch (const std::exception &e) {
        row.status = std::string("error: ") + e.what();
        std::replace(row.status.begin(), row.status.end(), ',', ';');
        std::replace(row.status.begin(), row.status.end(), '\n', ' ');
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

std::vector<PointSummary> summarize(const std::vector<SampleRow> &rows, const std::vector<SweepPoint> &points) {
    std::vector<PointSummary> out;
    for (const auto &pt : points) {
        PointSummary s;
        s.where = pt;
        std::vector<double> fx, fxf, fz, fzf, ss, fid, fre;
        for (const auto &r : rows) {
            if (r.point != pt.index) {
                continue;
            }
            s.rows++;
            if (!r.ok()) {
                s.failed++;
                continue;
            }
            bool flagged = r.fe.capped || r.fe.degenerate;
            s.flagged += flagged;
            fx.push_back(r.fe.dF_X);
            fz.push_back(r.fe.dF_Z);
            fre.push_back(std::abs(r.fe.dF_X_re));
            if (!flagged) {
                fxf.push_back(r.fe.dF_X);
                fzf.push_back(r.fe.dF_Z);
            }
            ss.push_back(r.steady_S);
            fid.push_back(r.fidelity_contrib);
        }
        s.dF_X = aggregate(fx);
        s.dF_X_filtered = aggregate(fxf);
        s.dF_Z = aggregate(fz);
        s.dF_Z_filtered = aggregate(fzf);
        s.steady_S = aggregate(ss);
        s.fidelity = aggregate(fid);
        s.dF_X_re = aggregate(fre);
        out.push_back(s);
    }
    return out;
}

std::string csv_header() {
    return "point,sample,model,lx,ly,theta,phi,nx,ny,nz,chi,tol,seed,rng_key,syndrome_hex,log_prob,"
           "sample_max_dw,sample_max_chi,log10_abs_z0,arg_z0,log10_abs_z1,arg_z1,log10_abs_z2,arg_z2,"
           "log10_abs_z3,arg_z3,dF_re,dF_abs,dF_X,dF_Z,flags,steady_S,max_dw_contract,max_chi_contract,"
           "fidelity_contrib,status";
}

std::string csv_row(const SampleRow &r) {
    const ErrorModel &m = r.where.model;
    std::ostringstream o;
    o << r.point << ',' << r.sample << ',' << model_name(m.kind) << ',' << r.where.lx << ',' << r.where.ly << ','
      << num(m.theta) << ',' << num(m.phi) << ',' << num(m.n[0]) << ',' << num(m.n[1]) << ',' << num(m.n[2]) << ','
      << r.chi << ',' << num(r.tol) << ',' << r.seed << ',' << r.key.to_string() << ',' << r.syndrome_hex << ','
      << num(r.log_prob) << ',' << num(r.sample_max_dw) << ',' << r.sample_max_chi;
    for (std::size_t k = 0; k < 4; k++) {
        if (k < r.log_z.size()) {
            double l10 = r.log_z[k].real() / std::numbers::ln10;
            o << ',' << (std::isinf(l10) ? std::string("-inf") : num(l10)) << ','
              << num(std::isinf(l10) ? 0.0 : r.log_z[k].imag());
        } else {
            o << ",,";
        }
    }
    bool general = m.kind == ModelKind::GENERAL_XX;
    o << ',' << num(r.fe.dF_re) << ',' << num(r.fe.dF) << ',' << num(r.fe.dF_X) << ','
      << (general ? num(r.fe.dF_Z) : std::string()) << ',' << r.flags() << ',' << num(r.steady_S) << ','
      << num(r.max_dw_contract) << ',' << r.max_chi_contract << ',' << num(r.fidelity_contrib) << ',' << r.status;
    return o.str();
}

SweepResult run_sweep(const SweepConfig &cfg, const std::function<void(int, int)> &progress) {
    validate(cfg);
    SweepResult res;
    res.points = expand_points(cfg);
    std::vector<IsoTns> networks;
    for (const auto &p : res.points) {
        Lattice lat(p.lx, p.ly);
        networks.push_back(apply_errors(build_isotns(lat), p.model));
    }
    int total = (int)res.points.size() * cfg.samples;
    res.rows.resize(total);
    std::atomic<int> next{0}, done{0};
    std::mutex mu;
    auto worker = [&]() {
        for (;;) {
            int t = next.fetch_add(1);
            if (t >= total) {
                return;
            }
            int p = t / cfg.samples, s = t % cfg.samples;
            res.rows[t] = run_sample(res.points[p], cfg, s, &networks[p]);
            int d = done.fetch_add(1) + 1;
            if (progress) {
                std::lock_guard<std::mutex> lock(mu);
                progress(d, total);
            }
        }
    };
    int nw = cfg.workers > 0 ? cfg.workers : (int)std::max(1u, std::thread::hardware_concurrency());
    nw = std::min(nw, std::max(total, 1));
    std::vector<std::thread> pool;
    for (int k = 1; k < nw; k++) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto &th : pool) {
        th.join();
    }
    res.summary = summarize(res.rows, res.points);

    if (cfg.out.empty()) {
        return res;
    }
    std::ofstream csv(cfg.out);
    if (!csv) {
        throw std::runtime_error("cannot write " + cfg.out);
    }
    csv << "# schema=" << kCsvSchema << '\n' << csv_header() << '\n';
    for (const auto &r : res.rows) {
        csv << csv_row(r) << '\n';
    }
    std::ofstream timing(cfg.out + ".timing.csv");
    timing << "point,sample,seconds\n";
    for (const auto &r : res.rows) {
        timing << r.point << ',' << r.sample << ',' << num(r.seconds) << '\n';
    }
    std::ofstream sum(cfg.out + ".summary.csv");
    sum << "# schema=" << kCsvSchema << "\npoint,model,lx,ly,theta,phi,nx,ny,nz,rows,failed,flagged,"
        << "dF_X_mean,dF_X_stderr,dF_X_filtered_mean,dF_X_filtered_stderr,dF_Z_mean,dF_Z_stderr,"
        << "dF_Z_filtered_mean,dF_Z_filtered_stderr,steady_S_mean,steady_S_stderr,fidelity_mean,fidelity_stderr,dF_X_re_mean,dF_X_re_stderr\n";
    for (const auto &s : res.summary) {
        const ErrorModel &m = s.where.model;
        sum << s.where.index << ',' << model_name(m.kind) << ',' << s.where.lx << ',' << s.where.ly << ','
            << num(m.theta) << ',' << num(m.phi) << ',' << num(m.n[0]) << ',' << num(m.n[1]) << ',' << num(m.n[2])
            << ',' << s.rows << ',' << s.failed << ',' << s.flagged;
        for (const Aggregate *a : {&s.dF_X, &s.dF_X_filtered, &s.dF_Z, &s.dF_Z_filtered, &s.steady_S, &s.fidelity,
                                 &s.dF_X_re}) {
            sum << ',' << num(a->mean) << ',' << num(a->stderr_);
        }
        sum << '\n';
    }
    if (cfg.trace) {
        std::ofstream tr(cfg.out + ".trace.csv");
        tr << "point,sample,class,step,kind,y,entropy,max_bond,discarded\n";
        for (const auto &r : res.rows) {
            for (std::size_t c = 0; c < r.traces.size(); c++) {
                const auto &steps = r.traces[c].steps;
                for (std::size_t k = 0; k < steps.size(); k++) {
                    tr << r.point << ',' << r.sample << ',' << c << ',' << k << ',' << steps[k].kind << ','
                       << steps[k].y << ',' << num(steps[k].entropy) << ',' << steps[k].max_bond << ','
                       << num(steps[k].discarded) << '\n';
                }
            }
        }
    }
    return res;
}

std::vector<PointSummary> read_summary(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read " + path);
    }
    std::vector<PointSummary> out;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!header) {
            header = true;
            continue;
        }
        auto f = split(line, ',');
        if (f.size() < 26) {
            throw std::runtime_error(path + ": short summary row");
        }
        PointSummary s;
        s.where.index = (int)to_long(f[0]);
        s.where.model.kind = parse_model(f[1]);
        s.where.lx = (int)to_long(f[2]);
        s.where.ly = (int)to_long(f[3]);
        s.where.model.theta = to_double(f[4]);
        s.where.model.phi = to_double(f[5]);
        for (int k = 0; k < 3; k++) {
            s.where.model.n[k] = to_double(f[6 + k]);
        }
        s.rows = (int)to_long(f[9]);
        s.failed = (int)to_long(f[10]);
        s.flagged = (int)to_long(f[11]);
        std::size_t col = 12;
        for (Aggregate *a : {&s.dF_X, &s.dF_X_filtered, &s.dF_Z, &s.dF_Z_filtered, &s.steady_S, &s.fidelity,
                             &s.dF_X_re}) {
            if (col + 1 >= f.size()) {
                break;
            }
            a->mean = to_double(f[col]);
            a->stderr_ = to_double(f[col + 1]);
            a->count = s.rows - s.failed;
            col += 2;
        }
        out.push_back(s);
    }
    return out;
}

}  // namespace surfdec
