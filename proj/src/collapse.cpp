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

#include "surfdec/collapse.hpp"

#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace surfdec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Curve {
    int size = 0;
    std::vector<double> x, y, s;  // sorted by x
};

std::map<int, std::vector<FssPoint>> by_size(std::span<const FssPoint> data) {
    std::map<int, std::vector<FssPoint>> out;
    for (const auto &p : data) {
        out[p.size].push_back(p);
    }
    for (auto &[size, pts] : out) {
        std::sort(pts.begin(), pts.end(), [](const auto &a, const auto &b) { return a.theta < b.theta; });
    }
    return out;
}

void check_data(std::span<const FssPoint> data) {
    auto groups = by_size(data);
    if (groups.size() < 2) {
        throw std::invalid_argument("collapse needs at least two sizes");
    }
    for (const auto &[size, pts] : groups) {
        if (size <= 0) {
            throw std::invalid_argument("sizes must be positive");
        }
        if (pts.size() < 4) {
            throw std::invalid_argument("collapse needs at least four theta points per size");
        }
    }
}

struct Objective {
    std::span<const FssPoint> data;
};

double gsl_objective(const gsl_vector *v, void *params) {
    auto *obj = static_cast<Objective *>(params);
    double tc = gsl_vector_get(v, 0), nu = gsl_vector_get(v, 1);
    if (!(nu > 0)) {
        return 1e300;
    }
    double r = collapse_residual(obj->data, tc, nu);
    return std::isfinite(r) ? r : 1e300;
}

}  // namespace

double collapse_residual(std::span<const FssPoint> data, double theta_c, double nu, int *pairs) {
    if (!(nu > 0)) {
        throw std::invalid_argument("nu must be positive");
    }
    std::vector<Curve> curves;
    for (const auto &[size, pts] : by_size(data)) {
        Curve c;
        c.size = size;
        double scale = std::pow((double)size, 1.0 / nu);
        for (const auto &p : pts) {
            c.x.push_back((p.theta - theta_c) * scale);
            c.y.push_back(p.value);
            c.s.push_back(p.sigma);
        }
        curves.push_back(std::move(c));
    }
    bool weighted = std::any_of(data.begin(), data.end(), [](const auto &p) { return p.sigma > 0; });
    double acc = 0;
    int n = 0;
    for (const auto &ci : curves) {
        for (std::size_t i = 0; i < ci.x.size(); i++) {
            for (const auto &cj : curves) {
                if (cj.size == ci.size) {
                    continue;
                }
                double xi = ci.x[i];
                if (xi < cj.x.front() || xi > cj.x.back()) {
                    continue;
                }
                auto it = std::upper_bound(cj.x.begin(), cj.x.end(), xi);
                std::size_t k = it == cj.x.end() ? cj.x.size() - 1 : (std::size_t)(it - cj.x.begin());
                k = std::max<std::size_t>(k, 1);
                double x0 = cj.x[k - 1], x1 = cj.x[k];
                double t = x1 > x0 ? (xi - x0) / (x1 - x0) : 0.0;
                double y = (1 - t) * cj.y[k - 1] + t * cj.y[k];
                double s = (1 - t) * cj.s[k - 1] + t * cj.s[k];
                double var = weighted ? ci.s[i] * ci.s[i] + s * s : 1.0;
                if (var <= 0) {
                    var = std::numeric_limits<double>::min();
                }
                acc += (ci.y[i] - y) * (ci.y[i] - y) / var;
                n++;
            }
        }
    }
    if (pairs) {
        *pairs = n;
    }
    return n == 0 ? kInf : acc / n;
}

CollapseFit collapse_fit(std::span<const FssPoint> data, const SearchBox &box) {
    check_data(data);
    if (!(box.theta_hi > box.theta_lo) || !(box.nu_hi > box.nu_lo) || box.nu_lo <= 0 || box.grid < 2) {
        throw std::invalid_argument("malformed search box");
    }
    CollapseFit fit;
    double best = kInf;
    double dt = (box.theta_hi - box.theta_lo) / (box.grid - 1);
    double dn = (box.nu_hi - box.nu_lo) / (box.grid - 1);
    for (int a = 0; a < box.grid; a++) {
        for (int b = 0; b < box.grid; b++) {
            double tc = box.theta_lo + a * dt, nu = box.nu_lo + b * dn;
            double r = collapse_residual(data, tc, nu);
            fit.grid.push_back({tc, nu, r});
            if (r < best) {
                best = r;
                fit.theta_c = tc;
                fit.nu = nu;
            }
        }
    }
    if (!std::isfinite(best)) {
        throw std::invalid_argument("no overlapping rescaled curves anywhere in the search box");
    }

    Objective obj{data};
    gsl_multimin_function fn{&gsl_objective, 2, &obj};
    gsl_vector *x = gsl_vector_alloc(2), *step = gsl_vector_alloc(2);
    gsl_vector_set(x, 0, fit.theta_c);
    gsl_vector_set(x, 1, fit.nu);
    gsl_vector_set(step, 0, dt);
    gsl_vector_set(step, 1, dn);
    gsl_multimin_fminimizer *m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2);
    gsl_multimin_fminimizer_set(m, &fn, x, step);
    for (int iter = 0; iter < 500; iter++) {
        if (gsl_multimin_fminimizer_iterate(m)) {
            break;
        }
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), 1e-7) == GSL_SUCCESS) {
            break;
        }
    }
    double tc = gsl_vector_get(m->x, 0), nu = gsl_vector_get(m->x, 1);
    double r = m->fval;
    gsl_multimin_fminimizer_free(m);
    gsl_vector_free(x);
    gsl_vector_free(step);
    // Stay inside the box; the simplex may wander out along a flat direction.
    if (r < best && tc >= box.theta_lo && tc <= box.theta_hi && nu >= box.nu_lo && nu <= box.nu_hi) {
        fit.theta_c = tc;
        fit.nu = nu;
        best = r;
    }
    fit.residual = collapse_residual(data, fit.theta_c, fit.nu, &fit.pairs);

    double eps_t = 0.5 * dt, eps_n = 0.5 * dn;
    fit.on_boundary = fit.theta_c - box.theta_lo < eps_t || box.theta_hi - fit.theta_c < eps_t ||
                      fit.nu - box.nu_lo < eps_n || box.nu_hi - fit.nu < eps_n;
    double lo = kInf, hi = 0;
    for (int b = 0; b < box.grid; b++) {
        double rr = collapse_residual(data, fit.theta_c, box.nu_lo + b * dn);
        lo = std::min(lo, rr);
        hi = std::max(hi, rr);
    }
    bool flat = std::isfinite(hi) && hi - lo <= 1e-3 * std::max(lo, 1e-12);
    fit.nu_unidentifiable = flat || box.nu_hi - fit.nu < eps_n || fit.nu - box.nu_lo < eps_n;
    return fit;
}

std::vector<Crossing> crossing_estimate(std::span<const FssPoint> data) {
    auto groups = by_size(data);
    if (groups.size() < 2) {
        throw std::invalid_argument("crossings need at least two sizes");
    }
    std::vector<Crossing> out;
    for (auto a = groups.begin(); a != groups.end(); ++a) {
        for (auto b = std::next(a); b != groups.end(); ++b) {
            std::map<double, std::pair<double, double>> common;
            std::map<double, double> ya;
            for (const auto &p : a->second) {
                ya[p.theta] = p.value;
            }
            for (const auto &p : b->second) {
                auto it = ya.find(p.theta);
                if (it != ya.end()) {
                    common[p.theta] = {it->second, p.value};
                }
            }
            Crossing c;
            c.size_a = a->first;
            c.size_b = b->first;
            double prev_t = 0, prev_d = 0;
            bool have_prev = false;
            for (const auto &[t, v] : common) {
                double d = v.first - v.second;
                if (d == 0) {
                    if (!c.found) {
                        c.theta = t;
                        c.found = true;
                    }
                    c.count++;
                } else if (have_prev && prev_d != 0 && (d > 0) != (prev_d > 0)) {
                    if (!c.found) {
                        c.theta = prev_t + (t - prev_t) * prev_d / (prev_d - d);
                        c.found = true;
                    }
                    c.count++;
                }
                prev_t = t;
                prev_d = d;
                have_prev = true;
            }
            out.push_back(c);
        }
    }
    return out;
}

}  // namespace surfdec
