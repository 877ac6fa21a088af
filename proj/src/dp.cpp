/*
   Copyright 2026 The bessplan authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "bessplan/dp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "bessplan/normal.hpp"
#include "bessplan/parallel.hpp"

namespace bessplan {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    std::vector<double> x(n), w(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double xi = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2 * k + 1) * xi * p1 - k * p2) / (k + 1);
            }
            const double dp = n * (xi * p0 - p1) / (xi * xi - 1.0);
            const double dx = p0 / dp;
            xi -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = 0.0;
        for (int k = 0; k < n; ++k) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2 * k + 1) * xi * p1 - k * p2) / (k + 1);
        }
        const double dp = n * (xi * p0 - p1) / (xi * xi - 1.0);
        x[i] = -xi;
        x[n - 1 - i] = xi;
        w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    return {x, w};
}

double ValueGrid::axis(int i) const {
    return n_b * static_cast<double>(i) / static_cast<double>(grid_points - 1);
}

double ValueGrid::value(int k, int i, int j) const {
    return values[k][static_cast<std::size_t>(i) * grid_points + j];
}

double ValueGrid::transfer_at(int k, int i, int j) const {
    return p12[k][static_cast<std::size_t>(i) * grid_points + j];
}

void ValueGrid::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "k,x1_kwh,x2_kwh,value,p12_kw\n";
    char line[160];
    for (int k = 0; k <= k_steps; ++k) {
        for (int i = 0; i < grid_points; ++i) {
            for (int j = 0; j < grid_points; ++j) {
                if (k < k_steps) {
                    std::snprintf(line, sizeof(line), "%d,%.9g,%.9g,%.12g,%.12g\n", k,
                                  axis(i), axis(j), value(k, i, j), transfer_at(k, i, j));
                } else {
                    std::snprintf(line, sizeof(line), "%d,%.9g,%.9g,%.12g,\n", k, axis(i),
                                  axis(j), value(k, i, j));
                }
                out << line;
            }
        }
    }
}

namespace {

constexpr int kGlNodes = 48;

double bilinear(const std::vector<double>& v, int grid, double h, double x, double y) {
    const double fx = x / h;
    const double fy = y / h;
    const int i = std::min(grid - 2, static_cast<int>(fx));
    const int j = std::min(grid - 2, static_cast<int>(fy));
    const double tx = fx - i;
    const double ty = fy - j;
    const std::size_t base = static_cast<std::size_t>(i) * grid + j;
    return (1.0 - tx) * ((1.0 - ty) * v[base] + ty * v[base + 1]) +
           tx * ((1.0 - ty) * v[base + grid] + ty * v[base + grid + 1]);
}

struct StepContext {
    double n_b = 0.0, dt = 0.0, sd = 0.0;
    bool next_is_terminal = false;  // next layer identically 1: use interval masses
    std::vector<double> gl_y, gl_w;    // nodes/weights mapped to [0, n_b]
    std::vector<double> v_next_gl;     // next layer sampled at the GL tensor grid
};

double one_step_value(const StepContext& c, double x1, double x2, double p12) {
    const double m1 = x1 - p12 * c.dt;
    const double m2 = x2 + p12 * c.dt;
    if (c.next_is_terminal) {
        const double mass1 =
            std_normal_cdf((c.n_b - m1) / c.sd) - std_normal_cdf(-m1 / c.sd);
        const double mass2 =
            std_normal_cdf((c.n_b - m2) / c.sd) - std_normal_cdf(-m2 / c.sd);
        return mass1 * mass2;
    }
    const int n = kGlNodes;
    double a[kGlNodes], b[kGlNodes];
    const double inv_sd = 1.0 / c.sd;
    for (int q = 0; q < n; ++q) {
        a[q] = c.gl_w[q] * std_normal_pdf((c.gl_y[q] - m1) * inv_sd) * inv_sd;
        b[q] = c.gl_w[q] * std_normal_pdf((c.gl_y[q] - m2) * inv_sd) * inv_sd;
    }
    double total = 0.0;
    for (int q = 0; q < n; ++q) {
        const double* row = &c.v_next_gl[static_cast<std::size_t>(q) * n];
        double inner = 0.0;
        for (int r = 0; r < n; ++r) inner += b[r] * row[r];
        total += a[q] * inner;
    }
    return total;
}

/// Golden-section maximization; returns (argmax, max). The scan seed keeps it
/// honest when the integrand flattens near the line limit.
std::pair<double, double> maximize_transfer(const StepContext& c, double x1, double x2,
                                            double p_line) {
    if (p_line == 0.0) return {0.0, one_step_value(c, x1, x2, 0.0)};

    constexpr int kScan = 33;
    double best_p = -p_line;
    double best_v = -1.0;
    for (int s = 0; s < kScan; ++s) {
        const double p = -p_line + 2.0 * p_line * s / (kScan - 1);
        const double v = one_step_value(c, x1, x2, p);
        if (v > best_v) {
            best_v = v;
            best_p = p;
        }
    }
    const double step = 2.0 * p_line / (kScan - 1);
    double lo = std::max(-p_line, best_p - step);
    double hi = std::min(p_line, best_p + step);

    constexpr double kInvPhi = 0.6180339887498949;
    double c1 = hi - kInvPhi * (hi - lo);
    double c2 = lo + kInvPhi * (hi - lo);
    double f1 = one_step_value(c, x1, x2, c1);
    double f2 = one_step_value(c, x1, x2, c2);
    while (hi - lo > 1e-10) {
        if (f1 > f2) {
            hi = c2;
            c2 = c1;
            f2 = f1;
            c1 = hi - kInvPhi * (hi - lo);
            f1 = one_step_value(c, x1, x2, c1);
        } else {
            lo = c1;
            c1 = c2;
            f1 = f2;
            c2 = lo + kInvPhi * (hi - lo);
            f2 = one_step_value(c, x1, x2, c2);
        }
    }
    if (f1 > best_v) {
        best_v = f1;
        best_p = c1;
    }
    if (f2 > best_v) {
        best_v = f2;
        best_p = c2;
    }
    return {best_p, best_v};
}

ValueGrid dp_run(double n_b, double p_line, double sigma, double t_f, int k_steps,
                 int grid_points, const TransferLaw* law) {
    if (!std::isfinite(n_b) || n_b <= 0.0)
        throw std::invalid_argument("dp: n_b must be > 0");
    if (!std::isfinite(sigma) || sigma == 0.0)
        throw std::invalid_argument("dp: sigma must be nonzero");
    if (!std::isfinite(p_line) || p_line < 0.0)
        throw std::invalid_argument("dp: p_line must be >= 0");
    if (grid_points < 3) throw std::invalid_argument("dp: grid_points must be >= 3");
    if (k_steps < 0) throw std::invalid_argument("dp: k_steps must be >= 0");

    ValueGrid vg;
    vg.n_b = n_b;
    vg.grid_points = grid_points;
    vg.k_steps = k_steps;
    const std::size_t nodes = static_cast<std::size_t>(grid_points) * grid_points;
    vg.values.assign(k_steps + 1, std::vector<double>());
    vg.values[k_steps].assign(nodes, 1.0);  // terminal condition
    if (k_steps == 0) {
        vg.dt = 0.0;
        return vg;
    }

    if (!std::isfinite(t_f) || t_f <= 0.0)
        throw std::invalid_argument("dp: t_f must be > 0");
    const double dt = t_f / k_steps;
    if (!(n_b - p_line * dt > 0.0))
        throw std::invalid_argument("dp: step too coarse, requires n_b - p_line*dt > 0");
    vg.dt = dt;
    vg.p12.assign(k_steps, std::vector<double>(nodes, 0.0));

    const double h = n_b / (grid_points - 1);
    StepContext ctx;
    ctx.n_b = n_b;
    ctx.dt = dt;
    ctx.sd = std::abs(sigma) * std::sqrt(dt);

    auto [gx, gw] = gauss_legendre(kGlNodes);
    ctx.gl_y.resize(kGlNodes);
    ctx.gl_w.resize(kGlNodes);
    for (int q = 0; q < kGlNodes; ++q) {
        ctx.gl_y[q] = 0.5 * n_b * (gx[q] + 1.0);
        ctx.gl_w[q] = 0.5 * n_b * gw[q];
    }
    ctx.v_next_gl.assign(static_cast<std::size_t>(kGlNodes) * kGlNodes, 0.0);

    const unsigned threads = effective_threads(0);
    for (int k = k_steps - 1; k >= 0; --k) {
        ctx.next_is_terminal = (k == k_steps - 1);
        if (!ctx.next_is_terminal) {
            const std::vector<double>& next = vg.values[k + 1];
            for (int q = 0; q < kGlNodes; ++q)
                for (int r = 0; r < kGlNodes; ++r)
                    ctx.v_next_gl[static_cast<std::size_t>(q) * kGlNodes + r] =
                        bilinear(next, grid_points, h, ctx.gl_y[q], ctx.gl_y[r]);
        }

        std::vector<double>& layer = vg.values[k];
        layer.assign(nodes, 0.0);
        std::vector<double>& transfers = vg.p12[k];
        parallel_for(grid_points, threads, [&](std::uint64_t ib, std::uint64_t ie) {
            for (std::uint64_t i = ib; i < ie; ++i) {
                const double x1 = h * static_cast<double>(i);
                for (int j = 0; j < grid_points; ++j) {
                    const double x2 = h * j;
                    double p = 0.0, v = 0.0;
                    if (law) {
                        p = std::clamp((*law)(x1, x2, k), -p_line, p_line);
                        v = one_step_value(ctx, x1, x2, p);
                    } else {
                        std::tie(p, v) = maximize_transfer(ctx, x1, x2, p_line);
                    }
                    if (!std::isfinite(v))
                        throw std::runtime_error("dp: inner maximization did not converge");
                    layer[i * grid_points + j] = std::clamp(v, 0.0, 1.0);
                    transfers[i * grid_points + j] = p;
                }
            }
        });
    }
    return vg;
}

}  // namespace

ValueGrid dp_value_iteration(double n_b, double p_line, double sigma, double t_f,
                             int k_steps, int grid_points) {
    return dp_run(n_b, p_line, sigma, t_f, k_steps, grid_points, nullptr);
}

ValueGrid dp_policy_value(double n_b, double p_line, double sigma, double t_f,
                          int k_steps, int grid_points, const TransferLaw& law) {
    return dp_run(n_b, p_line, sigma, t_f, k_steps, grid_points, &law);
}

ValueGrid dp_policy_value(double n_b, double p_line, double sigma, double t_f,
                          int k_steps, int grid_points, const TransferPolicy& policy) {
    policy.validate(n_b);
    TransferLaw law = [&policy](double x1, double x2, int) {
        return policy.transfer(x1, x2);
    };
    return dp_run(n_b, p_line, sigma, t_f, k_steps, grid_points, &law);
}

ConcavityReport concavity_check(const ValueGrid& grid, int k, double tol) {
    if (k < 0 || k > grid.k_steps)
        throw std::invalid_argument("concavity_check: step index out of range");
    const int G = grid.grid_points;
    const std::vector<double>& v = grid.values[k];
    auto at = [&](int i, int j) { return v[static_cast<std::size_t>(i) * G + j]; };

    ConcavityReport report;
    report.worst_margin = -1e300;
    const int dirs[4][2] = {{0, 1}, {1, 0}, {1, 1}, {1, -1}};
    for (const auto& d : dirs) {
        for (int i = 0; i < G; ++i) {
            for (int j = 0; j < G; ++j) {
                for (int m = 1;; ++m) {
                    const int ie = i + 2 * m * d[0];
                    const int je = j + 2 * m * d[1];
                    if (ie < 0 || ie >= G || je < 0 || je >= G) break;
                    const double mid = at(i + m * d[0], j + m * d[1]);
                    const double chord = 0.5 * (at(i, j) + at(ie, je));
                    const double deficit = chord - mid;
                    report.worst_margin = std::max(report.worst_margin, deficit);
                    if (deficit > tol) ++report.violations;
                    ++report.segments_checked;
                }
            }
        }
    }
    if (report.segments_checked == 0) report.worst_margin = 0.0;
    return report;
}

}  // namespace bessplan
