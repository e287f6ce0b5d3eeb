#include "bhlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace bhlab::quad {

void QuadratureSpec::validate() const {
    if (!(inner_cut > 0.0) || !(inner_cut < 1.0) || !(outer_cut > 1.0))
        throw config_error("quadrature spec requires 0 < inner_cut < 1 < outer_cut");
    if (panels_per_decade < 8)
        throw config_error("quadrature spec requires panels_per_decade >= 8");
}

const GaussRule& gauss_rule(int order) {
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    // Newton iteration on Legendre polynomials, symmetric roots
    for (int i = 0; i < (order + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = order * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[order - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[order - 1 - i] = w;
    }
    return cache.emplace(order, std::move(rule)).first->second;
}

namespace {

double gl16(const Fn& f, double a, double b) {
    const GaussRule& rule = gauss_rule(16);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 16; ++i)
        s += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return s * half;
}

struct Panel {
    double a, b;
    double fine;  // two-half value (kept)
    double err;   // |fine - coarse|
};

Panel make_panel(const Fn& f, double a, double b) {
    double coarse = gl16(f, a, b);
    double m = 0.5 * (a + b);
    double fine = gl16(f, a, m) + gl16(f, m, b);
    return Panel{a, b, fine, std::abs(fine - coarse)};
}

} // namespace

double integrate_panels(const Fn& f, std::span<const double> edges,
                        const PanelOptions& opts, double* err_out) {
    if (edges.size() < 2)
        throw config_error("integrate_panels: need at least two edges");
    std::vector<Panel> panels;
    panels.reserve(edges.size() - 1);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (!(edges[i] < edges[i + 1]))
            throw config_error("integrate_panels: edges must be increasing");
        panels.push_back(make_panel(f, edges[i], edges[i + 1]));
    }

    // the relative target is measured against the L1 panel mass: for
    // cancellation-heavy integrals the absolute value of the result is not
    // an achievable error scale
    double value = 0.0, err = 0.0;
    for (int round = 0; round <= opts.max_rounds; ++round) {
        value = 0.0;
        err = 0.0;
        double l1 = 0.0;
        for (const Panel& p : panels) {
            value += p.fine;
            err += p.err;
            l1 += std::abs(p.fine);
        }
        double tol = opts.abs_tol + opts.rel_tol * std::max(std::abs(value), l1);
        if (err <= tol || round == opts.max_rounds) break;

        // bisect the panels carrying the bulk of the error estimate
        double cut = std::max(tol / (4.0 * panels.size()), err / (8.0 * panels.size()));
        std::vector<Panel> next;
        next.reserve(panels.size() + 16);
        for (const Panel& p : panels) {
            if (p.err > cut) {
                double m = 0.5 * (p.a + p.b);
                if (m > p.a && m < p.b) {
                    next.push_back(make_panel(f, p.a, m));
                    next.push_back(make_panel(f, m, p.b));
                    continue;
                }
            }
            next.push_back(p);
        }
        if (next.size() == panels.size()) break; // nothing splittable
        panels.swap(next);
    }

    double l1 = 0.0;
    for (const Panel& p : panels) l1 += std::abs(p.fine);
    double tol = opts.abs_tol + opts.rel_tol * std::max(std::abs(value), l1);
    if (err > tol && opts.throw_on_failure)
        throw quadrature_error("adaptive quadrature did not converge", err);
    if (err_out) *err_out = err;
    return value;
}

void append_log_edges(std::vector<double>& edges, double from, double to,
                      int per_decade) {
    if (!(from > 0.0) || !(to > from))
        throw config_error("append_log_edges: need 0 < from < to");
    per_decade = std::max(per_decade, 4);
    if (edges.empty() || edges.back() < from) edges.push_back(from);
    const double ratio = std::pow(10.0, 1.0 / per_decade);
    double x = from;
    while (x * ratio < to) {
        x *= ratio;
        edges.push_back(x);
    }
    edges.push_back(to);
}

void apply_width_cap(std::vector<double>& edges, double cap) {
    if (!(cap > 0.0) || !std::isfinite(cap)) return;
    std::vector<double> out;
    out.reserve(edges.size());
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        out.push_back(edges[i]);
        double w = edges[i + 1] - edges[i];
        if (w > cap) {
            int pieces = static_cast<int>(std::ceil(w / cap));
            for (int j = 1; j < pieces; ++j)
                out.push_back(edges[i] + w * j / pieces);
        }
    }
    out.push_back(edges.back());
    edges.swap(out);
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n)
        throw config_error("CubicSpline: need >= 3 points");
    y2_.assign(n, 0.0);
    std::vector<double> u(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double sig = (x_[i] - x_[i - 1]) / (x_[i + 1] - x_[i - 1]);
        double p = sig * y2_[i - 1] + 2.0;
        y2_[i] = (sig - 1.0) / p;
        u[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]) -
               (y_[i] - y_[i - 1]) / (x_[i] - x_[i - 1]);
        u[i] = (6.0 * u[i] / (x_[i + 1] - x_[i - 1]) - sig * u[i - 1]) / p;
    }
    for (std::size_t i = n - 1; i-- > 0;)
        y2_[i] = y2_[i] * y2_[i + 1] + u[i];
}

double CubicSpline::operator()(double x) const {
    std::size_t lo = 0, hi = x_.size() - 1;
    if (x <= x_.front()) {
        hi = 1;
    } else if (x >= x_.back()) {
        lo = x_.size() - 2;
    } else {
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            (x_[mid] > x ? hi : lo) = mid;
        }
    }
    double h = x_[hi] - x_[lo];
    double a = (x_[hi] - x) / h, b = (x - x_[lo]) / h;
    return a * y_[lo] + b * y_[hi] +
           ((a * a * a - a) * y2_[lo] + (b * b * b - b) * y2_[hi]) * (h * h) / 6.0;
}

namespace {

// Euler-Maclaurin tail of sum_{m > M} phi(m) for smooth decaying phi.
template <typename Phi, typename PhiInt, typename PhiPrime, typename PhiThird>
double em_tail(double m0, Phi phi, PhiInt phi_integral, PhiPrime phi_prime,
               PhiThird phi_third) {
    return phi_integral(m0) - 0.5 * phi(m0) - phi_prime(m0) / 12.0 +
           phi_third(m0) / 720.0;
}

} // namespace

double lattice_power_sum(double s, double period, double gamma) {
    const double L = period;
    const int M = 24;
    double sum = std::pow(std::abs(s), -gamma);
    for (int m = 1; m <= M; ++m)
        sum += std::pow(m * L + s, -gamma) + std::pow(m * L - s, -gamma);
    auto phi = [&](double m) {
        return std::pow(m * L + s, -gamma) + std::pow(m * L - s, -gamma);
    };
    auto phi_int = [&](double m) {
        return (std::pow(m * L + s, 1.0 - gamma) + std::pow(m * L - s, 1.0 - gamma)) /
               (L * (gamma - 1.0));
    };
    auto phi_prime = [&](double m) {
        return -gamma * L *
               (std::pow(m * L + s, -gamma - 1.0) + std::pow(m * L - s, -gamma - 1.0));
    };
    auto phi_third = [&](double m) {
        return -gamma * (gamma + 1.0) * (gamma + 2.0) * L * L * L *
               (std::pow(m * L + s, -gamma - 3.0) + std::pow(m * L - s, -gamma - 3.0));
    };
    return sum + em_tail(M, phi, phi_int, phi_prime, phi_third);
}

double lattice_power_sum_odd(double s, double period, double gamma) {
    const double L = period;
    const int M = 24;
    double sum = std::pow(std::abs(s), -gamma);
    for (int m = 1; m <= M; ++m)
        sum += std::pow(m * L + s, -gamma) - std::pow(m * L - s, -gamma);
    auto phi = [&](double m) {
        return std::pow(m * L + s, -gamma) - std::pow(m * L - s, -gamma);
    };
    auto phi_int = [&](double m) {
        return (std::pow(m * L + s, 1.0 - gamma) - std::pow(m * L - s, 1.0 - gamma)) /
               (L * (gamma - 1.0));
    };
    auto phi_prime = [&](double m) {
        return -gamma * L *
               (std::pow(m * L + s, -gamma - 1.0) - std::pow(m * L - s, -gamma - 1.0));
    };
    auto phi_third = [&](double m) {
        return -gamma * (gamma + 1.0) * (gamma + 2.0) * L * L * L *
               (std::pow(m * L + s, -gamma - 3.0) - std::pow(m * L - s, -gamma - 3.0));
    };
    return sum + em_tail(M, phi, phi_int, phi_prime, phi_third);
}

PeriodizedKernel::PeriodizedKernel(double period, double gamma, bool odd)
    : period_(period), gamma_(gamma), odd_(odd) {
    if (!(period > 0.0) || !(gamma > 1.0))
        throw config_error("PeriodizedKernel: need period > 0, exponent > 1");
    const int n = 1025;
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
        double s = 0.5 * period * i / (n - 1);
        xs[i] = s;
        double sa = std::max(s, 1e-300);
        double full = odd ? lattice_power_sum_odd(sa, period, gamma)
                          : lattice_power_sum(sa, period, gamma);
        ys[i] = full - std::pow(sa, -gamma);
    }
    // at s = 0 the image part has the exact limit
    double t0 = 0.0;
    for (int m = 1; m <= 2000; ++m)
        t0 += (odd ? 0.0 : 2.0) * std::pow(m * period, -gamma);
    if (!odd) {
        t0 += 2.0 * std::pow(2000.5 * period, 1.0 - gamma) / (period * (gamma - 1.0));
        ys[0] = t0;
    } else {
        ys[0] = 0.0;
    }
    smooth_ = CubicSpline(std::move(xs), std::move(ys));
}

double PeriodizedKernel::operator()(double s) const {
    return std::pow(s, -gamma_) + smooth_(s);
}

} // namespace bhlab::quad
