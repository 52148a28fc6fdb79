#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the kernels or the estimators it is checking.

#include "pairs/domain.hpp"
#include "pairs/spread.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <vector>

namespace pairs::oracle {

/// Central differences of model.value with step rel_step * p_i.
inline Vec2 fd_gradient(const SpreadModel& model, const PricePoint& p, double rel_step = 1e-5) {
    const double h1 = rel_step * p.p1;
    const double h2 = rel_step * p.p2;
    return {(model.value({p.p1 + h1, p.p2}) - model.value({p.p1 - h1, p.p2})) / (2 * h1),
            (model.value({p.p1, p.p2 + h2}) - model.value({p.p1, p.p2 - h2})) / (2 * h2)};
}

/// Central differences of model.gradient.
inline Mat2 fd_hessian(const SpreadModel& model, const PricePoint& p, double rel_step = 1e-5) {
    const double h1 = rel_step * p.p1;
    const double h2 = rel_step * p.p2;
    const Vec2 a = model.gradient({p.p1 + h1, p.p2});
    const Vec2 b = model.gradient({p.p1 - h1, p.p2});
    const Vec2 c = model.gradient({p.p1, p.p2 + h2});
    const Vec2 d = model.gradient({p.p1, p.p2 - h2});
    return {{{(a[0] - b[0]) / (2 * h1), (c[0] - d[0]) / (2 * h2)},
             {(a[1] - b[1]) / (2 * h1), (c[1] - d[1]) / (2 * h2)}}};
}

struct Line {
    double slope;
    double intercept;
};

/// OLS via the raw normal equations [n Sx; Sx Sxx] [a; b] = [Sy; Sxy] in long double.
inline Line normal_equations(std::span<const double> x, std::span<const double> y) {
    long double n = x.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += static_cast<long double>(x[i]) * x[i];
        sxy += static_cast<long double>(x[i]) * y[i];
    }
    const long double det = n * sxx - sx * sx;
    const long double b = (n * sxy - sx * sy) / det;
    const long double a = (sy - b * sx) / n;
    return {static_cast<double>(b), static_cast<double>(a)};
}

inline double rss(std::span<const double> x, std::span<const double> y, double slope, double intercept) {
    long double acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const long double r = y[i] - slope * x[i] - intercept;
        acc += r * r;
    }
    return static_cast<double>(acc);
}

/// Direct loop of -sum sign(S_j) dS_j / sum |S_j| over j = 0 .. n-2, in long double.
inline double eta_direct(std::span<const double> s) {
    long double num = 0, den = 0;
    for (std::size_t j = 0; j + 1 < s.size(); ++j) {
        const long double sg = s[j] > 0 ? 1 : (s[j] < 0 ? -1 : 0);
        num -= sg * (static_cast<long double>(s[j + 1]) - s[j]);
        den += std::abs(static_cast<long double>(s[j]));
    }
    return den == 0 ? 0.0 : static_cast<double>(num / den);
}

/// Largest |return| by brute force over both columns.
inline double max_abs_return(PriceWindow w) {
    double best = 0.0;
    for (std::size_t j = 0; j + 1 < w.size(); ++j) {
        best = std::max({best, std::abs(w.p1[j + 1] / w.p1[j] - 1.0), std::abs(w.p2[j + 1] / w.p2[j] - 1.0)});
    }
    return best;
}

/// Closed form of the box max of |d^T H(p') d| for the cointegration spread:
/// each diagonal term is largest at p'_i = (1 - gamma) p_i, where (d/p')^2 = (gamma/(1-gamma))^2.
/// With beta >= 0 the terms have opposite signs, otherwise they add.
inline double cointegration_box_max(double beta, double gamma) {
    const double r = gamma * gamma / ((1 - gamma) * (1 - gamma));
    return beta >= 0 ? std::max(beta, 1.0) * r : (1.0 - beta) * r;
}

inline PricePoint random_price(std::mt19937_64& rng, double lo = 0.1, double hi = 1e4) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return {std::exp(u(rng)), std::exp(u(rng))};
}

} // namespace pairs::oracle
