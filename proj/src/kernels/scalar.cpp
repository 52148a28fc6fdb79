#include "pairs/kernels/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace pairs::kernels::scalar {

namespace {

using Lanes = std::array<double, 4>;

double combine(const Lanes& l) { return (l[0] + l[1]) + (l[2] + l[3]); }

double sign(double v) { return static_cast<double>(v > 0.0) - static_cast<double>(v < 0.0); }

void relative_sq(double c, double k, std::span<const double> x, std::vector<double>& out) {
    out.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = (x[i] - c) / x[i];
        out[i] = k * (r * r);
    }
}

} // namespace

Moments centered_moments(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    Lanes sx{}, sy{};
    for (std::size_t j = 0; j < n; ++j) {
        sx[j % 4] += x[j];
        sy[j % 4] += y[j];
    }
    Moments m;
    m.mean_x = combine(sx) / static_cast<double>(n);
    m.mean_y = combine(sy) / static_cast<double>(n);

    Lanes xx{}, xy{};
    for (std::size_t j = 0; j < n; ++j) {
        const double dx = x[j] - m.mean_x;
        const double dy = y[j] - m.mean_y;
        xx[j % 4] += dx * dx;
        xy[j % 4] += dx * dy;
    }
    m.sxx = combine(xx);
    m.sxy = combine(xy);
    return m;
}

double max_abs_return(std::span<const double> prices) {
    double best = 0.0;
    for (std::size_t j = 0; j + 1 < prices.size(); ++j) {
        best = std::max(best, std::abs((prices[j + 1] - prices[j]) / prices[j]));
    }
    return best;
}

ReversionSums reversion_sums(std::span<const double> s) {
    Lanes num{}, den{};
    for (std::size_t j = 0; j + 1 < s.size(); ++j) {
        num[j % 4] += -sign(s[j]) * (s[j + 1] - s[j]);
        den[j % 4] += std::abs(s[j]);
    }
    return {combine(num), combine(den)};
}

double diag_box_quadratic_max(double c1, double k1, std::span<const double> x1,
                              double c2, double k2, std::span<const double> x2) {
    std::vector<double> a, b;
    relative_sq(c1, k1, x1, a);
    relative_sq(c2, k2, x2, b);
    double best = 0.0;
    for (double ai : a) {
        for (double bj : b) {
            best = std::max(best, std::abs(ai + bj));
        }
    }
    return best;
}

} // namespace pairs::kernels::scalar
