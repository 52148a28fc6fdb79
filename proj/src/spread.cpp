#include "pairs/spread.hpp"

#include "pairs/errors.hpp"
#include "pairs/kernels/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace pairs {

double SpreadModel::box_quadratic_max(const PricePoint& center, std::span<const double> x1,
                                      std::span<const double> x2) const {
    double best = 0.0;
    for (double a : x1) {
        for (double b : x2) {
            const Mat2 h = hessian({a, b});
            const double d1 = a - center.p1;
            const double d2 = b - center.p2;
            const double q = d1 * (h[0][0] * d1 + h[0][1] * d2) + d2 * (h[1][0] * d1 + h[1][1] * d2);
            best = std::max(best, std::abs(q));
        }
    }
    return best;
}

CointegrationSpread::CointegrationSpread(double beta, double mu) : beta_(beta), mu_(mu) {
    if (!std::isfinite(beta_) || !std::isfinite(mu_)) {
        throw DomainError("cointegration parameters must be finite");
    }
}

double CointegrationSpread::value(const PricePoint& p) const {
    return std::log(p.p2) - beta_ * std::log(p.p1) - mu_;
}

Vec2 CointegrationSpread::gradient(const PricePoint& p) const {
    return {-beta_ / p.p1, 1.0 / p.p2};
}

Mat2 CointegrationSpread::hessian(const PricePoint& p) const {
    return {{{beta_ / (p.p1 * p.p1), 0.0}, {0.0, -1.0 / (p.p2 * p.p2)}}};
}

double CointegrationSpread::box_quadratic_max(const PricePoint& center, std::span<const double> x1,
                                              std::span<const double> x2) const {
    // d^2 * (beta / a^2) == beta * (d / a)^2
    return kernels::diag_box_quadratic_max(center.p1, beta_, x1, center.p2, -1.0, x2);
}

double spread_value(const SpreadModel& model, const PricePoint& p) {
    require_positive(p);
    return model.value(p);
}

Vec2 spread_gradient(const SpreadModel& model, const PricePoint& p) {
    require_positive(p);
    const Vec2 g = model.gradient(p);
    if (g[0] == 0.0 && g[1] == 0.0) {
        throw StationaryPointError("spread model '" + model.name() + "' has a zero gradient at (" +
                                   std::to_string(p.p1) + ", " + std::to_string(p.p2) + ")");
    }
    return g;
}

Mat2 spread_hessian(const SpreadModel& model, const PricePoint& p) {
    require_positive(p);
    return model.hessian(p);
}

CointegrationSpread fit_cointegration(PriceWindow window) {
    const std::size_t n = window.size();
    if (n < 3) {
        throw LengthError("cointegration fit needs at least 3 periods");
    }
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        require_positive(window[i]);
        x[i] = std::log(window.p1[i]);
        y[i] = std::log(window.p2[i]);
    }
    const kernels::Moments m = kernels::centered_moments(x, y);
    // Rounding in the mean leaves ~1e-16 relative residue for a constant regressor.
    const double noise = 1e-12 * std::abs(m.mean_x);
    if (!(m.sxx > static_cast<double>(n) * noise * noise)) {
        throw DegenerateRegressorError("log p1 has no variance over the regression window");
    }
    const double beta = m.sxy / m.sxx;
    return CointegrationSpread(beta, m.mean_y - beta * m.mean_x);
}

} // namespace pairs
