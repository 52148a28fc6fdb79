#include "pairs/trading.hpp"

#include "pairs/errors.hpp"
#include "pairs/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace pairs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_gamma(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw DomainError("gamma must lie in (0, 1)");
    }
}

// grid points from lo to hi with exact endpoints, plus the center
std::vector<double> axis(double center, double gamma, std::size_t grid) {
    const double lo = center * (1.0 - gamma);
    const double hi = center * (1.0 + gamma);
    std::vector<double> out;
    out.reserve(grid + 1);
    out.push_back(lo);
    for (std::size_t i = 1; i + 1 < grid; ++i) {
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid - 1));
    }
    out.push_back(hi);
    out.push_back(center);
    return out;
}

} // namespace

std::string_view to_string(ThresholdMode mode) {
    return mode == ThresholdMode::exact ? "exact" : "approx";
}

std::optional<ThresholdMode> parse_threshold_mode(std::string_view text) {
    if (text == "exact") {
        return ThresholdMode::exact;
    }
    if (text == "approx") {
        return ThresholdMode::approx;
    }
    return std::nullopt;
}

double threshold_exact(const SpreadModel& model, const PricePoint& p, double gamma, double eta,
                       std::size_t grid) {
    require_gamma(gamma);
    require_positive(p);
    if (grid < 2) {
        throw DomainError("threshold grid needs at least 2 points per axis");
    }
    if (eta <= 0.0) {
        return kInf;
    }
    const std::vector<double> x1 = axis(p.p1, gamma, grid);
    const std::vector<double> x2 = axis(p.p2, gamma, grid);
    return model.box_quadratic_max(p, x1, x2) / (2.0 * eta);
}

double threshold_approx(const SpreadModel& model, const PricePoint& p, double gamma, double eta) {
    require_gamma(gamma);
    require_positive(p);
    if (eta <= 0.0) {
        return kInf;
    }
    const Mat2 h = model.hessian(p);
    const double form = p.p1 * (h[0][0] * p.p1 + h[0][1] * p.p2) + p.p2 * (h[1][0] * p.p1 + h[1][1] * p.p2);
    return gamma * gamma * std::abs(form) / (2.0 * eta);
}

double threshold(ThresholdMode mode, const SpreadModel& model, const PricePoint& p, double gamma,
                 double eta) {
    return mode == ThresholdMode::exact ? threshold_exact(model, p, gamma, eta)
                                        : threshold_approx(model, p, gamma, eta);
}

TradeDecision allocate(const SpreadModel& model, const PricePoint& p, double spread, double threshold,
                       double account_value, double leverage) {
    require_positive(p);
    if (!(account_value > 0.0)) {
        throw DomainError("account value must be positive");
    }
    if (!(leverage > 0.0)) {
        throw DomainError("leverage must be positive");
    }
    TradeDecision d;
    d.spread = spread;
    d.threshold = threshold;
    if (!(std::abs(spread) > threshold)) {
        return d;
    }
    const Vec2 g = spread_gradient(model, p);
    d.active = true;
    d.lambda = leverage * account_value / (std::abs(g[0]) * p.p1 + std::abs(g[1]) * p.p2);
    const double s = sign(spread);
    d.holdings = {-d.lambda * s * g[0], -d.lambda * s * g[1]};
    return d;
}

} // namespace pairs
