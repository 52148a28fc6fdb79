#pragma once

#include "pairs/domain.hpp"
#include "pairs/spread.hpp"

#include <cstddef>
#include <optional>
#include <string_view>

namespace pairs {

enum class ThresholdMode { exact, approx };

[[nodiscard]] std::string_view to_string(ThresholdMode mode);
[[nodiscard]] std::optional<ThresholdMode> parse_threshold_mode(std::string_view text);

inline constexpr std::size_t kDefaultThresholdGrid = 41;

/// tau = max over the box B_gamma(p) of |(p' - p)^T H(p') (p' - p)| / (2 eta).
///
/// The max is taken over a grid x grid tensor grid spanning the box, with
/// the four corners, the edge midpoints through p and p itself always
/// included. Returns +inf when eta <= 0. DomainError unless gamma is in
/// (0, 1), p is positive and grid >= 2.
double threshold_exact(const SpreadModel& model, const PricePoint& p, double gamma, double eta,
                       std::size_t grid = kDefaultThresholdGrid);

/// Constant-Hessian variant: gamma^2 |p^T H(p) p| / (2 eta); +inf when eta <= 0.
/// For the cointegration spread this is gamma^2 |1 - beta| / (2 eta).
double threshold_approx(const SpreadModel& model, const PricePoint& p, double gamma, double eta);

double threshold(ThresholdMode mode, const SpreadModel& model, const PricePoint& p, double gamma,
                 double eta);

struct TradeDecision {
    double spread = 0.0;
    double threshold = 0.0;
    bool active = false;     // |spread| > threshold
    Holdings holdings;       // (0, 0) when inactive
    double lambda = 0.0;     // L V / (|grad S|^T p); 0 when inactive
};

/// Threshold rule: when |spread| > threshold hold n = -lambda sign(S) grad S(p)
/// with lambda = L V / (|grad S(p)|^T p), so |n|^T p == L V; otherwise stay flat.
/// Throws DomainError for non-positive V, L or prices and StationaryPointError
/// when the gradient vanishes at an active decision.
TradeDecision allocate(const SpreadModel& model, const PricePoint& p, double spread, double threshold,
                       double account_value, double leverage);

/// Change in account value over one period: n1 dp1 + n2 dp2.
[[nodiscard]] inline double step_account(const Holdings& n, const Vec2& delta_p) {
    return n.n1 * delta_p[0] + n.n2 * delta_p[1];
}

} // namespace pairs
