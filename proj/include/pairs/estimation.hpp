#pragma once

#include "pairs/domain.hpp"

#include <cstddef>
#include <span>

namespace pairs {

/// Staggered sliding window: retrain on train_len periods, trade the next trade_len.
struct WindowConfig {
    std::size_t train_len = 40;
    std::size_t trade_len = 5;

    /// Throws DomainError unless train_len >= 3 and trade_len >= 1.
    void validate() const;
};

inline constexpr double kDefaultGammaFloor = 1e-4;

/// One retraining snapshot.
struct WindowEstimates {
    double beta_hat = 0.0;
    double mu_hat = 0.0;
    double gamma_hat = kDefaultGammaFloor;  // in (0, 1]
    double eta_hat = 0.0;                   // per-period reversion rate; may be <= 0
    bool tradeable = false;                 // eta_hat > 0
};

/// Standard signum with sign(0) == 0.
[[nodiscard]] constexpr double sign(double x) {
    return static_cast<double>(x > 0.0) - static_cast<double>(x < 0.0);
}

/// Largest absolute simple return of either stock across the window, raised
/// to `floor` and capped at 1. LengthError below 2 periods.
double estimate_gamma(PriceWindow window, double floor = kDefaultGammaFloor);

/// Sample-average reversion rate of a spread path:
///   -sum_j sign(S_j)(S_{j+1} - S_j) / sum_j |S_j|,  j = 0 .. n-2.
/// The final sample enters only through the last difference. Returns 0 when
/// the denominator vanishes. LengthError below 2 samples.
double estimate_eta(std::span<const double> spread);

/// Fits the cointegration spread on the window, evaluates it back over the
/// same window for eta, and estimates gamma from the window's returns.
WindowEstimates estimate_window(PriceWindow window, double gamma_floor = kDefaultGammaFloor);

} // namespace pairs
