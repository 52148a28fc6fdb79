#include "pairs/estimation.hpp"

#include "pairs/errors.hpp"
#include "pairs/kernels/kernels.hpp"
#include "pairs/spread.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace pairs {

void WindowConfig::validate() const {
    if (train_len < 3) {
        throw DomainError("train_len must be >= 3");
    }
    if (trade_len < 1) {
        throw DomainError("trade_len must be >= 1");
    }
}

double estimate_gamma(PriceWindow window, double floor) {
    if (window.size() < 2) {
        throw LengthError("gamma estimate needs at least 2 periods");
    }
    if (!(floor > 0.0 && floor <= 1.0)) {
        throw DomainError("gamma floor must lie in (0, 1]");
    }
    const double raw = std::max(kernels::max_abs_return(window.p1), kernels::max_abs_return(window.p2));
    return std::clamp(raw, floor, 1.0);
}

double estimate_eta(std::span<const double> spread) {
    if (spread.size() < 2) {
        throw LengthError("eta estimate needs at least 2 spread samples");
    }
    const kernels::ReversionSums sums = kernels::reversion_sums(spread);
    if (sums.denominator == 0.0) {
        return 0.0;
    }
    return sums.numerator / sums.denominator;
}

WindowEstimates estimate_window(PriceWindow window, double gamma_floor) {
    const CointegrationSpread fit = fit_cointegration(window);
    std::vector<double> s(window.size());
    for (std::size_t j = 0; j < window.size(); ++j) {
        s[j] = fit.value(window[j]);
    }
    WindowEstimates est;
    est.beta_hat = fit.beta();
    est.mu_hat = fit.mu();
    est.gamma_hat = estimate_gamma(window, gamma_floor);
    est.eta_hat = estimate_eta(s);
    est.tradeable = est.eta_hat > 0.0;
    return est;
}

} // namespace pairs
