#pragma once

#include "pairs/domain.hpp"
#include "pairs/estimation.hpp"
#include "pairs/trading.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pairs {

enum class SpreadFamily { cointegration };

struct BacktestConfig {
    WindowConfig window;
    SpreadFamily family = SpreadFamily::cointegration;
    double leverage = 1.0;
    double initial_value = 10000.0;
    ThresholdMode threshold_mode = ThresholdMode::approx;
    double gamma_floor = kDefaultGammaFloor;
    /// When set, replaces the windowed gamma estimate.
    std::optional<double> gamma_fixed;

    /// DomainError on any out-of-range field, including leverage * gamma_fixed >= 1.
    void validate() const;
};

struct LedgerRow {
    std::size_t k = 0;
    std::string date;
    PricePoint price;
    double spread = 0.0;
    double threshold = 0.0;  // may be +inf
    WindowEstimates estimates;
    double gamma_used = 0.0;  // estimates.gamma_hat or the fixed override
    Holdings holdings;
    double value = 0.0;  // V(k), before the period's price move
    bool active = false;
};

struct BacktestReport {
    double initial_value = 0.0;
    double final_value = 0.0;
    double total_return = 0.0;
    double max_drawdown = 0.0;
    std::size_t active_periods = 0;
    std::size_t retrainings = 0;
    std::size_t tradeable_windows = 0;
    std::vector<double> buyhold_1;  // aligned with the ledger rows
    std::vector<double> buyhold_2;
    /// min / max of threshold_approx / threshold_exact over periods where both are finite
    /// and positive; NaN when no such period exists.
    double threshold_ratio_min = 0.0;
    double threshold_ratio_max = 0.0;
    std::vector<std::string> warnings;
};

struct BacktestResult {
    std::vector<LedgerRow> ledger;
    BacktestReport report;
};

/// Staggered sliding-window backtest.
///
/// At k = N, N+m, N+2m, ... the spread is refit on periods [k-N, k) and
/// gamma, eta are re-estimated on the same window. Every period from N to
/// the end evaluates the spread and threshold with the frozen estimates,
/// rebalances to the rule's holdings at the current V(k), and realizes
/// V(k+1) = V(k) + n(k)^T (p(k+1) - p(k)). The last row carries a decision
/// but no realized move.
///
/// LengthError when the series has fewer than N + 2 periods.
BacktestResult run_backtest(const PriceSeries& series, const BacktestConfig& config);

/// initial * p_i(k) / p_i(first) for k = first .. end. `which` is 1 or 2.
std::vector<double> buy_and_hold(const PriceSeries& series, int which, double initial, std::size_t first = 0);

/// Largest peak-to-trough decline as a fraction of the running peak.
double max_drawdown(std::span<const double> values);

/// Header: k,date,p1,p2,spread,threshold,beta,mu,gamma,eta,n1,n2,value,active
void write_ledger_csv(std::ostream& out, std::span<const LedgerRow> ledger);

/// Header: k,date,pairs_value,buyhold_1,buyhold_2
void write_plot_csv(std::ostream& out, std::span<const LedgerRow> ledger, const BacktestReport& report);

/// %.10g formatting shared by the CSV writers ("inf"/"-inf"/"nan" for non-finite).
std::string format_sig10(double v);

} // namespace pairs
