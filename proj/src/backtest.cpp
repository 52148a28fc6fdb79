#include "pairs/backtest.hpp"

#include "pairs/errors.hpp"
#include "pairs/spread.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace pairs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

void BacktestConfig::validate() const {
    window.validate();
    if (!(leverage > 0.0) || !std::isfinite(leverage)) {
        throw DomainError("leverage must be positive");
    }
    if (!(initial_value > 0.0) || !std::isfinite(initial_value)) {
        throw DomainError("initial value must be positive");
    }
    if (!(gamma_floor > 0.0 && gamma_floor <= 1.0)) {
        throw DomainError("gamma floor must lie in (0, 1]");
    }
    if (gamma_fixed) {
        if (!(*gamma_fixed > 0.0 && *gamma_fixed < 1.0)) {
            throw DomainError("fixed gamma must lie in (0, 1)");
        }
        if (leverage * *gamma_fixed >= 1.0) {
            throw DomainError("leverage * gamma >= 1: account positivity is not guaranteed");
        }
    }
}

BacktestResult run_backtest(const PriceSeries& series, const BacktestConfig& config) {
    config.validate();
    const std::size_t n_train = config.window.train_len;
    const std::size_t m_trade = config.window.trade_len;
    const std::size_t total = series.size();
    if (total < n_train + 2) {
        throw LengthError("backtest needs at least train_len + 2 = " + std::to_string(n_train + 2) +
                          " periods, got " + std::to_string(total));
    }

    BacktestResult result;
    auto& ledger = result.ledger;
    auto& report = result.report;
    ledger.reserve(total - n_train);
    report.threshold_ratio_min = kInf;
    report.threshold_ratio_max = -kInf;

    CointegrationSpread model(0.0, 0.0);
    WindowEstimates est;
    double gamma = 0.0;
    double value = config.initial_value;
    bool exhausted = false;

    for (std::size_t k = n_train; k < total; ++k) {
        if ((k - n_train) % m_trade == 0) {
            est = estimate_window(series.window(k - n_train, n_train), config.gamma_floor);
            model = CointegrationSpread(est.beta_hat, est.mu_hat);
            gamma = config.gamma_fixed.value_or(est.gamma_hat);
            ++report.retrainings;
            report.tradeable_windows += est.tradeable ? 1 : 0;
            if (config.leverage * gamma >= 1.0) {
                report.warnings.push_back("period " + std::to_string(k) +
                                          ": leverage * gamma_hat >= 1, account positivity not guaranteed");
            }
        }

        const PricePoint p = series[k];
        const double s = model.value(p);
        // gamma_hat is capped at 1; a box reaching zero prices bounds nothing.
        double tau = kInf;
        if (gamma < 1.0) {
            tau = threshold(config.threshold_mode, model, p, gamma, est.eta_hat);
            if (std::isfinite(tau)) {
                const double approx = threshold_approx(model, p, gamma, est.eta_hat);
                const double exact = threshold_exact(model, p, gamma, est.eta_hat);
                if (exact > 0.0) {
                    report.threshold_ratio_min = std::min(report.threshold_ratio_min, approx / exact);
                    report.threshold_ratio_max = std::max(report.threshold_ratio_max, approx / exact);
                }
            }
        }

        LedgerRow row;
        row.k = k;
        row.date = series.date(k);
        row.price = p;
        row.spread = s;
        row.threshold = tau;
        row.estimates = est;
        row.gamma_used = gamma;
        row.value = value;

        if (!exhausted && value <= 0.0) {
            exhausted = true;
            report.warnings.push_back("period " + std::to_string(k) + ": account value exhausted, trading stopped");
        }
        if (!exhausted) {
            const TradeDecision d = allocate(model, p, s, tau, value, config.leverage);
            row.holdings = d.holdings;
            row.active = d.active;
        }
        report.active_periods += row.active ? 1 : 0;

        if (k + 1 < total) {
            const PricePoint next = series[k + 1];
            value = value + step_account(row.holdings, {next.p1 - p.p1, next.p2 - p.p2});
        }
        ledger.push_back(std::move(row));
    }

    std::vector<double> values;
    values.reserve(ledger.size());
    for (const auto& row : ledger) {
        values.push_back(row.value);
    }
    report.initial_value = config.initial_value;
    report.final_value = ledger.back().value;
    report.total_return = report.final_value / config.initial_value - 1.0;
    report.max_drawdown = exhausted ? 1.0 : max_drawdown(values);
    report.buyhold_1 = buy_and_hold(series, 1, config.initial_value, n_train);
    report.buyhold_2 = buy_and_hold(series, 2, config.initial_value, n_train);
    if (report.threshold_ratio_min > report.threshold_ratio_max) {
        report.threshold_ratio_min = report.threshold_ratio_max = std::numeric_limits<double>::quiet_NaN();
    }
    return result;
}

std::vector<double> buy_and_hold(const PriceSeries& series, int which, double initial, std::size_t first) {
    if (which != 1 && which != 2) {
        throw DomainError("stock index must be 1 or 2");
    }
    if (!(initial > 0.0)) {
        throw DomainError("initial investment must be positive");
    }
    if (first >= series.size()) {
        throw LengthError("buy-and-hold start lies beyond the series");
    }
    const auto prices = which == 1 ? series.p1() : series.p2();
    std::vector<double> out;
    out.reserve(prices.size() - first);
    for (std::size_t k = first; k < prices.size(); ++k) {
        out.push_back(initial * prices[k] / prices[first]);
    }
    return out;
}

double max_drawdown(std::span<const double> values) {
    if (values.empty()) {
        throw LengthError("drawdown of an empty trajectory");
    }
    double peak = values.front();
    double worst = 0.0;
    for (double v : values) {
        if (!(v > 0.0)) {
            throw DomainError("drawdown needs strictly positive values");
        }
        peak = std::max(peak, v);
        worst = std::max(worst, (peak - v) / peak);
    }
    return worst;
}

std::string format_sig10(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void write_ledger_csv(std::ostream& out, std::span<const LedgerRow> ledger) {
    out << "k,date,p1,p2,spread,threshold,beta,mu,gamma,eta,n1,n2,value,active\n";
    for (const auto& r : ledger) {
        out << r.k << ',' << r.date << ',' << format_sig10(r.price.p1) << ',' << format_sig10(r.price.p2) << ','
            << format_sig10(r.spread) << ',' << format_sig10(r.threshold) << ','
            << format_sig10(r.estimates.beta_hat) << ',' << format_sig10(r.estimates.mu_hat) << ','
            << format_sig10(r.gamma_used) << ',' << format_sig10(r.estimates.eta_hat) << ','
            << format_sig10(r.holdings.n1) << ',' << format_sig10(r.holdings.n2) << ','
            << format_sig10(r.value) << ',' << (r.active ? 1 : 0) << '\n';
    }
}

void write_plot_csv(std::ostream& out, std::span<const LedgerRow> ledger, const BacktestReport& report) {
    out << "k,date,pairs_value,buyhold_1,buyhold_2\n";
    for (std::size_t i = 0; i < ledger.size(); ++i) {
        out << ledger[i].k << ',' << ledger[i].date << ',' << format_sig10(ledger[i].value) << ','
            << format_sig10(report.buyhold_1[i]) << ',' << format_sig10(report.buyhold_2[i]) << '\n';
    }
}

} // namespace pairs
