#include "pairs/synthetic.hpp"

#include "pairs/errors.hpp"
#include "pairs/estimation.hpp"
#include "pairs/spread.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace pairs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Relative slack under log(1 + gamma_cap) absorbing exp/log rounding.
constexpr double kCapSlack = 1e-9;

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

double log_cap(const OUPairSpec& spec) { return std::log1p(spec.gamma_cap) * (1.0 - kCapSlack); }

double worst_log_move(const OUPairSpec& spec, double c) {
    const double sw = c * spec.sigma_w;
    const double ss = c * spec.sigma_s;
    const double s_max = std::max(std::abs(spec.s0), ss / spec.theta);
    return std::max(sw, std::abs(spec.beta_true) * sw + spec.theta * s_max + ss);
}

} // namespace

void OUPairSpec::validate() const {
    if (!(theta > 0.0 && theta < 1.0)) {
        throw DomainError("theta must lie in (0, 1)");
    }
    if (!finite_nonneg(sigma_s) || !finite_nonneg(sigma_w)) {
        throw DomainError("innovation scales must be finite and >= 0");
    }
    if (!(gamma_cap > 0.0 && gamma_cap < 1.0)) {
        throw DomainError("gamma_cap must lie in (0, 1)");
    }
    if (!std::isfinite(beta_true) || !std::isfinite(mu_true) || !std::isfinite(s0)) {
        throw DomainError("beta_true, mu_true and s0 must be finite");
    }
    if (!(p1_start > 0.0) || !std::isfinite(p1_start)) {
        throw DomainError("p1_start must be positive");
    }
    if (theta * std::abs(s0) >= log_cap(*this)) {
        throw DomainError("|s0| too large: the first spread move alone can exceed gamma_cap");
    }
}

double innovation_scale(const OUPairSpec& spec) {
    spec.validate();
    const double cap = log_cap(spec);
    if (worst_log_move(spec, 1.0) <= cap) {
        return 1.0;
    }
    double lo = 0.0;  // feasible (validate() guarantees it)
    double hi = 1.0;  // infeasible
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        (worst_log_move(spec, mid) <= cap ? lo : hi) = mid;
    }
    return lo;
}

std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double uniform_pm1(std::mt19937_64& rng) {
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return 2.0 * unit - 1.0;
}

GeneratedPair generate_pair(const OUPairSpec& spec, std::size_t length, std::uint64_t seed) {
    if (length < 2) {
        throw LengthError("generated series needs at least 2 periods");
    }
    const double c = innovation_scale(spec);
    GeneratedPair out;
    out.sigma_s = c * spec.sigma_s;
    out.sigma_w = c * spec.sigma_w;

    std::mt19937_64 rng(seed);
    std::vector<double> p1(length), p2(length);
    out.spread.resize(length);

    double log_p1 = std::log(spec.p1_start);
    double s = spec.s0;
    for (std::size_t k = 0; k < length; ++k) {
        if (k > 0) {
            const double u = uniform_pm1(rng);
            const double v = uniform_pm1(rng);
            s = (1.0 - spec.theta) * s + out.sigma_s * u;
            log_p1 += out.sigma_w * v;
        }
        out.spread[k] = s;
        p1[k] = std::exp(log_p1);
        p2[k] = std::exp(spec.beta_true * log_p1 + spec.mu_true + s);
    }
    out.series = PriceSeries::from_prices(std::move(p1), std::move(p2));
    return out;
}

namespace {

struct BinEdges {
    static constexpr std::array<double, 6> lo{1.0, 1.5, 2.0, 3.0, 5.0, 10.0};
};

struct TrialResult {
    double total_dV = 0.0;
    std::size_t events = 0;
    std::array<std::size_t, BinEdges::lo.size()> bin_events{};
    std::array<double, BinEdges::lo.size()> bin_normalized{};
    std::array<double, BinEdges::lo.size()> bin_bound{};
};

std::size_t bin_of(double ratio) {
    std::size_t b = 0;
    while (b + 1 < BinEdges::lo.size() && ratio >= BinEdges::lo[b + 1]) {
        ++b;
    }
    return b;
}

TrialResult run_trial(const OUPairSpec& spec, const TheoremConfig& cfg, std::uint64_t seed) {
    const GeneratedPair gen = generate_pair(spec, cfg.periods, seed);
    const CointegrationSpread model(spec.beta_true, spec.mu_true);
    TrialResult r;
    double value = cfg.initial_value;
    for (std::size_t k = 0; k + 1 < cfg.periods; ++k) {
        const PricePoint p = gen.series[k];
        const double s = model.value(p);
        const double tau = threshold(cfg.mode, model, p, cfg.gamma_assumed, cfg.eta_assumed);
        if (!(std::abs(s) > tau) || !(value > 0.0)) {
            continue;
        }
        const TradeDecision d = allocate(model, p, s, tau, value, cfg.leverage);
        const PricePoint next = gen.series[k + 1];
        const double dv = step_account(d.holdings, {next.p1 - p.p1, next.p2 - p.p2});
        value += dv;
        r.total_dV += dv;
        ++r.events;
        const std::size_t b = tau > 0.0 ? bin_of(std::abs(s) / tau) : BinEdges::lo.size() - 1;
        ++r.bin_events[b];
        r.bin_normalized[b] += dv / d.lambda;
        r.bin_bound[b] += cfg.eta_assumed * (std::abs(s) - tau);
    }
    return r;
}

} // namespace

TheoremSummary verify_theorem(const OUPairSpec& spec, const TheoremConfig& config) {
    spec.validate();
    if (config.trials < 1) {
        throw DomainError("trials must be >= 1");
    }
    if (config.periods < 2) {
        throw DomainError("periods per trial must be >= 2");
    }
    if (!(config.gamma_assumed > 0.0 && config.gamma_assumed < 1.0)) {
        throw DomainError("assumed gamma must lie in (0, 1)");
    }

    std::vector<TrialResult> results(config.trials);
    unsigned workers = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, config.trials));

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < config.trials; i = next.fetch_add(1)) {
            results[i] = run_trial(spec, config, stream_seed(spec.seed, i));
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }

    TheoremSummary out;
    out.trials = config.trials;
    out.mode = config.mode;
    out.hypothesis_holds = config.eta_assumed > 0.0 && config.eta_assumed <= spec.theta;
    const double c = innovation_scale(spec);
    out.sigma_s = c * spec.sigma_s;
    out.sigma_w = c * spec.sigma_w;

    double sum = 0.0;
    out.conditional.resize(BinEdges::lo.size());
    for (const auto& r : results) {
        sum += r.total_dV;
        out.trade_events += r.events;
        for (std::size_t b = 0; b < BinEdges::lo.size(); ++b) {
            out.conditional[b].events += r.bin_events[b];
            out.conditional[b].mean_normalized_dV += r.bin_normalized[b];
            out.conditional[b].mean_lower_bound += r.bin_bound[b];
        }
    }
    for (std::size_t b = 0; b < BinEdges::lo.size(); ++b) {
        auto& bin = out.conditional[b];
        bin.lo = BinEdges::lo[b];
        bin.hi = b + 1 < BinEdges::lo.size() ? BinEdges::lo[b + 1] : std::numeric_limits<double>::infinity();
        if (bin.events > 0) {
            bin.mean_normalized_dV /= static_cast<double>(bin.events);
            bin.mean_lower_bound /= static_cast<double>(bin.events);
        }
    }

    out.inconclusive = out.trade_events == 0;
    out.mean_dV = out.inconclusive ? 0.0 : sum / static_cast<double>(out.trade_events);

    const auto n = static_cast<double>(config.trials);
    if (config.trials < 2) {
        out.p_value = kNaN;
    } else if (out.inconclusive) {
        out.p_value = 1.0;
    } else {
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& r : results) {
            ss += (r.total_dV - mean) * (r.total_dV - mean);
        }
        const double sd = std::sqrt(ss / (n - 1.0));
        if (sd == 0.0) {
            out.p_value = mean > 0.0 ? 0.0 : 1.0;
        } else {
            const boost::math::students_t dist(n - 1.0);
            out.p_value = boost::math::cdf(boost::math::complement(dist, mean / (sd / std::sqrt(n))));
        }
    }
    return out;
}

LemmaSummary verify_lemma(const OUPairSpec& spec, std::size_t samples) {
    spec.validate();
    if (samples < 1) {
        throw DomainError("samples must be >= 1");
    }
    const CointegrationSpread model(spec.beta_true, spec.mu_true);
    const double gamma = spec.gamma_cap;
    const double eta = spec.theta;
    std::mt19937_64 rng(stream_seed(spec.seed, 0));
    auto unit = [&] { return 0.5 * (uniform_pm1(rng) + 1.0); };
    auto corner = [&] { return (rng() >> 63) != 0 ? 1.0 : -1.0; };

    LemmaSummary out;
    out.samples = samples;
    out.max_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples; ++i) {
        const PricePoint p{std::exp(unit() * std::log(1000.0)), std::exp(unit() * std::log(1000.0))};
        double w1 = uniform_pm1(rng);
        double w2 = uniform_pm1(rng);
        switch (i % 4) {
        case 0:
            w1 = corner();
            w2 = corner();
            break;
        case 1:
            ((rng() >> 63) != 0 ? w1 : w2) = corner();
            break;
        default:
            break;
        }
        const PricePoint moved{p.p1 * (1.0 + gamma * w1), p.p2 * (1.0 + gamma * w2)};
        const Vec2 dp{moved.p1 - p.p1, moved.p2 - p.p2};
        const Vec2 g = spread_gradient(model, p);
        const double remainder =
            std::abs(model.value(moved) - model.value(p) - (g[0] * dp[0] + g[1] * dp[1]));
        const double bound = eta * threshold_exact(model, p, gamma, eta);
        out.max_violation = std::max(out.max_violation, remainder - bound);
        out.max_remainder = std::max(out.max_remainder, remainder);
        out.max_bound = std::max(out.max_bound, bound);
        if (bound > 0.0) {
            out.max_ratio = std::max(out.max_ratio, remainder / bound);
        }
    }
    return out;
}

} // namespace pairs
