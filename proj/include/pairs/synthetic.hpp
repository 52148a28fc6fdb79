#pragma once

#include "pairs/domain.hpp"
#include "pairs/trading.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace pairs {

/// Generator for a price pair whose true cointegration spread is a discrete
/// mean-reverting process with bounded uniform innovations:
///
///   s(k+1)      = (1 - theta) s(k) + sigma_s u(k)
///   log p1(k+1) = log p1(k) + sigma_w v(k)
///   log p2(k)   = beta_true log p1(k) + mu_true + s(k)
///
/// with u, v uniform on [-1, 1). E[ds | s] = -theta s, so the spread is
/// mean-reverting with eta = theta.
struct OUPairSpec {
    double theta = 0.3;
    double sigma_s = 0.015;
    double sigma_w = 0.01;
    double beta_true = 1.5;
    double mu_true = 0.1;
    double gamma_cap = 0.05;
    double s0 = 0.0;
    /// Starting price of stock 1; stock 2 starts at exp(beta log p1 + mu + s0).
    double p1_start = 50.0;
    std::uint64_t seed = 1;

    /// DomainError on violated invariants or when s0 alone already breaks gamma_cap.
    void validate() const;
};

/// Common factor c in (0, 1] applied to sigma_s and sigma_w so that the
/// worst-case one-period log move of either stock stays within log(1 + gamma_cap):
///   |d log p1| <= c sigma_w
///   |d log p2| <= c |beta| sigma_w + theta max(|s0|, c sigma_s / theta) + c sigma_s
/// 1 when the spec already satisfies the cap.
double innovation_scale(const OUPairSpec& spec);

struct GeneratedPair {
    PriceSeries series;
    std::vector<double> spread;  // injected s(k)
    double sigma_s = 0.0;        // effective (scaled) innovation sizes
    double sigma_w = 0.0;
};

/// Generates `length` periods with the RNG seeded from `seed`.
GeneratedPair generate_pair(const OUPairSpec& spec, std::size_t length, std::uint64_t seed);
inline GeneratedPair generate_pair(const OUPairSpec& spec, std::size_t length) {
    return generate_pair(spec, length, spec.seed);
}

/// Seed of the i-th independent stream derived from `base`:
///   splitmix64(base + (i + 1) * 0x9E3779B97F4A7C15).
std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index);

/// Uniform on [-1, 1) from the top 53 bits of one engine draw (portable, unlike
/// std::uniform_real_distribution).
double uniform_pm1(std::mt19937_64& rng);

struct TheoremConfig {
    std::size_t trials = 10000;
    std::size_t periods = 250;   // per trial
    double eta_assumed = 0.2;    // <= 0 disables trading (tau = +inf)
    double gamma_assumed = 0.05;
    ThresholdMode mode = ThresholdMode::exact;
    double leverage = 1.0;
    double initial_value = 10000.0;
    unsigned threads = 0;        // 0: hardware concurrency
};

/// Mean of dV / lambda (= -sign(S) grad S^T dp) among trades whose |S| / tau
/// fell in [lo, hi), with the mean lower bound eta (|S| - tau) for comparison.
struct ConditionalBin {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t events = 0;
    double mean_normalized_dV = 0.0;
    double mean_lower_bound = 0.0;
};

struct TheoremSummary {
    std::size_t trials = 0;
    std::size_t trade_events = 0;
    double mean_dV = 0.0;   // pooled over all trading events
    /// One-sided Student t test of E[per-trial total dV] > 0 (trials are the
    /// independent units). NaN when fewer than 2 trials.
    double p_value = 1.0;
    ThresholdMode mode = ThresholdMode::exact;
    bool inconclusive = true;       // no trading events at all
    bool hypothesis_holds = false;  // 0 < eta_assumed <= theta
    double sigma_s = 0.0;
    double sigma_w = 0.0;
    std::vector<ConditionalBin> conditional;
};

/// Trades each generated path with the true (beta, mu) spread and the
/// supplied (eta, gamma) - no estimation - and pools dV over periods where
/// |S| > tau. Trials run on `threads` workers; each trial owns the stream
/// stream_seed(spec.seed, trial), and results are reduced in trial order.
TheoremSummary verify_theorem(const OUPairSpec& spec, const TheoremConfig& config);

struct LemmaSummary {
    std::size_t samples = 0;
    double max_violation = 0.0;  // max of |dS - grad S^T dp| - eta tau_exact
    double max_remainder = 0.0;
    double max_bound = 0.0;      // max of eta tau_exact
    double max_ratio = 0.0;      // max of remainder / (eta tau_exact)
};

/// Samples prices log-uniformly on [1, 1000]^2 and moves inside
/// B_gamma(p) (a quarter at corners, a quarter on edges, the rest uniform),
/// with gamma = spec.gamma_cap, eta = spec.theta and the spread
/// (beta_true, mu_true), and checks the linearization error against eta tau.
LemmaSummary verify_lemma(const OUPairSpec& spec, std::size_t samples);

} // namespace pairs
