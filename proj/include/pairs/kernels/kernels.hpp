#pragma once

// Data-parallel inner loops of the engine. Each kernel has a scalar reference
// implementation and, on x86-64, an AVX2 variant selected at runtime.
//
// Reductions accumulate in four interleaved lanes (element j goes to lane
// j % 4) and combine as (l0 + l1) + (l2 + l3) in every variant, and no
// variant fuses multiply-adds, so all variants return bit-identical results.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace pairs::kernels {

enum class Isa { scalar, avx2 };

[[nodiscard]] std::string_view isa_name(Isa isa);

/// True when the AVX2 variants are compiled in and the CPU supports them.
[[nodiscard]] bool avx2_available();

/// ISA used by the dispatching entry points below. Defaults to the best
/// available one; the PAIRS_ISA environment variable ("scalar"/"avx2") or
/// set_isa_override() can pin it.
[[nodiscard]] Isa active_isa();

/// Pins dispatch to `isa` (nullopt restores auto-detection). Requesting an
/// unavailable ISA falls back to scalar.
void set_isa_override(std::optional<Isa> isa);

struct Moments {
    double mean_x = 0.0;
    double mean_y = 0.0;
    double sxx = 0.0;  // sum (x - mean_x)^2
    double sxy = 0.0;  // sum (x - mean_x)(y - mean_y)
};

struct ReversionSums {
    double numerator = 0.0;    // sum_j -sign(s_j) (s_{j+1} - s_j)
    double denominator = 0.0;  // sum_j |s_j|
};

// Dispatching entry points.

/// Two-pass centered first and second moments; x and y must have equal, nonzero size.
Moments centered_moments(std::span<const double> x, std::span<const double> y);

/// max_j |(p[j+1] - p[j]) / p[j]|; 0 when fewer than two prices.
double max_abs_return(std::span<const double> prices);

/// Sums over j = 0 .. size-2 (the last sample only enters through the difference).
ReversionSums reversion_sums(std::span<const double> s);

/// max over (i, j) of |k1 ((x1_i - c1)/x1_i)^2 + k2 ((x2_j - c2)/x2_j)^2|: the
/// quadratic form (p' - c)^T H(p') (p' - c) over a tensor grid when the
/// Hessian is diag(k1/p1'^2, k2/p2'^2). Grids must be nonempty.
double diag_box_quadratic_max(double c1, double k1, std::span<const double> x1,
                              double c2, double k2, std::span<const double> x2);

namespace scalar {
Moments centered_moments(std::span<const double> x, std::span<const double> y);
double max_abs_return(std::span<const double> prices);
ReversionSums reversion_sums(std::span<const double> s);
double diag_box_quadratic_max(double c1, double k1, std::span<const double> x1,
                              double c2, double k2, std::span<const double> x2);
} // namespace scalar

namespace avx2 {
// Only callable when avx2_available().
Moments centered_moments(std::span<const double> x, std::span<const double> y);
double max_abs_return(std::span<const double> prices);
ReversionSums reversion_sums(std::span<const double> s);
double diag_box_quadratic_max(double c1, double k1, std::span<const double> x1,
                              double c2, double k2, std::span<const double> x2);
} // namespace avx2

} // namespace pairs::kernels
