#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace pairs {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<Vec2, 2>;  // row-major

/// Prices of the two stocks at one period. Both strictly positive.
struct PricePoint {
    double p1 = 1.0;
    double p2 = 1.0;

    [[nodiscard]] double operator[](std::size_t i) const { return i == 0 ? p1 : p2; }
    [[nodiscard]] Vec2 as_vec() const { return {p1, p2}; }
};

/// Throws DomainError unless both prices are finite and > 0.
void require_positive(const PricePoint& p);

/// Per-period simple returns of the two stocks.
struct ReturnPair {
    double x1 = 0.0;
    double x2 = 0.0;
};

struct Holdings {
    double n1 = 0.0;
    double n2 = 0.0;

    [[nodiscard]] bool flat() const { return n1 == 0.0 && n2 == 0.0; }
    /// |n1|*p1 + |n2|*p2
    [[nodiscard]] double invested(const PricePoint& p) const;
};

/// Non-owning view over a contiguous run of periods (structure of arrays).
struct PriceWindow {
    std::span<const double> p1;
    std::span<const double> p2;

    [[nodiscard]] std::size_t size() const { return p1.size(); }
    [[nodiscard]] PricePoint operator[](std::size_t i) const { return {p1[i], p2[i]}; }
};

/// Time-ordered price pairs with opaque, strictly ascending date labels.
class PriceSeries {
public:
    PriceSeries() = default;

    /// Validates equal lengths, positive finite prices and strictly ascending dates.
    PriceSeries(std::vector<std::string> dates, std::vector<double> p1, std::vector<double> p2);

    /// Labels each period with its zero-padded index ("00000000", "00000001", ...).
    static PriceSeries from_prices(std::vector<double> p1, std::vector<double> p2);

    [[nodiscard]] std::size_t size() const { return p1_.size(); }
    [[nodiscard]] bool empty() const { return p1_.empty(); }
    [[nodiscard]] PricePoint operator[](std::size_t i) const { return {p1_[i], p2_[i]}; }
    [[nodiscard]] const std::string& date(std::size_t i) const { return dates_[i]; }

    [[nodiscard]] std::span<const double> p1() const { return p1_; }
    [[nodiscard]] std::span<const double> p2() const { return p2_; }
    [[nodiscard]] std::span<const std::string> dates() const { return dates_; }

    [[nodiscard]] PriceWindow window(std::size_t first, std::size_t count) const;
    [[nodiscard]] PriceWindow all() const { return {p1_, p2_}; }
    operator PriceWindow() const { return all(); }  // NOLINT(google-explicit-constructor)

private:
    std::vector<std::string> dates_;
    std::vector<double> p1_;
    std::vector<double> p2_;
};

/// Box of prices reachable in one period under a return bound gamma:
/// [p_i(1-gamma), p_i(1+gamma)] per coordinate.
class BoxBounds {
public:
    BoxBounds(PricePoint center, double gamma);

    [[nodiscard]] const PricePoint& center() const { return center_; }
    [[nodiscard]] double gamma() const { return gamma_; }
    [[nodiscard]] double lower(std::size_t i) const { return center_[i] * (1.0 - gamma_); }
    [[nodiscard]] double upper(std::size_t i) const { return center_[i] * (1.0 + gamma_); }
    [[nodiscard]] bool contains(const PricePoint& p) const;

private:
    PricePoint center_;
    double gamma_;
};

/// Trading account at one stage: value V, share holdings and leverage L.
struct AccountState {
    double value = 0.0;
    Holdings holdings;
    double leverage = 1.0;
};

/// Simple returns between consecutive periods; output has size() - 1 elements.
std::vector<ReturnPair> compute_returns(PriceWindow series);

} // namespace pairs
