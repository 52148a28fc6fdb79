#include "pairs/domain.hpp"

#include "pairs/errors.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

namespace pairs {

void require_positive(const PricePoint& p) {
    if (!(std::isfinite(p.p1) && p.p1 > 0.0 && std::isfinite(p.p2) && p.p2 > 0.0)) {
        throw DomainError("prices must be finite and strictly positive");
    }
}

double Holdings::invested(const PricePoint& p) const {
    return std::abs(n1) * p.p1 + std::abs(n2) * p.p2;
}

PriceSeries::PriceSeries(std::vector<std::string> dates, std::vector<double> p1, std::vector<double> p2)
    : dates_(std::move(dates)), p1_(std::move(p1)), p2_(std::move(p2)) {
    if (dates_.size() != p1_.size() || p1_.size() != p2_.size()) {
        throw DomainError("price series columns differ in length");
    }
    for (std::size_t i = 0; i < p1_.size(); ++i) {
        require_positive({p1_[i], p2_[i]});
        if (i > 0 && !(dates_[i - 1] < dates_[i])) {
            throw OrderingError("dates not strictly ascending at '" + dates_[i] + "'");
        }
    }
}

PriceSeries PriceSeries::from_prices(std::vector<double> p1, std::vector<double> p2) {
    std::vector<std::string> dates;
    dates.reserve(p1.size());
    char buf[32];
    for (std::size_t i = 0; i < p1.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%08zu", i);
        dates.emplace_back(buf);
    }
    return PriceSeries(std::move(dates), std::move(p1), std::move(p2));
}

PriceWindow PriceSeries::window(std::size_t first, std::size_t count) const {
    if (first > size() || count > size() - first) {
        throw DomainError("window [" + std::to_string(first) + ", " + std::to_string(first + count) +
                          ") exceeds series of length " + std::to_string(size()));
    }
    return {std::span<const double>(p1_).subspan(first, count),
            std::span<const double>(p2_).subspan(first, count)};
}

BoxBounds::BoxBounds(PricePoint center, double gamma) : center_(center), gamma_(gamma) {
    require_positive(center_);
    if (!(gamma_ > 0.0 && gamma_ < 1.0)) {
        throw DomainError("gamma must lie in (0, 1)");
    }
}

bool BoxBounds::contains(const PricePoint& p) const {
    for (std::size_t i = 0; i < 2; ++i) {
        if (std::abs(p[i] - center_[i]) > gamma_ * center_[i]) {
            return false;
        }
    }
    return true;
}

std::vector<ReturnPair> compute_returns(PriceWindow series) {
    if (series.size() < 2) {
        throw LengthError("returns need at least 2 periods");
    }
    std::vector<ReturnPair> out;
    out.reserve(series.size() - 1);
    for (std::size_t j = 0; j + 1 < series.size(); ++j) {
        out.push_back({(series.p1[j + 1] - series.p1[j]) / series.p1[j],
                       (series.p2[j + 1] - series.p2[j]) / series.p2[j]});
    }
    return out;
}

} // namespace pairs
