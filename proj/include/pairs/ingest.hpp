#pragma once

#include "pairs/domain.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>

namespace pairs {

/// Multiplies every price of one stock strictly before `effective_index` by
/// `factor`, e.g. to undo a reverse split or fund price correction.
struct AdjustmentRule {
    int stock = 2;  // 1 or 2
    std::size_t effective_index = 0;
    double factor = 1.0;  // > 0
};

/// Parses "stock:index:factor", e.g. "2:438:0.25". FormatError on bad syntax,
/// DomainError on out-of-range fields.
AdjustmentRule parse_adjustment(std::string_view text);

/// CSV with header `date,p1,p2`. Prices accept plain or scientific notation;
/// dates are opaque labels that must ascend strictly. Blank lines are skipped.
/// FormatError (with the 1-based line number) on a bad header or row,
/// OrderingError on out-of-order dates.
PriceSeries load_csv(std::istream& in);
PriceSeries load_csv(const std::filesystem::path& path);

/// Applies rules in order; rules on the same stock compose multiplicatively.
/// DomainError when an index exceeds the series length or a factor is not > 0.
PriceSeries apply_adjustments(const PriceSeries& series, std::span<const AdjustmentRule> rules);

} // namespace pairs
