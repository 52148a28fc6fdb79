#include "pairs/ingest.hpp"

#include "pairs/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

namespace pairs {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

bool parse_double(std::string_view text, double& out) {
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size() && !text.empty();
}

} // namespace

AdjustmentRule parse_adjustment(std::string_view text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) {
        throw FormatError("adjustment must look like stock:index:factor, got '" + std::string(text) + "'");
    }
    AdjustmentRule rule;
    unsigned long long index = 0;
    const auto [p1, e1] = std::from_chars(parts[0].data(), parts[0].data() + parts[0].size(), rule.stock);
    const auto [p2, e2] = std::from_chars(parts[1].data(), parts[1].data() + parts[1].size(), index);
    if (e1 != std::errc() || p1 != parts[0].data() + parts[0].size() || e2 != std::errc() ||
        p2 != parts[1].data() + parts[1].size() || !parse_double(parts[2], rule.factor)) {
        throw FormatError("malformed adjustment '" + std::string(text) + "'");
    }
    rule.effective_index = static_cast<std::size_t>(index);
    if (rule.stock != 1 && rule.stock != 2) {
        throw DomainError("adjustment stock must be 1 or 2");
    }
    if (!(rule.factor > 0.0) || !std::isfinite(rule.factor)) {
        throw DomainError("adjustment factor must be positive");
    }
    return rule;
}

PriceSeries load_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::vector<std::string> dates;
    std::vector<double> p1, p2;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view view = trim(line);
        if (view.empty()) {
            continue;
        }
        const auto fields = split(view, ',');
        if (!have_header) {
            if (fields.size() != 3 || fields[0] != "date" || fields[1] != "p1" || fields[2] != "p2") {
                throw FormatError("expected header 'date,p1,p2'", line_no);
            }
            have_header = true;
            continue;
        }
        if (fields.size() != 3) {
            throw FormatError("expected 3 fields, got " + std::to_string(fields.size()), line_no);
        }
        if (fields[0].empty()) {
            throw FormatError("empty date", line_no);
        }
        double a = 0.0, b = 0.0;
        if (!parse_double(fields[1], a) || !parse_double(fields[2], b)) {
            throw FormatError("non-numeric price", line_no);
        }
        if (!(a > 0.0 && std::isfinite(a)) || !(b > 0.0 && std::isfinite(b))) {
            throw FormatError("prices must be positive", line_no);
        }
        if (!dates.empty() && !(dates.back() < fields[0])) {
            throw OrderingError("date '" + std::string(fields[0]) + "' does not follow '" + dates.back() + "'",
                                line_no);
        }
        dates.emplace_back(fields[0]);
        p1.push_back(a);
        p2.push_back(b);
    }
    if (!have_header) {
        throw FormatError("missing header 'date,p1,p2'");
    }
    return PriceSeries(std::move(dates), std::move(p1), std::move(p2));
}

PriceSeries load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open '" + path.string() + "'");
    }
    return load_csv(in);
}

PriceSeries apply_adjustments(const PriceSeries& series, std::span<const AdjustmentRule> rules) {
    std::vector<double> p1(series.p1().begin(), series.p1().end());
    std::vector<double> p2(series.p2().begin(), series.p2().end());
    for (const auto& rule : rules) {
        if (rule.stock != 1 && rule.stock != 2) {
            throw DomainError("adjustment stock must be 1 or 2");
        }
        if (!(rule.factor > 0.0) || !std::isfinite(rule.factor)) {
            throw DomainError("adjustment factor must be positive");
        }
        if (rule.effective_index > series.size()) {
            throw DomainError("adjustment index " + std::to_string(rule.effective_index) +
                              " beyond series of length " + std::to_string(series.size()));
        }
        auto& col = rule.stock == 1 ? p1 : p2;
        for (std::size_t i = 0; i < rule.effective_index; ++i) {
            col[i] *= rule.factor;
        }
    }
    std::vector<std::string> dates(series.dates().begin(), series.dates().end());
    return PriceSeries(std::move(dates), std::move(p1), std::move(p2));
}

} // namespace pairs
