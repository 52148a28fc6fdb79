#include "pairs/errors.hpp"
#include "pairs/ingest.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pairs;

namespace {

PriceSeries parse(const std::string& text) {
    std::istringstream in(text);
    return load_csv(in);
}

// Returns the line number carried by the FormatError thrown for `text`, or 0.
std::size_t error_line(const std::string& text) {
    try {
        parse(text);
    } catch (const FormatError& e) {
        return e.line();
    }
    return 0;
}

} // namespace

TEST(LoadCsv, TwoRows) {
    const auto s = parse("date,p1,p2\n2011-07-01,20.5,30.25\n2011-07-05,21,29\n");
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s.date(1), "2011-07-05");
    EXPECT_EQ(s[0].p1, 20.5);
    EXPECT_EQ(s[0].p2, 30.25);
}

TEST(LoadCsv, ScientificNotationBlankLinesAndCrLf) {
    const auto s = parse("date,p1,p2\r\n\r\na,1.5e2,+2E-1\r\nb, 3 ,4\r\n\n");
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].p1, 150.0);
    EXPECT_EQ(s[0].p2, 0.2);
    EXPECT_EQ(s[1].p1, 3.0);
}

TEST(LoadCsv, ZeroPriceNamesTheLine) {
    const std::string text = "date,p1,p2\n2011-07-01,20,30\n2011-07-05,21,0\n";
    EXPECT_THROW(parse(text), FormatError);
    EXPECT_EQ(error_line(text), 3u);
    try {
        parse(text);
    } catch (const FormatError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
}

TEST(LoadCsv, RowErrors) {
    EXPECT_EQ(error_line("date,p1,p2\nx,abc,1\n"), 2u);
    EXPECT_EQ(error_line("date,p1,p2\nx,1,-2\n"), 2u);
    EXPECT_EQ(error_line("date,p1,p2\nx,1\n"), 2u);
    EXPECT_EQ(error_line("date,p1,p2\nx,1,2,3\n"), 2u);
    EXPECT_EQ(error_line("date,p1,p2\nx,1,2\n,1,2\n"), 3u);
    EXPECT_EQ(error_line("date,p1,p2\nx,1,nan\n"), 2u);
    EXPECT_EQ(error_line("date,p1,p2\nx,1,2x\n"), 2u);
}

TEST(LoadCsv, UnorderedDates) {
    EXPECT_THROW(parse("date,p1,p2\n2011-07-05,1,2\n2011-07-01,1,2\n"), OrderingError);
    EXPECT_THROW(parse("date,p1,p2\n2011-07-05,1,2\n2011-07-05,1,2\n"), OrderingError);
    EXPECT_EQ(error_line("date,p1,p2\n2011-07-05,1,2\n2011-07-01,1,2\n"), 3u);
}

TEST(LoadCsv, MissingHeader) {
    EXPECT_THROW(parse("2011-07-01,1,2\n"), FormatError);
    EXPECT_EQ(error_line("2011-07-01,1,2\n"), 1u);
    EXPECT_THROW(parse(""), FormatError);
    EXPECT_THROW(parse("date,p2,p1\n"), FormatError);
}

TEST(LoadCsv, FromPath) {
    const auto path = std::filesystem::temp_directory_path() / "pairs_ingest_test.csv";
    {
        std::ofstream out(path);
        out << "date,p1,p2\na,1,2\nb,3,4\nc,5,6\n";
    }
    EXPECT_EQ(load_csv(path).size(), 3u);
    std::filesystem::remove(path);
    EXPECT_THROW(load_csv(path), FormatError);
}

TEST(ParseAdjustment, Valid) {
    const auto r = parse_adjustment("2:438:0.25");
    EXPECT_EQ(r.stock, 2);
    EXPECT_EQ(r.effective_index, 438u);
    EXPECT_EQ(r.factor, 0.25);
}

TEST(ParseAdjustment, Invalid) {
    EXPECT_THROW(parse_adjustment("2:438"), FormatError);
    EXPECT_THROW(parse_adjustment("x:1:1"), FormatError);
    EXPECT_THROW(parse_adjustment("2:1:abc"), FormatError);
    EXPECT_THROW(parse_adjustment("3:1:1"), DomainError);
    EXPECT_THROW(parse_adjustment("1:1:0"), DomainError);
}

TEST(ApplyAdjustments, IdentityFactor) {
    const auto s = PriceSeries::from_prices({1, 2, 3}, {4, 5, 6});
    const std::vector<AdjustmentRule> rules{{2, 3, 1.0}, {1, 2, 1.0}};
    const auto a = apply_adjustments(s, rules);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(a[i].p1, s[i].p1);
        EXPECT_EQ(a[i].p2, s[i].p2);
    }
}

TEST(ApplyAdjustments, RemovesArtificialJump) {
    const auto s = PriceSeries::from_prices({10, 11, 12}, {100, 100, 25});
    const std::vector<AdjustmentRule> rules{{2, 2, 0.25}};
    const auto a = apply_adjustments(s, rules);
    EXPECT_EQ(a[0].p2, 25);
    EXPECT_EQ(a[1].p2, 25);
    EXPECT_EQ(a[2].p2, 25);
    EXPECT_EQ(a[1].p1, 11);
    for (const auto& r : compute_returns(a)) {
        EXPECT_EQ(r.x2, 0.0);
    }
}

TEST(ApplyAdjustments, StackedRulesCompose) {
    const auto s = PriceSeries::from_prices({10, 11, 12}, {100, 100, 25});
    const std::vector<AdjustmentRule> rules{{2, 2, 0.5}, {2, 2, 0.5}};
    const auto a = apply_adjustments(s, rules);
    EXPECT_EQ(a[0].p2, 25);
    EXPECT_EQ(a[1].p2, 25);
    EXPECT_EQ(a[2].p2, 25);
}

TEST(ApplyAdjustments, OutOfRangeIndex) {
    const auto s = PriceSeries::from_prices({10, 11, 12}, {1, 1, 1});
    const std::vector<AdjustmentRule> ok{{1, 3, 2.0}};
    EXPECT_EQ(apply_adjustments(s, ok)[2].p1, 24);
    const std::vector<AdjustmentRule> bad{{1, 4, 2.0}};
    EXPECT_THROW(apply_adjustments(s, bad), DomainError);
    const std::vector<AdjustmentRule> neg{{1, 1, -2.0}};
    EXPECT_THROW(apply_adjustments(s, neg), DomainError);
}

TEST(ApplyAdjustments, PreservesLengthPositivityAndDistantReturns) {
    std::vector<double> p1, p2;
    for (int i = 0; i < 50; ++i) {
        p1.push_back(10 + i);
        p2.push_back(100 - i);
    }
    const auto s = PriceSeries::from_prices(p1, p2);
    const std::vector<AdjustmentRule> rules{{1, 20, 0.1}, {2, 35, 3.0}};
    const auto a = apply_adjustments(s, rules);
    ASSERT_EQ(a.size(), s.size());
    const auto before = compute_returns(s);
    const auto after = compute_returns(a);
    for (std::size_t j = 0; j < before.size(); ++j) {
        EXPECT_GT(a[j].p1, 0);
        EXPECT_GT(a[j].p2, 0);
        // return j spans periods j and j + 1; only the one crossing the boundary changes
        if (j + 1 != 20) {
            EXPECT_NEAR(after[j].x1, before[j].x1, 1e-14);
        }
        if (j + 1 != 35) {
            EXPECT_NEAR(after[j].x2, before[j].x2, 1e-14);
        }
    }
}
