#include "pairs/cli.hpp"
#include "pairs/errors.hpp"
#include "pairs/synthetic.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace pairs;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("pairs_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        const auto g = generate_pair(OUPairSpec{}, 300, 21);
        std::ofstream csv(input());
        csv << "date,p1,p2\n";
        csv.precision(17);
        for (std::size_t k = 0; k < g.series.size(); ++k) {
            csv << g.series.date(k) << ',' << g.series[k].p1 << ',' << g.series[k].p2 << '\n';
        }
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path input() const { return dir_ / "pair.csv"; }
    fs::path out(const std::string& name = "out") const { return dir_ / name; }

    fs::path dir_;
};

} // namespace

TEST_F(CliTest, BacktestHappyPath) {
    const auto r = invoke({"backtest", "--input", input().string(), "--out-dir", out().string()});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_TRUE(fs::exists(out() / "ledger.csv"));
    EXPECT_TRUE(fs::exists(out() / "report.json"));
    EXPECT_TRUE(fs::exists(out() / "plot.csv"));
    const auto j = nlohmann::json::parse(slurp(out() / "report.json"));
    for (const char* key : {"final_value", "total_return", "max_drawdown", "active_periods", "buyhold_1_final",
                            "buyhold_2_final", "config"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_EQ(j["config"]["train-len"], "40");
    EXPECT_EQ(j["config"]["trade-len"], "5");
    EXPECT_EQ(j["config"]["threshold-mode"], "approx");
    EXPECT_EQ(r.out, slurp(out() / "report.json"));
    const std::string ledger = slurp(out() / "ledger.csv");
    EXPECT_EQ(ledger.substr(0, ledger.find('\n')), "k,date,p1,p2,spread,threshold,beta,mu,gamma,eta,n1,n2,value,active");
}

TEST_F(CliTest, EmitFlagsSuppressFiles) {
    const auto r = invoke({"backtest", "--input", input().string(), "--out-dir", out().string(), "--emit-ledger",
                           "false", "--emit-plot", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_FALSE(fs::exists(out() / "ledger.csv"));
    EXPECT_FALSE(fs::exists(out() / "plot.csv"));
    EXPECT_TRUE(fs::exists(out() / "report.json"));
}

TEST_F(CliTest, ValidationErrorsNameTheFlag) {
    auto r = invoke({"backtest", "--input", input().string(), "--train-len", "2"});
    EXPECT_EQ(r.code, cli::kExitValidation);
    EXPECT_NE(r.err.find("train"), std::string::npos) << r.err;

    r = invoke({"backtest", "--input", input().string(), "--bogus", "1"});
    EXPECT_EQ(r.code, cli::kExitValidation);
    EXPECT_NE(r.err.find("bogus"), std::string::npos) << r.err;

    r = invoke({"backtest", "--input", input().string(), "--leverage", "abc"});
    EXPECT_EQ(r.code, cli::kExitValidation);
    EXPECT_NE(r.err.find("leverage"), std::string::npos) << r.err;

    r = invoke({"backtest", "--input", input().string(), "--threshold-mode", "fast"});
    EXPECT_EQ(r.code, cli::kExitValidation);
    EXPECT_NE(r.err.find("threshold-mode"), std::string::npos) << r.err;

    r = invoke({"backtest", "--out-dir", out().string()});
    EXPECT_EQ(r.code, cli::kExitValidation);
    EXPECT_NE(r.err.find("input"), std::string::npos) << r.err;

    r = invoke({"backtest", "--input", (dir_ / "missing.csv").string()});
    EXPECT_EQ(r.code, cli::kExitValidation);

    r = invoke({"backtest", "--input", input().string(), "--adjust", "2:9999:0.5"});
    EXPECT_EQ(r.code, cli::kExitValidation);

    r = invoke({"backtest", "--input", input().string(), "--train-len", "400"});
    EXPECT_EQ(r.code, cli::kExitValidation);

    r = invoke({"frobnicate"});
    EXPECT_EQ(r.code, cli::kExitValidation);

    r = invoke({"montecarlo", "--theta", "1.5"});
    EXPECT_EQ(r.code, cli::kExitValidation);
}

TEST_F(CliTest, RuntimeFailureHasItsOwnCode) {
    std::ofstream(dir_ / "blocker") << "x";
    const auto r = invoke({"verify-lemma", "--samples", "10", "--out-dir", (dir_ / "blocker" / "sub").string()});
    EXPECT_EQ(r.code, cli::kExitRuntime);
    EXPECT_NE(cli::kExitRuntime, cli::kExitValidation);
}

TEST_F(CliTest, MontecarloIsByteIdentical) {
    const std::vector<std::string> base{"montecarlo", "--trials", "300", "--seed", "7"};
    auto a = base, b = base;
    a.insert(a.end(), {"--out-dir", out("a").string()});
    b.insert(b.end(), {"--out-dir", out("b").string(), "--threads", "3"});
    const auto ra = invoke(a);
    const auto rb = invoke(b);
    ASSERT_EQ(ra.code, 0) << ra.err;
    ASSERT_EQ(rb.code, 0) << rb.err;
    auto ja = nlohmann::json::parse(slurp(out("a") / "montecarlo.json"));
    auto jb = nlohmann::json::parse(slurp(out("b") / "montecarlo.json"));
    EXPECT_EQ(ja["mode"], "exact");
    for (const char* key : {"trials", "trade_events", "mean_dV", "p_value", "mode"}) {
        EXPECT_TRUE(ja.contains(key)) << key;
    }
    // apart from the echoed paths and thread count the outputs agree exactly
    ja.erase("config");
    jb.erase("config");
    EXPECT_EQ(ja.dump(), jb.dump());

    const auto rc = invoke(a);
    ASSERT_EQ(rc.code, 0);
    EXPECT_EQ(ra.out, rc.out);
}

TEST_F(CliTest, VerifyLemmaReportsHolds) {
    const auto r = invoke({"verify-lemma", "--samples", "2000", "--out-dir", out().string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(slurp(out() / "lemma.json"));
    EXPECT_EQ(j["samples"], 2000);
    EXPECT_LE(j["max_violation"].get<double>(), 1e-12);
    EXPECT_TRUE(j["holds"].get<bool>());
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
    std::ofstream(dir_ / "run.conf") << "# comment\n"
                                     << "input = " << input().string() << "\n"
                                     << "train_len = 30   # trailing comment\n"
                                     << "trade.len = 4\n"
                                     << "leverage = 0.5\n\n";
    const auto r = invoke({"backtest", "--config", (dir_ / "run.conf").string(), "--out-dir", out().string(),
                           "--leverage", "0.75"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto cfg = nlohmann::json::parse(r.out)["config"];
    EXPECT_EQ(cfg["train-len"], "30");
    EXPECT_EQ(cfg["trade-len"], "4");
    EXPECT_EQ(cfg["leverage"], "0.75");
    EXPECT_EQ(cfg["initial-value"], "10000");
}

TEST_F(CliTest, UnknownConfigKeyRejected) {
    std::ofstream(dir_ / "bad.conf") << "input = x.csv\nwindow = 3\n";
    const auto r = invoke({"backtest", "--config", (dir_ / "bad.conf").string()});
    EXPECT_EQ(r.code, cli::kExitValidation);
    EXPECT_NE(r.err.find("window"), std::string::npos);
}

TEST_F(CliTest, EchoedConfigRoundTrips) {
    const auto first = invoke({"backtest", "--input", input().string(), "--out-dir", out().string(), "--train-len",
                               "35", "--threshold-mode", "exact", "--adjust", "2:10:0.5", "--adjust", "1:5:2"});
    ASSERT_EQ(first.code, 0) << first.err;
    const auto cfg = nlohmann::json::parse(first.out)["config"];
    {
        std::ofstream conf(dir_ / "echo.conf");
        for (const auto& [key, value] : cfg.items()) {
            if (key == "adjust") {
                std::istringstream rules(value.get<std::string>());
                std::string rule;
                while (rules >> rule) {
                    conf << "adjust = " << rule << '\n';
                }
            } else {
                conf << key << " = " << value.get<std::string>() << '\n';
            }
        }
    }
    const auto second = invoke({"backtest", "--config", (dir_ / "echo.conf").string()});
    ASSERT_EQ(second.code, 0) << second.err;
    EXPECT_EQ(first.out, second.out);
}

TEST(ParseConfigText, Basics) {
    std::istringstream in("# c\n a_b = 1 \n\nc.d=two words # x\n");
    const auto kv = cli::parse_config_text(in);
    ASSERT_EQ(kv.size(), 2u);
    EXPECT_EQ(kv[0].first, "a-b");
    EXPECT_EQ(kv[0].second, "1");
    EXPECT_EQ(kv[1].first, "c-d");
    EXPECT_EQ(kv[1].second, "two words");
    std::istringstream bad("novalue\n");
    EXPECT_THROW(cli::parse_config_text(bad), FormatError);
}

TEST(ParseRunConfig, DefaultsMirrorTheProcedure) {
    bool help = false;
    std::ostringstream sink;
    const auto c = cli::parse_run_config({"backtest", "--input", "x.csv"}, help, sink);
    EXPECT_FALSE(help);
    EXPECT_EQ(c.backtest.window.train_len, 40u);
    EXPECT_EQ(c.backtest.window.trade_len, 5u);
    EXPECT_EQ(c.backtest.leverage, 1.0);
    EXPECT_EQ(c.backtest.initial_value, 10000.0);
    EXPECT_EQ(c.backtest.threshold_mode, ThresholdMode::approx);
    EXPECT_EQ(c.backtest.gamma_floor, 1e-4);
    const auto m = cli::parse_run_config({"montecarlo"}, help, sink);
    EXPECT_EQ(m.theorem.mode, ThresholdMode::exact);
    EXPECT_EQ(m.theorem.gamma_assumed, m.ou.gamma_cap);
    EXPECT_EQ(m.ou.theta, 0.3);
    EXPECT_EQ(m.theorem.eta_assumed, 0.2);
}

TEST(ParseRunConfig, Help) {
    bool help = false;
    std::ostringstream text;
    cli::parse_run_config({"--help"}, help, text);
    EXPECT_TRUE(help);
    EXPECT_NE(text.str().find("--train-len"), std::string::npos);
}

TEST(CliBinary, ProcessExitCodes) {
    const std::string bin = PAIRS_CLI_PATH;
    auto status = [](const std::string& cmd) {
        const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    const auto dir = fs::temp_directory_path() / "pairs_cli_binary";
    EXPECT_EQ(status(bin + " verify-lemma --samples 10 --out-dir " + dir.string()), 0);
    EXPECT_EQ(status(bin + " backtest --train-len 2 --input nowhere.csv"), 1);
    EXPECT_EQ(status(bin + " --bogus"), 1);
    fs::remove_all(dir);
}
