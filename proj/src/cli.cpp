#include "pairs/cli.hpp"

#include "pairs/errors.hpp"
#include "pairs/kernels/kernels.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

namespace pairs::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string normalize_key(std::string key) {
    std::replace(key.begin(), key.end(), '.', '-');
    std::replace(key.begin(), key.end(), '_', '-');
    return key;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& text, const std::string& why) {
    throw ConfigError("invalid value for --" + key + ": '" + text + "' (" + why + ")");
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    T out{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last || first == last) {
        bad_value(key, text, "not a number");
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(out)) {
            bad_value(key, text, "not finite");
        }
    }
    return out;
}

double positive(const std::string& key, const std::string& text) {
    const double v = parse_number<double>(key, text);
    if (!(v > 0.0)) {
        bad_value(key, text, "must be > 0");
    }
    return v;
}

double nonnegative(const std::string& key, const std::string& text) {
    const double v = parse_number<double>(key, text);
    if (!(v >= 0.0)) {
        bad_value(key, text, "must be >= 0");
    }
    return v;
}

double open_unit(const std::string& key, const std::string& text) {
    const double v = parse_number<double>(key, text);
    if (!(v > 0.0 && v < 1.0)) {
        bad_value(key, text, "must lie in (0, 1)");
    }
    return v;
}

std::size_t at_least(const std::string& key, const std::string& text, std::size_t min) {
    const auto v = parse_number<unsigned long long>(key, text);
    if (v < min) {
        bad_value(key, text, "must be >= " + std::to_string(min));
    }
    return static_cast<std::size_t>(v);
}

bool boolean(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no" || text == "off") {
        return false;
    }
    bad_value(key, text, "expected true or false");
}

struct KeySpec {
    std::string name;
    std::string help;
    std::string fallback;  // empty: no default text (handled by the setter's caller)
    std::function<void(RunConfig&, const std::string&)> apply;
};

const std::vector<KeySpec>& key_specs() {
    static const std::vector<KeySpec> specs = {
        {"input", "price CSV with header date,p1,p2 (backtest)", "",
         [](RunConfig& c, const std::string& v) { c.input = v; }},
        {"out-dir", "directory for output files", ".", [](RunConfig& c, const std::string& v) { c.out_dir = v; }},
        {"train-len", "training window length N (>= 3)", "40",
         [](RunConfig& c, const std::string& v) { c.backtest.window.train_len = at_least("train-len", v, 3); }},
        {"trade-len", "trading window length m (>= 1)", "5",
         [](RunConfig& c, const std::string& v) { c.backtest.window.trade_len = at_least("trade-len", v, 1); }},
        {"leverage", "leverage factor L", "1",
         [](RunConfig& c, const std::string& v) {
             c.backtest.leverage = positive("leverage", v);
             c.theorem.leverage = c.backtest.leverage;
         }},
        {"initial-value", "starting account value V(0)", "10000",
         [](RunConfig& c, const std::string& v) {
             c.backtest.initial_value = positive("initial-value", v);
             c.theorem.initial_value = c.backtest.initial_value;
         }},
        {"threshold-mode", "exact or approx (default: approx for backtest, exact for montecarlo)", "",
         [](RunConfig& c, const std::string& v) {
             const auto mode = parse_threshold_mode(v);
             if (!mode) {
                 bad_value("threshold-mode", v, "expected exact or approx");
             }
             c.backtest.threshold_mode = *mode;
             c.theorem.mode = *mode;
         }},
        {"gamma-floor", "lower bound for the windowed gamma estimate", "0.0001",
         [](RunConfig& c, const std::string& v) {
             const double g = positive("gamma-floor", v);
             if (g > 1.0) {
                 bad_value("gamma-floor", v, "must be <= 1");
             }
             c.backtest.gamma_floor = g;
         }},
        {"gamma-fixed", "use this gamma instead of the windowed estimate (backtest)", "",
         [](RunConfig& c, const std::string& v) { c.backtest.gamma_fixed = open_unit("gamma-fixed", v); }},
        {"seed", "base RNG seed", "1",
         [](RunConfig& c, const std::string& v) { c.ou.seed = parse_number<std::uint64_t>("seed", v); }},
        {"trials", "Monte Carlo trials", "10000",
         [](RunConfig& c, const std::string& v) { c.theorem.trials = at_least("trials", v, 1); }},
        {"periods", "periods per Monte Carlo trial", "250",
         [](RunConfig& c, const std::string& v) { c.theorem.periods = at_least("periods", v, 2); }},
        {"theta", "true per-period reversion rate of the synthetic spread", "0.3",
         [](RunConfig& c, const std::string& v) { c.ou.theta = open_unit("theta", v); }},
        {"eta", "reversion rate assumed by the trader (<= 0 never trades)", "0.2",
         [](RunConfig& c, const std::string& v) { c.theorem.eta_assumed = parse_number<double>("eta", v); }},
        {"gamma-cap", "return bound enforced by the generator", "0.05",
         [](RunConfig& c, const std::string& v) { c.ou.gamma_cap = open_unit("gamma-cap", v); }},
        {"gamma", "return bound assumed by the trader (default: gamma-cap)", "",
         [](RunConfig& c, const std::string& v) { c.theorem.gamma_assumed = open_unit("gamma", v); }},
        {"sigma-s", "spread innovation scale", "0.015",
         [](RunConfig& c, const std::string& v) { c.ou.sigma_s = nonnegative("sigma-s", v); }},
        {"sigma-w", "log-price step scale of stock 1", "0.01",
         [](RunConfig& c, const std::string& v) { c.ou.sigma_w = nonnegative("sigma-w", v); }},
        {"beta", "true cointegration slope", "1.5",
         [](RunConfig& c, const std::string& v) { c.ou.beta_true = parse_number<double>("beta", v); }},
        {"mu", "true cointegration intercept", "0.1",
         [](RunConfig& c, const std::string& v) { c.ou.mu_true = parse_number<double>("mu", v); }},
        {"s0", "initial spread", "0", [](RunConfig& c, const std::string& v) { c.ou.s0 = parse_number<double>("s0", v); }},
        {"p1-start", "initial price of stock 1", "50",
         [](RunConfig& c, const std::string& v) { c.ou.p1_start = positive("p1-start", v); }},
        {"samples", "samples for verify-lemma", "10000",
         [](RunConfig& c, const std::string& v) { c.lemma_samples = at_least("samples", v, 1); }},
        {"threads", "worker threads for montecarlo (0: all cores)", "0",
         [](RunConfig& c, const std::string& v) {
             c.theorem.threads = static_cast<unsigned>(parse_number<unsigned>("threads", v));
         }},
        {"emit-ledger", "write ledger.csv (backtest)", "true",
         [](RunConfig& c, const std::string& v) { c.emit_ledger = boolean("emit-ledger", v); }},
        {"emit-report", "write report.json (backtest)", "true",
         [](RunConfig& c, const std::string& v) { c.emit_report = boolean("emit-report", v); }},
        {"emit-plot", "write plot.csv with V(k) and buy-and-hold trajectories (backtest)", "true",
         [](RunConfig& c, const std::string& v) { c.emit_plot = boolean("emit-plot", v); }},
    };
    return specs;
}

const std::string kAdjustKey = "adjust";

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        throw Error("cannot write '" + path.string() + "'");
    }
}

Json config_block(const RunConfig& c) {
    Json j = Json::object();
    for (const auto& [k, v] : c.echo) {
        j[k] = v;
    }
    return j;
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

} // namespace

std::vector<std::pair<std::string, std::string>> parse_config_text(std::istream& in) {
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw FormatError("expected 'key = value'", line_no);
        }
        std::string key = normalize_key(trim(line.substr(0, eq)));
        if (key.empty()) {
            throw FormatError("empty key", line_no);
        }
        out.emplace_back(std::move(key), trim(line.substr(eq + 1)));
    }
    return out;
}

RunConfig parse_run_config(const std::vector<std::string>& args, bool& help_requested, std::ostream& help_out) {
    help_requested = false;
    CLI::App app{"Pairs-trading backtester and Monte Carlo verifier", "pairs"};
    std::string command;
    std::string config_path;
    std::map<std::string, std::string> flag_text;
    std::vector<std::string> adjust_flags;
    std::map<std::string, CLI::Option*> options;

    app.add_option("command", command, "backtest | montecarlo | verify-lemma")
        ->required()
        ->check(CLI::IsMember({"backtest", "montecarlo", "verify-lemma"}));
    app.add_option("--config", config_path, "flat key = value config file (flags override it)");
    for (const auto& spec : key_specs()) {
        options[spec.name] = app.add_option("--" + spec.name, flag_text[spec.name], spec.help);
    }
    auto* adjust_opt = app.add_option("--adjust", adjust_flags, "stock:index:factor price adjustment (repeatable)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        help_out << app.help();
        help_requested = true;
        return {};
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    std::map<std::string, std::string> merged;
    std::vector<std::string> adjust_texts;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            throw ConfigError("cannot open config file '" + config_path + "'");
        }
        std::vector<std::pair<std::string, std::string>> entries;
        try {
            entries = parse_config_text(in);
        } catch (const FormatError& e) {
            throw ConfigError("config file '" + config_path + "': " + e.what());
        }
        for (auto& [key, value] : entries) {
            if (key == kAdjustKey) {
                adjust_texts.push_back(value);
            } else if (options.count(key) != 0) {
                merged[key] = value;
            } else {
                throw ConfigError("unknown config key '" + key + "' in '" + config_path + "'");
            }
        }
    }
    for (const auto& [key, opt] : options) {
        if (opt->count() > 0) {
            merged[key] = flag_text[key];
        }
    }
    if (adjust_opt->count() > 0) {
        adjust_texts = adjust_flags;
    }

    RunConfig cfg;
    cfg.command = command;
    if (command == "montecarlo") {
        cfg.theorem.mode = ThresholdMode::exact;
    }
    for (const auto& spec : key_specs()) {
        const auto it = merged.find(spec.name);
        const std::string& text = it != merged.end() ? it->second : spec.fallback;
        if (!text.empty()) {
            spec.apply(cfg, text);
            cfg.echo[spec.name] = text;
        }
    }
    if (merged.count("gamma") == 0) {
        cfg.theorem.gamma_assumed = cfg.ou.gamma_cap;
    }
    cfg.echo["gamma"] = format_sig10(cfg.theorem.gamma_assumed);
    cfg.echo["threshold-mode"] =
        std::string(to_string(command == "montecarlo" ? cfg.theorem.mode : cfg.backtest.threshold_mode));

    std::string adjust_echo;
    for (const auto& text : adjust_texts) {
        try {
            cfg.adjustments.push_back(parse_adjustment(text));
        } catch (const Error& e) {
            throw ConfigError(std::string("invalid value for --adjust: ") + e.what());
        }
        adjust_echo += (adjust_echo.empty() ? "" : " ") + text;
    }
    if (!adjust_echo.empty()) {
        cfg.echo[kAdjustKey] = adjust_echo;
    }

    try {
        if (command == "backtest") {
            if (cfg.input.empty()) {
                throw ConfigError("missing --input for backtest");
            }
            cfg.backtest.validate();
        } else {
            cfg.ou.validate();
        }
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

std::string backtest_report_json(const BacktestReport& r, const RunConfig& config) {
    Json j;
    j["final_value"] = r.final_value;
    j["total_return"] = r.total_return;
    j["max_drawdown"] = r.max_drawdown;
    j["active_periods"] = r.active_periods;
    j["buyhold_1_final"] = r.buyhold_1.back();
    j["buyhold_2_final"] = r.buyhold_2.back();
    j["buyhold_1_return"] = r.buyhold_1.back() / r.initial_value - 1.0;
    j["buyhold_2_return"] = r.buyhold_2.back() / r.initial_value - 1.0;
    j["buyhold_1_max_drawdown"] = max_drawdown(r.buyhold_1);
    j["buyhold_2_max_drawdown"] = max_drawdown(r.buyhold_2);
    j["retrainings"] = r.retrainings;
    j["tradeable_windows"] = r.tradeable_windows;
    j["threshold_ratio_min"] = finite_or_null(r.threshold_ratio_min);
    j["threshold_ratio_max"] = finite_or_null(r.threshold_ratio_max);
    j["warnings"] = r.warnings;
    j["config"] = config_block(config);
    return j.dump(2) + "\n";
}

std::string theorem_json(const TheoremSummary& s, const RunConfig& config) {
    Json j;
    j["trials"] = s.trials;
    j["trade_events"] = s.trade_events;
    j["mean_dV"] = s.mean_dV;
    j["p_value"] = finite_or_null(s.p_value);
    j["mode"] = std::string(to_string(s.mode));
    j["inconclusive"] = s.inconclusive;
    j["hypothesis_holds"] = s.hypothesis_holds;
    j["sigma_s_effective"] = s.sigma_s;
    j["sigma_w_effective"] = s.sigma_w;
    Json bins = Json::array();
    for (const auto& b : s.conditional) {
        Json bin;
        bin["ratio_lo"] = b.lo;
        bin["ratio_hi"] = finite_or_null(b.hi);
        bin["events"] = b.events;
        bin["mean_normalized_dV"] = b.mean_normalized_dV;
        bin["mean_lower_bound"] = b.mean_lower_bound;
        bins.push_back(std::move(bin));
    }
    j["conditional"] = std::move(bins);
    j["config"] = config_block(config);
    return j.dump(2) + "\n";
}

std::string lemma_json(const LemmaSummary& s, const RunConfig& config) {
    Json j;
    j["samples"] = s.samples;
    j["max_violation"] = s.max_violation;
    j["max_remainder"] = s.max_remainder;
    j["max_bound"] = s.max_bound;
    j["max_ratio"] = s.max_ratio;
    j["holds"] = s.max_violation <= 1e-12;
    j["config"] = config_block(config);
    return j.dump(2) + "\n";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    PriceSeries series;
    try {
        bool help = false;
        cfg = parse_run_config(args, help, out);
        if (help) {
            return kExitOk;
        }
        if (cfg.command == "backtest") {
            series = apply_adjustments(load_csv(cfg.input), cfg.adjustments);
            if (series.size() < cfg.backtest.window.train_len + 2) {
                throw ConfigError("input has " + std::to_string(series.size()) +
                                  " periods; --train-len " + std::to_string(cfg.backtest.window.train_len) +
                                  " needs at least " + std::to_string(cfg.backtest.window.train_len + 2));
            }
        }
    } catch (const std::exception& e) {
        err << "pairs: " << e.what() << '\n';
        return kExitValidation;
    }

    try {
        std::filesystem::create_directories(cfg.out_dir);
        if (cfg.command == "backtest") {
            const BacktestResult result = run_backtest(series, cfg.backtest);
            if (cfg.emit_ledger) {
                std::ostringstream csv;
                write_ledger_csv(csv, result.ledger);
                write_file(cfg.out_dir / "ledger.csv", csv.str());
            }
            if (cfg.emit_plot) {
                std::ostringstream csv;
                write_plot_csv(csv, result.ledger, result.report);
                write_file(cfg.out_dir / "plot.csv", csv.str());
            }
            const std::string json = backtest_report_json(result.report, cfg);
            if (cfg.emit_report) {
                write_file(cfg.out_dir / "report.json", json);
            }
            out << json;
            for (const auto& w : result.report.warnings) {
                err << "pairs: warning: " << w << '\n';
            }
        } else if (cfg.command == "montecarlo") {
            const TheoremSummary summary = verify_theorem(cfg.ou, cfg.theorem);
            const std::string json = theorem_json(summary, cfg);
            write_file(cfg.out_dir / "montecarlo.json", json);
            out << json;
        } else {
            const LemmaSummary summary = verify_lemma(cfg.ou, cfg.lemma_samples);
            const std::string json = lemma_json(summary, cfg);
            write_file(cfg.out_dir / "lemma.json", json);
            out << json;
        }
    } catch (const std::exception& e) {
        err << "pairs: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

} // namespace pairs::cli
