#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bleip/csvio.hpp"
#include "bleip/engine.hpp"
#include "bleip/metrics.hpp"
#include "bleip/scenario.hpp"

namespace fs = std::filesystem;
using namespace bleip;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;

void write_run_outputs(const MetricsLog& log, const fs::path& dir)
{
    fs::create_directories(dir);
    // Write to temporaries first, then move into place atomically.
    auto emit = [&](const std::string& name, auto writer) {
        fs::path tmp = dir / (name + ".tmp");
        writer(tmp.string());
        fs::rename(tmp, dir / name);
    };
    emit("puts.csv", [&](const std::string& p) { csvio::write_puts_csv(log, p); });
    emit("nodes.csv", [&](const std::string& p) { csvio::write_nodes_csv(log, p); });
    emit("summary.json", [&](const std::string& p) { csvio::write_summary_json(log, p); });
}

std::string fmt_pct(std::optional<double> v)
{
    if (!v) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", *v);
    return buf;
}

std::string fmt_us(std::optional<Dur> v)
{
    if (!v) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1fms", static_cast<double>(*v) / 1000.0);
    return buf;
}

void print_report_row(const std::string& name, const MetricsLog& log)
{
    std::printf("%-24s %8zu  pdr=%-7s p50=%-10s p90=%-10s p99=%-10s\n",
                name.c_str(), log.puts.size(), fmt_pct(metrics::pdr(log)).c_str(),
                fmt_us(metrics::rtt_percentile(log, 50)).c_str(),
                fmt_us(metrics::rtt_percentile(log, 90)).c_str(),
                fmt_us(metrics::rtt_percentile(log, 99)).c_str());
}

int cmd_run(const std::string& scenario, std::optional<std::uint64_t> seed,
            const std::string& out_dir)
{
    ScenarioConfig cfg = load_scenario_file(scenario);
    if (seed) cfg.seed = *seed;
    MetricsLog log = run_scenario(cfg);
    write_run_outputs(log, out_dir);
    print_report_row(fs::path(scenario).stem().string(), log);
    return kExitOk;
}

int cmd_sweep(const std::string& scenario, const std::string& param,
              const std::vector<std::string>& values, const std::string& out_dir)
{
    ScenarioConfig base = load_scenario_file(scenario);
    fs::create_directories(out_dir);

    fs::path sweep_tmp = fs::path(out_dir) / "sweep.csv.tmp";
    std::ofstream sweep(sweep_tmp, std::ios::binary);
    if (!sweep) throw SimError("cannot write " + sweep_tmp.string());
    sweep << param << ",pdr,p50_us,p90_us\n";

    std::vector<MetricsLog> logs = sweep_scenario(base, param, values);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const MetricsLog& log = logs[i];
        fs::path sub = fs::path(out_dir) / (param + "_" + values[i]);
        write_run_outputs(log, sub);
        print_report_row(param + "=" + values[i], log);

        auto pdr = metrics::pdr(log);
        auto p50 = metrics::rtt_percentile(log, 50);
        auto p90 = metrics::rtt_percentile(log, 90);
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%s,%.6f,%s,%s\n", values[i].c_str(),
                      pdr.value_or(0.0),
                      p50 ? std::to_string(*p50).c_str() : "LOST",
                      p90 ? std::to_string(*p90).c_str() : "LOST");
        sweep << buf;
    }
    sweep.close();
    fs::rename(sweep_tmp, fs::path(out_dir) / "sweep.csv");
    return kExitOk;
}

int cmd_report(const std::string& results_dir)
{
    std::map<std::string, fs::path> runs;
    if (fs::exists(fs::path(results_dir) / "puts.csv")) {
        runs[fs::path(results_dir).filename().string()] = results_dir;
    } else {
        for (const auto& entry : fs::directory_iterator(results_dir)) {
            if (entry.is_directory() && fs::exists(entry.path() / "puts.csv")) {
                runs[entry.path().filename().string()] = entry.path();
            }
        }
    }
    if (runs.empty()) {
        std::cerr << "no run outputs found under " << results_dir << "\n";
        return kExitIo;
    }

    std::printf("%-24s %8s  %s\n", "run", "puts", "metrics");
    for (const auto& [name, dir] : runs) {
        MetricsLog log = csvio::read_run_dir(dir.string());
        print_report_row(name, log);
        csvio::write_cdf_csv(log, (dir / "cdf.csv").string(), 1000);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Discrete-event simulator for IP over BLE extended advertisements"};
    app.require_subcommand(1);

    std::string scenario;
    std::string out_dir = "results";
    std::optional<std::uint64_t> seed;
    std::string param;
    std::vector<std::string> values;
    std::string results_dir;

    auto* run = app.add_subcommand("run", "Run one scenario and write CSV/JSON results");
    run->add_option("scenario", scenario, "Scenario TOML file")->required();
    run->add_option("--seed", seed, "Override the scenario seed");
    run->add_option("--out", out_dir, "Output directory");

    auto* sweep = app.add_subcommand("sweep", "Run a scenario once per parameter value");
    sweep->add_option("scenario", scenario, "Scenario TOML file")->required();
    sweep->add_option("--param", param, "Scenario key to sweep")->required();
    sweep->add_option("--values", values, "Values to sweep over")->required();
    sweep->add_option("--out", out_dir, "Output directory");

    auto* report = app.add_subcommand("report", "Summarize result directories");
    report->add_option("results", results_dir, "Results directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(scenario, seed, out_dir);
        if (sweep->parsed()) return cmd_sweep(scenario, param, values, out_dir);
        if (report->parsed()) return cmd_report(results_dir);
    } catch (const InvalidConfig& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}
