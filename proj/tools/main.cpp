#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "emff/scenario_config.hpp"
#include "emff/sim_engine.hpp"
#include "emff/svg_plot.hpp"
#include "emff/telemetry_csv.hpp"
#include "emff/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericError = 3;

std::string default_out_dir() {
    const char* env = std::getenv("EMFF_OUT_DIR");
    return env && *env ? env : ".";
}

void print_metrics(const std::string& label, const emff::Metrics& m) {
    std::printf("%s: overshoot %.4g cm, settling %.4g s%s, max|F| %.4g N, rms F %.4g N\n",
                label.c_str(), m.overshoot_cm, m.settling_s,
                m.settled ? "" : " (unsettled)", m.max_force, m.force_rms);
}

int cmd_run(const std::string& path, long seed, const std::string& out_dir,
            double dt_override, int num_seeds) {
    emff::Scenario s;
    try {
        s = emff::load_scenario(path);
        if (seed >= 0) s.seed = static_cast<std::uint64_t>(seed);
        if (dt_override > 0.0) {
            s.dt = dt_override;
            s.validate();
        }
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }
    try {
        const emff::Telemetry tel = emff::run_scenario(s);
        std::filesystem::create_directories(out_dir);
        const std::string csv_path = out_dir + "/" + s.name + ".csv";
        emff::write_telemetry_csv(tel, csv_path);
        std::printf("wrote %s (%zu rows)\n", csv_path.c_str(), tel.rows.size());
        for (const auto& [i, j] : tel.pair_order) {
            const double d_abs = std::fabs(s.graph.desired_of(i, j).x);
            const std::string label =
                "pair (" + std::to_string(i) + ", " + std::to_string(j) + ")";
            if (num_seeds > 1) {
                std::vector<std::uint64_t> seeds;
                for (int k = 0; k < num_seeds; ++k) seeds.push_back(s.seed + k);
                const emff::MetricsSummary sum =
                    emff::monte_carlo(s, seeds, i, j, d_abs);
                print_metrics(label + " mean over " + std::to_string(num_seeds) +
                                  " seeds",
                              sum.mean);
            } else {
                print_metrics(label, emff::compute_metrics(tel, i, j, d_abs));
            }
        }
        return kExitOk;
    } catch (const emff::SimulationError& e) {
        std::cerr << "numeric abort: " << e.what() << "\n";
        return kExitNumericError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumericError;
    }
}

int cmd_verify() {
    const std::vector<emff::SuiteResult> results = emff::run_verify();
    for (const auto& r : results) {
        std::printf("[%s] %s: %s\n", r.passed ? "pass" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
    }
    return emff::all_passed(results) ? kExitOk : kExitVerifyFailed;
}

int cmd_plot(const std::string& csv_path, const std::string& out_dir) {
    try {
        const emff::Telemetry tel = emff::read_telemetry_csv(csv_path);
        std::filesystem::create_directories(out_dir);
        const std::string stem = std::filesystem::path(csv_path).stem().string();
        for (const auto& [i, j] : tel.pair_order) {
            const std::string out = out_dir + "/" + stem + "_pair_" +
                                    std::to_string(i) + "_" + std::to_string(j) +
                                    ".svg";
            std::ofstream file(out, std::ios::binary);
            if (!file) {
                std::cerr << "cannot write " << out << "\n";
                return kExitConfigError;
            }
            file << emff::pair_plot_svg(tel, i, j);
            std::printf("wrote %s\n", out.c_str());
        }
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "plot error: " << e.what() << "\n";
        return kExitConfigError;
    }
}

int cmd_metrics(const std::string& csv_path, const std::vector<int>& pair,
                double d_abs, double t_from) {
    try {
        const emff::Telemetry tel = emff::read_telemetry_csv(csv_path);
        const emff::Metrics m =
            emff::compute_metrics(tel, pair[0], pair[1], d_abs, t_from);
        const std::string label =
            "pair (" + std::to_string(pair[0]) + ", " + std::to_string(pair[1]) + ")";
        print_metrics(label, m);
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "metrics error: " << e.what() << "\n";
        return kExitConfigError;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"1D electromagnetic formation-flying simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    long seed = -1;
    std::string out_dir = default_out_dir();
    double dt_override = 0.0;
    int num_seeds = 1;
    CLI::App* run = app.add_subcommand("run", "simulate a scenario file");
    run->add_option("scenario", scenario_path, "scenario config path")->required();
    run->add_option("--seed", seed, "RNG seed override");
    run->add_option("--out", out_dir, "output directory (default $EMFF_OUT_DIR or .)");
    run->add_option("--dt", dt_override, "integration step override, s");
    run->add_option("--seeds", num_seeds, "average metrics over this many seeds");

    CLI::App* verify = app.add_subcommand("verify", "run the property suites");

    std::string csv_path;
    CLI::App* plot = app.add_subcommand("plot", "render telemetry CSV as SVG");
    plot->add_option("csv", csv_path, "telemetry CSV path")->required();
    plot->add_option("--out", out_dir, "output directory (default $EMFF_OUT_DIR or .)");

    std::vector<int> pair;
    double d_abs = 0.0;
    double t_from = 0.0;
    CLI::App* metrics = app.add_subcommand("metrics", "step-response metrics from a CSV");
    metrics->add_option("csv", csv_path, "telemetry CSV path")->required();
    metrics->add_option("--pair", pair, "ordered pair i j")->expected(2)->required();
    metrics->add_option("--d", d_abs, "reference separation |d|, m")->required();
    metrics->add_option("--from", t_from, "evaluate from this time, s");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(scenario_path, seed, out_dir, dt_override, num_seeds);
    if (verify->parsed()) return cmd_verify();
    if (plot->parsed()) return cmd_plot(csv_path, out_dir);
    if (metrics->parsed()) return cmd_metrics(csv_path, pair, d_abs, t_from);
    return kExitConfigError;
}
