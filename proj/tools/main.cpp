// Footstep-planner CLI: world generation, single and batch episode runs,
// and SVG export from saved logs. Exit codes: 0 success, 1 usage or
// config error, 2 I/O error. Episode outcomes are data, never exit codes.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "lipnav/episode_io.hpp"
#include "lipnav/scenario.hpp"
#include "lipnav/simulator.hpp"
#include "lipnav/svg_plot.hpp"

namespace {

using namespace lipnav;

struct SeedRange {
    std::uint64_t first = 1;
    std::uint64_t last = 0;  // inclusive; empty when last < first
};

// "A..B" inclusive, or a single seed "A".
SeedRange parse_seeds(const std::string& text) {
    SeedRange r;
    const std::size_t dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            r.first = std::stoull(text);
            r.last = r.first;
        } else {
            r.first = std::stoull(text.substr(0, dots));
            r.last = std::stoull(text.substr(dots + 2));
        }
    } catch (const std::exception&) {
        throw CLI::ValidationError("--seeds", "expected SEED or FIRST..LAST");
    }
    return r;
}

double mean_solve_ms(const sim::EpisodeLog& log) {
    if (log.replans.empty()) {
        return 0.0;
    }
    double total = 0.0;
    for (const sim::ReplanRecord& r : log.replans) {
        total += r.solve_seconds;
    }
    return 1e3 * total / static_cast<double>(log.replans.size());
}

void print_summary(std::uint64_t seed, const sim::EpisodeLog& log) {
    std::printf("seed=%llu mode=%s outcome=%s steps=%d sim_s=%.1f wall_s=%.2f mean_solve_ms=%.2f\n",
                static_cast<unsigned long long>(seed), sim::to_string(log.mode),
                sim::to_string(log.outcome), log.steps, log.sim_seconds, log.wall_seconds,
                mean_solve_ms(log));
    if (!log.fault_message.empty()) {
        std::printf("  fault: %s\n", log.fault_message.c_str());
    }
}

struct BatchRow {
    std::uint64_t seed = 0;
    bool generated = false;
    sim::Outcome outcome = sim::Outcome::Timeout;
    int steps = 0;
    double sim_seconds = 0.0;
    double solve_ms = 0.0;
    std::string error;  // generation or setup failure
};

int cmd_gen_env(std::uint64_t seed, int count, const std::string& out) {
    sim::GenParams gp;
    gp.n_obstacles = count;
    const sim::World world = sim::generate_environment(seed, gp);
    io::write_world(out, world);
    std::printf("wrote %s: seed=%llu obstacles=%zu\n", out.c_str(),
                static_cast<unsigned long long>(seed), world.obstacles.size());
    return 0;
}

int cmd_run(const std::string& config_path, const std::optional<std::uint64_t>& seed,
            const std::optional<std::string>& mode, const std::optional<std::string>& out,
            const std::optional<std::string>& svg) {
    io::ScenarioConfig cfg =
        config_path.empty() ? io::ScenarioConfig{} : io::load_config(config_path);
    if (seed) {
        cfg.world_seed = *seed;
    }
    if (mode) {
        if (*mode != "global" && *mode != "subgoal") {
            throw CLI::ValidationError("--mode", "expected global or subgoal");
        }
        cfg.mode = *mode == "global" ? sim::Mode::GlobalGoal : sim::Mode::SubGoal;
    }
    if (out) {
        cfg.log_path = *out;
    }
    if (svg) {
        cfg.svg_path = *svg;
    }
    const sim::World world = io::world_from_config(cfg);
    const sim::EpisodeLog log =
        sim::run_episode(world, cfg.mode, cfg.mpc, cfg.rrt, cfg.run);
    if (!cfg.log_path.empty()) {
        io::write_episode(cfg.log_path, world, log);
    }
    if (!cfg.svg_path.empty()) {
        io::write_svg(cfg.svg_path, world, log, cfg.run.goal_tolerance);
    }
    print_summary(world.seed, log);
    return 0;
}

int cmd_batch(const std::string& config_path, const std::string& seeds_text,
              const std::optional<std::string>& mode, int parallelism,
              const std::optional<std::string>& out_dir) {
    io::ScenarioConfig cfg =
        config_path.empty() ? io::ScenarioConfig{} : io::load_config(config_path);
    if (mode) {
        if (*mode != "global" && *mode != "subgoal") {
            throw CLI::ValidationError("--mode", "expected global or subgoal");
        }
        cfg.mode = *mode == "global" ? sim::Mode::GlobalGoal : sim::Mode::SubGoal;
    }
    const SeedRange range = parse_seeds(seeds_text);
    if (out_dir) {
        std::error_code ec;
        std::filesystem::create_directories(*out_dir, ec);
        if (ec) {
            throw io::IoError("cannot create directory: " + *out_dir + ": " + ec.message());
        }
    }

    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = range.first; s <= range.last; ++s) {
        seeds.push_back(s);
        if (s == range.last) {
            break;  // guards wraparound at UINT64_MAX
        }
    }
    std::vector<BatchRow> rows(seeds.size());

    std::mutex io_mutex;
    std::size_t next = 0;
    std::mutex next_mutex;
    auto worker = [&]() {
        while (true) {
            std::size_t i;
            {
                std::lock_guard<std::mutex> lk(next_mutex);
                if (next >= seeds.size()) {
                    return;
                }
                i = next++;
            }
            BatchRow row;
            row.seed = seeds[i];
            try {
                io::ScenarioConfig local = cfg;
                local.world_seed = seeds[i];
                const sim::World world = io::world_from_config(local);
                const sim::EpisodeLog log =
                    sim::run_episode(world, local.mode, local.mpc, local.rrt, local.run);
                row.generated = true;
                row.outcome = log.outcome;
                row.steps = log.steps;
                row.sim_seconds = log.sim_seconds;
                row.solve_ms = mean_solve_ms(log);
                if (out_dir) {
                    const std::string path = *out_dir + "/episode_" + std::to_string(seeds[i]) +
                                             "_" + sim::to_string(local.mode) + ".ndjson";
                    std::lock_guard<std::mutex> lk(io_mutex);
                    io::write_episode(path, world, log);
                }
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            rows[i] = std::move(row);
        }
    };

    const int n_threads = std::max(1, std::min<int>(parallelism, static_cast<int>(seeds.size())));
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) {
        pool.emplace_back(worker);
    }
    for (std::thread& t : pool) {
        t.join();
    }

    std::printf("%-8s %-18s %6s %8s %10s\n", "seed", "outcome", "steps", "sim_s", "solve_ms");
    int successes = 0;
    int completed = 0;
    std::vector<int> success_steps;
    double solve_total = 0.0;
    for (const BatchRow& row : rows) {
        if (!row.error.empty()) {
            std::printf("%-8llu %-18s %6s %8s %10s  %s\n",
                        static_cast<unsigned long long>(row.seed), "error", "-", "-", "-",
                        row.error.c_str());
            continue;
        }
        ++completed;
        solve_total += row.solve_ms;
        if (row.outcome == sim::Outcome::GoalReached) {
            ++successes;
            success_steps.push_back(row.steps);
        }
        std::printf("%-8llu %-18s %6d %8.1f %10.2f\n", static_cast<unsigned long long>(row.seed),
                    sim::to_string(row.outcome), row.steps, row.sim_seconds, row.solve_ms);
    }
    if (!rows.empty()) {
        std::sort(success_steps.begin(), success_steps.end());
        const double rate =
            rows.empty() ? 0.0 : 100.0 * successes / static_cast<double>(rows.size());
        double mean_steps = 0.0;
        double median_steps = 0.0;
        if (!success_steps.empty()) {
            mean_steps = std::accumulate(success_steps.begin(), success_steps.end(), 0.0) /
                         static_cast<double>(success_steps.size());
            const std::size_t m = success_steps.size() / 2;
            median_steps = success_steps.size() % 2 == 1
                               ? success_steps[m]
                               : 0.5 * (success_steps[m - 1] + success_steps[m]);
        }
        std::printf("episodes=%zu success_rate=%.1f%% mean_steps=%.1f median_steps=%.1f "
                    "mean_solve_ms=%.2f\n",
                    rows.size(), rate, mean_steps, median_steps,
                    completed > 0 ? solve_total / completed : 0.0);
    } else {
        std::printf("episodes=0\n");
    }
    return 0;
}

int cmd_plot(const std::string& log_path, const std::string& out_svg) {
    const io::LoadedEpisode ep = io::load_episode(log_path);
    io::write_svg(out_svg, ep.world, ep.log);
    std::printf("wrote %s\n", out_svg.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bipedal footstep-planning engine and kinematic simulator"};
    app.require_subcommand(1);

    std::uint64_t gen_seed = 1;
    int gen_count = 8;
    std::string gen_out = "world.json";
    CLI::App* gen = app.add_subcommand("gen-env", "Generate a seeded random world file");
    gen->add_option("--seed", gen_seed, "Generator seed");
    gen->add_option("--count", gen_count, "Number of obstacles")->check(CLI::NonNegativeNumber);
    gen->add_option("--out", gen_out, "Output world file");

    std::string run_config;
    std::optional<std::uint64_t> run_seed;
    std::optional<std::string> run_mode;
    std::optional<std::string> run_out;
    std::optional<std::string> run_svg;
    CLI::App* run = app.add_subcommand("run", "Run one episode from a config");
    run->add_option("--config", run_config, "Scenario config file (defaults when omitted)");
    run->add_option("--seed", run_seed, "Override the world seed");
    run->add_option("--mode", run_mode, "Override the mode: global or subgoal");
    run->add_option("--out", run_out, "Override the log path");
    run->add_option("--svg", run_svg, "Also write an SVG plot here");

    std::string batch_config;
    std::string batch_seeds = "1..10";
    std::optional<std::string> batch_mode;
    int batch_parallelism = 1;
    std::optional<std::string> batch_out;
    CLI::App* batch = app.add_subcommand("batch", "Run one episode per seed and aggregate");
    batch->add_option("--config", batch_config, "Scenario config file (defaults when omitted)");
    batch->add_option("--seeds", batch_seeds, "Seed range FIRST..LAST (inclusive) or one seed");
    batch->add_option("--mode", batch_mode, "Override the mode: global or subgoal");
    batch->add_option("--parallelism", batch_parallelism, "Concurrent episodes")
        ->check(CLI::PositiveNumber);
    batch->add_option("--out", batch_out, "Directory for per-seed log files");

    std::string plot_log;
    std::string plot_out = "episode.svg";
    CLI::App* plot = app.add_subcommand("plot", "Render a saved episode log to SVG");
    plot->add_option("--log", plot_log, "Episode log file")->required();
    plot->add_option("--out", plot_out, "Output SVG file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (gen->parsed()) {
            return cmd_gen_env(gen_seed, gen_count, gen_out);
        }
        if (run->parsed()) {
            return cmd_run(run_config, run_seed, run_mode, run_out, run_svg);
        }
        if (batch->parsed()) {
            return cmd_batch(batch_config, batch_seeds, batch_mode, batch_parallelism, batch_out);
        }
        if (plot->parsed()) {
            return cmd_plot(plot_log, plot_out);
        }
    } catch (const io::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        // ConfigError, invalid_argument, GenerationFailed: operator mistakes.
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
