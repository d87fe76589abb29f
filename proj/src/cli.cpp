#include "aes/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "aes/config.hpp"
#include "aes/scenario.hpp"

namespace aes {

namespace fs = std::filesystem;
using nlohmann::json;

std::array<Interval, 3> default_tuning_bounds() {
    return {Interval{0.001, 1.0}, Interval{0.01, 5.0}, Interval{0.1, 10.0}};
}

namespace {

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

ScenarioConfig resolve_config(int setup, const std::string& config_path) {
    if (!config_path.empty()) return load_config_file(config_path);
    return setup_config(setup);
}

json config_json(const ScenarioConfig& cfg) {
    json j;
    std::istringstream text(config_to_text(cfg));
    std::string line;
    while (std::getline(text, line)) {
        size_t eq = line.find('=');
        j[line.substr(0, eq - 1)] = line.substr(eq + 2);
    }
    return j;
}

void write_manifest(const fs::path& path, const ScenarioConfig& cfg, uint64_t seed,
                    const std::string& command, const std::vector<std::string>& artifacts,
                    double wall_seconds, json extra) {
    json manifest;
    manifest["tool"] = kToolName;
    manifest["version"] = kToolVersion;
    manifest["command"] = command;
    manifest["seed"] = seed;
    manifest["config"] = config_json(cfg);
    manifest["artifacts"] = artifacts;
    manifest["wall_seconds"] = wall_seconds;
    if (!extra.is_null()) manifest.update(extra);
    std::ofstream out = open_output(path);
    out << manifest.dump(2) << '\n';
}

void write_snapshot_csv(std::ostream& out, const SwarmState& state) {
    out << "x,y,theta\n";
    for (const AgentState& a : state.agents)
        out << format_sig9(a.position.x) << ',' << format_sig9(a.position.y) << ','
            << format_sig9(a.heading) << '\n';
}

struct TrajectorySamples {
    std::vector<SwarmState> states;  // in file order
};

TrajectorySamples read_trajectory_csv(const std::string& path, int agent_count) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open trajectory file: " + path);

    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) throw ConfigError(path + ": empty file");
    ++line_no;
    if (line != "t,id,x,y,theta")
        throw ConfigError(path + " line 1: expected header 't,id,x,y,theta'");

    TrajectorySamples samples;
    SwarmState current;
    auto fail = [&](const std::string& what) {
        throw ConfigError(path + " line " + std::to_string(line_no) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        double fields[5];
        size_t start = 0;
        for (int f = 0; f < 5; ++f) {
            size_t comma = line.find(',', start);
            if (f < 4 && comma == std::string::npos) fail("expected 5 comma-separated fields");
            if (f == 4 && comma != std::string::npos) fail("too many fields");
            std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos
                                                                             : comma - start);
            try {
                size_t pos = 0;
                fields[f] = std::stod(cell, &pos);
                if (pos != cell.size()) fail("bad number '" + cell + "'");
            } catch (const ConfigError&) {
                throw;
            } catch (const std::exception&) {
                fail("bad number '" + cell + "'");
            }
            start = comma + 1;
        }
        int id = static_cast<int>(fields[1]);
        if (id != static_cast<int>(current.agents.size())) fail("agent ids out of order");
        if (!current.agents.empty() && fields[0] != current.time) fail("time changed mid-block");
        current.time = fields[0];
        current.agents.push_back({{fields[2], fields[3]}, fields[4]});
        if (static_cast<int>(current.agents.size()) == agent_count) {
            samples.states.push_back(std::move(current));
            current = SwarmState{};
        }
    }
    if (!current.agents.empty()) fail("trailing partial agent block");
    if (samples.states.empty()) throw ConfigError(path + ": no data rows");
    return samples;
}

/// Rebuild the spring network for a recorded run: grid adjacency from the
/// configured lattice, rest lengths from the t = 0 positions.
SpringNetwork network_from_initial(const SwarmState& initial, const LatticeSpec& lattice) {
    const int rows = lattice.rows, cols = lattice.cols;
    const double mult_sq = lattice.link_radius_mult * lattice.link_radius_mult;
    std::vector<SpringLink> links;
    const int n = rows * cols;
    for (int a = 0; a < n; ++a) {
        int ra = a / cols, ca = a % cols;
        for (int b = a + 1; b < n; ++b) {
            int rb = b / cols, cb = b % cols;
            double grid_sq = static_cast<double>((ra - rb) * (ra - rb) + (ca - cb) * (ca - cb));
            if (grid_sq <= mult_sq) {
                double rest = (initial.agents[static_cast<size_t>(b)].position -
                               initial.agents[static_cast<size_t>(a)].position)
                                  .norm();
                links.push_back({a, b, rest});
            }
        }
    }
    return SpringNetwork(std::move(links), n);
}

std::string bounds_to_string(const std::vector<Interval>& bounds) {
    std::string s;
    for (size_t i = 0; i < bounds.size(); ++i) {
        if (i) s += ',';
        s += format_sig9(bounds[i].lo) + ':' + format_sig9(bounds[i].hi);
    }
    return s;
}

std::vector<Interval> parse_bounds(const std::string& spec) {
    std::vector<Interval> bounds;
    std::istringstream in(spec);
    std::string part;
    while (std::getline(in, part, ',')) {
        size_t colon = part.find(':');
        if (colon == std::string::npos)
            throw ConfigError("bounds expect lo:hi pairs, got '" + part + "'");
        try {
            bounds.push_back({std::stod(part.substr(0, colon)), std::stod(part.substr(colon + 1))});
        } catch (const std::exception&) {
            throw ConfigError("bad bounds value in '" + part + "'");
        }
    }
    if (bounds.size() != 3)
        throw ConfigError("expected 3 bound pairs (alpha, beta, k), got " +
                          std::to_string(bounds.size()));
    return bounds;
}

}  // namespace

int cmd_run(const RunOptions& opt) {
    if (opt.config_path.empty() && (opt.setup < 1 || opt.setup > 3)) {
        std::cerr << "run: pass --setup 1|2|3 or --config FILE\n";
        return 1;
    }
    if (opt.stride < 1) {
        std::cerr << "run: stride must be >= 1\n";
        return 1;
    }
    try {
        auto t0 = std::chrono::steady_clock::now();
        ScenarioConfig cfg = resolve_config(opt.setup, opt.config_path);
        cfg.seed = opt.seed;

        Trajectory traj = run_scenario(cfg, opt.seed, 1);

        fs::create_directories(opt.out_dir);
        fs::path dir(opt.out_dir);

        {
            std::ofstream out = open_output(dir / "trajectory.csv");
            write_trajectory_csv(out, traj, opt.stride);
        }
        {
            std::ofstream out = open_output(dir / "metrics.csv");
            write_metrics_csv(out, traj);
        }
        {
            std::ofstream out = open_output(dir / "forces.csv");
            write_forces_csv(out, traj);
        }

        // Six evenly spaced scatter snapshots for plotting time-lapses.
        const int steps = cfg.step_count();
        std::vector<std::string> artifacts = {"trajectory.csv", "metrics.csv", "forces.csv"};
        for (int s = 0; s < 6; ++s) {
            auto index = static_cast<size_t>(std::llround(s * steps / 5.0));
            std::string name = "snapshot_" + std::to_string(s) + ".csv";
            std::ofstream out = open_output(dir / name);
            write_snapshot_csv(out, traj.snapshots[index]);
            artifacts.push_back(name);
        }

        {
            std::ofstream out = open_output(dir / "config.resolved.cfg");
            out << config_to_text(cfg);
        }
        artifacts.push_back("config.resolved.cfg");

        int zero_force_total = 0;
        for (const MetricsRecord& rec : traj.metrics) zero_force_total += rec.zero_force_agents;

        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::string command = std::string(kToolName) + " run --config config.resolved.cfg --seed " +
                              std::to_string(opt.seed) + " --stride " +
                              std::to_string(opt.stride) + " --out " + opt.out_dir;
        json extra;
        extra["stride"] = opt.stride;
        extra["steps"] = steps;
        extra["zero_force_samples"] = zero_force_total;
        write_manifest(dir / "manifest.json", cfg, opt.seed, command, artifacts, wall, extra);

        std::cout << "run complete: " << steps << " steps, final psi_heading = "
                  << format_sig9(traj.metrics.back().psi_heading) << ", outputs in " << opt.out_dir
                  << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "run: " << e.what() << "\n";
        return 2;
    }
}

int cmd_optimize(const OptimizeOptions& opt) {
    WeightPreset preset;
    if (opt.weights == "default") preset = WeightPreset::defaults;
    else if (opt.weights == "force") preset = WeightPreset::force;
    else if (opt.weights == "align") preset = WeightPreset::align;
    else {
        std::cerr << "optimize: --weights must be default, force or align\n";
        return 1;
    }

    try {
        auto t0 = std::chrono::steady_clock::now();
        ScenarioConfig cfg = opt.config_path.empty() ? setup_config(3)
                                                     : load_config_file(opt.config_path);
        cfg.seed = opt.seed;
        apply_weight_preset(cfg, preset);

        std::vector<Interval> bounds;
        if (opt.bounds_spec.empty()) {
            auto defaults = default_tuning_bounds();
            bounds.assign(defaults.begin(), defaults.end());
        } else {
            bounds = parse_bounds(opt.bounds_spec);
        }

        auto objective = [&cfg](const std::vector<double>& x) {
            try {
                return evaluate_objective({x[0], x[1], x[2]}, cfg);
            } catch (const std::exception&) {
                return kDivergedPenalty;
            }
        };

        OptResult result;
        bool degenerate = true;
        for (const Interval& b : bounds) degenerate = degenerate && b.lo == b.hi;
        if (degenerate) {
            // Zero-volume box: nothing to search, evaluate the single point.
            std::vector<double> point = {bounds[0].lo, bounds[1].lo, bounds[2].lo};
            result.best_cost = objective(point);
            result.best_point = point;
            result.history.push_back({1, 1, result.best_cost,
                                      std::vector<double>(bounds.size(), 0.0), 0});
        } else {
            OptProblem problem;
            problem.objective = objective;
            problem.bounds = bounds;
            problem.max_evaluations = opt.budget;
            TcacsParams params;
            params.seed = opt.seed;
            result = optimize(problem, params);
        }

        double default_cost =
            evaluate_objective({cfg.params.alpha, cfg.params.beta, cfg.params.k}, cfg);

        fs::create_directories(opt.out_dir);
        fs::path dir(opt.out_dir);

        {
            std::ofstream out = open_output(dir / "history.csv");
            out << "iter,evals,best_cost";
            for (size_t j = 0; j < bounds.size(); ++j) out << ",sigma_" << j + 1;
            out << ",tabu_count\n";
            for (const HistoryEntry& h : result.history) {
                out << h.iteration << ',' << h.evaluations << ',' << format_sig9(h.best_cost);
                for (double s : h.sigma) out << ',' << format_sig9(s);
                out << ',' << h.tabu_count << '\n';
            }
        }
        {
            json res;
            res["best"] = {{"alpha", result.best_point[0]},
                           {"beta", result.best_point[1]},
                           {"k", result.best_point[2]}};
            res["cost"] = result.best_cost;
            res["configured_cost"] = default_cost;
            res["evaluations"] = result.history.empty() ? 0 : result.history.back().evaluations;
            res["seed"] = opt.seed;
            res["weights"] = opt.weights;
            std::ofstream out = open_output(dir / "result.json");
            out << res.dump(2) << '\n';
        }
        {
            std::ofstream out = open_output(dir / "config.resolved.cfg");
            out << config_to_text(cfg);
        }

        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::string command = std::string(kToolName) + " optimize --config config.resolved.cfg" +
                              " --budget " + std::to_string(opt.budget) + " --seed " +
                              std::to_string(opt.seed) + " --bounds " + bounds_to_string(bounds) +
                              " --weights " + opt.weights + " --out " + opt.out_dir;
        json extra;
        extra["budget"] = opt.budget;
        extra["weights"] = opt.weights;
        extra["bounds"] = bounds_to_string(bounds);
        write_manifest(dir / "manifest.json", cfg, opt.seed, command,
                       {"history.csv", "result.json", "config.resolved.cfg"}, wall, extra);

        std::printf("tuned (alpha, beta, k) = (%.6g, %.6g, %.6g)\n", result.best_point[0],
                    result.best_point[1], result.best_point[2]);
        std::printf("J(tuned) = %.9g  vs  J(configured) = %.9g\n", result.best_cost, default_cost);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "optimize: " << e.what() << "\n";
        return 2;
    }
}

int cmd_metrics(const MetricsOptions& opt) {
    if (opt.trajectory_path.empty() || opt.config_path.empty()) {
        std::cerr << "metrics: pass --traj FILE and --config FILE\n";
        return 1;
    }
    try {
        ScenarioConfig cfg = load_config_file(opt.config_path);
        TrajectorySamples samples = read_trajectory_csv(opt.trajectory_path, cfg.agent_count());
        SpringNetwork net = network_from_initial(samples.states.front(), cfg.lattice);

        fs::create_directories(opt.out_dir);
        std::ofstream out = open_output(fs::path(opt.out_dir) / "metrics.csv");
        out << "t,psi_velocity,psi_heading,psi_control,total_force\n";
        for (const SwarmState& state : samples.states) {
            Forces forces = compute_forces(state, net, cfg.params);
            MetricsRecord rec = make_metrics_record(state, forces, cfg.params, cfg.eps);
            out << format_sig9(rec.time) << ',' << format_sig9(rec.psi_velocity) << ','
                << format_sig9(rec.psi_heading) << ',' << format_sig9(rec.psi_control) << ','
                << format_sig9(rec.total_force_norm) << '\n';
        }
        std::cout << "metrics recomputed for " << samples.states.size() << " samples\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "metrics: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace aes
