#include <CLI11.hpp>

#include "aes/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Collective-motion simulator for spring-coupled 2-DoF agents "
                 "with drive-force steering and (alpha, beta, k) tuning"};
    app.set_version_flag("--version", std::string(aes::kToolVersion));
    app.require_subcommand(1);

    aes::RunOptions run_opt;
    CLI::App* run = app.add_subcommand("run", "Simulate a scenario and export CSV artifacts");
    run->add_option("--setup", run_opt.setup, "Built-in setup: 1 linear, 2 rotational, 3 combined");
    run->add_option("--config", run_opt.config_path, "Config file (overrides --setup)");
    run->add_option("--seed", run_opt.seed, "Run seed");
    run->add_option("--out", run_opt.out_dir, "Output directory");
    run->add_option("--stride", run_opt.stride, "Trajectory sampling stride");

    aes::OptimizeOptions optimize_opt;
    CLI::App* optimize =
        app.add_subcommand("optimize", "Tune (alpha, beta, k) against the Monte-Carlo objective");
    optimize->add_option("--config", optimize_opt.config_path, "Scenario config file");
    optimize->add_option("--budget", optimize_opt.budget, "Objective evaluation budget");
    optimize->add_option("--seed", optimize_opt.seed, "Optimizer seed");
    optimize->add_option("--bounds", optimize_opt.bounds_spec,
                         "Decision bounds lo:hi,lo:hi,lo:hi for alpha,beta,k");
    optimize->add_option("--weights", optimize_opt.weights,
                         "Objective weight preset: default | force | align");
    optimize->add_option("--out", optimize_opt.out_dir, "Output directory");

    aes::MetricsOptions metrics_opt;
    CLI::App* metrics =
        app.add_subcommand("metrics", "Recompute order parameters from a stored trajectory");
    metrics->add_option("--traj", metrics_opt.trajectory_path, "Trajectory CSV from a run");
    metrics->add_option("--config", metrics_opt.config_path, "Config matching the run");
    metrics->add_option("--out", metrics_opt.out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (run->parsed()) return aes::cmd_run(run_opt);
    if (optimize->parsed()) return aes::cmd_optimize(optimize_opt);
    return aes::cmd_metrics(metrics_opt);
}
