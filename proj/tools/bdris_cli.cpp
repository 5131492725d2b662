// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver for the experiment harness.
//
//   bdris arc          sample the feasible admittance arc to CSV
//   bdris siso         run the SISO sweep and emit figure data
//   bdris mumiso       run the MU-MISO sweep and emit figure data
//   bdris convergence  single-realization solver trace and solution export
//   bdris dump-config  print the default JSON configuration
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "bdris/harness.hpp"

namespace {

using namespace bdris;

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f)
        throw ConfigError("cannot open output file: " + path);
    return f;
}

ExperimentConfig load_or_default(const std::string& config_path,
                                 std::uint64_t seed, bool have_seed,
                                 int threads) {
    ExperimentConfig cfg =
        config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (have_seed)
        cfg.base_seed = seed;
    if (threads > 0)
        cfg.threads = threads;
    return cfg;
}

void run_sweep(const std::string& system, const std::string& config_path,
               std::uint64_t seed, bool have_seed, int threads,
               const std::string& out, const std::string& figure,
               const std::string& dump_channels) {
    ExperimentConfig cfg = load_or_default(config_path, seed, have_seed, threads);
    cfg.system = system;
    if (system == "mumiso" && cfg.algorithms == std::vector<std::string>{"mm_admm"})
        cfg.algorithms = {"bcd"};

    if (!dump_channels.empty()) {
        ChannelConfig ch_cfg = cfg.channel;
        ch_cfg.m = cfg.m;
        std::ofstream f = open_out(dump_channels);
        if (system == "siso")
            emit_channels_csv(generate_siso(ch_cfg, cfg.base_seed), f);
        else
            emit_channels_csv(generate_mumiso(ch_cfg, cfg.base_seed), f);
    }

    const ExperimentOutput result = run_experiment(cfg);
    if (out.empty()) {
        emit_figure_data(result.rows, figure, std::cout);
    } else {
        std::ofstream f = open_out(out);
        emit_figure_data(result.rows, figure, f);
    }
}

void run_convergence(const std::string& config_path, std::uint64_t seed,
                     bool have_seed, const std::string& algo,
                     const std::string& trace_out,
                     const std::string& solution_out) {
    ExperimentConfig cfg = load_or_default(config_path, seed, have_seed, 0);
    ChannelConfig ch_cfg = cfg.channel;
    ch_cfg.m = cfg.m;

    CircuitParams circuit = cfg.circuit;
    circuit.r = std::max(cfg.r_list.front(), 1e-9);
    circuit.l1 = cfg.l1_list.front();

    ArchitectureSpec spec;
    spec.m = cfg.m;
    spec.mbar = cfg.mbar_list.front();
    spec.topology = topology_from_string(cfg.topologies.front());

    std::ofstream trace_f = open_out(trace_out);
    ScatteringMatrix phi;
    VectorXc ybar;
    if (algo == "bcd") {
        const MuMisoChannels ch = generate_mumiso(ch_cfg, cfg.base_seed);
        BcdConfig bcd;
        bcd.phi_admm = cfg.solver;
        bcd.bcd_tol = cfg.bcd_tol;
        bcd.max_bcd = cfg.max_bcd;
        bcd.p_tx_watts = dbm_to_watts(cfg.p_dbm_list.front());
        const BcdResult res = bcd_solve(ch, spec, circuit, bcd);
        emit_bcd_trace_csv(res, trace_f);
        phi = res.phi;
        ybar = res.final_ybar;
    } else {
        const SisoChannels ch = generate_siso(ch_cfg, cfg.base_seed);
        const SolveTrace trace =
            algorithm_from_string(algo) == Algorithm::mm_admm
                ? mm_admm_solve(ch, spec, circuit, cfg.solver)
                : low_complexity_solve(ch, spec, circuit, cfg.solver);
        emit_trace_csv(trace, trace_f);
        phi = trace.final_phi;
        ybar = trace.final_ybar;
    }
    if (!solution_out.empty()) {
        std::ofstream f = open_out(solution_out);
        emit_solution_csv(phi, ybar, circuit, f);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lossy reconfigurable-surface optimization experiments"};
    app.require_subcommand(1);

    // arc
    CircuitParams arc_params;
    int arc_samples = 256;
    std::string arc_out;
    auto* arc = app.add_subcommand("arc", "Sample the feasible admittance arc");
    arc->add_option("--r", arc_params.r, "series resistance, ohms");
    arc->add_option("--l1", arc_params.l1, "parallel inductance, henries");
    arc->add_option("--l2", arc_params.l2, "series inductance, henries");
    arc->add_option("--c-min", arc_params.c_min, "capacitance lower bound, farads");
    arc->add_option("--c-max", arc_params.c_max, "capacitance upper bound, farads");
    arc->add_option("--freq", arc_params.f, "operating frequency, hertz");
    arc->add_option("--samples", arc_samples, "number of sample points");
    arc->add_option("--out", arc_out, "output CSV path (default stdout)");

    // shared sweep options
    std::string config_path, out, figure = "rate_vs_R", dump_channels;
    std::uint64_t seed = 0;
    int threads = 0;
    auto add_sweep_opts = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON configuration file");
        sub->add_option("--seed", seed, "base RNG seed");
        sub->add_option("--out", out, "figure CSV path (default stdout)");
        sub->add_option("--figure", figure,
                        "rate_vs_R | rate_vs_mbar | rate_vs_P | rate_vs_L1 | "
                        "complexity_tradeoff");
        sub->add_option("--threads", threads, "worker threads (0 = hardware)");
        sub->add_option("--dump-channels", dump_channels,
                        "CSV of the first realization's channels");
    };
    auto* siso = app.add_subcommand("siso", "Run the SISO received-power sweep");
    add_sweep_opts(siso);
    auto* mumiso = app.add_subcommand("mumiso", "Run the MU-MISO sum-rate sweep");
    add_sweep_opts(mumiso);

    // convergence
    std::string conv_algo = "mm_admm", trace_out, solution_out;
    auto* conv = app.add_subcommand(
        "convergence", "Single-realization trace and solution export");
    conv->add_option("--config", config_path, "JSON configuration file");
    conv->add_option("--seed", seed, "RNG seed");
    conv->add_option("--algo", conv_algo, "mm_admm | low_complexity | bcd");
    conv->add_option("--trace-out", trace_out, "trace CSV path")->required();
    conv->add_option("--solution-out", solution_out,
                     "final Phi / theta / capacitance CSV path");

    auto* dump = app.add_subcommand("dump-config",
                                    "Print the default JSON configuration");

    CLI11_PARSE(app, argc, argv);

    try {
        const bool have_seed = app.count_all() && (siso->count("--seed") ||
                                                   mumiso->count("--seed") ||
                                                   conv->count("--seed"));
        if (arc->parsed()) {
            if (arc_out.empty()) {
                bdris::emit_arc_csv(arc_params, arc_samples, std::cout);
            } else {
                std::ofstream f = open_out(arc_out);
                bdris::emit_arc_csv(arc_params, arc_samples, f);
            }
        } else if (siso->parsed()) {
            run_sweep("siso", config_path, seed, have_seed, threads, out, figure,
                      dump_channels);
        } else if (mumiso->parsed()) {
            run_sweep("mumiso", config_path, seed, have_seed, threads, out,
                      figure, dump_channels);
        } else if (conv->parsed()) {
            run_convergence(config_path, seed, have_seed, conv_algo, trace_out,
                            solution_out);
        } else if (dump->parsed()) {
            std::cout << bdris::default_config_json();
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
