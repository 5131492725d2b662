// SPDX-License-Identifier: Apache-2.0
//
// Experiment harness: sweep grids over circuit resistance, inductance,
// transmit power, topology and group size with paired channel realizations,
// plus CSV emitters for the figure data.
#ifndef BDRIS_HARNESS_HPP
#define BDRIS_HARNESS_HPP

#include <ostream>
#include <string>
#include <vector>

#include "bdris/mumiso.hpp"

namespace bdris {

enum class Algorithm { mm_admm, low_complexity, bcd };

std::string to_string(Algorithm a);
std::string to_string(Topology t);
Algorithm algorithm_from_string(const std::string& s);
Topology topology_from_string(const std::string& s);

struct ExperimentConfig {
    std::string system = "siso"; // "siso" or "mumiso"
    int m = 8;
    std::vector<int> mbar_list = {8};
    std::vector<std::string> topologies = {"group"};
    std::vector<std::string> algorithms = {"mm_admm"};
    std::vector<double> r_list = {1.0};      // ohms; 0 is clamped to 1e-9
    std::vector<double> l1_list = {6e-9};    // henries
    std::vector<double> p_dbm_list = {20.0}; // transmit power sweep
    ChannelConfig channel;
    CircuitParams circuit; // base values; r/l1 overridden by the sweeps
    MmAdmmConfig solver;
    double bcd_tol = 1e-4;
    int max_bcd = 30;
    int n_realizations = 20;
    std::uint64_t base_seed = 1;
    int threads = 0; // 0 = hardware concurrency
    std::string per_realization_out; // optional CSV of raw per-run rows
};

/// Parses a JSON config file; missing keys keep their defaults.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json_text(const std::string& text);
std::string default_config_json(const ExperimentConfig& cfg = {});

struct ResultRow {
    double r_ohm = 0.0;
    double l1_h = 0.0;
    double p_dbm = 0.0;
    std::string topology;
    int mbar = 0;
    std::string algo;
    int n = 0;                  // realizations aggregated
    double mean_rate = 0.0;     // bits/s/Hz
    double stderr_rate = 0.0;   // standard error of the mean
    double mean_upper_bound = 0.0; // SISO analytic bound rate; 0 for MU-MISO
    double mean_iterations = 0.0;
    double mean_wall_ms = 0.0;
    int complexity = 0;         // tunable components for the architecture
};

struct RealizationRow {
    ResultRow sweep;  // coordinates; aggregate fields unused
    int realization = 0;
    double rate = 0.0;
    double upper_bound = 0.0;
    long iterations = 0;
    double wall_ms = 0.0;
};

struct ExperimentOutput {
    std::vector<ResultRow> rows;
    std::vector<RealizationRow> raw;
};

/// Runs the full sweep; channels are paired across sweep points by
/// realization index (seed = base_seed + index).
ExperimentOutput run_experiment(const ExperimentConfig& cfg);

/// Figure kinds select the x column: "rate_vs_R", "rate_vs_mbar",
/// "rate_vs_P", "rate_vs_L1", "complexity_tradeoff".
void emit_figure_data(const std::vector<ResultRow>& rows,
                      const std::string& figure_kind, std::ostream& os);
void emit_realizations(const std::vector<RealizationRow>& raw, std::ostream& os);

/// theta, re_siemens, im_siemens, capacitance_farads over a sampled arc.
void emit_arc_csv(const CircuitParams& params, int samples, std::ostream& os);

/// outer, inner, objective, res_phic, res_zy rows of a solver trace.
void emit_trace_csv(const SolveTrace& trace, std::ostream& os);
void emit_bcd_trace_csv(const BcdResult& result, std::ostream& os);

/// Final solution export: scattering entries plus recovered theta and
/// capacitance per tunable component.
void emit_solution_csv(const ScatteringMatrix& phi, const VectorXc& ybar,
                       const CircuitParams& params, std::ostream& os);

/// One row per complex channel entry: link, user, row, col, re, im.
void emit_channels_csv(const SisoChannels& ch, std::ostream& os);
void emit_channels_csv(const MuMisoChannels& ch, std::ostream& os);

} // namespace bdris

#endif
