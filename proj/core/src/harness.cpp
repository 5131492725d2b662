// SPDX-License-Identifier: Apache-2.0
#include "bdris/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace bdris {

using nlohmann::json;

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::mm_admm: return "mm_admm";
        case Algorithm::low_complexity: return "low_complexity";
        case Algorithm::bcd: return "bcd";
    }
    throw ConfigError("unknown algorithm");
}

std::string to_string(Topology t) {
    switch (t) {
        case Topology::group: return "group";
        case Topology::forest_tridiagonal: return "tridiagonal";
        case Topology::forest_arrowhead: return "arrowhead";
    }
    throw ConfigError("unknown topology");
}

Algorithm algorithm_from_string(const std::string& s) {
    if (s == "mm_admm") return Algorithm::mm_admm;
    if (s == "low_complexity") return Algorithm::low_complexity;
    if (s == "bcd") return Algorithm::bcd;
    throw ConfigError("unknown algorithm: " + s);
}

Topology topology_from_string(const std::string& s) {
    if (s == "group") return Topology::group;
    if (s == "tridiagonal") return Topology::forest_tridiagonal;
    if (s == "arrowhead") return Topology::forest_arrowhead;
    throw ConfigError("unknown topology: " + s);
}

namespace {

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key))
        out = j.at(key).get<T>();
}

void parse_channel(const json& j, ChannelConfig& c) {
    maybe(j, "n", c.n);
    maybe(j, "k", c.k);
    maybe(j, "d_rt", c.d_rt);
    maybe(j, "d_ri", c.d_ri);
    maybe(j, "d_it", c.d_it);
    maybe(j, "eps_rt", c.eps_rt);
    maybe(j, "eps_ri", c.eps_ri);
    maybe(j, "eps_it", c.eps_it);
    maybe(j, "zeta0_db", c.zeta0_db);
    maybe(j, "d0", c.d0);
    maybe(j, "kappa_ri_db", c.kappa_ri_db);
    maybe(j, "kappa_it_db", c.kappa_it_db);
    maybe(j, "sigma2_dbm", c.sigma2_dbm);
}

void parse_circuit(const json& j, CircuitParams& c) {
    maybe(j, "r_ohm", c.r);
    maybe(j, "l1_h", c.l1);
    maybe(j, "l2_h", c.l2);
    maybe(j, "c_min_f", c.c_min);
    maybe(j, "c_max_f", c.c_max);
    maybe(j, "f_hz", c.f);
}

void parse_solver(const json& j, MmAdmmConfig& s) {
    maybe(j, "rho1", s.rho1);
    maybe(j, "rho2", s.rho2);
    maybe(j, "outer_tol", s.outer_tol);
    maybe(j, "inner_tol", s.inner_tol);
    maybe(j, "max_outer", s.max_outer);
    maybe(j, "max_inner", s.max_inner);
}

} // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid config JSON: ") + e.what());
    }
    ExperimentConfig cfg;
    maybe(j, "system", cfg.system);
    if (cfg.system != "siso" && cfg.system != "mumiso")
        throw ConfigError("system must be 'siso' or 'mumiso'");
    maybe(j, "m", cfg.m);
    maybe(j, "mbar_list", cfg.mbar_list);
    maybe(j, "topologies", cfg.topologies);
    maybe(j, "algorithms", cfg.algorithms);
    maybe(j, "r_list", cfg.r_list);
    maybe(j, "l1_list", cfg.l1_list);
    maybe(j, "p_dbm_list", cfg.p_dbm_list);
    maybe(j, "n_realizations", cfg.n_realizations);
    maybe(j, "base_seed", cfg.base_seed);
    maybe(j, "threads", cfg.threads);
    maybe(j, "per_realization_out", cfg.per_realization_out);
    maybe(j, "bcd_tol", cfg.bcd_tol);
    maybe(j, "max_bcd", cfg.max_bcd);
    if (j.contains("channel")) parse_channel(j.at("channel"), cfg.channel);
    if (j.contains("circuit")) parse_circuit(j.at("circuit"), cfg.circuit);
    if (j.contains("solver")) parse_solver(j.at("solver"), cfg.solver);
    for (const auto& t : cfg.topologies)
        topology_from_string(t); // validate early
    for (const auto& a : cfg.algorithms)
        algorithm_from_string(a);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_json_text(buf.str());
}

std::string default_config_json(const ExperimentConfig& cfg) {
    json j;
    j["system"] = cfg.system;
    j["m"] = cfg.m;
    j["mbar_list"] = cfg.mbar_list;
    j["topologies"] = cfg.topologies;
    j["algorithms"] = cfg.algorithms;
    j["r_list"] = cfg.r_list;
    j["l1_list"] = cfg.l1_list;
    j["p_dbm_list"] = cfg.p_dbm_list;
    j["n_realizations"] = cfg.n_realizations;
    j["base_seed"] = cfg.base_seed;
    j["threads"] = cfg.threads;
    j["per_realization_out"] = cfg.per_realization_out;
    j["bcd_tol"] = cfg.bcd_tol;
    j["max_bcd"] = cfg.max_bcd;
    j["channel"] = {{"n", cfg.channel.n},
                    {"k", cfg.channel.k},
                    {"d_rt", cfg.channel.d_rt},
                    {"d_ri", cfg.channel.d_ri},
                    {"d_it", cfg.channel.d_it},
                    {"eps_rt", cfg.channel.eps_rt},
                    {"eps_ri", cfg.channel.eps_ri},
                    {"eps_it", cfg.channel.eps_it},
                    {"zeta0_db", cfg.channel.zeta0_db},
                    {"d0", cfg.channel.d0},
                    {"kappa_ri_db", cfg.channel.kappa_ri_db},
                    {"kappa_it_db", cfg.channel.kappa_it_db},
                    {"sigma2_dbm", cfg.channel.sigma2_dbm}};
    j["circuit"] = {{"r_ohm", cfg.circuit.r},     {"l1_h", cfg.circuit.l1},
                    {"l2_h", cfg.circuit.l2},     {"c_min_f", cfg.circuit.c_min},
                    {"c_max_f", cfg.circuit.c_max}, {"f_hz", cfg.circuit.f}};
    j["solver"] = {{"rho1", cfg.solver.rho1},
                   {"rho2", cfg.solver.rho2},
                   {"outer_tol", cfg.solver.outer_tol},
                   {"inner_tol", cfg.solver.inner_tol},
                   {"max_outer", cfg.solver.max_outer},
                   {"max_inner", cfg.solver.max_inner}};
    return j.dump(2) + "\n";
}

namespace {

struct SweepPoint {
    double r_ohm, l1_h, p_dbm;
    std::string topology;
    int mbar;
    std::string algo;
};

struct TaskResult {
    double rate = 0.0;
    double upper_bound = 0.0;
    long iterations = 0;
    double wall_ms = 0.0;
};

TaskResult run_one(const ExperimentConfig& cfg, const SweepPoint& pt,
                   int realization) {
    ChannelConfig ch_cfg = cfg.channel;
    ch_cfg.m = cfg.m;
    const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(realization);

    CircuitParams circuit = cfg.circuit;
    circuit.r = std::max(pt.r_ohm, 1e-9); // R = 0 is modeled as 1 nano-ohm
    circuit.l1 = pt.l1_h;

    ArchitectureSpec spec;
    spec.m = cfg.m;
    spec.mbar = pt.mbar;
    spec.topology = topology_from_string(pt.topology);

    const double p_tx = dbm_to_watts(pt.p_dbm);
    const double sigma2 = ch_cfg.sigma2_watts();
    const Algorithm algo = algorithm_from_string(pt.algo);

    TaskResult out;
    const auto t0 = std::chrono::steady_clock::now();
    if (algo == Algorithm::bcd) {
        const MuMisoChannels ch = generate_mumiso(ch_cfg, seed);
        BcdConfig bcd;
        bcd.phi_admm = cfg.solver;
        bcd.bcd_tol = cfg.bcd_tol;
        bcd.max_bcd = cfg.max_bcd;
        bcd.p_tx_watts = p_tx;
        const BcdResult res = bcd_solve(ch, spec, circuit, bcd);
        out.rate = res.sum_rate_per_iter.back();
        for (const auto& row : res.rows)
            out.iterations += row.phi_admm_iters;
    } else {
        const SisoChannels ch = generate_siso(ch_cfg, seed);
        const SolveTrace trace = algo == Algorithm::mm_admm
                                     ? mm_admm_solve(ch, spec, circuit, cfg.solver)
                                     : low_complexity_solve(ch, spec, circuit,
                                                            cfg.solver);
        out.rate = received_power_and_rate(ch, trace.final_phi, p_tx, sigma2).rate;
        out.upper_bound = std::log2(
            1.0 + p_tx * siso_upper_bound(ch, spec) / sigma2);
        out.iterations = trace.inner_iterations;
    }
    out.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return out;
}

} // namespace

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
    if (cfg.n_realizations <= 0)
        throw ConfigError("n_realizations must be positive");

    std::vector<SweepPoint> points;
    for (double r : cfg.r_list)
        for (double l1 : cfg.l1_list)
            for (double p : cfg.p_dbm_list)
                for (const auto& topo : cfg.topologies)
                    for (int mbar : cfg.mbar_list)
                        for (const auto& algo : cfg.algorithms)
                            points.push_back({r, l1, p, topo, mbar, algo});

    const int nr = cfg.n_realizations;
    std::vector<TaskResult> results(points.size() * nr);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error;
    std::mutex error_mu;

    auto worker = [&]() {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= results.size() || failed.load())
                return;
            try {
                results[t] = run_one(cfg, points[t / nr], static_cast<int>(t % nr));
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mu);
                failed.store(true);
                if (error.empty())
                    error = e.what();
                return;
            }
        }
    };

    unsigned n_threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                         : std::thread::hardware_concurrency();
    if (n_threads == 0)
        n_threads = 1;
    n_threads = std::min<std::size_t>(n_threads, results.size());
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n_threads; ++i)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
    if (failed.load())
        throw Error("experiment task failed: " + error);

    ExperimentOutput out;
    for (std::size_t s = 0; s < points.size(); ++s) {
        const SweepPoint& pt = points[s];
        ResultRow row;
        row.r_ohm = pt.r_ohm;
        row.l1_h = pt.l1_h;
        row.p_dbm = pt.p_dbm;
        row.topology = pt.topology;
        row.mbar = pt.mbar;
        row.algo = pt.algo;
        row.n = nr;
        ArchitectureSpec spec;
        spec.m = cfg.m;
        spec.mbar = pt.mbar;
        spec.topology = topology_from_string(pt.topology);
        row.complexity = circuit_complexity(spec);

        double sum = 0.0, sumsq = 0.0;
        for (int i = 0; i < nr; ++i) {
            const TaskResult& tr = results[s * nr + i];
            sum += tr.rate;
            sumsq += tr.rate * tr.rate;
            row.mean_upper_bound += tr.upper_bound / nr;
            row.mean_iterations += static_cast<double>(tr.iterations) / nr;
            row.mean_wall_ms += tr.wall_ms / nr;
            RealizationRow raw;
            raw.sweep = row;
            raw.realization = i;
            raw.rate = tr.rate;
            raw.upper_bound = tr.upper_bound;
            raw.iterations = tr.iterations;
            raw.wall_ms = tr.wall_ms;
            out.raw.push_back(std::move(raw));
        }
        row.mean_rate = sum / nr;
        if (nr > 1) {
            const double var =
                std::max(0.0, (sumsq - nr * row.mean_rate * row.mean_rate) /
                                  (nr - 1));
            row.stderr_rate = std::sqrt(var / nr);
        }
        out.rows.push_back(std::move(row));
    }

    if (!cfg.per_realization_out.empty()) {
        std::ofstream f(cfg.per_realization_out);
        if (!f)
            throw ConfigError("cannot open output file: " + cfg.per_realization_out);
        emit_realizations(out.raw, f);
    }
    return out;
}

namespace {

std::ostream& csv_precision(std::ostream& os) {
    os << std::setprecision(17);
    return os;
}

} // namespace

void emit_figure_data(const std::vector<ResultRow>& rows,
                      const std::string& figure_kind, std::ostream& os) {
    csv_precision(os);
    if (figure_kind == "rate_vs_R")
        os << "R_ohm,topology,mbar,algo,mean_rate,stderr,upper_bound\n";
    else if (figure_kind == "rate_vs_mbar")
        os << "mbar,topology,R_ohm,algo,mean_rate,stderr,upper_bound\n";
    else if (figure_kind == "rate_vs_P")
        os << "p_dbm,topology,mbar,algo,mean_rate,stderr,upper_bound\n";
    else if (figure_kind == "rate_vs_L1")
        os << "L1_h,topology,mbar,algo,mean_rate,stderr,upper_bound\n";
    else if (figure_kind == "complexity_tradeoff")
        os << "complexity,topology,mbar,algo,mean_rate,stderr,mean_wall_ms\n";
    else
        throw ConfigError("unknown figure kind: " + figure_kind);

    for (const auto& r : rows) {
        if (figure_kind == "rate_vs_R")
            os << r.r_ohm << ',' << r.topology << ',' << r.mbar << ',' << r.algo
               << ',' << r.mean_rate << ',' << r.stderr_rate << ','
               << r.mean_upper_bound << '\n';
        else if (figure_kind == "rate_vs_mbar")
            os << r.mbar << ',' << r.topology << ',' << r.r_ohm << ',' << r.algo
               << ',' << r.mean_rate << ',' << r.stderr_rate << ','
               << r.mean_upper_bound << '\n';
        else if (figure_kind == "rate_vs_P")
            os << r.p_dbm << ',' << r.topology << ',' << r.mbar << ',' << r.algo
               << ',' << r.mean_rate << ',' << r.stderr_rate << ','
               << r.mean_upper_bound << '\n';
        else if (figure_kind == "rate_vs_L1")
            os << r.l1_h << ',' << r.topology << ',' << r.mbar << ',' << r.algo
               << ',' << r.mean_rate << ',' << r.stderr_rate << ','
               << r.mean_upper_bound << '\n';
        else
            os << r.complexity << ',' << r.topology << ',' << r.mbar << ','
               << r.algo << ',' << r.mean_rate << ',' << r.stderr_rate << ','
               << r.mean_wall_ms << '\n';
    }
}

void emit_realizations(const std::vector<RealizationRow>& raw, std::ostream& os) {
    csv_precision(os);
    os << "R_ohm,L1_h,p_dbm,topology,mbar,algo,realization,rate,upper_bound,"
          "iterations,wall_ms\n";
    for (const auto& r : raw)
        os << r.sweep.r_ohm << ',' << r.sweep.l1_h << ',' << r.sweep.p_dbm << ','
           << r.sweep.topology << ',' << r.sweep.mbar << ',' << r.sweep.algo
           << ',' << r.realization << ',' << r.rate << ',' << r.upper_bound
           << ',' << r.iterations << ',' << r.wall_ms << '\n';
}

void emit_arc_csv(const CircuitParams& params, int samples, std::ostream& os) {
    if (samples < 2)
        throw ConfigError("arc sampling needs at least two points");
    const AdmittanceArc arc = arc_of_params(params);
    csv_precision(os);
    os << "theta,re_siemens,im_siemens,capacitance_farads\n";
    for (int i = 0; i < samples; ++i) {
        const double theta =
            arc.theta_min +
            (arc.theta_max - arc.theta_min) * i / double(samples - 1);
        const cplx y = arc.value_at(theta);
        os << theta << ',' << y.real() << ',' << y.imag() << ','
           << capacitance_of_theta(params, arc, theta) << '\n';
    }
}

void emit_trace_csv(const SolveTrace& trace, std::ostream& os) {
    csv_precision(os);
    os << "outer,inner,objective,res_phic,res_zy\n";
    for (const auto& r : trace.rows)
        os << r.outer << ',' << r.inner << ',' << r.objective << ','
           << r.res_phic << ',' << r.res_zy << '\n';
}

void emit_bcd_trace_csv(const BcdResult& result, std::ostream& os) {
    csv_precision(os);
    os << "iter,sum_rate_bits,power_used_watts,phi_admm_iters\n";
    for (const auto& r : result.rows)
        os << r.iter << ',' << r.sum_rate_bits << ',' << r.power_used_watts
           << ',' << r.phi_admm_iters << '\n';
}

void emit_solution_csv(const ScatteringMatrix& phi, const VectorXc& ybar,
                       const CircuitParams& params, std::ostream& os) {
    const AdmittanceArc arc = arc_of_params(params);
    csv_precision(os);
    os << "kind,index,row,col,re,im,theta,capacitance_farads\n";
    for (int c = 0; c < phi.entries.cols(); ++c)
        for (int r = 0; r < phi.entries.rows(); ++r)
            os << "phi,," << r << ',' << c << ',' << phi.entries(r, c).real()
               << ',' << phi.entries(r, c).imag() << ",,\n";
    for (Eigen::Index i = 0; i < ybar.size(); ++i) {
        const ArcProjection pr = project_onto_arc(arc, ybar(i));
        os << "component," << i << ",,," << ybar(i).real() << ','
           << ybar(i).imag() << ',' << pr.theta << ','
           << capacitance_of_theta(params, arc, pr.theta) << '\n';
    }
}

void emit_channels_csv(const SisoChannels& ch, std::ostream& os) {
    csv_precision(os);
    os << "link,user,row,col,re,im\n";
    os << "rt,0,0,0," << ch.h_rt.real() << ',' << ch.h_rt.imag() << '\n';
    for (Eigen::Index i = 0; i < ch.h_ri.size(); ++i)
        os << "ri,0," << i << ",0," << ch.h_ri(i).real() << ','
           << ch.h_ri(i).imag() << '\n';
    for (Eigen::Index i = 0; i < ch.h_it.size(); ++i)
        os << "it,0," << i << ",0," << ch.h_it(i).real() << ','
           << ch.h_it(i).imag() << '\n';
}

void emit_channels_csv(const MuMisoChannels& ch, std::ostream& os) {
    csv_precision(os);
    os << "link,user,row,col,re,im\n";
    for (std::size_t k = 0; k < ch.h_rt.size(); ++k)
        for (Eigen::Index i = 0; i < ch.h_rt[k].size(); ++i)
            os << "rt," << k << ',' << i << ",0," << ch.h_rt[k](i).real() << ','
               << ch.h_rt[k](i).imag() << '\n';
    for (std::size_t k = 0; k < ch.h_ri.size(); ++k)
        for (Eigen::Index i = 0; i < ch.h_ri[k].size(); ++i)
            os << "ri," << k << ',' << i << ",0," << ch.h_ri[k](i).real() << ','
               << ch.h_ri[k](i).imag() << '\n';
    for (Eigen::Index c = 0; c < ch.h_it.cols(); ++c)
        for (Eigen::Index r = 0; r < ch.h_it.rows(); ++r)
            os << "it,0," << r << ',' << c << ',' << ch.h_it(r, c).real() << ','
               << ch.h_it(r, c).imag() << '\n';
}

} // namespace bdris
