// SPDX-License-Identifier: Apache-2.0
//
// Sum-rate maximization for the MU-MISO downlink: fractional-programming
// reformulation, block coordinate descent over (nu, tau, W, Phi), with the
// Phi block solved by the shared arc-constrained ADMM.
#ifndef BDRIS_MUMISO_HPP
#define BDRIS_MUMISO_HPP

#include "bdris/siso.hpp"

namespace bdris {

struct Precoder {
    MatrixXc w; // N x K, columns w_k; ||W||_F^2 is transmit power in watts
};

struct FpAuxiliaries {
    Eigen::VectorXd nu; // K, nonnegative
    VectorXc tau;       // K
};

struct BcdConfig {
    MmAdmmConfig phi_admm; // inner ADMM settings for the Phi subproblem
    double bcd_tol = 1e-4; // relative sum-rate change
    int max_bcd = 30;
    double bisection_tol = 1e-8; // relative on transmit power
    int max_bisection = 200;
    double p_tx_watts = 0.1; // total transmit power budget (20 dBm)
};

struct BcdTraceRow {
    int iter = 0;
    double sum_rate_bits = 0.0;
    double power_used_watts = 0.0;
    long phi_admm_iters = 0;
};

struct BcdResult {
    Precoder w;
    ScatteringMatrix phi;
    VectorXc final_ybar;
    std::vector<BcdTraceRow> rows;
    std::vector<double> sum_rate_per_iter;
    int iterations = 0;
    bool converged = false;
};

/// Per-user effective channels h_k = (h_RT,k^H + h_RI,k^H Phi H_IT)^H.
std::vector<VectorXc> effective_channels(const ScatteringMatrix& phi,
                                         const MuMisoChannels& ch);

struct SinrRate {
    Eigen::VectorXd gamma;
    double rate_bits;
};

SinrRate sinr_and_sum_rate(const std::vector<VectorXc>& h, const MatrixXc& w,
                           const std::vector<double>& sigma2);

/// Closed-form optimal FP auxiliaries for fixed (Phi, W).
FpAuxiliaries update_nu_tau(const std::vector<VectorXc>& h, const MatrixXc& w,
                            const std::vector<double>& sigma2);

/// FP surrogate objective in nats; equals sum_k ln(1 + gamma_k) after
/// update_nu_tau.
double fp_objective(const std::vector<VectorXc>& h, const MatrixXc& w,
                    const FpAuxiliaries& aux, const std::vector<double>& sigma2);

/// Lagrangian precoder update with bisection on the power multiplier.
Precoder update_precoder(const std::vector<VectorXc>& h, const FpAuxiliaries& aux,
                         const std::vector<double>& sigma2, double p_budget,
                         double bisection_tol = 1e-8, int max_bisection = 200);

/// Quadratic form of the Phi subproblem in packed phibar coordinates:
/// minimize phibar^H Q phibar - 2 Re{q^H phibar}.
void build_Q_q(const MuMisoChannels& ch, const MatrixXc& w,
               const FpAuxiliaries& aux, const ArchitectureSpec& spec,
               const MappingMatrices& maps, MatrixXc& q_mat, VectorXc& q_vec);

/// One warm-started ADMM solve of the Phi subproblem; returns iterations used.
int update_phi_admm(const MatrixXc& q_mat, const VectorXc& q_vec,
                    const ArcAdmmEngine& engine, const MmAdmmConfig& cfg,
                    AdmmState& state);

BcdResult bcd_solve(const MuMisoChannels& ch, const ArchitectureSpec& spec,
                    const CircuitParams& circuit, const BcdConfig& cfg);

} // namespace bdris

#endif
