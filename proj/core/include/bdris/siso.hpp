// SPDX-License-Identifier: Apache-2.0
//
// Received-power maximization for a lossy BD-RIS SISO link: the MM-ADMM
// solver (outer minorization, inner ADMM over the network constraints) and
// the low-complexity least-squares approximation (projected gradient on the
// arc-constrained normalized channel condition).
#ifndef BDRIS_SISO_HPP
#define BDRIS_SISO_HPP

#include <vector>

#include "bdris/architecture.hpp"
#include "bdris/channel.hpp"
#include "bdris/circuit.hpp"

namespace bdris {

struct MmAdmmConfig {
    double rho1 = 1.0;
    double rho2 = 1.0;
    double outer_tol = 1e-4; // relative objective change
    double inner_tol = 1e-6; // max primal residual
    int max_outer = 30;
    int max_inner = 500;
    int restarts = 0; // extra arc-endpoint corner starts of the MM loop
};

struct TraceRow {
    int outer = 0;
    int inner = 0;
    double objective = 0.0;     // watts (or least-squares residual for the
                                // low-complexity solver)
    double res_phic = 0.0;      // ||C phibar - c||
    double res_zy = 0.0;        // ||z - ybar||
};

struct SolveTrace {
    std::vector<double> objective_per_outer;
    std::vector<TraceRow> rows;
    ScatteringMatrix final_phi;
    VectorXc final_ybar;    // feasible free admittances, stacked per group
    int outer_iterations = 0;
    long inner_iterations = 0;
    bool converged = false;
};

/// ADMM primal/dual variables, stacked over groups.
struct AdmmState {
    VectorXc phibar;  // G * mbar(mbar+1)/2
    VectorXc ybar;    // G * U
    VectorXc z;       // G * U, on the feasible arc after each z-update
    VectorXc lambda1; // G * mbar^2
    VectorXc lambda2; // G * U
};

/// F = (h_IT h_IT^H)^T kron (h_RI h_RI^H) and l = vec(h_RT h_RI h_IT^H):
/// phit^H F phit + 2 Re{l^H phit} + |h_RT|^2 = |h_RT + h_RI^H Phi h_IT|^2.
void build_quadratic_terms(const SisoChannels& ch, MatrixXc& f, VectorXc& l);

/// Surrogate gradient packed per group: Re{fbar^H phibar} equals
/// Re{(F phit_t + l)^H phit} on block-diagonal symmetric Phi.
VectorXc mm_surrogate(const MatrixXc& f, const VectorXc& phitilde_t,
                      const VectorXc& l, const ArchitectureSpec& spec,
                      const MappingMatrices& maps);

struct LinearMap {
    MatrixXc mat;
    VectorXc rhs;
};

/// C_g(ybar_g) phibar_g = c_g, the network relation linear in Phi_g.
LinearMap build_phi_map(const VectorXc& ybar_g, const MappingMatrices& maps,
                        double y0);
/// D_g(phibar_g) ybar_g = d_g, the same relation linear in Y_g.
LinearMap build_y_map(const VectorXc& phibar_g, const MappingMatrices& maps,
                      double y0);

/// Shared inner ADMM over the lossy-network constraints.  The phibar
/// subproblem minimizes phibar^H quad phibar - Re{lin^H phibar} plus the
/// augmented penalty; pass quad = nullptr for the SISO (linear) case.
class ArcAdmmEngine {
  public:
    ArcAdmmEngine(const ArchitectureSpec& spec, const MappingMatrices& maps,
                  const AdmittanceArc& arc, double y0, const MmAdmmConfig& cfg);

    AdmmState initial_state() const; // arc-midpoint ybar, matching phibar
    AdmmState state_from_z(const VectorXc& z) const; // feasible warm start
    void iterate(AdmmState& state, const VectorXc& lin, const MatrixXc* quad,
                 double& res_phic, double& res_zy) const;

    /// Feasible reconstruction: Y from the on-arc z-copy, Phi via the exact
    /// network map.
    ScatteringMatrix scattering_from_z(const VectorXc& z) const;

    const ArchitectureSpec& spec() const { return spec_; }
    const MappingMatrices& maps() const { return maps_; }
    int phibar_dim() const { return nphi_; }

  private:
    ArchitectureSpec spec_;
    MappingMatrices maps_;
    AdmittanceArc arc_;
    double y0_;
    MmAdmmConfig cfg_;
    int nphi_; // mbar(mbar+1)/2
};

SolveTrace mm_admm_solve(const SisoChannels& ch, const ArchitectureSpec& spec,
                         const CircuitParams& circuit, const MmAdmmConfig& cfg);

SolveTrace low_complexity_solve(const SisoChannels& ch,
                                const ArchitectureSpec& spec,
                                const CircuitParams& circuit,
                                const MmAdmmConfig& cfg);

struct PowerRate {
    double power; // |h|^2, linear
    double rate;  // log2(1 + p_tx power / sigma2), bits
};

PowerRate received_power_and_rate(const SisoChannels& ch,
                                  const ScatteringMatrix& phi, double p_tx,
                                  double sigma2);

/// (sum_g ||h_RI,g|| ||h_IT,g|| + |h_RT|)^2.
double siso_upper_bound(const SisoChannels& ch, const ArchitectureSpec& spec);

} // namespace bdris

#endif
