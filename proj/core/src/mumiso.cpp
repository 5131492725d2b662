// SPDX-License-Identifier: Apache-2.0
#include "bdris/mumiso.hpp"

#include <cmath>
#include <limits>

namespace bdris {

namespace {

VectorXc vec(const MatrixXc& m) {
    return Eigen::Map<const VectorXc>(m.data(), m.size());
}

// Kronecker product of column vectors, first-factor index major:
// (a kron b)(i*len(b)+j) = a(i) b(j).
VectorXc kron_vec(const VectorXc& a, const VectorXc& b) {
    VectorXc out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

} // namespace

std::vector<VectorXc> effective_channels(const ScatteringMatrix& phi,
                                         const MuMisoChannels& ch) {
    const int k = static_cast<int>(ch.h_rt.size());
    std::vector<VectorXc> h(k);
    for (int i = 0; i < k; ++i)
        h[i] = ch.h_rt[i] + ch.h_it.adjoint() * (phi.entries.adjoint() * ch.h_ri[i]);
    return h;
}

SinrRate sinr_and_sum_rate(const std::vector<VectorXc>& h, const MatrixXc& w,
                           const std::vector<double>& sigma2) {
    const int k = static_cast<int>(h.size());
    SinrRate out;
    out.gamma.resize(k);
    out.rate_bits = 0.0;
    for (int i = 0; i < k; ++i) {
        double interference = sigma2[i];
        double signal = 0.0;
        for (int p = 0; p < k; ++p) {
            const double term = std::norm(h[i].dot(w.col(p)));
            if (p == i)
                signal = term;
            else
                interference += term;
        }
        out.gamma(i) = signal / interference;
        out.rate_bits += std::log2(1.0 + out.gamma(i));
    }
    return out;
}

FpAuxiliaries update_nu_tau(const std::vector<VectorXc>& h, const MatrixXc& w,
                            const std::vector<double>& sigma2) {
    const int k = static_cast<int>(h.size());
    FpAuxiliaries aux;
    aux.nu = sinr_and_sum_rate(h, w, sigma2).gamma;
    aux.tau.resize(k);
    for (int i = 0; i < k; ++i) {
        double total = sigma2[i];
        for (int p = 0; p < k; ++p)
            total += std::norm(h[i].dot(w.col(p)));
        aux.tau(i) = std::sqrt(1.0 + aux.nu(i)) * h[i].dot(w.col(i)) / total;
    }
    return aux;
}

double fp_objective(const std::vector<VectorXc>& h, const MatrixXc& w,
                    const FpAuxiliaries& aux, const std::vector<double>& sigma2) {
    const int k = static_cast<int>(h.size());
    double f = 0.0;
    for (int i = 0; i < k; ++i) {
        double total = sigma2[i];
        for (int p = 0; p < k; ++p)
            total += std::norm(h[i].dot(w.col(p)));
        f += std::log1p(aux.nu(i)) - aux.nu(i) +
             2.0 * std::sqrt(1.0 + aux.nu(i)) *
                 (std::conj(aux.tau(i)) * h[i].dot(w.col(i))).real() -
             std::norm(aux.tau(i)) * total;
    }
    return f;
}

Precoder update_precoder(const std::vector<VectorXc>& h, const FpAuxiliaries& aux,
                         const std::vector<double>& sigma2, double p_budget,
                         double bisection_tol, int max_bisection) {
    (void)sigma2;
    const int k = static_cast<int>(h.size());
    const int n = static_cast<int>(h[0].size());

    MatrixXc m0 = MatrixXc::Zero(n, n);
    for (int p = 0; p < k; ++p)
        m0 += std::norm(aux.tau(p)) * (h[p] * h[p].adjoint());

    // Eigendecomposition makes the multiplier search a cheap scalar bisection:
    // w_k(mu) = U diag(1/(d + mu)) U^H sqrt(1+nu_k) tau_k h_k.
    Eigen::SelfAdjointEigenSolver<MatrixXc> eig(m0);
    if (eig.info() != Eigen::Success)
        throw SingularSubproblem("precoder Gram matrix eigendecomposition failed");
    const Eigen::VectorXd d = eig.eigenvalues();
    const MatrixXc& u = eig.eigenvectors();

    std::vector<VectorXc> ut(k);
    Eigen::VectorXd coeff(k);
    for (int i = 0; i < k; ++i) {
        ut[i] = u.adjoint() * h[i];
        coeff(i) = (1.0 + aux.nu(i)) * std::norm(aux.tau(i));
    }

    const double floor = 1e-14 * std::max(d.cwiseAbs().maxCoeff(), 1.0);
    auto power_of = [&](double mu) {
        double total = 0.0;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < n; ++j) {
                const double piv = d(j) + mu;
                if (piv <= floor)
                    return std::numeric_limits<double>::infinity();
                total += coeff(i) * std::norm(ut[i](j)) / (piv * piv);
            }
        return total;
    };

    double mu = 0.0;
    if (!(power_of(0.0) <= p_budget)) {
        double lo = 0.0, hi = 1.0;
        int guard = 0;
        while (power_of(hi) > p_budget) {
            hi *= 2.0;
            if (++guard > max_bisection)
                throw BisectionFailure("power multiplier bracket did not close");
        }
        for (int it = 0; it < max_bisection; ++it) {
            mu = 0.5 * (lo + hi);
            const double pw = power_of(mu);
            if (std::abs(pw - p_budget) <= bisection_tol * p_budget)
                break;
            (pw > p_budget ? lo : hi) = mu;
        }
    }

    Precoder out;
    out.w.resize(n, k);
    for (int i = 0; i < k; ++i) {
        VectorXc scaled(n);
        for (int j = 0; j < n; ++j) {
            const double piv = d(j) + mu;
            scaled(j) = piv > floor ? ut[i](j) / piv : cplx(0.0, 0.0);
        }
        out.w.col(i) = std::sqrt(1.0 + aux.nu(i)) * aux.tau(i) * (u * scaled);
    }
    return out;
}

void build_Q_q(const MuMisoChannels& ch, const MatrixXc& w,
               const FpAuxiliaries& aux, const ArchitectureSpec& spec,
               const MappingMatrices& maps, MatrixXc& q_mat, VectorXc& q_vec) {
    spec.validate();
    const int k = static_cast<int>(ch.h_rt.size());
    const int g = spec.num_groups();
    const int mbar = spec.mbar;
    const int nphi = static_cast<int>(maps.p_full.cols());
    const int dim = g * nphi;

    // v_p = H_IT w_p and x_k = H_IT (sum_p w_p w_p^H) h_RT,k.
    const MatrixXc v = ch.h_it * w;
    const MatrixXc wwh = w * w.adjoint();

    // Packed coefficient of h_RI,k^H Phi v_p per group:
    // (v_{p,g}^T kron h_RI,k,g^H) vec(Phi_g) = ebar^H phibar.
    auto packed = [&](const VectorXc& right, const VectorXc& h_ri_k) {
        VectorXc out(dim);
        for (int i = 0; i < g; ++i)
            out.segment(i * nphi, nphi) =
                maps.p_full_c.transpose() *
                kron_vec(right.segment(i * mbar, mbar).conjugate(),
                         h_ri_k.segment(i * mbar, mbar));
        return out;
    };

    q_mat = MatrixXc::Zero(dim, dim);
    q_vec = VectorXc::Zero(dim);
    for (int i = 0; i < k; ++i) {
        const double t2 = std::norm(aux.tau(i));
        for (int p = 0; p < k; ++p) {
            const VectorXc e = packed(v.col(p), ch.h_ri[i]);
            q_mat += t2 * (e * e.adjoint());
            if (p == i)
                q_vec += std::sqrt(1.0 + aux.nu(i)) * aux.tau(i) * e;
        }
        const VectorXc x = ch.h_it * (wwh * ch.h_rt[i]);
        q_vec -= t2 * packed(x, ch.h_ri[i]);
    }
}

int update_phi_admm(const MatrixXc& q_mat, const VectorXc& q_vec,
                    const ArcAdmmEngine& engine, const MmAdmmConfig& cfg,
                    AdmmState& state) {
    // The subproblem minimizer is invariant to a joint positive scaling of
    // (Q, q); normalize so the quadratic term does not drown the unit-penalty
    // network constraint (see the matching note in the received-power solver).
    constexpr double kappa = 1e-4;
    const double ref = q_mat.trace().real() / static_cast<double>(q_mat.rows());
    const double sc = ref > 1e-300 ? kappa / ref : 1.0;
    const MatrixXc q_scaled = sc * q_mat;
    const VectorXc lin = 2.0 * sc * q_vec;
    int iters = 0;
    for (int i = 1; i <= cfg.max_inner; ++i) {
        double r1 = 0.0, r2 = 0.0;
        engine.iterate(state, lin, &q_scaled, r1, r2);
        iters = i;
        if (std::max(r1, r2) < cfg.inner_tol)
            break;
    }
    return iters;
}

BcdResult bcd_solve(const MuMisoChannels& ch, const ArchitectureSpec& spec,
                    const CircuitParams& circuit, const BcdConfig& cfg) {
    spec.validate();
    const int k = static_cast<int>(ch.h_rt.size());
    const int n = static_cast<int>(ch.h_it.cols());
    const AdmittanceArc arc = arc_of_params(circuit);
    const MappingMatrices maps = build_mappings(spec);
    const CharacteristicAdmittance y0;
    const ArcAdmmEngine engine(spec, maps, arc, y0.y0, cfg.phi_admm);

    AdmmState state = engine.initial_state();
    BcdResult res;
    res.phi = engine.scattering_from_z(state.z);

    // Matched-filter start at the full power budget.
    std::vector<VectorXc> h = effective_channels(res.phi, ch);
    res.w.w.resize(n, k);
    for (int i = 0; i < k; ++i) {
        const double norm = h[i].norm();
        res.w.w.col(i) = norm > 1e-300
                             ? VectorXc(std::sqrt(cfg.p_tx_watts / k) * h[i] / norm)
                             : VectorXc(VectorXc::Constant(
                                   n, std::sqrt(cfg.p_tx_watts / (k * n))));
    }

    double rate = sinr_and_sum_rate(h, res.w.w, ch.sigma2).rate_bits;
    res.sum_rate_per_iter.push_back(rate);
    res.rows.push_back({0, rate, res.w.w.squaredNorm(), 0});

    // Packed coordinates of the exact scattering blocks of a feasible z, used
    // to compare candidate and incumbent on the Phi-subproblem objective.
    const int nphi = static_cast<int>(maps.p_full_pos.size());
    auto packed_of_z = [&](const VectorXc& z) {
        const ScatteringMatrix p = engine.scattering_from_z(z);
        VectorXc out(spec.num_groups() * nphi);
        for (int g = 0; g < spec.num_groups(); ++g) {
            const MatrixXc blk = p.block(g);
            for (int t = 0; t < nphi; ++t) {
                const auto& [i, j] = maps.p_full_pos[t].front();
                out(g * nphi + t) = blk(i, j);
            }
        }
        return out;
    };

    MatrixXc q_mat;
    VectorXc q_vec;
    for (int t = 1; t <= cfg.max_bcd; ++t) {
        const FpAuxiliaries aux = update_nu_tau(h, res.w.w, ch.sigma2);
        res.w = update_precoder(h, aux, ch.sigma2, cfg.p_tx_watts,
                                cfg.bisection_tol, cfg.max_bisection);
        build_Q_q(ch, res.w.w, aux, spec, maps, q_mat, q_vec);

        const AdmmState saved = state;
        const int iters = update_phi_admm(q_mat, q_vec, engine, cfg.phi_admm, state);
        // Accept the candidate Phi only if it improves the exact subproblem
        // objective; an inexact ADMM step must not undo BCD progress.
        const auto subproblem_cost = [&](const VectorXc& phibar) {
            return (phibar.adjoint() * q_mat * phibar).value().real() -
                   2.0 * q_vec.dot(phibar).real();
        };
        if (subproblem_cost(packed_of_z(state.z)) >
            subproblem_cost(packed_of_z(saved.z)))
            state = saved;
        res.phi = engine.scattering_from_z(state.z);
        h = effective_channels(res.phi, ch);

        const double rate_new = sinr_and_sum_rate(h, res.w.w, ch.sigma2).rate_bits;
        res.sum_rate_per_iter.push_back(rate_new);
        res.rows.push_back({t, rate_new, res.w.w.squaredNorm(), iters});
        res.iterations = t;
        const bool settled =
            std::abs(rate_new - rate) <= cfg.bcd_tol * std::max(rate, 1e-300);
        rate = rate_new;
        if (settled) {
            res.converged = true;
            break;
        }
    }

    res.final_ybar = state.z;
    return res;
}

} // namespace bdris
