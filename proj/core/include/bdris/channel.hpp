// SPDX-License-Identifier: Apache-2.0
//
// Pathloss-scaled Rayleigh/Rician channel realizations for the SISO and
// MU-MISO experiments.  All powers are linear watts internally; dB/dBm
// conversion happens only at configuration boundaries.
#ifndef BDRIS_CHANNEL_HPP
#define BDRIS_CHANNEL_HPP

#include <cstdint>

#include "bdris/network.hpp"
#include "bdris/rng.hpp"

namespace bdris {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

struct LinkParams {
    double distance = 1.0; // meters
    double exponent = 2.0; // pathloss exponent
    double zeta0_db = -30.0; // reference pathloss at d0, dB
    double d0 = 1.0;       // reference distance, meters
};

/// Linear power gain zeta0 * (d / d0)^(-exponent).
double pathloss(const LinkParams& link);

struct ChannelConfig {
    int m = 8;           // RIS elements
    int n = 1;           // BS antennas (MU-MISO)
    int k = 1;           // users (MU-MISO)
    double d_rt = 52.0, d_ri = 2.5, d_it = 50.0;
    double eps_rt = 3.8, eps_ri = 2.2, eps_it = 2.5;
    double zeta0_db = -30.0, d0 = 1.0;
    double kappa_ri_db = 2.0, kappa_it_db = 2.0;
    double sigma2_dbm = -80.0; // noise power per receiver

    double sigma2_watts() const { return dbm_to_watts(sigma2_dbm); }
    LinkParams link_rt() const { return {d_rt, eps_rt, zeta0_db, d0}; }
    LinkParams link_ri() const { return {d_ri, eps_ri, zeta0_db, d0}; }
    LinkParams link_it() const { return {d_it, eps_it, zeta0_db, d0}; }
};

struct SisoChannels {
    cplx h_rt;       // transmitter -> receiver
    VectorXc h_ri;   // RIS -> receiver, length M
    VectorXc h_it;   // transmitter -> RIS, length M
};

struct MuMisoChannels {
    std::vector<VectorXc> h_rt; // per user, length N
    std::vector<VectorXc> h_ri; // per user, length M
    MatrixXc h_it;              // M x N
    std::vector<double> sigma2; // per-user noise power, watts
};

/// i.i.d. circularly-symmetric complex Gaussian entries, per-entry variance pl.
MatrixXc draw_rayleigh(int rows, int cols, double pl, Rng& rng);

/// Rician draw with deterministic all-ones LoS component:
/// sqrt(pl) (sqrt(kappa/(1+kappa)) 1 + sqrt(1/(1+kappa)) H_nlos).
MatrixXc draw_rician(int rows, int cols, double pl, double kappa_db, Rng& rng);

SisoChannels generate_siso(const ChannelConfig& cfg, std::uint64_t seed);
MuMisoChannels generate_mumiso(const ChannelConfig& cfg, std::uint64_t seed);

} // namespace bdris

#endif
