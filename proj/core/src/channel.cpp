// SPDX-License-Identifier: Apache-2.0
#include "bdris/channel.hpp"

namespace bdris {

double pathloss(const LinkParams& link) {
    if (!(link.distance > 0.0) || !(link.d0 > 0.0))
        throw ConfigError("distances must be positive");
    return db_to_linear(link.zeta0_db) *
           std::pow(link.distance / link.d0, -link.exponent);
}

MatrixXc draw_rayleigh(int rows, int cols, double pl, Rng& rng) {
    if (pl < 0.0)
        throw ConfigError("pathloss gain must be nonnegative");
    const double scale = std::sqrt(pl);
    MatrixXc h(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r)
            h(r, c) = scale * rng.complex_gaussian();
    return h;
}

MatrixXc draw_rician(int rows, int cols, double pl, double kappa_db, Rng& rng) {
    if (pl < 0.0)
        throw ConfigError("pathloss gain must be nonnegative");
    const double kappa = db_to_linear(kappa_db);
    const double los = std::sqrt(kappa / (1.0 + kappa));
    const double nlos = std::sqrt(1.0 / (1.0 + kappa));
    const double scale = std::sqrt(pl);
    MatrixXc h(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r)
            h(r, c) = scale * (los + nlos * rng.complex_gaussian());
    return h;
}

SisoChannels generate_siso(const ChannelConfig& cfg, std::uint64_t seed) {
    if (cfg.m <= 0)
        throw ConfigError("element count must be positive");
    Rng rng(seed);
    SisoChannels ch;
    ch.h_rt = draw_rayleigh(1, 1, pathloss(cfg.link_rt()), rng)(0, 0);
    ch.h_ri = draw_rician(cfg.m, 1, pathloss(cfg.link_ri()), cfg.kappa_ri_db, rng);
    ch.h_it = draw_rician(cfg.m, 1, pathloss(cfg.link_it()), cfg.kappa_it_db, rng);
    return ch;
}

MuMisoChannels generate_mumiso(const ChannelConfig& cfg, std::uint64_t seed) {
    if (cfg.m <= 0 || cfg.n <= 0 || cfg.k <= 0)
        throw ConfigError("dimensions must be positive");
    Rng rng(seed);
    MuMisoChannels ch;
    const double pl_rt = pathloss(cfg.link_rt());
    const double pl_ri = pathloss(cfg.link_ri());
    for (int k = 0; k < cfg.k; ++k)
        ch.h_rt.push_back(draw_rayleigh(cfg.n, 1, pl_rt, rng));
    for (int k = 0; k < cfg.k; ++k)
        ch.h_ri.push_back(draw_rician(cfg.m, 1, pl_ri, cfg.kappa_ri_db, rng));
    ch.h_it = draw_rician(cfg.m, cfg.n, pathloss(cfg.link_it()), cfg.kappa_it_db, rng);
    ch.sigma2.assign(cfg.k, cfg.sigma2_watts());
    return ch;
}

} // namespace bdris
