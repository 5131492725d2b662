// SPDX-License-Identifier: Apache-2.0
#include "bdris/architecture.hpp"

#include <cmath>
#include <cstdlib>

namespace bdris {

namespace {

// Column-major vec index of 1-based entry (i, j) in an mbar x mbar matrix.
int vec_index(int mbar, int i, int j) { return (j - 1) * mbar + (i - 1); }

// Group-topology variable index for 1-based (i, j) with j <= i:
// lower triangle enumerated column by column.
int group_var_index(int mbar, int i, int j) {
    return (2 * mbar - j) * (j - 1) / 2 + i; // 1-based
}

Eigen::MatrixXd build_p_group(int mbar) {
    const int u = mbar * (mbar + 1) / 2;
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(mbar * mbar, u);
    for (int i = 1; i <= mbar; ++i)
        for (int j = 1; j <= mbar; ++j) {
            const int k = j <= i ? group_var_index(mbar, i, j)
                                 : group_var_index(mbar, j, i);
            p(vec_index(mbar, i, j), k - 1) = 1.0;
        }
    return p;
}

Eigen::MatrixXd build_p_tridiagonal(int mbar) {
    const int u = 2 * mbar - 1;
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(mbar * mbar, u);
    for (int i = 1; i <= mbar; ++i) {
        p(vec_index(mbar, i, i), 2 * i - 2) = 1.0; // diagonal -> k = 2i-1
        if (i < mbar) {                            // band pair -> k = 2i
            p(vec_index(mbar, i, i + 1), 2 * i - 1) = 1.0;
            p(vec_index(mbar, i + 1, i), 2 * i - 1) = 1.0;
        }
    }
    return p;
}

Eigen::MatrixXd build_p_arrowhead(int mbar, int c) {
    const int u = 2 * mbar - 1;
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(mbar * mbar, u);
    // Canonical form has the designated port first; sigma swaps 1 <-> c.
    auto sigma = [&](int i) { return i == 1 ? c : (i == c ? 1 : i); };
    for (int j = 1; j <= mbar; ++j) { // first row/column of the canonical form
        p(vec_index(mbar, sigma(1), sigma(j)), j - 1) = 1.0;
        if (j > 1)
            p(vec_index(mbar, sigma(j), sigma(1)), j - 1) = 1.0;
    }
    for (int i = 2; i <= mbar; ++i) // remaining diagonals
        p(vec_index(mbar, sigma(i), sigma(i)), mbar + i - 2) = 1.0;
    return p;
}

} // namespace

void ArchitectureSpec::validate() const {
    if (m <= 0 || mbar <= 0 || m % mbar != 0)
        throw ConfigError("group size must divide the element count");
    if (topology == Topology::forest_arrowhead &&
        (arrowhead_port < 1 || arrowhead_port > mbar))
        throw ConfigError("arrowhead port out of range");
}

Eigen::MatrixXd build_b(int mbar) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(mbar * mbar, mbar * mbar);
    for (int r = 1; r <= mbar; ++r)
        for (int c = 1; c <= mbar; ++c) {
            const int col = vec_index(mbar, r, c);
            b(vec_index(mbar, r, r), col) += 1.0; // row sum on the diagonal
            if (r != c)
                b(vec_index(mbar, r, c), col) -= 1.0;
        }
    return b;
}

Eigen::MatrixXd build_p(const ArchitectureSpec& spec) {
    spec.validate();
    switch (spec.topology) {
        case Topology::group: return build_p_group(spec.mbar);
        case Topology::forest_tridiagonal: return build_p_tridiagonal(spec.mbar);
        case Topology::forest_arrowhead:
            return build_p_arrowhead(spec.mbar, spec.arrowhead_port);
    }
    throw ConfigError("unknown topology");
}

std::set<std::pair<int, int>> interconnect_set(const ArchitectureSpec& spec) {
    spec.validate();
    std::set<std::pair<int, int>> excluded;
    for (int m = 1; m <= spec.mbar; ++m)
        for (int n = 1; n <= spec.mbar; ++n) {
            if (m == n) continue;
            const bool out =
                (spec.topology == Topology::forest_tridiagonal && std::abs(m - n) > 1) ||
                (spec.topology == Topology::forest_arrowhead &&
                 m != spec.arrowhead_port && n != spec.arrowhead_port);
            if (out)
                excluded.insert({m, n});
        }
    return excluded;
}

MappingMatrices build_mappings(const ArchitectureSpec& spec) {
    spec.validate();
    MappingMatrices maps;
    maps.b = build_b(spec.mbar);
    maps.p = build_p(spec);
    ArchitectureSpec full = spec;
    full.topology = Topology::group;
    maps.p_full = build_p(full);
    maps.bp = maps.b * maps.p;
    maps.p_full_c = maps.p_full.cast<cplx>();
    maps.u = static_cast<int>(maps.p.cols());
    const int mbar = spec.mbar;
    maps.p_full_pos.resize(maps.p_full.cols());
    for (int k = 0; k < maps.p_full.cols(); ++k)
        for (int q = 0; q < maps.p_full.rows(); ++q)
            if (maps.p_full(q, k) != 0.0)
                maps.p_full_pos[k].push_back({q % mbar, q / mbar});
    maps.bp_nnz.resize(maps.bp.cols());
    for (int k = 0; k < maps.bp.cols(); ++k)
        for (int q = 0; q < maps.bp.rows(); ++q)
            if (maps.bp(q, k) != 0.0)
                maps.bp_nnz[k].push_back({q % mbar, q / mbar, maps.bp(q, k)});
    return maps;
}

MatrixXc ybar_to_block(const Eigen::MatrixXd& b, const Eigen::MatrixXd& p,
                       const VectorXc& ybar_g) {
    if (ybar_g.size() != p.cols())
        throw ShapeMismatch("ybar_g length does not match P");
    const int n = static_cast<int>(std::lround(std::sqrt(double(b.rows()))));
    const VectorXc v = (b * p).cast<cplx>() * ybar_g;
    return Eigen::Map<const MatrixXc>(v.data(), n, n);
}

int circuit_complexity(const ArchitectureSpec& spec) {
    spec.validate();
    if (spec.topology == Topology::group)
        return spec.m * (spec.mbar + 1) / 2;
    return (2 * spec.mbar - 1) * spec.num_groups();
}

} // namespace bdris
