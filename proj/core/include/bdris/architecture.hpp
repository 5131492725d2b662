// SPDX-License-Identifier: Apache-2.0
//
// Topology definitions and the linear maps from free admittance variables
// ybar_g to the group admittance blocks Y_g.
//
// Conventions: column-major vectorization throughout.  vec(Y_g) = B vec(Ybar_g)
// with Ybar_g the matrix of raw component values, and vec(Ybar_g) = P ybar_g
// with ybar_g the free (diagonal + connected upper-triangular) entries.
#ifndef BDRIS_ARCHITECTURE_HPP
#define BDRIS_ARCHITECTURE_HPP

#include <Eigen/Dense>
#include <set>
#include <utility>

#include "bdris/network.hpp"

namespace bdris {

enum class Topology { group, forest_tridiagonal, forest_arrowhead };

struct ArchitectureSpec {
    int m = 1;     // total elements M
    int mbar = 1;  // group size, divides m
    Topology topology = Topology::group;
    int arrowhead_port = 1; // designated port c_g, 1-based, arrowhead only

    int num_groups() const { return m / mbar; }
    void validate() const;
};

struct MappingMatrices {
    Eigen::MatrixXd b;      // mbar^2 x mbar^2, entries in {0, +-1}
    Eigen::MatrixXd p;      // mbar^2 x u, binary
    Eigen::MatrixXd p_full; // group-topology P used to pack symmetric Phi_g
    Eigen::MatrixXd bp;     // cached B * P
    MatrixXc p_full_c;      // complex copy of p_full for mixed products
    int u = 0;              // free components per group

    // Sparse views used in solver hot loops: per column of p_full, the (i, j)
    // block positions it sets; per column of bp, the (row, col, value)
    // nonzeros of the component pattern unvec(bp.col(k)).
    std::vector<std::vector<std::pair<int, int>>> p_full_pos;
    std::vector<std::vector<std::tuple<int, int, double>>> bp_nnz;
};

/// B of the map vec(Y_g) = B vec(Ybar_g): off-diagonal entries negate the
/// component value, diagonal entries accumulate the row sum.
Eigen::MatrixXd build_b(int mbar);

/// P packing the free entries into the full symmetric vec(Ybar_g), with exact
/// zeros at the interconnect-excluded positions.
Eigen::MatrixXd build_p(const ArchitectureSpec& spec);

/// Excluded (not connected) index pairs within a group, 1-based, both orders.
std::set<std::pair<int, int>> interconnect_set(const ArchitectureSpec& spec);

/// Builds and caches B, P and the group-topology P for a spec.
MappingMatrices build_mappings(const ArchitectureSpec& spec);

/// Y_g = unvec(B P ybar_g).
MatrixXc ybar_to_block(const Eigen::MatrixXd& b, const Eigen::MatrixXd& p,
                       const VectorXc& ybar_g);

/// Number of tunable admittance components the architecture requires.
int circuit_complexity(const ArchitectureSpec& spec);

} // namespace bdris

#endif
