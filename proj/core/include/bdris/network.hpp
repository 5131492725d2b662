// SPDX-License-Identifier: Apache-2.0
//
// Admittance <-> scattering descriptions of the M-port reconfigurable network.
// Both matrices are block-diagonal with G = M / block_size symmetric blocks.
#ifndef BDRIS_NETWORK_HPP
#define BDRIS_NETWORK_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "bdris/errors.hpp"

namespace bdris {

using cplx = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

/// Characteristic admittance of the port reference, siemens. Default 1/50 S.
struct CharacteristicAdmittance {
    double y0 = 1.0 / 50.0;
};

/// Block-diagonal symmetric admittance matrix Y (siemens).
struct AdmittanceMatrix {
    MatrixXc entries;
    int block_size = 1; // group size, divides entries.rows()

    int size() const { return static_cast<int>(entries.rows()); }
    int num_groups() const { return size() / block_size; }
    MatrixXc block(int g) const {
        return entries.block(g * block_size, g * block_size, block_size, block_size);
    }
};

/// Block-diagonal symmetric scattering matrix Phi (dimensionless).
struct ScatteringMatrix {
    MatrixXc entries;
    int block_size = 1;

    int size() const { return static_cast<int>(entries.rows()); }
    int num_groups() const { return size() / block_size; }
    MatrixXc block(int g) const {
        return entries.block(g * block_size, g * block_size, block_size, block_size);
    }
};

/// Phi = (y0 I + Y)^-1 (y0 I - Y), solved block-wise with partial pivoting.
/// Throws SingularNetwork when a block of y0 I + Y is numerically singular.
ScatteringMatrix admittance_to_scattering(const AdmittanceMatrix& y,
                                          CharacteristicAdmittance y0 = {});

/// Y = y0 (I - Phi)(I + Phi)^-1, the inverse of admittance_to_scattering.
AdmittanceMatrix scattering_to_admittance(const ScatteringMatrix& phi,
                                          CharacteristicAdmittance y0 = {});

/// Stacks equally-sized square blocks into a block-diagonal matrix.
/// Throws ShapeMismatch on a ragged or non-square block list.
AdmittanceMatrix assemble_block_diagonal(const std::vector<MatrixXc>& blocks);

} // namespace bdris

#endif
