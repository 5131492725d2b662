// SPDX-License-Identifier: Apache-2.0
#include "bdris/network.hpp"

namespace bdris {

namespace {

constexpr double kRcondFloor = 1e-13;

// Solves A X = B per block with partial pivoting, rejecting near-singular A.
MatrixXc checked_solve(const MatrixXc& a, const MatrixXc& b, const char* what) {
    Eigen::PartialPivLU<MatrixXc> lu(a);
    if (!(lu.rcond() > kRcondFloor))
        throw SingularNetwork(what);
    return lu.solve(b);
}

} // namespace

ScatteringMatrix admittance_to_scattering(const AdmittanceMatrix& y,
                                          CharacteristicAdmittance y0) {
    const int mbar = y.block_size;
    const int m = y.size();
    if (mbar <= 0 || m % mbar != 0)
        throw ShapeMismatch("block_size must divide matrix size");
    ScatteringMatrix phi;
    phi.entries = MatrixXc::Zero(m, m);
    phi.block_size = mbar;
    const MatrixXc eye = MatrixXc::Identity(mbar, mbar);
    for (int g = 0; g < y.num_groups(); ++g) {
        const MatrixXc yg = y.block(g);
        phi.entries.block(g * mbar, g * mbar, mbar, mbar) =
            checked_solve(y0.y0 * eye + yg, y0.y0 * eye - yg,
                          "y0 I + Y is numerically singular");
    }
    return phi;
}

AdmittanceMatrix scattering_to_admittance(const ScatteringMatrix& phi,
                                          CharacteristicAdmittance y0) {
    const int mbar = phi.block_size;
    const int m = phi.size();
    if (mbar <= 0 || m % mbar != 0)
        throw ShapeMismatch("block_size must divide matrix size");
    AdmittanceMatrix y;
    y.entries = MatrixXc::Zero(m, m);
    y.block_size = mbar;
    const MatrixXc eye = MatrixXc::Identity(mbar, mbar);
    for (int g = 0; g < phi.num_groups(); ++g) {
        const MatrixXc pg = phi.block(g);
        // Y (Phi + I) = y0 (I - Phi)  =>  (Phi + I)^T Y^T = y0 (I - Phi)^T
        const MatrixXc yt = checked_solve((pg + eye).transpose(),
                                          y0.y0 * (eye - pg).transpose(),
                                          "Phi + I is numerically singular");
        y.entries.block(g * mbar, g * mbar, mbar, mbar) = yt.transpose();
    }
    return y;
}

AdmittanceMatrix assemble_block_diagonal(const std::vector<MatrixXc>& blocks) {
    if (blocks.empty())
        throw ShapeMismatch("empty block list");
    const int mbar = static_cast<int>(blocks.front().rows());
    for (const auto& b : blocks)
        if (b.rows() != mbar || b.cols() != mbar)
            throw ShapeMismatch("all blocks must be square and equally sized");
    AdmittanceMatrix y;
    const int g = static_cast<int>(blocks.size());
    y.entries = MatrixXc::Zero(g * mbar, g * mbar);
    y.block_size = mbar;
    for (int i = 0; i < g; ++i)
        y.entries.block(i * mbar, i * mbar, mbar, mbar) = blocks[i];
    return y;
}

} // namespace bdris
