// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "bdris/network.hpp"
#include "bdris/rng.hpp"

using namespace bdris;

namespace {

// Random symmetric complex block, entries O(y0), guaranteed nonsingular
// offset on the diagonal.
MatrixXc random_symmetric(int n, Rng& rng) {
    MatrixXc m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            m(i, j) = 0.02 * rng.complex_gaussian();
            m(j, i) = m(i, j);
        }
    m += 0.05 * MatrixXc::Identity(n, n);
    return m;
}

} // namespace

TEST_CASE("matched network reflects nothing") {
    const CharacteristicAdmittance y0;
    AdmittanceMatrix y{y0.y0 * MatrixXc::Identity(4, 4), 2};
    const ScatteringMatrix phi = admittance_to_scattering(y, y0);
    CHECK(phi.entries.norm() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(phi.block_size == 2);
}

TEST_CASE("open network reflects fully") {
    AdmittanceMatrix y{MatrixXc::Zero(3, 3), 1};
    const ScatteringMatrix phi = admittance_to_scattering(y);
    CHECK((phi.entries - MatrixXc::Identity(3, 3)).norm() < 1e-14);
}

TEST_CASE("conversion round trip") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int bs = 1 + trial % 4;
        const int g = 1 + trial % 3;
        std::vector<MatrixXc> blocks;
        for (int i = 0; i < g; ++i)
            blocks.push_back(random_symmetric(bs, rng));
        const AdmittanceMatrix y = assemble_block_diagonal(blocks);
        const ScatteringMatrix phi = admittance_to_scattering(y);
        const AdmittanceMatrix back = scattering_to_admittance(phi);
        CHECK((back.entries - y.entries).norm() / y.entries.norm() < 1e-12);
    }
}

TEST_CASE("block-diagonal conversion equals per-block conversion") {
    Rng rng(5);
    std::vector<MatrixXc> blocks{random_symmetric(3, rng), random_symmetric(3, rng)};
    const ScatteringMatrix whole =
        admittance_to_scattering(assemble_block_diagonal(blocks));
    for (int g = 0; g < 2; ++g) {
        const ScatteringMatrix single =
            admittance_to_scattering(AdmittanceMatrix{blocks[g], 3});
        CHECK((whole.block(g) - single.entries).norm() < 1e-13);
    }
    // off-diagonal blocks stay exactly zero
    CHECK(whole.entries.block(0, 3, 3, 3).norm() == 0.0);
}

TEST_CASE("reciprocal network keeps symmetry") {
    Rng rng(7);
    const AdmittanceMatrix y = assemble_block_diagonal({random_symmetric(4, rng)});
    const ScatteringMatrix phi = admittance_to_scattering(y);
    CHECK((phi.entries - phi.entries.transpose()).norm() < 1e-12);
}

TEST_CASE("singular network throws") {
    const CharacteristicAdmittance y0;
    AdmittanceMatrix y{-y0.y0 * MatrixXc::Identity(2, 2), 2};
    CHECK_THROWS_AS(admittance_to_scattering(y, y0), SingularNetwork);
    ScatteringMatrix phi{-MatrixXc::Identity(2, 2), 2};
    CHECK_THROWS_AS(scattering_to_admittance(phi, y0), SingularNetwork);
}

TEST_CASE("ragged block list throws") {
    CHECK_THROWS_AS(
        assemble_block_diagonal({MatrixXc::Zero(2, 2), MatrixXc::Zero(3, 3)}),
        ShapeMismatch);
    CHECK_THROWS_AS(assemble_block_diagonal({MatrixXc::Zero(2, 3)}), ShapeMismatch);
    CHECK_THROWS_AS(assemble_block_diagonal({}), ShapeMismatch);
}
