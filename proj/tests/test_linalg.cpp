/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qps/linalg.hpp"

using namespace qps;

TEST_CASE("split_rng streams are independent and reproducible") {
    Rng a = split_rng(1, 0), b = split_rng(1, 0), c = split_rng(1, 1);
    CHECK(a() == b());
    Rng a2 = split_rng(1, 0);
    CHECK(a2() != c());
}

TEST_CASE("partial trace of a product state is pure on each factor") {
    Rng rng = split_rng(2, 0);
    StateVector u = random_state(4, rng), v = random_state(8, rng);
    VectorXcd joint = VectorXcd::Zero(32);
    for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 8; ++j) joint(i * 8 + j) = u.amplitudes()(i) * v.amplitudes()(j);
    StateVector psi(joint, Dims{4, 8});

    Operator left = partial_trace(psi, {0});
    CHECK(left.rows() == 4);
    CHECK(std::abs(left.matrix().trace().real() - 1.0) < 1e-12);
    MatrixXcd expect = u.amplitudes() * u.amplitudes().adjoint();
    CHECK((left.matrix() - expect).cwiseAbs().maxCoeff() < 1e-12);

    Operator right = partial_trace(psi, {1});
    CHECK(purity_renyi2(right).first == doctest::Approx(1.0));
}

TEST_CASE("EPR halves are maximally mixed") {
    StateVector epr = epr_state(4);
    Operator half = partial_trace(epr, {0});
    CHECK((half.matrix() - MatrixXcd::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff() < 1e-14);
    auto [purity, renyi] = purity_renyi2(half);
    CHECK(purity == doctest::Approx(0.25));
    CHECK(renyi == doctest::Approx(std::log(4.0)));
}

TEST_CASE("fidelity special cases") {
    Rng rng = split_rng(3, 0);
    StateVector psi = random_state(6, rng);
    MatrixXcd rho = density_matrix(psi);
    CHECK(fidelity(rho, rho) == doctest::Approx(1.0));

    // pure target: F(|psi>, sigma) = <psi|sigma|psi>
    StateVector phi = random_state(6, rng);
    MatrixXcd sigma = density_matrix(phi);
    double direct = std::norm((psi.amplitudes().adjoint() * phi.amplitudes())(0));
    CHECK(fidelity(rho, sigma) == doctest::Approx(direct).epsilon(1e-9));

    MatrixXcd mixed = 0.3 * rho + 0.7 * sigma;
    double overlap = (psi.amplitudes().adjoint() * mixed * psi.amplitudes())(0).real();
    // rank-deficient rho: sqrt eigenvalue clamping limits accuracy to ~sqrt(eps)
    CHECK(fidelity(rho, mixed) == doctest::Approx(overlap).epsilon(1e-6));
}

TEST_CASE("haar sampling produces isometries") {
    Rng rng = split_rng(4, 0);
    MatrixXcd u = haar_unitary(8, rng);
    CHECK((u.adjoint() * u - MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);

    Operator iso = haar_random_isometry(16, 4, rng);
    CHECK(iso.rows() == 16);
    CHECK(iso.cols() == 4);
    CHECK((iso.matrix().adjoint() * iso.matrix() - MatrixXcd::Identity(4, 4))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}

TEST_CASE("svd reconstructs the input") {
    Rng rng = split_rng(5, 0);
    MatrixXcd m = MatrixXcd::Random(6, 4);
    SVDResult s = svd(m);
    MatrixXcd rebuilt =
        s.left_vectors * s.singular_values.asDiagonal() * s.right_vectors.adjoint();
    CHECK((rebuilt - m).cwiseAbs().maxCoeff() < 1e-12);
    for (Index i = 1; i < s.singular_values.size(); ++i)
        CHECK(s.singular_values(i) <= s.singular_values(i - 1) + 1e-15);
}

TEST_CASE("embed matches explicit kron placement") {
    Rng rng = split_rng(6, 0);
    MatrixXcd g = haar_unitary(2, rng);
    Dims dims{2, 2, 2};
    MatrixXcd on_first = embed(g, {0}, dims);
    MatrixXcd expect = kron(kron(g, MatrixXcd::Identity(2, 2)), MatrixXcd::Identity(2, 2));
    CHECK((on_first - expect).cwiseAbs().maxCoeff() < 1e-14);

    MatrixXcd on_last = embed(g, {2}, dims);
    MatrixXcd expect_last = kron(MatrixXcd::Identity(4, 4), g);
    CHECK((on_last - expect_last).cwiseAbs().maxCoeff() < 1e-14);

    // two-qubit gate on non-adjacent targets stays unitary
    MatrixXcd g2 = haar_unitary(4, rng);
    MatrixXcd e2 = embed(g2, {0, 2}, dims);
    CHECK((e2.adjoint() * e2 - MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("basis projector selects the right subspace") {
    Projector pi = basis_projector(3, {0, 2}, {1, 0});
    CHECK(pi.rank() == 2);
    CHECK(std::abs(pi.matrix().trace().real() - 2.0) < 1e-14);
    // |1 b 0> survives for both middle bits
    VectorXcd v = VectorXcd::Zero(8);
    v(Index(0b100)) = 1.0;
    CHECK((pi.matrix() * v - v).norm() < 1e-14);
    v.setZero();
    v(Index(0b101)) = 1.0;
    CHECK((pi.matrix() * v).norm() < 1e-14);
}

TEST_CASE("psd_sqrt squares back") {
    Rng rng = split_rng(7, 0);
    MatrixXcd a = MatrixXcd::Random(5, 5);
    MatrixXcd h = a * a.adjoint();
    MatrixXcd r = psd_sqrt(h);
    CHECK((r * r - h).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("random_state is normalized and seeded") {
    Rng rng = split_rng(8, 0);
    StateVector s = random_state(16, rng, Dims{4, 4});
    CHECK(s.amplitudes().norm() == doctest::Approx(1.0));
    CHECK(s.dims() == Dims{4, 4});
    Rng rng2 = split_rng(8, 0);
    StateVector t = random_state(16, rng2, Dims{4, 4});
    CHECK((s.amplitudes() - t.amplitudes()).norm() == 0.0);
}
