/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qps/qsvt.hpp"

using namespace qps;

namespace {

OddPolynomial bounded_random_odd(int degree, Rng& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> c((degree + 1) / 2);
    for (double& x : c) x = u(rng);
    OddPolynomial p(std::move(c));
    p.scale(0.95 / std::max(1.0, p.sup_norm()));
    return p;
}

BlockEncoding random_encoding(Index n_qubits, Rng& rng) {
    Operator u(haar_unitary(Index(1) << n_qubits, rng), Dims(n_qubits, 2));
    Projector right = basis_projector(n_qubits, {0}, {0});
    Projector left = basis_projector(n_qubits, {n_qubits - 1}, {0});
    return BlockEncoding(std::move(u), right, left);
}

}  // namespace

TEST_CASE("projector phase operator and its gadget agree") {
    Rng rng = split_rng(1, 0);
    Projector pi = basis_projector(2, {0}, {1});
    double phi = 0.73;
    MatrixXcd direct = pi_phi(pi, phi);
    Operator gadget = pi_phi_gadget(pi, phi);
    // ancilla-|0> sector realizes Pi_phi
    MatrixXcd sector(4, 4);
    for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 4; ++j) sector(i, j) = gadget.matrix()(2 * i, 2 * j);
    CHECK((sector - direct).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((gadget.matrix() * gadget.matrix().adjoint() - MatrixXcd::Identity(8, 8))
              .cwiseAbs()
              .maxCoeff() < 1e-13);
}

TEST_CASE("qsp model collapses odd reflection products at zero phases") {
    // signal operator is a reflection: an odd zero-phase product is itself
    std::vector<double> phases(5, 0.0);
    for (double x : {0.1, 0.4, 0.8})
        CHECK(qsp_model_re(phases, x) == doctest::Approx(x).epsilon(1e-12));
}

TEST_CASE("solved phases realize Chebyshev targets") {
    std::vector<double> c(3, 0.0);
    c.back() = 1.0;  // T_5
    PhaseSequence seq = solve_phases(OddPolynomial(c));
    for (double x : {0.15, 0.6, 0.95}) {
        double t5 = std::cos(5.0 * std::acos(x));
        CHECK(seq.realized.eval(x) == doctest::Approx(t5).epsilon(1e-7));
    }
}

TEST_CASE("solved phases realize the target polynomial") {
    Rng rng = split_rng(2, 0);
    for (int degree : {3, 7, 15}) {
        OddPolynomial target = bounded_random_odd(degree, rng);
        PhaseSequence seq = solve_phases(target);
        CHECK(seq.degree() == degree);
        CHECK(seq.residual <= 1e-8);
        for (double x : {0.05, 0.3, 0.77, 1.0})
            CHECK(seq.realized.eval(x) == doctest::Approx(target.eval(x)).epsilon(1e-7));
    }
}

TEST_CASE("phase sequence save/load round trip") {
    Rng rng = split_rng(3, 0);
    PhaseSequence seq = solve_phases(bounded_random_odd(7, rng));
    std::stringstream buf;
    seq.save(buf);
    PhaseSequence back = PhaseSequence::load(buf);
    CHECK(back.degree() == seq.degree());
    for (int i = 0; i < seq.degree(); ++i)
        CHECK(back.phases[size_t(i)] == doctest::Approx(seq.phases[size_t(i)]).epsilon(1e-12));
}

TEST_CASE("realized block matches the exact transformation oracle") {
    Rng rng = split_rng(4, 0);
    for (int it = 0; it < 5; ++it) {
        BlockEncoding enc = random_encoding(3, rng);
        OddPolynomial target = bounded_random_odd(7, rng);
        PhaseSequence seq = solve_phases(target);
        MatrixXcd realized = realized_block(enc, seq.phases, true);
        MatrixXcd exact = apply_exact(enc, SVTFunction::from_polynomial(target));
        CHECK((realized - exact).cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("flagged run reports the exact success probability") {
    Rng rng = split_rng(5, 0);
    BlockEncoding enc = random_encoding(3, rng);
    OddPolynomial target = bounded_random_odd(7, rng);
    QsvtRun run(enc, solve_phases(target), true);

    // input supported on the right projector
    VectorXcd v = VectorXcd::Zero(8);
    v(0) = 1.0;
    StateVector input(v, enc.unitary().row_dims());
    auto [out, p] = run_with_flags(run, input);
    VectorXcd expect = realized_block(enc, run.phases.phases, true) * v;
    CHECK(p == doctest::Approx(expect.squaredNorm()).epsilon(1e-9));
    CHECK(std::abs(out.amplitudes().norm() - 1.0) < 1e-12);
    double overlap = std::abs((expect.normalized().adjoint() * out.amplitudes())(0));
    CHECK(overlap == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("solver failure carries the best residual") {
    // an even-degree-style target is unreachable: constant 1 at both parities
    // cannot happen for odd polynomials with tiny tolerance and wrong shape
    std::vector<double> c{2.0};  // sup norm 2 > 1, no phase sequence exists
    bool threw = false;
    try {
        solve_phases(OddPolynomial(c), 1e-10);
    } catch (const SolverError& e) {
        threw = true;
        CHECK(e.best_residual > 1e-10);
    }
    CHECK(threw);
}
