/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "qps/blockenc.hpp"

using namespace qps;

namespace {

// block of the encoded matrix on the system factor, with appended registers
// pinned to (in_idx -> out_idx)
MatrixXcd system_block(const MatrixXcd& full, Index sys, Index extra, Index in_idx,
                       Index out_idx) {
    MatrixXcd blk(sys, sys);
    for (Index i = 0; i < sys; ++i)
        for (Index j = 0; j < sys; ++j) blk(i, j) = full(i * extra + out_idx, j * extra + in_idx);
    return blk;
}

Index outcome_pattern(const HybridCircuit& c) {
    std::vector<HybridCircuit::Measurement> ms = c.measurements;
    std::stable_sort(ms.begin(), ms.end(),
                     [](const auto& a, const auto& b) { return a.time < b.time; });
    Index pattern = 0;
    for (const auto& m : ms) pattern = (pattern << 1) | m.outcome;
    return pattern;
}

}  // namespace

TEST_CASE("postselect encoding is the projected preparation") {
    Rng rng = split_rng(1, 0);
    Operator u(haar_unitary(8, rng), Dims{2, 2, 2});
    Projector pi = basis_projector(3, {0}, {1});
    BlockEncoding enc = postselect_encoding(u, pi);
    VectorXcd zero = VectorXcd::Zero(8);
    zero(0) = 1.0;
    MatrixXcd expect = pi.matrix() * u.matrix() * (zero * zero.adjoint());
    CHECK((enc.encoded_matrix() - expect).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(enc.right_projector().rank() == 1);
}

TEST_CASE("kraus chain on a hand-built circuit") {
    // H on qubit 0, force outcome 0, then X: M = X |0><0| H
    HybridCircuit c;
    c.n_qubits = 1;
    MatrixXcd h(2, 2), x(2, 2);
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    x << 0, 1, 1, 0;
    c.gates.push_back({{0}, h});
    c.gates.push_back({{0}, x});
    c.measurements.push_back({1, 0, 0});

    MatrixXcd p0 = MatrixXcd::Zero(2, 2);
    p0(0, 0) = 1.0;
    MatrixXcd expect = x * p0 * h;
    CHECK((c.kraus_chain() - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("deferral and compression blocks reproduce the kraus chain") {
    Rng rng = split_rng(2, 0);
    double worst = 0;
    for (int it = 0; it < 10; ++it) {
        HybridCircuit c = random_hybrid_circuit(3, 6, 3, rng);
        MatrixXcd kraus = c.kraus_chain();
        Index sys = Index(1) << c.n_qubits;

        Index anc = Index(1) << c.n_meas();
        Index pattern = outcome_pattern(c);
        MatrixXcd sd =
            system_block(swap_deferral_encoding(c).encoded_matrix(), sys, anc, pattern, pattern);
        worst = std::max(worst, (sd - kraus).cwiseAbs().maxCoeff());

        Index cdim = c.n_meas() + 1;
        MatrixXcd cg = system_block(compression_gadget_encoding(c).encoded_matrix(), sys, cdim,
                                    1 % cdim, 0);
        worst = std::max(worst, (cg - kraus).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("deferral works with zero measurements") {
    Rng rng = split_rng(3, 0);
    HybridCircuit c = random_hybrid_circuit(2, 4, 0, rng);
    MatrixXcd kraus = c.kraus_chain();
    MatrixXcd sd = swap_deferral_encoding(c).encoded_matrix();
    CHECK((sd - kraus).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("add gate is the cyclic increment") {
    MatrixXcd add = add_gate(3);
    CHECK((add * add.adjoint() - MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
    VectorXcd v = VectorXcd::Zero(3);
    v(2) = 1.0;
    CHECK(std::abs((add * v)(0) - 1.0) < 1e-14);  // wraps around
}

TEST_CASE("hybrid circuit serialization round trip") {
    Rng rng = split_rng(4, 0);
    HybridCircuit c = random_hybrid_circuit(4, 8, 4, rng);
    std::stringstream buf;
    c.save(buf);
    HybridCircuit back = HybridCircuit::load(buf);
    CHECK(back.n_qubits == c.n_qubits);
    CHECK(back.n_meas() == c.n_meas());
    CHECK((back.kraus_chain() - c.kraus_chain()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mixed postselect encoding projects the ancilla start") {
    Rng rng = split_rng(5, 0);
    Operator u(haar_unitary(8, rng), Dims{2, 2, 2});
    Projector target = basis_projector(3, {0}, {0});
    BlockEncoding enc = mixed_postselect_encoding(u, 2, 4, target);
    // right support: ancilla pair in |00>, any first qubit
    CHECK(enc.right_projector().rank() == 2);
    MatrixXcd pb = MatrixXcd::Zero(8, 8);
    pb(0, 0) = 1.0;
    pb(4, 4) = 1.0;
    MatrixXcd expect = target.matrix() * u.matrix() * pb;
    CHECK((enc.encoded_matrix() - expect).cwiseAbs().maxCoeff() < 1e-14);
}
