/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qps/decoders.hpp"

using namespace qps;

TEST_CASE("pseudoinverse closed forms on the two-branch example") {
    BranchSpectrum s = spectrum_from_values({0.1, 0.4});
    DecoderReport r = pseudoinverse_decode(s, 0.1);
    CHECK(std::abs(r.f_decoding - 1.0) < 1e-12);
    CHECK(std::abs(r.p_succ - 0.4) < 1e-12);
    CHECK(std::abs(r.f_overall - 0.4) < 1e-12);
    CHECK(std::abs(r.f_uhlmann - 0.9) < 1e-12);
    CHECK(r.rank == 2);
}

TEST_CASE("uninformative measurements decode for free") {
    BranchSpectrum u = spectrum_from_values({0.2, 0.2, 0.2, 0.2});
    DecoderReport r = pseudoinverse_decode(u, 0.2);
    CHECK(std::abs(r.f_decoding - 1.0) < 1e-12);
    CHECK(std::abs(r.p_succ - 1.0) < 1e-12);
    CHECK(std::abs(r.f_uhlmann - 1.0) < 1e-12);
}

TEST_CASE("vanishing branches are dropped from the injective block") {
    BranchSpectrum s = spectrum_from_values({0.0, 0.3});
    DecoderReport r = pseudoinverse_decode(s, 0.3);
    CHECK(r.rank == 1);
    BranchSpectrum dead = spectrum_from_values({0.0, 0.0});
    CHECK_THROWS_AS(pseudoinverse_decode(dead, 0.1), DomainError);
}

TEST_CASE("teleportation decoders share their fidelity") {
    Rng rng = split_rng(42, 0);
    for (int it = 0; it < 10; ++it) {
        TeleportInstance t = random_teleport_instance(6, 2, 3, rng);
        DecoderReport yk = yk_teleport_decode(t), petz = petz_teleport_decode(t);
        CHECK(std::abs(yk.f_decoding - petz.f_decoding) < 1e-9);
        // overall performance never beats the Uhlmann bound
        CHECK(yk.f_overall <= yk.f_uhlmann + 1e-9);
        CHECK(petz.f_overall <= petz.f_uhlmann + 1e-9);
    }
}

TEST_CASE("two-copy contraction oracle for the EPR-probe decoder") {
    Rng rng = split_rng(42, 0);
    TeleportInstance t = random_teleport_instance(6, 2, 3, rng);
    DecoderReport yk = yk_teleport_decode(t);

    // view Psi_RD|m as a matrix; the decoder output is its two-copy contraction
    StateVector psi = t.omega_rdm();
    MatrixXcd m(t.d_a, t.d_d);
    for (Index r = 0; r < t.d_a; ++r)
        for (Index d = 0; d < t.d_d; ++d) m(r, d) = psi.amplitudes()(r * t.d_d + d);
    MatrixXcd phi = (m * m.adjoint()) / std::sqrt(double(t.d_d));
    double nrm = phi.squaredNorm();
    double f_oracle = std::norm(phi.trace() / std::sqrt(double(t.d_a))) / nrm;
    double p_oracle = t.p_m() * nrm;
    CHECK(yk.f_decoding == doctest::Approx(f_oracle).epsilon(1e-10));
    CHECK(yk.p_succ == doctest::Approx(p_oracle).epsilon(1e-10));
}

TEST_CASE("decoherence decoders order by environment size") {
    Rng rng = split_rng(7, 0);
    // d_E > d_R d_D: the EPR-probe decoder succeeds more often
    StateVector big_env = random_state(64, rng, Dims{2, 16, 2});
    auto [yk1, petz1] = decoherence_decoders(big_env);
    CHECK(yk1.f_decoding == doctest::Approx(petz1.f_decoding).epsilon(1e-10));
    CHECK(yk1.p_succ >= petz1.p_succ);
    // exact ratio: p_yk / p_petz = d_E / (d_R d_D)
    CHECK(yk1.p_succ / petz1.p_succ == doctest::Approx(16.0 / 4.0).epsilon(1e-10));

    // d_E < d_R d_D flips the ordering
    StateVector small_env = random_state(16, rng, Dims{2, 2, 4});
    auto [yk2, petz2] = decoherence_decoders(small_env);
    CHECK(yk2.p_succ <= petz2.p_succ);
}

TEST_CASE("decoupled environment decodes perfectly") {
    // EPR between R and D, environment in a pure product state
    VectorXcd v = VectorXcd::Zero(16);
    v(0 * 8 + 0 * 2 + 0) = std::sqrt(0.5);
    v(1 * 8 + 0 * 2 + 1) = std::sqrt(0.5);
    auto [yk, petz] = decoherence_decoders(StateVector(v, Dims{2, 4, 2}));
    CHECK(yk.f_decoding == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(petz.f_decoding == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("teleport instance internals are consistent") {
    Rng rng = split_rng(9, 0);
    TeleportInstance t = random_teleport_instance(6, 2, 2, rng);
    BranchSpectrum s = t.spectrum();
    CHECK(s.d_r == t.d_a);
    CHECK(t.p_m() == doctest::Approx(s.p_m).epsilon(1e-10));
    CHECK(t.omega_red().amplitudes().norm() == doctest::Approx(1.0));
    CHECK(t.omega_rdm().amplitudes().norm() == doctest::Approx(1.0));
    CHECK(t.target().rank() == t.d_d);
}

TEST_CASE("inverse-transform circuit matches the spectrum formulas") {
    Rng rng = split_rng(7, 0);
    TeleportInstance t = random_teleport_instance(6, 2, 2, rng);  // d_D = 16 >= d_R = 4
    BranchSpectrum s = t.spectrum();
    double p_star = s.p_min();
    PhaseSequence ph = solve_phases(inverse_polynomial(p_star, s.p_max(), 1e-3));

    // encode the adjoint block Pi_B U^dag Pi_m and run it on |Psi_m>
    BlockEncoding enc(Operator(t.u.matrix().adjoint(), Dims(6, 2)), t.target(),
                      t.encoding().right_projector());
    MatrixXcd b = realized_block(enc, ph.phases, true);
    StateVector psim = t.omega_rdm();
    const Index big = t.u.rows();
    VectorXcd in = VectorXcd::Zero(t.d_a * big);
    for (Index r = 0; r < t.d_a; ++r)
        in.segment(r * big + t.m * t.d_d, t.d_d) = psim.amplitudes().segment(r * t.d_d, t.d_d);
    VectorXcd out(in.size());
    for (Index r = 0; r < t.d_a; ++r) out.segment(r * big, big) = b * in.segment(r * big, big);
    double flag = out.squaredNorm();
    out /= std::sqrt(flag);

    VectorXcd epr = VectorXcd::Zero(t.d_a * big);
    for (Index a = 0; a < t.d_a; ++a) epr(a * big + a * t.d_b) = 1.0 / std::sqrt(double(t.d_a));
    double fid = std::norm((epr.adjoint() * out)(0));

    MetricsReport mr = teleport_metrics(s, SVTFunction::from_polynomial(ph.realized));
    CHECK(flag == doctest::Approx(mr.p_qsvt).epsilon(1e-9));
    CHECK(fid == doctest::Approx(mr.f_qsvt).epsilon(1e-9));

    DecoderReport ideal = pseudoinverse_decode(s, p_star);
    CHECK(std::abs(ideal.f_decoding - 1.0) < 1e-12);
    CHECK(fid >= 1.0 - 1e-4);
}

TEST_CASE("aqec deviation check") {
    BranchSpectrum u = spectrum_from_values({0.2, 0.2, 0.2, 0.2});
    AqecResult a = aqec_check(u, 0.1, 0.05);
    CHECK(a.deviation == doctest::Approx(0.0));
    CHECK(a.satisfied);
    CHECK(a.p_qsvt_bound == doctest::Approx(0.45));
    CHECK_THROWS_AS(aqec_check(u, 0.05, 0.1), DomainError);
}
