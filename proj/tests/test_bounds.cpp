/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qps/bounds.hpp"

using namespace qps;

namespace {

BranchSpectrum random_spectrum(Rng& rng, int max_branches = 24) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int n = 2 + int(u(rng) * max_branches);
    std::vector<double> p(static_cast<size_t>(n), 0.0);
    for (double& x : p) x = 1e-4 + 0.9 * u(rng);
    return spectrum_from_values(std::move(p));
}

}  // namespace

TEST_CASE("average projector closed form") {
    Rng rng = split_rng(1, 0);
    StateVector psi = random_state(8, rng);
    Operator avg = average_projector(psi, 0.3, 2, 8);
    CHECK(avg.matrix().trace().real() == doctest::Approx(2.0));
    double overlap = (psi.amplitudes().adjoint() * avg.matrix() * psi.amplitudes())(0).real();
    CHECK(overlap == doctest::Approx(0.3));
    // hermitian
    CHECK((avg.matrix() - avg.matrix().adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK_THROWS_AS(average_projector(psi, 0.0, 2, 8), DomainError);
    CHECK_THROWS_AS(average_projector(psi, 0.3, 8, 8), DomainError);
}

TEST_CASE("average projector Monte Carlo agreement") {
    Rng rng = split_rng(2, 0);
    StateVector psi = random_state(8, rng);
    BoundCheckResult r = average_projector_mc_check(psi, 0.3, 2, 2000, rng);
    CHECK(r.satisfied);
    CHECK(r.measured_value < r.bound_value);
}

TEST_CASE("amplification iteration counts") {
    // overlap sin^2(pi/6) reaches the target after one reflection pair
    auto t = grover_scaling_experiment({std::pow(std::sin(M_PI / 6.0), 2)}, 1e-9);
    CHECK(t[0].iterations == 1);
    // quarter-period count at small overlap: ~ pi / (4 sqrt(p))
    auto t2 = grover_scaling_experiment({1e-3}, 1e-3);
    CHECK(std::abs(t2[0].iterations - M_PI / (4.0 * std::sqrt(1e-3))) <=
          0.2 * M_PI / (4.0 * std::sqrt(1e-3)));
}

TEST_CASE("iteration count scales as the inverse square root") {
    auto table = grover_scaling_experiment({1e-4, 3e-4, 1e-3, 3e-3, 1e-2}, 0.05);
    double slope = grover_loglog_slope(table);
    CHECK(slope >= -0.55);
    CHECK(slope <= -0.45);
}

TEST_CASE("multiplicative perturbations keep fidelity above 1 - delta^2") {
    BranchSpectrum s = spectrum_from_values({0.1, 0.25, 0.4, 0.05});
    for (const char* which : {"mixed", "teleport"}) {
        BoundCheckResult r = multiplicative_error_fidelity_check(s, 0.1, 1000, which, 7);
        CHECK(r.satisfied);
        CHECK(r.bound_value == doctest::Approx(1.0 - 0.01));

        // the analytic minimizer sits exactly on F = 1 - Delta_2
        std::vector<double> wd = worst_case_deltas(s, 0.1, which);
        double f = perturbed_fidelity(s, wd, which);
        double d2 = 0, dr = double(s.d_r);
        for (size_t i = 0; i < wd.size(); ++i) {
            double w = std::string(which) == "mixed" ? s.p_am[i] / (dr * s.p_m) : 1.0 / dr;
            d2 += w * wd[i] * wd[i];
        }
        CHECK(f == doctest::Approx(1.0 - d2).epsilon(1e-12));
    }
    // no perturbation, no loss
    BoundCheckResult r0 = multiplicative_error_fidelity_check(s, 0.0, 10, "mixed", 7);
    CHECK(r0.measured_value == doctest::Approx(1.0));
}

TEST_CASE("tail bound on the two-branch example") {
    BranchSpectrum s = spectrum_from_values({0.1, 0.4});
    // budget 0.8 * 2 * 0.25 = 0.4 admits the threshold 0.1: alpha = 2.5
    CHECK(tail_bound_alpha(s, 0.8, "mixed") == doctest::Approx(2.5));
    BoundCheckResult r = tail_bound_check(s, 0.8, "mixed");
    CHECK(r.bound_value == doctest::Approx(0.5));
    CHECK(r.measured_value == doctest::Approx(0.5));
    CHECK(r.satisfied);

    // uniform spectra admit no amplification beyond alpha = 1
    BranchSpectrum u = spectrum_from_values({0.2, 0.2, 0.2});
    CHECK(tail_bound_alpha(u, 0.3, "mixed") == doctest::Approx(1.0));

    BoundCheckResult t = tail_bound_check(s, 0.4, "teleport");
    CHECK(t.satisfied);
    CHECK(t.measured_value >= t.bound_value);
}

TEST_CASE("tail and corollary bounds hold on random spectra") {
    Rng rng = split_rng(21, 0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 100; ++it) {
        BranchSpectrum s = random_spectrum(rng);
        double eps = 0.02 + 0.9 * u(rng);
        CHECK(tail_bound_check(s, eps, "mixed").satisfied);
        CHECK(tail_bound_check(s, eps, "teleport").satisfied);

        double dev = 0;
        for (double p : s.p_am) dev += std::abs(p / s.p_m - 1.0);
        dev /= 2.0 * double(s.d_r);
        double eps2 = dev + (1.0 - dev) * (0.05 + 0.9 * u(rng));
        CHECK(aqec_bound_check(s, eps2).satisfied);
    }
}

TEST_CASE("uhlmann oracle agrees with the spectrum formula") {
    Rng rng = split_rng(9, 0);
    MixedInstance inst = random_mixed_instance(5, 2, 2, rng);
    StateVector joint = inst.purified_state();
    MatrixXcd pim = kron(MatrixXcd::Identity(inst.d_a, inst.d_a), inst.target.matrix());
    Projector pi_full(Operator(std::move(pim), joint.dims()), inst.d_a * inst.target.rank());
    double direct = uhlmann_oracle(joint, pi_full, inst.d_a);
    double formula = metrics(inst.spectrum(), SVTFunction::sign_approx(0.5)).f_uhlmann;
    CHECK(direct == doctest::Approx(formula).epsilon(1e-9));
}

TEST_CASE("csv rows render both directions") {
    BoundCheckResult r{"demo", 0.5, 0.75, true, 0.25, true};
    CHECK(bound_csv_header() == "check,bound,measured,margin,satisfied");
    CHECK(bound_csv_row(r) == "demo,0.5,0.75,0.25,pass");
}
