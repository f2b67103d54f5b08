/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef QPS_BOUNDS_HPP
#define QPS_BOUNDS_HPP

#include <string>
#include <vector>

#include "qps/decoders.hpp"

namespace qps {

struct BoundCheckResult {
    std::string name;
    double bound_value;
    double measured_value;
    bool satisfied;
    double margin;     // measured - bound for lower bounds, bound - measured otherwise
    bool lower_bound;  // direction of the inequality
};

std::string bound_csv_header();
std::string bound_csv_row(const BoundCheckResult& r);

/// Haar average of rank-d_m projectors with fixed overlap <psi|Pi|psi> = p_m,
/// conjugated over U(1) (+) U(D-1).
Operator average_projector(const StateVector& psi, double p_m, Index d_m, Index dim);

struct GroverScalingRow {
    double p_m;
    int iterations;  // count to reach fidelity 1 - epsilon
};

/// Iterate the two-reflection amplification operator and count steps until the
/// target fidelity is reached, for each overlap in the grid.
std::vector<GroverScalingRow> grover_scaling_experiment(const std::vector<double>& p_m_grid,
                                                        double epsilon);

/// F_QSVT for a perturbed transformation f(x) = ideal(x) (1 + delta(x)), one
/// delta per branch; the threshold cancels in the ratio.
double perturbed_fidelity(const BranchSpectrum& spectrum, const std::vector<double>& deltas,
                          const std::string& which);

/// The fidelity-minimizing perturbation on the Delta_1 = -Delta_2 line.
std::vector<double> worst_case_deltas(const BranchSpectrum& spectrum, double delta_max,
                                      const std::string& which);

/// Fidelity under per-branch multiplicative perturbations |delta(x)| <=
/// delta_max, randomized plus adversarial (including the exact minimizer).
BoundCheckResult multiplicative_error_fidelity_check(const BranchSpectrum& spectrum,
                                                     double delta_max, int trials,
                                                     const std::string& which,
                                                     std::uint64_t seed = 0);

/// Largest admissible alpha from the spectrum tail condition, with the
/// success probability of the sharp-cutoff transformation checked against
/// (1 - epsilon) alpha.
BoundCheckResult tail_bound_check(const BranchSpectrum& spectrum, double epsilon,
                                  const std::string& which);
double tail_bound_alpha(const BranchSpectrum& spectrum, double epsilon,
                        const std::string& which);

/// Monte Carlo cross-check of average_projector: sample projectors with the
/// prescribed overlap, conjugated by Haar unitaries on the complement of psi,
/// and compare the empirical mean in max norm (tolerance 5/sqrt(samples)).
BoundCheckResult average_projector_mc_check(const StateVector& psi, double p_m, Index d_m,
                                            int samples, Rng& rng);

/// Least-squares slope of log(iterations) against log(p_m).
double grover_loglog_slope(const std::vector<GroverScalingRow>& table);

/// Approximate-error-correction corollary: with deviation epsilon_prime =
/// (1/2d_R) sum |p_am/p_m - 1| and any epsilon in (epsilon_prime, 1), the
/// sharp-cutoff success probability is at least (1 - eps'/eps)(1 - eps).
BoundCheckResult aqec_bound_check(const BranchSpectrum& spectrum, double epsilon);

/// F(1_R/d_R, Psi_R|m) computed from the reduced density matrix and from the
/// eigenvalue closed form; the two paths must agree within 1e-9.
double uhlmann_oracle(const StateVector& joint, const Projector& pi_full, Index d_r);

}  // namespace qps

#endif
