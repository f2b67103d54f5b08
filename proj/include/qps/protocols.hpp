/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef QPS_PROTOCOLS_HPP
#define QPS_PROTOCOLS_HPP

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qps/qsvt.hpp"

namespace qps {

/// Born-rule decomposition of a pure state under a computational-basis
/// measurement of a subset of qubits.
struct ProjectedEnsemble {
    struct Entry {
        Index outcome;     // flat outcome index over the measured qubits
        double p;          // Born probability
        Projector pi;      // outcome projector on the full register
        StateVector post;  // normalized post-measurement state
    };
    std::vector<Entry> entries;
};

ProjectedEnsemble project_ensemble(const StateVector& state,
                                   const std::vector<Index>& measured_qubits);

/// Fixed-point amplification of the state encoded by a rank-1 right
/// projector; returns the flagged output state and its flag probability.
std::pair<StateVector, double> fpaa_prepare(const BlockEncoding& encoding, double p_star,
                                            double delta);

/// One SWAP-test shot comparing the reduction of two prepared copies onto
/// subsystem_a; returns +1 (accept) or -1, with expectation tr(rho sigma).
int swap_test_purity(const StateVector& copy1, const StateVector& copy2,
                     const std::vector<Index>& subsystem_a, Rng& rng);

/// k-copy single-shot estimators; ships with k = 2 (SWAP-test purity).
using KCopyEstimator = std::function<int(const std::vector<StateVector>&,
                                         const std::vector<Index>&, Rng&)>;
const std::map<int, KCopyEstimator>& estimator_registry();

struct EstimationConfig {
    int k = 2;
    double p_star = 0.05;
    double delta = 0.0;  // 0 selects the ideal sign transformation
    Index budget = 1000;
    std::uint64_t seed = 0;
};

struct EstimateResult {
    double estimate;
    double std_error;
    double flag_fail_rate;
};

/// Post-selection-free estimation: sample an outcome, re-prepare the branch
/// state k-1 times through FPAA with flag accounting, feed the copies to the
/// k-copy estimator.
EstimateResult estimate_nonlinear(const StateVector& state, const std::vector<Index>& measured,
                                  const std::vector<Index>& subsystem_a,
                                  const EstimationConfig& cfg);

/// Branch probabilities p_am of a mixed-state post-selection instance.
struct BranchSpectrum {
    std::vector<double> p_am;
    double p_m = 0.0;
    Index d_r = 0;

    double p_max() const;
    double p_min() const;
};

BranchSpectrum spectrum_from_values(std::vector<double> p_am);

/// Spectrum-tier evaluation: columns holds the d_R states U|a,0>, one per
/// column; eigenvalues of the Hermitian overlap matrix <psi_a|Pi|psi_b>.
BranchSpectrum branch_spectrum(const MatrixXcd& columns, const Projector& target);

struct MetricsReport {
    double f_qsvt;
    double p_qsvt;
    double f_overall;
    double f_uhlmann;
};

/// The four mixed-post-selection metrics evaluated from the spectrum.
MetricsReport metrics(const BranchSpectrum& spectrum, const SVTFunction& f);

std::string metrics_csv_header();
std::string metrics_csv_row(double p_star, const MetricsReport& report);

/// A circuit-tier mixed-state post-selection instance: maximally mixed
/// subsystem A purified by R, ancilla B, preparation unitary on AB, and a
/// forced measurement projector.
struct MixedInstance {
    Operator u;  // on A (x) B
    Index d_a;
    Index d_b;
    Projector target;

    BlockEncoding encoding() const;
    BranchSpectrum spectrum() const;
    /// Purification (1/sqrt(d_A)) sum_a |a>_R U|a,0>_S on R (x) A (x) B.
    StateVector purified_state() const;
};

MixedInstance random_mixed_instance(Index n_qubits, Index n_mixed, Index n_measured, Rng& rng);

struct LaaResult {
    StateVector state;  // joint state on R (x) S after the flagged circuit
    double flag_prob;
    OddPolynomial realized;
};

/// Run the linear-amplification circuit on the purified instance.
LaaResult laa_simulate(const MixedInstance& instance, double p_star, double delta_mult = 1e-3);

/// FPAA on the purification: amplifies Pi_m |Psi> on the joint register;
/// returns the joint flagged state and flag probability.
std::pair<StateVector, double> purified_fpaa(const MixedInstance& instance, double p_star,
                                             double delta);

}  // namespace qps

#endif
