/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef QPS_DECODERS_HPP
#define QPS_DECODERS_HPP

#include <string>
#include <utility>

#include "qps/protocols.hpp"

namespace qps {

/// Measurement-induced teleportation: quantum information encoded through U
/// on A (x) B, read out through the complementary partition E (x) D after a
/// forced measurement outcome m on E.
struct TeleportInstance {
    Operator u;  // on A (x) B
    Index d_a;   // input partition, d_a = d_R
    Index d_b;
    Index d_e;  // output partition of the same register
    Index d_d;
    Index m = 0;  // forced outcome on E

    Projector target() const;  // |m><m|_E (x) 1_D
    BlockEncoding encoding() const;
    BranchSpectrum spectrum() const;
    /// Purification (1/sqrt(d_A)) sum_a |a>_R U|a,0> on R (x) E (x) D.
    StateVector omega_red() const;
    /// Normalized post-measurement pure state on R (x) D.
    StateVector omega_rdm() const;
    double p_m() const;
};

TeleportInstance random_teleport_instance(Index n_qubits, Index n_a, Index n_e, Rng& rng);

struct DecoderReport {
    std::string decoder;
    double f_decoding;
    double p_succ;
    double f_overall;
    double f_uhlmann;
    Index rank;  // branches actually decoded (injective sub-block)
};

std::string decoder_csv_header();
std::string decoder_csv_row(double p_star, const DecoderReport& report);

/// Teleportation-decoding metrics from the branch spectrum for an arbitrary
/// singular-value transformation f.
MetricsReport teleport_metrics(const BranchSpectrum& spectrum, const SVTFunction& f);

/// Moore-Penrose decoder realized as the truncated-inverse transformation.
DecoderReport pseudoinverse_decode(const BranchSpectrum& spectrum, double p_star);
DecoderReport pseudoinverse_decode(const TeleportInstance& instance, double p_star);

/// Yoshida-Kitaev-style teleportation decoder: post-select DD' on EPR.
DecoderReport yk_teleport_decode(const TeleportInstance& instance);

/// Petz-like teleportation decoder: back-evolve and post-select B on |0>.
DecoderReport petz_teleport_decode(const TeleportInstance& instance);

/// Decoders for the decoherence setting (E erased rather than measured);
/// input is the tripartite pure state on R (x) E (x) D.
std::pair<DecoderReport, DecoderReport> decoherence_decoders(const StateVector& omega_red);

struct AqecResult {
    bool satisfied;               // 1-norm deviation within epsilon_prime
    double deviation;             // (1/2d_R) sum |p_am/p_m - 1|
    double p_qsvt_bound;          // (1 - eps'/eps)(1 - eps)
};

AqecResult aqec_check(const BranchSpectrum& spectrum, double epsilon, double epsilon_prime);

}  // namespace qps

#endif
