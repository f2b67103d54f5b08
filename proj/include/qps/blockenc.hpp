/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef QPS_BLOCKENC_HPP
#define QPS_BLOCKENC_HPP

#include <iosfwd>
#include <optional>

#include "qps/linalg.hpp"
#include "qps/types.hpp"

namespace qps {

/// A unitary together with right/left projectors encoding M = Pi~ U Pi.
class BlockEncoding {
  public:
    BlockEncoding(Operator unitary, Projector right, Projector left);

    const Operator& unitary() const { return u_; }
    const Projector& right_projector() const { return right_; }
    const Projector& left_projector() const { return left_; }
    Index dim() const { return u_.rows(); }

    /// Pi~ U Pi as a full-dimension matrix.
    MatrixXcd encoded_matrix() const;

  private:
    Operator u_;
    Projector right_, left_;
};

/// A forced-outcome hybrid circuit: unitary gates on up to two qubits
/// interleaved with single-qubit projective measurements whose outcomes are
/// fixed. Event order is gate-list order; a measurement at time t acts after
/// the first t gates.
struct HybridCircuit {
    struct Gate {
        std::vector<Index> targets;  // 1 or 2 qubit indices
        MatrixXcd u;                 // 2x2 or 4x4 unitary
    };
    struct Measurement {
        Index time;   // number of gates applied before this measurement
        Index qubit;
        int outcome;  // 0 or 1
    };

    Index n_qubits = 0;
    std::vector<Gate> gates;
    std::vector<Measurement> measurements;

    Index n_meas() const { return Index(measurements.size()); }

    /// Plain-text line format:
    ///   QUBITS n
    ///   GATE q_i [q_j] <entries re im ...>   (4 or 16 complex entries)
    ///   MEAS t q m
    void save(std::ostream& os) const;
    static HybridCircuit load(std::istream& is);

    /// Unnormalized post-selected map: gates interleaved with the forced
    /// Kraus projectors |m><m|. The oracle for both encodings below.
    MatrixXcd kraus_chain() const;
};

/// Eq.-style pure-state encoding M = Pi_m U Pi_0 with Pi_0 = |0...0><0...0|.
/// Throws DomainError if <psi|Pi_m|psi> is degenerate.
BlockEncoding postselect_encoding(const Operator& prep_unitary, const Projector& target);

/// Mixed-state encoding M = Pi_m U Pi_B with Pi_B = I_A (x) |0><0|_B.
BlockEncoding mixed_postselect_encoding(const Operator& prep_unitary, Index d_a, Index d_b,
                                        const Projector& target);

/// Mid-circuit measurements deferred to the final time with one ancilla qubit
/// per measurement (SWAP identity).
BlockEncoding swap_deferral_encoding(const HybridCircuit& circuit);

/// Coherent-counter construction: measurements feed a counter through
/// controlled increments; a single final counter projection replaces them.
BlockEncoding compression_gadget_encoding(const HybridCircuit& circuit);

/// Modular increment on a counter of the given dimension.
MatrixXcd add_gate(Index counter_dim);

HybridCircuit random_hybrid_circuit(Index n_qubits, Index n_gates, Index n_meas, Rng& rng);

}  // namespace qps

#endif
