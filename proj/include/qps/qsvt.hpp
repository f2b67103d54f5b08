/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef QPS_QSVT_HPP
#define QPS_QSVT_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qps/blockenc.hpp"
#include "qps/svtfun.hpp"

namespace qps {

/// Projector-controlled phase e^{i phi} Pi + e^{-i phi} (1 - Pi).
MatrixXcd pi_phi(const Projector& pi, double phi);

/// Ancilla realization of pi_phi: CPiNOT (1 (x) e^{-i phi Z}) CPiNOT with one
/// ancilla qubit appended (least significant). The ancilla-|0> sector acts as
/// Pi_phi, the |1> sector as Pi_{-phi}.
Operator pi_phi_gadget(const Projector& pi, double phi);

/// Phase solver failure; carries the best residual reached.
class SolverError : public std::runtime_error {
  public:
    SolverError(const std::string& what, double best_residual)
        : std::runtime_error(what), best_residual(best_residual) {}
    double best_residual;
};

/// Solved phase modulation sequence for an odd polynomial target.
struct PhaseSequence {
    std::vector<double> phases;        // phi_1 ... phi_d, d odd
    OddPolynomial realized;            // real part actually realized by the circuit
    double residual = 0.0;             // max grid deviation |realized - target|

    int degree() const { return int(phases.size()); }

    /// Plain text: degree line, then one phase per line.
    void save(std::ostream& os) const;
    static PhaseSequence load(std::istream& is);
};

/// Real part of the 2x2 signal-processing model at x: Re <0| prod_j
/// diag(e^{i phi_j}, e^{-i phi_j}) W(x) |0> with W the reflection encoding x.
double qsp_model_re(const std::vector<double>& phases, double x);

/// Minimize the L2 node residual between the model real part and the target
/// over symmetric phases (quasi-Newton), starting from zero phases, then
/// certify the max deviation on the standard grid. Throws SolverError if the
/// certified residual exceeds tol within the iteration budget.
PhaseSequence solve_phases(const OddPolynomial& target, double tol = 1e-8);

/// Alternating phase modulation circuit: Pi~_{phi_1} U Pi_{phi_2} U' ... U
/// with d phase factors and d alternating U / U' applications.
MatrixXcd alternating_sequence(const BlockEncoding& block, const std::vector<double>& phases);

/// Exact SVT oracle: sum_i f(s_i) |u_i><v_i| from the SVD of the encoded
/// matrix.
MatrixXcd apply_exact(const BlockEncoding& block, const SVTFunction& f);

/// Pi~ U_phi Pi block of the phase modulation circuit; with real_part set,
/// the average of the +phi and -phi blocks (the |+> ancilla gadget block).
MatrixXcd realized_block(const BlockEncoding& block, const std::vector<double>& phases,
                         bool real_part = true);

/// A configured SVT execution: block encoding, phases, and flags.
struct QsvtRun {
    BlockEncoding block;
    PhaseSequence phases;
    bool use_real_part_gadget = true;
    std::vector<std::pair<std::string, Projector>> flag_projectors;

    QsvtRun(BlockEncoding b, PhaseSequence p, bool real_part = true);
};

/// Apply the run to an input supported on the right projector; returns the
/// normalized flagged state and the exact flag-success probability.
std::pair<StateVector, double> run_with_flags(const QsvtRun& run, const StateVector& input);

}  // namespace qps

#endif
