/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef QPS_LINALG_HPP
#define QPS_LINALG_HPP

#include <cstdint>
#include <random>
#include <utility>

#include "qps/types.hpp"

namespace qps {

/// Seedable RNG. Passed explicitly everywhere; never global.
using Rng = std::mt19937_64;

/// Derive an independent stream from a base seed and a stream index.
inline Rng split_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{seed, stream ^ std::uint64_t(0x9e3779b97f4a7c15ULL)};
    return Rng(seq);
}

MatrixXcd density_matrix(const StateVector& psi);

/// Reduced operator on the subsystems listed in `keep` (indices into dims).
/// Trace is preserved.
Operator partial_trace(const Operator& op, const std::vector<Index>& keep);
Operator partial_trace(const StateVector& psi, const std::vector<Index>& keep);

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 for density matrices.
double fidelity(const Operator& rho, const Operator& sigma);
double fidelity(const MatrixXcd& rho, const MatrixXcd& sigma);

/// (tr rho^2, -log tr rho^2).
std::pair<double, double> purity_renyi2(const Operator& rho);
std::pair<double, double> purity_renyi2(const MatrixXcd& rho);

/// Haar-random isometry via QR of a complex Gaussian matrix with the R
/// diagonal phase fixed. rows == cols gives a Haar unitary.
Operator haar_random_isometry(Index rows, Index cols, Rng& rng);
MatrixXcd haar_unitary(Index dim, Rng& rng);

/// Maximally entangled state sum_a |a>|a>/sqrt(d) on two d-dimensional halves.
StateVector epr_state(Index d);

SVDResult svd(const MatrixXcd& m);

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b);

/// Identity on a list of qubit dims except `u` acting on the given subsystem
/// indices (need not be adjacent).
MatrixXcd embed(const MatrixXcd& u, const std::vector<Index>& targets, const Dims& dims);

/// Hermitian PSD matrix square root with small negative eigenvalues clamped.
MatrixXcd psd_sqrt(const MatrixXcd& a);

/// Computational-basis projector |b><b| on `which` qubits of an n-qubit
/// register, tensored with identity elsewhere. `bits` holds one outcome per
/// entry of `which`.
Projector basis_projector(Index n_qubits, const std::vector<Index>& which,
                          const std::vector<int>& bits);

/// Rank-1 projector |psi><psi|.
Projector state_projector(const StateVector& psi);

StateVector random_state(Index dim, Rng& rng, Dims dims = {});

}  // namespace qps

#endif
