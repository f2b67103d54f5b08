/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef QPS_TYPES_HPP
#define QPS_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qps/policy.hpp"

namespace qps {

using Complex = std::complex<double>;
using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

using Dims = std::vector<Index>;

inline Index dim_product(const Dims& dims) {
    Index d = 1;
    for (Index x : dims) d *= x;
    return d;
}

/// Thrown when subsystem dimension lists are inconsistent with vector/matrix
/// shapes or with each other.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown on inputs outside an operation's mathematical domain
/// (non-PSD density matrix, |x| > 1, vanishing overlap, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Thrown when a request exceeds the dense-simulation dimension envelope
/// or a polynomial-degree cap.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dense-storage envelope: full operators up to 2^12, vectors/isometries up to 2^16.
inline constexpr Index kMaxOperatorDim = Index(1) << 12;
inline constexpr Index kMaxVectorDim = Index(1) << 16;

/// Normalized pure state with an explicit tensor factorization.
class StateVector {
  public:
    StateVector(VectorXcd amplitudes, Dims dims)
        : amps_(std::move(amplitudes)), dims_(std::move(dims)) {
        if (dim_product(dims_) != amps_.size())
            throw DimensionError("StateVector: dims do not match amplitude length");
        double n = amps_.norm();
        if (std::abs(n - 1.0) > 1e-6)
            throw DomainError("StateVector: amplitudes are not normalized");
        if (std::abs(n - 1.0) > policy().norm_slack) amps_ /= n;
    }

    const VectorXcd& amplitudes() const { return amps_; }
    const Dims& dims() const { return dims_; }
    Index dim() const { return amps_.size(); }
    Index num_subsystems() const { return Index(dims_.size()); }

  private:
    VectorXcd amps_;
    Dims dims_;
};

/// Dense operator with row/column tensor factorizations. Not necessarily
/// square; isometries carry distinct row and column dims.
class Operator {
  public:
    Operator(MatrixXcd entries, Dims row_dims, Dims col_dims)
        : mat_(std::move(entries)), row_dims_(std::move(row_dims)), col_dims_(std::move(col_dims)) {
        if (dim_product(row_dims_) != mat_.rows() || dim_product(col_dims_) != mat_.cols())
            throw DimensionError("Operator: dims do not match matrix shape");
    }
    Operator(MatrixXcd entries, Dims dims) : Operator(std::move(entries), dims, dims) {}

    const MatrixXcd& matrix() const { return mat_; }
    const Dims& row_dims() const { return row_dims_; }
    const Dims& col_dims() const { return col_dims_; }
    Index rows() const { return mat_.rows(); }
    Index cols() const { return mat_.cols(); }
    bool is_square() const { return row_dims_ == col_dims_; }

  private:
    MatrixXcd mat_;
    Dims row_dims_, col_dims_;
};

/// Hermitian idempotent operator with known rank.
class Projector {
  public:
    Projector(Operator op, Index rank) : op_(std::move(op)), rank_(rank) {
        const MatrixXcd& p = op_.matrix();
        if (p.rows() != p.cols()) throw DimensionError("Projector: must be square");
        double tol = policy().structural * 100;
        if ((p - p.adjoint()).cwiseAbs().maxCoeff() > tol)
            throw DomainError("Projector: not Hermitian");
        if ((p * p - p).cwiseAbs().maxCoeff() > tol)
            throw DomainError("Projector: not idempotent");
        if (std::abs(p.trace().real() - double(rank_)) > policy().statistical)
            throw DomainError("Projector: trace does not match rank");
    }

    const Operator& op() const { return op_; }
    const MatrixXcd& matrix() const { return op_.matrix(); }
    Index rank() const { return rank_; }
    Index dim() const { return op_.rows(); }

  private:
    Operator op_;
    Index rank_;
};

/// SVD with descending singular values and orthonormal vector sets.
struct SVDResult {
    VectorXd singular_values;
    MatrixXcd left_vectors;
    MatrixXcd right_vectors;
};

}  // namespace qps

#endif
