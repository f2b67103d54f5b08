/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "qps/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace qps {

MatrixXcd density_matrix(const StateVector& psi) {
    return psi.amplitudes() * psi.amplitudes().adjoint();
}

namespace {

// Multi-index walker over a dims list.
struct MultiIndex {
    const Dims& dims;
    std::vector<Index> idx;
    explicit MultiIndex(const Dims& d) : dims(d), idx(d.size(), 0) {}
    bool next() {
        for (Index k = Index(dims.size()) - 1; k >= 0; --k) {
            if (++idx[k] < dims[k]) return true;
            idx[k] = 0;
        }
        return false;
    }
    Index flatten() const {
        Index f = 0;
        for (size_t k = 0; k < dims.size(); ++k) f = f * dims[k] + idx[k];
        return f;
    }
};

}  // namespace

Operator partial_trace(const Operator& op, const std::vector<Index>& keep) {
    if (!op.is_square()) throw DimensionError("partial_trace: operator must be square");
    const Dims& dims = op.row_dims();
    const Index n = Index(dims.size());
    std::vector<bool> kept(n, false);
    for (Index k : keep) {
        if (k < 0 || k >= n) throw DimensionError("partial_trace: keep index out of range");
        kept[k] = true;
    }
    Dims keep_dims, trace_dims;
    std::vector<Index> keep_pos, trace_pos;
    for (Index k = 0; k < n; ++k) {
        if (kept[k]) { keep_dims.push_back(dims[k]); keep_pos.push_back(k); }
        else { trace_dims.push_back(dims[k]); trace_pos.push_back(k); }
    }
    const Index dk = dim_product(keep_dims);
    MatrixXcd out = MatrixXcd::Zero(dk, dk);

    // strides of each subsystem in the flat index
    std::vector<Index> stride(n, 1);
    for (Index k = n - 2; k >= 0; --k) stride[k] = stride[k + 1] * dims[k + 1];

    std::vector<Index> kstride(keep_pos.size(), 1);
    for (Index k = Index(keep_pos.size()) - 2; k >= 0; --k)
        kstride[k] = kstride[k + 1] * keep_dims[k + 1];

    MultiIndex ki(keep_dims);
    // iterate over kept row/col indices, sum over traced diagonal
    do {
        Index row_base = 0, row_out = 0;
        for (size_t k = 0; k < keep_pos.size(); ++k) {
            row_base += ki.idx[k] * stride[keep_pos[k]];
            row_out += ki.idx[k] * kstride[k];
        }
        MultiIndex kj(keep_dims);
        do {
            Index col_base = 0, col_out = 0;
            for (size_t k = 0; k < keep_pos.size(); ++k) {
                col_base += kj.idx[k] * stride[keep_pos[k]];
                col_out += kj.idx[k] * kstride[k];
            }
            Complex s = 0;
            if (trace_pos.empty()) {
                s = op.matrix()(row_base, col_base);
            } else {
                MultiIndex ti(trace_dims);
                do {
                    Index t = 0;
                    for (size_t k = 0; k < trace_pos.size(); ++k)
                        t += ti.idx[k] * stride[trace_pos[k]];
                    s += op.matrix()(row_base + t, col_base + t);
                } while (ti.next());
            }
            out(row_out, col_out) = s;
        } while (kj.next());
    } while (ki.next());

    return Operator(std::move(out), keep_dims, keep_dims);
}

Operator partial_trace(const StateVector& psi, const std::vector<Index>& keep) {
    return partial_trace(Operator(density_matrix(psi), psi.dims()), keep);
}

MatrixXcd psd_sqrt(const MatrixXcd& a) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(a);
    // eigenvalues below the clamp are roundoff; larger negatives are caught by callers
    VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

double fidelity(const MatrixXcd& rho, const MatrixXcd& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw DimensionError("fidelity: shape mismatch");
    auto check = [](const MatrixXcd& m, const char* name) {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-9)
            throw DomainError(std::string("fidelity: non-PSD input ") + name);
    };
    check(rho, "rho");
    check(sigma, "sigma");
    MatrixXcd sr = psd_sqrt(rho);
    MatrixXcd inner = sr * sigma * sr;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(inner, Eigen::EigenvaluesOnly);
    double t = 0;
    for (Index i = 0; i < es.eigenvalues().size(); ++i)
        t += std::sqrt(std::max(0.0, es.eigenvalues()(i)));
    return std::min(1.0, t * t);
}

double fidelity(const Operator& rho, const Operator& sigma) {
    return fidelity(rho.matrix(), sigma.matrix());
}

std::pair<double, double> purity_renyi2(const MatrixXcd& rho) {
    double p = (rho * rho).trace().real();
    return {p, -std::log(p)};
}

std::pair<double, double> purity_renyi2(const Operator& rho) {
    return purity_renyi2(rho.matrix());
}

MatrixXcd haar_unitary(Index dim, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    MatrixXcd a(dim, dim);
    for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
    Eigen::HouseholderQR<MatrixXcd> qr(a);
    MatrixXcd q = qr.householderQ();
    MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    // fix the R diagonal phases so the distribution is exactly Haar
    for (Index j = 0; j < dim; ++j) {
        Complex d = r(j, j);
        q.col(j) *= (std::abs(d) > 0) ? d / std::abs(d) : Complex(1, 0);
    }
    return q;
}

Operator haar_random_isometry(Index rows, Index cols, Rng& rng) {
    if (cols > rows) throw DimensionError("haar_random_isometry: cols > rows");
    std::normal_distribution<double> g(0.0, 1.0);
    MatrixXcd a(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) a(i, j) = Complex(g(rng), g(rng));
    Eigen::HouseholderQR<MatrixXcd> qr(a);
    MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(rows, cols);
    MatrixXcd r = qr.matrixQR().topLeftCorner(cols, cols).triangularView<Eigen::Upper>();
    for (Index j = 0; j < cols; ++j) {
        Complex d = r(j, j);
        q.col(j) *= (std::abs(d) > 0) ? d / std::abs(d) : Complex(1, 0);
    }
    return Operator(std::move(q), Dims{rows}, Dims{cols});
}

StateVector epr_state(Index d) {
    if (d < 1) throw DimensionError("epr_state: d >= 1 required");
    VectorXcd v = VectorXcd::Zero(d * d);
    for (Index a = 0; a < d; ++a) v(a * d + a) = 1.0 / std::sqrt(double(d));
    return StateVector(std::move(v), Dims{d, d});
}

SVDResult svd(const MatrixXcd& m) {
    Eigen::BDCSVD<MatrixXcd> s(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return SVDResult{s.singularValues(), s.matrixU(), s.matrixV()};
}

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
    MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

MatrixXcd embed(const MatrixXcd& u, const std::vector<Index>& targets, const Dims& dims) {
    const Index n = Index(dims.size());
    const Index full = dim_product(dims);
    Index td = 1;
    for (Index t : targets) {
        if (t < 0 || t >= n) throw DimensionError("embed: target out of range");
        td *= dims[t];
    }
    if (u.rows() != td || u.cols() != td) throw DimensionError("embed: gate shape mismatch");

    std::vector<Index> stride(n, 1);
    for (Index k = n - 2; k >= 0; --k) stride[k] = stride[k + 1] * dims[k + 1];
    std::vector<Index> tstride(targets.size(), 1);
    for (Index k = Index(targets.size()) - 2; k >= 0; --k)
        tstride[k] = tstride[k + 1] * dims[targets[k + 1]];

    MatrixXcd out = MatrixXcd::Zero(full, full);
    for (Index col = 0; col < full; ++col) {
        // decompose col into target part and rest
        Index tcol = 0, rest = col;
        std::vector<Index> tidx(targets.size());
        for (size_t k = 0; k < targets.size(); ++k) {
            Index s = stride[targets[k]];
            tidx[k] = (col / s) % dims[targets[k]];
            tcol += tidx[k] * tstride[k];
            rest -= tidx[k] * s;
        }
        for (Index trow = 0; trow < td; ++trow) {
            Complex v = u(trow, tcol);
            if (v == Complex(0, 0)) continue;
            Index row = rest, rr = trow;
            for (size_t k = targets.size(); k-- > 0;) {
                Index digit = rr % dims[targets[k]];
                rr /= dims[targets[k]];
                row += digit * stride[targets[k]];
            }
            out(row, col) += v;
        }
    }
    return out;
}

Projector basis_projector(Index n_qubits, const std::vector<Index>& which,
                          const std::vector<int>& bits) {
    if (which.size() != bits.size())
        throw DimensionError("basis_projector: which/bits length mismatch");
    const Index dim = Index(1) << n_qubits;
    VectorXd diag = VectorXd::Ones(dim);
    for (Index i = 0; i < dim; ++i) {
        for (size_t k = 0; k < which.size(); ++k) {
            int bit = int((i >> (n_qubits - 1 - which[k])) & 1);
            if (bit != bits[k]) { diag(i) = 0; break; }
        }
    }
    Index rank = Index(std::lround(diag.sum()));
    Dims dims(n_qubits, 2);
    return Projector(Operator(diag.cast<Complex>().asDiagonal(), dims), rank);
}

Projector state_projector(const StateVector& psi) {
    return Projector(Operator(density_matrix(psi), psi.dims()), 1);
}

StateVector random_state(Index dim, Rng& rng, Dims dims) {
    std::normal_distribution<double> g(0.0, 1.0);
    VectorXcd v(dim);
    for (Index i = 0; i < dim; ++i) v(i) = Complex(g(rng), g(rng));
    v /= v.norm();
    if (dims.empty()) dims = Dims{dim};
    return StateVector(std::move(v), std::move(dims));
}

}  // namespace qps
