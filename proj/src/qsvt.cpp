/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "qps/qsvt.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

namespace qps {

MatrixXcd pi_phi(const Projector& pi, double phi) {
    const Index d = pi.dim();
    Complex ep(std::cos(phi), std::sin(phi));
    return ep * pi.matrix() + std::conj(ep) * (MatrixXcd::Identity(d, d) - pi.matrix());
}

Operator pi_phi_gadget(const Projector& pi, double phi) {
    const Index d = pi.dim();
    MatrixXcd x2(2, 2), i2 = MatrixXcd::Identity(2, 2);
    x2 << 0, 1, 1, 0;
    MatrixXcd comp = MatrixXcd::Identity(d, d) - pi.matrix();
    MatrixXcd cnot = kron(pi.matrix(), x2) + kron(comp, i2);
    MatrixXcd rz(2, 2);
    rz << Complex(std::cos(phi), -std::sin(phi)), 0, 0, Complex(std::cos(phi), std::sin(phi));
    MatrixXcd g = cnot * kron(MatrixXcd::Identity(d, d), rz) * cnot;
    Dims dims = pi.op().row_dims();
    dims.push_back(2);
    return Operator(std::move(g), dims);
}

namespace {

using M2 = Eigen::Matrix2cd;

M2 refl(double x) {
    double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    M2 w;
    w << x, s, s, -x;
    return w;
}

M2 phase_factor(double phi, const M2& w) {
    M2 a = M2::Zero();
    a(0, 0) = Complex(std::cos(phi), std::sin(phi));
    a(1, 1) = std::conj(a(0, 0));
    return a * w;
}

}  // namespace

double qsp_model_re(const std::vector<double>& phases, double x) {
    M2 w = refl(x);
    M2 m = M2::Identity();
    for (double phi : phases) m = m * phase_factor(phi, w);
    return m(0, 0).real();
}

namespace {

// The optimization runs in the rotation (Wx) picture, where symmetric phase
// lists psi_0..psi_d (psi_j = psi_{d-j}) have a well-conditioned Jacobian and
// the all-but-endpoint-zero start (pi/4, 0, ..., 0, pi/4) is a good initial
// point. The circuit-convention phases are recovered algebraically at the end.
M2 wx_rot(double x) {
    double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    M2 w;
    w << Complex(x, 0), Complex(0, s), Complex(0, s), Complex(x, 0);
    return w;
}

M2 z_phase(double phi) {
    M2 a = M2::Zero();
    a(0, 0) = Complex(std::cos(phi), std::sin(phi));
    a(1, 1) = std::conj(a(0, 0));
    return a;
}

// Residuals (and Jacobian w.r.t. the free symmetric parameters theta_k,
// psi_k = psi_{d-k} = theta_k) of Re <0|e^{i psi_0 Z} prod W e^{i psi_j Z}|0>.
void wx_residuals(const std::vector<double>& theta, int d, const std::vector<double>& nodes,
                  const std::vector<double>& target, VectorXd& r, MatrixXd* jac) {
    const int m = int(theta.size());
    const int n = int(nodes.size());
    std::vector<double> psi(d + 1);
    for (int k = 0; k < m; ++k) psi[k] = psi[d - k] = theta[k];

    for (int i = 0; i < n; ++i) {
        M2 w = wx_rot(nodes[i]);
        std::vector<M2> f(d + 1);
        f[0] = z_phase(psi[0]);
        for (int j = 1; j <= d; ++j) f[j] = w * z_phase(psi[j]);

        std::vector<M2> suffix(d + 2);
        suffix[d + 1] = M2::Identity();
        for (int j = d; j >= 0; --j) suffix[j] = f[j] * suffix[j + 1];

        r(i) = suffix[0](0, 0).real() - target[i];
        if (!jac) continue;

        M2 z = M2::Zero();
        z(0, 0) = Complex(0, 1);
        z(1, 1) = Complex(0, -1);
        M2 prefix = M2::Identity();
        std::vector<double> dpsi(d + 1);
        for (int j = 0; j <= d; ++j) {
            M2 g = prefix * f[j] * z * suffix[j + 1];
            dpsi[j] = g(0, 0).real();
            prefix = prefix * f[j];
        }
        for (int k = 0; k < m; ++k)
            (*jac)(i, k) = (k == d - k) ? dpsi[k] : dpsi[k] + dpsi[d - k];
    }
}

}  // namespace

PhaseSequence solve_phases(const OddPolynomial& target, double tol) {
    const int d = target.degree();
    if (d > kDegreeCap) throw CapacityError("solve_phases: degree above cap");
    const int m = (d + 1) / 2;
    const int n = m;  // Chebyshev nodes, square system
    std::vector<double> nodes(n), tv(n);
    for (int i = 0; i < n; ++i) {
        nodes[i] = std::cos((2.0 * i + 1.0) * M_PI / (4.0 * n));
        tv[i] = target.eval(nodes[i]);
    }

    std::vector<double> theta(m, 0.0);
    theta[0] = M_PI / 4.0;
    VectorXd r(n);
    MatrixXd jac(n, m);
    wx_residuals(theta, d, nodes, tv, r, &jac);
    double cost = r.squaredNorm();

    double lambda = 1e-6;
    const int max_iter = 10000;
    for (int it = 0; it < max_iter && r.cwiseAbs().maxCoeff() > 1e-12; ++it) {
        MatrixXd h = jac.transpose() * jac;
        h.diagonal().array() += lambda;
        VectorXd step = h.ldlt().solve(-jac.transpose() * r);
        std::vector<double> trial = theta;
        for (int k = 0; k < m; ++k) trial[k] += step(k);
        VectorXd rt(n);
        wx_residuals(trial, d, nodes, tv, rt, nullptr);
        if (rt.squaredNorm() < cost) {
            theta = trial;
            cost = rt.squaredNorm();
            lambda = std::max(lambda / 3.0, 1e-15);
            wx_residuals(theta, d, nodes, tv, r, &jac);
        } else {
            lambda *= 10.0;
            if (lambda > 1e12) break;
        }
    }

    std::vector<double> psi(d + 1);
    for (int k = 0; k < m; ++k) psi[k] = psi[d - k] = theta[k];
    // convert to the circuit convention: a leading phase shift absorbs the
    // global phase mismatch between the two pictures
    std::vector<double> phi(d);
    phi[0] = M_PI / 2.0 - psi[0] - psi[d] - d * M_PI / 2.0;
    for (int j = 1; j < d; ++j) phi[j] = M_PI / 2.0 - psi[j];

    double res = 0.0;
    for (double x : cert_grid())
        res = std::max(res, std::abs(qsp_model_re(phi, x) - target.eval(x)));
    if (res > tol) throw SolverError("solve_phases: residual above tolerance", res);

    OddPolynomial realized =
        odd_cheb_project([&phi](double x) { return qsp_model_re(phi, x); }, d);
    return PhaseSequence{std::move(phi), std::move(realized), res};
}

void PhaseSequence::save(std::ostream& os) const {
    os << degree() << "\n";
    os.precision(17);
    for (double p : phases) os << p << "\n";
}

PhaseSequence PhaseSequence::load(std::istream& is) {
    int deg = 0;
    is >> deg;
    if (!is || deg < 1 || deg % 2 == 0 || deg > kDegreeCap)
        throw DomainError("PhaseSequence::load: bad degree");
    std::vector<double> phi(deg);
    for (double& p : phi) is >> p;
    if (!is) throw DomainError("PhaseSequence::load: truncated table");
    OddPolynomial realized =
        odd_cheb_project([&phi](double x) { return qsp_model_re(phi, x); }, deg);
    return PhaseSequence{std::move(phi), std::move(realized), 0.0};
}

MatrixXcd alternating_sequence(const BlockEncoding& block, const std::vector<double>& phases) {
    const int d = int(phases.size());
    if (d < 1 || d % 2 == 0)
        throw DomainError("alternating_sequence: odd phase count required");
    const MatrixXcd& u = block.unitary().matrix();
    MatrixXcd m = pi_phi(block.left_projector(), phases[0]) * u;
    for (int k = 1; k + 1 < d; k += 2) {
        m = m * pi_phi(block.right_projector(), phases[k]) * u.adjoint();
        m = m * pi_phi(block.left_projector(), phases[k + 1]) * u;
    }
    return m;
}

MatrixXcd apply_exact(const BlockEncoding& block, const SVTFunction& f) {
    SVDResult s = svd(block.encoded_matrix());
    const Index n = s.singular_values.size();
    MatrixXcd out = MatrixXcd::Zero(block.dim(), block.dim());
    for (Index i = 0; i < n; ++i) {
        double sv = s.singular_values(i);
        if (sv < 1e-13) continue;  // null space; odd transforms fix f(0) = 0
        out += f.eval(std::min(sv, 1.0)) * s.left_vectors.col(i) * s.right_vectors.col(i).adjoint();
    }
    return out;
}

MatrixXcd realized_block(const BlockEncoding& block, const std::vector<double>& phases,
                         bool real_part) {
    const MatrixXcd& pl = block.left_projector().matrix();
    const MatrixXcd& pr = block.right_projector().matrix();
    MatrixXcd b = pl * alternating_sequence(block, phases) * pr;
    if (!real_part) return b;
    std::vector<double> neg(phases.size());
    for (size_t j = 0; j < phases.size(); ++j) neg[j] = -phases[j];
    return 0.5 * (b + pl * alternating_sequence(block, neg) * pr);
}

QsvtRun::QsvtRun(BlockEncoding b, PhaseSequence p, bool real_part)
    : block(std::move(b)), phases(std::move(p)), use_real_part_gadget(real_part) {
    flag_projectors.emplace_back("left", block.left_projector());
    if (use_real_part_gadget) {
        MatrixXcd plus(2, 2);
        plus << 0.5, 0.5, 0.5, 0.5;
        flag_projectors.emplace_back("ancilla_plus", Projector(Operator(plus, Dims{2}), 1));
    }
}

std::pair<StateVector, double> run_with_flags(const QsvtRun& run, const StateVector& input) {
    const VectorXcd& psi = input.amplitudes();
    if (psi.size() != run.block.dim())
        throw DimensionError("run_with_flags: input dimension mismatch");
    if ((run.block.right_projector().matrix() * psi - psi).norm() > 1e-9)
        throw DomainError("run_with_flags: input outside the right projector support");
    MatrixXcd b = realized_block(run.block, run.phases.phases, run.use_real_part_gadget);
    VectorXcd v = b * psi;
    double p = v.squaredNorm();
    if (p < 1e-14) throw DomainError("run_with_flags: degenerate flag probability");
    v /= std::sqrt(p);
    return {StateVector(std::move(v), run.block.unitary().row_dims()), p};
}

}  // namespace qps
