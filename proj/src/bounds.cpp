/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "qps/bounds.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace qps {

std::string bound_csv_header() { return "check,bound,measured,margin,satisfied"; }

std::string bound_csv_row(const BoundCheckResult& r) {
    std::ostringstream os;
    os.precision(12);
    os << r.name << "," << r.bound_value << "," << r.measured_value << "," << r.margin << ","
       << (r.satisfied ? "pass" : "fail");
    return os.str();
}

Operator average_projector(const StateVector& psi, double p_m, Index d_m, Index dim) {
    if (dim < 2) throw DomainError("average_projector: dimension must exceed 1");
    if (psi.dim() != dim) throw DimensionError("average_projector: state/dimension mismatch");
    if (!(p_m > 0 && p_m <= 1.0) || d_m < 1 || d_m >= dim)
        throw DomainError("average_projector: parameters out of range");
    const double dd = double(dim), dm = double(d_m);
    MatrixXcd out = MatrixXcd::Identity(dim, dim) * ((dm - p_m) / (dd - 1.0));
    out += ((dd * p_m - dm) / (dd - 1.0)) * psi.amplitudes() * psi.amplitudes().adjoint();
    return Operator(std::move(out), psi.dims(), psi.dims());
}

std::vector<GroverScalingRow> grover_scaling_experiment(const std::vector<double>& p_m_grid,
                                                        double epsilon) {
    std::vector<GroverScalingRow> table;
    for (double p : p_m_grid) {
        if (!(p > 0 && p < 1)) throw DomainError("grover_scaling_experiment: p_m out of (0,1)");
        // two-dimensional invariant subspace {target, orthogonal complement}
        Eigen::Vector2d s0(std::sqrt(p), std::sqrt(1.0 - p)), s = s0;
        Eigen::Matrix2d reflect_target, reflect_init;
        reflect_target << -1, 0, 0, 1;
        reflect_init = 2.0 * s0 * s0.transpose() - Eigen::Matrix2d::Identity();
        int k = 0;
        const int cap = 2000000;
        while (s(0) * s(0) < 1.0 - epsilon && k < cap) {
            s = reflect_init * (reflect_target * s);
            ++k;
        }
        if (k >= cap) throw CapacityError("grover_scaling_experiment: iteration cap reached");
        table.push_back({p, k});
    }
    return table;
}

namespace {

// branch weights of the Delta_1 / Delta_2 expansion; they sum to one
std::vector<double> expansion_weights(const BranchSpectrum& s, const std::string& which) {
    std::vector<double> w(s.p_am.size());
    const double dr = double(s.d_r);
    for (size_t i = 0; i < w.size(); ++i)
        w[i] = which == "mixed" ? s.p_am[i] / (dr * s.p_m) : 1.0 / dr;
    return w;
}

}  // namespace

double perturbed_fidelity(const BranchSpectrum& s, const std::vector<double>& deltas,
                          const std::string& which) {
    if (deltas.size() != s.p_am.size())
        throw DimensionError("perturbed_fidelity: one delta per branch required");
    // the threshold p* cancels in the fidelity ratio for both transformations
    double num = 0, den = 0;
    for (size_t i = 0; i < deltas.size(); ++i) {
        double g = 1.0 + deltas[i];
        double scale = which == "mixed" ? s.p_am[i] : 1.0;
        num += scale * g;
        den += scale * g * g;
    }
    double dr = double(s.d_r);
    double norm = which == "mixed" ? dr * s.p_m : dr;
    return num * num / (norm * den);
}

std::vector<double> worst_case_deltas(const BranchSpectrum& s, double delta_max,
                                      const std::string& which) {
    // minimizing fidelity means Delta_1 = -Delta_2 with Delta_2 maximal; put
    // every branch at +-delta_max and tune a single branch to land exactly on
    // the stationary line
    std::vector<double> w = expansion_weights(s, which);
    const size_t n = w.size();
    std::vector<double> best(n, 0.0);
    double best_d2 = 0.0;
    for (size_t split = 0; split <= n; ++split) {
        for (size_t free = 0; free < n; ++free) {
            std::vector<double> d(n);
            double a = 0, b = 0;
            for (size_t i = 0; i < n; ++i) {
                d[i] = i < split ? -delta_max : delta_max;
                if (i == free) continue;
                a += w[i] * d[i];
                b += w[i] * d[i] * d[i];
            }
            // solve w_f v^2 + w_f v + (a + b) = 0 for the free branch
            double disc = 1.0 - 4.0 * (a + b) / w[free];
            if (disc < 0) continue;
            for (double sgn : {-1.0, 1.0}) {
                double v = 0.5 * (-1.0 + sgn * std::sqrt(disc));
                if (std::abs(v) > delta_max) continue;
                double d2 = b + w[free] * v * v;
                if (d2 > best_d2) {
                    best_d2 = d2;
                    best = d;
                    best[free] = v;
                }
            }
        }
    }
    return best;
}

BoundCheckResult multiplicative_error_fidelity_check(const BranchSpectrum& spectrum,
                                                     double delta_max, int trials,
                                                     const std::string& which,
                                                     std::uint64_t seed) {
    if (!(delta_max >= 0 && delta_max < 1))
        throw DomainError("multiplicative_error_fidelity_check: delta_max out of [0,1)");
    if (which != "mixed" && which != "teleport")
        throw DomainError("multiplicative_error_fidelity_check: unknown task");
    const size_t n = spectrum.p_am.size();
    Rng rng = split_rng(seed, 0);
    std::uniform_real_distribution<double> u(-delta_max, delta_max);

    double worst = 1.0;
    auto consider = [&](const std::vector<double>& d) {
        worst = std::min(worst, perturbed_fidelity(spectrum, d, which));
    };
    consider(std::vector<double>(n, delta_max));
    consider(std::vector<double>(n, -delta_max));
    std::vector<double> alt(n);
    for (size_t i = 0; i < n; ++i) alt[i] = (i % 2 == 0) ? delta_max : -delta_max;
    consider(alt);
    consider(worst_case_deltas(spectrum, delta_max, which));
    for (int t = 0; t < trials; ++t) {
        std::vector<double> d(n);
        for (double& x : d) x = u(rng);
        consider(d);
    }

    BoundCheckResult r{};
    r.name = "mult_error_fidelity_" + which;
    r.bound_value = 1.0 - delta_max * delta_max;
    r.measured_value = worst;
    r.lower_bound = true;
    r.margin = r.measured_value - r.bound_value;
    r.satisfied = r.margin >= -1e-9;
    return r;
}

double tail_bound_alpha(const BranchSpectrum& spectrum, double epsilon,
                        const std::string& which) {
    if (!(epsilon > 0 && epsilon < 1)) throw DomainError("tail_bound_alpha: epsilon out of (0,1)");
    const double dr = double(spectrum.d_r);
    if (which == "mixed") {
        // smallest threshold t with sum_{p > t} p <= eps d_R p_m; candidates
        // are the spectrum values themselves
        std::vector<double> q = spectrum.p_am;
        std::sort(q.begin(), q.end(), std::greater<double>());
        double budget = epsilon * dr * spectrum.p_m;
        double t = q.front();  // tail above p_max is empty, always admissible
        double run = 0;
        for (size_t i = 0; i < q.size(); ++i) {
            // tail strictly above q[i]
            run = 0;
            for (size_t j = 0; j < q.size(); ++j)
                if (q[j] > q[i]) run += q[j];
            if (run <= budget) t = q[i];
        }
        return t > 0 ? spectrum.p_m / t : 0.0;
    }
    if (which == "teleport") {
        std::vector<double> q = spectrum.p_am;
        std::sort(q.begin(), q.end());
        size_t k = size_t(std::floor(epsilon * dr));
        if (k >= q.size()) return 1.0 / spectrum.p_m;
        return q[k] / spectrum.p_m;
    }
    throw DomainError("tail_bound_alpha: unknown task");
}

BoundCheckResult tail_bound_check(const BranchSpectrum& spectrum, double epsilon,
                                  const std::string& which) {
    double alpha = tail_bound_alpha(spectrum, epsilon, which);
    BoundCheckResult r{};
    r.name = "tail_bound_" + which;
    r.lower_bound = true;
    if (alpha <= 0) {  // vacuous bound
        r.bound_value = 0;
        r.measured_value = 0;
        r.margin = 0;
        r.satisfied = true;
        return r;
    }
    double measured;
    // keep the branch sitting exactly at the cutoff on the admissible side of
    // the sharp transformation despite the alpha round trip
    if (which == "mixed") {
        double p_star = spectrum.p_m / alpha * (1.0 + 1e-12);
        measured = metrics(spectrum, SVTFunction::linear_amp_sharp(p_star)).p_qsvt;
    } else {
        double p_star = alpha * spectrum.p_m * (1.0 - 1e-12);
        measured = teleport_metrics(spectrum, SVTFunction::trunc_inverse_sharp(p_star)).p_qsvt;
    }
    r.bound_value = (1.0 - epsilon) * alpha;
    r.measured_value = measured;
    r.margin = measured - r.bound_value;
    r.satisfied = r.margin >= -1e-9;
    return r;
}

BoundCheckResult average_projector_mc_check(const StateVector& psi, double p_m, Index d_m,
                                            int samples, Rng& rng) {
    const Index dim = psi.dim();
    Operator closed = average_projector(psi, p_m, d_m, dim);
    if (samples < 1) throw DomainError("average_projector_mc_check: samples >= 1 required");
    if (d_m + 1 > dim)
        throw DimensionError("average_projector_mc_check: reference projector needs d_m + 1 dims");

    // frame with psi as the first column
    MatrixXcd a = MatrixXcd::Identity(dim, dim);
    a.col(0) = psi.amplitudes();
    Eigen::HouseholderQR<MatrixXcd> qr(a);
    MatrixXcd q = qr.householderQ();
    Complex ph = (q.col(0).adjoint() * psi.amplitudes())(0);
    q.col(0) *= ph;

    // reference projector with <psi|Pi|psi> = p_m: a tilted rank-1 block plus
    // d_m - 1 directions orthogonal to psi
    MatrixXcd pi0 = MatrixXcd::Zero(dim, dim);
    pi0(0, 0) = p_m;
    pi0(0, 1) = std::sqrt(p_m * (1.0 - p_m));
    pi0(1, 0) = pi0(0, 1);
    pi0(1, 1) = 1.0 - p_m;
    for (Index j = 1; j < d_m; ++j) pi0(j + 1, j + 1) = 1.0;

    MatrixXcd acc = MatrixXcd::Zero(dim, dim);
    MatrixXcd w = MatrixXcd::Zero(dim, dim);
    w(0, 0) = 1.0;
    for (int it = 0; it < samples; ++it) {
        w.block(1, 1, dim - 1, dim - 1) = haar_unitary(dim - 1, rng);
        acc += q * (w * pi0 * w.adjoint()) * q.adjoint();
    }
    acc /= double(samples);

    BoundCheckResult r{};
    r.name = "average_projector_mc";
    r.bound_value = 5.0 / std::sqrt(double(samples));
    r.measured_value = (acc - closed.matrix()).cwiseAbs().maxCoeff();
    r.lower_bound = false;
    r.margin = r.bound_value - r.measured_value;
    r.satisfied = r.margin >= 0;
    return r;
}

double grover_loglog_slope(const std::vector<GroverScalingRow>& table) {
    if (table.size() < 2) throw DimensionError("grover_loglog_slope: need at least two rows");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& row : table) {
        if (row.iterations < 1)
            throw DomainError("grover_loglog_slope: nonpositive iteration count");
        double x = std::log(row.p_m), y = std::log(double(row.iterations));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double n = double(table.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

BoundCheckResult aqec_bound_check(const BranchSpectrum& spectrum, double epsilon) {
    double dev = 0;
    for (double p : spectrum.p_am) dev += std::abs(p / spectrum.p_m - 1.0);
    dev /= 2.0 * double(spectrum.d_r);
    if (!(dev < epsilon && epsilon < 1))
        throw DomainError("aqec_bound_check: need deviation < epsilon < 1");
    BoundCheckResult r = tail_bound_check(spectrum, epsilon, "mixed");
    r.name = "aqec_corollary";
    r.bound_value = (1.0 - dev / epsilon) * (1.0 - epsilon);
    r.margin = r.measured_value - r.bound_value;
    r.satisfied = r.margin >= -1e-9;
    return r;
}

double uhlmann_oracle(const StateVector& joint, const Projector& pi_full, Index d_r) {
    if (joint.dims().empty() || joint.dims()[0] != d_r)
        throw DimensionError("uhlmann_oracle: leading subsystem must be the reference");
    VectorXcd post = pi_full.matrix() * joint.amplitudes();
    double pm = post.squaredNorm();
    if (pm < 1e-14) throw DomainError("uhlmann_oracle: outcome has vanishing probability");
    post /= std::sqrt(pm);
    Operator omega_r = partial_trace(StateVector(std::move(post), joint.dims()), {0});

    double direct = fidelity(MatrixXcd::Identity(d_r, d_r) / double(d_r), omega_r.matrix());
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(omega_r.matrix(), Eigen::EigenvaluesOnly);
    double root_sum = 0;
    for (Index i = 0; i < d_r; ++i) root_sum += std::sqrt(std::max(0.0, es.eigenvalues()(i)));
    double closed = root_sum * root_sum / double(d_r);
    if (std::abs(direct - closed) > 1e-9)
        throw DomainError("uhlmann_oracle: evaluation paths disagree");
    return closed;
}

}  // namespace qps
