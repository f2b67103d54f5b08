/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "qps/svtfun.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>

namespace qps {

OddPolynomial::OddPolynomial(std::vector<double> odd_cheb_coeffs)
    : coeffs_(std::move(odd_cheb_coeffs)) {
    if (coeffs_.empty()) throw DomainError("OddPolynomial: empty coefficient list");
}

double OddPolynomial::eval(double x) const {
    // recurrence over all orders, accumulating odd terms only
    double tkm1 = 1.0, tk = x, acc = coeffs_[0] * x;
    int order = 1;
    for (size_t j = 1; j < coeffs_.size(); ++j) {
        // advance from T_order to T_{order+2}
        for (int s = 0; s < 2; ++s) {
            double tkp1 = 2.0 * x * tk - tkm1;
            tkm1 = tk;
            tk = tkp1;
            ++order;
        }
        acc += coeffs_[j] * tk;
    }
    return acc;
}

const std::vector<double>& cert_grid() {
    static const std::vector<double> grid = [] {
        std::vector<double> g(kGridPoints);
        for (int j = 0; j < kGridPoints; ++j)
            g[j] = std::cos((2.0 * j + 1.0) * M_PI / (4.0 * kGridPoints));  // (0, 1)
        g.push_back(1.0);
        std::sort(g.begin(), g.end());
        return g;
    }();
    return grid;
}

double OddPolynomial::sup_norm() const {
    double m = 0;
    for (double x : cert_grid()) m = std::max(m, std::abs(eval(x)));
    return m;  // odd symmetry covers [-1, 0)
}

void OddPolynomial::scale(double s) {
    for (double& c : coeffs_) c *= s;
}

void OddPolynomial::save(std::ostream& os) const {
    os << degree() << "\n";
    os.precision(17);
    for (double c : coeffs_) os << c << "\n";
}

OddPolynomial OddPolynomial::load(std::istream& is) {
    int deg = 0;
    is >> deg;
    if (!is || deg < 1 || deg % 2 == 0 || deg > kDegreeCap)
        throw DomainError("OddPolynomial::load: bad degree");
    std::vector<double> c((deg + 1) / 2);
    for (double& v : c) is >> v;
    if (!is) throw DomainError("OddPolynomial::load: truncated table");
    return OddPolynomial(std::move(c));
}

SVTFunction SVTFunction::sign_approx(double p) { return {SVTKind::sign_approx, p, 0, {}}; }
SVTFunction SVTFunction::linear_amp(double p) { return {SVTKind::linear_amp, p, 0, {}}; }
SVTFunction SVTFunction::trunc_inverse(double p) { return {SVTKind::trunc_inverse, p, 0, {}}; }
SVTFunction SVTFunction::linear_amp_sharp(double p) {
    return {SVTKind::linear_amp_sharp, p, 0, {}};
}
SVTFunction SVTFunction::trunc_inverse_sharp(double p) {
    return {SVTKind::trunc_inverse_sharp, p, 0, {}};
}
SVTFunction SVTFunction::chebyshev(int order) {
    if (order < 1 || order % 2 == 0) throw DomainError("chebyshev: odd order required");
    std::vector<double> c((order + 1) / 2, 0.0);
    c.back() = 1.0;
    return {SVTKind::chebyshev, 1.0, 0, std::move(c)};
}
SVTFunction SVTFunction::from_polynomial(const OddPolynomial& p) {
    return {SVTKind::custom_odd_poly, 1.0, 0, p.odd_coefficients()};
}

double SVTFunction::eval(double x) const {
    if (std::abs(x) > 1.0 + 1e-12) throw DomainError("SVTFunction::eval: |x| > 1");
    x = std::clamp(x, -1.0, 1.0);
    const double sp = std::sqrt(p_star);
    switch (kind) {
        case SVTKind::sign_approx:
            return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0);
        case SVTKind::linear_amp:
            return std::clamp(x / sp, -1.0, 1.0);
        case SVTKind::trunc_inverse:
            return std::abs(x) > sp ? sp / x : x / sp;
        case SVTKind::linear_amp_sharp:
            return std::abs(x) <= sp ? x / sp : 0.0;
        case SVTKind::trunc_inverse_sharp:
            return std::abs(x) >= sp ? sp / x : 0.0;
        case SVTKind::chebyshev:
        case SVTKind::custom_odd_poly:
            return OddPolynomial(coefficients).eval(x);
    }
    return 0.0;
}

namespace {

double erfinv(double y) {
    // Newton iteration on erf; adequate for y well inside (-1, 1)
    double x = 0.0;
    for (int it = 0; it < 60; ++it) {
        double f = std::erf(x) - y;
        double d = 2.0 / std::sqrt(M_PI) * std::exp(-x * x);
        double step = f / d;
        x -= step;
        if (std::abs(step) < 1e-15) break;
    }
    return x;
}

// Chebyshev coefficients of an odd function on [-1,1] via Gauss-Chebyshev
// quadrature with n nodes; returns coefficients of T_1, T_3, ..., up to degree.
std::vector<double> odd_cheb_transform(const std::function<double(double)>& f, int degree) {
    const int n = 8192;
    std::vector<double> theta(n), fv(n);
    for (int j = 0; j < n; ++j) {
        theta[j] = (2.0 * j + 1.0) * M_PI / (2.0 * n);
        fv[j] = f(std::cos(theta[j]));
    }
    std::vector<double> out;
    for (int k = 1; k <= degree; k += 2) {
        double s = 0;
        for (int j = 0; j < n; ++j) s += fv[j] * std::cos(k * theta[j]);
        out.push_back(2.0 * s / n);
    }
    return out;
}

}  // namespace

OddPolynomial odd_cheb_project(const std::function<double(double)>& f, int degree) {
    if (degree < 1 || degree % 2 == 0) throw DomainError("odd_cheb_project: odd degree required");
    return OddPolynomial(odd_cheb_transform(f, degree));
}

namespace {

// One constraint |a*P(x) - b| <= m of the minimax fit; feasible when the
// largest scaled residual is at most 1.
struct FitRow {
    double x;
    double a;
    double b;
    double m;
};

// Constrained Chebyshev fit by Lawson iteration: weighted least squares with
// weights multiplied by the scaled residuals each round, converging to the
// minimax solution over the rows. A plain least-squares fit leaves a bump
// above the amplification threshold that violates the |P| <= 1 cap, and
// smooth surrogate targets cannot reach the minimax degree, so the
// equalizing iteration is what makes tight tolerances affordable.
OddPolynomial lawson_fit(const std::vector<FitRow>& rows, int degree, bool& feasible) {
    const int ncoef = (degree + 1) / 2;
    Eigen::MatrixXd basis(rows.size(), ncoef);
    for (size_t i = 0; i < rows.size(); ++i) {
        double tkm1 = 1.0, tk = rows[i].x;
        for (int j = 0; j < ncoef; ++j) {
            basis(i, j) = rows[i].a * tk / rows[i].m;
            for (int s = 0; s < 2 && j + 1 < ncoef; ++s) {
                double tkp1 = 2.0 * rows[i].x * tk - tkm1;
                tkm1 = tk;
                tk = tkp1;
            }
        }
    }
    Eigen::VectorXd target(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) target(i) = rows[i].b / rows[i].m;

    Eigen::VectorXd w = Eigen::VectorXd::Ones(rows.size());
    Eigen::VectorXd best_c = Eigen::VectorXd::Zero(ncoef);
    double best_r = std::numeric_limits<double>::infinity();
    double window_r = best_r;
    for (int it = 0; it < 150; ++it) {
        Eigen::VectorXd sw = w.cwiseSqrt();
        Eigen::VectorXd c = (sw.asDiagonal() * basis)
                                .colPivHouseholderQr()
                                .solve(sw.asDiagonal() * target);
        Eigen::VectorXd res = (basis * c - target).cwiseAbs();
        double rmax = res.maxCoeff();
        if (rmax < best_r) {
            best_r = rmax;
            best_c = c;
        }
        if (best_r <= 0.9995) break;
        // plateau check every 20 rounds; convergence is linear and can be
        // slow, so judge progress relative to the level reached
        if (it % 20 == 19) {
            if (best_r > window_r * (1.0 - 2e-3)) break;
            window_r = best_r;
        }
        w = w.cwiseProduct(res.array().max(1e-14).matrix());
        w /= w.sum();
    }
    feasible = best_r <= 1.0;
    return OddPolynomial(std::vector<double>(best_c.data(), best_c.data() + ncoef));
}

// Chebyshev-distributed abscissas on [lo, hi], open at the ends.
void push_rows(std::vector<FitRow>& rows, double lo, double hi, int n, double thresh,
               bool inverse_side, double amp, double margin) {
    if (hi - lo < 1e-12) n = 1;  // point interval: one row, duplicates stall Lawson
    for (int j = 0; j < n; ++j) {
        double t = std::cos((2.0 * j + 1.0) * M_PI / (2.0 * n));
        double x = lo + (hi - lo) * 0.5 * (t + 1.0);
        if (x < 1e-8) continue;
        if (margin > 0)
            rows.push_back({x, inverse_side ? x / thresh : thresh / x, amp, margin});
        else
            rows.push_back({x, 1.0, 0.0, 1.0});  // cap row |P| <= 1
    }
}

}  // namespace

OddPolynomial fpaa_polynomial(double p_star, double delta) {
    if (!(p_star > 0 && p_star < 1) || !(delta > 0 && delta < 1))
        throw DomainError("fpaa_polynomial: parameters out of range");
    const double sp = std::sqrt(p_star);
    const double k = erfinv(1.0 - delta / 2.0) / sp;
    auto target = [k](double x) { return std::erf(k * x); };

    int d0 = int(std::ceil(std::log(2.0 / delta) / sp));
    if (d0 % 2 == 0) ++d0;
    for (int d = d0; d <= kDegreeCap; d += 2) {
        OddPolynomial p(odd_cheb_transform(target, d));
        // keep a small amplitude margin; phase solving degenerates at sup = 1
        double sup = p.sup_norm();
        if (sup > 1.0 - 1e-6) p.scale((1.0 - 1e-6) / sup);
        // certify condition (2) on [sqrt(p*), 1]
        bool ok = true;
        for (double x : cert_grid()) {
            if (x < sp) continue;
            if (1.0 - p.eval(x) > delta) { ok = false; break; }
        }
        if (ok) return p;
    }
    throw CapacityError("fpaa_polynomial: degree cap reached");
}

OddPolynomial laa_polynomial(double p_star, double delta_mult) {
    if (!(p_star > 0 && p_star < 1) || !(delta_mult > 0 && delta_mult < 1))
        throw DomainError("laa_polynomial: parameters out of range");
    const double sp = std::sqrt(p_star);
    const double amp = 1.0 - delta_mult / 2.0;

    // empirical degree law for the constrained minimax problem; start a bit
    // under and escalate
    int d = int(std::ceil(0.36 / sp * std::pow(delta_mult, -0.79))) | 1;
    d = std::max(d, 11);
    for (; d <= kDegreeCap; d = std::min((5 * d / 4) | 1, kDegreeCap)) {
        int n = std::max(d, 64);
        std::vector<FitRow> rows;
        push_rows(rows, 0.0, sp, n, sp, false, amp, delta_mult / 2.0);
        push_rows(rows, sp, 1.0, n, sp, false, 0.0, 0.0);
        bool feasible = false;
        OddPolynomial p = lawson_fit(rows, d, feasible);
        if (feasible && p.sup_norm() <= 1.0 &&
            multiplicative_error(p, SVTFunction::linear_amp(p_star), 1e-6, sp) <= delta_mult)
            return p;
        if (d >= kDegreeCap) break;
    }
    throw CapacityError("laa_polynomial: degree cap reached");
}

OddPolynomial inverse_polynomial(double p_star, double p_max, double delta_mult) {
    if (!(p_star > 0 && p_star <= p_max && p_max <= 1.0) || !(delta_mult > 0 && delta_mult < 1))
        throw DomainError("inverse_polynomial: parameters out of range");
    const double sp = std::sqrt(p_star), spm = std::sqrt(p_max);
    const double amp = 1.0 - delta_mult / 2.0;

    // mirror of laa_polynomial: the kink now sits at sqrt(p*) from below;
    // narrow target intervals need much less degree, scale the start down
    double width_fac = std::min(1.0, (spm - sp) / std::max(1.0 - sp, 1e-12) + 0.05);
    int d = int(std::ceil(0.36 / sp * std::pow(delta_mult, -0.79) * width_fac)) | 1;
    d = std::max(d, 11);
    for (; d <= kDegreeCap; d = std::min((5 * d / 4) | 1, kDegreeCap)) {
        int n = std::max(d, 64);
        std::vector<FitRow> rows;
        push_rows(rows, sp, spm, n, sp, true, amp, delta_mult / 2.0);
        push_rows(rows, 0.0, sp, n, sp, true, 0.0, 0.0);
        if (spm < 1.0) push_rows(rows, spm, 1.0, n, sp, true, 0.0, 0.0);
        bool feasible = false;
        OddPolynomial p = lawson_fit(rows, d, feasible);
        if (feasible && p.sup_norm() <= 1.0 &&
            multiplicative_error(p, SVTFunction::trunc_inverse(p_star), sp, spm) <= delta_mult)
            return p;
        if (d >= kDegreeCap) break;
    }
    throw CapacityError("inverse_polynomial: degree cap reached");
}

double multiplicative_error(const OddPolynomial& poly, const SVTFunction& target,
                            double lo, double hi) {
    if (!(lo > 0 && hi <= 1.0 && lo <= hi))
        throw DomainError("multiplicative_error: interval must lie in (0, 1]");
    double m = 0;
    bool any = false;
    for (double x : cert_grid()) {
        if (x < lo || x > hi) continue;
        double t = target.eval(x);
        if (t == 0.0) throw DomainError("multiplicative_error: target vanishes on interval");
        m = std::max(m, std::abs(poly.eval(x) / t - 1.0));
        any = true;
    }
    if (!any) {
        double t = target.eval(lo);
        if (t == 0.0) throw DomainError("multiplicative_error: target vanishes on interval");
        m = std::abs(poly.eval(lo) / t - 1.0);
    }
    return m;
}

}  // namespace qps
