/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef QPS_SVTFUN_HPP
#define QPS_SVTFUN_HPP

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qps/types.hpp"

namespace qps {

/// Odd polynomial stored as Chebyshev coefficients of T_1, T_3, ..., T_{2K+1}.
class OddPolynomial {
  public:
    explicit OddPolynomial(std::vector<double> odd_cheb_coeffs);

    int degree() const { return 2 * int(coeffs_.size()) - 1; }
    const std::vector<double>& odd_coefficients() const { return coeffs_; }

    double eval(double x) const;

    /// Max |P| over the standard certification grid on [-1, 1].
    double sup_norm() const;

    void scale(double s);

    /// Plain-text table: degree on the first line, odd-order coefficients one
    /// per line after it.
    void save(std::ostream& os) const;
    static OddPolynomial load(std::istream& is);

  private:
    std::vector<double> coeffs_;
};

enum class SVTKind {
    sign_approx,        // ideal sign(x) limit of FPAA
    linear_amp,         // clamp(x / sqrt(p*)) to [-1, 1]
    trunc_inverse,      // sqrt(p*)/x outside, x/sqrt(p*) inside
    chebyshev,          // T_d
    custom_odd_poly,
    linear_amp_sharp,   // x/sqrt(p*) inside, 0 outside  (tail-bound variant)
    trunc_inverse_sharp // sqrt(p*)/x outside, 0 inside  (tail-bound variant)
};

/// A target singular-value transformation: either an ideal piecewise form
/// parametrized by p* or an explicit odd polynomial.
struct SVTFunction {
    SVTKind kind = SVTKind::linear_amp;
    double p_star = 1.0;
    double delta = 0.0;
    std::vector<double> coefficients;  // odd Chebyshev coeffs for poly kinds

    static SVTFunction sign_approx(double p_star);
    static SVTFunction linear_amp(double p_star);
    static SVTFunction trunc_inverse(double p_star);
    static SVTFunction linear_amp_sharp(double p_star);
    static SVTFunction trunc_inverse_sharp(double p_star);
    static SVTFunction chebyshev(int order);
    static SVTFunction from_polynomial(const OddPolynomial& p);

    double eval(double x) const;
};

inline constexpr int kDegreeCap = 2001;
inline constexpr int kGridPoints = 4096;

/// Chebyshev-distributed certification grid on (0, 1].
const std::vector<double>& cert_grid();

/// Approximate-sign polynomial: |P| <= 1 on [-1,1] and 1 - P(x) <= delta on
/// [sqrt(p*), 1]. Built from a truncated Chebyshev expansion of erf(k x).
OddPolynomial fpaa_polynomial(double p_star, double delta);

/// Linear-amplification polynomial: |P(x) sqrt(p*)/x - 1| <= delta_mult on
/// (0, sqrt(p*)], |P| <= 1 on [-1,1].
OddPolynomial laa_polynomial(double p_star, double delta_mult);

/// Truncated-inverse polynomial: multiplicative deviation from sqrt(p*)/x at
/// most delta_mult on [sqrt(p*), sqrt(p_max)], |P| <= 1 on [-1,1].
OddPolynomial inverse_polynomial(double p_star, double p_max, double delta_mult);

/// Odd Chebyshev coefficients of f up to the given odd degree, via
/// Gauss-Chebyshev quadrature. Exact (to roundoff) when f is an odd
/// polynomial of degree <= the requested degree.
OddPolynomial odd_cheb_project(const std::function<double(double)>& f, int degree);

/// Max over the grid restricted to [lo, hi] of |poly(x)/target(x) - 1|.
double multiplicative_error(const OddPolynomial& poly, const SVTFunction& target,
                            double lo, double hi);

}  // namespace qps

#endif
