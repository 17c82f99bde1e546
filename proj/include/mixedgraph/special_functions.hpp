#pragma once

#include <limits>

namespace mixedgraph {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Standard normal density (2*pi)^{-1/2} exp(-x^2/2).
double std_normal_pdf(double x);

/// Standard normal distribution function, erfc-based.
double std_normal_cdf(double x);

/// Standard normal quantile. Rational initial guess refined by Halley
/// steps against std_normal_cdf; |cdf(quantile(p)) - p| stays below 1e-14.
/// Throws ValidationError for p outside (0,1).
double std_normal_quantile(double p);

/// Arguments of the bivariate normal CDF P(Z1 <= h, Z2 <= k) with
/// correlation rho. Infinite h/k are legal and short-circuited.
struct BvnParams {
    double h;
    double k;
    double rho;
};

/// Bivariate normal CDF. Gauss-Legendre quadrature over the
/// Drezner-Wesolowsky single-integral form, switching representations at
/// |rho| = 0.925; rho within 1e-12 of +-1 is resolved analytically.
/// Throws ValidationError on NaN input or |rho| > 1.
double bvn_cdf(const BvnParams& p);

/// Standard bivariate normal density; 0 when either argument is infinite.
double bvn_pdf(double h, double k, double rho);

}  // namespace mixedgraph
