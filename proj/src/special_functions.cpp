#include "mixedgraph/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mixedgraph/errors.hpp"

namespace mixedgraph {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;  // (2*pi)^{-1/2}

// Rational approximation (Acklam) used as the quantile starting point.
double quantile_guess(double p) {
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Genz-style survival probability P(X > dh, Y > dk) for finite arguments
// and |r| strictly inside (-1, 1).
double bvn_upper(double dh, double dk, double r) {
    // Gauss-Legendre nodes/weights on [-1,1]: 6-, 12- and 20-point rules
    // stored as half rules, mirrored in the loops.
    static const double w6[3] = {0.1713244923791705, 0.3607615730481384,
                                 0.4679139345726904};
    static const double x6[3] = {0.9324695142031522, 0.6612093864662647,
                                 0.2386191860831970};
    static const double w12[6] = {0.04717533638651177, 0.1069393259953183,
                                  0.1600783285433464,  0.2031674267230659,
                                  0.2334925365383547,  0.2491470458134029};
    static const double x12[6] = {0.9815606342467191, 0.9041172563704750,
                                  0.7699026741943050, 0.5873179542866171,
                                  0.3678314989981802, 0.1252334085114692};
    static const double w20[10] = {0.01761400713915212, 0.04060142980038694,
                                   0.06267204833410906, 0.08327674157670475,
                                   0.1019301198172404,  0.1181945319615184,
                                   0.1316886384491766,  0.1420961093183821,
                                   0.1491729864726037,  0.1527533871307259};
    static const double x20[10] = {0.9931285991850949,  0.9639719272779138,
                                   0.9122344282513259,  0.8391169718222188,
                                   0.7463319064601508,  0.6360536807265150,
                                   0.5108670019508271,  0.3737060887154196,
                                   0.2277858511416451,  0.07652652113349733};

    const double* w = w20;
    const double* x = x20;
    int lg = 10;
    if (std::fabs(r) < 0.3) {
        w = w6;
        x = x6;
        lg = 3;
    } else if (std::fabs(r) < 0.75) {
        w = w12;
        x = x12;
        lg = 6;
    }

    double h = dh;
    double k = dk;
    double hk = h * k;
    double bvn = 0.0;

    if (std::fabs(r) < 0.925) {
        if (std::fabs(r) > 0.0) {
            double hs = (h * h + k * k) / 2.0;
            double asr = std::asin(r);
            for (int i = 0; i < lg; ++i) {
                for (int is = -1; is <= 1; is += 2) {
                    double sn = std::sin(asr * (is * x[i] + 1.0) / 2.0);
                    bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
                }
            }
            bvn = bvn * asr / (2.0 * kTwoPi);
        }
        bvn += std_normal_cdf(-h) * std_normal_cdf(-k);
    } else {
        if (r < 0.0) {
            k = -k;
            hk = -hk;
        }
        double as = (1.0 - r) * (1.0 + r);
        double a = std::sqrt(as);
        double bs = (h - k) * (h - k);
        double c = (4.0 - hk) / 8.0;
        double d = (12.0 - hk) / 16.0;
        double asr = -(bs / as + hk) / 2.0;
        if (asr > -100.0) {
            bvn = a * std::exp(asr) *
                  (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 +
                   c * d * as * as / 5.0);
        }
        if (-hk < 100.0) {
            double b = std::sqrt(bs);
            bvn -= std::exp(-hk / 2.0) * std::sqrt(kTwoPi) *
                   std_normal_cdf(-b / a) * b *
                   (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
        }
        a /= 2.0;
        for (int i = 0; i < lg; ++i) {
            for (int is = -1; is <= 1; is += 2) {
                double xs = a * (is * x[i] + 1.0);
                xs *= xs;
                double rs = std::sqrt(1.0 - xs);
                double asr1 = -(bs / xs + hk) / 2.0;
                if (asr1 > -100.0) {
                    bvn += a * w[i] * std::exp(asr1) *
                           (std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs -
                            (1.0 + c * xs * (1.0 + d * xs)));
                }
            }
        }
        bvn = -bvn / kTwoPi;
        if (r > 0.0) {
            bvn += std_normal_cdf(-std::max(h, k));
        } else {
            bvn = -bvn;
            if (k > h) {
                if (h < 0.0) {
                    bvn += std_normal_cdf(k) - std_normal_cdf(h);
                } else {
                    bvn += std_normal_cdf(-h) - std_normal_cdf(-k);
                }
            }
        }
    }
    return std::clamp(bvn, 0.0, 1.0);
}

}  // namespace

double std_normal_pdf(double x) {
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double std_normal_cdf(double x) {
    return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0);
}

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw ValidationError("std_normal_quantile: p must lie in (0,1)");
    }
    double x = quantile_guess(p);
    // Two Halley refinements against the erfc-based CDF.
    for (int it = 0; it < 2; ++it) {
        double e = std_normal_cdf(x) - p;
        double u = e / std_normal_pdf(x);
        x -= u / (1.0 + x * u / 2.0);
    }
    return x;
}

double bvn_cdf(const BvnParams& p) {
    if (std::isnan(p.h) || std::isnan(p.k) || std::isnan(p.rho)) {
        throw ValidationError("bvn_cdf: NaN argument");
    }
    if (std::fabs(p.rho) > 1.0) {
        throw ValidationError("bvn_cdf: |rho| > 1");
    }
    if (p.h == -kInf || p.k == -kInf) return 0.0;
    if (p.h == kInf && p.k == kInf) return 1.0;
    if (p.h == kInf) return std_normal_cdf(p.k);
    if (p.k == kInf) return std_normal_cdf(p.h);
    if (p.rho >= 1.0 - 1e-12) {
        return std_normal_cdf(std::min(p.h, p.k));
    }
    if (p.rho <= -1.0 + 1e-12) {
        return std::max(0.0, std_normal_cdf(p.h) + std_normal_cdf(p.k) - 1.0);
    }
    return bvn_upper(-p.h, -p.k, p.rho);
}

double bvn_pdf(double h, double k, double rho) {
    if (std::isinf(h) || std::isinf(k)) return 0.0;
    double om = 1.0 - rho * rho;
    return std::exp(-(h * h - 2.0 * rho * h * k + k * k) / (2.0 * om)) /
           (kTwoPi * std::sqrt(om));
}

}  // namespace mixedgraph
