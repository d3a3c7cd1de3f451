#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace cbitcl {

using complex = std::complex<double>;

struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct admissibility_error : std::domain_error {
    using std::domain_error::domain_error;
};

inline constexpr double inf = std::numeric_limits<double>::infinity();

// Gamma on the negative non-integer axis via the reflection formula,
// Gamma(-a) = -pi / (sin(pi a) * Gamma(1 + a)).
inline double gamma_negative(double a) {
    if (a <= 0.0 || a == std::floor(a))
        throw std::domain_error("gamma_negative: need non-integer a > 0");
    return -M_PI / (std::sin(M_PI * a) * std::tgamma(1.0 + a));
}

// (e^w - 1 - w) / w^2 without cancellation near w = 0.
inline complex expm1m_over_w2(complex w) {
    if (std::abs(w) < 0.5) {
        // sum_{n>=0} w^n / (n+2)!
        complex sum(0.0, 0.0), term(0.5, 0.0);
        for (int n = 0; n < 18; ++n) {
            sum += term;
            term *= w / static_cast<double>(n + 3);
        }
        return sum;
    }
    return (std::exp(w) - 1.0 - w) / (w * w);
}

inline double expm1m_over_w2(double w) {
    if (std::abs(w) < 0.5) {
        double sum = 0.0, term = 0.5;
        for (int n = 0; n < 18; ++n) {
            sum += term;
            term *= w / static_cast<double>(n + 3);
        }
        return sum;
    }
    return (std::expm1(w) - w) / (w * w);
}

inline double norm_cdf(double x) {
    return 0.5 * std::erfc(-x * M_SQRT1_2);
}

inline double norm_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

// Inverse standard normal CDF: Acklam rational approximation plus one
// Halley refinement, ~1e-15 absolute over (0,1).
inline double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("norm_quantile: p must be in (0,1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    double x;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double e = norm_cdf(x) - p;
    double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

inline std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t h = 1469598103934665603ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t fnv1a64(const std::string& s, std::uint64_t h = 1469598103934665603ull) {
    return fnv1a64(s.data(), s.size(), h);
}

}  // namespace cbitcl
