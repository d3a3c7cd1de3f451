#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "cbitcl/numerics.hpp"

namespace cbitcl {

// Immigration jumps are fixed to the zero measure, so Psi(x) = beta * x
// with effective domain R.
struct ImmigrationParams {
    double beta = 0.0;
};

enum class BranchingJumps { none, tempered_stable };

// Branching mechanism
//   Phi(x) = -b x + (sigma x)^2 / 2 + int_0^inf (e^{xz} - 1 - xz) pi(dz),
// with pi either zero or the spectrally positive tempered stable measure
//   pi(dz) = eta^alpha / Gamma(-alpha) * z^{-1-alpha} e^{-(theta/eta) z} dz,
// which has the closed form
//   Phi(x) = -b x + (sigma x)^2/2 + (theta - eta x)^alpha - theta^alpha
//            + alpha theta^{alpha-1} eta x,   Re x <= theta/eta.
struct BranchingParams {
    double b = 0.0;
    double sigma = 0.0;
    BranchingJumps jump_family = BranchingJumps::none;
    double eta = 1.0;
    double theta = 0.0;
    double alpha = 1.5;
};

enum class LevyJumps { none, cgmy };

// Levy exponent of the base process L, fully compensated convention:
//   Xi(u) = drift u + gauss_vol^2 u^2 / 2 + int (e^{zu} - 1 - zu) gamma(dz),
// gamma either zero or the CGMY measure with C = 1/Gamma(-Y), giving
//   Xi(u) = drift u + gauss_vol^2 u^2/2 + (M-u)^Y - M^Y + (G+u)^Y - G^Y
//           + u Y (M^{Y-1} - G^{Y-1}),   Re u in [-G, M].
struct LevyParams {
    double drift = 0.0;
    double gauss_vol = 0.0;
    LevyJumps jump_family = LevyJumps::none;
    double g = 1.0;
    double m = 1.0;
    double y = 1.5;
};

struct CbitclParams {
    double x0 = 0.0;
    ImmigrationParams immigration;
    BranchingParams branching;
    LevyParams levy;
};

// Effective domains: dx_upper = sup D_X, [dz_lower, dz_upper] = D_Z.
struct DomainBounds {
    double dx_upper = inf;
    double dz_lower = -inf;
    double dz_upper = inf;
};

struct CompensatorCoeffs {
    double time_coeff = 0.0;  // Psi(zeta)
    double y_coeff = 0.0;     // Phi(zeta) + Xi(lambda)
};

inline void validate(const ImmigrationParams& p) {
    if (!(p.beta >= 0.0)) throw std::invalid_argument("immigration: beta must be >= 0");
}

inline void validate(const BranchingParams& p) {
    if (!std::isfinite(p.b) || !std::isfinite(p.sigma))
        throw std::invalid_argument("branching: b, sigma must be finite");
    if (p.jump_family == BranchingJumps::tempered_stable) {
        if (!(p.eta > 0.0)) throw std::invalid_argument("branching: eta must be > 0");
        if (!(p.theta >= 0.0)) throw std::invalid_argument("branching: theta must be >= 0");
        if (!(p.alpha > 1.0 && p.alpha < 2.0))
            throw std::invalid_argument("branching: alpha must be in (1,2)");
    }
}

inline void validate(const LevyParams& p) {
    if (!std::isfinite(p.drift)) throw std::invalid_argument("levy: drift must be finite");
    if (!(p.gauss_vol >= 0.0)) throw std::invalid_argument("levy: gauss_vol must be >= 0");
    if (p.jump_family == LevyJumps::cgmy) {
        if (!(p.g > 0.0 && p.m > 0.0)) throw std::invalid_argument("levy: G, M must be > 0");
        if (!(p.y > 1.0 && p.y < 2.0)) throw std::invalid_argument("levy: Y must be in (1,2)");
    }
}

inline void validate(const CbitclParams& p) {
    if (!(p.x0 >= 0.0)) throw std::invalid_argument("x0 must be >= 0");
    validate(p.immigration);
    validate(p.branching);
    validate(p.levy);
}

inline DomainBounds domains(const CbitclParams& p) {
    DomainBounds d;
    if (p.branching.jump_family == BranchingJumps::tempered_stable)
        d.dx_upper = p.branching.theta / p.branching.eta;
    if (p.levy.jump_family == LevyJumps::cgmy) {
        d.dz_lower = -p.levy.g;
        d.dz_upper = p.levy.m;
    }
    return d;
}

namespace detail {

// Principal-branch power with the base required to stay in the closed
// right half-plane (up to rounding slack).
inline complex power_checked(complex base, double expo, const char* what) {
    if (base.real() < -1e-12 * (1.0 + std::abs(base)))
        throw numerical_error(std::string(what) + ": power base left the right half-plane");
    if (base == complex(0.0, 0.0)) return complex(0.0, 0.0);
    return std::pow(base, expo);
}

inline void check_upper(double re, double bound, const char* what) {
    if (re > bound + 1e-12 * (1.0 + std::abs(bound)))
        throw std::domain_error(std::string(what) + ": argument outside effective domain");
}

}  // namespace detail

inline complex psi(const ImmigrationParams& p, complex x) {
    return p.beta * x;
}

inline complex phi(const BranchingParams& p, complex x) {
    complex diffusion = -p.b * x + 0.5 * (p.sigma * p.sigma) * (x * x);
    if (p.jump_family == BranchingJumps::none) return diffusion;
    const double bound = p.theta / p.eta;
    detail::check_upper(x.real(), bound, "phi");
    if (p.theta == 0.0) {
        // (−eta x)^alpha with Re(−eta x) >= 0
        return diffusion + detail::power_checked(-p.eta * x, p.alpha, "phi");
    }
    complex jump = detail::power_checked(p.theta - p.eta * x, p.alpha, "phi") -
                   std::pow(p.theta, p.alpha) +
                   p.alpha * std::pow(p.theta, p.alpha - 1.0) * p.eta * x;
    return diffusion + jump;
}

inline complex xi(const LevyParams& p, complex u) {
    complex base = p.drift * u + 0.5 * (p.gauss_vol * p.gauss_vol) * (u * u);
    if (p.jump_family == LevyJumps::none) return base;
    detail::check_upper(u.real(), p.m, "xi");
    detail::check_upper(-u.real(), p.g, "xi");
    const double g = p.g, m = p.m, y = p.y;
    complex jump = detail::power_checked(m - u, y, "xi") - std::pow(m, y) +
                   detail::power_checked(g + u, y, "xi") - std::pow(g, y) +
                   u * y * (std::pow(m, y - 1.0) - std::pow(g, y - 1.0));
    return base + jump;
}

inline double psi_real(const ImmigrationParams& p, double x) { return p.beta * x; }

inline double phi_real(const BranchingParams& p, double x) {
    return phi(p, complex(x, 0.0)).real();
}

inline double xi_real(const LevyParams& p, double u) {
    return xi(p, complex(u, 0.0)).real();
}

// Requires (zeta, lambda) strictly inside the effective domains.
inline void require_interior(const CbitclParams& p, double zeta, double lambda) {
    DomainBounds d = domains(p);
    const double tol = 0.0;
    if (!(zeta < d.dx_upper - tol))
        throw admissibility_error("zeta not in the interior of D_X (zeta=" + std::to_string(zeta) +
                                  ", sup D_X=" + std::to_string(d.dx_upper) + ")");
    if (!(lambda > d.dz_lower && lambda < d.dz_upper))
        throw admissibility_error("lambda not in the interior of D_Z (lambda=" +
                                  std::to_string(lambda) + ")");
}

inline CompensatorCoeffs compensator_coeffs(const CbitclParams& p, double zeta, double lambda) {
    require_interior(p, zeta, lambda);
    CompensatorCoeffs c;
    c.time_coeff = psi_real(p.immigration, zeta);
    c.y_coeff = phi_real(p.branching, zeta) + xi_real(p.levy, lambda);
    return c;
}

// Esscher change of measure with exposures (zeta, lambda). The tilted jump
// measures e^{zeta z} pi(dz) and e^{lambda z} gamma(dz) stay in family with
//   theta' = theta - zeta eta,   G' = G + lambda,   M' = M - lambda,
// and the fully-compensated drifts shift by the first moment of the tilt:
//   b'      = b - zeta sigma^2 - alpha eta (theta^{alpha-1} - theta'^{alpha-1})
//   drift'  = drift + lambda gauss_vol^2
//             + Y (M^{Y-1} - M'^{Y-1} + G'^{Y-1} - G^{Y-1}).
// These satisfy Phi'(x) = Phi(x + zeta) - Phi(zeta) and
// Xi'(u) = Xi(u + lambda) - Xi(lambda) exactly.
inline CbitclParams transform_params(const CbitclParams& p, double zeta, double lambda) {
    require_interior(p, zeta, lambda);
    CbitclParams q = p;
    if (p.branching.jump_family == BranchingJumps::tempered_stable) {
        const double a = p.branching.alpha, eta = p.branching.eta, th = p.branching.theta;
        const double th2 = th - zeta * eta;
        q.branching.theta = th2;
        q.branching.b = p.branching.b - zeta * p.branching.sigma * p.branching.sigma -
                        a * eta * (std::pow(th, a - 1.0) - std::pow(th2, a - 1.0));
    } else {
        q.branching.b = p.branching.b - zeta * p.branching.sigma * p.branching.sigma;
    }
    double drift = p.levy.drift + lambda * p.levy.gauss_vol * p.levy.gauss_vol;
    if (p.levy.jump_family == LevyJumps::cgmy) {
        const double g = p.levy.g, m = p.levy.m, y = p.levy.y;
        q.levy.g = g + lambda;
        q.levy.m = m - lambda;
        drift += y * (std::pow(m, y - 1.0) - std::pow(m - lambda, y - 1.0) +
                      std::pow(g + lambda, y - 1.0) - std::pow(g, y - 1.0));
    }
    q.levy.drift = drift;
    return q;
}

}  // namespace cbitcl
