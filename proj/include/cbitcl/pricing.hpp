#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "cbitcl/fxmarket.hpp"
#include "cbitcl/parallel.hpp"

namespace cbitcl {

enum class OptionType { call, put };

struct CosConfig {
    int num_terms = 256;
    double range_width = 10.0;       // L in [c1 - L*s, c1 + L*s], s = sqrt(c2 + sqrt(c4))
    double cumulant_fd_step = 1e-4;
    double riccati_tol = 1e-10;
    int shared_num_terms = 512;      // terms for the shared-grid multi-tenor path
};

struct TruncationRange {
    double lower = 0.0;
    double upper = 0.0;
};

struct Cumulants {
    double c1 = 0.0, c2 = 0.0, c4 = 0.0;
};

struct OptionQuote {
    std::string pair;
    double expiry = 0.0;
    double strike = 0.0;
    OptionType type = OptionType::call;
    double price = 0.0;
    double implied_vol = 0.0;
};

// ---------------------------------------------------------------------------
// Black (Garman-Kohlhagen on the forward)

inline double black_price(double fwd, double strike, double expiry, double vol, double df,
                          OptionType type = OptionType::call) {
    if (!(fwd > 0.0 && strike > 0.0 && df > 0.0)) throw std::invalid_argument("black_price: bad inputs");
    double intrinsic_call = std::max(fwd - strike, 0.0);
    if (vol <= 0.0 || expiry <= 0.0) {
        double c = df * intrinsic_call;
        return type == OptionType::call ? c : c - df * (fwd - strike);
    }
    double sd = vol * std::sqrt(expiry);
    double d1 = std::log(fwd / strike) / sd + 0.5 * sd;
    double d2 = d1 - sd;
    double call = df * (fwd * norm_cdf(d1) - strike * norm_cdf(d2));
    return type == OptionType::call ? call : call - df * (fwd - strike);
}

inline double black_vega(double fwd, double strike, double expiry, double vol, double df) {
    double sd = vol * std::sqrt(expiry);
    double d1 = std::log(fwd / strike) / sd + 0.5 * sd;
    return df * fwd * norm_pdf(d1) * std::sqrt(expiry);
}

// Black vol reproducing the given price to 1e-10 absolute: bracketed
// bisection to 1e-4 then Newton polish with a vega floor.
inline double implied_vol(double price, double fwd, double strike, double expiry, double df,
                          OptionType type = OptionType::call) {
    if (!(fwd > 0.0 && strike > 0.0 && df > 0.0 && expiry > 0.0))
        throw std::invalid_argument("implied_vol: bad inputs");
    double call_price = type == OptionType::call ? price : price + df * (fwd - strike);
    double lower = df * std::max(fwd - strike, 0.0);
    double upper = df * fwd;
    const double eps = 1e-12 * df * fwd;
    if (call_price < lower - eps || call_price >= upper - eps)
        throw std::domain_error("implied_vol: price outside no-arbitrage bounds");
    if (call_price <= lower + eps) return 0.0;

    double lo = 1e-9, hi = 1.0;
    while (black_price(fwd, strike, expiry, hi, df) < call_price) {
        hi *= 2.0;
        if (hi > 1e3) throw std::domain_error("implied_vol: no bracketing volatility");
    }
    while (hi - lo > 1e-4) {
        double mid = 0.5 * (lo + hi);
        (black_price(fwd, strike, expiry, mid, df) < call_price ? lo : hi) = mid;
    }
    double v = 0.5 * (lo + hi);
    for (int it = 0; it < 50; ++it) {
        double diff = black_price(fwd, strike, expiry, v, df) - call_price;
        if (std::abs(diff) < 1e-10) break;
        double vega = black_vega(fwd, strike, expiry, v, df);
        if (vega < 1e-12) break;
        double step = diff / vega;
        v = std::clamp(v - step, 0.25 * v, 4.0 * v);
    }
    return v;
}

// ---------------------------------------------------------------------------
// Cumulants of log S_T^{i,j} by central differences of the cumulant
// generating function kappa(v) = log E^i[e^{v log S}]. Each order uses its
// own step: the 4th-order stencil divides by h^4, so its step is floored
// well above the c1/c2 steps to keep roundoff amplification bounded.
// On a domain failure all steps shrink geometrically (up to 8 times).

namespace detail {

struct CumulantSteps {
    double h1, h2, h4;
};

inline CumulantSteps cumulant_steps(double step) {
    if (!(step > 0.0)) throw std::invalid_argument("cumulants: step must be > 0");
    return {step, std::max(step, 5e-4), std::max(step, 5e-2)};
}

}  // namespace detail

inline std::vector<Cumulants> cumulants_multi(const FxModel& m, int i, int j,
                                              std::span<const double> ts, double step,
                                              double tol = 1e-10) {
    detail::CumulantSteps hs = detail::cumulant_steps(step);
    for (int attempt = 0;; ++attempt) {
        try {
            const double pts[8] = {-2.0 * hs.h4, -hs.h4, -hs.h2, -hs.h1,
                                   hs.h1,        hs.h2,  hs.h4,  2.0 * hs.h4};
            // kappa[p][n] for stencil point p at time ts[n]
            std::array<std::vector<double>, 8> kappa;
            for (int p = 0; p < 8; ++p) {
                auto logs = log_fx_transform_multi(m, i, j, complex(pts[p], 0.0), ts, tol);
                kappa[p].resize(ts.size());
                for (std::size_t n = 0; n < ts.size(); ++n) kappa[p][n] = logs[n].real();
            }
            std::vector<Cumulants> out(ts.size());
            for (std::size_t n = 0; n < ts.size(); ++n) {
                out[n].c1 = (kappa[4][n] - kappa[3][n]) / (2.0 * hs.h1);
                out[n].c2 = (kappa[5][n] + kappa[2][n]) / (hs.h2 * hs.h2);
                out[n].c4 = (kappa[7][n] + kappa[0][n] - 4.0 * (kappa[6][n] + kappa[1][n])) /
                            (hs.h4 * hs.h4 * hs.h4 * hs.h4);
            }
            return out;
        } catch (const numerical_error&) {
            if (attempt >= 8) throw;
            hs.h1 *= 0.5;
            hs.h2 *= 0.5;
            hs.h4 *= 0.5;
        } catch (const std::domain_error&) {
            if (attempt >= 8) throw;
            hs.h1 *= 0.5;
            hs.h2 *= 0.5;
            hs.h4 *= 0.5;
        }
    }
}

inline Cumulants cumulants(const FxModel& m, int i, int j, double t, double step,
                           double tol = 1e-10) {
    const double ts[1] = {t};
    return cumulants_multi(m, i, j, ts, step, tol)[0];
}

inline TruncationRange truncation_range(const Cumulants& c, double log_strike, double L) {
    double spread = c.c2 + std::sqrt(std::max(c.c4, 0.0));
    if (!(spread > 0.0) || !std::isfinite(spread))
        throw numerical_error("truncation range degenerate: c2 + sqrt(c4) <= 0");
    double s = L * std::sqrt(spread);
    return {c.c1 - log_strike - s, c.c1 - log_strike + s};
}

// ---------------------------------------------------------------------------
// COS expansion pieces. chi/psi are the cosine integrals of e^y and 1 over
// [c, d] within the expansion interval [a, b].

namespace detail {

inline double cos_chi(double a, double b, double c, double d, int k) {
    double w = k * M_PI / (b - a);
    double t1 = w * (d - a), t2 = w * (c - a);
    return (std::cos(t1) * std::exp(d) - std::cos(t2) * std::exp(c) +
            w * (std::sin(t1) * std::exp(d) - std::sin(t2) * std::exp(c))) /
           (1.0 + w * w);
}

inline double cos_psi(double a, double b, double c, double d, int k) {
    if (k == 0) return d - c;
    double w = k * M_PI / (b - a);
    return (std::sin(w * (d - a)) - std::sin(w * (c - a))) / w;
}

// Call payoff coefficient: 2/(b-a) * int_{[a,b] ∩ [0,inf)} (e^y - 1) cos(...) dy.
inline double call_coefficient(double a, double b, int k) {
    double c = std::max(a, 0.0);
    if (b <= c) return 0.0;
    return 2.0 / (b - a) * (cos_chi(a, b, c, b, k) - cos_psi(a, b, c, b, k));
}

// Put payoff coefficient over [a,b] ∩ (-inf,0]; used for validation.
inline double put_coefficient(double a, double b, int k) {
    double d = std::min(b, 0.0);
    if (d <= a) return 0.0;
    return 2.0 / (b - a) * (cos_psi(a, b, a, d, k) - cos_chi(a, b, a, d, k));
}

inline double assemble_cos_price(std::span<const complex> phase, double a, double b,
                                 double strike, double df, bool put_payoff) {
    double sum = 0.0;
    for (std::size_t k = 0; k < phase.size(); ++k) {
        double weight = (k == 0) ? 0.5 : 1.0;
        double coeff = put_payoff ? put_coefficient(a, b, static_cast<int>(k))
                                  : call_coefficient(a, b, static_cast<int>(k));
        sum += weight * phase[k].real() * coeff;
    }
    return df * strike * sum;
}

}  // namespace detail

// Prices European currency calls (or parity puts) on S^{i,j} under Q^i for
// several strikes sharing one expiry. The expansion width depends only on
// (c2, c4), so the characteristic function evaluations are shared across
// strikes; the strike enters through the phase shift and the payoff
// coefficients.
inline std::vector<double> cos_price(const FxModel& m, int i, int j, double expiry,
                                     std::span<const double> strikes, OptionType type,
                                     const CosConfig& cfg = {}) {
    if (cfg.num_terms < 16) throw std::invalid_argument("cos_price: num_terms must be >= 16");
    if (strikes.empty()) return {};
    for (double k : strikes)
        if (!(k > 0.0)) throw std::invalid_argument("cos_price: strikes must be > 0");

    const double df = std::exp(-m.economies[i].rate * expiry);
    const double fwd = forward(m, i, j, expiry);
    Cumulants cum = cumulants(m, i, j, expiry, cfg.cumulant_fd_step, cfg.riccati_tol);
    double spread = cum.c2 + std::sqrt(std::max(cum.c4, 0.0));
    if (!(spread > 0.0) || !std::isfinite(spread))
        throw numerical_error("cos_price: truncation range degenerate");
    const double half_width = cfg.range_width * std::sqrt(spread);

    // charfun of log S_T at omega_k = k pi / (b - a); b - a = 2 * half_width
    const int M = cfg.num_terms;
    std::vector<complex> phi_vals(M);
    parallel_for(static_cast<std::size_t>(M), [&](std::size_t k) {
        double w = static_cast<double>(k) * M_PI / (2.0 * half_width);
        phi_vals[k] = std::exp(log_fx_transform(m, i, j, complex(0.0, w), expiry, cfg.riccati_tol));
    });
    // phase twist e^{-i omega_k (a + log K)}; a + log K = c1 - half_width for every strike
    std::vector<complex> phase(M);
    for (int k = 0; k < M; ++k) {
        double w = static_cast<double>(k) * M_PI / (2.0 * half_width);
        phase[k] = phi_vals[k] * std::exp(complex(0.0, -w * (cum.c1 - half_width)));
    }

    std::vector<double> prices(strikes.size());
    for (std::size_t s = 0; s < strikes.size(); ++s) {
        double a = cum.c1 - std::log(strikes[s]) - half_width;
        double b = cum.c1 - std::log(strikes[s]) + half_width;
        double call = detail::assemble_cos_price(phase, a, b, strikes[s], df, false);
        if (call < -1e-10 * std::max(1.0, fwd))
            throw numerical_error("cos_price: negative price beyond tolerance");
        call = std::max(call, 0.0);
        prices[s] = (type == OptionType::call) ? call : call - df * (fwd - strikes[s]);
    }
    return prices;
}

// Independent COS put (payoff expansion over the negative log-moneyness
// side); validation companion to the parity put.
inline std::vector<double> cos_put_direct(const FxModel& m, int i, int j, double expiry,
                                          std::span<const double> strikes,
                                          const CosConfig& cfg = {}) {
    const double df = std::exp(-m.economies[i].rate * expiry);
    Cumulants cum = cumulants(m, i, j, expiry, cfg.cumulant_fd_step, cfg.riccati_tol);
    const double half_width = cfg.range_width * std::sqrt(cum.c2 + std::sqrt(std::max(cum.c4, 0.0)));
    const int M = cfg.num_terms;
    std::vector<complex> phase(M);
    parallel_for(static_cast<std::size_t>(M), [&](std::size_t k) {
        double w = static_cast<double>(k) * M_PI / (2.0 * half_width);
        complex phi_k = std::exp(log_fx_transform(m, i, j, complex(0.0, w), expiry, cfg.riccati_tol));
        phase[k] = phi_k * std::exp(complex(0.0, -w * (cum.c1 - half_width)));
    });
    std::vector<double> prices(strikes.size());
    for (std::size_t s = 0; s < strikes.size(); ++s) {
        double a = cum.c1 - std::log(strikes[s]) - half_width;
        double b = cum.c1 - std::log(strikes[s]) + half_width;
        prices[s] = std::max(detail::assemble_cos_price(phase, a, b, strikes[s], df, true), 0.0);
    }
    return prices;
}

// Shared-grid fast path: prices a whole tenor ladder for one pair with a
// common expansion width (the widest tenor's), so each frequency needs a
// single Riccati solve per factor evaluated at every tenor. Used where many
// surfaces are generated (calibration objectives, surrogate training); the
// widened short-tenor ranges are compensated by a denser frequency grid.
struct TenorStrikes {
    double expiry = 0.0;
    std::vector<double> strikes;
};

inline std::vector<std::vector<double>> cos_price_surface(const FxModel& m, int i, int j,
                                                          std::span<const TenorStrikes> ladder,
                                                          OptionType type, const CosConfig& cfg = {}) {
    if (ladder.empty()) return {};
    std::vector<double> ts(ladder.size());
    for (std::size_t n = 0; n < ladder.size(); ++n) {
        if (!(ladder[n].expiry > 0.0)) throw std::invalid_argument("cos_price_surface: bad expiry");
        ts[n] = ladder[n].expiry;
    }
    std::vector<Cumulants> cums = cumulants_multi(m, i, j, ts, cfg.cumulant_fd_step, cfg.riccati_tol);

    double half_width = 0.0;
    for (const auto& c : cums) {
        double spread = c.c2 + std::sqrt(std::max(c.c4, 0.0));
        if (!(spread > 0.0) || !std::isfinite(spread))
            throw numerical_error("cos_price_surface: truncation range degenerate");
        half_width = std::max(half_width, cfg.range_width * std::sqrt(spread));
    }

    const int M = cfg.shared_num_terms;
    // phi_vals[k][n]: charfun at frequency k, tenor n
    std::vector<std::vector<complex>> phi_vals(M);
    parallel_for(static_cast<std::size_t>(M), [&](std::size_t k) {
        double w = static_cast<double>(k) * M_PI / (2.0 * half_width);
        auto logs = log_fx_transform_multi(m, i, j, complex(0.0, w), ts, cfg.riccati_tol);
        phi_vals[k].resize(ts.size());
        for (std::size_t n = 0; n < ts.size(); ++n) phi_vals[k][n] = std::exp(logs[n]);
    });

    std::vector<std::vector<double>> out(ladder.size());
    for (std::size_t n = 0; n < ladder.size(); ++n) {
        const double df = std::exp(-m.economies[i].rate * ts[n]);
        const double fwd = forward(m, i, j, ts[n]);
        std::vector<complex> phase(M);
        for (int k = 0; k < M; ++k) {
            double w = static_cast<double>(k) * M_PI / (2.0 * half_width);
            phase[k] = phi_vals[k][n] * std::exp(complex(0.0, -w * (cums[n].c1 - half_width)));
        }
        out[n].resize(ladder[n].strikes.size());
        for (std::size_t s = 0; s < ladder[n].strikes.size(); ++s) {
            double strike = ladder[n].strikes[s];
            double a = cums[n].c1 - std::log(strike) - half_width;
            double b = cums[n].c1 - std::log(strike) + half_width;
            double call = detail::assemble_cos_price(phase, a, b, strike, df, false);
            if (call < -1e-10 * std::max(1.0, fwd))
                throw numerical_error("cos_price_surface: negative price beyond tolerance");
            call = std::max(call, 0.0);
            out[n][s] = (type == OptionType::call) ? call : call - df * (fwd - strike);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// FX quote conventions. Deltas are forward deltas, premium-unadjusted:
//   K(delta, call) = F exp(-sigma sqrt(T) N^{-1}(delta) + sigma^2 T / 2)
//   K(delta, put)  = F exp(+sigma sqrt(T) N^{-1}(delta) + sigma^2 T / 2)
// ATM is the delta-neutral straddle, K = F exp(sigma^2 T / 2).
// Day count is ACT/365F; tenors are year fractions throughout.

struct QuoteTenor {
    double tenor = 0.0;
    double sigma_atm = 0.0;
    double rr25 = 0.0, bf25 = 0.0;
    double rr10 = 0.0, bf10 = 0.0;
    double fwd_points = 0.0;  // forward = spot + fwd_points
};

struct QuoteSet {
    std::string pair;  // e.g. "USDJPY": one unit of USD (foreign) in JPY (domestic)
    double spot = 0.0;
    std::string day_count = "ACT/365F";
    std::vector<QuoteTenor> tenors;
};

struct StrikeVol {
    std::string delta_label;
    double strike = 0.0;
    double vol = 0.0;
};

inline double strike_from_delta(double fwd, double vol, double expiry, double delta,
                                OptionType type) {
    double q = norm_quantile(delta);
    double sgn = (type == OptionType::call) ? -1.0 : 1.0;
    return fwd * std::exp(sgn * vol * std::sqrt(expiry) * q + 0.5 * vol * vol * expiry);
}

inline double atm_strike(double fwd, double vol, double expiry) {
    return fwd * std::exp(0.5 * vol * vol * expiry);
}

// Reconstructs the five (strike, vol) points per tenor, ordered
// 10dP, 25dP, ATM, 25dC, 10dC:
//   sigma_C = sigma_atm + RR/2 + BF,  sigma_P = sigma_atm - RR/2 + BF.
inline std::vector<std::array<StrikeVol, 5>> quotes_to_strike_vols(const QuoteSet& q) {
    if (!(q.spot > 0.0)) throw std::invalid_argument("quotes: spot must be > 0");
    std::vector<std::array<StrikeVol, 5>> out;
    out.reserve(q.tenors.size());
    for (const auto& qt : q.tenors) {
        if (!(qt.tenor > 0.0)) throw std::invalid_argument("quotes: tenor must be > 0");
        double fwd = q.spot + qt.fwd_points;
        if (!(fwd > 0.0)) throw std::invalid_argument("quotes: non-positive forward");
        double c25 = qt.sigma_atm + 0.5 * qt.rr25 + qt.bf25;
        double p25 = qt.sigma_atm - 0.5 * qt.rr25 + qt.bf25;
        double c10 = qt.sigma_atm + 0.5 * qt.rr10 + qt.bf10;
        double p10 = qt.sigma_atm - 0.5 * qt.rr10 + qt.bf10;
        for (double v : {c25, p25, c10, p10, qt.sigma_atm})
            if (!(v > 0.0))
                throw std::invalid_argument("quotes: non-positive reconstructed wing volatility");
        std::array<StrikeVol, 5> row;
        row[0] = {"10dP", strike_from_delta(fwd, p10, qt.tenor, 0.10, OptionType::put), p10};
        row[1] = {"25dP", strike_from_delta(fwd, p25, qt.tenor, 0.25, OptionType::put), p25};
        row[2] = {"ATM", atm_strike(fwd, qt.sigma_atm, qt.tenor), qt.sigma_atm};
        row[3] = {"25dC", strike_from_delta(fwd, c25, qt.tenor, 0.25, OptionType::call), c25};
        row[4] = {"10dC", strike_from_delta(fwd, c10, qt.tenor, 0.10, OptionType::call), c10};
        out.push_back(row);
    }
    return out;
}

}  // namespace cbitcl
