#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "cbitcl/mechanisms.hpp"

namespace cbitcl {

struct RiccatiInput {
    complex u1{0.0, 0.0};
    complex u2{0.0, 0.0};
    complex u3{0.0, 0.0};
    double horizon = 0.0;
};

struct RiccatiSolution {
    std::vector<double> grid;        // ascending, grid.front() == 0, grid.back() == horizon
    std::vector<complex> v_values;   // V(0) == u1
    std::vector<complex> u_values;   // U(0) == 0

    std::size_t index_of(double t) const {
        for (std::size_t i = grid.size(); i-- > 0;)
            if (std::abs(grid[i] - t) <= 1e-12 * (1.0 + std::abs(t))) return i;
        throw std::invalid_argument("RiccatiSolution: time not on grid");
    }
    complex v_at(double t) const { return v_values[index_of(t)]; }
    complex u_at(double t) const { return u_values[index_of(t)]; }
};

namespace detail {

struct VU {
    complex v, u;
};

inline double error_norm(const VU& e, const VU& y0, const VU& y1, double tol) {
    auto comp = [tol](complex err, complex a, complex b) {
        double scale = tol + tol * std::max(std::abs(a), std::abs(b));
        return std::abs(err) / scale;
    };
    return std::max(comp(e.v, y0.v, y1.v), comp(e.u, y0.u, y1.u));
}

}  // namespace detail

// Integrates dV/dt = Phi(V) + u2 + Xi(u3), V(0) = u1 and dU/dt = Psi(V),
// U(0) = 0 jointly with an embedded Dormand-Prince 5(4) pair, so both
// components share one error control. The grid contains every accepted
// step plus all requested eval_times and the horizon.
inline RiccatiSolution solve_riccati(const CbitclParams& params, const RiccatiInput& input,
                                     double tol = 1e-10, std::span<const double> eval_times = {}) {
    if (!(tol > 0.0)) throw std::invalid_argument("solve_riccati: tol must be > 0");
    if (!(input.horizon >= 0.0)) throw std::invalid_argument("solve_riccati: horizon must be >= 0");

    const DomainBounds dom = domains(params);
    const complex forcing = input.u2 + xi(params.levy, input.u3);

    std::vector<double> stops(eval_times.begin(), eval_times.end());
    stops.push_back(input.horizon);
    std::sort(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-15; }),
                stops.end());
    for (double s : stops)
        if (s < -1e-15 || s > input.horizon * (1.0 + 1e-12) + 1e-15)
            throw std::invalid_argument("solve_riccati: eval time outside [0, horizon]");

    RiccatiSolution sol;
    sol.grid.push_back(0.0);
    sol.v_values.push_back(input.u1);
    sol.u_values.push_back(complex(0.0, 0.0));

    detail::VU y{input.u1, complex(0.0, 0.0)};
    auto rhs = [&](const detail::VU& s) {
        if (s.v.real() > dom.dx_upper + 1e-12 * (1.0 + std::abs(dom.dx_upper)))
            throw numerical_error("solve_riccati: Re V escaped the effective domain");
        if (std::abs(s.v) > 1e10)
            throw numerical_error("solve_riccati: |V| blew up");
        return detail::VU{phi(params.branching, s.v) + forcing, psi(params.immigration, s.v)};
    };

    if (input.horizon == 0.0) return sol;

    double t = 0.0;
    double h = std::min(input.horizon, 1e-2 / (1.0 + std::abs(rhs(y).v)));
    const double h_min = std::max(1e-14 * input.horizon, 1e-300);
    detail::VU k1 = rhs(y);
    std::size_t next_stop = (stops.front() == 0.0) ? 1 : 0;
    long max_steps = 2000000;

    while (t < input.horizon) {
        if (--max_steps < 0) throw numerical_error("solve_riccati: step budget exhausted");
        double target = stops[next_stop];
        bool clipped = false;
        if (t + h >= target - 1e-15 * (1.0 + target)) {
            h = target - t;
            clipped = true;
        }

        bool ok = true;
        detail::VU y_new{}, k7{};
        double err = 0.0;
        try {
            auto axpy = [](const detail::VU& a, double c, const detail::VU& b) {
                return detail::VU{a.v + c * b.v, a.u + c * b.u};
            };
            detail::VU k2 = rhs(axpy(y, h * (1.0 / 5), k1));
            detail::VU s3{y.v + h * (3.0 / 40 * k1.v + 9.0 / 40 * k2.v),
                          y.u + h * (3.0 / 40 * k1.u + 9.0 / 40 * k2.u)};
            detail::VU k3 = rhs(s3);
            detail::VU s4{y.v + h * (44.0 / 45 * k1.v - 56.0 / 15 * k2.v + 32.0 / 9 * k3.v),
                          y.u + h * (44.0 / 45 * k1.u - 56.0 / 15 * k2.u + 32.0 / 9 * k3.u)};
            detail::VU k4 = rhs(s4);
            detail::VU s5{y.v + h * (19372.0 / 6561 * k1.v - 25360.0 / 2187 * k2.v +
                                     64448.0 / 6561 * k3.v - 212.0 / 729 * k4.v),
                          y.u + h * (19372.0 / 6561 * k1.u - 25360.0 / 2187 * k2.u +
                                     64448.0 / 6561 * k3.u - 212.0 / 729 * k4.u)};
            detail::VU k5 = rhs(s5);
            detail::VU s6{y.v + h * (9017.0 / 3168 * k1.v - 355.0 / 33 * k2.v +
                                     46732.0 / 5247 * k3.v + 49.0 / 176 * k4.v -
                                     5103.0 / 18656 * k5.v),
                          y.u + h * (9017.0 / 3168 * k1.u - 355.0 / 33 * k2.u +
                                     46732.0 / 5247 * k3.u + 49.0 / 176 * k4.u -
                                     5103.0 / 18656 * k5.u)};
            detail::VU k6 = rhs(s6);
            y_new = detail::VU{y.v + h * (35.0 / 384 * k1.v + 500.0 / 1113 * k3.v +
                                          125.0 / 192 * k4.v - 2187.0 / 6784 * k5.v +
                                          11.0 / 84 * k6.v),
                               y.u + h * (35.0 / 384 * k1.u + 500.0 / 1113 * k3.u +
                                          125.0 / 192 * k4.u - 2187.0 / 6784 * k5.u +
                                          11.0 / 84 * k6.u)};
            k7 = rhs(y_new);
            detail::VU y4{y.v + h * (5179.0 / 57600 * k1.v + 7571.0 / 16695 * k3.v +
                                     393.0 / 640 * k4.v - 92097.0 / 339200 * k5.v +
                                     187.0 / 2100 * k6.v + 1.0 / 40 * k7.v),
                          y.u + h * (5179.0 / 57600 * k1.u + 7571.0 / 16695 * k3.u +
                                     393.0 / 640 * k4.u - 92097.0 / 339200 * k5.u +
                                     187.0 / 2100 * k6.u + 1.0 / 40 * k7.u)};
            detail::VU e{y_new.v - y4.v, y_new.u - y4.u};
            err = detail::error_norm(e, y, y_new, tol);
        } catch (const numerical_error&) {
            ok = false;
        } catch (const std::domain_error&) {
            ok = false;
        }

        if (ok && err <= 1.0) {
            t += h;
            y = y_new;
            k1 = k7;
            sol.grid.push_back(t);
            sol.v_values.push_back(y.v);
            sol.u_values.push_back(y.u);
            if (clipped && std::abs(t - target) <= 1e-15 * (1.0 + target)) {
                ++next_stop;
                if (next_stop >= stops.size()) break;
            }
            double factor = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
            h *= std::clamp(factor, 0.2, 5.0);
        } else {
            double factor = ok ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.5) : 0.25;
            h *= factor;
            if (h < h_min)
                throw numerical_error(ok ? "solve_riccati: step size underflow (stiffness)"
                                         : "solve_riccati: domain escape at minimal step");
        }
        h = std::min(h, input.horizon - t + 1e-300);
        if (h <= 0.0) h = h_min;
    }
    return sol;
}

// E[exp(u1 X_T + u2 Y_T + u3 Z_T)] given (X_0, y0, z0) at t = 0:
// exp(U(T) + V(T) X_0 + u2 y0 + u3 z0).
inline complex laplace_fourier(const CbitclParams& params, const RiccatiInput& input, double y0,
                               double z0, double tol = 1e-10) {
    RiccatiSolution s = solve_riccati(params, input, tol);
    complex expo = s.u_values.back() + s.v_values.back() * params.x0 + input.u2 * y0 + input.u3 * z0;
    return std::exp(expo);
}

}  // namespace cbitcl
