#pragma once

// Shared model fixtures for the test and acceptance suites.

#include "cbitcl/fxmarket.hpp"

namespace fixtures {

using namespace cbitcl;

// Two tempered-stable / CGMY factors with heavy tails and strong exposures;
// the JPY exposure on factor 1 sits ~5.5e-4 inside the admissibility
// boundary, so only the EUR/USD measures are numerically usable for
// simulation (see martingale/measure tests).
inline CbitclParams heavy_factor1() {
    CbitclParams f;
    f.x0 = 1.1040;
    f.immigration.beta = 0.37721;
    f.branching = {0.43082, 2.1473, BranchingJumps::tempered_stable, 1.7208, 1.9338, 1.1697};
    f.levy = {-0.16220, 0.0, LevyJumps::cgmy, 3.0313, 0.79529, 1.7675};
    return f;
}

inline CbitclParams heavy_factor2() {
    CbitclParams f;
    f.x0 = 0.19652;
    f.immigration.beta = 1.7524;
    f.branching = {-0.73467, 1.1174, BranchingJumps::tempered_stable, 2.1855, 0.65273, 1.1122};
    f.levy = {0.88065, 0.0, LevyJumps::cgmy, 0.59711, 0.22821, 1.2390};
    return f;
}

inline FxModel heavy_fx_model() {
    FxModel m;
    m.horizon = 1.25;
    m.factors = {heavy_factor1(), heavy_factor2()};
    m.economies = {
        {"EUR", -0.005, {0.089747, 0.025973}, {0.16260, 0.040496}, 1.0},
        {"USD", 0.002, {0.27244, 0.092184}, {0.32863, -0.014839}, 1.0 / 1.0885},
        {"JPY", -0.001, {1.12323, 0.232636}, {0.39764, 0.11410}, 1.0 / (1.0885 * 107.6)},
    };
    return m;
}

// Moderate-exposure triangle: every economy's measure is mean-reverting and
// the Esscher density has finite variance, so all Monte Carlo estimators
// behave. Vol scale ~10-20% with a CGMY smile.
inline FxModel moderate_fx_model() {
    FxModel m;
    m.horizon = 1.25;
    CbitclParams f1;
    f1.x0 = 1.0;
    f1.immigration.beta = 0.30;
    f1.branching = {1.20, 0.50, BranchingJumps::tempered_stable, 0.80, 1.20, 1.35};
    f1.levy = {0.0, 0.0, LevyJumps::cgmy, 6.0, 7.0, 1.35};
    CbitclParams f2;
    f2.x0 = 0.8;
    f2.immigration.beta = 0.50;
    f2.branching = {0.90, 0.40, BranchingJumps::tempered_stable, 0.60, 1.50, 1.25};
    f2.levy = {0.0, 0.0, LevyJumps::cgmy, 4.5, 5.5, 1.45};
    m.factors = {f1, f2};
    m.economies = {
        {"EUR", 0.000, {0.10, 0.06}, {0.65, 0.30}, 1.0},
        {"USD", 0.015, {0.22, 0.12}, {0.95, 0.55}, 1.0 / 1.0885},
        {"JPY", -0.002, {0.35, 0.20}, {1.25, 0.85}, 1.0 / (1.0885 * 107.6)},
    };
    return m;
}

// Constant volatility factor and Brownian Levy component: log S is exactly
// Gaussian with vol |lambda_j - lambda_i| * gauss_vol * sqrt(x0).
inline FxModel black_fx_model(double vol = 0.20, double r_dom = 0.0, double r_for = 0.0,
                              double spot = 100.0) {
    FxModel m;
    m.horizon = 6.0;
    CbitclParams f;
    f.x0 = 1.0;
    f.immigration.beta = 0.0;
    f.branching = {0.0, 0.0, BranchingJumps::none, 1.0, 0.0, 1.5};
    f.levy = {0.0, vol, LevyJumps::none, 1.0, 1.0, 1.5};
    m.factors = {f};
    m.economies = {
        {"DOM", r_dom, {0.0}, {0.0}, 1.0},
        {"FOR", r_for, {0.0}, {1.0}, spot},
    };
    return m;
}

}  // namespace fixtures
