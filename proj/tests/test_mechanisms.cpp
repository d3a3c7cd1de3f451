#include <catch2/catch_amalgamated.hpp>

#include "cbitcl/mechanisms.hpp"
#include "support/fixtures.hpp"
#include "support/quadrature.hpp"

using namespace cbitcl;
using Catch::Approx;

namespace {
const CbitclParams F1 = fixtures::heavy_factor1();
const CbitclParams F2 = fixtures::heavy_factor2();

double rel_err(complex a, complex b) { return std::abs(a - b) / std::max(1e-30, std::abs(b)); }
}  // namespace

TEST_CASE("psi is linear in x", "[mechanisms]") {
    CHECK(psi({0.37721}, {0.0, 0.0}) == complex(0.0, 0.0));
    CHECK(psi({1.7524}, {1.0, 0.0}).real() == Approx(1.7524));
    complex v = psi({0.65766}, {-2.0, 3.0});
    CHECK(v.real() == Approx(-1.31532).margin(1e-12));
    CHECK(v.imag() == Approx(1.97298).margin(1e-12));
}

TEST_CASE("phi closed form", "[mechanisms]") {
    SECTION("vanishes at zero") {
        CHECK(std::abs(phi(F1.branching, {0.0, 0.0})) == 0.0);
        CHECK(std::abs(phi(F2.branching, {0.0, 0.0})) == 0.0);
    }
    SECTION("heavy factor 1 at x = -1") {
        complex v = phi(F1.branching, {-1.0, 0.0});
        CHECK(v.real() == Approx(2.87588755765712928).epsilon(1e-13));
        CHECK(v.imag() == 0.0);
        complex q = oracle::phi_by_quadrature(F1.branching, {-1.0, 0.0});
        CHECK(rel_err(v, q) < 1e-8);
    }
    SECTION("complex argument") {
        complex v = phi(F1.branching, {-1.0, 0.5});
        CHECK(v.real() == Approx(2.27464817778305123).epsilon(1e-13));
        CHECK(v.imag() == Approx(-2.65085614291494824).epsilon(1e-13));
    }
    SECTION("diffusion-only family") {
        BranchingParams p{0.43082, 2.1473, BranchingJumps::none, 1.0, 0.0, 1.5};
        complex v = phi(p, {-0.8, 0.0});
        CHECK(v.real() == Approx(0.43082 * 0.8 + 0.5 * 2.1473 * 2.1473 * 0.64).epsilon(1e-14));
    }
    SECTION("domain violation") {
        CHECK_THROWS_AS(phi(F1.branching, {2.0, 0.0}), std::domain_error);
    }
    SECTION("theta = 0 permitted for alpha in (1,2)") {
        BranchingParams p{0.1, 0.2, BranchingJumps::tempered_stable, 0.9, 0.0, 1.4};
        complex v = phi(p, {-1.5, 0.0});
        complex q = oracle::phi_by_quadrature(p, {-1.5, 0.0});
        CHECK(rel_err(v, q) < 1e-8);
    }
}

TEST_CASE("xi closed form", "[mechanisms]") {
    SECTION("vanishes at zero") {
        CHECK(std::abs(xi(F1.levy, {0.0, 0.0})) == 0.0);
    }
    SECTION("pure Brownian") {
        LevyParams p{0.0, 1.0, LevyJumps::none, 1.0, 1.0, 1.5};
        complex v = xi(p, {0.0, 1.0});
        CHECK(v.real() == Approx(-0.5).epsilon(1e-15));
        CHECK(v.imag() == Approx(0.0).margin(1e-15));
    }
    SECTION("heavy factor 1 levy at u = 0.3") {
        complex v = xi(F1.levy, {0.3, 0.0});
        CHECK(v.real() == Approx(0.0646910564971156132).epsilon(1e-12));
        complex q = oracle::xi_by_quadrature(F1.levy, {0.3, 0.0});
        CHECK(rel_err(v, q) < 1e-8);
    }
    SECTION("imaginary argument") {
        complex v = xi(F1.levy, {0.0, 0.1});
        CHECK(v.real() == Approx(-0.0123921340274484255).epsilon(1e-12));
        CHECK(v.imag() == Approx(-0.0162761639176545622).epsilon(1e-12));
    }
    SECTION("domain violation") {
        CHECK_THROWS_AS(xi(F1.levy, {0.9, 0.0}), std::domain_error);
        CHECK_THROWS_AS(xi(F1.levy, {-3.2, 0.0}), std::domain_error);
    }
}

TEST_CASE("effective domains", "[mechanisms]") {
    DomainBounds d2 = domains(F2);
    CHECK(d2.dx_upper == Approx(0.298663921299473805).epsilon(1e-15));
    CHECK(d2.dz_lower == Approx(-0.59711));
    CHECK(d2.dz_upper == Approx(0.22821));

    CbitclParams none = F1;
    none.levy.jump_family = LevyJumps::none;
    none.branching.jump_family = BranchingJumps::none;
    DomainBounds dn = domains(none);
    CHECK(dn.dx_upper == inf);
    CHECK(dn.dz_lower == -inf);
    CHECK(dn.dz_upper == inf);
}

TEST_CASE("compensator coefficients", "[mechanisms]") {
    SECTION("zero exposures") {
        CompensatorCoeffs c = compensator_coeffs(F1, 0.0, 0.0);
        CHECK(c.time_coeff == 0.0);
        CHECK(c.y_coeff == 0.0);
    }
    SECTION("usd exposures on factor 1") {
        CompensatorCoeffs c = compensator_coeffs(F1, 0.27244, 0.32863);
        CHECK(c.time_coeff == Approx(0.1027670924).epsilon(1e-12));
        CHECK(c.y_coeff == Approx(0.150280900708300491).epsilon(1e-11));
    }
    SECTION("boundary point rejected") {
        double bound = F1.branching.theta / F1.branching.eta;
        CHECK_THROWS_AS(compensator_coeffs(F1, bound, 0.0), admissibility_error);
        CHECK_THROWS_AS(compensator_coeffs(F1, 0.0, F1.levy.m), admissibility_error);
    }
}

TEST_CASE("parameter transform under the tilted measure", "[mechanisms]") {
    SECTION("zero exposure is the identity, bit for bit") {
        CbitclParams q = transform_params(F1, 0.0, 0.0);
        CHECK(q.branching.b == F1.branching.b);
        CHECK(q.branching.theta == F1.branching.theta);
        CHECK(q.levy.drift == F1.levy.drift);
        CHECK(q.levy.g == F1.levy.g);
        CHECK(q.levy.m == F1.levy.m);
        CHECK(q.x0 == F1.x0);
    }
    SECTION("tempering shifts") {
        CbitclParams q2 = transform_params(F2, 0.0, 0.11410);
        CHECK(q2.levy.g == Approx(0.71121).epsilon(1e-14));
        CHECK(q2.levy.m == Approx(0.22821 - 0.11410).epsilon(1e-14));
        CbitclParams q1 = transform_params(F1, 1.12323, 0.0);
        CHECK(q1.branching.theta == Approx(0.000945816).margin(1e-12));
    }
    SECTION("inadmissible exposures rejected") {
        CHECK_THROWS_AS(transform_params(F2, 0.3, 0.0), admissibility_error);
        CHECK_THROWS_AS(transform_params(F2, 0.0, 0.25), admissibility_error);
    }
    SECTION("tilt identity for phi") {
        double zeta = 0.27244;
        CbitclParams q = transform_params(F1, zeta, 0.0);
        for (complex x : {complex(-0.7, 0.0), complex(-2.0, 1.3), complex(0.3, -0.4)}) {
            complex lhs = phi(q.branching, x);
            complex rhs = phi(F1.branching, x + zeta) - phi(F1.branching, complex(zeta, 0.0));
            CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(rhs)));
            complex quad = oracle::phi_by_quadrature(q.branching, x);
            CHECK(rel_err(lhs, quad) < 1e-8);
        }
    }
    SECTION("tilt identity for xi") {
        double lambda = 0.32863;
        CbitclParams q = transform_params(F1, 0.0, lambda);
        for (complex u : {complex(0.2, 0.0), complex(-0.5, 0.8), complex(0.0, 2.0)}) {
            complex lhs = xi(q.levy, u);
            complex rhs = xi(F1.levy, u + lambda) - xi(F1.levy, complex(lambda, 0.0));
            CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(rhs)));
            complex quad = oracle::xi_by_quadrature(q.levy, u);
            CHECK(rel_err(lhs, quad) < 1e-8);
        }
    }
    SECTION("round trip with opposite exposures") {
        double zeta = 0.2, lambda = 0.3;
        CbitclParams q = transform_params(F1, zeta, lambda);
        CbitclParams back = transform_params(q, -zeta, -lambda);
        CHECK(back.branching.b == Approx(F1.branching.b).epsilon(1e-14));
        CHECK(back.branching.theta == Approx(F1.branching.theta).epsilon(1e-14));
        CHECK(back.levy.drift == Approx(F1.levy.drift).margin(1e-14));
        CHECK(back.levy.g == Approx(F1.levy.g).epsilon(1e-14));
        CHECK(back.levy.m == Approx(F1.levy.m).epsilon(1e-14));
    }
}

TEST_CASE("mechanisms are convex on real domains", "[mechanisms]") {
    const double h = 1e-4;
    for (const CbitclParams* f : {&F1, &F2}) {
        DomainBounds d = domains(*f);
        for (int n = 0; n <= 40; ++n) {
            double x = -3.0 + n * (d.dx_upper - 2.0 * h + 3.0) / 40.0;
            double second = (phi_real(f->branching, x + h) - 2.0 * phi_real(f->branching, x) +
                             phi_real(f->branching, x - h)) /
                            (h * h);
            CHECK(second >= -1e-10);
        }
        for (int n = 1; n < 40; ++n) {
            double u = d.dz_lower + h + n * (d.dz_upper - d.dz_lower - 2.0 * h) / 40.0;
            double second = (xi_real(f->levy, u + h) - 2.0 * xi_real(f->levy, u) +
                             xi_real(f->levy, u - h)) /
                            (h * h);
            CHECK(second >= -1e-10);
        }
    }
}

TEST_CASE("closed forms match quadrature on a mixed grid", "[mechanisms]") {
    int checked = 0;
    for (const CbitclParams* f : {&F1, &F2}) {
        DomainBounds d = domains(*f);
        for (int n = 0; n < 12; ++n) {
            double re = -2.5 + n * (d.dx_upper + 2.5) / 12.0;
            double im = (n % 3 == 0) ? 0.0 : 0.4 * n - 2.0;
            complex x(re, im);
            CHECK(rel_err(phi(f->branching, x), oracle::phi_by_quadrature(f->branching, x)) < 1e-8);
            ++checked;
        }
        for (int n = 1; n < 12; ++n) {
            double re = d.dz_lower + n * (d.dz_upper - d.dz_lower) / 12.0;
            double im = (n % 2 == 0) ? 0.0 : 0.3 * n - 1.5;
            complex u(re, im);
            CHECK(rel_err(xi(f->levy, u), oracle::xi_by_quadrature(f->levy, u)) < 1e-8);
            ++checked;
        }
    }
    CHECK(checked >= 40);
}

TEST_CASE("parameter validation", "[mechanisms]") {
    CbitclParams bad = F1;
    bad.branching.alpha = 2.3;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = F1;
    bad.levy.g = -1.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = F1;
    bad.x0 = -0.1;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    CHECK_NOTHROW(validate(F1));
    CHECK_NOTHROW(validate(F2));
}
