#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>

#include "gensol/verify.hpp"

using namespace gensol;

namespace {

const Expr1D x = Expr1D::variable();
const ProfileFunction T = ProfileFunction::gaussian(1.5, 0.7);
const ProfileFunction X = ProfileFunction::sinusoid(2.0, 0.3);

/// Exact source for the flat wave equation v = sin(pi y) cos(pi t).
Jet2 standing_wave(double t, double y) {
    Jet2 j(t, y, 2);
    const double s = std::sin(M_PI * y), c = std::cos(M_PI * y);
    const double ct = std::cos(M_PI * t), st = std::sin(M_PI * t);
    const double k2 = M_PI * M_PI;
    j(0, 0) = s * ct;
    j(1, 0) = -M_PI * s * st;
    j(0, 1) = M_PI * c * ct;
    j(2, 0) = -k2 * s * ct;
    j(1, 1) = -k2 * c * st;
    j(0, 2) = -k2 * s * ct;
    return j;
}

}  // namespace

TEST_CASE("grids include both endpoints") {
    const Grid2D g{0.0, 1.0, 5, 1.0, 3.0, 3};
    const auto ts = g.times();
    const auto ss = g.positions();
    CHECK(ts.size() == 5);
    CHECK(ts.back() == 1.0);
    CHECK(ss[1] == 2.0);
    CHECK_THROWS_AS(residual_general(Expr1D(0.0), SolutionTemplate::wave(), T, X, Grid2D{0, 1, 0, 1, 2, 4}),
                    PreconditionError);
}

TEST_CASE("residual of exact solutions is at rounding level") {
    const Grid2D g{0.0, 1.0, 32, 1.0, 2.0, 32};
    const ResidualReport r = residual_general(Expr1D(0.0), SolutionTemplate::wave(), T, X, g);
    CHECK(r.points == 32u * 32u);
    CHECK(r.max_rel <= 1e-13);
    const ResidualReport e = residual_general(2.0 / x, SolutionTemplate({{1, 1.0 / x}}, {{1, -1.0 / x}}), T, X, g);
    CHECK(e.max_rel <= 1e-12);
}

TEST_CASE("wrong coefficient gives an O(1) residual at a located point") {
    const Grid2D g{0.0, 1.0, 16, 1.0, 2.0, 16};
    const ResidualReport r = residual_general(3.0 / x, SolutionTemplate({{1, 1.0 / x}}, {{1, -1.0 / x}}), T, X, g);
    CHECK(r.max_rel > 0.1);
    CHECK(r.worst_s >= 1.0);
    CHECK(r.worst_s <= 2.0);
}

TEST_CASE("identically zero fields do not produce spurious failures") {
    const Grid2D g{0.0, 1.0, 8, 1.0, 2.0, 8};
    const ResidualReport r =
        residual_general(2.0 / x, epd_even_solution(2), ProfileFunction::zero(), ProfileFunction::zero(), g);
    CHECK(r.max_abs == 0.0);
    CHECK(r.max_rel == 0.0);
}

TEST_CASE("corruption multiplies the residual by orders of magnitude") {
    const FamilyDescriptor fam{FamilyKind::family_a, 4, 1.0, 1.0};
    const EquationSpec eq = family_equation(fam);
    const Grid2D g{0.0, 1.0, 32, 1.0, 2.0, 32};
    const double clean = residual_general(eq.coefficient, family_template(fam), T, X, g).max_rel;
    const double bad = residual_general(eq.coefficient, corrupt_template(family_template(fam)), T, X, g).max_rel;
    CHECK(bad >= 1e3 * std::max(clean, 1e-16));
    CHECK(bad > 1e-4);
    CHECK_THROWS_AS(corrupt_template(SolutionTemplate()), PreconditionError);
}

TEST_CASE("convergence order from three errors") {
    const ConvergenceOrder o = convergence_order(4e-2, 1e-2, 2.5e-3);
    CHECK(o.valid);
    CHECK(o.order == doctest::Approx(2.0));
    CHECK(convergence_order(1.0, 0.5, 0.25).order == doctest::Approx(1.0));
    const ConvergenceOrder flat = convergence_order(1e-3, 2e-3, 1e-3);
    CHECK_FALSE(flat.valid);
    CHECK(std::isnan(flat.order));
    CHECK_FALSE(convergence_order(0.0, 0.0, 0.0).valid);
}

TEST_CASE("leapfrog on the flat wave equation is second order") {
    double err[3];
    int k = 0;
    for (int n : {51, 101, 201}) {
        const FdSolution s = fd_solve([](double) { return 1.0; }, FDSolverConfig{0.0, 1.0, n, 0.5, 0.5}, standing_wave);
        CHECK(s.t_final == doctest::Approx(0.5).epsilon(1e-14));
        err[k++] = compare_to_exact(s, standing_wave).max_abs;
    }
    const ConvergenceOrder o = convergence_order(err[0], err[1], err[2]);
    CHECK(o.valid);
    CHECK(o.order == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("leapfrog against exact acoustics solutions") {
    const FamilyDescriptor cases[] = {{FamilyKind::family_a, 2, 1.0, 1.0}, {FamilyKind::euler_acoustics, 2, 0.0, 1.0}};
    const ProfileFunction G1 = ProfileFunction::gaussian(1.5, 0.7), G2 = ProfileFunction::gaussian(-1.2, 0.7);
    for (const FamilyDescriptor& fam : cases) {
        CAPTURE(fam.name());
        const AcousticsEquation ac = to_acoustics(family_equation(fam), fam);
        const AcousticsEvaluator ev(ac, family_template(fam));
        const ExactSource exact = [&](double t, double y) { return ev.jet(G1, G2, t, y); };
        double err[3];
        for (int k = 0; k < 3; ++k) {
            const int n = 100 * (1 << k) + 1;
            err[k] = compare_to_exact(fd_solve(ac, FDSolverConfig{ac.y_range.lo, ac.y_range.hi, n, 0.9, 0.5}, exact),
                                      exact)
                         .max_abs;
        }
        const ConvergenceOrder o = convergence_order(err[0], err[1], err[2]);
        CHECK(std::abs(o.order - 2.0) <= 0.2);
        CHECK(err[2] <= 1e-4);
    }
}

TEST_CASE("leapfrog input errors") {
    const auto one = [](double) { return 1.0; };
    CHECK_THROWS_AS(fd_solve(one, FDSolverConfig{0.0, 1.0, 51, 1.5, 0.5}, standing_wave), NumericalError);
    CHECK_THROWS_AS(fd_solve(one, FDSolverConfig{0.0, 1.0, 51, 0.0, 0.5}, standing_wave), NumericalError);
    CHECK_THROWS_AS(fd_solve([](double y) { return y - 0.5; }, FDSolverConfig{0.0, 1.0, 51, 0.5, 0.5}, standing_wave),
                    NumericalError);
    CHECK_THROWS_AS(fd_solve(one, FDSolverConfig{0.0, 1.0, 2, 0.5, 0.5}, standing_wave), PreconditionError);
    CHECK_THROWS_AS(fd_solve(one, FDSolverConfig{0.0, 1.0, 51, 0.5, -1.0}, standing_wave), PreconditionError);
}

TEST_CASE("leapfrog runs are bitwise reproducible and keep history on request") {
    FDSolverConfig c{0.0, 1.0, 41, 0.8, 0.3, true};
    const auto one = [](double) { return 1.0; };
    const FdSolution a = fd_solve(one, c, standing_wave);
    const FdSolution b = fd_solve(one, c, standing_wave);
    REQUIRE(a.v.size() == b.v.size());
    CHECK(std::memcmp(a.v.data(), b.v.data(), a.v.size() * sizeof(double)) == 0);
    CHECK(a.history.size() == static_cast<std::size_t>(a.steps) + 1);
    CHECK(a.history.back() == a.v);
}
