#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "gensol/families.hpp"
#include "gensol/gasdyn.hpp"
#include "gensol/verify.hpp"
#include "support.hpp"

using namespace gensol;

namespace {

const Expr1D x = Expr1D::variable();
const ProfileFunction T = ProfileFunction::gaussian(1.5, 0.7);
const ProfileFunction X = ProfileFunction::sinusoid(2.0, 0.3);

Grid2D grid_on(const Interval& d) { return Grid2D{0.0, 1.0, 32, d.lo, d.hi, 32}; }

/// Mean and standard deviation of u1 / u2 over a set of (t, x) points.
std::pair<double, double> ratio_stats(const SolutionTemplate& u1, const SolutionTemplate& u2, const Interval& d) {
    std::vector<double> q;
    for (double t : {0.0, 0.3, 0.8}) {
        for (double p : d.chebyshev(7)) {
            q.push_back(u1.evaluate(T, X, t, p) / u2.evaluate(T, X, t, p));
        }
    }
    const double mean = std::accumulate(q.begin(), q.end(), 0.0) / q.size();
    double var = 0.0;
    for (double v : q) {
        var += (v - mean) * (v - mean);
    }
    return {mean, std::sqrt(var / q.size())};
}

}  // namespace

TEST_CASE("descriptors validate and name themselves") {
    CHECK(parse_family_kind("family-a") == FamilyKind::family_a);
    CHECK(parse_family_kind("epd") == FamilyKind::epd_even);
    CHECK(parse_family_kind("euler-acoustics") == FamilyKind::euler_acoustics);
    CHECK_THROWS_AS(parse_family_kind("nope"), PreconditionError);
    CHECK_THROWS_AS((FamilyDescriptor{FamilyKind::epd_even, 3, 0.0, 1.0}.validate()), PreconditionError);
    CHECK_THROWS_AS((FamilyDescriptor{FamilyKind::family_a, 8, 1.0, 1.0}.validate()), PreconditionError);
    CHECK(FamilyDescriptor{FamilyKind::family_a, 4, 1.0, 1.0}.name().find("family-a") != std::string::npos);
}

TEST_CASE("EPD templates by repeated (1/x d/dx)") {
    const SolutionTemplate u2 = epd_even_solution(2);
    CHECK(u2.plus(1)(1.5) == doctest::Approx(1.0 / 1.5));
    CHECK(u2.minus(1)(1.5) == doctest::Approx(-1.0 / 1.5));
    CHECK(u2.max_order() == 1);
    // n = 4: (1/x d/dx)((T' - X')/x) = (T'' + X'')/x^2 - (T' - X')/x^3
    const SolutionTemplate u4 = epd_even_solution(4);
    CHECK(u4.plus(2)(1.5) == doctest::Approx(1.0 / 2.25));
    CHECK(u4.minus(2)(1.5) == doctest::Approx(1.0 / 2.25));
    CHECK(u4.plus(1)(1.5) == doctest::Approx(-1.0 / 3.375));
    CHECK(u4.minus(1)(1.5) == doctest::Approx(1.0 / 3.375));
    for (int n : {2, 4, 6}) {
        CAPTURE(n);
        const Interval d{1.0, 2.0};
        CHECK(residual_general(epd_coefficient(n), epd_even_solution(n), T, X, grid_on(d)).max_rel <= 1e-8);
    }
}

TEST_CASE("family-a coefficient and working domain") {
    CHECK(family_a_coefficient(2, 1.0)(1.0) == doctest::Approx((4.0 - 2.0) / 2.0));
    CHECK(family_a_coefficient(4, 0.5)(1.5) ==
          doctest::Approx((6.0 * std::pow(1.5, 5) - 2.0) / (std::pow(1.5, 6) + 0.75)));
    const Interval d = family_a_domain(2, -1.0);
    CHECK(d.lo > 1.0);  // x^3 - 1 vanishes at 1
    const Interval e = family_a_domain(4, 1.0);
    CHECK(e.lo == 1.0);
    CHECK(e.hi == 2.0);
}

TEST_CASE("tabulated family-a templates solve their equations") {
    for (int n : {2, 4, 6}) {
        for (double a : {-1.0, 0.5, 1.0}) {
            CAPTURE(n);
            CAPTURE(a);
            const FamilyDescriptor fam{FamilyKind::family_a, n, a, 1.0};
            const EquationSpec eq = family_equation(fam);
            for (const auto& [TT, XX] : {std::pair{T, X}, std::pair{X, T}}) {
                CHECK(residual_general(eq.coefficient, family_template(fam), TT, XX, grid_on(eq.domain)).max_rel <=
                      1e-8);
            }
        }
    }
}

TEST_CASE("the n = 4 table line with 3(V - U) is not a solution") {
    const double a = 1.0;
    const Expr1D D = pow(x, 5.0) + a;
    const SolutionTemplate literal({{1, -3.0 / D}, {2, -3.0 * x / D}, {3, pow(x, 2.0) / D}},
                                   {{1, 3.0 / D}, {2, -3.0 * x / D}, {3, -pow(x, 2.0) / D}});
    const Interval d{1.0, 2.0};
    CHECK(residual_general(family_a_coefficient(4, a), literal, T, X, grid_on(d)).max_rel > 1e-3);
    CHECK(residual_general(family_a_coefficient(4, a), family_a_solution(4, a), T, X, grid_on(d)).max_rel <= 1e-8);
}

TEST_CASE("chain-built and tabulated family-a templates agree up to a constant") {
    for (int n : {2, 4, 6}) {
        for (double a : {-1.0, 0.5, 1.0}) {
            CAPTURE(n);
            CAPTURE(a);
            const ChainResult res = family_a_from_chain(n, a);
            const auto [mean, sd] = ratio_stats(res.solution, family_a_solution(n, a), res.equation.domain);
            CHECK(std::isfinite(mean));
            CHECK(sd <= 1e-9 * std::abs(mean));
        }
    }
}

TEST_CASE("family-a with a = 0 is the EPD equation of order n + 2") {
    for (int n : {2, 4}) {
        const Interval d{1.0, 2.0};
        CHECK(max_pointwise_difference(family_a_coefficient(n, 0.0), epd_coefficient(n + 2), d) <= 1e-12);
        const auto [mean, sd] = ratio_stats(family_a_solution(n, 0.0), epd_even_solution(n + 2), d);
        CHECK(sd <= 1e-9 * std::abs(mean));
    }
}

TEST_CASE("acoustics change of variables") {
    const FamilyDescriptor cases[] = {
        {FamilyKind::euler_acoustics, 2, 0.0, 1.0}, {FamilyKind::euler_acoustics, 4, 0.0, 1.0},
        {FamilyKind::euler_acoustics, 6, 0.0, 1.0}, {FamilyKind::family_a, 2, 1.0, 1.0},
        {FamilyKind::family_a, 4, 0.5, 2.0},        {FamilyKind::family_a, 6, -1.0, 1.0},
    };
    for (const FamilyDescriptor& fam : cases) {
        CAPTURE(fam.name());
        const EquationSpec eq = family_equation(fam);
        const AcousticsEquation ac = to_acoustics(eq, fam);
        CHECK(ac.y_range.lo < ac.y_range.hi);
        for (double p : eq.domain.chebyshev(9)) {
            const auto y = [&](double s) { return ac.y_of_x(s); };
            const double slope = testsupport::d1(y, p, 1e-4);
            CHECK(ac.x_of_y(ac.y_of_x(p)) == doctest::Approx(p).epsilon(1e-12));
            CHECK(ac.f(ac.y_of_x(p)) == doctest::Approx(slope * slope).epsilon(1e-7));
        }
        const Grid2D g{0.0, 1.0, 32, ac.y_range.lo, ac.y_range.hi, 32};
        CHECK(residual_acoustics(ac, family_template(fam), T, X, g).max_rel <= 1e-8);
    }
}

TEST_CASE("euler-acoustics coefficient in closed form") {
    // n = 2: y = -1/x, f = y^4 = x^-4
    const FamilyDescriptor fam{FamilyKind::euler_acoustics, 2, 0.0, 1.0};
    const AcousticsEquation ac = to_acoustics(family_equation(fam), fam);
    CHECK(ac.y_of_x(2.0) == doctest::Approx(-0.5));
    CHECK(ac.f(-0.5) == doctest::Approx(0.0625));
}

TEST_CASE("acoustics jets agree with finite differences in y") {
    const FamilyDescriptor fam{FamilyKind::family_a, 2, 1.0, 1.0};
    const AcousticsEquation ac = to_acoustics(family_equation(fam), fam);
    const AcousticsEvaluator ev(ac, family_template(fam));
    const double y0 = ac.y_range.mid(), t0 = 0.4;
    const Jet2 j = ev.jet(T, X, t0, y0);
    const auto along_y = [&](double y) { return ev.jet(T, X, t0, y).value(); };
    CHECK(j(0, 1) == doctest::Approx(testsupport::d1(along_y, y0, 1e-3)).epsilon(1e-7));
    CHECK(j(0, 2) == doctest::Approx(testsupport::d2(along_y, y0, 1e-3)).epsilon(1e-5));
    CHECK(j(2, 0) == doctest::Approx(ac.f(y0) * j(0, 2)).epsilon(1e-10));
}

TEST_CASE("pressure laws agree in dp/drho and up to a constant in p") {
    for (int n : {2, 4, 6}) {
        for (double a : {-1.0, -0.5, 0.0, 0.5, 0.7, 1.0}) {
            CAPTURE(n);
            CAPTURE(a);
            const PressureConsistencyReport rep = pressure_consistency_check(n, a);
            CHECK(rep.max_derivative_difference <= 1e-10);
            CHECK(rep.max_pressure_difference <= 1e-10 * (1.0 + std::abs(rep.offset)));
        }
    }
}

TEST_CASE("special pressure derivative matches the closed-form sound speed") {
    for (int n : {2, 4, 6}) {
        for (double a : {-0.5, 0.0, 0.7}) {
            const PressureLaw law(n, a);
            const Expr1D p = pressure_special(n, a);
            for (double rho : law.density_samples_range().chebyshev(9)) {
                const auto f = [&](double r) { return p(r); };
                CHECK(law.dp_drho(rho) == doctest::Approx(testsupport::d1(f, rho, 1e-3)).epsilon(1e-7));
                CHECK(law.pressure(rho) == doctest::Approx(p(rho)).epsilon(1e-14));
            }
        }
    }
    // n = 2, a = 0: p = rho^{5/3} / 15
    CHECK(pressure_special(2, 0.0)(8.0) == doctest::Approx(32.0 / 15.0));
}
