#include "gensol/families.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gensol/errors.hpp"

namespace gensol {

namespace {

const Expr1D& var() {
    static const Expr1D x = Expr1D::variable();
    return x;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void require_even(int n) {
    if (n < 2 || n % 2 != 0) {
        throw PreconditionError("n must be an even positive integer, got " + std::to_string(n));
    }
}

}  // namespace

void FamilyDescriptor::validate() const {
    require_even(n);
    if (kind == FamilyKind::family_a && n > 6) {
        throw PreconditionError("family-a templates are tabulated for n in {2, 4, 6} only");
    }
    if (c == 0.0) {
        throw PreconditionError("scale constant c must be nonzero");
    }
}

std::string FamilyDescriptor::name() const {
    std::string out = to_string(kind) + " n=" + std::to_string(n);
    if (kind == FamilyKind::family_a) {
        out += " a=" + fmt(a) + " c=" + fmt(c);
    }
    return out;
}

FamilyKind parse_family_kind(const std::string& name) {
    if (name == "epd" || name == "epd-even") {
        return FamilyKind::epd_even;
    }
    if (name == "family-a") {
        return FamilyKind::family_a;
    }
    if (name == "euler-acoustics") {
        return FamilyKind::euler_acoustics;
    }
    throw PreconditionError("unknown family '" + name + "'");
}

std::string to_string(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::epd_even: return "epd-even";
        case FamilyKind::family_a: return "family-a";
        case FamilyKind::euler_acoustics: return "euler-acoustics";
    }
    return "?";
}

SolutionTemplate epd_even_solution(int n) {
    require_even(n);
    SolutionTemplate u = SolutionTemplate::wave();
    const Expr1D inv_x = 1.0 / var();
    for (int k = 0; k < n / 2; ++k) {
        u = scale(diff_x(u), inv_x);
    }
    return u;
}

Expr1D family_a_coefficient(int n, double a) {
    const Expr1D& x = var();
    const double m = n;
    return ((m + 2.0) * pow(x, m + 1.0) - a * m) / (pow(x, m + 2.0) + a * x);
}

Interval family_a_domain(int n, double a) {
    Interval d{1.0, 2.0};
    if (a < 0.0) {
        const double root = std::pow(-a, 1.0 / (n + 1));
        if (root > d.lo - 0.1) {
            d.lo = root + 0.1;
            d.hi = d.lo + 1.0;
        }
    }
    return d;
}

SolutionTemplate family_a_solution(int n, double a) {
    const Expr1D& x = var();
    const Expr1D D = pow(x, n + 1.0) + a;
    // U^(k) = T^(k+1)(t+x), V^(k) = X^(k+1)(t-x)
    switch (n) {
        case 2:
            // (V - U + x (U' + V')) / (x^3 + a)
            return SolutionTemplate({{1, -1.0 / D}, {2, x / D}}, {{1, 1.0 / D}, {2, x / D}});
        case 4:
            // (3 (U - V) - 3x (U' + V') + x^2 (U'' - V'')) / (x^5 + a)
            return SolutionTemplate({{1, 3.0 / D}, {2, -3.0 * x / D}, {3, pow(x, 2.0) / D}},
                                    {{1, -3.0 / D}, {2, -3.0 * x / D}, {3, -pow(x, 2.0) / D}});
        case 6:
            // (15 (V - U) + 15x (U' + V') - 6x^2 (U'' - V'') + x^3 (U''' + V''')) / (x^7 + a)
            return SolutionTemplate(
                {{1, -15.0 / D}, {2, 15.0 * x / D}, {3, -6.0 * pow(x, 2.0) / D}, {4, pow(x, 3.0) / D}},
                {{1, 15.0 / D}, {2, 15.0 * x / D}, {3, 6.0 * pow(x, 2.0) / D}, {4, pow(x, 3.0) / D}});
        default:
            throw PreconditionError("family-a templates are tabulated for n in {2, 4, 6} only");
    }
}

EquationSpec family_equation(const FamilyDescriptor& family, const Interval& domain) {
    family.validate();
    if (family.kind == FamilyKind::family_a) {
        const Expr1D& x = var();
        const double m = family.n;
        EquationSpec eq;
        eq.coefficient = family_a_coefficient(family.n, family.a);
        eq.domain = domain;
        eq.integrating_factor = pow(x, m) / pow(pow(x, m + 1.0) + family.a, 2.0);
        eq.provenance = {family.name()};
        return eq;
    }
    EquationSpec eq = EquationSpec::epd(family.n, domain);
    eq.provenance = {family.name()};
    return eq;
}

EquationSpec family_equation(const FamilyDescriptor& family) {
    const Interval domain = family.kind == FamilyKind::family_a ? family_a_domain(family.n, family.a)
                                                                : Interval{1.0, 2.0};
    return family_equation(family, domain);
}

SolutionTemplate family_template(const FamilyDescriptor& family) {
    family.validate();
    return family.kind == FamilyKind::family_a ? family_a_solution(family.n, family.a)
                                               : epd_even_solution(family.n);
}

ChainResult family_a_from_chain(int n, double a, const Interval& domain) {
    require_even(n);
    const EquationSpec start = EquationSpec::epd(n, domain);
    const Expr1D r = r_prop3(start.coefficient, a, 1.0, domain, start.integrating_factor);
    const TransformStep step = make_step(start.coefficient, Expr1D(1.0), r, 0.0, domain);
    ChainResult result = chain_apply({step}, start, epd_even_solution(n));
    const double mismatch = max_pointwise_difference(result.equation.coefficient,
                                                     family_a_coefficient(n, a), domain);
    if (!(mismatch <= coefficient_match_tolerance)) {
        throw PreconditionError("chain coefficient differs from the family-a coefficient by " + fmt(mismatch));
    }
    return result;
}

ChainResult family_a_from_chain(int n, double a) { return family_a_from_chain(n, a, family_a_domain(n, a)); }

AcousticsEquation to_acoustics(const EquationSpec& equation, const FamilyDescriptor& family) {
    family.validate();
    const Expr1D& v = var();
    const double m = family.n;
    AcousticsEquation out;
    out.family = family;
    out.x_domain = equation.domain;
    if (family.kind == FamilyKind::family_a) {
        const double a = family.a;
        const double c = family.c;
        out.y_of_x = c / (pow(v, m + 1.0) + a);
        out.x_of_y = pow((c - a * v) / v, 1.0 / (m + 1.0));
        out.f = ((m + 1.0) / c) * ((m + 1.0) / c) * pow(v, (2.0 * m + 4.0) / (m + 1.0)) *
                pow(c - a * v, 2.0 * m / (m + 1.0));
    } else {
        out.y_of_x = pow(v, 1.0 - m) / (1.0 - m);
        out.x_of_y = pow((1.0 - m) * v, 1.0 / (1.0 - m));
        out.f = pow((1.0 - m) * v, 2.0 * m / (m - 1.0));
    }

    const Expr1D dy = out.y_of_x.diff();
    const Expr1D d2y = dy.diff();
    const auto samples = equation.domain.chebyshev(default_sample_count);
    double sign = 0.0;
    for (double x : samples) {
        const double slope = dy(x);
        const double g_term = equation.coefficient(x) * slope;
        const double res = std::abs(d2y(x) + g_term) / (std::max(std::abs(d2y(x)), std::abs(g_term)) + 1e-30);
        if (!(res <= 1e-10)) {
            throw PreconditionError("change of variables does not satisfy y'' + G y' = 0 at x = " + fmt(x));
        }
        if (slope == 0.0 || (sign != 0.0 && slope * sign < 0.0)) {
            throw PreconditionError("y(x) is not strictly monotone on the working domain");
        }
        sign = slope > 0.0 ? 1.0 : -1.0;
        const double y = out.y_of_x(x);
        if (!(std::abs(out.x_of_y(y) - x) <= 1e-12 * std::max(1.0, std::abs(x)))) {
            throw PreconditionError("x(y(x)) round trip failed at x = " + fmt(x));
        }
        const double expected = slope * slope;
        if (!(std::abs(out.f(y) - expected) <= 1e-10 * std::abs(expected))) {
            throw PreconditionError("f(y(x)) differs from y'(x)^2 at x = " + fmt(x));
        }
    }
    const double y_lo = out.y_of_x(equation.domain.lo);
    const double y_hi = out.y_of_x(equation.domain.hi);
    out.y_range = Interval{std::min(y_lo, y_hi), std::max(y_lo, y_hi)};
    return out;
}

AcousticsEvaluator::AcousticsEvaluator(AcousticsEquation equation, const SolutionTemplate& u)
    : equation_(std::move(equation)), u_(u, 2), dy_(equation_.y_of_x.diff()), d2y_(dy_.diff()) {}

Jet2 AcousticsEvaluator::jet(const ProfileFunction& T, const ProfileFunction& X, double t, double y) const {
    const Interval& yr = equation_.y_range;
    const double slack = 1e-12 * std::max(1.0, std::abs(yr.hi) + std::abs(yr.lo));
    if (y < yr.lo - slack || y > yr.hi + slack) {
        throw DomainError("y outside the image of the working x-domain", y);
    }
    const double x = equation_.x_of_y(y);
    const Jet2 uj = u_.at(x).jet(T, X, t);
    const double yp = dy_(x);
    const double ypp = d2y_(x);
    Jet2 out(t, y, 2);
    out(0, 0) = uj(0, 0);
    out(1, 0) = uj(1, 0);
    out(2, 0) = uj(2, 0);
    out(0, 1) = uj(0, 1) / yp;
    out(1, 1) = uj(1, 1) / yp;
    out(0, 2) = (uj(0, 2) - out(0, 1) * ypp) / (yp * yp);
    return out;
}

Jet2 acoustics_eval(const AcousticsEquation& equation, const SolutionTemplate& u, const ProfileFunction& T,
                    const ProfileFunction& X, double t, double y, int order) {
    if (order < 0 || order > 2) {
        throw PreconditionError("acoustics jets are available up to order 2");
    }
    const AcousticsEvaluator ev(equation, u);
    ev.evaluator().check_profiles(T, X);
    const Jet2 full = ev.jet(T, X, t, y);
    Jet2 out(t, y, order);
    for (int p = 0; p <= order; ++p) {
        for (int q = 0; p + q <= order; ++q) {
            out(p, q) = full(p, q);
        }
    }
    return out;
}

Expr1D pressure_lagrangian(int n, double a, double c) {
    const Expr1D& rho = var();
    const double m = n;
    const Expr1D numerator =
        c * c * (m - 1.0) * pow(rho, 2.0) + c * a * (m * m - 1.0) * rho - a * a * (m + 1.0) * (m + 1.0);
    return numerator / (c * (m + 3.0) * (m * m - 1.0)) * pow(c * rho - a, (1.0 - m) / (m + 1.0));
}

Expr1D pressure_special(int n, double a) {
    const Expr1D s = var() - a;
    const double m = n;
    return pow(s, (m + 3.0) / (m + 1.0)) / ((m + 1.0) * (m + 3.0)) + a * pow(s, 2.0 / (m + 1.0)) / (m + 1.0) -
           a * a * pow(s, (1.0 - m) / (m + 1.0)) / (m * m - 1.0);
}

PressureConsistencyReport pressure_consistency_check(int n, double a, int samples) {
    require_even(n);
    PressureConsistencyReport rep;
    rep.n = n;
    rep.a = a;
    rep.rho_range = Interval{a + 0.1, a + 3.1};
    rep.samples = samples;
    const Expr1D p1 = pressure_lagrangian(n, a, 1.0);
    const Expr1D p2 = pressure_special(n, a);
    const Expr1D dp1 = p1.diff();
    const Expr1D dp2 = p2.diff();
    rep.offset = p1(rep.rho_range.lo) - p2(rep.rho_range.lo);
    for (double rho : rep.rho_range.uniform(samples)) {
        rep.max_pressure_difference =
            std::max(rep.max_pressure_difference, std::abs(p1(rho) - p2(rho) - rep.offset));
        rep.max_derivative_difference = std::max(rep.max_derivative_difference, std::abs(dp1(rho) - dp2(rho)));
    }
    return rep;
}

}  // namespace gensol
