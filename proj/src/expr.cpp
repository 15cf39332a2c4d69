#include "gensol/expr.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstdio>
#include <functional>

namespace gensol {

struct Expr1D::Node {
    Kind kind;
    double scalar = 0.0;
    std::vector<Expr1D> operands;
    std::shared_ptr<const ExternalFunction> external;
    double tolerance = default_quadrature_tolerance;
};

namespace {

bool is_integer(double p) { return std::isfinite(p) && p == std::nearbyint(p); }

double checked(double value, const char* what, double x) {
    if (!std::isfinite(value)) {
        throw DomainError(std::string("non-finite value in ") + what, x);
    }
    return value;
}

std::string format_scalar(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double adaptive_gk15(const std::function<double(double)>& f, double a, double b, double tol,
                     int depth) {
    using boost::math::quadrature::gauss_kronrod;
    double error = 0.0;
    const double value = gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &error);
    if (error <= tol) {
        return value;
    }
    if (depth >= 40) {
        throw NumericalError("adaptive quadrature did not reach tolerance on [" +
                             format_scalar(a) + ", " + format_scalar(b) + "]");
    }
    const double mid = 0.5 * (a + b);
    return adaptive_gk15(f, a, mid, 0.5 * tol, depth + 1) +
           adaptive_gk15(f, mid, b, 0.5 * tol, depth + 1);
}

}  // namespace

Expr1D::Expr1D(double value)
    : node_(std::make_shared<const Node>(Node{Kind::constant, value, {}, nullptr})) {}

Expr1D Expr1D::variable() {
    static const Expr1D x(std::make_shared<const Node>(Node{Kind::variable, 0.0, {}, nullptr}));
    return x;
}

Expr1D Expr1D::external(std::shared_ptr<const ExternalFunction> fn) {
    if (!fn) {
        throw PreconditionError("external expression requires a function");
    }
    return Expr1D(std::make_shared<const Node>(Node{Kind::external, 0.0, {}, std::move(fn)}));
}

Expr1D::Kind Expr1D::kind() const { return node_->kind; }
double Expr1D::scalar() const { return node_->scalar; }
const std::vector<Expr1D>& Expr1D::operands() const { return node_->operands; }
bool Expr1D::is_zero() const { return is_constant() && node_->scalar == 0.0; }
bool Expr1D::is_one() const { return is_constant() && node_->scalar == 1.0; }

double Expr1D::operator()(double x) const { return checked(eval(x), "expression", x); }

bool Expr1D::in_domain(double x) const {
    try {
        (void)(*this)(x);
        return true;
    } catch (const DomainError&) {
        return false;
    }
}

double Expr1D::eval(double x) const {
    const Node& n = *node_;
    switch (n.kind) {
        case Kind::constant:
            return n.scalar;
        case Kind::variable:
            return x;
        case Kind::power: {
            const double base = n.operands[0].eval(x);
            if (is_integer(n.scalar)) {
                if (base == 0.0 && n.scalar < 0.0) {
                    throw DomainError("zero base with negative exponent", x);
                }
            } else if (!(base > 0.0)) {
                throw DomainError("non-positive base of a real-exponent power", x);
            }
            return checked(std::pow(base, n.scalar), "power", x);
        }
        case Kind::exp:
            return checked(std::exp(n.operands[0].eval(x)), "exp", x);
        case Kind::sinh:
            return checked(std::sinh(n.operands[0].eval(x)), "sinh", x);
        case Kind::cosh:
            return checked(std::cosh(n.operands[0].eval(x)), "cosh", x);
        case Kind::log: {
            const double arg = n.operands[0].eval(x);
            if (!(arg > 0.0)) {
                throw DomainError("logarithm of a non-positive number", x);
            }
            return std::log(arg);
        }
        case Kind::sum:
            return n.operands[0].eval(x) + n.operands[1].eval(x);
        case Kind::product:
            return n.operands[0].eval(x) * n.operands[1].eval(x);
        case Kind::quotient: {
            const double den = n.operands[1].eval(x);
            if (!(std::abs(den) >= 1e-300)) {
                throw DomainError("vanishing denominator", x);
            }
            return checked(n.operands[0].eval(x) / den, "quotient", x);
        }
        case Kind::antiderivative:
            return integrate(n.operands[0], n.scalar, x, n.tolerance);
        case Kind::external:
            return checked(n.external->value(x), "external function", x);
    }
    return 0.0;
}

Expr1D Expr1D::diff() const {
    const Node& n = *node_;
    switch (n.kind) {
        case Kind::constant:
            return Expr1D(0.0);
        case Kind::variable:
            return Expr1D(1.0);
        case Kind::power: {
            const Expr1D& f = n.operands[0];
            return n.scalar * pow(f, n.scalar - 1.0) * f.diff();
        }
        case Kind::exp:
            return *this * n.operands[0].diff();
        case Kind::sinh:
            return cosh(n.operands[0]) * n.operands[0].diff();
        case Kind::cosh:
            return sinh(n.operands[0]) * n.operands[0].diff();
        case Kind::log:
            return n.operands[0].diff() / n.operands[0];
        case Kind::sum:
            return n.operands[0].diff() + n.operands[1].diff();
        case Kind::product: {
            const Expr1D& f = n.operands[0];
            const Expr1D& g = n.operands[1];
            return f.diff() * g + f * g.diff();
        }
        case Kind::quotient: {
            const Expr1D& f = n.operands[0];
            const Expr1D& g = n.operands[1];
            return f.diff() / g - f * g.diff() / pow(g, 2.0);
        }
        case Kind::antiderivative:
            return n.operands[0];
        case Kind::external:
            return n.external->derivative();
    }
    return Expr1D(0.0);
}

std::string Expr1D::dump() const {
    const Node& n = *node_;
    auto unary = [&](const char* name) { return std::string(name) + "(" + n.operands[0].dump() + ")"; };
    switch (n.kind) {
        case Kind::constant:
            return format_scalar(n.scalar);
        case Kind::variable:
            return "x";
        case Kind::power:
            return "(" + n.operands[0].dump() + ")^" + format_scalar(n.scalar);
        case Kind::exp:
            return unary("exp");
        case Kind::sinh:
            return unary("sinh");
        case Kind::cosh:
            return unary("cosh");
        case Kind::log:
            return unary("log");
        case Kind::sum:
            return "(" + n.operands[0].dump() + " + " + n.operands[1].dump() + ")";
        case Kind::product:
            return "(" + n.operands[0].dump() + " * " + n.operands[1].dump() + ")";
        case Kind::quotient:
            return "(" + n.operands[0].dump() + " / " + n.operands[1].dump() + ")";
        case Kind::antiderivative:
            return "int[" + format_scalar(n.scalar) + ", x](" + n.operands[0].dump() + ")";
        case Kind::external:
            return n.external->name();
    }
    return "?";
}

std::size_t Expr1D::node_count() const {
    std::size_t count = 1;
    for (const auto& op : node_->operands) {
        count += op.node_count();
    }
    return count;
}

Expr1D operator+(const Expr1D& a, const Expr1D& b) {
    if (a.is_constant() && b.is_constant()) {
        return Expr1D(a.scalar() + b.scalar());
    }
    if (a.is_zero()) {
        return b;
    }
    if (b.is_zero()) {
        return a;
    }
    return Expr1D(std::make_shared<const Expr1D::Node>(
        Expr1D::Node{Expr1D::Kind::sum, 0.0, {a, b}, nullptr}));
}

Expr1D operator-(const Expr1D& a) { return Expr1D(-1.0) * a; }

Expr1D operator-(const Expr1D& a, const Expr1D& b) { return a + (-b); }

Expr1D operator*(const Expr1D& a, const Expr1D& b) {
    using K = Expr1D::Kind;
    if (a.is_constant() && b.is_constant()) {
        return Expr1D(a.scalar() * b.scalar());
    }
    if (a.is_zero() || b.is_zero()) {
        return Expr1D(0.0);
    }
    if (a.is_one()) {
        return b;
    }
    if (b.is_one()) {
        return a;
    }
    if (b.is_constant()) {
        return b * a;
    }
    // c1 * (c2 * e) -> (c1 c2) * e
    if (a.is_constant() && b.kind() == K::product && b.operands()[0].is_constant()) {
        return Expr1D(a.scalar() * b.operands()[0].scalar()) * b.operands()[1];
    }
    return Expr1D(std::make_shared<const Expr1D::Node>(Expr1D::Node{K::product, 0.0, {a, b}, nullptr}));
}

Expr1D operator/(const Expr1D& a, const Expr1D& b) {
    if (b.is_one()) {
        return a;
    }
    if (a.is_zero()) {
        return Expr1D(0.0);
    }
    if (b.is_constant() && b.scalar() != 0.0) {
        return Expr1D(1.0 / b.scalar()) * a;
    }
    return Expr1D(std::make_shared<const Expr1D::Node>(
        Expr1D::Node{Expr1D::Kind::quotient, 0.0, {a, b}, nullptr}));
}

Expr1D pow(const Expr1D& base, double exponent) {
    if (exponent == 0.0) {
        return Expr1D(1.0);
    }
    if (exponent == 1.0) {
        return base;
    }
    if (base.is_constant() && (base.scalar() > 0.0 || is_integer(exponent))) {
        const double v = std::pow(base.scalar(), exponent);
        if (std::isfinite(v)) {
            return Expr1D(v);
        }
    }
    // (f^p)^q -> f^(pq) only where both sides agree on the domain
    if (base.kind() == Expr1D::Kind::power && is_integer(exponent) && is_integer(base.scalar())) {
        return pow(base.operands()[0], base.scalar() * exponent);
    }
    return Expr1D(std::make_shared<const Expr1D::Node>(
        Expr1D::Node{Expr1D::Kind::power, exponent, {base}, nullptr}));
}

Expr1D exp(const Expr1D& arg) {
    if (arg.is_constant()) {
        return Expr1D(std::exp(arg.scalar()));
    }
    return Expr1D(std::make_shared<const Expr1D::Node>(Expr1D::Node{Expr1D::Kind::exp, 0.0, {arg}, nullptr}));
}

Expr1D sinh(const Expr1D& arg) {
    if (arg.is_constant()) {
        return Expr1D(std::sinh(arg.scalar()));
    }
    return Expr1D(std::make_shared<const Expr1D::Node>(Expr1D::Node{Expr1D::Kind::sinh, 0.0, {arg}, nullptr}));
}

Expr1D cosh(const Expr1D& arg) {
    if (arg.is_constant()) {
        return Expr1D(std::cosh(arg.scalar()));
    }
    return Expr1D(std::make_shared<const Expr1D::Node>(Expr1D::Node{Expr1D::Kind::cosh, 0.0, {arg}, nullptr}));
}

Expr1D log(const Expr1D& arg) {
    if (arg.is_constant() && arg.scalar() > 0.0) {
        return Expr1D(std::log(arg.scalar()));
    }
    return Expr1D(std::make_shared<const Expr1D::Node>(Expr1D::Node{Expr1D::Kind::log, 0.0, {arg}, nullptr}));
}

Expr1D antiderivative(const Expr1D& integrand, double base_point, double abs_tolerance) {
    if (!std::isfinite(base_point)) {
        throw PreconditionError("antiderivative base point must be finite");
    }
    if (!(abs_tolerance > 0.0)) {
        throw PreconditionError("quadrature tolerance must be positive");
    }
    Expr1D::Node node{Expr1D::Kind::antiderivative, base_point, {integrand}, nullptr};
    node.tolerance = abs_tolerance;
    return Expr1D(std::make_shared<const Expr1D::Node>(std::move(node)));
}

Expr1D diff(const Expr1D& e, int order) {
    if (order < 0) {
        throw PreconditionError("derivative order must be non-negative");
    }
    Expr1D out = e;
    for (int k = 0; k < order; ++k) {
        out = out.diff();
    }
    return out;
}

bool structurally_equal(const Expr1D& a, const Expr1D& b) {
    if (a.same_node(b)) {
        return true;
    }
    if (a.kind() != b.kind() || a.scalar() != b.scalar() ||
        a.operands().size() != b.operands().size()) {
        return false;
    }
    if (a.kind() == Expr1D::Kind::external) {
        return false;
    }
    for (std::size_t i = 0; i < a.operands().size(); ++i) {
        if (!structurally_equal(a.operands()[i], b.operands()[i])) {
            return false;
        }
    }
    return true;
}

double integrate(const Expr1D& integrand, double a, double b, double abs_tolerance) {
    if (a == b) {
        return 0.0;
    }
    if (b < a) {
        return -integrate(integrand, b, a, abs_tolerance);
    }
    const std::function<double(double)> f = [&integrand](double s) { return integrand(s); };
    return adaptive_gk15(f, a, b, abs_tolerance, 0);
}

}  // namespace gensol
