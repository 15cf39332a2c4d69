#pragma once

// Closed-form expressions in one real variable with exact symbolic derivatives.
//
// The node set is deliberately small: constants, the variable, powers with a
// real exponent, exp/sinh/cosh/log, the four arithmetic operations, a definite
// antiderivative evaluated by adaptive Gauss-Kronrod quadrature and an
// "external" node for functions that are only known numerically but whose
// derivative can still be written as an expression (ODE solutions).

#include <memory>
#include <string>
#include <vector>

#include "gensol/errors.hpp"

namespace gensol {

class Expr1D;

/// Function supplied from outside the tree, e.g. a tabulated ODE solution.
/// derivative() must return an expression built from the same data so that
/// repeated differentiation stays exact with respect to the tabulation.
class ExternalFunction {
public:
    virtual ~ExternalFunction() = default;
    virtual double value(double x) const = 0;
    virtual Expr1D derivative() const = 0;
    virtual std::string name() const = 0;
};

class Expr1D {
public:
    enum class Kind {
        constant,
        variable,
        power,
        exp,
        sinh,
        cosh,
        log,
        sum,
        product,
        quotient,
        antiderivative,
        external,
    };

    /// Implicit from double: a constant expression.
    Expr1D(double value = 0.0);  // NOLINT(google-explicit-constructor)

    static Expr1D variable();
    static Expr1D external(std::shared_ptr<const ExternalFunction> fn);

    /// Evaluates at x. Throws DomainError on a vanishing denominator, a
    /// non-positive base under a non-integer exponent, log of a non-positive
    /// number, or any non-finite intermediate result.
    double operator()(double x) const;

    /// True if evaluation at x succeeds.
    bool in_domain(double x) const;

    Expr1D diff() const;

    Kind kind() const;
    bool is_constant() const { return kind() == Kind::constant; }
    bool is_zero() const;
    bool is_one() const;
    /// Constant value, or exponent for power nodes, or base point for
    /// antiderivative nodes.
    double scalar() const;
    /// Operand list (empty for leaves).
    const std::vector<Expr1D>& operands() const;

    /// Same underlying node (pointer identity).
    bool same_node(const Expr1D& other) const { return node_ == other.node_; }

    /// Debug dump, fully parenthesised.
    std::string dump() const;
    std::size_t node_count() const;

    struct Node;

private:
    explicit Expr1D(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    double eval(double x) const;

    std::shared_ptr<const Node> node_;

    friend Expr1D operator+(const Expr1D&, const Expr1D&);
    friend Expr1D operator*(const Expr1D&, const Expr1D&);
    friend Expr1D operator/(const Expr1D&, const Expr1D&);
    friend Expr1D pow(const Expr1D&, double);
    friend Expr1D exp(const Expr1D&);
    friend Expr1D sinh(const Expr1D&);
    friend Expr1D cosh(const Expr1D&);
    friend Expr1D log(const Expr1D&);
    friend Expr1D antiderivative(const Expr1D&, double, double);
};

Expr1D operator+(const Expr1D& a, const Expr1D& b);
Expr1D operator-(const Expr1D& a, const Expr1D& b);
Expr1D operator-(const Expr1D& a);
Expr1D operator*(const Expr1D& a, const Expr1D& b);
Expr1D operator/(const Expr1D& a, const Expr1D& b);

Expr1D pow(const Expr1D& base, double exponent);
Expr1D exp(const Expr1D& arg);
Expr1D sinh(const Expr1D& arg);
Expr1D cosh(const Expr1D& arg);
Expr1D log(const Expr1D& arg);

inline constexpr double default_quadrature_tolerance = 1e-12;

/// x -> integral of integrand from base_point to x.
Expr1D antiderivative(const Expr1D& integrand, double base_point,
                      double abs_tolerance = default_quadrature_tolerance);

/// n-th derivative.
Expr1D diff(const Expr1D& e, int order = 1);

/// Structural equality (same tree shape, kinds and scalars).
bool structurally_equal(const Expr1D& a, const Expr1D& b);

/// Adaptive Gauss-Kronrod (7/15) integral with an absolute error target.
double integrate(const Expr1D& integrand, double a, double b,
                 double abs_tolerance = default_quadrature_tolerance);

}  // namespace gensol
