#pragma once

// Rank-(k, m) general solutions
//
//     u(t, x) = sum_i A_i(x) T^(i)(t + x) + sum_j B_j(x) X^(j)(t - x)
//
// stored as two order -> coefficient maps, plus the jet machinery that
// evaluates u and its mixed partials exactly (symbolic differentiation of the
// template, pointwise evaluation of coefficients and profiles).

#include <map>
#include <span>
#include <string>
#include <vector>

#include "gensol/expr.hpp"
#include "gensol/profile.hpp"

namespace gensol {

class SolutionTemplate {
public:
    using Part = std::map<int, Expr1D>;

    SolutionTemplate() = default;
    SolutionTemplate(Part plus_part, Part minus_part);

    /// u = T(t + x) + X(t - x)
    static SolutionTemplate wave();

    const Part& plus_part() const noexcept { return plus_; }
    const Part& minus_part() const noexcept { return minus_; }

    /// Coefficient of T^(order) (zero if absent).
    Expr1D plus(int order) const;
    Expr1D minus(int order) const;

    /// Highest profile derivative order used, -1 for the empty template.
    int max_order() const;
    bool empty() const { return plus_.empty() && minus_.empty(); }

    /// Field value at (t, x) by direct summation.
    double evaluate(const ProfileFunction& T, const ProfileFunction& X, double t, double x) const;

    std::string summary() const;

private:
    Part plus_;
    Part minus_;
};

SolutionTemplate diff_x(const SolutionTemplate& u);
SolutionTemplate diff_t(const SolutionTemplate& u);
SolutionTemplate scale(const SolutionTemplate& u, const Expr1D& c);
SolutionTemplate add(const SolutionTemplate& a, const SolutionTemplate& b);

/// Mixed partials d_t^p d_x^q u at one point, p + q <= order.
class Jet2 {
public:
    Jet2(double t, double x, int order);

    double t() const noexcept { return t_; }
    double x() const noexcept { return x_; }
    int order() const noexcept { return order_; }

    double& operator()(int p, int q);
    double operator()(int p, int q) const;

    double value() const { return (*this)(0, 0); }

private:
    std::size_t index(int p, int q) const;

    double t_;
    double x_;
    int order_;
    std::vector<double> data_;
};

/// Precomputes d_x^q of a template for q <= order so jets can be evaluated
/// repeatedly (t-derivatives only shift orders).
class JetEvaluator {
public:
    JetEvaluator(SolutionTemplate u, int order);

    int order() const noexcept { return order_; }
    const SolutionTemplate& base() const noexcept { return x_derivatives_.front(); }

    /// Coefficient values of every x-derivative template at a fixed x.
    class Column {
    public:
        Jet2 jet(const ProfileFunction& T, const ProfileFunction& X, double t) const;
        double x() const noexcept { return x_; }

    private:
        friend class JetEvaluator;
        struct Entry {
            int order;
            double coefficient;
        };
        double x_ = 0.0;
        int order_ = 0;
        std::vector<std::vector<Entry>> plus_;
        std::vector<std::vector<Entry>> minus_;
    };

    Column at(double x) const;

    /// Throws PreconditionError if either profile cannot supply the derivative
    /// orders this evaluator needs.
    void check_profiles(const ProfileFunction& T, const ProfileFunction& X) const;

    Jet2 jet(const ProfileFunction& T, const ProfileFunction& X, double t, double x) const;

private:
    int order_;
    std::vector<SolutionTemplate> x_derivatives_;
};

/// All partials up to `order` at (t, x), by exact template differentiation.
Jet2 eval_jet(const SolutionTemplate& u, const ProfileFunction& T, const ProfileFunction& X,
              double t, double x, int order = 2);

}  // namespace gensol
