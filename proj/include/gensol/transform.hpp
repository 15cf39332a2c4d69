#pragma once

// Euler-Darboux transformations between equations u_tt = u_xx + G(x) u_x.
//
// A step is parametrised by (h, r, A): h solves h'' + G h' + A h = 0, r solves
// r'' + G r' + (G' + 2 (ln h)'') r = 0, and
//
//     v = (u_x - (h'/h) u) / r
//
// solves the target equation with coefficient G1 = G + 2 r'/r. The Wronskian
// form maps u to W(u, h_1..h_n) / W(h_1'..h_n') for eigenfunctions with
// pairwise distinct A_i.

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gensol/expr.hpp"
#include "gensol/solution_template.hpp"

namespace gensol {

struct Interval {
    double lo = 1.0;
    double hi = 2.0;

    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
    /// n Chebyshev points of the first kind mapped into (lo, hi).
    std::vector<double> chebyshev(int n) const;
    /// n equispaced points including both ends.
    std::vector<double> uniform(int n) const;
};

inline constexpr int default_sample_count = 64;
inline constexpr double ode_residual_tolerance = 1e-8;
inline constexpr double coefficient_match_tolerance = 1e-10;

/// u_tt = u_xx + G(x) u_x on a working interval.
struct EquationSpec {
    Expr1D coefficient;
    Interval domain;
    /// exp(-int G dx) in closed form when known; carried through transform
    /// steps so that later quadratures stay single-level.
    std::optional<Expr1D> integrating_factor;
    std::vector<std::string> provenance;

    static EquationSpec wave(Interval domain = {});
    /// G = n/x
    static EquationSpec epd(double n, Interval domain = {});
};

/// n / x
Expr1D epd_coefficient(double n);
/// Recognises G = n/x (in the shapes produced by this library) and G = 0.
std::optional<double> match_epd_coefficient(const Expr1D& G);

struct TransformStep {
    Expr1D G;
    Expr1D h;
    Expr1D r;
    double A = 0.0;
    Expr1D G1;
};

/// G + 2 r'/r. Throws DomainError if r vanishes at a sample of the domain.
Expr1D g1_from_r(const Expr1D& G, const Expr1D& r, const Interval& domain);

/// h = c1 + c2 int exp(-int G) for A = 0. Closed form for G = n/x (n != 1)
/// and G = 0; otherwise antiderivative nodes based at domain.lo.
Expr1D h_prop2(const Expr1D& G, double c1, double c2, const Interval& domain,
               const std::optional<Expr1D>& integrating_factor = std::nullopt);

/// r = c1 E + c2 E int(1/E), E = exp(-int G) (the h = 1 solutions of the r
/// equation). G = n/x is returned as c1 x^-n + c2 x.
Expr1D r_prop3(const Expr1D& G, double c1, double c2, const Interval& domain,
               const std::optional<Expr1D>& integrating_factor = std::nullopt);

struct OdeOptions {
    double tolerance = 1e-13;
    int initial_steps = 64;
    double min_step_fraction = 1e-12;
};

/// Numerical solution of h'' + G h' + A h = 0 with h(lo) = h0, h'(lo) = dh0.
/// The result evaluates by RK4 restart from the nearest accepted node; its
/// second derivative is expressed through the ODE itself.
Expr1D h_ode_solve(const Expr1D& G, double A, double h0, double dh0, const Interval& domain,
                   const OdeOptions& options = {});

/// r = h'/h. Throws DomainError if h vanishes on the domain.
Expr1D r_from_h_prop1(const Expr1D& h, const Interval& domain);

/// Max relative residual of h'' + G h' + A h over Chebyshev samples.
double h_equation_residual(const Expr1D& G, const Expr1D& h, double A, const Interval& domain,
                           int samples = default_sample_count);
/// Max relative residual of r'' + G r' + (G' + 2 (ln h)'') r, with (ln h)''
/// taken as (h'' h - h'^2) / h^2.
double r_equation_residual(const Expr1D& G, const Expr1D& h, const Expr1D& r,
                           const Interval& domain, int samples = default_sample_count);
/// Max |a(x) - b(x)| / (1 + |a(x)|) over Chebyshev samples.
double max_pointwise_difference(const Expr1D& a, const Expr1D& b, const Interval& domain,
                                int samples = default_sample_count);

/// Validates both ODE residuals (<= 1e-8) and builds G1. Throws
/// PreconditionError naming the failing equation.
TransformStep make_step(const Expr1D& G, const Expr1D& h, const Expr1D& r, double A,
                        const Interval& domain);

struct Eigenfunction {
    Expr1D h;
    double A = 0.0;
};

/// Applies a validated step. Returns the target equation and the template of
/// v = (u_x - (h'/h) u)/r, optionally normalised so the highest-order
/// coefficient equals 1 at the domain midpoint.
std::pair<EquationSpec, SolutionTemplate> lemma1_apply(const TransformStep& step,
                                                       const EquationSpec& source,
                                                       const SolutionTemplate& u,
                                                       bool normalize = true);

/// z = W(u, h_1..h_n) / W(h_1'..h_n'), 1 <= n <= 3, target coefficient
/// G + 2 d/dx ln(W(h')/W(h)).
std::pair<EquationSpec, SolutionTemplate> lemma2_wronskian(const EquationSpec& source,
                                                           const SolutionTemplate& u,
                                                           const std::vector<Eigenfunction>& hs,
                                                           bool normalize = true);

/// Symbolic determinant by cofactor expansion (small sizes only).
Expr1D determinant(const std::vector<std::vector<Expr1D>>& m);
/// W(f_1..f_n): rows are derivative orders 0..n-1.
Expr1D wronskian(const std::vector<Expr1D>& fs);

/// Divides every coefficient by the highest-order coefficient's value at x_ref.
/// Returns the divisor.
double normalize_template(SolutionTemplate& u, double x_ref);

// Declarative chain recipes.
struct HFromProp2 {
    double c1 = 1.0;
    double c2 = 1.0;
};
struct HFromOde {
    double A = -1.0;
    double h0 = 1.0;
    double dh0 = 0.0;
};
/// c e^{kx} + b e^{-kx}, an eigenfunction of the wave equation with A = -k^2.
struct HExponential {
    double k = 1.0;
    double c = 1.0;
    double b = 0.0;
};
struct HGiven {
    Expr1D h;
    double A = 0.0;
    std::string label = "given";
};
using HRecipe = std::variant<HFromProp2, HFromOde, HExponential, HGiven>;

struct Prop3Recipe {
    double c1 = 1.0;
    double c2 = 1.0;
};
struct Prop1Recipe {
    HRecipe h;
};
struct Lemma2Recipe {
    std::vector<HRecipe> hs;
};
using StepRecipe = std::variant<Prop3Recipe, Prop1Recipe, Lemma2Recipe>;

std::string describe(const StepRecipe& recipe);

/// Eigenfunction produced by a recipe for the given equation.
Eigenfunction realize(const HRecipe& recipe, const EquationSpec& equation);

struct WronskianStep {
    Expr1D G;
    std::vector<Eigenfunction> hs;
};
using ChainStep = std::variant<TransformStep, WronskianStep>;

struct ChainResult {
    EquationSpec equation;
    SolutionTemplate solution;
    std::vector<ChainStep> steps;
};

/// Applies explicit steps in order. Each step's source coefficient must agree
/// with the current coefficient to 1e-10 on 64 Chebyshev samples.
ChainResult chain_apply(const std::vector<ChainStep>& steps, const EquationSpec& start,
                        const SolutionTemplate& u, bool normalize = true);

/// Builds each step from its recipe against the current equation, then
/// applies it.
ChainResult chain_build(const std::vector<StepRecipe>& recipes, const EquationSpec& start,
                        const SolutionTemplate& u, bool normalize = true);

}  // namespace gensol
