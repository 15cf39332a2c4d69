#pragma once

// Independent checks of constructed solutions: PDE residuals from exact jets
// and a leapfrog reference solver for v_tt = f(y) v_yy.

#include <functional>
#include <string>
#include <vector>

#include "gensol/expr.hpp"
#include "gensol/families.hpp"
#include "gensol/profile.hpp"
#include "gensol/solution_template.hpp"

namespace gensol {

/// Uniform tensor grid over [t0, t1] x [s0, s1] with endpoints included.
/// The spatial variable is x or y depending on the equation.
struct Grid2D {
    double t0 = 0.0;
    double t1 = 1.0;
    int nt = 32;
    double s0 = 1.0;
    double s1 = 2.0;
    int ns = 32;

    std::vector<double> times() const;
    std::vector<double> positions() const;
};

struct ResidualReport {
    Grid2D grid;
    std::size_t points = 0;
    double max_abs = 0.0;
    /// max over points of |res| / (max |term| + 1e-30)
    double max_rel = 0.0;
    /// root-mean-square of the absolute residual
    double l2 = 0.0;
    double worst_t = 0.0;
    double worst_s = 0.0;
};

inline constexpr double residual_normalizer_epsilon = 1e-30;

/// u_tt - u_xx - G u_x over the grid, from order-2 exact jets.
ResidualReport residual_general(const Expr1D& G, const SolutionTemplate& u, const ProfileFunction& T,
                                const ProfileFunction& X, const Grid2D& grid);

/// v_tt - f(y) v_yy over a (t, y) grid.
ResidualReport residual_acoustics(const AcousticsEquation& equation, const SolutionTemplate& u,
                                  const ProfileFunction& T, const ProfileFunction& X, const Grid2D& grid);

/// Multiplies the highest-order coefficient (plus part first) by 1 + eps x.
/// An x-dependent factor is used because a constant one would still leave a
/// single-term part a valid solution.
SolutionTemplate corrupt_template(const SolutionTemplate& u, double eps = 1e-3);

struct FDSolverConfig {
    double y_lo = 0.0;
    double y_hi = 1.0;
    int points = 101;
    double cfl = 0.9;
    double t_final = 0.5;
    /// Store every time level (memory grows with points x steps).
    bool keep_history = false;
};

/// Exact solution used for initial and boundary data. Must return a jet of
/// order >= 2 at t = 0 and order >= 0 elsewhere.
using ExactSource = std::function<Jet2(double t, double y)>;

struct FdSolution {
    std::vector<double> y;
    std::vector<double> v;  ///< at t_final
    double dt = 0.0;
    int steps = 0;
    double t_final = 0.0;
    std::vector<std::vector<double>> history;  ///< time levels 0..steps if requested
};

/// Explicit leapfrog v^{k+1} = 2v^k - v^{k-1} + dt^2 f (v_{i+1} - 2v_i + v_{i-1})/dy^2,
/// Taylor-seeded first step and Dirichlet data from `exact`.
FdSolution fd_solve(const std::function<double(double)>& f, const FDSolverConfig& config,
                    const ExactSource& exact);
FdSolution fd_solve(const AcousticsEquation& equation, const FDSolverConfig& config, const ExactSource& exact);

struct FieldError {
    double max_abs = 0.0;
    double l2 = 0.0;  ///< discrete RMS
};

FieldError compare_to_exact(const FdSolution& solution, const ExactSource& exact);

struct ConvergenceOrder {
    double order = 0.0;
    bool valid = false;
    std::string note;
};

/// Mean of log2(e1/e2) and log2(e2/e3). Invalid (order NaN) unless the errors
/// are strictly positive and strictly decreasing.
ConvergenceOrder convergence_order(double e1, double e2, double e3);

}  // namespace gensol
