#include "gensol/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gensol/errors.hpp"

namespace gensol {

namespace {

std::vector<double> linspace(double a, double b, int n) {
    if (n < 1) {
        throw PreconditionError("grid needs at least one point per axis");
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        out[static_cast<std::size_t>(k)] = n == 1 ? a : a + (b - a) * k / (n - 1);
    }
    return out;
}

class ResidualAccumulator {
public:
    explicit ResidualAccumulator(const Grid2D& grid) { report_.grid = grid; }

    void add(double t, double s, double residual, std::initializer_list<double> terms) {
        double scale = 0.0;
        for (double term : terms) {
            scale = std::max(scale, std::abs(term));
        }
        const double abs_res = std::abs(residual);
        const double rel = abs_res / (scale + residual_normalizer_epsilon);
        ++report_.points;
        sum_sq_ += abs_res * abs_res;
        report_.max_abs = std::max(report_.max_abs, abs_res);
        if (rel > report_.max_rel || report_.points == 1) {
            report_.max_rel = rel;
            report_.worst_t = t;
            report_.worst_s = s;
        }
    }

    ResidualReport finish() {
        report_.l2 = report_.points ? std::sqrt(sum_sq_ / static_cast<double>(report_.points)) : 0.0;
        return report_;
    }

private:
    ResidualReport report_;
    double sum_sq_ = 0.0;
};

}  // namespace

std::vector<double> Grid2D::times() const { return linspace(t0, t1, nt); }
std::vector<double> Grid2D::positions() const { return linspace(s0, s1, ns); }

ResidualReport residual_general(const Expr1D& G, const SolutionTemplate& u, const ProfileFunction& T,
                                const ProfileFunction& X, const Grid2D& grid) {
    const JetEvaluator ev(u, 2);
    ev.check_profiles(T, X);
    const auto ts = grid.times();
    ResidualAccumulator acc(grid);
    for (double x : grid.positions()) {
        const auto column = ev.at(x);
        const double g = G(x);
        for (double t : ts) {
            const Jet2 j = column.jet(T, X, t);
            const double utt = j(2, 0);
            const double uxx = j(0, 2);
            const double gux = g * j(0, 1);
            acc.add(t, x, utt - uxx - gux, {utt, uxx, gux});
        }
    }
    return acc.finish();
}

ResidualReport residual_acoustics(const AcousticsEquation& equation, const SolutionTemplate& u,
                                  const ProfileFunction& T, const ProfileFunction& X, const Grid2D& grid) {
    const AcousticsEvaluator ev(equation, u);
    ev.evaluator().check_profiles(T, X);
    const auto ts = grid.times();
    ResidualAccumulator acc(grid);
    for (double y : grid.positions()) {
        const double f = equation.f(y);
        for (double t : ts) {
            const Jet2 j = ev.jet(T, X, t, y);
            const double vtt = j(2, 0);
            const double fvyy = f * j(0, 2);
            acc.add(t, y, vtt - fvyy, {vtt, fvyy});
        }
    }
    return acc.finish();
}

SolutionTemplate corrupt_template(const SolutionTemplate& u, double eps) {
    if (u.empty()) {
        throw PreconditionError("cannot corrupt an empty template");
    }
    auto plus = u.plus_part();
    auto minus = u.minus_part();
    auto& part = plus.empty() ? minus : plus;
    auto& coefficient = part.rbegin()->second;
    coefficient = coefficient * (1.0 + eps * Expr1D::variable());
    return SolutionTemplate(plus, minus);
}

FdSolution fd_solve(const std::function<double(double)>& f, const FDSolverConfig& config,
                    const ExactSource& exact) {
    if (config.points < 3) {
        throw PreconditionError("leapfrog solver needs at least 3 grid points");
    }
    if (!(config.y_hi > config.y_lo)) {
        throw PreconditionError("empty y-interval");
    }
    if (!(config.cfl > 0.0 && config.cfl <= 1.0)) {
        throw NumericalError("CFL factor must lie in (0, 1]");
    }
    if (!(config.t_final > 0.0)) {
        throw PreconditionError("final time must be positive");
    }

    FdSolution out;
    out.y = linspace(config.y_lo, config.y_hi, config.points);
    const std::size_t n = out.y.size();
    const double dy = (config.y_hi - config.y_lo) / (config.points - 1);

    std::vector<double> fv(n);
    double f_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        fv[i] = f(out.y[i]);
        if (!(fv[i] > 0.0)) {
            throw NumericalError("wave-speed coefficient f(y) must be positive (hyperbolicity)");
        }
        f_max = std::max(f_max, fv[i]);
    }
    const double dt_max = config.cfl * dy / std::sqrt(f_max);
    out.steps = static_cast<int>(std::ceil(config.t_final / dt_max - 1e-12));
    out.dt = config.t_final / out.steps;
    out.t_final = config.t_final;
    const double dt = out.dt;
    const double lambda = dt * dt / (dy * dy);

    std::vector<double> prev(n), curr(n), next(n);
    std::vector<double> vt(n), vyy(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Jet2 j = exact(0.0, out.y[i]);
        prev[i] = j(0, 0);
        vt[i] = j(1, 0);
        vyy[i] = j(0, 2);
    }
    if (config.keep_history) {
        out.history.push_back(prev);
    }
    // v^1 = v^0 + dt v_t + dt^2/2 f v_yy
    for (std::size_t i = 1; i + 1 < n; ++i) {
        curr[i] = prev[i] + dt * vt[i] + 0.5 * dt * dt * fv[i] * vyy[i];
    }
    curr.front() = exact(dt, out.y.front())(0, 0);
    curr.back() = exact(dt, out.y.back())(0, 0);
    if (config.keep_history) {
        out.history.push_back(curr);
    }

    for (int k = 1; k < out.steps; ++k) {
        const double t_next = (k + 1) * dt;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            next[i] = 2.0 * curr[i] - prev[i] + lambda * fv[i] * (curr[i + 1] - 2.0 * curr[i] + curr[i - 1]);
        }
        next.front() = exact(t_next, out.y.front())(0, 0);
        next.back() = exact(t_next, out.y.back())(0, 0);
        std::swap(prev, curr);
        std::swap(curr, next);
        if (config.keep_history) {
            out.history.push_back(curr);
        }
    }
    out.v = curr;
    return out;
}

FdSolution fd_solve(const AcousticsEquation& equation, const FDSolverConfig& config, const ExactSource& exact) {
    return fd_solve([&](double y) { return equation.f(y); }, config, exact);
}

FieldError compare_to_exact(const FdSolution& solution, const ExactSource& exact) {
    FieldError err;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < solution.y.size(); ++i) {
        const double e = std::abs(solution.v[i] - exact(solution.t_final, solution.y[i])(0, 0));
        err.max_abs = std::max(err.max_abs, e);
        sum_sq += e * e;
    }
    err.l2 = std::sqrt(sum_sq / static_cast<double>(solution.y.size()));
    return err;
}

ConvergenceOrder convergence_order(double e1, double e2, double e3) {
    ConvergenceOrder out;
    out.order = std::numeric_limits<double>::quiet_NaN();
    if (!(e1 > 0.0 && e2 > 0.0 && e3 > 0.0)) {
        out.note = "errors must be strictly positive";
        return out;
    }
    if (!(e1 > e2 && e2 > e3)) {
        out.note = "errors are not monotonically decreasing under refinement";
        return out;
    }
    out.order = 0.5 * (std::log2(e1 / e2) + std::log2(e2 / e3));
    out.valid = true;
    return out;
}

}  // namespace gensol
