#include "gensol/gasdyn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "gensol/expr.hpp"
#include "gensol/families.hpp"

namespace gensol {

PressureLaw::PressureLaw(int n, double a) : n_(n), a_(a) {
    if (n < 2 || n % 2 != 0) {
        throw PreconditionError("pressure law needs an even n >= 2");
    }
    if (!std::isfinite(a)) {
        throw PreconditionError("pressure-law constant a must be finite");
    }
}

void PressureLaw::check_density(double rho) const {
    if (!(rho - a_ > 0.0)) {
        throw DomainError("density must exceed a", rho);
    }
}

double PressureLaw::pressure(double rho) const {
    check_density(rho);
    const double m = n_;
    const double s = rho - a_;
    return std::pow(s, (m + 3.0) / (m + 1.0)) / ((m + 1.0) * (m + 3.0)) +
           a_ * std::pow(s, 2.0 / (m + 1.0)) / (m + 1.0) -
           a_ * a_ * std::pow(s, (1.0 - m) / (m + 1.0)) / (m * m - 1.0);
}

double PressureLaw::dp_drho(double rho) const {
    check_density(rho);
    const double m = n_;
    return rho * rho * std::pow(rho - a_, -2.0 * m / (m + 1.0)) / ((m + 1.0) * (m + 1.0));
}

double PressureLaw::sound_speed(double rho) const { return std::sqrt(dp_drho(rho)); }

double PressureLaw::sigma(double rho) const {
    check_density(rho);
    return std::pow(rho - a_, 1.0 / (n_ + 1.0));
}

double PressureLaw::rho_from_sigma(double sigma) const {
    if (!(sigma > 0.0)) {
        throw DomainError("sigma = (r - s)/2 must be positive", sigma);
    }
    return std::pow(sigma, n_ + 1) + a_;
}

double PressureLaw::K(double delta) const {
    if (!(delta > 0.0)) {
        throw DomainError("K needs r - s > 0", delta);
    }
    const double h = 0.5 * delta;
    return (a_ * std::pow(h, -n_) + h) / (n_ + 1.0);
}

double PressureLaw::dK(double delta) const {
    if (!(delta > 0.0)) {
        throw DomainError("K needs r - s > 0", delta);
    }
    const double h = 0.5 * delta;
    return (-0.5 * n_ * a_ * std::pow(h, -n_ - 1) + 0.5) / (n_ + 1.0);
}

Interval PressureLaw::density_samples_range() const {
    const double base = std::max(a_, 0.0);
    return Interval{base + 0.1, base + 3.1};
}

Interval PressureLaw::delta_samples_range() const {
    if (a_ >= 0.0) {
        return Interval{0.1, 4.0};
    }
    // rho > 0 (equivalently K > 0) needs sigma^{n+1} > -a.
    const double lo = 2.0 * std::pow(-a_ + 0.1, 1.0 / (n_ + 1.0));
    return Interval{lo, lo + 3.9};
}

double K_func(const PressureLaw& law, double delta) { return law.K(delta); }

double reduction_check(const PressureLaw& law, double delta) {
    return (2.0 * law.dK(delta) - 1.0) / (4.0 * law.K(delta)) + law.n() / (2.0 * delta);
}

WDerivatives w_n2(const ProfileFunction& T, const ProfileFunction& X, double r, double s) {
    const double d = r - s;
    if (!(d > 0.0)) {
        throw PreconditionError("w needs r > s");
    }
    const double F = T(r) + X(s);
    const double T1 = T.derivative(1, r), T2 = T.derivative(2, r);
    const double X1 = X.derivative(1, s), X2 = X.derivative(2, s);
    const double d2 = d * d, d3 = d2 * d;
    WDerivatives w;
    w.w = F / d;
    w.w_r = T1 / d - F / d2;
    w.w_s = X1 / d + F / d2;
    w.w_rr = T2 / d - 2.0 * T1 / d2 + 2.0 * F / d3;
    w.w_ss = X2 / d + 2.0 * X1 / d2 + 2.0 * F / d3;
    w.w_rs = (T1 - X1) / d2 - 2.0 * F / d3;
    return w;
}

ImplicitSolution::ImplicitSolution(PressureLaw law, ProfileFunction T, ProfileFunction X)
    : law_(law), T_(std::move(T)), X_(std::move(X)) {
    if (law_.n() != 2) {
        throw PreconditionError("closed-form implicit solutions are available for n = 2 only");
    }
}

SpaceTimePoint forward_map(const ImplicitSolution& solution, double r, double s) {
    const WDerivatives w = solution.w(r, s);
    const double K = solution.law().K(r - s);
    if (K == 0.0) {
        throw DomainError("K vanishes, the implicit relations are degenerate", r - s);
    }
    SpaceTimePoint p;
    p.t = (w.w_s - w.w_r) / (2.0 * K);
    p.x = w.w_r + 0.5 * (r + s) * p.t + K * p.t;
    return p;
}

namespace {

struct System {
    std::array<double, 2> F{};
    double J11 = 0, J12 = 0, J21 = 0, J22 = 0;
};

System evaluate_system(const ImplicitSolution& sol, double x, double t, double r, double s, bool jacobian) {
    const WDerivatives w = sol.w(r, s);
    const double d = r - s;
    const double K = sol.law().K(d);
    const double base = x - 0.5 * (r + s) * t;
    System sys;
    sys.F[0] = base - K * t - w.w_r;
    sys.F[1] = base + K * t - w.w_s;
    if (jacobian) {
        const double Kp = sol.law().dK(d);
        sys.J11 = -0.5 * t - Kp * t - w.w_rr;
        sys.J12 = -0.5 * t + Kp * t - w.w_rs;
        sys.J21 = -0.5 * t + Kp * t - w.w_rs;
        sys.J22 = -0.5 * t - Kp * t - w.w_ss;
    }
    return sys;
}

double inf_norm(const std::array<double, 2>& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }

bool finite_norm(double v) { return std::isfinite(v); }

}  // namespace

NewtonResult invert_newton(const ImplicitSolution& solution, double x, double t, InvariantState guess,
                           const NewtonOptions& options) {
    if (!(guess.r > guess.s)) {
        throw PreconditionError("Newton guess must satisfy r > s");
    }
    const double tol = options.tolerance * (1.0 + std::abs(x) + std::abs(t));
    InvariantState z = guess;
    System sys = evaluate_system(solution, x, t, z.r, z.s, true);
    double norm = inf_norm(sys.F);
    if (!finite_norm(norm)) {
        throw NumericalError("implicit relations are not finite at the initial guess");
    }

    for (int it = 0; it <= options.max_iterations; ++it) {
        // A root on the fold is as much a breaking point as a singular step.
        const double det = sys.J11 * sys.J22 - sys.J12 * sys.J21;
        const double jnorm =
            std::sqrt(sys.J11 * sys.J11 + sys.J12 * sys.J12 + sys.J21 * sys.J21 + sys.J22 * sys.J22);
        if (std::abs(det) < 1e-12 * (1.0 + jnorm)) {
            throw BreakingDetected("hodograph Jacobian is singular (wave breaking)", z, det);
        }
        if (norm <= tol) {
            return NewtonResult{z, it, norm};
        }
        if (it == options.max_iterations) {
            break;
        }
        const double dr = (-sys.F[0] * sys.J22 + sys.F[1] * sys.J12) / det;
        const double ds = (-sys.F[1] * sys.J11 + sys.F[0] * sys.J21) / det;

        double lambda = 1.0;
        bool accepted = false;
        for (int h = 0; h <= options.max_halvings; ++h, lambda *= 0.5) {
            const InvariantState trial{z.r + lambda * dr, z.s + lambda * ds};
            if (!(trial.r > trial.s)) {
                continue;
            }
            System next;
            try {
                next = evaluate_system(solution, x, t, trial.r, trial.s, true);
            } catch (const DomainError&) {
                continue;
            }
            const double next_norm = inf_norm(next.F);
            if (finite_norm(next_norm) && next_norm < norm) {
                z = trial;
                sys = next;
                norm = next_norm;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            throw NumericalError("Newton line search found no descent step");
        }
    }
    throw NumericalError("Newton iteration did not converge");
}

GasFields field_sweep(const ImplicitSolution& solution, const FieldGrid& grid, InvariantState seed,
                      const NewtonOptions& options) {
    if (grid.nx < 1 || grid.nt < 1) {
        throw PreconditionError("field grid needs at least one point per axis");
    }
    GasFields out;
    out.grid = grid;
    const std::size_t total = static_cast<std::size_t>(grid.nx) * grid.nt;
    out.r.assign(total, 0.0);
    out.s.assign(total, 0.0);
    out.u.assign(total, 0.0);
    out.rho.assign(total, 0.0);
    out.mask.assign(total, 0);

    const PressureLaw& law = solution.law();
    auto solve_at = [&](int i, int k, InvariantState guess) {
        const std::size_t idx = out.index(i, k);
        try {
            const NewtonResult res = invert_newton(solution, grid.x(i), grid.t(k), guess, options);
            out.r[idx] = res.state.r;
            out.s[idx] = res.state.s;
            out.u[idx] = res.state.u();
            out.rho[idx] = res.state.rho(law);
            out.mask[idx] = 1;
        } catch (const NumericalError&) {
            ++out.failures;
        } catch (const DomainError&) {
            ++out.failures;
        } catch (const PreconditionError&) {
            ++out.failures;
        }
    };
    auto state_at = [&](int i, int k) { return InvariantState{out.r[out.index(i, k)], out.s[out.index(i, k)]}; };

    for (int k = 0; k < grid.nt; ++k) {
        for (int i = 0; i < grid.nx; ++i) {
            if (k == 0 && i == 0) {
                solve_at(0, 0, seed);
            } else if (k > 0 && out.mask[out.index(i, k - 1)]) {
                solve_at(i, k, state_at(i, k - 1));
            } else if (i > 0 && out.mask[out.index(i - 1, k)]) {
                solve_at(i, k, state_at(i - 1, k));
            } else {
                ++out.failures;
            }
        }
    }
    return out;
}

GasResiduals field_residuals(const GasFields& fields, const PressureLaw& law, int stride) {
    if (stride < 1) {
        throw PreconditionError("stride must be positive");
    }
    const FieldGrid& g = fields.grid;
    const double dx = g.dx(), dt = g.dt();
    GasResiduals out;
    if (g.nx < 3 || g.nt < 3) {
        return out;
    }
    for (int k = stride; k < g.nt - 1; k += stride) {
        for (int i = stride; i < g.nx - 1; i += stride) {
            const std::size_t c = fields.index(i, k);
            const std::size_t e = fields.index(i + 1, k), w = fields.index(i - 1, k);
            const std::size_t nth = fields.index(i, k + 1), sth = fields.index(i, k - 1);
            if (!(fields.mask[c] && fields.mask[e] && fields.mask[w] && fields.mask[nth] && fields.mask[sth])) {
                continue;
            }
            auto ddx = [&](const std::vector<double>& f) { return (f[e] - f[w]) / (2.0 * dx); };
            auto ddt = [&](const std::vector<double>& f) { return (f[nth] - f[sth]) / (2.0 * dt); };
            const double u = fields.u[c];
            const double rho = fields.rho[c];
            const double Z = law.sound_speed(rho);

            const double cr = ddt(fields.r) + (u + Z) * ddx(fields.r);
            const double cs = ddt(fields.s) + (u - Z) * ddx(fields.s);
            const double flux_x =
                (fields.rho[e] * fields.u[e] - fields.rho[w] * fields.u[w]) / (2.0 * dx);
            const double mass = ddt(fields.rho) + flux_x;
            const double px = (law.pressure(fields.rho[e]) - law.pressure(fields.rho[w])) / (2.0 * dx);
            const double momentum = ddt(fields.u) + u * ddx(fields.u) + px / rho;

            out.characteristic_r = std::max(out.characteristic_r, std::abs(cr));
            out.characteristic_s = std::max(out.characteristic_s, std::abs(cs));
            out.mass = std::max(out.mass, std::abs(mass));
            out.momentum = std::max(out.momentum, std::abs(momentum));
            ++out.points;
        }
    }
    return out;
}

EulerFields euler_reference_solve(const PressureLaw& law, const EulerGrid& grid, std::vector<double> rho0,
                                  std::vector<double> u0, double t_final, double cfl) {
    const auto n = static_cast<std::size_t>(grid.cells);
    if (grid.cells < 2 || rho0.size() != n || u0.size() != n) {
        throw PreconditionError("initial data must have one value per cell");
    }
    if (!(grid.x1 > grid.x0) || !(t_final >= 0.0)) {
        throw PreconditionError("invalid Euler grid or final time");
    }
    if (!(cfl > 0.0 && cfl <= 1.0)) {
        throw NumericalError("CFL factor must lie in (0, 1]");
    }
    const double dx = grid.dx();
    std::vector<double> rho = std::move(rho0);
    std::vector<double> m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = rho[i] * u0[i];
    }

    EulerFields out;
    out.grid = grid;
    std::vector<double> f_rho(n + 2), f_m(n + 2), U_rho(n + 2), U_m(n + 2);
    double t = 0.0;
    while (t < t_final) {
        double speed = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(rho[i] > law.a()) || !std::isfinite(m[i])) {
                throw NumericalError("density left the admissible range rho > a");
            }
            speed = std::max(speed, std::abs(m[i] / rho[i]) + law.sound_speed(rho[i]));
        }
        double dt = cfl * dx / speed;
        if (t + dt >= t_final) {
            dt = t_final - t;
        }
        // ghost cells copy their neighbours (outflow)
        for (std::size_t j = 0; j < n + 2; ++j) {
            const std::size_t i = j == 0 ? 0 : (j == n + 1 ? n - 1 : j - 1);
            U_rho[j] = rho[i];
            U_m[j] = m[i];
            f_rho[j] = m[i];
            f_m[j] = m[i] * m[i] / rho[i] + law.pressure(rho[i]);
        }
        const double ratio = dt / (2.0 * dx);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = i + 1;
            rho[i] = 0.5 * (U_rho[j + 1] + U_rho[j - 1]) - ratio * (f_rho[j + 1] - f_rho[j - 1]);
            m[i] = 0.5 * (U_m[j + 1] + U_m[j - 1]) - ratio * (f_m[j + 1] - f_m[j - 1]);
        }
        t = (dt == t_final - t) ? t_final : t + dt;
        ++out.steps;
    }
    out.t = t;
    out.rho = rho;
    out.u.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.u[i] = m[i] / rho[i];
    }
    return out;
}

GasIdentityReport gas_identities(const PressureLaw& law, int samples) {
    GasIdentityReport rep;
    rep.n = law.n();
    rep.a = law.a();
    rep.samples = samples;
    const double m = law.n();

    const Expr1D dp = pressure_special(law.n(), law.a()).diff();
    const Expr1D dsigma = pow(Expr1D::variable() - law.a(), 1.0 / (m + 1.0)).diff();
    for (double rho : law.density_samples_range().uniform(samples)) {
        const double target = std::sqrt(dp(rho)) / rho;
        rep.invariant_exponent = std::max(rep.invariant_exponent, std::abs(dsigma(rho) - target) / target);
    }

    // K as an expression in delta, differentiated symbolically
    const Expr1D half = 0.5 * Expr1D::variable();
    const Expr1D K = (law.a() * pow(half, -m) + half) / (m + 1.0);
    const Expr1D dK = K.diff();
    for (double delta : law.delta_samples_range().uniform(samples)) {
        const double red = (2.0 * dK(delta) - 1.0) / (4.0 * K(delta)) + m / (2.0 * delta);
        rep.reduction = std::max(rep.reduction, std::abs(red));
        // Near rho = a the sum sigma^{n+1} + a drops low bits of sigma, so
        // compare at the delta the stored rho actually represents.
        const double rho = std::pow(0.5 * delta, m + 1.0) + law.a();
        const double delta_rho = 2.0 * std::pow(rho - law.a(), 1.0 / (m + 1.0));
        const double k = K(delta_rho);
        rep.eigen_speed = std::max(rep.eigen_speed, std::abs(std::sqrt(dp(rho)) - k) / k);
    }
    return rep;
}

}  // namespace gensol
