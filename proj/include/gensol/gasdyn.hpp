#pragma once

// Isentropic gas dynamics with the special equation of state
//
//   p(rho) = s^{(n+3)/(n+1)}/((n+1)(n+3)) + a s^{2/(n+1)}/(n+1) - a^2 s^{(1-n)/(n+1)}/(n^2-1),
//   s = rho - a,
//
// for which the Riemann-invariant form of the hodograph equation is the EPD
// equation w_rs - n/(2(r-s)) (w_r - w_s) = 0. With n = 2 its general solution
// w = (T(r) + X(s))/(r - s) gives implicit solutions
//
//   x - (r+s) t/2 - K(r-s) t = w_r,   x - (r+s) t/2 + K(r-s) t = w_s.

#include <cstdint>
#include <string>
#include <vector>

#include "gensol/errors.hpp"
#include "gensol/profile.hpp"
#include "gensol/transform.hpp"

namespace gensol {

class PressureLaw {
public:
    /// n even and positive; c is fixed to 1.
    PressureLaw(int n, double a);

    int n() const noexcept { return n_; }
    double a() const noexcept { return a_; }

    double pressure(double rho) const;
    double dp_drho(double rho) const;
    /// Z = sqrt(dp/drho)
    double sound_speed(double rho) const;
    /// sigma = (rho - a)^{1/(n+1)}, so that r = u + sigma, s = u - sigma.
    double sigma(double rho) const;
    double rho_from_sigma(double sigma) const;

    /// K(delta) = (a (delta/2)^{-n} + delta/2) / (n+1), delta = r - s > 0.
    double K(double delta) const;
    double dK(double delta) const;

    /// Density interval used for identity sampling: [max(a, 0) + 0.1, max(a, 0) + 3.1].
    Interval density_samples_range() const;
    /// delta interval where K > 0: [0.1, 4] for a >= 0, shifted past the zero of K otherwise.
    Interval delta_samples_range() const;

private:
    void check_density(double rho) const;

    int n_;
    double a_;
};

double K_func(const PressureLaw& law, double delta);
/// (2K' - 1)/(4K) + n/(2 delta); vanishes identically for this pressure law.
double reduction_check(const PressureLaw& law, double delta);

struct InvariantState {
    double r = 0.0;
    double s = 0.0;

    double u() const { return 0.5 * (r + s); }
    double sigma() const { return 0.5 * (r - s); }
    double rho(const PressureLaw& law) const { return law.rho_from_sigma(sigma()); }
};

struct WDerivatives {
    double w = 0.0;
    double w_r = 0.0;
    double w_s = 0.0;
    double w_rr = 0.0;
    double w_rs = 0.0;
    double w_ss = 0.0;
};

/// w = (T(r) + X(s))/(r - s) and its derivatives up to order 2.
WDerivatives w_n2(const ProfileFunction& T, const ProfileFunction& X, double r, double s);

class ImplicitSolution {
public:
    /// Only n = 2 has the closed-form w.
    ImplicitSolution(PressureLaw law, ProfileFunction T, ProfileFunction X);

    const PressureLaw& law() const noexcept { return law_; }
    const ProfileFunction& T() const noexcept { return T_; }
    const ProfileFunction& X() const noexcept { return X_; }
    WDerivatives w(double r, double s) const { return w_n2(T_, X_, r, s); }

private:
    PressureLaw law_;
    ProfileFunction T_;
    ProfileFunction X_;
};

struct SpaceTimePoint {
    double x = 0.0;
    double t = 0.0;
};

/// (r, s) -> (x, t) by solving the two implicit relations, which are linear in (x, t).
SpaceTimePoint forward_map(const ImplicitSolution& solution, double r, double s);

/// Loss of invertibility of the hodograph map (gradient catastrophe).
class BreakingDetected : public NumericalError {
public:
    BreakingDetected(const std::string& what, InvariantState at, double determinant)
        : NumericalError(what), at_(at), determinant_(determinant) {}
    InvariantState at() const noexcept { return at_; }
    double determinant() const noexcept { return determinant_; }

private:
    InvariantState at_;
    double determinant_;
};

struct NewtonOptions {
    int max_iterations = 50;
    int max_halvings = 30;
    double tolerance = 1e-12;
};

struct NewtonResult {
    InvariantState state;
    int iterations = 0;
    double residual = 0.0;
};

/// Damped Newton with the analytic Jacobian. Converged when
/// ||F||_inf <= tol (1 + |x| + |t|). Throws PreconditionError for a guess with
/// r <= s, BreakingDetected when |det J| < 1e-12 (1 + ||J||_F), NumericalError
/// when no descent step or no convergence is found.
NewtonResult invert_newton(const ImplicitSolution& solution, double x, double t, InvariantState guess,
                           const NewtonOptions& options = {});

struct FieldGrid {
    double x0 = 1.0;
    double x1 = 2.0;
    int nx = 41;
    double t0 = 0.0;
    double t1 = 1.0;
    int nt = 41;

    double dx() const { return nx > 1 ? (x1 - x0) / (nx - 1) : 0.0; }
    double dt() const { return nt > 1 ? (t1 - t0) / (nt - 1) : 0.0; }
    double x(int i) const { return x0 + i * dx(); }
    double t(int k) const { return t0 + k * dt(); }
};

/// Row-major fields over a FieldGrid, index k * nx + i for (t_k, x_i).
struct GasFields {
    FieldGrid grid;
    std::vector<double> r, s, u, rho;
    std::vector<std::uint8_t> mask;  ///< 1 = converged, 0 = breaking or failure
    int failures = 0;

    std::size_t index(int i, int k) const { return static_cast<std::size_t>(k) * grid.nx + i; }
};

/// Continuation sweep: the first row is marched in x from `seed` (the
/// invariants at (x0, t0)), later rows start from the previous row.
GasFields field_sweep(const ImplicitSolution& solution, const FieldGrid& grid, InvariantState seed,
                      const NewtonOptions& options = {});

struct GasResiduals {
    double characteristic_r = 0.0;  ///< max |r_t + (u + Z) r_x|
    double characteristic_s = 0.0;  ///< max |s_t + (u - Z) s_x|
    double mass = 0.0;              ///< max |rho_t + (rho u)_x|
    double momentum = 0.0;          ///< max |u_t + u u_x + p_x / rho|
    int points = 0;
};

/// Central-difference residuals at interior points whose indices are
/// multiples of `stride` (stride 2^k aligns nested grids with the coarsest).
GasResiduals field_residuals(const GasFields& fields, const PressureLaw& law, int stride = 1);

struct EulerGrid {
    double x0 = 0.0;
    double x1 = 1.0;
    int cells = 100;

    double dx() const { return (x1 - x0) / cells; }
    double center(int i) const { return x0 + (i + 0.5) * dx(); }
};

struct EulerFields {
    EulerGrid grid;
    std::vector<double> rho;
    std::vector<double> u;
    double t = 0.0;
    int steps = 0;
};

/// First-order Lax-Friedrichs on (rho, m = rho u) with outflow boundaries.
EulerFields euler_reference_solve(const PressureLaw& law, const EulerGrid& grid, std::vector<double> rho0,
                                  std::vector<double> u0, double t_final, double cfl = 0.45);

struct GasIdentityReport {
    int n = 0;
    double a = 0.0;
    int samples = 0;
    double invariant_exponent = 0.0;  ///< max |sigma'(rho) - Z/rho| / (Z/rho)
    double reduction = 0.0;           ///< max |(2K'-1)/(4K) + n/(2 delta)|
    double eigen_speed = 0.0;         ///< max |Z(rho(delta)) - K(delta)| / K(delta)
};

/// Identity checks on 64-point sample sets. Derivatives here come from
/// symbolic differentiation of the pressure and K expressions, independent of
/// the closed forms used by PressureLaw.
GasIdentityReport gas_identities(const PressureLaw& law, int samples = default_sample_count);

}  // namespace gensol
