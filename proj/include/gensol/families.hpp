#pragma once

// Closed-form solution families and the change of variables to the
// inhomogeneous acoustics form v_tt = f(y) v_yy.

#include <string>

#include "gensol/expr.hpp"
#include "gensol/solution_template.hpp"
#include "gensol/transform.hpp"

namespace gensol {

enum class FamilyKind {
    epd_even,         ///< u_tt = u_xx + (n/x) u_x
    family_a,         ///< u_tt = u_xx + ((n+2)x^{n+1} - a n)/(x^{n+2} + a x) u_x
    euler_acoustics,  ///< v_tt = ((1-n) y)^{2n/(n-1)} v_yy, the y-form of epd_even
};

struct FamilyDescriptor {
    FamilyKind kind = FamilyKind::epd_even;
    int n = 2;
    double a = 0.0;
    double c = 1.0;

    /// Throws PreconditionError for odd or non-positive n, or n outside
    /// {2, 4, 6} where a hardcoded template is required.
    void validate() const;
    std::string name() const;
};

FamilyKind parse_family_kind(const std::string& name);
std::string to_string(FamilyKind kind);

/// (1/x d/dx)^{n/2} applied to the wave template T(t+x) + X(t-x).
SolutionTemplate epd_even_solution(int n);

/// ((n+2) x^{n+1} - a n) / (x^{n+2} + a x)
Expr1D family_a_coefficient(int n, double a);

/// Default working interval for family-a: [1, 2], moved to start 0.1 past
/// the positive root of x^{n+1} + a when that root is near or inside it.
Interval family_a_domain(int n, double a);

/// Hardcoded n = 2, 4, 6 templates with U = T'(t+x), V = X'(t-x).
SolutionTemplate family_a_solution(int n, double a);

/// Equation + closed-form integrating factor of a family.
EquationSpec family_equation(const FamilyDescriptor& family, const Interval& domain);
EquationSpec family_equation(const FamilyDescriptor& family);
SolutionTemplate family_template(const FamilyDescriptor& family);

/// Prop-3 step with r = a x^{-n} + x applied to epd_even_solution(n). Throws
/// PreconditionError if the resulting coefficient differs from
/// family_a_coefficient by more than 1e-10.
ChainResult family_a_from_chain(int n, double a, const Interval& domain);
ChainResult family_a_from_chain(int n, double a);

/// v(t, y) = u(t, x(y)) solves v_tt = f(y) v_yy.
struct AcousticsEquation {
    FamilyDescriptor family;
    Expr1D f;       ///< in the variable y
    Expr1D y_of_x;  ///< in the variable x
    Expr1D x_of_y;  ///< in the variable y
    Interval x_domain;
    Interval y_range;  ///< image of x_domain, ordered lo < hi
};

/// Checks y'' + G y' = 0, monotonicity, x(y(x)) = x (1e-12) and
/// f(y(x)) = y'(x)^2 (1e-10) on 64 samples; throws PreconditionError on
/// failure.
AcousticsEquation to_acoustics(const EquationSpec& equation, const FamilyDescriptor& family);

/// Chain-rule evaluation of v and its (t, y) partials up to order 2 from
/// exact (t, x) jets.
class AcousticsEvaluator {
public:
    AcousticsEvaluator(AcousticsEquation equation, const SolutionTemplate& u);

    /// Jet in (t, y): entry (p, q) is d_t^p d_y^q v.
    Jet2 jet(const ProfileFunction& T, const ProfileFunction& X, double t, double y) const;
    const AcousticsEquation& equation() const noexcept { return equation_; }
    const JetEvaluator& evaluator() const noexcept { return u_; }

private:
    AcousticsEquation equation_;
    JetEvaluator u_;
    Expr1D dy_;
    Expr1D d2y_;
};

Jet2 acoustics_eval(const AcousticsEquation& equation, const SolutionTemplate& u,
                    const ProfileFunction& T, const ProfileFunction& X, double t, double y,
                    int order = 2);

/// Lagrangian-form pressure law in the variable rho.
Expr1D pressure_lagrangian(int n, double a, double c);
/// The special equation of state in the variable rho (c = 1).
Expr1D pressure_special(int n, double a);

struct PressureConsistencyReport {
    int n = 0;
    double a = 0.0;
    Interval rho_range;
    int samples = 0;
    double offset = 0.0;              ///< p_lagrangian - p_special at rho_range.lo
    double max_pressure_difference = 0.0;  ///< after removing offset
    double max_derivative_difference = 0.0;
};

/// Compares both pressure expressions (c = 1) on 64 samples of
/// [a + 0.1, a + 3.1].
PressureConsistencyReport pressure_consistency_check(int n, double a, int samples = default_sample_count);

}  // namespace gensol
