#include "gensol/transform.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include "gensol/errors.hpp"

namespace gensol {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const Expr1D& xvar() {
    static const Expr1D x = Expr1D::variable();
    return x;
}

double relative(double residual, std::initializer_list<double> terms) {
    double scale = 0.0;
    for (double t : terms) {
        scale = std::max(scale, std::abs(t));
    }
    return std::abs(residual) / (scale + 1e-30);
}

// Tabulated solution of h'' + G h' + A h = 0, shared by the h and h' nodes.
struct OdeTable {
    Expr1D G;
    double A;
    Interval domain;
    std::vector<double> xs;
    std::vector<std::array<double, 2>> ys;

    std::array<double, 2> rhs(double x, const std::array<double, 2>& y) const {
        return {y[1], -G(x) * y[1] - A * y[0]};
    }

    std::array<double, 2> rk4(double x, const std::array<double, 2>& y, double h) const {
        auto axpy = [](const std::array<double, 2>& a, double s, const std::array<double, 2>& b) {
            return std::array<double, 2>{a[0] + s * b[0], a[1] + s * b[1]};
        };
        const auto k1 = rhs(x, y);
        const auto k2 = rhs(x + 0.5 * h, axpy(y, 0.5 * h, k1));
        const auto k3 = rhs(x + 0.5 * h, axpy(y, 0.5 * h, k2));
        const auto k4 = rhs(x + h, axpy(y, h, k3));
        return {y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
                y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
    }

    std::array<double, 2> state(double x) const {
        const double slack = 1e-12 * domain.width();
        if (x < domain.lo - slack || x > domain.hi + slack) {
            throw DomainError("ODE solution evaluated outside its interval", x);
        }
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const std::size_t k = it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
        const double step = x - xs[k];
        if (step == 0.0) {
            return ys[k];
        }
        return rk4(xs[k], ys[k], step);
    }
};

class OdeComponent final : public ExternalFunction {
public:
    OdeComponent(std::shared_ptr<const OdeTable> table, int index)
        : table_(std::move(table)), index_(index) {}

    double value(double x) const override { return table_->state(x)[static_cast<std::size_t>(index_)]; }

    Expr1D derivative() const override {
        const Expr1D dh = Expr1D::external(std::make_shared<OdeComponent>(table_, 1));
        if (index_ == 0) {
            return dh;
        }
        const Expr1D h = Expr1D::external(std::make_shared<OdeComponent>(table_, 0));
        return -(table_->G * dh) - table_->A * h;
    }

    std::string name() const override {
        return index_ == 0 ? "h_ode[A=" + fmt(table_->A) + "]" : "dh_ode[A=" + fmt(table_->A) + "]";
    }

private:
    std::shared_ptr<const OdeTable> table_;
    int index_;
};

void check_nonvanishing(const Expr1D& f, const Interval& domain, const char* what) {
    for (double x : domain.chebyshev(default_sample_count)) {
        const double v = f(x);
        if (!(std::abs(v) > 1e-14)) {
            throw DomainError(std::string(what) + " vanishes on the working domain", x);
        }
    }
}

std::vector<SolutionTemplate> x_derivative_ladder(const SolutionTemplate& u, int count) {
    std::vector<SolutionTemplate> out{u};
    for (int k = 1; k < count; ++k) {
        out.push_back(diff_x(out.back()));
    }
    return out;
}

}  // namespace

std::vector<double> Interval::chebyshev(int n) const {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double c = std::cos(std::numbers::pi * (2.0 * k + 1.0) / (2.0 * n));
        out[static_cast<std::size_t>(n - 1 - k)] = mid() + 0.5 * width() * c;
    }
    return out;
}

std::vector<double> Interval::uniform(int n) const {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        out[static_cast<std::size_t>(k)] = n == 1 ? lo : lo + width() * k / (n - 1);
    }
    return out;
}

EquationSpec EquationSpec::wave(Interval domain) {
    return EquationSpec{Expr1D(0.0), domain, Expr1D(1.0), {"wave equation"}};
}

EquationSpec EquationSpec::epd(double n, Interval domain) {
    return EquationSpec{epd_coefficient(n), domain, pow(xvar(), -n), {"EPD n=" + fmt(n)}};
}

Expr1D epd_coefficient(double n) { return Expr1D(n) / xvar(); }

std::optional<double> match_epd_coefficient(const Expr1D& G) {
    using K = Expr1D::Kind;
    if (G.is_zero()) {
        return 0.0;
    }
    const auto& ops = G.operands();
    if (G.kind() == K::quotient && ops[0].is_constant() && ops[1].kind() == K::variable) {
        return ops[0].scalar();
    }
    if (G.kind() == K::product && ops[0].is_constant() && ops[1].kind() == K::power &&
        ops[1].scalar() == -1.0 && ops[1].operands()[0].kind() == K::variable) {
        return ops[0].scalar();
    }
    if (G.kind() == K::power && G.scalar() == -1.0 && ops[0].kind() == K::variable) {
        return 1.0;
    }
    return std::nullopt;
}

Expr1D g1_from_r(const Expr1D& G, const Expr1D& r, const Interval& domain) {
    if (r.is_zero()) {
        throw DomainError("r is identically zero", domain.lo);
    }
    check_nonvanishing(r, domain, "r");
    if (r.is_constant()) {
        return G;
    }
    return G + 2.0 * r.diff() / r;
}

Expr1D h_prop2(const Expr1D& G, double c1, double c2, const Interval& domain,
               const std::optional<Expr1D>& integrating_factor) {
    const Expr1D& x = xvar();
    if (const auto n = match_epd_coefficient(G); n && *n != 1.0) {
        if (*n == 0.0) {
            return c1 + c2 * x;
        }
        return c1 + c2 * pow(x, 1.0 - *n) / (1.0 - *n);
    }
    const Expr1D E = integrating_factor ? *integrating_factor : exp(-antiderivative(G, domain.lo));
    if (E.is_constant()) {
        return c1 + c2 * E.scalar() * x;
    }
    return c1 + c2 * antiderivative(E, domain.lo);
}

Expr1D r_prop3(const Expr1D& G, double c1, double c2, const Interval& domain,
               const std::optional<Expr1D>& integrating_factor) {
    const Expr1D& x = xvar();
    if (const auto n = match_epd_coefficient(G)) {
        if (*n == 0.0) {
            return c1 + c2 * x;
        }
        return c1 * pow(x, -*n) + c2 * x;
    }
    const Expr1D E = integrating_factor ? *integrating_factor : exp(-antiderivative(G, domain.lo));
    if (E.is_constant()) {
        return c1 * E + c2 * x;
    }
    return c1 * E + c2 * E * antiderivative(1.0 / E, domain.lo);
}

Expr1D h_ode_solve(const Expr1D& G, double A, double h0, double dh0, const Interval& domain,
                   const OdeOptions& options) {
    if (!(domain.hi > domain.lo)) {
        throw PreconditionError("ODE interval must have positive width");
    }
    auto table = std::make_shared<OdeTable>();
    table->G = G;
    table->A = A;
    table->domain = domain;
    table->xs.push_back(domain.lo);
    table->ys.push_back({h0, dh0});

    const double min_step = options.min_step_fraction * domain.width();
    double step = domain.width() / options.initial_steps;
    double x = domain.lo;
    std::array<double, 2> y{h0, dh0};
    try {
        while (x < domain.hi) {
            step = std::min(step, domain.hi - x);
            const auto full = table->rk4(x, y, step);
            const auto half = table->rk4(x, y, 0.5 * step);
            const auto two_half = table->rk4(x + 0.5 * step, half, 0.5 * step);
            const double err = std::max(std::abs(two_half[0] - full[0]), std::abs(two_half[1] - full[1])) / 15.0;
            const double scale = 1.0 + std::max(std::abs(two_half[0]), std::abs(two_half[1]));
            const double target = options.tolerance * scale;
            const double factor = err > 0.0 ? 0.9 * std::pow(target / err, 0.2) : 2.0;
            if (err <= target) {
                x = (domain.hi - x - step) < 1e-15 * domain.width() ? domain.hi : x + step;
                y = two_half;
                table->xs.push_back(x);
                table->ys.push_back(y);
                step *= std::min(2.0, factor);
            } else {
                step *= std::max(0.1, factor);
                if (step < min_step) {
                    throw NumericalError("ODE step-size underflow at x = " + fmt(x));
                }
            }
        }
    } catch (const DomainError& e) {
        throw NumericalError("ODE step-size underflow near singular coefficient at x = " +
                             fmt(e.location()) + ": " + e.what());
    }
    // Dense output steps from xs[k] must stay inside the accepted step, so the
    // stored nodes are used as-is.
    return Expr1D::external(std::make_shared<OdeComponent>(std::move(table), 0));
}

Expr1D r_from_h_prop1(const Expr1D& h, const Interval& domain) {
    check_nonvanishing(h, domain, "h");
    return h.diff() / h;
}

double h_equation_residual(const Expr1D& G, const Expr1D& h, double A, const Interval& domain,
                           int samples) {
    const Expr1D dh = h.diff();
    const Expr1D d2h = dh.diff();
    double worst = 0.0;
    for (double x : domain.chebyshev(samples)) {
        const double a = d2h(x);
        const double b = G(x) * dh(x);
        const double c = A * h(x);
        worst = std::max(worst, relative(a + b + c, {a, b, c}));
    }
    return worst;
}

double r_equation_residual(const Expr1D& G, const Expr1D& h, const Expr1D& r,
                           const Interval& domain, int samples) {
    const Expr1D dh = h.diff();
    const Expr1D d2h = dh.diff();
    const Expr1D dr = r.diff();
    const Expr1D d2r = dr.diff();
    const Expr1D dG = G.diff();
    double worst = 0.0;
    for (double x : domain.chebyshev(samples)) {
        const double hv = h(x);
        const double dhv = dh(x);
        const double log_h_second = (d2h(x) * hv - dhv * dhv) / (hv * hv);
        const double rv = r(x);
        const double a = d2r(x);
        const double b = G(x) * dr(x);
        const double c = dG(x) * rv;
        const double d = 2.0 * log_h_second * rv;
        worst = std::max(worst, relative(a + b + c + d, {a, b, c, d}));
    }
    return worst;
}

double max_pointwise_difference(const Expr1D& a, const Expr1D& b, const Interval& domain,
                                int samples) {
    double worst = 0.0;
    for (double x : domain.chebyshev(samples)) {
        const double av = a(x);
        worst = std::max(worst, std::abs(av - b(x)) / (1.0 + std::abs(av)));
    }
    return worst;
}

TransformStep make_step(const Expr1D& G, const Expr1D& h, const Expr1D& r, double A,
                        const Interval& domain) {
    check_nonvanishing(h, domain, "h");
    const double h_res = h_equation_residual(G, h, A, domain);
    if (!(h_res <= ode_residual_tolerance)) {
        throw PreconditionError("h does not solve h'' + G h' + A h = 0 (relative residual " +
                                fmt(h_res) + ")");
    }
    const double r_res = r_equation_residual(G, h, r, domain);
    if (!(r_res <= ode_residual_tolerance)) {
        throw PreconditionError("r does not solve r'' + G r' + (G' + 2 (ln h)'') r = 0 (relative residual " +
                                fmt(r_res) + ")");
    }
    return TransformStep{G, h, r, A, g1_from_r(G, r, domain)};
}

double normalize_template(SolutionTemplate& u, double x_ref) {
    if (u.empty()) {
        return 1.0;
    }
    const Expr1D lead = u.plus_part().empty() ? u.minus_part().rbegin()->second
                                              : u.plus_part().rbegin()->second;
    const double value = lead(x_ref);
    if (value == 0.0) {
        return 1.0;
    }
    u = scale(u, Expr1D(1.0 / value));
    return value;
}

std::pair<EquationSpec, SolutionTemplate> lemma1_apply(const TransformStep& step,
                                                       const EquationSpec& source,
                                                       const SolutionTemplate& u, bool normalize) {
    SolutionTemplate v = diff_x(u);
    if (!step.h.is_constant()) {
        v = add(v, scale(u, -(step.h.diff() / step.h)));
    }
    v = scale(v, 1.0 / step.r);

    EquationSpec target;
    target.coefficient = step.G1;
    target.domain = source.domain;
    if (source.integrating_factor) {
        target.integrating_factor = *source.integrating_factor / pow(step.r, 2.0);
    }
    target.provenance = source.provenance;
    std::string note = "lemma1(A=" + fmt(step.A) + ", r=" + step.r.dump() + ")";
    if (normalize) {
        const double divisor = normalize_template(v, source.domain.mid());
        note += " normalized by " + fmt(divisor) + " at x_ref=" + fmt(source.domain.mid());
    }
    target.provenance.push_back(std::move(note));
    return {std::move(target), std::move(v)};
}

Expr1D determinant(const std::vector<std::vector<Expr1D>>& m) {
    const std::size_t n = m.size();
    if (n == 0) {
        return Expr1D(1.0);
    }
    for (const auto& row : m) {
        if (row.size() != n) {
            throw PreconditionError("determinant of a non-square matrix");
        }
    }
    if (n == 1) {
        return m[0][0];
    }
    Expr1D out(0.0);
    for (std::size_t col = 0; col < n; ++col) {
        std::vector<std::vector<Expr1D>> minor;
        for (std::size_t row = 1; row < n; ++row) {
            std::vector<Expr1D> r;
            for (std::size_t c = 0; c < n; ++c) {
                if (c != col) {
                    r.push_back(m[row][c]);
                }
            }
            minor.push_back(std::move(r));
        }
        const Expr1D term = m[0][col] * determinant(minor);
        out = (col % 2 == 0) ? out + term : out - term;
    }
    return out;
}

Expr1D wronskian(const std::vector<Expr1D>& fs) {
    const std::size_t n = fs.size();
    std::vector<std::vector<Expr1D>> m(n, std::vector<Expr1D>(n));
    for (std::size_t c = 0; c < n; ++c) {
        Expr1D d = fs[c];
        for (std::size_t r = 0; r < n; ++r) {
            m[r][c] = d;
            if (r + 1 < n) {
                d = d.diff();
            }
        }
    }
    return determinant(m);
}

std::pair<EquationSpec, SolutionTemplate> lemma2_wronskian(const EquationSpec& source,
                                                           const SolutionTemplate& u,
                                                           const std::vector<Eigenfunction>& hs,
                                                           bool normalize) {
    const std::size_t n = hs.size();
    if (n < 1 || n > 3) {
        throw PreconditionError("Wronskian transform supports 1 to 3 eigenfunctions");
    }
    std::set<double> eigenvalues;
    for (const auto& e : hs) {
        if (!eigenvalues.insert(e.A).second) {
            throw PreconditionError("Wronskian transform requires pairwise distinct A_i");
        }
        const double res = h_equation_residual(source.coefficient, e.h, e.A, source.domain);
        if (!(res <= ode_residual_tolerance)) {
            throw PreconditionError("eigenfunction does not solve h'' + G h' + A h = 0 (relative residual " +
                                    fmt(res) + ")");
        }
    }

    // derivative table d[k][i] = h_i^(k), k = 0..n
    std::vector<std::vector<Expr1D>> d(n + 1, std::vector<Expr1D>(n));
    for (std::size_t i = 0; i < n; ++i) {
        d[0][i] = hs[i].h;
        for (std::size_t k = 1; k <= n; ++k) {
            d[k][i] = d[k - 1][i].diff();
        }
    }
    std::vector<std::vector<Expr1D>> wp(n), w(n);
    for (std::size_t k = 0; k < n; ++k) {
        wp[k] = d[k + 1];
        w[k] = d[k];
    }
    const Expr1D w_prime = determinant(wp);
    const Expr1D w_plain = determinant(w);
    check_nonvanishing(w_prime, source.domain, "W(h_1', ..., h_n')");
    check_nonvanishing(w_plain, source.domain, "W(h_1, ..., h_n)");

    // Laplace expansion of W(u, h_1..h_n) along the u column
    const auto ladder = x_derivative_ladder(u, static_cast<int>(n) + 1);
    SolutionTemplate z;
    for (std::size_t k = 0; k <= n; ++k) {
        std::vector<std::vector<Expr1D>> minor;
        for (std::size_t row = 0; row <= n; ++row) {
            if (row != k) {
                minor.push_back(d[row]);
            }
        }
        Expr1D cofactor = determinant(minor) / w_prime;
        if (k % 2 == 1) {
            cofactor = -cofactor;
        }
        z = add(z, scale(ladder[k], cofactor));
    }

    EquationSpec target;
    target.coefficient = source.coefficient + 2.0 * (w_prime.diff() / w_prime - w_plain.diff() / w_plain);
    target.domain = source.domain;
    if (source.integrating_factor) {
        target.integrating_factor = *source.integrating_factor * pow(w_plain / w_prime, 2.0);
    }
    target.provenance = source.provenance;
    std::string note = "lemma2(n=" + std::to_string(n) + ", A={";
    for (std::size_t i = 0; i < n; ++i) {
        note += (i ? ", " : "") + fmt(hs[i].A);
    }
    note += "})";
    if (normalize) {
        const double divisor = normalize_template(z, source.domain.mid());
        note += " normalized by " + fmt(divisor) + " at x_ref=" + fmt(source.domain.mid());
    }
    target.provenance.push_back(std::move(note));
    return {std::move(target), std::move(z)};
}

std::string describe(const StepRecipe& recipe) {
    auto describe_h = [](const HRecipe& h) {
        return std::visit(overloaded{
                              [](const HFromProp2& p) { return "prop2(c1=" + fmt(p.c1) + ", c2=" + fmt(p.c2) + ")"; },
                              [](const HFromOde& o) {
                                  return "ode(A=" + fmt(o.A) + ", h0=" + fmt(o.h0) + ", dh0=" + fmt(o.dh0) + ")";
                              },
                              [](const HExponential& e) {
                                  return "exp(k=" + fmt(e.k) + ", c=" + fmt(e.c) + ", b=" + fmt(e.b) + ")";
                              },
                              [](const HGiven& g) { return g.label; },
                          },
                          h);
    };
    return std::visit(overloaded{
                          [](const Prop3Recipe& p) { return "prop3(c1=" + fmt(p.c1) + ", c2=" + fmt(p.c2) + ")"; },
                          [&](const Prop1Recipe& p) { return "prop1(h=" + describe_h(p.h) + ")"; },
                          [&](const Lemma2Recipe& l) {
                              std::string out = "lemma2(";
                              for (std::size_t i = 0; i < l.hs.size(); ++i) {
                                  out += (i ? ", " : "") + describe_h(l.hs[i]);
                              }
                              return out + ")";
                          },
                      },
                      recipe);
}

Eigenfunction realize(const HRecipe& recipe, const EquationSpec& equation) {
    return std::visit(
        overloaded{
            [&](const HFromProp2& p) {
                return Eigenfunction{h_prop2(equation.coefficient, p.c1, p.c2, equation.domain,
                                             equation.integrating_factor),
                                     0.0};
            },
            [&](const HFromOde& o) {
                return Eigenfunction{h_ode_solve(equation.coefficient, o.A, o.h0, o.dh0, equation.domain), o.A};
            },
            [&](const HExponential& e) {
                if (!equation.coefficient.is_zero()) {
                    throw PreconditionError("exponential eigenfunctions require the wave equation (G = 0)");
                }
                const Expr1D& x = xvar();
                return Eigenfunction{e.c * exp(e.k * x) + e.b * exp(-e.k * x), -e.k * e.k};
            },
            [&](const HGiven& g) { return Eigenfunction{g.h, g.A}; },
        },
        recipe);
}

ChainResult chain_apply(const std::vector<ChainStep>& steps, const EquationSpec& start,
                        const SolutionTemplate& u, bool normalize) {
    ChainResult result{start, u, {}};
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const Expr1D& step_source =
            std::visit([](const auto& s) -> const Expr1D& { return s.G; }, steps[i]);
        const double mismatch =
            max_pointwise_difference(result.equation.coefficient, step_source, result.equation.domain);
        if (!(mismatch <= coefficient_match_tolerance)) {
            throw PreconditionError("chain step " + std::to_string(i) +
                                    ": source coefficient does not match the current equation (difference " +
                                    fmt(mismatch) + ")");
        }
        auto [eq, tpl] = std::visit(
            overloaded{
                [&](const TransformStep& s) { return lemma1_apply(s, result.equation, result.solution, normalize); },
                [&](const WronskianStep& s) {
                    return lemma2_wronskian(result.equation, result.solution, s.hs, normalize);
                },
            },
            steps[i]);
        result.equation = std::move(eq);
        result.solution = std::move(tpl);
        result.steps.push_back(steps[i]);
    }
    return result;
}

ChainResult chain_build(const std::vector<StepRecipe>& recipes, const EquationSpec& start,
                        const SolutionTemplate& u, bool normalize) {
    ChainResult result{start, u, {}};
    for (const auto& recipe : recipes) {
        const EquationSpec& eq = result.equation;
        const ChainStep step = std::visit(
            overloaded{
                [&](const Prop3Recipe& p) -> ChainStep {
                    const Expr1D r = r_prop3(eq.coefficient, p.c1, p.c2, eq.domain, eq.integrating_factor);
                    return make_step(eq.coefficient, Expr1D(1.0), r, 0.0, eq.domain);
                },
                [&](const Prop1Recipe& p) -> ChainStep {
                    const Eigenfunction e = realize(p.h, eq);
                    return make_step(eq.coefficient, e.h, r_from_h_prop1(e.h, eq.domain), e.A, eq.domain);
                },
                [&](const Lemma2Recipe& l) -> ChainStep {
                    WronskianStep w{eq.coefficient, {}};
                    for (const auto& h : l.hs) {
                        w.hs.push_back(realize(h, eq));
                    }
                    return w;
                },
            },
            recipe);
        ChainResult next = chain_apply({step}, result.equation, result.solution, normalize);
        next.equation.provenance.back() = describe(recipe) + ": " + next.equation.provenance.back();
        result.equation = std::move(next.equation);
        result.solution = std::move(next.solution);
        result.steps.push_back(step);
    }
    return result;
}

}  // namespace gensol
