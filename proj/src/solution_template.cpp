#include "gensol/solution_template.hpp"

#include <algorithm>
#include <cstdio>

#include "gensol/errors.hpp"

namespace gensol {

namespace {

void accumulate(SolutionTemplate::Part& part, int order, const Expr1D& c) {
    if (c.is_zero()) {
        return;
    }
    auto [it, inserted] = part.try_emplace(order, c);
    if (!inserted) {
        it->second = it->second + c;
        if (it->second.is_zero()) {
            part.erase(it);
        }
    }
}

SolutionTemplate::Part pruned(SolutionTemplate::Part part) {
    std::erase_if(part, [](const auto& kv) { return kv.second.is_zero(); });
    return part;
}

}  // namespace

SolutionTemplate::SolutionTemplate(Part plus_part, Part minus_part)
    : plus_(pruned(std::move(plus_part))), minus_(pruned(std::move(minus_part))) {
    for (const auto& part : {&plus_, &minus_}) {
        if (!part->empty() && part->begin()->first < 0) {
            throw PreconditionError("template derivative orders must be non-negative");
        }
    }
}

SolutionTemplate SolutionTemplate::wave() { return SolutionTemplate({{0, 1.0}}, {{0, 1.0}}); }

Expr1D SolutionTemplate::plus(int order) const {
    const auto it = plus_.find(order);
    return it == plus_.end() ? Expr1D(0.0) : it->second;
}

Expr1D SolutionTemplate::minus(int order) const {
    const auto it = minus_.find(order);
    return it == minus_.end() ? Expr1D(0.0) : it->second;
}

int SolutionTemplate::max_order() const {
    int m = -1;
    if (!plus_.empty()) {
        m = std::max(m, plus_.rbegin()->first);
    }
    if (!minus_.empty()) {
        m = std::max(m, minus_.rbegin()->first);
    }
    return m;
}

double SolutionTemplate::evaluate(const ProfileFunction& T, const ProfileFunction& X, double t,
                                  double x) const {
    double u = 0.0;
    for (const auto& [i, a] : plus_) {
        u += a(x) * T.derivative(i, t + x);
    }
    for (const auto& [j, b] : minus_) {
        u += b(x) * X.derivative(j, t - x);
    }
    return u;
}

std::string SolutionTemplate::summary() const {
    std::string out = "plus orders {";
    bool first = true;
    for (const auto& [i, a] : plus_) {
        out += (first ? "" : ", ") + std::to_string(i);
        first = false;
    }
    out += "}, minus orders {";
    first = true;
    for (const auto& [j, b] : minus_) {
        out += (first ? "" : ", ") + std::to_string(j);
        first = false;
    }
    return out + "}";
}

SolutionTemplate diff_x(const SolutionTemplate& u) {
    SolutionTemplate::Part plus;
    SolutionTemplate::Part minus;
    for (const auto& [i, a] : u.plus_part()) {
        accumulate(plus, i, a.diff());
        accumulate(plus, i + 1, a);
    }
    // d/dx X^(j)(t - x) = -X^(j+1)(t - x)
    for (const auto& [j, b] : u.minus_part()) {
        accumulate(minus, j, b.diff());
        accumulate(minus, j + 1, -b);
    }
    return SolutionTemplate(std::move(plus), std::move(minus));
}

SolutionTemplate diff_t(const SolutionTemplate& u) {
    SolutionTemplate::Part plus;
    SolutionTemplate::Part minus;
    for (const auto& [i, a] : u.plus_part()) {
        plus.emplace(i + 1, a);
    }
    for (const auto& [j, b] : u.minus_part()) {
        minus.emplace(j + 1, b);
    }
    return SolutionTemplate(std::move(plus), std::move(minus));
}

SolutionTemplate scale(const SolutionTemplate& u, const Expr1D& c) {
    SolutionTemplate::Part plus;
    SolutionTemplate::Part minus;
    for (const auto& [i, a] : u.plus_part()) {
        accumulate(plus, i, c * a);
    }
    for (const auto& [j, b] : u.minus_part()) {
        accumulate(minus, j, c * b);
    }
    return SolutionTemplate(std::move(plus), std::move(minus));
}

SolutionTemplate add(const SolutionTemplate& a, const SolutionTemplate& b) {
    SolutionTemplate::Part plus = a.plus_part();
    SolutionTemplate::Part minus = a.minus_part();
    for (const auto& [i, c] : b.plus_part()) {
        accumulate(plus, i, c);
    }
    for (const auto& [j, c] : b.minus_part()) {
        accumulate(minus, j, c);
    }
    return SolutionTemplate(std::move(plus), std::move(minus));
}

Jet2::Jet2(double t, double x, int order) : t_(t), x_(x), order_(order) {
    if (order < 0) {
        throw PreconditionError("jet order must be non-negative");
    }
    data_.assign(static_cast<std::size_t>((order + 1) * (order + 2) / 2), 0.0);
}

std::size_t Jet2::index(int p, int q) const {
    if (p < 0 || q < 0 || p + q > order_) {
        throw PreconditionError("jet index (" + std::to_string(p) + ", " + std::to_string(q) +
                                ") exceeds order " + std::to_string(order_));
    }
    // total degree d = p + q occupies slots [d(d+1)/2, (d+1)(d+2)/2)
    const int d = p + q;
    return static_cast<std::size_t>(d * (d + 1) / 2 + q);
}

double& Jet2::operator()(int p, int q) { return data_[index(p, q)]; }
double Jet2::operator()(int p, int q) const { return data_[index(p, q)]; }

JetEvaluator::JetEvaluator(SolutionTemplate u, int order) : order_(order) {
    if (order < 0) {
        throw PreconditionError("jet order must be non-negative");
    }
    x_derivatives_.reserve(static_cast<std::size_t>(order + 1));
    x_derivatives_.push_back(std::move(u));
    for (int q = 1; q <= order; ++q) {
        x_derivatives_.push_back(diff_x(x_derivatives_.back()));
    }
}

void JetEvaluator::check_profiles(const ProfileFunction& T, const ProfileFunction& X) const {
    // d_t^p d_x^q needs (highest order of d_x^q u) + p, with p <= order - q
    int need_plus = -1;
    int need_minus = -1;
    for (int q = 0; q <= order_; ++q) {
        const auto& tpl = x_derivatives_[static_cast<std::size_t>(q)];
        if (!tpl.plus_part().empty()) {
            need_plus = std::max(need_plus, tpl.plus_part().rbegin()->first + order_ - q);
        }
        if (!tpl.minus_part().empty()) {
            need_minus = std::max(need_minus, tpl.minus_part().rbegin()->first + order_ - q);
        }
    }
    if (need_plus > T.max_order()) {
        throw PreconditionError("profile T cannot supply derivative order " +
                                std::to_string(need_plus));
    }
    if (need_minus > X.max_order()) {
        throw PreconditionError("profile X cannot supply derivative order " +
                                std::to_string(need_minus));
    }
}

JetEvaluator::Column JetEvaluator::at(double x) const {
    Column col;
    col.x_ = x;
    col.order_ = order_;
    col.plus_.resize(x_derivatives_.size());
    col.minus_.resize(x_derivatives_.size());
    for (std::size_t q = 0; q < x_derivatives_.size(); ++q) {
        for (const auto& [i, a] : x_derivatives_[q].plus_part()) {
            col.plus_[q].push_back({i, a(x)});
        }
        for (const auto& [j, b] : x_derivatives_[q].minus_part()) {
            col.minus_[q].push_back({j, b(x)});
        }
    }
    return col;
}

Jet2 JetEvaluator::Column::jet(const ProfileFunction& T, const ProfileFunction& X, double t) const {
    Jet2 out(t, x_, order_);
    const double xi_plus = t + x_;
    const double xi_minus = t - x_;
    for (int q = 0; q <= order_; ++q) {
        const auto qi = static_cast<std::size_t>(q);
        for (int p = 0; p + q <= order_; ++p) {
            double v = 0.0;
            for (const auto& e : plus_[qi]) {
                v += e.coefficient * T.derivative(e.order + p, xi_plus);
            }
            for (const auto& e : minus_[qi]) {
                v += e.coefficient * X.derivative(e.order + p, xi_minus);
            }
            out(p, q) = v;
        }
    }
    return out;
}

Jet2 JetEvaluator::jet(const ProfileFunction& T, const ProfileFunction& X, double t, double x) const {
    return at(x).jet(T, X, t);
}

Jet2 eval_jet(const SolutionTemplate& u, const ProfileFunction& T, const ProfileFunction& X,
              double t, double x, int order) {
    const JetEvaluator ev(u, order);
    ev.check_profiles(T, X);
    return ev.jet(T, X, t, x);
}

}  // namespace gensol
