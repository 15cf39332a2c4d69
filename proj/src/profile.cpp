#include "gensol/profile.hpp"

#include <cmath>
#include <cstdio>

#include "gensol/errors.hpp"

namespace gensol {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Physicists' Hermite polynomial H_k(z): d^k/dz^k exp(-z^2) = (-1)^k H_k(z) exp(-z^2).
double hermite(int k, double z) {
    double prev = 1.0;
    if (k == 0) {
        return prev;
    }
    double curr = 2.0 * z;
    for (int j = 1; j < k; ++j) {
        const double next = 2.0 * z * curr - 2.0 * j * prev;
        prev = curr;
        curr = next;
    }
    return curr;
}

}  // namespace

ProfileFunction::ProfileFunction(Kind kind, int max_order) : kind_(std::move(kind)), max_order_(max_order) {
    if (max_order_ < 0) {
        throw PreconditionError("profile max derivative order must be non-negative");
    }
    if (const auto* g = std::get_if<Gaussian>(&kind_); g && !(g->width > 0.0)) {
        throw PreconditionError("gaussian width must be positive");
    }
}

ProfileFunction ProfileFunction::gaussian(double center, double width, double amplitude) {
    return ProfileFunction(Gaussian{center, width, amplitude});
}

ProfileFunction ProfileFunction::sinusoid(double frequency, double phase, double amplitude) {
    return ProfileFunction(Sinusoid{frequency, phase, amplitude});
}

ProfileFunction ProfileFunction::polynomial(std::vector<double> coefficients) {
    return ProfileFunction(Polynomial{std::move(coefficients)});
}

ProfileFunction ProfileFunction::exponential(double rate, double amplitude) {
    return ProfileFunction(Exponential{rate, amplitude});
}

double ProfileFunction::derivative(int k, double xi) const {
    if (k < 0 || k > max_order_) {
        throw PreconditionError("profile derivative order " + std::to_string(k) +
                                " outside [0, " + std::to_string(max_order_) + "]");
    }
    return std::visit(
        overloaded{
            [&](const Gaussian& g) {
                const double z = (xi - g.center) / g.width;
                const double sign = (k % 2 == 0) ? 1.0 : -1.0;
                return g.amplitude * sign * hermite(k, z) * std::exp(-z * z) /
                       std::pow(g.width, k);
            },
            [&](const Sinusoid& s) {
                const double arg = s.frequency * xi + s.phase;
                const double scale = s.amplitude * std::pow(s.frequency, k);
                switch (k % 4) {
                    case 0: return scale * std::sin(arg);
                    case 1: return scale * std::cos(arg);
                    case 2: return -scale * std::sin(arg);
                    default: return -scale * std::cos(arg);
                }
            },
            [&](const Polynomial& p) {
                // Horner on the k-th derivative coefficients
                double acc = 0.0;
                for (int m = static_cast<int>(p.coefficients.size()) - 1; m >= k; --m) {
                    double falling = 1.0;
                    for (int j = 0; j < k; ++j) {
                        falling *= static_cast<double>(m - j);
                    }
                    acc = acc * xi + falling * p.coefficients[static_cast<std::size_t>(m)];
                }
                return acc;
            },
            [&](const Exponential& e) {
                return e.amplitude * std::pow(e.rate, k) * std::exp(e.rate * xi);
            },
        },
        kind_);
}

std::string ProfileFunction::describe() const {
    char buf[128];
    return std::visit(
        overloaded{
            [&](const Gaussian& g) {
                std::snprintf(buf, sizeof buf, "gaussian(center=%.17g, width=%.17g, amplitude=%.17g)",
                              g.center, g.width, g.amplitude);
                return std::string(buf);
            },
            [&](const Sinusoid& s) {
                std::snprintf(buf, sizeof buf, "sinusoid(frequency=%.17g, phase=%.17g, amplitude=%.17g)",
                              s.frequency, s.phase, s.amplitude);
                return std::string(buf);
            },
            [&](const Polynomial& p) {
                std::string out = "polynomial(";
                for (std::size_t i = 0; i < p.coefficients.size(); ++i) {
                    std::snprintf(buf, sizeof buf, "%s%.17g", i ? ", " : "", p.coefficients[i]);
                    out += buf;
                }
                return out + ")";
            },
            [&](const Exponential& e) {
                std::snprintf(buf, sizeof buf, "exponential(rate=%.17g, amplitude=%.17g)", e.rate,
                              e.amplitude);
                return std::string(buf);
            },
        },
        kind_);
}

}  // namespace gensol
