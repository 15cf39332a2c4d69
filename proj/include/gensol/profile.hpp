#pragma once

#include <string>
#include <variant>
#include <vector>

namespace gensol {

inline constexpr int default_max_derivative = 16;

/// A concrete choice for one of the arbitrary functions T, X of a general
/// solution. Every kind has closed-form derivatives of any order up to
/// max_order().
class ProfileFunction {
public:
    /// amplitude * exp(-((xi - center) / width)^2)
    struct Gaussian {
        double center = 0.0;
        double width = 1.0;
        double amplitude = 1.0;
    };
    /// amplitude * sin(frequency * xi + phase)
    struct Sinusoid {
        double frequency = 1.0;
        double phase = 0.0;
        double amplitude = 1.0;
    };
    /// sum_k coefficients[k] * xi^k
    struct Polynomial {
        std::vector<double> coefficients;
    };
    /// amplitude * exp(rate * xi)
    struct Exponential {
        double rate = 1.0;
        double amplitude = 1.0;
    };
    using Kind = std::variant<Gaussian, Sinusoid, Polynomial, Exponential>;

    ProfileFunction(Kind kind, int max_order = default_max_derivative);

    static ProfileFunction gaussian(double center, double width, double amplitude = 1.0);
    static ProfileFunction sinusoid(double frequency, double phase = 0.0, double amplitude = 1.0);
    static ProfileFunction polynomial(std::vector<double> coefficients);
    static ProfileFunction exponential(double rate, double amplitude = 1.0);
    static ProfileFunction zero() { return polynomial({}); }

    /// k-th derivative at xi. Throws PreconditionError if k > max_order().
    double derivative(int k, double xi) const;
    double operator()(double xi) const { return derivative(0, xi); }

    int max_order() const noexcept { return max_order_; }
    const Kind& kind() const noexcept { return kind_; }
    std::string describe() const;

private:
    Kind kind_;
    int max_order_;
};

}  // namespace gensol
