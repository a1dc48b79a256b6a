#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mq1/errors.hpp"

namespace mq1 {

enum class RewardKind { Quadratic, Power, Linear, Polynomial, Tabulated };

enum class TabulatedRule { Linear };

enum class StencilSide { Central, Left, Right };

// Reward F on [0, lambda_max] with F(0) = 0 and F >= 0. Immutable after
// construction; instances are safe to share across threads.
class RewardFunction {
  public:
    static RewardFunction quadratic(double a, double b, double c, double lambda_max);
    static RewardFunction power(double exponent, double lambda_max);
    static RewardFunction linear(double slope, double lambda_max);
    // coefficients[i] multiplies x^i
    static RewardFunction polynomial(std::vector<double> coefficients, double lambda_max);
    static RewardFunction tabulated(std::vector<std::pair<double, double>> points,
                                    TabulatedRule rule = TabulatedRule::Linear);

    RewardKind kind() const { return kind_; }
    double lambda_max() const { return lambda_max_; }

    double operator()(double x) const { return value(x); }
    double value(double x) const;

    // Analytic derivative when the kind provides one (or the caller supplied
    // evaluators); finite differences with step 1e-5 otherwise. Side is
    // honored for x at kinks or domain edges; Central falls back to a
    // one-sided stencil at the boundary.
    double derivative(double x, int order, StencilSide side = StencilSide::Central) const;

    bool has_analytic_derivatives() const;
    // Optional externally supplied derivative evaluators (first, second).
    void set_analytic_derivatives(std::function<double(double)> d1,
                                  std::function<double(double)> d2);

    // Kind parameters, exposed for policy construction and config echo.
    const std::vector<double>& coefficients() const { return coeffs_; }
    const std::vector<std::pair<double, double>>& points() const { return points_; }
    std::string describe() const;

    static constexpr double kFdStep = 1e-5;

  private:
    RewardFunction() = default;
    void validate() const;
    double raw_value(double x) const;

    RewardKind kind_ = RewardKind::Linear;
    double lambda_max_ = 1.0;
    std::vector<double> coeffs_;                       // quadratic: {c,b,a}; polynomial ascending
    std::vector<std::pair<double, double>> points_;    // tabulated
    TabulatedRule rule_ = TabulatedRule::Linear;
    double exponent_ = 1.0;
    std::function<double(double)> user_d1_, user_d2_;
};

// Free-function spellings used throughout the tests.
inline double eval(const RewardFunction& f, double x) { return f.value(x); }
inline double derivative(const RewardFunction& f, double x, int order,
                         StencilSide side = StencilSide::Central) {
    return f.derivative(x, order, side);
}

}  // namespace mq1
