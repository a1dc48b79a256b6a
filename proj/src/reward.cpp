#include "mq1/reward.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mq1 {

namespace {

constexpr double kZeroTol = 1e-12;

}  // namespace

RewardFunction RewardFunction::quadratic(double a, double b, double c, double lambda_max) {
    RewardFunction f;
    f.kind_ = RewardKind::Quadratic;
    f.lambda_max_ = lambda_max;
    f.coeffs_ = {c, b, a};
    f.validate();
    return f;
}

RewardFunction RewardFunction::power(double exponent, double lambda_max) {
    if (exponent <= 0.0) throw DomainError("power reward needs a positive exponent");
    RewardFunction f;
    f.kind_ = RewardKind::Power;
    f.lambda_max_ = lambda_max;
    f.exponent_ = exponent;
    f.validate();
    return f;
}

RewardFunction RewardFunction::linear(double slope, double lambda_max) {
    RewardFunction f;
    f.kind_ = RewardKind::Linear;
    f.lambda_max_ = lambda_max;
    f.coeffs_ = {0.0, slope};
    f.validate();
    return f;
}

RewardFunction RewardFunction::polynomial(std::vector<double> coefficients, double lambda_max) {
    if (coefficients.empty()) throw DomainError("polynomial reward needs coefficients");
    RewardFunction f;
    f.kind_ = RewardKind::Polynomial;
    f.lambda_max_ = lambda_max;
    f.coeffs_ = std::move(coefficients);
    f.validate();
    return f;
}

RewardFunction RewardFunction::tabulated(std::vector<std::pair<double, double>> points,
                                         TabulatedRule rule) {
    if (points.size() < 2) throw DomainError("tabulated reward needs at least two points");
    std::sort(points.begin(), points.end());
    for (size_t i = 1; i < points.size(); ++i)
        if (points[i].first <= points[i - 1].first)
            throw DomainError("tabulated reward needs strictly increasing abscissae");
    RewardFunction f;
    f.kind_ = RewardKind::Tabulated;
    f.lambda_max_ = points.back().first;
    f.points_ = std::move(points);
    f.rule_ = rule;
    f.validate();
    return f;
}

void RewardFunction::validate() const {
    if (!(lambda_max_ > 0.0)) throw DomainError("lambda_max must be positive");
    if (kind_ == RewardKind::Tabulated && points_.front().first != 0.0)
        throw DomainError("tabulated reward must start at x = 0");
    if (std::abs(raw_value(0.0)) > kZeroTol)
        throw DomainError("reward must satisfy F(0) = 0");
    const int n = 257;
    for (int i = 0; i <= n; ++i) {
        double x = lambda_max_ * i / n;
        double v = raw_value(x);
        if (!std::isfinite(v))
            throw EvaluationError("reward is not finite at x = " + std::to_string(x));
        if (v < -kZeroTol)
            throw DomainError("reward is negative at x = " + std::to_string(x));
    }
}

double RewardFunction::raw_value(double x) const {
    switch (kind_) {
        case RewardKind::Quadratic:
        case RewardKind::Linear:
        case RewardKind::Polynomial: {
            double v = 0.0;
            for (size_t i = coeffs_.size(); i-- > 0;) v = v * x + coeffs_[i];
            return v;
        }
        case RewardKind::Power:
            return std::pow(x, exponent_);
        case RewardKind::Tabulated: {
            auto it = std::lower_bound(points_.begin(), points_.end(),
                                       std::make_pair(x, -1e308));
            if (it == points_.begin()) return it->second;
            if (it == points_.end()) return points_.back().second;
            auto [x1, y1] = *it;
            auto [x0, y0] = *(it - 1);
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
        }
    }
    return 0.0;
}

double RewardFunction::value(double x) const {
    if (x < -kZeroTol || x > lambda_max_ + kZeroTol)
        throw DomainError("reward argument " + std::to_string(x) + " outside [0, " +
                          std::to_string(lambda_max_) + "]");
    x = std::clamp(x, 0.0, lambda_max_);
    return raw_value(x);
}

bool RewardFunction::has_analytic_derivatives() const {
    if (user_d1_ && user_d2_) return true;
    return kind_ != RewardKind::Tabulated;
}

void RewardFunction::set_analytic_derivatives(std::function<double(double)> d1,
                                              std::function<double(double)> d2) {
    user_d1_ = std::move(d1);
    user_d2_ = std::move(d2);
}

double RewardFunction::derivative(double x, int order, StencilSide side) const {
    if (order != 1 && order != 2) throw DomainError("derivative order must be 1 or 2");
    if (x < -kZeroTol || x > lambda_max_ + kZeroTol)
        throw DomainError("derivative point outside domain");
    x = std::clamp(x, 0.0, lambda_max_);

    if (user_d1_ && user_d2_) return order == 1 ? user_d1_(x) : user_d2_(x);

    switch (kind_) {
        case RewardKind::Quadratic:
        case RewardKind::Linear:
        case RewardKind::Polynomial: {
            // derivative of sum c_i x^i
            double v = 0.0;
            if (order == 1) {
                for (size_t i = coeffs_.size(); i-- > 1;)
                    v = v * x + coeffs_[i] * static_cast<double>(i);
            } else {
                for (size_t i = coeffs_.size(); i-- > 2;)
                    v = v * x + coeffs_[i] * static_cast<double>(i) * static_cast<double>(i - 1);
            }
            return v;
        }
        case RewardKind::Power: {
            double e = exponent_;
            return order == 1 ? e * std::pow(x, e - 1.0)
                              : e * (e - 1.0) * std::pow(x, e - 2.0);
        }
        case RewardKind::Tabulated:
            break;
    }

    // Finite differences on the interpolant.
    double h = kFdStep;
    double spacing = 0.0;
    for (size_t i = 1; i < points_.size(); ++i)
        spacing = std::max(spacing, points_[i].first - points_[i - 1].first);
    if (spacing > h)
        throw ResolutionError("tabulated grid spacing " + std::to_string(spacing) +
                              " is coarser than the finite-difference step");

    bool can_left = x - 2 * h >= 0.0;
    bool can_right = x + 2 * h <= lambda_max_;
    StencilSide s = side;
    if (s == StencilSide::Central) {
        if (x - h < 0.0) s = StencilSide::Right;
        else if (x + h > lambda_max_) s = StencilSide::Left;
    }
    auto F = [this](double t) { return raw_value(t); };
    if (s == StencilSide::Central) {
        if (order == 1) return (F(x + h) - F(x - h)) / (2 * h);
        return (F(x + h) - 2 * F(x) + F(x - h)) / (h * h);
    }
    if (s == StencilSide::Left) {
        if (!can_left) throw DomainError("left stencil does not fit in the domain");
        if (order == 1) return (3 * F(x) - 4 * F(x - h) + F(x - 2 * h)) / (2 * h);
        return (F(x) - 2 * F(x - h) + F(x - 2 * h)) / (h * h);
    }
    if (!can_right) throw DomainError("right stencil does not fit in the domain");
    if (order == 1) return (-3 * F(x) + 4 * F(x + h) - F(x + 2 * h)) / (2 * h);
    return (F(x) - 2 * F(x + h) + F(x + 2 * h)) / (h * h);
}

std::string RewardFunction::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case RewardKind::Quadratic:
            os << "quadratic(" << coeffs_[2] << "x^2 + " << coeffs_[1] << "x + " << coeffs_[0]
               << ")";
            break;
        case RewardKind::Power:
            os << "power(x^" << exponent_ << ")";
            break;
        case RewardKind::Linear:
            os << "linear(" << coeffs_[1] << "x)";
            break;
        case RewardKind::Polynomial:
            os << "polynomial(deg " << coeffs_.size() - 1 << ")";
            break;
        case RewardKind::Tabulated:
            os << "tabulated(" << points_.size() << " pts)";
            break;
    }
    os << " on [0, " << lambda_max_ << "]";
    return os.str();
}

}  // namespace mq1
