#pragma once

#include "pairs/domain.hpp"

#include <span>
#include <string>

namespace pairs {

/// A twice-differentiable spread S(p) over the positive quadrant.
///
/// Implementations must never have a stationary point at an evaluated price;
/// the checked accessors spread_gradient() etc. enforce this pointwise.
/// Mean reversion of a model is never assumed, only estimated.
class SpreadModel {
public:
    virtual ~SpreadModel() = default;

    [[nodiscard]] virtual double value(const PricePoint& p) const = 0;
    [[nodiscard]] virtual Vec2 gradient(const PricePoint& p) const = 0;
    [[nodiscard]] virtual Mat2 hessian(const PricePoint& p) const = 0;
    [[nodiscard]] virtual std::string name() const = 0;

    /// max over the tensor grid x1 × x2 of |(p' - c)^T H(p') (p' - c)|.
    /// The default evaluates hessian() at every grid point; models with
    /// structure may override with something faster that agrees with it.
    [[nodiscard]] virtual double box_quadratic_max(const PricePoint& center,
                                                   std::span<const double> x1,
                                                   std::span<const double> x2) const;
};

/// S(p) = log p2 - beta log p1 - mu (natural logs).
class CointegrationSpread final : public SpreadModel {
public:
    CointegrationSpread(double beta, double mu);

    [[nodiscard]] double beta() const { return beta_; }
    [[nodiscard]] double mu() const { return mu_; }

    [[nodiscard]] double value(const PricePoint& p) const override;
    [[nodiscard]] Vec2 gradient(const PricePoint& p) const override;
    [[nodiscard]] Mat2 hessian(const PricePoint& p) const override;
    [[nodiscard]] std::string name() const override { return "cointegration"; }

    /// Diagonal Hessian diag(beta/p1^2, -1/p2^2): the form separates per
    /// coordinate and goes through the vectorized kernel.
    [[nodiscard]] double box_quadratic_max(const PricePoint& center, std::span<const double> x1,
                                           std::span<const double> x2) const override;

private:
    double beta_;
    double mu_;
};

// Checked evaluation: prices must be positive (DomainError), and the gradient
// must be nonzero (StationaryPointError).
double spread_value(const SpreadModel& model, const PricePoint& p);
Vec2 spread_gradient(const SpreadModel& model, const PricePoint& p);
Mat2 spread_hessian(const SpreadModel& model, const PricePoint& p);

/// OLS of log p2 on log p1 with intercept over the window: beta is the slope,
/// mu the intercept, so the residuals are the fitted spread's values.
/// Needs >= 3 periods (LengthError); throws DegenerateRegressorError when
/// log p1 has no variance over the window.
CointegrationSpread fit_cointegration(PriceWindow window);

} // namespace pairs
