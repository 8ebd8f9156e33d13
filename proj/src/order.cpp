#include "vofrac/order.hpp"

#include "vofrac/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vofrac {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs))
{
    for (double c : coeffs_)
        if (!std::isfinite(c))
            throw DomainError("polynomial: non-finite coefficient");
}

double Polynomial::operator()(double t) const noexcept
{
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * t + *it;
    return acc;
}

double Polynomial::derivative(double t) const noexcept
{
    double acc = 0.0;
    for (std::size_t j = coeffs_.size(); j-- > 1;)
        acc = acc * t + static_cast<double>(j) * coeffs_[j];
    return acc;
}

namespace {

double sample_violation(const Polynomial& p, double alpha_star, double horizon)
{
    double worst = 0.0;
    for (std::size_t s = 0; s <= kOrderBoundSamples; ++s) {
        const double t = horizon * static_cast<double>(s) / static_cast<double>(kOrderBoundSamples);
        const double a = p(t);
        if (!std::isfinite(a))
            return INFINITY;
        worst = std::max({worst, -a, a - alpha_star});
    }
    return worst;
}

} // namespace

OrderFunction::OrderFunction(std::vector<double> coeffs, double alpha_star, double horizon,
                             std::size_t max_degree)
    : poly_(std::move(coeffs)), alpha_star_(alpha_star), horizon_(horizon)
{
    if (poly_.coeffs().empty())
        throw PreconditionError("order: at least one coefficient required");
    if (poly_.degree() > max_degree) {
        std::ostringstream os;
        os << "order: polynomial degree " << poly_.degree() << " exceeds maximum " << max_degree;
        throw PreconditionError(os.str());
    }
    if (!(horizon > 0.0))
        throw PreconditionError("order: horizon T must be positive");
    if (!(alpha_star > 0.0 && alpha_star < 1.0)) {
        std::ostringstream os;
        os << "order: alpha_star = " << alpha_star
           << " violates the bound 0 ≤ α(t) ≤ α_* < 1 (alpha_star must lie in (0, 1))";
        throw PreconditionError(os.str());
    }
    const double v = sample_violation(poly_, alpha_star, horizon);
    if (v > 0.0) {
        std::ostringstream os;
        os << "order: alpha(t) leaves [0, alpha_star] by " << v
           << "; required 0 ≤ α(t) ≤ α_* < 1 on [0, T]";
        throw PreconditionError(os.str());
    }
}

double OrderFunction::operator()(double t) const
{
    if (!(t >= 0.0 && t <= horizon_))
        throw DomainError("order: t outside [0, T]");
    // Sampled admissibility leaves room for rounding-level excursions between samples.
    return std::clamp(poly_(t), 0.0, alpha_star_);
}

bool OrderFunction::admissible(std::span<const double> coeffs, double alpha_star, double horizon)
{
    return bound_violation(coeffs, alpha_star, horizon) == 0.0;
}

double OrderFunction::bound_violation(std::span<const double> coeffs, double alpha_star,
                                      double horizon)
{
    return sample_violation(Polynomial({coeffs.begin(), coeffs.end()}), alpha_star, horizon);
}

OrderFunction OrderFunction::constant(double value, double alpha_star, double horizon)
{
    return OrderFunction({value}, alpha_star, horizon);
}

} // namespace vofrac
