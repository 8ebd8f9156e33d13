#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vofrac {

/// Polynomial sum_j c_j t^j in the monomial basis.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs);

    double operator()(double t) const noexcept;
    double derivative(double t) const noexcept;
    std::size_t degree() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
    std::span<const double> coeffs() const noexcept { return coeffs_; }

    bool operator==(const Polynomial&) const = default;

private:
    std::vector<double> coeffs_;
};

inline constexpr std::size_t kDefaultMaxOrderDegree = 6;
inline constexpr std::size_t kOrderBoundSamples = 1000;

/// Admissible variable order alpha(t) on [0, T]: a polynomial with
/// 0 <= alpha(t) <= alpha_star < 1, checked on a dense uniform sample.
class OrderFunction {
public:
    OrderFunction(std::vector<double> coeffs, double alpha_star, double horizon,
                  std::size_t max_degree = kDefaultMaxOrderDegree);

    /// alpha(t); throws DomainError outside [0, T].
    double operator()(double t) const;

    const Polynomial& polynomial() const noexcept { return poly_; }
    std::span<const double> coeffs() const noexcept { return poly_.coeffs(); }
    double alpha_star() const noexcept { return alpha_star_; }
    double horizon() const noexcept { return horizon_; }

    /// True when the bounds hold on the dense sample (no exception).
    static bool admissible(std::span<const double> coeffs, double alpha_star, double horizon);

    /// Largest violation of 0 <= alpha <= alpha_star over the dense sample (0 if admissible).
    static double bound_violation(std::span<const double> coeffs, double alpha_star, double horizon);

    /// Constant order.
    static OrderFunction constant(double value, double alpha_star, double horizon);

private:
    Polynomial poly_;
    double alpha_star_;
    double horizon_;
};

} // namespace vofrac
