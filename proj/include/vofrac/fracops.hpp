#pragma once

#include "vofrac/mesh.hpp"
#include "vofrac/order.hpp"

#include <cstddef>
#include <span>

namespace vofrac {

/// L1 product-integration weights of the Caputo derivative at node n with the
/// kernel exponent frozen at `alpha`:
///   D_n g = sum_{j=1..n} w[j-1] (g_j - g_{j-1}),
///   w[j-1] = ((t_n - t_{j-1})^{1-a} - (t_n - t_j)^{1-a}) / (tau_j Gamma(2-a)).
/// `out` must hold n entries.
void l1_weights(const TimeMesh& mesh, std::size_t n, double alpha, std::span<double> out);

/// d/dalpha of the L1 weights above (exact moments of the log-weighted kernel).
void l1_weight_sensitivities(const TimeMesh& mesh, std::size_t n, double alpha,
                             std::span<double> out);

/// Variable-order Riemann-Liouville integral of g at t_n: piecewise-linear g,
/// kernel (t_n - s)^{alpha(t_n) - 1} integrated exactly per subinterval.
/// Throws SingularOrderError when alpha(t_n) = 0.
double frac_integral_vo(const SampledFunction& g, const OrderFunction& alpha, std::size_t n);

/// Variable-order Caputo derivative at t_n (L1 scheme, order frozen at t_n).
/// Order zero returns g(t_n) - g(0) exactly.
double caputo_vo(const SampledFunction& g, const OrderFunction& alpha, std::size_t n);

/// Constant-order variant of caputo_vo.
double caputo(const SampledFunction& g, double alpha, std::size_t n);

/// d/dalpha of the Caputo derivative at t_n for a frozen order value,
///   (1/Gamma(1-a)) int_0^t (psi(1-a) - ln(t-s)) g'(s) (t-s)^{-a} ds,
/// discretized with the same piecewise-constant g' as caputo_vo.
double caputo_order_sensitivity(const SampledFunction& g, double alpha_value, std::size_t n);

} // namespace vofrac
