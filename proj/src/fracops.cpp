#include "vofrac/fracops.hpp"

#include "vofrac/errors.hpp"
#include "vofrac/special.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace vofrac {

namespace {

void check_node(const TimeMesh& mesh, std::size_t n, const char* who)
{
    if (n == 0)
        throw DomainError(std::string(who) + ": node index must be >= 1 (operator defined for t > 0)");
    if (n >= mesh.size())
        throw DomainError(std::string(who) + ": node index " + std::to_string(n) + " past end of mesh");
}

void check_order_value(double alpha, const char* who)
{
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw DomainError(std::string(who) + ": order must lie in [0, 1)");
}

// A^p - B^p for 0 <= B < A, accurate when B is close to A.
double power_gap(double upper, double lower, double p)
{
    if (lower == 0.0)
        return std::pow(upper, p);
    return -std::pow(upper, p) * std::expm1(p * std::log1p(-(upper - lower) / upper));
}

double order_at(const OrderFunction& alpha, const TimeMesh& mesh, std::size_t n)
{
    return alpha(mesh[n]);
}

} // namespace

void l1_weights(const TimeMesh& mesh, std::size_t n, double alpha, std::span<double> out)
{
    const double p = 1.0 - alpha;
    const double scale = 1.0 / std::tgamma(2.0 - alpha);
    const double tn = mesh[n];
    for (std::size_t j = 1; j <= n; ++j) {
        const double upper = tn - mesh[j - 1];
        const double lower = tn - mesh[j];
        out[j - 1] = power_gap(upper, lower, p) * scale / mesh.step(j);
    }
}

void l1_weight_sensitivities(const TimeMesh& mesh, std::size_t n, double alpha,
                             std::span<double> out)
{
    // w = (1/(tau Gamma(1-a))) int_B^A x^{-a} dx, so
    // dw/da = psi(1-a) w - (1/(tau Gamma(1-a))) int_B^A ln(x) x^{-a} dx,
    // with int x^{-a} ln x dx = x^p/p (ln x - 1/p), p = 1 - a.
    const double p = 1.0 - alpha;
    const double psi = digamma(p);
    const double inv_gamma = 1.0 / std::tgamma(p);
    const double tn = mesh[n];
    for (std::size_t j = 1; j <= n; ++j) {
        const double upper = tn - mesh[j - 1];
        const double lower = tn - mesh[j];
        const double gap = power_gap(upper, lower, p);
        // A^p ln A - B^p ln B, rearranged to avoid cancellation
        const double log_gap = lower == 0.0
            ? gap * std::log(upper)
            : gap * std::log(upper) - std::pow(lower, p) * std::log1p(-(upper - lower) / upper);
        const double moment = gap / p;
        const double log_moment = log_gap / p - gap / (p * p);
        out[j - 1] = inv_gamma * (psi * moment - log_moment) / mesh.step(j);
    }
}

double frac_integral_vo(const SampledFunction& g, const OrderFunction& alpha, std::size_t n)
{
    const TimeMesh& mesh = g.mesh;
    check_node(mesh, n, "frac_integral_vo");
    const double a = order_at(alpha, mesh, n);
    if (a == 0.0)
        throw SingularOrderError(
            "frac_integral_vo: order vanishes at t_n; the integral degenerates (use the identity limit)");

    const double tn = mesh[n];
    const double scale = 1.0 / std::tgamma(a);
    double acc = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
        const double upper = tn - mesh[j - 1];
        const double lower = tn - mesh[j];
        const double tau = mesh.step(j);
        // int_B^A x^{a-1} dx and int_B^A (x - B) x^{a-1} dx with x = t_n - s
        const double m0 = power_gap(upper, lower, a) / a;
        const double m1 = power_gap(upper, lower, a + 1.0) / (a + 1.0) - lower * m0;
        // g(s) = g_{j-1} (x - B)/tau + g_j (A - x)/tau
        acc += g.values[j - 1] * (m1 / tau) + g.values[j] * (m0 - m1 / tau);
    }
    return acc * scale;
}

double caputo(const SampledFunction& g, double alpha, std::size_t n)
{
    const TimeMesh& mesh = g.mesh;
    check_node(mesh, n, "caputo");
    check_order_value(alpha, "caputo");
    if (alpha == 0.0)
        return g.values[n] - g.values[0];

    std::vector<double> w(n);
    l1_weights(mesh, n, alpha, w);
    double acc = 0.0;
    for (std::size_t j = 1; j <= n; ++j)
        acc += w[j - 1] * (g.values[j] - g.values[j - 1]);
    return acc;
}

double caputo_vo(const SampledFunction& g, const OrderFunction& alpha, std::size_t n)
{
    check_node(g.mesh, n, "caputo_vo");
    return caputo(g, order_at(alpha, g.mesh, n), n);
}

double caputo_order_sensitivity(const SampledFunction& g, double alpha_value, std::size_t n)
{
    const TimeMesh& mesh = g.mesh;
    check_node(mesh, n, "caputo_order_sensitivity");
    check_order_value(alpha_value, "caputo_order_sensitivity");

    std::vector<double> dw(n);
    l1_weight_sensitivities(mesh, n, alpha_value, dw);
    double acc = 0.0;
    for (std::size_t j = 1; j <= n; ++j)
        acc += dw[j - 1] * (g.values[j] - g.values[j - 1]);
    return acc;
}

} // namespace vofrac
