#pragma once

// Reference values computed independently of the library.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <functional>

namespace oracle {

// Caputo derivative of t^p (p > 0): Gamma(p+1) / Gamma(p+1-a) t^{p-a}.
inline double caputo_power(double p, double a, double t)
{
    return std::tgamma(p + 1.0) / std::tgamma(p + 1.0 - a) * std::pow(t, p - a);
}

// Riemann-Liouville integral of t^p of order a: Gamma(p+1) / Gamma(p+1+a) t^{p+a}.
inline double integral_power(double p, double a, double t)
{
    return std::tgamma(p + 1.0) / std::tgamma(p + 1.0 + a) * std::pow(t, p + a);
}

// (1/Gamma(1-a)) int_0^t dg(s) (t-s)^{-a} ds by adaptive Gauss-Kronrod after
// the substitution v = (t-s)^{1-a}, which removes the endpoint singularity.
inline double caputo_quadrature(const std::function<double(double)>& dg, double a, double t)
{
    const double e = 1.0 / (1.0 - a);
    auto f = [&](double v) { return dg(t - std::pow(v, e)); };
    const double top = std::pow(t, 1.0 - a);
    const double integral =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, top, 20, 1e-14);
    return integral * e / std::tgamma(1.0 - a);
}

// Richardson-extrapolated central difference of f at x.
inline double derivative(const std::function<double(double)>& f, double x, double h)
{
    const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
    const double d2 = (f(x + h / 2) - f(x - h / 2)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

} // namespace oracle
