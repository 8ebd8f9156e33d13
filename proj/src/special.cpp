#include "vofrac/special.hpp"

#include "vofrac/errors.hpp"

#include <cmath>

namespace vofrac {

double digamma(double x)
{
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError("digamma: argument must be positive and finite");

    // psi(x) = psi(x + 1) - 1/x until the asymptotic series is accurate to roundoff.
    double shift = 0.0;
    while (x < 10.0) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    const double inv2 = 1.0 / (x * x);
    // Bernoulli terms B_{2k} / (2k): 1/12, -1/120, 1/252, -1/240, 1/132, -691/32760, 1/12
    const double series =
        inv2 * (1.0 / 12 -
        inv2 * (1.0 / 120 -
        inv2 * (1.0 / 252 -
        inv2 * (1.0 / 240 -
        inv2 * (1.0 / 132 -
        inv2 * (691.0 / 32760 -
        inv2 * (1.0 / 12)))))));
    return shift + std::log(x) - 0.5 / x - series;
}

} // namespace vofrac
