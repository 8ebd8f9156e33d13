#pragma once

namespace vofrac {

/// Digamma psi(x) = Gamma'(x)/Gamma(x) for x > 0, by upward recurrence
/// followed by the asymptotic Stirling-type series.
double digamma(double x);

} // namespace vofrac
