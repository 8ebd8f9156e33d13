#include "vofrac/mesh.hpp"

#include "vofrac/errors.hpp"

#include <cmath>
#include <string>

namespace vofrac {

TimeMesh::TimeMesh(double horizon, std::size_t steps, double grading)
    : horizon_(horizon), grading_(grading)
{
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw DomainError("time mesh: horizon must be positive and finite");
    if (steps < 1)
        throw DomainError("time mesh: need at least one step");
    if (!(grading >= 1.0) || !std::isfinite(grading))
        throw DomainError("time mesh: grading exponent must be >= 1");

    nodes_.resize(steps + 1);
    const double m = static_cast<double>(steps);
    for (std::size_t n = 0; n <= steps; ++n) {
        const double s = static_cast<double>(n) / m;
        nodes_[n] = grading == 1.0 ? horizon * s : horizon * std::pow(s, grading);
    }
    nodes_.front() = 0.0;
    nodes_.back() = horizon;
    for (std::size_t n = 1; n <= steps; ++n)
        if (!(nodes_[n] > nodes_[n - 1]))
            throw DomainError("time mesh: nodes not strictly increasing at n = " + std::to_string(n));
}

SampledFunction::SampledFunction(TimeMesh m, std::vector<double> v)
    : mesh(std::move(m)), values(std::move(v))
{
    if (values.size() != mesh.size())
        throw DomainError("sampled function: expected " + std::to_string(mesh.size()) +
                          " values, got " + std::to_string(values.size()));
}

} // namespace vofrac
