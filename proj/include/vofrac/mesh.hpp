#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vofrac {

/// Graded time mesh t_n = T (n/M)^r on [0, T]; r = 1 is uniform.
class TimeMesh {
public:
    TimeMesh(double horizon, std::size_t steps, double grading = 1.0);

    double horizon() const noexcept { return horizon_; }
    std::size_t steps() const noexcept { return nodes_.size() - 1; }
    std::size_t size() const noexcept { return nodes_.size(); }
    double grading() const noexcept { return grading_; }

    double operator[](std::size_t n) const { return nodes_[n]; }
    double step(std::size_t n) const { return nodes_[n] - nodes_[n - 1]; }
    std::span<const double> nodes() const noexcept { return nodes_; }

    bool operator==(const TimeMesh& other) const = default;

private:
    double horizon_;
    double grading_;
    std::vector<double> nodes_;
};

/// Samples g(t_n), one per mesh node.
struct SampledFunction {
    SampledFunction(TimeMesh mesh, std::vector<double> values);

    template <typename F>
    static SampledFunction from(const TimeMesh& mesh, F&& g)
    {
        std::vector<double> v(mesh.size());
        for (std::size_t n = 0; n < mesh.size(); ++n)
            v[n] = g(mesh[n]);
        return SampledFunction(mesh, std::move(v));
    }

    TimeMesh mesh;
    std::vector<double> values;
};

} // namespace vofrac
