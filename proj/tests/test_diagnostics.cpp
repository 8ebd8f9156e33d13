#include "vofrac/diagnostics.hpp"
#include "vofrac/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace vofrac;
using doctest::Approx;

namespace {

ModelSpec model(std::vector<double> k, std::vector<double> alpha, InitialDatum u0 = InitialDatum::sine(1))
{
    return ModelSpec{0.1, 1.0, 1.0, Polynomial(std::move(k)), OrderFunction(std::move(alpha), 0.95, 1.0),
                     std::move(u0)};
}

} // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("second derivative of a heat mode")
{
    const auto field = solve_forward(model({0.0}, {0.5}), TimeMesh(1.0, 512), 1);
    const double lambda = field.modes[0].lambda;
    for (const auto& s : second_derivative_norms(field, 0.0))
        CHECK(s.value == Approx(lambda * lambda * std::exp(-lambda * s.t)).epsilon(0.05));
    const auto h1 = second_derivative_norms(field, 1.0);
    const auto h0 = second_derivative_norms(field, 0.0);
    CHECK(h1[10].value == Approx(std::sqrt(lambda) * h0[10].value).epsilon(1e-14));
}

TEST_CASE("zero field and small meshes")
{
    const auto zero = solve_forward(model({1.0}, {0.5}, InitialDatum::zero()), TimeMesh(1.0, 128, 2.0), 3);
    for (const auto& s : second_derivative_norms(zero, 0.0))
        CHECK(s.value == 0.0);
    CHECK(weighted_cm_norm(zero, 2, 0.5, 0.0) == 0.0);
    const auto small = solve_forward(model({1.0}, {0.5}), TimeMesh(1.0, 32, 2.0), 2);
    CHECK_THROWS_AS(second_derivative_norms(small, 0.0), DomainError);
}

TEST_CASE("slope fit on exact power data")
{
    std::vector<NormSample> data;
    for (int j = 0; j <= 60; ++j) {
        const double t = std::pow(10.0, -4.0 + j * 0.06);
        data.push_back({t, 3.5 * std::pow(t, -0.5)});
    }
    const auto slope = fit_singularity_exponent(data, {1e-3, 1e-1});
    REQUIRE(slope);
    CHECK(*slope == Approx(-0.5).epsilon(1e-6));
    CHECK_THROWS_AS(fit_singularity_exponent(data, {1e-1, 1e-3}), DomainError);
    CHECK_THROWS_AS(fit_singularity_exponent(data, {1e-3, 1.1e-3}), DomainError);
    data[20].value = 0.0;
    CHECK_FALSE(fit_singularity_exponent(data, {1e-3, 1e-1}).has_value());
    CHECK(default_fit_window(2.0).lo == Approx(2e-3));
    CHECK(default_fit_window(2.0).hi == Approx(0.2));
}

TEST_CASE("singular exponent follows alpha(0)")
{
    const auto field = solve_forward(model({1.0}, {0.5, 0.25}), TimeMesh(1.0, 512, default_grading(0.5)), 4);
    const auto report = regularity_report(field, 0.5, 0.0);
    CHECK(std::abs(report.fitted_slope + 0.5) <= 0.1);
    CHECK(report.expected_slope == -0.5);
    CHECK(report.verdict == Verdict::Singular);
    CHECK(report.fit_nodes >= kMinFitSamples);
}

TEST_CASE("smooth branch when alpha(0) = 0")
{
    const auto field = solve_forward(model({1.0}, {0.0, 0.5}), TimeMesh(1.0, 512), 4);
    const auto report = regularity_report(field, 0.0, 0.0);
    CHECK(report.fitted_slope >= -0.1);
    CHECK(report.verdict == Verdict::Smooth);
    CHECK(to_string(Verdict::Smooth) == "smooth");
}

TEST_CASE("weighted norm of a heat mode")
{
    const auto field = solve_forward(model({0.0}, {0.5}), TimeMesh(1.0, 1024), 1);
    const double l = field.modes[0].lambda;
    // max(sup|u|, sup|u'|) + sup_t t^{1/2} l^2 e^{-l t}, the last attained at t = 1/(2l).
    const double closed = std::max(1.0, l) + std::sqrt(0.5 / l) * l * l * std::exp(-0.5);
    CHECK(weighted_cm_norm(field, 2, 0.5, 0.0) == Approx(closed).epsilon(0.1));
    CHECK_THROWS_AS(weighted_cm_norm(field, 3, 0.5, 0.0), DomainError);
}

TEST_CASE("weighted norm is mesh-stable for alpha(0) = 0.5")
{
    const auto spec = model({1.0}, {0.5});
    std::vector<double> norms;
    for (std::size_t m : {256, 512})
        norms.push_back(weighted_cm_norm(solve_forward(spec, TimeMesh(1.0, m, default_grading(0.5)), 4), 2, 0.5, 0.0));
    CHECK(std::isfinite(norms[0]));
    CHECK(std::abs(norms[1] / norms[0] - 1.0) <= 0.2);
}

}
