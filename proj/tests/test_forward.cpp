#include "vofrac/errors.hpp"
#include "vofrac/forward.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace vofrac;
using doctest::Approx;

namespace {

ModelSpec scalar(std::vector<double> k, std::vector<double> alpha, InitialDatum u0 = InitialDatum::zero(),
                 double K = 1.0)
{
    return ModelSpec{K, 1.0, 1.0, Polynomial(std::move(k)), OrderFunction(std::move(alpha), 0.95, 1.0),
                     std::move(u0)};
}

// Reference runs on M = 16384 (fixtures frozen from the solver itself).
constexpr double kHalfOrderReference = 0.59323886212242949; // alpha = 0.5, k = 1, lambda = 1, r = 4
constexpr double kFullModelReference = 0.16194695321972311; // u(0.5, T), see full_model()

ModelSpec full_model()
{
    return ModelSpec{0.1, 1.0, 1.0, Polynomial({1.0, 0.5}), OrderFunction({0.3, 0.2}, 0.95, 1.0),
                     InitialDatum::parabola()};
}

} // namespace

TEST_SUITE("forward") {

TEST_CASE("initial data")
{
    CHECK(InitialDatum::parse("zero").kind() == InitialDatum::Kind::Zero);
    CHECK(InitialDatum::parse("parabola")(0.25, 1.0) == 0.1875);
    CHECK(InitialDatum::parse("sine:3").name() == "sine:3");
    CHECK(InitialDatum::parse("sine_mix").name() == "sine_mix");
    CHECK_THROWS_AS(InitialDatum::parse("sine:0"), PreconditionError);
    CHECK_THROWS_AS(InitialDatum::parse("sine:x"), PreconditionError);
    CHECK_THROWS_AS(InitialDatum::parse("gaussian"), PreconditionError);

    const SpectralBasis basis(1.0, 2.0, 6);
    const auto mix = InitialDatum::sine_mix().project(basis, default_grid_points(6));
    for (std::size_t i = 0; i < 6; ++i)
        CHECK(mix.values[i] == Approx(i < 4 ? std::pow(2.0, -double(i)) : 0.0).epsilon(1e-10).scale(1.0));

    std::vector<double> samples;
    for (double x : basis.grid(65))
        samples.push_back(InitialDatum::sine(2)(x, 2.0));
    samples.front() = samples.back() = 0.0;
    const auto from_samples = InitialDatum::samples(samples).project(basis, 65);
    CHECK(from_samples.values[1] == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("model validation")
{
    auto spec = full_model();
    CHECK_NOTHROW(spec.validate());
    spec.diffusivity = -1.0;
    CHECK_THROWS_AS(spec.validate(), PreconditionError);
    auto other = full_model();
    other.alpha = OrderFunction({0.3}, 0.95, 2.0);
    CHECK_THROWS_AS(other.validate(), PreconditionError);
    CHECK(default_grading(0.0) == 1.0);
    CHECK(default_grading(0.3) == Approx(2.0 / 0.7));
    CHECK(default_grading(0.8) == 4.0);
}

TEST_CASE("heat decay")
{
    const auto spec = scalar({0.0}, {0.4});
    const auto tr = solve_mode(1.0, 1.0, spec, TimeMesh(1.0, 1024));
    CHECK(tr.values.back() == Approx(std::exp(-1.0)).epsilon(1e-6));
    for (std::size_t n = 1; n < tr.values.size(); ++n)
        CHECK(std::abs(tr.increments[n - 1] - (tr.values[n] - tr.values[n - 1])) <= 1e-16);
}

TEST_CASE("order zero reduces to a linear ODE")
{
    const auto spec = scalar({1.0}, {0.0});
    const auto tr = solve_mode(1.0, 1.0, spec, TimeMesh(1.0, 1024));
    CHECK(tr.values.back() == Approx((1.0 + std::exp(-2.0)) / 2.0).epsilon(1e-6));
    CHECK(tr.values.back() == Approx(0.567668).epsilon(1e-6));
}

TEST_CASE("fine-mesh regression, constant order 0.5")
{
    const auto spec = scalar({1.0}, {0.5});
    const auto fine = solve_mode(1.0, 1.0, spec, TimeMesh(1.0, 16384, 4.0));
    CHECK(fine.values.back() == Approx(kHalfOrderReference).epsilon(1e-12));
    const auto coarse = solve_mode(1.0, 1.0, spec, TimeMesh(1.0, 2048, 4.0));
    CHECK(std::abs(coarse.values.back() - kHalfOrderReference) < 2e-6);
}

TEST_CASE("fine-mesh regression, full model")
{
    const auto spec = full_model();
    const auto field = solve_forward(spec, TimeMesh(1.0, 2048, default_grading(0.3)), 8);
    CHECK(std::abs(evaluate(field, 0.5, 2048) - kFullModelReference) < 1e-6);
}

TEST_CASE("modes decouple")
{
    auto spec = scalar({0.0}, {0.5}, InitialDatum::sine(1), 0.1);
    const TimeMesh mesh(1.0, 256, 2.0);
    const auto field = solve_forward(spec, mesh, 8);
    for (std::size_t i = 1; i < 8; ++i)
        for (double v : field.modes[i].values)
            CHECK(std::abs(v) <= 1e-10);
    const auto& m1 = field.modes[0];
    for (std::size_t n = 0; n < mesh.size(); n += 32)
        CHECK(m1.values[n] == Approx(std::exp(-m1.lambda * mesh[n])).epsilon(1e-4));

    // A joint solve and a single-mode solve perform identical arithmetic.
    spec = full_model();
    const auto joint = solve_forward(spec, mesh, 5);
    for (const auto& mode : joint.modes) {
        const auto alone = solve_mode(mode.lambda, mode.u0i, spec, mesh);
        CHECK(alone.values == mode.values);
    }
}

TEST_CASE("zero initial datum gives the zero field")
{
    auto spec = full_model();
    spec.u0 = InitialDatum::zero();
    const auto field = solve_forward(spec, TimeMesh(1.0, 64, 2.0), 6);
    for (const auto& m : field.modes)
        for (double v : m.values)
            CHECK(v == 0.0);
    CHECK_THROWS_AS(stability_ratio(field, SpectralCoefficients{std::vector<double>(6, 0.0)}, 0.0), DomainError);
}

TEST_CASE("stability ratio")
{
    auto spec = scalar({0.0}, {0.5}, InitialDatum::parabola(), 0.1);
    const TimeMesh mesh(1.0, 200, 2.0);
    auto field = solve_forward(spec, mesh, 12);
    SpectralCoefficients u0;
    for (const auto& m : field.modes)
        u0.values.push_back(m.u0i);
    for (double g : {0.0, 1.0, 2.0})
        CHECK(stability_ratio(field, u0, g) <= 1.0 + 1e-8);

    spec = full_model();
    spec.u0 = InitialDatum::sine(1);
    field = solve_forward(spec, mesh, 1);
    double peak = 0.0;
    for (double v : field.modes[0].values)
        peak = std::max(peak, std::abs(v));
    const SpectralCoefficients single{{field.modes[0].u0i}};
    CHECK(stability_ratio(field, single, 1.0) == Approx(peak / std::abs(single.values[0])).epsilon(1e-14));

    // Monitored regression: the full model with a parabola never exceeds its datum.
    field = solve_forward(full_model(), TimeMesh(1.0, 512, default_grading(0.3)), 8);
    u0.values.clear();
    for (const auto& m : field.modes)
        u0.values.push_back(m.u0i);
    CHECK(stability_ratio(field, u0, 0.0) == 1.0);
    // Even modes of the parabola vanish, so the last retained coefficient is ~0.
    CHECK(truncation_indicator(u0) < 1e-15);
}

TEST_CASE("evaluate agrees with synthesis of the coefficients")
{
    const auto field = solve_forward(full_model(), TimeMesh(1.0, 64, 2.0), 6);
    const auto c = field.coefficients_at(40);
    CHECK(evaluate(field, 0.3, 40) == Approx(synthesize(field.basis, c, 0.3)).epsilon(1e-15));
    CHECK(evaluate(field, 0.0, 40) == 0.0);
    CHECK_THROWS_AS(evaluate(field, 1.5, 40), DomainError);
    CHECK_THROWS_AS(evaluate(field, 0.5, 65), DomainError);
}

TEST_CASE("coefficient sensitivities match finite differences")
{
    const std::vector<double> c{0.3, 0.2, -0.1};
    const TimeMesh mesh(1.0, 128, 2.0);
    const std::vector<double> lambdas{1.0, 4.0}, u0s{1.0, -0.5};
    auto make = [](std::vector<double> cc) {
        return ModelSpec{1.0, 1.0, 1.0, Polynomial({1.0, 0.3}), OrderFunction(std::move(cc), 0.95, 1.0),
                         InitialDatum::zero()};
    };
    const auto batch = integrate_modes(make(c), mesh, lambdas, u0s, c.size());
    REQUIRE(batch.sensitivities.size() == c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
        std::vector<ModeBatch> runs;
        for (double shift : {1e-3, -1e-3, 5e-4, -5e-4}) {
            auto cc = c;
            cc[j] += shift;
            runs.push_back(integrate_modes(make(cc), mesh, lambdas, u0s));
        }
        for (std::size_t i = 0; i < lambdas.size(); ++i)
            for (std::size_t n = 8; n < mesh.size(); n += 20) {
                // Richardson-extrapolated central difference.
                const double d1 = (runs[0].values[i][n] - runs[1].values[i][n]) / 2e-3;
                const double d2 = (runs[2].values[i][n] - runs[3].values[i][n]) / 1e-3;
                const double fd = (4.0 * d2 - d1) / 3.0;
                CHECK(std::abs(batch.sensitivities[j][i][n] - fd) <= 1e-6 * std::abs(fd) + 1e-12);
            }
    }
}

}
