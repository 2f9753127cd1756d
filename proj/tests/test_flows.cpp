#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dyspec/flows.hpp"

using namespace dyspec;
using std::numbers::pi;

namespace
{
Vector vec(std::initializer_list<double> v)
{
    Vector r(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double e : v)
        r[i++] = e;
    return r;
}

Matrix central_difference(FlowField const& flow, Vector const& x, double h)
{
    int n = flow.dim();
    Matrix j(n, n);
    for (int c = 0; c < n; ++c)
    {
        Vector xp = x, xm = x;
        xp[c] += h;
        xm[c] -= h;
        j.col(c) = (flow.velocity(xp) - flow.velocity(xm)) / (2 * h);
    }
    return j;
}

// u = (sin 2y, sin x): divergence-free but not a steady Euler flow
FlowField counterexample_flow()
{
    return FlowField(
        "counterexample", 2, {},
        [](Vector const& x) { return vec({std::sin(2 * x[1]), std::sin(x[0])}); },
        [](Vector const& x) {
            Matrix j(2, 2);
            j << 0, 2 * std::cos(2 * x[1]), std::cos(x[0]), 0;
            return j;
        });
}

}  // namespace

TEST_CASE("velocity of catalog flows")
{
    CHECK((make_shear_flow()->velocity(vec({0, pi / 2})) - vec({1, 0})).norm() < 1e-15);
    CHECK(make_cellular_flow()->velocity(vec({pi / 2, pi / 2})).norm() < 1e-15);
    CHECK((make_abc_flow()->velocity(vec({0, 0, 0})) - vec({1, 1, 1})).norm() < 1e-15);
}

TEST_CASE("inputs are wrapped onto the torus")
{
    auto flow = make_cellular_flow();
    Vector x = vec({0.3, 1.1});
    CHECK((flow->velocity(x) - flow->velocity(vec({0.3 + 2 * pi, 1.1 - 4 * pi}))).norm() < 1e-12);

    Vector w = wrap_torus(vec({-1e-20, 7.0, -7.0}));
    for (Eigen::Index i = 0; i < w.size(); ++i)
    {
        CHECK(w[i] >= 0);
        CHECK(w[i] < 2 * pi);
    }
}

TEST_CASE("dimension mismatch is an input error")
{
    CHECK_THROWS_AS(make_abc_flow()->velocity(vec({0, 0})), InputError);
    CHECK_THROWS_AS(make_shear_flow()->jacobian(vec({0, 0, 0})), InputError);
}

TEST_CASE("jacobian closed forms")
{
    Matrix shear = make_shear_flow()->jacobian(vec({0.7, 0}));
    Matrix expected(2, 2);
    expected << 0, 1, 0, 0;
    CHECK((shear - expected).norm() < 1e-15);

    // hand derivative of (-sin x1 cos x2, cos x1 sin x2) at the origin
    Matrix cell = make_cellular_flow()->jacobian(vec({0, 0}));
    expected << -1, 0, 0, 1;
    CHECK((cell - expected).norm() < 1e-15);
    CHECK((central_difference(*make_cellular_flow(), vec({0, 0}), 1e-5) - expected).norm() < 1e-9);
}

TEST_CASE("incompressibility and finite-difference agreement on random points")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 2 * pi);
    FlowField::Params profile{{"a0", 0.2}, {"a1", 1.0}, {"b2", 0.5}, {"a3", -0.3}};
    double const h = 1e-3;
    for (auto const& flow : {make_shear_flow(), make_shear_flow(profile), make_cellular_flow(),
                             make_abc_flow(), make_abc_flow({{"A", 1.0}, {"B", 0.7}, {"C", 0.4}})})
    {
        CAPTURE(flow->name());
        double worst_trace = 0, worst_fd = 0;
        for (int k = 0; k < 1000; ++k)
        {
            Vector x(flow->dim());
            for (int i = 0; i < flow->dim(); ++i)
                x[i] = u(rng);
            Matrix j = flow->jacobian(x);
            worst_trace = std::max(worst_trace, std::abs(j.trace()));
            worst_fd = std::max(worst_fd, (j - central_difference(*flow, x, h)).norm());
        }
        CHECK(worst_trace < 1e-10);
        CHECK(worst_fd < 10 * h * h);
    }
}

TEST_CASE("steady Euler validator")
{
    auto shear = check_steady_euler(*make_shear_flow(), 16, 1e-10);
    CHECK(shear.pass);
    CHECK(shear.max_residual <= 1e-10);

    auto abc = check_steady_euler(*make_abc_flow(), 32, 1e-6);
    CHECK(abc.pass);
    CHECK(abc.max_residual < 1e-6);

    CHECK(check_steady_euler(*make_cellular_flow(), 32, 1e-6).pass);
    CHECK(check_steady_euler(*make_shear_flow({{"a1", 1.0}, {"b3", 0.4}}), 16, 1e-10).pass);

    // curl of the advection term is 3 sin x sin 2y, maximal on the 16-grid at (pi/2, pi/4)
    auto bad = check_steady_euler(counterexample_flow(), 16, 1e-6);
    CHECK_FALSE(bad.pass);
    CHECK(bad.max_residual > 0.1);
    CHECK(bad.max_residual == doctest::Approx(3.0).epsilon(1e-6));

    CHECK_THROWS_AS(check_steady_euler(*make_shear_flow(), 4, 1e-6), InputError);
}

TEST_CASE("catalog lookup")
{
    CHECK(make_flow("abc")->dim() == 3);
    CHECK(make_flow("cellular", {{"amp", 2.0}})->params().at("amp") == 2.0);
    CHECK_THROWS_WITH_AS(make_flow("taylor-green"), doctest::Contains("shear cellular abc"), InputError);
    CHECK_THROWS_AS(make_flow("abc", {{"D", 1.0}}), InputError);
}
