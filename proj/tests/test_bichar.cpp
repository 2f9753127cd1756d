#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "dyspec/bichar.hpp"
#include "dyspec/io.hpp"

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

// Signed difference on the circle
double torus_distance(Vector const& a, Vector const& b)
{
    double worst = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i)
    {
        double d = std::remainder(a[i] - b[i], 2 * pi);
        worst = std::max(worst, std::abs(d));
    }
    return worst;
}

PhasePoint random_point(std::mt19937_64& rng, int dim)
{
    std::uniform_real_distribution<double> u(0, 2 * pi);
    std::normal_distribution<double> g;
    Vector x(dim), eta(dim);
    for (int i = 0; i < dim; ++i)
    {
        x[i] = u(rng);
        eta[i] = g(rng);
    }
    return make_phase_point(x, eta);
}

std::vector<FlowPtr> catalog()
{
    return {make_shear_flow(), make_cellular_flow(), make_abc_flow()};
}

}  // namespace

TEST_CASE("stagnation line of the shear is invariant")
{
    auto flow = make_shear_flow();
    auto traj = advance(*flow, make_phase_point(vec({0, 0}), vec({0, 1})), 3.0, 1e-3);
    for (auto const& sample : traj)
    {
        CHECK(sample.point.x.norm() < 1e-14);
        CHECK((sample.point.eta - vec({0, 1})).norm() < 1e-14);
        CHECK(std::abs(sample.point.s) < 1e-14);
    }
}

TEST_CASE("shear frequency follows xi(t) = (1, -t)")
{
    auto flow = make_shear_flow();
    PhasePoint end = advance_to(flow.get(), make_phase_point(vec({0, 0}), vec({1, 0})), 1.0, 1e-3);
    CHECK((end.eta - vec({1, -1}) / std::sqrt(2.0)).norm() < 1e-9);
    CHECK(end.s == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-10));
    CHECK(end.clock == doctest::Approx(1.0));
}

TEST_CASE("trajectory samples")
{
    auto flow = make_cellular_flow();
    auto start = make_phase_point(vec({0.4, 1.3}), vec({1, 2}));
    CHECK(start.s == 0);

    auto fwd = advance(*flow, start, 0.35, 0.1);
    REQUIRE(fwd.size() == 5);  // 0, .1, .2, .3, .35
    CHECK(fwd.back().t == doctest::Approx(0.35));

    auto bwd = advance(*flow, start, -0.35, 0.1);
    REQUIRE(bwd.size() == 5);
    CHECK(bwd.front().t == doctest::Approx(-0.35));
    for (std::size_t i = 1; i < bwd.size(); ++i)
        CHECK(bwd[i].t > bwd[i - 1].t);
    for (auto const& s : fwd)
        CHECK(std::abs(s.point.eta.norm() - 1) < 1e-9);

    std::ostringstream os;
    write_trajectory_csv(os, fwd);
    CHECK(os.str().rfind("t,x1,x2,eta1,eta2,s\n", 0) == 0);
}

TEST_CASE("reversibility and group property")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> times(-5, 5);
    for (auto const& flow : catalog())
    {
        CAPTURE(flow->name());
        for (int k = 0; k < 5; ++k)
        {
            PhasePoint p = random_point(rng, flow->dim());
            double t = times(rng);
            PhasePoint back = advance_to(flow.get(), advance_to(flow.get(), p, t, 1e-3), -t, 1e-3);
            CHECK(torus_distance(back.x, p.x) < 1e-6);
            CHECK((back.eta - p.eta).norm() < 1e-6);
            CHECK(std::abs(back.s - p.s) < 1e-6);

            double t1 = times(rng), t2 = times(rng);
            PhasePoint split = advance_to(flow.get(), advance_to(flow.get(), p, t1, 1e-3), t2, 1e-3);
            PhasePoint joint = advance_to(flow.get(), p, t1 + t2, 1e-3);
            CHECK(torus_distance(split.x, joint.x) < 1e-6);
            CHECK((split.eta - joint.eta).norm() < 1e-6);
            CHECK(std::abs(split.s - joint.s) < 1e-6);
        }
    }
}

TEST_CASE("flow map jacobian")
{
    auto shear = make_shear_flow();
    auto cell = make_cellular_flow();

    CHECK((flow_jacobian(*cell, vec({0.3, 0.2}), 0.0, 1e-3) - Matrix::Identity(2, 2)).norm() == 0);

    Matrix nilpotent(2, 2);
    nilpotent << 1, 1, 0, 1;
    CHECK((flow_jacobian(*shear, vec({0, 0}), 1.0, 1e-3) - nilpotent).norm() < 1e-12);

    Matrix hyperbolic = Matrix::Zero(2, 2);
    hyperbolic(0, 0) = std::exp(-1.0);
    hyperbolic(1, 1) = std::exp(1.0);
    CHECK((flow_jacobian(*cell, vec({0, 0}), 1.0, 1e-3) - hyperbolic).norm() < 1e-6);

    std::mt19937_64 rng(3);
    for (auto const& flow : {cell, make_abc_flow()})
    {
        for (int k = 0; k < 3; ++k)
        {
            PhasePoint p = random_point(rng, flow->dim());
            CHECK(std::abs(flow_jacobian(*flow, p.x, 10.0, 1e-3).determinant() - 1) < 1e-6);
        }
    }
}

TEST_CASE("log-stretch matches the inverse-transpose flow jacobian")
{
    std::mt19937_64 rng(5);
    for (auto const& flow : catalog())
    {
        CAPTURE(flow->name());
        for (int k = 0; k < 4; ++k)
        {
            PhasePoint p = random_point(rng, flow->dim());
            double t = 4.0;
            PhasePoint end = advance_to(flow.get(), p, t, 1e-3);
            Matrix dchi = flow_jacobian(*flow, p.x, t, 1e-3);
            Vector xi = dchi.inverse().transpose() * p.eta;
            CHECK(std::abs(std::exp(end.s) - xi.norm()) < 1e-5);
            CHECK((end.eta - xi.normalized()).norm() < 1e-5);
        }
    }
}

TEST_CASE("non-finite state reports the last good time")
{
    FlowField broken(
        "broken", 2, {},
        [](Vector const& x) {
            Vector u(2);
            u << 1.0, x[0] > 1.0 ? std::numeric_limits<double>::quiet_NaN() : 0.0;
            return u;
        },
        [](Vector const&) { return Matrix(Matrix::Zero(2, 2)); });
    try
    {
        advance(broken, make_phase_point(vec({0, 0}), vec({1, 0})), 3.0, 0.1);
        FAIL("expected IntegrationError");
    }
    catch (IntegrationError const& e)
    {
        CHECK(e.last_good_time() == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK_THROWS_AS(advance(*make_shear_flow(), make_phase_point(vec({0, 0}), vec({1, 0})), 1.0, 0.0), InputError);
    CHECK_THROWS_AS(make_phase_point(vec({0, 0}), vec({0, 0})), InputError);
}
