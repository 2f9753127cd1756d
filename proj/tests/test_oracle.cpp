#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dyspec/oracle.hpp"

using namespace dyspec;
using namespace dyspec::oracle;
using std::numbers::pi;

namespace
{
Matrix mat2(double a, double b, double c, double d)
{
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

// Oscillating rate whose antiderivative is (1 + t) sin(log(1 + t))
double slow_rate(double t)
{
    return std::sin(std::log1p(t)) + std::cos(std::log1p(t));
}

double slow_window_average(double t, double w)
{
    auto prim = [](double s) { return (1 + s) * std::sin(std::log1p(s)); };
    return (prim(t + w) - prim(t)) / w;
}

}  // namespace

TEST_CASE("matrix exponential")
{
    CHECK((matrix_exponential(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)).norm() == 0);

    Matrix d = matrix_exponential(mat2(-1, 0, 0, 2));
    CHECK(std::abs(d(0, 0) - std::exp(-1.0)) < 1e-12 * std::exp(-1.0));
    CHECK(std::abs(d(1, 1) - std::exp(2.0)) < 1e-12 * std::exp(2.0));
    CHECK(std::abs(d(0, 1)) + std::abs(d(1, 0)) == 0);

    // Rotation and nilpotent closed forms, with norms spanning every Pade order
    for (double theta : {1e-3, 0.1, 0.9, 2.5, 7.0, 40.0})
    {
        Matrix r = matrix_exponential(mat2(0, -theta, theta, 0));
        CHECK((r - mat2(std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta))).norm() < 1e-12);
        Matrix n = matrix_exponential(mat2(0, theta, 0, 0));
        CHECK((n - mat2(1, theta, 0, 1)).norm() < 1e-12 * (1 + theta));
    }

    // exp(A) exp(-A) = I for a non-normal matrix
    Matrix a(3, 3);
    a << 0.2, 1.5, -0.3, -0.7, 0.1, 2.0, 0.4, -1.1, -0.5;
    CHECK((matrix_exponential(a) * matrix_exponential(-a) - Matrix::Identity(3, 3)).norm() < 1e-12);
    CHECK_THROWS_AS(matrix_exponential(Matrix::Zero(2, 3)), InputError);
}

TEST_CASE("exact propagators")
{
    CHECK((exact_propagator(OracleCocycle::constant(Matrix::Zero(2, 2)), 3) - Matrix::Identity(2, 2)).norm() == 0);

    auto diag = OracleCocycle::constant(mat2(-1, 0, 0, 2));
    Matrix p = exact_propagator(diag, 1);
    CHECK(std::abs(p(0, 0) - std::exp(-1.0)) < 1e-12);
    CHECK(std::abs(p(1, 1) - std::exp(2.0)) < 1e-12 * std::exp(2.0));
    CHECK_THROWS_AS(exact_propagator(diag, -1), InputError);

    auto floq = OracleCocycle::floquet([](double t) { return mat2(0, 1 + std::cos(t), 0, 0); }, 2 * pi, 2);
    CHECK((monodromy(floq) - mat2(1, 2 * pi, 0, 1)).norm() < 1e-9);
    for (double t : {1.0, 7.5, 20.0})
        CHECK((exact_propagator(floq, t) - mat2(1, t + std::sin(t), 0, 1)).norm() < 1e-8);
    CHECK_THROWS_AS(monodromy(diag), UnsupportedError);

    auto shear = OracleCocycle::shear_closed_form(0.4);
    CHECK((exact_propagator(shear, 2) - mat2(1, 0, -2 * std::cos(0.4), 1)).norm() < 1e-15);
}

TEST_CASE("brute force agrees with the exponential")
{
    Matrix a(2, 2);
    a << 0.3, -1.0, 0.8, -0.6;
    auto c = OracleCocycle::constant(a);
    for (double t : {0.0, 1.0, 5.0})
    {
        Matrix bf = brute_force_propagator([&](double) { return a; }, t, 1e-4);
        CHECK((bf - exact_propagator(c, t)).norm() < 1e-8);
    }
    CHECK(brute_force_propagator([&](double) { return a; }, 0, 1e-4).isIdentity(0));
    CHECK_THROWS_AS(brute_force_propagator([&](double) { return a; }, 1, 1e-3), InputError);
}

TEST_CASE("closed-form spectra")
{
    auto diag = exact_sacker_sell(OracleCocycle::constant(mat2(-1, 0, 0, 2)));
    REQUIRE(diag.intervals.size() == 2);
    CHECK(std::abs(diag.intervals[0].lo + 1) < 1e-12);
    CHECK(std::abs(diag.intervals[1].hi - 2) < 1e-12);

    auto rot = exact_sacker_sell(OracleCocycle::constant(mat2(0, -1, 1, 0)));
    REQUIRE(rot.intervals.size() == 1);
    CHECK(std::abs(rot.intervals[0].lo) < 1e-12);
    CHECK(std::abs(rot.intervals[0].hi) < 1e-12);

    auto floq = exact_sacker_sell(
        OracleCocycle::floquet([](double t) { return mat2(0.2 + std::cos(t), 0, 0, -0.5 + std::sin(t)); }, 2 * pi, 2));
    REQUIRE(floq.intervals.size() == 2);
    CHECK(std::abs(floq.intervals[0].lo + 0.5) < 1e-8);
    CHECK(std::abs(floq.intervals[1].lo - 0.2) < 1e-8);

    CHECK(exact_sacker_sell(OracleCocycle::shear_closed_form(1.0)).intervals.size() == 1);

    double const T = 200, W = 20, burn = 0;
    double lo = 1e300, hi = -1e300;
    for (double t = burn; t + W <= T; t += 1e-3)
    {
        lo = std::min(lo, slow_window_average(t, W));
        hi = std::max(hi, slow_window_average(t, W));
    }
    auto slow = exact_sacker_sell(OracleCocycle::diagonal_timevarying({slow_rate}), T, W, burn);
    REQUIRE(slow.intervals.size() == 1);
    CHECK(std::abs(slow.intervals[0].lo - lo) < 1e-6);
    CHECK(std::abs(slow.intervals[0].hi - hi) < 1e-6);
    CHECK_THROWS_AS(exact_sacker_sell(OracleCocycle::diagonal_timevarying({slow_rate}), 10, 20, 0), InputError);
}

TEST_CASE("shear restricted amplitude")
{
    // |xi(t)|^2 = 1 + t^2 cos^2 y for xi(0) = e1
    Vector e1(2);
    e1 << 1, 0;
    CHECK(std::abs(shear_restricted_amplitude(0.3, e1, 2) - 1 / std::hypot(1, 2 * std::cos(0.3))) < 1e-14);
    Vector e2(2);
    e2 << 0, 1;
    CHECK(shear_restricted_amplitude(0.3, e2, 5) == doctest::Approx(1.0));
}
