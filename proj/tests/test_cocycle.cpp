#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dyspec/cocycle.hpp"
#include "dyspec/oracle.hpp"

using namespace dyspec;
using std::numbers::pi;

namespace
{
constexpr double kStep = 1e-3;

Vector vec(std::initializer_list<double> v)
{
    Vector r(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double e : v)
        r[i++] = e;
    return r;
}

Matrix mat2(double a, double b, double c, double d)
{
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
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

double identity_residual(Cocycle const& c, PhasePoint const& p, double t, double s)
{
    Matrix joint = c.propagate(p, t + s, kStep);
    auto first = c.evaluate(p, s, kStep);
    Matrix split = c.propagate(first.end, t, kStep) * first.value;
    return (joint - split).norm();
}

}  // namespace

TEST_CASE("amplitude generator")
{
    auto shear = make_shear_flow();
    Matrix a = amplitude_generator(*shear, make_phase_point(vec({0, 0}), vec({0, 1})));
    CHECK((a - mat2(0, -1, 0, 0)).norm() < 1e-15);

    // u0 = const has no gradient
    auto drift = make_flow("shear", {{"a0", 0.7}, {"a1", 0.0}});
    CHECK(amplitude_generator(*drift, make_phase_point(vec({1, 2}), vec({3, 1}))).norm() == 0);

    PhasePoint off_sphere;
    off_sphere.x = vec({0, 0});
    off_sphere.eta = vec({0, 1.01});
    CHECK_THROWS_AS(amplitude_generator(*shear, off_sphere), InputError);

    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    for (auto const& flow : {shear, make_cellular_flow(), make_abc_flow()})
    {
        for (int k = 0; k < 50; ++k)
        {
            PhasePoint p = random_point(rng, flow->dim());
            Vector b(flow->dim());
            for (int i = 0; i < flow->dim(); ++i)
                b[i] = g(rng);
            b -= b.dot(p.eta) * p.eta;
            Matrix j = flow->jacobian(p.x);
            Matrix ab = amplitude_generator(*flow, p);
            Matrix axi = -j.transpose();
            CHECK(std::abs((ab * b).dot(p.eta) + b.dot(axi * p.eta)) < 1e-12);
        }
    }
}

TEST_CASE("propagator examples")
{
    auto shear = make_shear_flow();
    auto cell = make_cellular_flow();
    PhasePoint p = make_phase_point(vec({0, 0}), vec({1, 0}));

    for (auto const& c : {Cocycle::amplitude(cell), Cocycle::scalar_stretch(cell, 2),
                          Cocycle::restricted_amplitude(cell), Cocycle::amplitude(cell).adjoint()})
    {
        Matrix m = c.propagate(p, 0, kStep);
        CHECK((m - Matrix::Identity(m.rows(), m.cols())).norm() == 0);
    }
    CHECK_THROWS_AS(Cocycle::amplitude(cell).propagate(p, -1, kStep), InputError);

    Matrix x1 = Cocycle::scalar_stretch(shear, 1).propagate(p, 1, kStep);
    REQUIRE(x1.rows() == 1);
    CHECK(std::abs(x1(0, 0) - std::sqrt(2.0)) < 1e-5);

    // Hyperbolic fixed point of the cellular flow
    Matrix b = Cocycle::amplitude(cell).propagate(p, 1, kStep);
    Matrix expected = std::exp(-1.0) * Matrix::Identity(2, 2);
    CHECK((b - expected).norm() < 1e-5);
    Matrix a = amplitude_generator(*cell, p);
    Matrix brute = oracle::brute_force_propagator([&](double) { return a; }, 1, 1e-4);
    CHECK((b - brute).norm() < 1e-5);
}

TEST_CASE("adjoint")
{
    Matrix a = mat2(0.3, -1.2, 0.4, -0.1);
    Cocycle c = Cocycle::constant(a);
    PhasePoint p = make_phase_point(vec({0, 0}), vec({1, 0}));
    Matrix psi = c.adjoint().propagate(p, 1.5, kStep);
    CHECK((psi - oracle::matrix_exponential(1.5 * a.transpose())).norm() < 1e-10);
    CHECK(adjoint(c).kind() == Cocycle::Kind::adjoint);

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> times(0, 2);
    auto cell = make_cellular_flow();
    Cocycle amp = Cocycle::amplitude(cell);
    Cocycle adj = amp.adjoint();
    CHECK(adj.reversed_base());
    for (int k = 0; k < 10; ++k)
    {
        PhasePoint q = random_point(rng, 2);
        double t = times(rng), s = times(rng);
        CHECK(identity_residual(adj, q, t, s) < 1e-5);

        PhasePoint back = advance_to(cell.get(), q, -t, kStep);
        Matrix forward = amp.propagate(back, t, kStep);
        Matrix transposed = adj.propagate(q, t, kStep);
        CHECK((transposed - forward.transpose()).norm() < 1e-6);
        Eigen::JacobiSVD<Matrix> s1(forward), s2(transposed);
        CHECK(std::abs(s1.singularValues()[0] - s2.singularValues()[0]) < 1e-6);
    }
    // Norm equality under exact transpose is structural
    Matrix m = amp.propagate(random_point(rng, 2), 1.0, kStep);
    Eigen::JacobiSVD<Matrix> sm(m), smt(Matrix(m.transpose()));
    CHECK(std::abs(sm.singularValues()[0] - smt.singularValues()[0]) < 1e-8);
}

TEST_CASE("restricted amplitude")
{
    auto shear = make_shear_flow();
    Cocycle r = Cocycle::restricted_amplitude(shear);
    CHECK(r.fiber_dim() == 1);

    PhasePoint stagnant = make_phase_point(vec({0, 0}), vec({0, 1}));
    for (double t : {0.5, 1.0, 3.0})
        CHECK(std::abs(r.propagate(stagnant, t, kStep)(0, 0) - 1) < 1e-9);

    std::mt19937_64 rng(4);
    for (int k = 0; k < 10; ++k)
    {
        PhasePoint p = random_point(rng, 2);
        double t = 2.5;
        double rt = r.propagate(p, t, kStep)(0, 0);
        Vector v = orthogonal_frame(p.eta).col(0);
        Matrix b = Cocycle::amplitude(shear).propagate(p, t, kStep);
        CHECK(std::abs(std::abs(rt) - (b * v).norm()) < 1e-9);
        CHECK(std::abs(rt - restrict_to_orthogonal(Cocycle::amplitude(shear), p, t, kStep)(0, 0)) < 1e-12);
        // |b| |xi| is conserved by a planar incompressible flow
        CHECK(std::abs(std::abs(rt) - oracle::shear_restricted_amplitude(p.x[1], p.eta, t)) < 1e-6);
    }
    CHECK_THROWS_AS(restrict_to_orthogonal(Cocycle::scalar_stretch(shear, 1), stagnant, 1, kStep), InputError);

    auto cell = make_cellular_flow();
    Cocycle rc = Cocycle::restricted_amplitude(cell);
    std::uniform_real_distribution<double> times(0, 2);
    for (int k = 0; k < 10; ++k)
        CHECK(identity_residual(rc, random_point(rng, 2), times(rng), times(rng)) < 1e-5);

    Cocycle r3 = Cocycle::restricted_amplitude(make_abc_flow());
    CHECK(r3.fiber_dim() == 2);
    for (int k = 0; k < 5; ++k)
        CHECK(identity_residual(r3, random_point(rng, 3), times(rng), times(rng)) < 1e-5);
}

TEST_CASE("orthogonal frame")
{
    Matrix f2 = orthogonal_frame(vec({0.6, 0.8}));
    CHECK((f2.col(0) - vec({-0.8, 0.6})).norm() == 0);

    std::mt19937_64 rng(6);
    for (int k = 0; k < 200; ++k)
    {
        Vector eta = random_point(rng, 3).eta;
        Matrix f = orthogonal_frame(eta);
        REQUIRE(f.cols() == 2);
        CHECK((f.transpose() * f - Matrix::Identity(2, 2)).norm() < 1e-12);
        CHECK((f.transpose() * eta).norm() < 1e-12);
        Matrix full(3, 3);
        full << eta, f;
        CHECK(full.determinant() > 0);
        CHECK((orthogonal_frame(eta) - f).norm() == 0);
    }
    // Ties go to the smaller index: e3 is the best aligned, so e1 and e2 are used
    Matrix tied = orthogonal_frame(vec({0, 0, 1}));
    CHECK((tied.col(0) - vec({1, 0, 0})).norm() < 1e-15);
    CHECK((tied.col(1) - vec({0, 1, 0})).norm() < 1e-15);
}

TEST_CASE("orthogonality conservation depends on the amplitude form")
{
    auto cell = make_cellular_flow();
    std::mt19937_64 rng(8);
    double worst_projected = 0, worst_verbatim = 0;
    for (int k = 0; k < 4; ++k)
    {
        PhasePoint p = random_point(rng, 2);
        Vector b0 = orthogonal_frame(p.eta).col(0);
        for (double t : {10.0, 50.0})
        {
            auto projected = Cocycle::amplitude(cell).evaluate(p, t, kStep);
            Vector b = projected.value * b0;
            worst_projected = std::max(worst_projected, std::abs(b.dot(projected.end.eta)) / b.norm());

            auto verbatim = Cocycle::amplitude(cell, AmplitudeForm::verbatim).evaluate(p, t, kStep);
            Vector bv = verbatim.value * b0;
            worst_verbatim = std::max(worst_verbatim, std::abs(bv.dot(verbatim.end.eta)) / bv.norm());
        }
    }
    CHECK(worst_projected < 1e-6);
    CHECK(worst_verbatim > 1e-2);
}

TEST_CASE("composition rules")
{
    auto cell = make_cellular_flow();
    Cocycle amp = Cocycle::amplitude(cell);
    Cocycle x2 = Cocycle::scalar_stretch(cell, 2);
    Cocycle bx = product(x2, amp);
    CHECK(bx.fiber_dim() == 2);

    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> times(0, 2);
    for (int k = 0; k < 10; ++k)
    {
        PhasePoint p = random_point(rng, 2);
        double t = times(rng);
        auto e = amp.evaluate(p, t, kStep);
        CHECK((bx.propagate(p, t, kStep) - std::exp(2 * e.end.s) * e.value).norm() < 1e-8);

        Matrix base = amp.propagate(p, t, kStep);
        CHECK((amp.rescaled(0.7).propagate(p, t, kStep) - std::exp(-0.7 * t) * base).norm() < 1e-12);

        double s = times(rng);
        for (auto const& c : {amp, x2, bx, amp.rescaled(-0.4), bx.adjoint()})
            CHECK(identity_residual(c, p, t, s) < 1e-5);
    }

    CHECK_THROWS_AS(product(amp, Cocycle::amplitude(make_abc_flow())), InputError);
    CHECK_THROWS_AS(product(amp, amp.adjoint()), InputError);
    CHECK(bx.describe().find("X^2") != std::string::npos);
}
