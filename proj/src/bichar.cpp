#include "dyspec/bichar.hpp"

#include <algorithm>
#include <cmath>

namespace dyspec
{
namespace
{
struct Derivative
{
    Vector dx;
    Vector deta;
    double ds = 0;
    Matrix dfiber;
};

Derivative evaluate(FlowField const* flow, PhasePoint const& p, Generator const* generator, Matrix const* fiber)
{
    Derivative d;
    Matrix jac;
    if (flow)
    {
        jac = flow->jacobian_unchecked(p.x);
        Vector g = jac.transpose() * p.eta;
        double ge = g.dot(p.eta);
        d.dx = flow->velocity_unchecked(p.x);
        d.deta = -g + ge * p.eta;
        d.ds = -ge;
    }
    else
    {
        d.dx = Vector::Zero(p.x.size());
        d.deta = Vector::Zero(p.eta.size());
    }
    if (generator && fiber)
        d.dfiber = (*generator)(p, jac) * (*fiber);
    return d;
}

PhasePoint shifted(PhasePoint const& p, Derivative const& d, double h)
{
    PhasePoint q;
    q.x = p.x + h * d.dx;
    q.eta = p.eta + h * d.deta;
    q.s = p.s + h * d.ds;
    q.clock = p.clock + h;
    return q;
}

bool finite(PhasePoint const& p, Matrix const* fiber)
{
    if (!p.x.allFinite() || !p.eta.allFinite() || !std::isfinite(p.s))
        return false;
    return !fiber || fiber->allFinite();
}

}  // namespace

PhasePoint make_phase_point(Vector const& x, Vector const& eta)
{
    if (x.size() != eta.size())
        throw InputError("position and frequency direction differ in dimension");
    double norm = eta.norm();
    if (!(norm > 0) || !std::isfinite(norm))
        throw InputError("frequency direction must be a nonzero finite vector");
    PhasePoint p;
    p.x = wrap_torus(x);
    p.eta = eta / norm;
    return p;
}

void rk4_step(FlowField const* flow, PhasePoint& point, double h, Generator const* generator, Matrix* fiber)
{
    bool const coupled = generator && fiber;
    Matrix const* m0 = coupled ? fiber : nullptr;

    Derivative k1 = evaluate(flow, point, generator, m0);

    Matrix m_stage;
    if (coupled)
        m_stage = *fiber + (h / 2) * k1.dfiber;
    Derivative k2 = evaluate(flow, shifted(point, k1, h / 2), generator, coupled ? &m_stage : nullptr);

    if (coupled)
        m_stage = *fiber + (h / 2) * k2.dfiber;
    Derivative k3 = evaluate(flow, shifted(point, k2, h / 2), generator, coupled ? &m_stage : nullptr);

    if (coupled)
        m_stage = *fiber + h * k3.dfiber;
    Derivative k4 = evaluate(flow, shifted(point, k3, h), generator, coupled ? &m_stage : nullptr);

    double const w = h / 6;
    point.x += w * (k1.dx + 2 * k2.dx + 2 * k3.dx + k4.dx);
    point.eta += w * (k1.deta + 2 * k2.deta + 2 * k3.deta + k4.deta);
    point.s += w * (k1.ds + 2 * k2.ds + 2 * k3.ds + k4.ds);
    point.clock += h;
    if (coupled)
        *fiber += w * (k1.dfiber + 2 * k2.dfiber + 2 * k3.dfiber + k4.dfiber);

    if (flow)
    {
        point.x = wrap_torus(point.x);
        point.eta.normalize();
    }
}

void integrate(FlowField const* flow, PhasePoint& point, double t, double step, Generator const* generator,
               Matrix* fiber, std::function<void(double, PhasePoint const&)> const& visit)
{
    if (!(step > 0))
        throw InputError("integration step must be positive");
    if (t == 0)
        return;

    double const dir = t > 0 ? 1.0 : -1.0;
    double const span = std::abs(t);
    auto full_steps = static_cast<long>(std::floor(span / step + 1e-9));
    double remainder = span - static_cast<double>(full_steps) * step;
    if (remainder < 1e-12 * step)
        remainder = 0;

    double elapsed = 0;
    auto take = [&](double h) {
        rk4_step(flow, point, dir * h, generator, fiber);
        if (!finite(point, fiber))
            throw IntegrationError("non-finite state during integration", dir * elapsed);
        elapsed += h;
        if (visit)
            visit(dir * elapsed, point);
    };
    for (long i = 0; i < full_steps; ++i)
        take(step);
    if (remainder > 0)
        take(remainder);
}

std::vector<TrajectorySample> advance(FlowField const& flow, PhasePoint const& start, double t_final, double step)
{
    std::vector<TrajectorySample> samples;
    samples.push_back({0.0, start});
    PhasePoint p = start;
    integrate(&flow, p, t_final, step, nullptr, nullptr,
              [&samples](double t, PhasePoint const& q) { samples.push_back({t, q}); });
    if (t_final < 0)
        std::reverse(samples.begin(), samples.end());
    return samples;
}

PhasePoint advance_to(FlowField const* flow, PhasePoint start, double t, double step)
{
    integrate(flow, start, t, step, nullptr, nullptr);
    return start;
}

Matrix flow_jacobian(FlowField const& flow, Vector const& x, double t, double step)
{
    if (x.size() != flow.dim())
        throw InputError("point dimension does not match flow");
    int const n = flow.dim();
    Vector eta = Vector::Zero(n);
    eta[0] = 1;
    PhasePoint p = make_phase_point(x, eta);
    Matrix m = Matrix::Identity(n, n);
    Generator const variational = [](PhasePoint const&, Matrix const& jac) { return jac; };
    integrate(&flow, p, t, step, &variational, &m);
    return m;
}

}  // namespace dyspec
