#pragma once

#include <functional>
#include <vector>

#include "flows.hpp"
#include "types.hpp"

namespace dyspec
{
//---------------------------------------------------------------------------//
/*!
 * Point of the base space: particle position, unit frequency direction and
 * the accumulated log-stretch s = log(|xi(t)| / |xi(0)|).
 *
 * The clock advances at unit rate along every base flow. It is the base
 * coordinate for clock-driven (non-autonomous) test generators and is
 * ignored by the fluid cocycles.
 */
struct PhasePoint
{
    Vector x;
    Vector eta;
    double s = 0;
    double clock = 0;
};

//! Make a phase point, normalizing eta; throws InputError on zero eta or size mismatch.
PhasePoint make_phase_point(Vector const& x, Vector const& eta);

struct TrajectorySample
{
    double t;
    PhasePoint point;
};

//! Generator of a linear fiber ODE M' = A(point) M, given the flow Jacobian at point.x.
using Generator = std::function<Matrix(PhasePoint const&, Matrix const& jacobian)>;

/*!
 * One classical RK4 step of size h (negative h integrates backward) for
 *
 *   x' = u0(x),  eta' = -du0^T eta + <du0^T eta, eta> eta,  s' = -<du0^T eta, eta>,
 *
 * optionally coupled with M' = A M. A null flow is the stationary base
 * (only the clock moves). eta is re-normalized and x wrapped after the step.
 */
void rk4_step(FlowField const* flow, PhasePoint& point, double h, Generator const* generator = nullptr,
              Matrix* fiber = nullptr);

/*!
 * Integrate for time t with steps of size `step` plus one shorter closing
 * step when t is not a multiple of step. Calls `visit(time, point)` after
 * each step. Throws IntegrationError on non-finite state.
 */
void integrate(FlowField const* flow, PhasePoint& point, double t, double step, Generator const* generator,
               Matrix* fiber, std::function<void(double, PhasePoint const&)> const& visit = {});

//! Trajectory of the bicharacteristic flow from start, ascending in t, including t = 0.
std::vector<TrajectorySample> advance(FlowField const& flow, PhasePoint const& start, double t_final, double step);

//! End point of the bicharacteristic flow after time t (t may be negative).
PhasePoint advance_to(FlowField const* flow, PhasePoint start, double t, double step);

//! Flow-map Jacobian d chi_t(x) from the variational equation M' = du0(chi_t(x)) M.
Matrix flow_jacobian(FlowField const& flow, Vector const& x, double t, double step);

}  // namespace dyspec
