#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "types.hpp"

namespace dyspec
{
//---------------------------------------------------------------------------//
/*!
 * Steady velocity field on the flat torus with a closed-form Jacobian.
 *
 * Inputs are wrapped into [0, 2pi) before evaluation. Instances are
 * immutable and may be shared between threads.
 */
class FlowField
{
  public:
    using VelocityFn = std::function<Vector(Vector const&)>;
    using JacobianFn = std::function<Matrix(Vector const&)>;
    using Params = std::map<std::string, double>;

    FlowField(std::string name, int dim, Params params, VelocityFn velocity, JacobianFn jacobian);

    std::string const& name() const { return name_; }
    int dim() const { return dim_; }
    Params const& params() const { return params_; }

    //! u0(x); throws InputError on dimension mismatch
    Vector velocity(Vector const& x) const;
    //! d u0_i / d x_j at x; throws InputError on dimension mismatch
    Matrix jacobian(Vector const& x) const;

    // Unchecked evaluation on an already wrapped point (integrator hot path)
    Vector velocity_unchecked(Vector const& x) const { return velocity_(x); }
    Matrix jacobian_unchecked(Vector const& x) const { return jacobian_(x); }

  private:
    std::string name_;
    int dim_;
    Params params_;
    VelocityFn velocity_;
    JacobianFn jacobian_;

    void check_dim(Vector const& x) const;
};

using FlowPtr = std::shared_ptr<FlowField const>;

//! Wrap every component into [0, 2pi).
Vector wrap_torus(Vector x);

//---------------------------------------------------------------------------//
// Built-in catalog
//---------------------------------------------------------------------------//

/*!
 * Parallel shear u0 = (U(y), 0) with a Fourier profile
 * U(y) = a0 + sum_k (a_k sin ky + b_k cos ky), k = 1..8.
 *
 * Parameters are named "a0", "a1".."a8", "b1".."b8"; missing entries are
 * zero. With no parameters the profile is U(y) = sin y.
 */
FlowPtr make_shear_flow(FlowField::Params params = {});

//! Cellular flow from the stream function psi = amp * sin x1 sin x2.
FlowPtr make_cellular_flow(FlowField::Params params = {});

//! Arnold-Beltrami-Childress flow with coefficients A, B, C (default 1).
FlowPtr make_abc_flow(FlowField::Params params = {});

//! Build a catalog flow by name ("shear", "cellular", "abc").
FlowPtr make_flow(std::string const& name, FlowField::Params const& params = {});

//! Names accepted by make_flow.
std::vector<std::string> flow_catalog();

//! Parameter names accepted by the named catalog flow.
std::vector<std::string> flow_param_names(std::string const& name);

//---------------------------------------------------------------------------//
// Validators
//---------------------------------------------------------------------------//

//! Result of the steady-Euler check.
struct SteadyEulerReport
{
    double max_residual = 0;  //!< max |curl((u0 . grad) u0)| over the grid
    double tol = 0;
    int grid_n = 0;
    bool pass = false;
};

/*!
 * Check that (u0 . grad) u0 is a gradient by evaluating its curl with
 * central differences on a uniform grid_n^dim grid.
 *
 * A failing flow yields pass == false; only grid_n < 8 throws.
 */
SteadyEulerReport check_steady_euler(FlowField const& flow, int grid_n, double tol);

}  // namespace dyspec
