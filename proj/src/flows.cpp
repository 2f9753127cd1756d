#include "dyspec/flows.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>

namespace dyspec
{
namespace
{
constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr int kShearModes = 8;

double param_or(FlowField::Params const& params, std::string const& key, double fallback)
{
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

void reject_unknown(std::string const& flow, FlowField::Params const& params)
{
    auto known = flow_param_names(flow);
    for (auto const& [key, value] : params)
    {
        if (std::find(known.begin(), known.end(), key) == known.end())
        {
            throw InputError("flow '" + flow + "' has no parameter '" + key + "'");
        }
    }
}

}  // namespace

FlowField::FlowField(std::string name, int dim, Params params, VelocityFn velocity, JacobianFn jacobian)
    : name_(std::move(name)),
      dim_(dim),
      params_(std::move(params)),
      velocity_(std::move(velocity)),
      jacobian_(std::move(jacobian))
{
    if (dim_ < 2 || dim_ > 3)
    {
        throw InputError("flow dimension must be 2 or 3");
    }
}

void FlowField::check_dim(Vector const& x) const
{
    if (x.size() != dim_)
    {
        throw InputError("point has " + std::to_string(x.size()) + " components, flow '" + name_
                         + "' has dimension " + std::to_string(dim_));
    }
}

Vector FlowField::velocity(Vector const& x) const
{
    check_dim(x);
    return velocity_(wrap_torus(x));
}

Matrix FlowField::jacobian(Vector const& x) const
{
    check_dim(x);
    return jacobian_(wrap_torus(x));
}

Vector wrap_torus(Vector x)
{
    for (Eigen::Index i = 0; i < x.size(); ++i)
    {
        double v = std::fmod(x[i], kTwoPi);
        if (v < 0)
            v += kTwoPi;
        // fmod of a tiny negative number can round up to exactly 2pi
        if (v >= kTwoPi)
            v = 0;
        x[i] = v;
    }
    return x;
}

//---------------------------------------------------------------------------//

FlowPtr make_shear_flow(FlowField::Params params)
{
    reject_unknown("shear", params);
    if (params.empty())
        params["a1"] = 1.0;

    double a0 = param_or(params, "a0", 0);
    std::array<double, kShearModes> a{}, b{};
    for (int k = 1; k <= kShearModes; ++k)
    {
        a[k - 1] = param_or(params, "a" + std::to_string(k), 0);
        b[k - 1] = param_or(params, "b" + std::to_string(k), 0);
    }

    auto profile = [a0, a, b](double y) {
        double u = a0;
        for (int k = 1; k <= kShearModes; ++k)
            u += a[k - 1] * std::sin(k * y) + b[k - 1] * std::cos(k * y);
        return u;
    };
    auto slope = [a, b](double y) {
        double du = 0;
        for (int k = 1; k <= kShearModes; ++k)
            du += k * (a[k - 1] * std::cos(k * y) - b[k - 1] * std::sin(k * y));
        return du;
    };

    return std::make_shared<FlowField>(
        "shear", 2, std::move(params),
        [profile](Vector const& x) {
            Vector u(2);
            u << profile(x[1]), 0.0;
            return u;
        },
        [slope](Vector const& x) {
            Matrix j = Matrix::Zero(2, 2);
            j(0, 1) = slope(x[1]);
            return j;
        });
}

FlowPtr make_cellular_flow(FlowField::Params params)
{
    reject_unknown("cellular", params);
    double amp = param_or(params, "amp", 1.0);
    params["amp"] = amp;

    // psi = amp sin x1 sin x2, u0 = (-d2 psi, d1 psi)
    return std::make_shared<FlowField>(
        "cellular", 2, std::move(params),
        [amp](Vector const& x) {
            Vector u(2);
            u << -amp * std::sin(x[0]) * std::cos(x[1]), amp * std::cos(x[0]) * std::sin(x[1]);
            return u;
        },
        [amp](Vector const& x) {
            double s1 = std::sin(x[0]), c1 = std::cos(x[0]);
            double s2 = std::sin(x[1]), c2 = std::cos(x[1]);
            Matrix j(2, 2);
            j << -amp * c1 * c2, amp * s1 * s2, -amp * s1 * s2, amp * c1 * c2;
            return j;
        });
}

FlowPtr make_abc_flow(FlowField::Params params)
{
    reject_unknown("abc", params);
    double A = param_or(params, "A", 1.0);
    double B = param_or(params, "B", 1.0);
    double C = param_or(params, "C", 1.0);
    params["A"] = A;
    params["B"] = B;
    params["C"] = C;

    return std::make_shared<FlowField>(
        "abc", 3, std::move(params),
        [A, B, C](Vector const& x) {
            Vector u(3);
            u << A * std::sin(x[2]) + C * std::cos(x[1]), B * std::sin(x[0]) + A * std::cos(x[2]),
                C * std::sin(x[1]) + B * std::cos(x[0]);
            return u;
        },
        [A, B, C](Vector const& x) {
            Matrix j(3, 3);
            j << 0.0, -C * std::sin(x[1]), A * std::cos(x[2]),  //
                B * std::cos(x[0]), 0.0, -A * std::sin(x[2]),   //
                -B * std::sin(x[0]), C * std::cos(x[1]), 0.0;
            return j;
        });
}

FlowPtr make_flow(std::string const& name, FlowField::Params const& params)
{
    if (name == "shear")
        return make_shear_flow(params);
    if (name == "cellular")
        return make_cellular_flow(params);
    if (name == "abc")
        return make_abc_flow(params);

    std::string msg = "unknown flow '" + name + "'; catalog:";
    for (auto const& n : flow_catalog())
        msg += " " + n;
    throw InputError(msg);
}

std::vector<std::string> flow_catalog()
{
    return {"shear", "cellular", "abc"};
}

std::vector<std::string> flow_param_names(std::string const& name)
{
    if (name == "shear")
    {
        std::vector<std::string> names{"a0"};
        for (int k = 1; k <= kShearModes; ++k)
        {
            names.push_back("a" + std::to_string(k));
            names.push_back("b" + std::to_string(k));
        }
        return names;
    }
    if (name == "cellular")
        return {"amp"};
    if (name == "abc")
        return {"A", "B", "C"};
    return {};
}

//---------------------------------------------------------------------------//

SteadyEulerReport check_steady_euler(FlowField const& flow, int grid_n, double tol)
{
    if (grid_n < 8)
        throw InputError("check_steady_euler requires grid_n >= 8");

    int const dim = flow.dim();
    double const h = 1e-4;
    double const spacing = kTwoPi / grid_n;

    // Advection term (u0 . grad) u0 = (du0) u0
    auto advection = [&flow](Vector const& x) -> Vector {
        Vector w = wrap_torus(x);
        return flow.jacobian_unchecked(w) * flow.velocity_unchecked(w);
    };
    // d f_i / d x_j by central differences
    auto partial = [&](Vector const& x, int i, int j) {
        Vector xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        return (advection(xp)[i] - advection(xm)[i]) / (2 * h);
    };

    SteadyEulerReport report;
    report.tol = tol;
    report.grid_n = grid_n;

    int const total = dim == 2 ? grid_n * grid_n : grid_n * grid_n * grid_n;
    Vector x(dim);
    for (int idx = 0; idx < total; ++idx)
    {
        int rem = idx;
        for (int d = 0; d < dim; ++d)
        {
            x[d] = (rem % grid_n) * spacing;
            rem /= grid_n;
        }
        double residual = 0;
        if (dim == 2)
        {
            residual = std::abs(partial(x, 1, 0) - partial(x, 0, 1));
        }
        else
        {
            double c0 = partial(x, 2, 1) - partial(x, 1, 2);
            double c1 = partial(x, 0, 2) - partial(x, 2, 0);
            double c2 = partial(x, 1, 0) - partial(x, 0, 1);
            residual = std::sqrt(c0 * c0 + c1 * c1 + c2 * c2);
        }
        report.max_residual = std::max(report.max_residual, residual);
    }
    report.pass = report.max_residual <= tol;
    return report;
}

}  // namespace dyspec
