#include "dyspec/cocycle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace dyspec
{
namespace
{
Matrix amplitude_matrix(Matrix const& jac, Vector const& eta, AmplitudeForm form)
{
    Matrix outer = eta * (eta.transpose() * jac);
    if (form == AmplitudeForm::projected)
        return -jac + 2 * outer;
    return jac + outer;
}

std::string format_number(double v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

AmplitudeForm amplitude_form_from_string(std::string const& s)
{
    if (s == "projected")
        return AmplitudeForm::projected;
    if (s == "verbatim")
        return AmplitudeForm::verbatim;
    throw InputError("amplitude form must be 'projected' or 'verbatim', got '" + s + "'");
}

std::string to_string(AmplitudeForm form)
{
    return form == AmplitudeForm::projected ? "projected" : "verbatim";
}

Matrix amplitude_generator(FlowField const& flow, PhasePoint const& point, AmplitudeForm form)
{
    if (point.x.size() != flow.dim() || point.eta.size() != flow.dim())
        throw InputError("phase point dimension does not match flow");
    if (std::abs(point.eta.norm() - 1) > 1e-6)
        throw InputError("frequency direction must have unit norm");
    return amplitude_matrix(flow.jacobian(point.x), point.eta, form);
}

Matrix orthogonal_frame(Vector const& eta)
{
    auto const n = eta.size();
    if (n == 2)
    {
        Matrix f(2, 1);
        f << -eta[1], eta[0];
        return f;
    }
    if (n != 3)
        throw InputError("orthogonal_frame supports dimensions 2 and 3");

    // Order standard basis indices by |eta_j|, stable on ties
    std::array<int, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(),
                     [&eta](int a, int b) { return std::abs(eta[a]) < std::abs(eta[b]); });

    Matrix f(3, 2);
    Vector v = Vector::Zero(3);
    v[order[0]] = 1;
    v -= v.dot(eta) * eta;
    f.col(0) = v.normalized();

    Vector w = Vector::Zero(3);
    w[order[1]] = 1;
    w -= w.dot(eta) * eta;
    w -= w.dot(f.col(0)) * f.col(0);
    f.col(1) = w.normalized();

    Eigen::Matrix3d full;
    full.col(0) = eta;
    full.col(1) = f.col(0);
    full.col(2) = f.col(1);
    if (full.determinant() < 0)
        f.col(1) = -f.col(1);
    return f;
}

//---------------------------------------------------------------------------//

struct Cocycle::Node
{
    Kind kind;
    int fiber_dim;
    FlowPtr flow;
    bool reversed = false;
    std::string label;

    AmplitudeForm form = AmplitudeForm::projected;
    double m = 0;       // scalar_stretch exponent
    double lambda = 0;  // rescaling rate
    Generator generator;
    std::shared_ptr<Node const> left;
    std::shared_ptr<Node const> right;

    Evaluation evaluate(PhasePoint const& point, double t, double step) const;
    PhasePoint base_advance(PhasePoint const& point, double t, double step) const;
};

PhasePoint Cocycle::Node::base_advance(PhasePoint const& point, double t, double step) const
{
    if (kind == Kind::adjoint)
        return left->base_advance(point, -t, step);
    return advance_to(flow.get(), point, t, step);
}

Cocycle::Evaluation Cocycle::Node::evaluate(PhasePoint const& point, double t, double step) const
{
    if (t < 0)
        throw InputError("cocycle propagation requires t >= 0");
    if (!(step > 0))
        throw InputError("integration step must be positive");

    switch (kind)
    {
        case Kind::amplitude:
        case Kind::custom: {
            Evaluation r{Matrix::Identity(fiber_dim, fiber_dim), point};
            integrate(flow.get(), r.end, t, step, &generator, &r.value);
            return r;
        }
        case Kind::restricted_amplitude: {
            Evaluation full = left->evaluate(point, t, step);
            Matrix value = orthogonal_frame(full.end.eta).transpose() * full.value * orthogonal_frame(point.eta);
            return {value, full.end};
        }
        case Kind::scalar_stretch: {
            PhasePoint end = advance_to(flow.get(), point, t, step);
            Matrix value(1, 1);
            value(0, 0) = std::exp(m * (end.s - point.s));
            return {value, end};
        }
        case Kind::rescaled: {
            Evaluation r = left->evaluate(point, t, step);
            r.value *= std::exp(-lambda * t);
            return r;
        }
        case Kind::adjoint: {
            PhasePoint origin = left->base_advance(point, -t, step);
            Evaluation r = left->evaluate(origin, t, step);
            return {r.value.transpose(), origin};
        }
        case Kind::product: {
            // A stretch factor is read off the other factor's trajectory
            auto stretch_of = [&](Node const& factor, Evaluation const& other) {
                return std::exp(factor.m * (other.end.s - point.s));
            };
            if (left->kind == Kind::scalar_stretch && !right->reversed)
            {
                Evaluation r = right->evaluate(point, t, step);
                r.value *= stretch_of(*left, r);
                return r;
            }
            if (right->kind == Kind::scalar_stretch && !left->reversed)
            {
                Evaluation r = left->evaluate(point, t, step);
                r.value *= stretch_of(*right, r);
                return r;
            }
            Evaluation a = left->evaluate(point, t, step);
            Evaluation b = right->evaluate(point, t, step);
            if (left->fiber_dim == 1)
                return {a.value(0, 0) * b.value, b.end};
            if (right->fiber_dim == 1)
                return {a.value * b.value(0, 0), a.end};
            return {a.value * b.value, b.end};
        }
    }
    throw Error("unreachable cocycle kind");
}

//---------------------------------------------------------------------------//

Cocycle Cocycle::amplitude(FlowPtr flow, AmplitudeForm form)
{
    if (!flow)
        throw InputError("amplitude cocycle needs a flow");
    auto node = std::make_shared<Node>();
    node->kind = Kind::amplitude;
    node->fiber_dim = flow->dim();
    node->flow = std::move(flow);
    node->form = form;
    node->label = "B";
    node->generator = [form](PhasePoint const& p, Matrix const& jac) { return amplitude_matrix(jac, p.eta, form); };
    return Cocycle(std::move(node));
}

Cocycle Cocycle::restricted_amplitude(FlowPtr flow, AmplitudeForm form)
{
    Cocycle full = amplitude(flow, form);
    auto node = std::make_shared<Node>();
    node->kind = Kind::restricted_amplitude;
    node->fiber_dim = flow->dim() - 1;
    node->flow = std::move(flow);
    node->form = form;
    node->label = "B_perp";
    node->left = full.node_;
    return Cocycle(std::move(node));
}

Cocycle Cocycle::scalar_stretch(FlowPtr flow, double m)
{
    if (!flow)
        throw InputError("stretch cocycle needs a flow");
    auto node = std::make_shared<Node>();
    node->kind = Kind::scalar_stretch;
    node->fiber_dim = 1;
    node->flow = std::move(flow);
    node->m = m;
    node->label = "X^" + format_number(m);
    return Cocycle(std::move(node));
}

Cocycle Cocycle::custom(FlowPtr flow, int fiber_dim, Generator generator, std::string label)
{
    if (fiber_dim < 1 || fiber_dim > kMaxDim)
        throw InputError("fiber dimension must be in [1, " + std::to_string(kMaxDim) + "]");
    if (!generator)
        throw InputError("custom cocycle needs a generator");
    auto node = std::make_shared<Node>();
    node->kind = Kind::custom;
    node->fiber_dim = fiber_dim;
    node->flow = std::move(flow);
    node->generator = std::move(generator);
    node->label = std::move(label);
    return Cocycle(std::move(node));
}

Cocycle Cocycle::constant(Matrix const& generator, FlowPtr flow)
{
    if (generator.rows() != generator.cols())
        throw InputError("constant generator must be square");
    return custom(
        std::move(flow), static_cast<int>(generator.rows()),
        [generator](PhasePoint const&, Matrix const&) { return generator; }, "constant");
}

Cocycle Cocycle::rescaled(double lambda) const
{
    auto node = std::make_shared<Node>();
    node->kind = Kind::rescaled;
    node->fiber_dim = node_->fiber_dim;
    node->flow = node_->flow;
    node->reversed = node_->reversed;
    node->lambda = lambda;
    node->left = node_;
    node->label = "exp(-" + format_number(lambda) + "t)" + node_->label;
    return Cocycle(std::move(node));
}

Cocycle Cocycle::adjoint() const
{
    auto node = std::make_shared<Node>();
    node->kind = Kind::adjoint;
    node->fiber_dim = node_->fiber_dim;
    node->flow = node_->flow;
    node->reversed = !node_->reversed;
    node->left = node_;
    node->label = node_->label + "*";
    return Cocycle(std::move(node));
}

Cocycle product(Cocycle const& left, Cocycle const& right)
{
    auto const& l = *left.node_;
    auto const& r = *right.node_;
    if (l.flow != r.flow)
        throw InputError("product factors must share the same base flow");
    if (l.reversed != r.reversed)
        throw InputError("product factors must share the same time direction");
    if (l.fiber_dim != 1 && r.fiber_dim != 1 && l.fiber_dim != r.fiber_dim)
        throw InputError("product factors have incompatible fiber dimensions");

    auto node = std::make_shared<Cocycle::Node>();
    node->kind = Cocycle::Kind::product;
    node->fiber_dim = std::max(l.fiber_dim, r.fiber_dim);
    node->flow = l.flow;
    node->reversed = l.reversed;
    node->left = left.node_;
    node->right = right.node_;
    node->label = l.label + "*" + r.label;
    if (l.kind == Cocycle::Kind::scalar_stretch || r.kind == Cocycle::Kind::scalar_stretch)
        node->label = l.label + r.label;
    return Cocycle(std::move(node));
}

Cocycle::Kind Cocycle::kind() const
{
    return node_->kind;
}

int Cocycle::fiber_dim() const
{
    return node_->fiber_dim;
}

FlowField const* Cocycle::flow() const
{
    return node_->flow.get();
}

FlowPtr const& Cocycle::flow_ptr() const
{
    return node_->flow;
}

bool Cocycle::reversed_base() const
{
    return node_->reversed;
}

std::string Cocycle::describe() const
{
    return node_->label;
}

Cocycle::Evaluation Cocycle::evaluate(PhasePoint const& point, double t, double step) const
{
    return node_->evaluate(point, t, step);
}

PhasePoint Cocycle::base_advance(PhasePoint const& point, double t, double step) const
{
    return node_->base_advance(point, t, step);
}

//---------------------------------------------------------------------------//

Matrix propagate(Cocycle const& cocycle, PhasePoint const& point, double t, double step)
{
    return cocycle.propagate(point, t, step);
}

Cocycle adjoint(Cocycle const& cocycle)
{
    return cocycle.adjoint();
}

Matrix restrict_to_orthogonal(Cocycle const& amplitude, PhasePoint const& point, double t, double step)
{
    if (amplitude.kind() != Cocycle::Kind::amplitude)
        throw InputError("restrict_to_orthogonal needs an amplitude cocycle");
    auto r = amplitude.evaluate(point, t, step);
    return orthogonal_frame(r.end.eta).transpose() * r.value * orthogonal_frame(point.eta);
}

}  // namespace dyspec
