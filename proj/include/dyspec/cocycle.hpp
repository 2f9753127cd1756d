#pragma once

#include <memory>
#include <string>

#include "bichar.hpp"
#include "flows.hpp"
#include "types.hpp"

namespace dyspec
{
//! Form of the amplitude generator.
enum class AmplitudeForm
{
    projected,  //!< -du0 + 2 eta eta^T du0; conserves <b, xi>
    verbatim,   //!< du0 + eta eta^T du0
};

AmplitudeForm amplitude_form_from_string(std::string const& s);
std::string to_string(AmplitudeForm form);

//! Amplitude generator at a phase point; throws InputError unless |eta| = 1 within 1e-6.
Matrix amplitude_generator(FlowField const& flow, PhasePoint const& point,
                           AmplitudeForm form = AmplitudeForm::projected);

/*!
 * Orthonormal basis of the complement of eta as the columns of an
 * n x (n-1) matrix.
 *
 * In two dimensions this is (-eta_2, eta_1). In three dimensions the two
 * standard basis vectors least aligned with eta (ties to the smaller index)
 * are Gram-Schmidt orthogonalized against eta, and the second column is
 * flipped if needed so that det[eta | frame] > 0.
 */
Matrix orthogonal_frame(Vector const& eta);

//---------------------------------------------------------------------------//
/*!
 * Linear cocycle over the bicharacteristic flow of a FlowField.
 *
 * Handles are cheap immutable values sharing their expression tree. A null
 * flow denotes the stationary base where only the clock advances; such
 * cocycles are used as flow-independent fixtures.
 */
class Cocycle
{
  public:
    enum class Kind
    {
        amplitude,
        restricted_amplitude,
        scalar_stretch,
        product,
        rescaled,
        adjoint,
        custom,
    };

    //! Propagator value together with the image of the base point.
    struct Evaluation
    {
        Matrix value;
        PhasePoint end;
    };

    //! Amplitude cocycle B on the full n-dimensional fiber.
    static Cocycle amplitude(FlowPtr flow, AmplitudeForm form = AmplitudeForm::projected);
    //! B restricted to the invariant complement of xi, in orthogonal_frame coordinates.
    static Cocycle restricted_amplitude(FlowPtr flow, AmplitudeForm form = AmplitudeForm::projected);
    //! Scalar cocycle (|d chi_t^{-T} xi| / |xi|)^m = exp(m s(t)).
    static Cocycle scalar_stretch(FlowPtr flow, double m);
    //! M' = A(point) M over the given base (flow may be null).
    static Cocycle custom(FlowPtr flow, int fiber_dim, Generator generator, std::string label = "custom");
    //! Time- and point-independent generator.
    static Cocycle constant(Matrix const& generator, FlowPtr flow = nullptr);

    //! exp(-lambda t) times this cocycle.
    Cocycle rescaled(double lambda) const;
    //! Transposed propagator over the inverse flow.
    Cocycle adjoint() const;

    /*!
     * Pointwise product left_t * right_t. A 1x1 factor acts as a scalar;
     * otherwise fiber dimensions must agree. Both factors must share the
     * same base flow and time direction.
     */
    friend Cocycle product(Cocycle const& left, Cocycle const& right);

    Kind kind() const;
    int fiber_dim() const;
    FlowField const* flow() const;
    FlowPtr const& flow_ptr() const;
    //! True when the base runs backward (adjoint over a forward cocycle).
    bool reversed_base() const;
    std::string describe() const;

    //! Phi_t(point) and phi_t(point) for t >= 0.
    Evaluation evaluate(PhasePoint const& point, double t, double step) const;

    Matrix propagate(PhasePoint const& point, double t, double step) const
    {
        return evaluate(point, t, step).value;
    }

    //! Image of point under the base flow of this cocycle after time t.
    PhasePoint base_advance(PhasePoint const& point, double t, double step) const;

    struct Node;

  private:
    explicit Cocycle(std::shared_ptr<Node const> node) : node_(std::move(node)) {}
    std::shared_ptr<Node const> node_;
};

Cocycle product(Cocycle const& left, Cocycle const& right);

//! Free-function form of Cocycle::propagate.
Matrix propagate(Cocycle const& cocycle, PhasePoint const& point, double t, double step);

//! Free-function form of Cocycle::adjoint.
Cocycle adjoint(Cocycle const& cocycle);

/*!
 * frame(eta(t))^T B_t frame(eta(0)) for an amplitude cocycle; throws
 * InputError for other kinds.
 */
Matrix restrict_to_orthogonal(Cocycle const& amplitude, PhasePoint const& point, double t, double step);

}  // namespace dyspec
