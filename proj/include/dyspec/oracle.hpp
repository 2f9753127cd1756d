#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "spectrum.hpp"
#include "types.hpp"

//! Closed-form cocycles and brute-force propagators used as independent references.
namespace dyspec::oracle
{
using TimeMatrixFn = std::function<Matrix(double)>;
using RateFn = std::function<double(double)>;

struct OracleCocycle
{
    enum class Kind
    {
        constant,
        floquet,
        shear_closed_form,
        diagonal_timevarying,
    };

    Kind kind = Kind::constant;
    int dim = 0;
    Matrix generator;             //!< constant
    TimeMatrixFn periodic;        //!< floquet generator A(t)
    double period = 0;            //!< floquet
    double shear_y = 0;           //!< streamline height for shear_closed_form
    std::vector<RateFn> rates;    //!< diagonal_timevarying entries a_i(t)
    std::optional<std::vector<Interval>> exact_spectrum;

    static OracleCocycle constant(Matrix const& a);
    static OracleCocycle floquet(TimeMatrixFn a, double period, int dim);
    /*!
     * Frequency propagator xi(t) = d chi_t^{-T} xi(0) of the shear
     * U(y) = sin y along the streamline at height y.
     */
    static OracleCocycle shear_closed_form(double y);
    static OracleCocycle diagonal_timevarying(std::vector<RateFn> rates);

    //! Generator at time t (floquet, diagonal) or the constant generator.
    Matrix generator_at(double t) const;
};

//! e^A by scaling and squaring with a Pade approximant of order 3..13 chosen by |A|_1.
Matrix matrix_exponential(Matrix const& a);

Matrix exact_propagator(OracleCocycle const& oracle, double t);

//! Ordered product of exp(A(tau + h/2) h) over [0, t]; fine_step must be <= 1e-4.
Matrix brute_force_propagator(TimeMatrixFn const& generator, double t, double fine_step);

//! Monodromy matrix of a floquet oracle.
Matrix monodromy(OracleCocycle const& oracle);

/*!
 * Closed-form dynamical spectrum.
 *
 * constant: real parts of eigenvalues; floquet: log|mu| / period over the
 * monodromy eigenvalues; shear_closed_form: {0}; diagonal_timevarying: the
 * range of window averages (window W, starts in [burn_in, T - W]) of each
 * rate, by quadrature.
 */
SpectrumEstimate exact_sacker_sell(OracleCocycle const& oracle, double T = 200, double W = 20, double burn_in = 0);

//! Restricted amplitude of the shear U(y) = sin y: |xi(0)| / |xi(t)| for unit eta0.
double shear_restricted_amplitude(double y, Vector const& eta0, double t);

}  // namespace dyspec::oracle
