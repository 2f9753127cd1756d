#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bichar.hpp"
#include "cocycle.hpp"
#include "types.hpp"

namespace dyspec
{
//---------------------------------------------------------------------------//
// Spectral interval sets
//---------------------------------------------------------------------------//

//! Closed interval of exponential rates (per unit time).
struct Interval
{
    double lo = 0;
    double hi = 0;
    std::size_t samples = 0;  //!< windowed exponents supporting this interval
};

//! Knobs of the windowed-QR estimator.
struct SpectrumParams
{
    double T = 200;             //!< horizon per trajectory
    double W = 20;              //!< sliding window length
    double step = 1e-3;         //!< RK4 step
    int qr_every = 10;          //!< steps between QR re-factorizations
    double merge_tol = 0.05;    //!< intervals closer than this are merged
    double burn_in = -1;        //!< windows start at or after this time; negative means T/2
    double window_stride = 1;   //!< spacing of window start times
    std::size_t ensemble_size = 0;
    int threads = 1;            //!< worker count; results do not depend on it

    double resolved_burn_in() const { return burn_in < 0 ? T / 2 : burn_in; }
};

/*!
 * Sorted, pairwise disjoint closed intervals approximating a dynamical
 * spectrum.
 */
struct SpectrumEstimate
{
    std::vector<Interval> intervals;
    SpectrumParams params;

    bool empty() const { return intervals.empty(); }
    double min() const;
    double max() const;
    double diameter() const { return max() - min(); }
    //! True if x lies within distance tol of some interval.
    bool contains(double x, double tol = 0) const;
    //! True if every interval of other lies inside this set inflated by tol.
    bool covers(SpectrumEstimate const& other, double tol) const;
};

/*!
 * Sort and merge intervals whose gap is below merge_tol. Sample counts of
 * merged intervals are summed.
 */
std::vector<Interval> merge_intervals(std::vector<Interval> intervals, double merge_tol);

//! Multiply every rate by factor (spectrum of the m-th power of a scalar cocycle).
SpectrumEstimate scale(SpectrumEstimate estimate, double factor);

//! Shift every rate by delta.
SpectrumEstimate translate(SpectrumEstimate estimate, double delta);

//! Pairwise interval sums, merged with the merge tolerance of a.
SpectrumEstimate minkowski_sum(SpectrumEstimate const& a, SpectrumEstimate const& b);

//---------------------------------------------------------------------------//
// Estimators
//---------------------------------------------------------------------------//

//! One sliding-window growth rate of a QR diagonal index.
struct WindowSample
{
    std::size_t seed;
    int index;
    double window_start;
    double rate;
};

/*!
 * Discrete-QR Lyapunov exponents along one trajectory, sorted descending.
 *
 * Throws InputError if T < 10 * qr_every * step and ConditioningError when a
 * diagonal entry of R drops below 1e-300.
 */
std::vector<double>
lyapunov_exponents(Cocycle const& cocycle, PhasePoint const& start, double T, double step, int qr_every);

/*!
 * Windowed-QR estimate of the dynamical spectrum over an ensemble.
 *
 * For each trajectory and QR diagonal index the sliding-window averages of
 * the log-growth give an interval [min, max]; the union over trajectories
 * and indices is merged with params.merge_tol. Trajectories run on
 * params.threads workers and are reduced in seed order.
 */
SpectrumEstimate sacker_sell_estimate(Cocycle const& cocycle, std::vector<PhasePoint> const& ensemble,
                                      SpectrumParams const& params, std::vector<WindowSample>* samples = nullptr);

/*!
 * Deterministic ensemble on T^n x S^{n-1}: the anchors first, then a
 * randomly shifted Halton sequence up to `size` points in total.
 */
std::vector<PhasePoint>
make_ensemble(int dim, std::size_t size, std::uint64_t seed, std::vector<PhasePoint> const& anchors = {});

//---------------------------------------------------------------------------//
// Finite-time certificates
//---------------------------------------------------------------------------//

struct HypoEvidence
{
    double n;   //!< horizon n_k
    double g1;  //!< n_k^{-1} log |T^{n_k} z_k|
    double g2;  //!< n_k^{-1} log |T^{2 n_k} z_k|
};

struct HypoCertificate
{
    enum class Conclusion
    {
        interval_intersects_spectrum,
        interval_contained_in_spectrum,
    };

    double lambda1 = 0;
    double lambda2 = 0;
    Conclusion conclusion = Conclusion::interval_intersects_spectrum;
    std::vector<HypoEvidence> evidence;

    //! [min(lambda1, lambda2), max(lambda1, lambda2)]
    std::pair<double, double> interval() const;
};

std::string to_string(HypoCertificate::Conclusion c);

/*!
 * Growth-rate certificate from orbit evidence.
 *
 * lambda1 is the minimum of g1 over the trailing half of the evidence and
 * lambda1 + lambda2 the maximum of g2 there. lambda1 <= lambda2 gives
 * [lambda1, lambda2] intersecting the log-spectrum; otherwise
 * [lambda2, lambda1] is contained in it.
 */
HypoCertificate hypo_certificate(std::vector<HypoEvidence> const& evidence);

//! Finite-horizon witness of non-dichotomy at rate lambda.
struct ManeCertificate
{
    PhasePoint theta;
    Vector x0;
    double lambda = 0;
    int horizon_N = 0;
    double c = 0;
    double C = 0;
    double ratio = 0;            //!< |M_N x0| / max_k |M_k x0|
    std::vector<double> profile;  //!< |exp(-lambda k) Phi_k(theta) x0|, k = 0..2N
};

/*!
 * Search a grid of base points for a direction whose rescaled orbit stays
 * bounded up to time 2N while keeping its size at time N.
 *
 * Candidates are the right singular vectors of M_N refined by ascent of the
 * ratio |M_N x| / max_k |M_k x| on the unit sphere. Returns the best
 * candidate if its ratio reaches ratio_threshold.
 */
std::optional<ManeCertificate> mane_search(Cocycle const& cocycle, double lambda,
                                           std::vector<PhasePoint> const& theta_grid, int N, double step,
                                           double ratio_threshold);

struct BilateralManeReport
{
    double lambda = 0;
    std::optional<ManeCertificate> primal;
    std::optional<ManeCertificate> adjoint;

    //! "primal", "adjoint", "both" or "none"
    std::string side() const;
    bool found() const { return primal || adjoint; }
};

//! mane_search on the cocycle and on its adjoint.
BilateralManeReport mane_search_bilateral(Cocycle const& cocycle, double lambda,
                                          std::vector<PhasePoint> const& theta_grid, int N, double step,
                                          double ratio_threshold);

//---------------------------------------------------------------------------//
// Spectral arithmetic for products with scalar cocycles
//---------------------------------------------------------------------------//

struct GapViolation
{
    double gap_lo;
    double gap_hi;
};

struct GapBoundsReport
{
    double lower_bound = 0;  //!< max Sigma_C + min Sigma_Phi
    double upper_bound = 0;  //!< min Sigma_C + max Sigma_Phi
    std::vector<std::pair<double, double>> gaps;
    std::vector<GapViolation> violations;

    bool pass() const { return violations.empty(); }
};

/*!
 * Check that every gap of the product spectrum inside its hull lies
 * strictly between lower_bound and upper_bound (within tol).
 */
GapBoundsReport gap_bounds_check(SpectrumEstimate const& sigma_c, SpectrumEstimate const& sigma_phi,
                                 SpectrumEstimate const& sigma_product, double tol = 1e-9);

/*!
 * Smallest |m| for which the stretch spectrum is wide enough to close every
 * gap of the amplitude spectrum: diam(Sigma_B) / (lambda_max - lambda_min).
 */
double connectedness_threshold(SpectrumEstimate const& sigma_b, double lambda_max, double lambda_min);

struct AnnulusReport
{
    std::vector<std::pair<double, double>> radii;  //!< [exp(t a), exp(t b)] per interval
    std::pair<double, double> hull;                //!< [exp(t min), exp(t max)]
    bool identity = false;  //!< radii are the predicted moduli, not only an inner bound
};

/*!
 * Map rates to spectral radii at time t. The result is the predicted set of
 * essential-spectrum moduli when sigma is a single interval and the
 * connectedness condition holds; otherwise radii is an inner bound and hull
 * the outer one.
 */
AnnulusReport essential_spectrum_annulus(SpectrumEstimate const& sigma, double t, bool connectedness_holds = true);

}  // namespace dyspec
