#include <algorithm>
#include <cmath>
#include <limits>

#include "dyspec/spectrum.hpp"

namespace dyspec
{
std::pair<double, double> HypoCertificate::interval() const
{
    return {std::min(lambda1, lambda2), std::max(lambda1, lambda2)};
}

std::string to_string(HypoCertificate::Conclusion c)
{
    return c == HypoCertificate::Conclusion::interval_intersects_spectrum ? "interval_intersects_spectrum"
                                                                          : "interval_contained_in_spectrum";
}

HypoCertificate hypo_certificate(std::vector<HypoEvidence> const& evidence)
{
    if (evidence.size() < 3)
        throw InputError("hypo_certificate needs at least 3 evidence entries");
    for (std::size_t k = 1; k < evidence.size(); ++k)
    {
        if (!(evidence[k].n > evidence[k - 1].n))
            throw InputError("evidence horizons must be strictly increasing");
    }

    // lim inf / lim sup estimated on the trailing half
    std::size_t const first = evidence.size() / 2;
    double liminf_g1 = std::numeric_limits<double>::infinity();
    double limsup_g2 = -std::numeric_limits<double>::infinity();
    for (std::size_t k = first; k < evidence.size(); ++k)
    {
        liminf_g1 = std::min(liminf_g1, evidence[k].g1);
        limsup_g2 = std::max(limsup_g2, evidence[k].g2);
    }

    HypoCertificate cert;
    cert.lambda1 = liminf_g1;
    cert.lambda2 = limsup_g2 - liminf_g1;
    cert.conclusion = cert.lambda1 <= cert.lambda2 ? HypoCertificate::Conclusion::interval_intersects_spectrum
                                                   : HypoCertificate::Conclusion::interval_contained_in_spectrum;
    cert.evidence = evidence;
    return cert;
}

//---------------------------------------------------------------------------//

namespace
{
struct Orbit
{
    std::vector<Matrix> m;  // exp(-lambda k) Phi_k(theta), k = 0..2N
};

Orbit rescaled_orbit(Cocycle const& cocycle, PhasePoint theta, double lambda, int N, double step)
{
    Orbit orbit;
    int const d = cocycle.fiber_dim();
    orbit.m.push_back(Matrix::Identity(d, d));
    double const decay = std::exp(-lambda);
    for (int k = 1; k <= 2 * N; ++k)
    {
        auto ev = cocycle.evaluate(theta, 1.0, step);
        orbit.m.push_back(decay * ev.value * orbit.m.back());
        theta = std::move(ev.end);
    }
    return orbit;
}

double defect_ratio(Orbit const& orbit, int N, Vector const& x)
{
    double peak = 0;
    for (auto const& mk : orbit.m)
        peak = std::max(peak, (mk * x).norm());
    return peak > 0 ? (orbit.m[N] * x).norm() / peak : 0;
}

// Smooth surrogate log|M_N x| - softmax_k log|M_k x| and its gradient
double surrogate(Orbit const& orbit, int N, Vector const& x, Vector* grad)
{
    constexpr double beta = 40;
    auto const count = orbit.m.size();
    std::vector<double> logs(count);
    std::vector<Vector> grads(count);
    for (std::size_t k = 0; k < count; ++k)
    {
        Vector y = orbit.m[k] * x;
        double nn = std::max(y.squaredNorm(), 1e-300);
        logs[k] = 0.5 * std::log(nn);
        grads[k] = orbit.m[k].transpose() * y / nn;
    }
    double top = *std::max_element(logs.begin(), logs.end());
    double z = 0;
    std::vector<double> w(count);
    for (std::size_t k = 0; k < count; ++k)
    {
        w[k] = std::exp(beta * (logs[k] - top));
        z += w[k];
    }
    double soft = top + std::log(z) / beta;
    if (grad)
    {
        *grad = grads[N];
        for (std::size_t k = 0; k < count; ++k)
            *grad -= (w[k] / z) * grads[k];
    }
    return logs[N] - soft;
}

Vector refine(Orbit const& orbit, int N, Vector x)
{
    double alpha = 0.5;
    Vector g;
    double f = surrogate(orbit, N, x, &g);
    for (int iter = 0; iter < 200 && alpha > 1e-12; ++iter)
    {
        Vector tangent = g - g.dot(x) * x;
        if (tangent.norm() < 1e-14)
            break;
        Vector trial = (x + alpha * tangent / tangent.norm()).normalized();
        Vector g_trial;
        double f_trial = surrogate(orbit, N, trial, &g_trial);
        if (f_trial > f)
        {
            x = trial;
            f = f_trial;
            g = g_trial;
            alpha = std::min(1.0, alpha * 1.5);
        }
        else
        {
            alpha *= 0.5;
        }
    }
    return x;
}

}  // namespace

std::optional<ManeCertificate> mane_search(Cocycle const& cocycle, double lambda,
                                           std::vector<PhasePoint> const& theta_grid, int N, double step,
                                           double ratio_threshold)
{
    if (N < 4)
        throw InputError("mane_search requires N >= 4");
    if (!(ratio_threshold > 0 && ratio_threshold <= 1))
        throw InputError("ratio_threshold must lie in (0, 1]");

    std::optional<ManeCertificate> best;
    for (auto const& theta : theta_grid)
    {
        Orbit orbit = rescaled_orbit(cocycle, theta, lambda, N, step);

        Eigen::JacobiSVD<Matrix> svd(orbit.m[N], Eigen::ComputeFullV);
        Matrix const& v = svd.matrixV();
        std::vector<Vector> candidates;
        for (Eigen::Index j = 0; j < v.cols(); ++j)
        {
            Vector start = v.col(j);
            candidates.push_back(start);
            candidates.push_back(refine(orbit, N, start));
        }

        for (auto const& x : candidates)
        {
            double ratio = defect_ratio(orbit, N, x);
            if (best && ratio <= best->ratio)
                continue;
            ManeCertificate cert;
            cert.theta = theta;
            cert.x0 = x.normalized();
            cert.lambda = lambda;
            cert.horizon_N = N;
            cert.ratio = ratio;
            double peak = 0;
            for (auto const& mk : orbit.m)
            {
                cert.profile.push_back((mk * cert.x0).norm());
                peak = std::max(peak, cert.profile.back());
            }
            cert.c = 0.99 * cert.profile[N];
            cert.C = 1.01 * peak;
            best = std::move(cert);
        }
    }
    if (best && best->ratio >= ratio_threshold)
        return best;
    return std::nullopt;
}

std::string BilateralManeReport::side() const
{
    if (primal && adjoint)
        return "both";
    if (primal)
        return "primal";
    if (adjoint)
        return "adjoint";
    return "none";
}

BilateralManeReport mane_search_bilateral(Cocycle const& cocycle, double lambda,
                                          std::vector<PhasePoint> const& theta_grid, int N, double step,
                                          double ratio_threshold)
{
    BilateralManeReport report;
    report.lambda = lambda;
    report.primal = mane_search(cocycle, lambda, theta_grid, N, step, ratio_threshold);
    report.adjoint = mane_search(cocycle.adjoint(), lambda, theta_grid, N, step, ratio_threshold);
    return report;
}

}  // namespace dyspec
