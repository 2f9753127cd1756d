#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <random>
#include <thread>

#include "dyspec/spectrum.hpp"

namespace dyspec
{
namespace
{
//! Per-block log-growth rates of each QR diagonal index along one trajectory.
struct QrTrace
{
    double block_time = 0;
    std::vector<std::vector<double>> rates;  // [index][block]
};

QrTrace qr_trace(Cocycle const& cocycle, PhasePoint start, double T, double step, int qr_every)
{
    if (!(step > 0) || qr_every < 1)
        throw InputError("QR stepping needs step > 0 and qr_every >= 1");

    QrTrace trace;
    trace.block_time = qr_every * step;
    auto const blocks = static_cast<std::size_t>(std::llround(T / trace.block_time));
    int const d = cocycle.fiber_dim();
    trace.rates.assign(d, std::vector<double>(blocks));

    Matrix q = Matrix::Identity(d, d);
    PhasePoint theta = std::move(start);
    for (std::size_t b = 0; b < blocks; ++b)
    {
        auto ev = cocycle.evaluate(theta, trace.block_time, step);
        Eigen::HouseholderQR<Matrix> qr(ev.value * q);
        Matrix const& packed = qr.matrixQR();
        q = Matrix::Identity(d, d);
        q = qr.householderQ() * q;
        for (int i = 0; i < d; ++i)
        {
            double r = packed(i, i);
            if (!(std::abs(r) > 1e-300))
                throw ConditioningError("degenerate R diagonal at t = "
                                        + std::to_string(static_cast<double>(b) * trace.block_time));
            if (r < 0)
                q.col(i) = -q.col(i);
            trace.rates[i][b] = std::log(std::abs(r)) / trace.block_time;
        }
        theta = std::move(ev.end);
    }
    return trace;
}

//! Map u in [0, 1)^k to a point of T^n x S^{n-1}.
PhasePoint phase_point_from_unit(int dim, double const* u)
{
    constexpr double two_pi = 2 * std::numbers::pi;
    Vector x(dim), eta(dim);
    for (int i = 0; i < dim; ++i)
        x[i] = two_pi * u[i];
    if (dim == 2)
    {
        double a = two_pi * u[2];
        eta << std::cos(a), std::sin(a);
    }
    else
    {
        double z = 2 * u[3] - 1;
        double phi = two_pi * u[4];
        double r = std::sqrt(std::max(0.0, 1 - z * z));
        eta << r * std::cos(phi), r * std::sin(phi), z;
    }
    return make_phase_point(x, eta);
}

double radical_inverse(std::uint64_t index, std::uint64_t base)
{
    double inv = 1.0 / static_cast<double>(base);
    double scale = inv, result = 0;
    while (index > 0)
    {
        result += static_cast<double>(index % base) * scale;
        index /= base;
        scale *= inv;
    }
    return result;
}

}  // namespace

std::vector<double>
lyapunov_exponents(Cocycle const& cocycle, PhasePoint const& start, double T, double step, int qr_every)
{
    if (!(T >= 10 * qr_every * step))
        throw InputError("lyapunov_exponents requires T >= 10 * qr_every * step");
    QrTrace trace = qr_trace(cocycle, start, T, step, qr_every);
    std::vector<double> exponents;
    for (auto const& rates : trace.rates)
    {
        double sum = 0;
        for (double r : rates)
            sum += r;
        exponents.push_back(sum / static_cast<double>(rates.size()));
    }
    std::sort(exponents.begin(), exponents.end(), std::greater<>());
    return exponents;
}

SpectrumEstimate sacker_sell_estimate(Cocycle const& cocycle, std::vector<PhasePoint> const& ensemble,
                                      SpectrumParams const& params, std::vector<WindowSample>* samples)
{
    if (ensemble.empty())
        throw InputError("sacker_sell_estimate needs a non-empty ensemble");
    if (!(params.W > 0) || params.W > params.T / 4)
        throw InputError("window length must satisfy 0 < W <= T/4");
    double const burn_in = params.resolved_burn_in();
    if (burn_in + params.W > params.T)
        throw InputError("burn-in plus window length exceeds the horizon");
    if (!(params.window_stride > 0) || !(params.merge_tol >= 0))
        throw InputError("window stride must be positive and merge tolerance non-negative");

    struct SeedResult
    {
        std::vector<Interval> intervals;
        std::vector<WindowSample> samples;
        std::exception_ptr error;
    };
    std::vector<SeedResult> results(ensemble.size());

    double const block_time = params.qr_every * params.step;
    auto const window_blocks = std::max<long>(1, std::lround(params.W / block_time));
    auto const stride_blocks = std::max<long>(1, std::lround(params.window_stride / block_time));
    auto const first_block = static_cast<long>(std::ceil(burn_in / block_time - 1e-9));

    auto run_seed = [&](std::size_t seed) {
        SeedResult& out = results[seed];
        try
        {
            QrTrace trace = qr_trace(cocycle, ensemble[seed], params.T, params.step, params.qr_every);
            for (std::size_t i = 0; i < trace.rates.size(); ++i)
            {
                auto const& rates = trace.rates[i];
                std::vector<double> prefix(rates.size() + 1, 0.0);
                for (std::size_t b = 0; b < rates.size(); ++b)
                    prefix[b + 1] = prefix[b] + rates[b];

                Interval iv{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0};
                auto const total = static_cast<long>(rates.size());
                for (long b0 = first_block; b0 + window_blocks <= total; b0 += stride_blocks)
                {
                    double rate = (prefix[b0 + window_blocks] - prefix[b0]) / static_cast<double>(window_blocks);
                    iv.lo = std::min(iv.lo, rate);
                    iv.hi = std::max(iv.hi, rate);
                    ++iv.samples;
                    if (samples)
                        out.samples.push_back(
                            {seed, static_cast<int>(i), static_cast<double>(b0) * block_time, rate});
                }
                if (iv.samples > 0)
                    out.intervals.push_back(iv);
            }
        }
        catch (...)
        {
            out.error = std::current_exception();
        }
    };

    int const workers = std::clamp<int>(params.threads, 1, static_cast<int>(ensemble.size()));
    if (workers == 1)
    {
        for (std::size_t seed = 0; seed < ensemble.size(); ++seed)
            run_seed(seed);
    }
    else
    {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w)
        {
            pool.emplace_back([&] {
                for (std::size_t seed = next++; seed < ensemble.size(); seed = next++)
                    run_seed(seed);
            });
        }
    }

    // Deterministic reduction in seed order
    SpectrumEstimate estimate;
    estimate.params = params;
    estimate.params.ensemble_size = ensemble.size();
    estimate.params.burn_in = burn_in;
    std::vector<Interval> all;
    for (auto& r : results)
    {
        if (r.error)
            std::rethrow_exception(r.error);
        all.insert(all.end(), r.intervals.begin(), r.intervals.end());
        if (samples)
            samples->insert(samples->end(), r.samples.begin(), r.samples.end());
    }
    estimate.intervals = merge_intervals(std::move(all), params.merge_tol);
    return estimate;
}

std::vector<PhasePoint>
make_ensemble(int dim, std::size_t size, std::uint64_t seed, std::vector<PhasePoint> const& anchors)
{
    if (dim != 2 && dim != 3)
        throw InputError("ensemble dimension must be 2 or 3");
    for (auto const& a : anchors)
    {
        if (a.x.size() != dim || a.eta.size() != dim)
            throw InputError("anchor dimension does not match the flow");
    }

    std::vector<PhasePoint> points(anchors.begin(), anchors.end());
    int const coords = 2 * dim - 1;
    constexpr std::uint64_t primes[] = {2, 3, 5, 7, 11};

    std::mt19937_64 rng(seed);
    double shift[5];
    for (int k = 0; k < coords; ++k)
        shift[k] = static_cast<double>(rng() >> 11) * 0x1.0p-53;

    for (std::uint64_t i = 1; points.size() < size; ++i)
    {
        double u[5];
        for (int k = 0; k < coords; ++k)
        {
            double v = radical_inverse(i, primes[k]) + shift[k];
            u[k] = v - std::floor(v);
        }
        points.push_back(phase_point_from_unit(dim, u));
    }
    return points;
}

}  // namespace dyspec
