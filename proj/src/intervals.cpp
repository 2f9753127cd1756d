#include <algorithm>
#include <cmath>
#include <limits>

#include "dyspec/spectrum.hpp"

namespace dyspec
{
double SpectrumEstimate::min() const
{
    if (intervals.empty())
        throw InputError("empty spectrum estimate has no minimum");
    return intervals.front().lo;
}

double SpectrumEstimate::max() const
{
    if (intervals.empty())
        throw InputError("empty spectrum estimate has no maximum");
    return intervals.back().hi;
}

bool SpectrumEstimate::contains(double x, double tol) const
{
    return std::any_of(intervals.begin(), intervals.end(),
                       [x, tol](Interval const& iv) { return x >= iv.lo - tol && x <= iv.hi + tol; });
}

bool SpectrumEstimate::covers(SpectrumEstimate const& other, double tol) const
{
    // Inflated intervals are merged first so that coverage across a closed-up gap counts
    std::vector<Interval> inflated;
    for (auto const& iv : intervals)
        inflated.push_back({iv.lo - tol, iv.hi + tol, 0});
    inflated = merge_intervals(std::move(inflated), 0);
    for (auto const& piece : other.intervals)
    {
        bool inside = std::any_of(inflated.begin(), inflated.end(), [&piece](Interval const& iv) {
            return piece.lo >= iv.lo && piece.hi <= iv.hi;
        });
        if (!inside)
            return false;
    }
    return true;
}

std::vector<Interval> merge_intervals(std::vector<Interval> intervals, double merge_tol)
{
    std::sort(intervals.begin(), intervals.end(), [](Interval const& a, Interval const& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    std::vector<Interval> merged;
    for (auto const& iv : intervals)
    {
        // touching or overlapping intervals always merge
        if (!merged.empty() && (iv.lo - merged.back().hi < merge_tol || iv.lo <= merged.back().hi))
        {
            merged.back().hi = std::max(merged.back().hi, iv.hi);
            merged.back().samples += iv.samples;
        }
        else
        {
            merged.push_back(iv);
        }
    }
    return merged;
}

SpectrumEstimate scale(SpectrumEstimate estimate, double factor)
{
    for (auto& iv : estimate.intervals)
    {
        double a = factor * iv.lo, b = factor * iv.hi;
        iv.lo = std::min(a, b);
        iv.hi = std::max(a, b);
    }
    estimate.intervals = merge_intervals(std::move(estimate.intervals), estimate.params.merge_tol);
    return estimate;
}

SpectrumEstimate translate(SpectrumEstimate estimate, double delta)
{
    for (auto& iv : estimate.intervals)
    {
        iv.lo += delta;
        iv.hi += delta;
    }
    return estimate;
}

SpectrumEstimate minkowski_sum(SpectrumEstimate const& a, SpectrumEstimate const& b)
{
    if (a.empty() || b.empty())
        throw InputError("minkowski_sum needs two non-empty estimates");
    SpectrumEstimate sum;
    sum.params = a.params;
    for (auto const& x : a.intervals)
        for (auto const& y : b.intervals)
            sum.intervals.push_back({x.lo + y.lo, x.hi + y.hi, 0});
    sum.intervals = merge_intervals(std::move(sum.intervals), a.params.merge_tol);
    return sum;
}

//---------------------------------------------------------------------------//

GapBoundsReport gap_bounds_check(SpectrumEstimate const& sigma_c, SpectrumEstimate const& sigma_phi,
                                 SpectrumEstimate const& sigma_product, double tol)
{
    if (sigma_c.empty() || sigma_phi.empty() || sigma_product.empty())
        throw InputError("gap_bounds_check needs non-empty estimates");

    GapBoundsReport report;
    report.lower_bound = sigma_c.max() + sigma_phi.min();
    report.upper_bound = sigma_c.min() + sigma_phi.max();

    auto const& ivs = sigma_product.intervals;
    for (std::size_t i = 1; i < ivs.size(); ++i)
    {
        double a = ivs[i - 1].hi, b = ivs[i].lo;
        if (!(b > a))
            continue;
        report.gaps.emplace_back(a, b);
        // every rho in (a, b) must satisfy lower < rho < upper
        if (report.lower_bound > a + tol || b > report.upper_bound + tol)
            report.violations.push_back({a, b});
    }
    return report;
}

double connectedness_threshold(SpectrumEstimate const& sigma_b, double lambda_max, double lambda_min)
{
    if (!(lambda_max > lambda_min))
        throw InputError("connectedness_threshold requires lambda_max > lambda_min");
    return sigma_b.diameter() / (lambda_max - lambda_min);
}

AnnulusReport essential_spectrum_annulus(SpectrumEstimate const& sigma, double t, bool connectedness_holds)
{
    if (!(t > 0))
        throw InputError("essential_spectrum_annulus requires t > 0");
    AnnulusReport report;
    for (auto const& iv : sigma.intervals)
        report.radii.emplace_back(std::exp(t * iv.lo), std::exp(t * iv.hi));
    if (!sigma.empty())
        report.hull = {std::exp(t * sigma.min()), std::exp(t * sigma.max())};
    report.identity = sigma.intervals.size() == 1 && connectedness_holds;
    return report;
}

}  // namespace dyspec
