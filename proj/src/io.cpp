#include "dyspec/io.hpp"


namespace dyspec
{
namespace
{
// Shortest round-trip text form, independent of stream state
void put_number(std::ostream& os, double v)
{
    os << Json(v).dump();
}

}  // namespace

Json matrix_to_json(Matrix const& m)
{
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
    {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json vector_to_json(Vector const& v)
{
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        a.push_back(v[i]);
    return a;
}

Json phase_point_to_json(PhasePoint const& p)
{
    return Json{{"x", vector_to_json(p.x)}, {"eta", vector_to_json(p.eta)}, {"s", p.s}, {"clock", p.clock}};
}

Json params_to_json(SpectrumParams const& p)
{
    return Json{{"T", p.T},
                {"W", p.W},
                {"step", p.step},
                {"qr_every", p.qr_every},
                {"merge_tol", p.merge_tol},
                {"burn_in", p.burn_in},
                {"window_stride", p.window_stride},
                {"ensemble_size", p.ensemble_size}};
}

Json spectrum_to_json(SpectrumEstimate const& estimate)
{
    Json intervals = Json::array();
    Json samples = Json::array();
    for (auto const& iv : estimate.intervals)
    {
        intervals.push_back(Json::array({iv.lo, iv.hi}));
        samples.push_back(iv.samples);
    }
    return Json{{"intervals", intervals}, {"samples", samples}, {"params", params_to_json(estimate.params)}};
}

SpectrumEstimate spectrum_from_json(Json const& j)
{
    SpectrumEstimate est;
    auto const& intervals = j.at("intervals");
    for (std::size_t i = 0; i < intervals.size(); ++i)
    {
        Interval iv;
        iv.lo = intervals[i].at(0).get<double>();
        iv.hi = intervals[i].at(1).get<double>();
        if (iv.lo > iv.hi)
            throw InputError("interval with lo > hi");
        if (j.contains("samples"))
            iv.samples = j["samples"].at(i).get<std::size_t>();
        est.intervals.push_back(iv);
    }
    if (j.contains("params"))
    {
        auto const& p = j["params"];
        est.params.T = p.value("T", est.params.T);
        est.params.W = p.value("W", est.params.W);
        est.params.step = p.value("step", est.params.step);
        est.params.qr_every = p.value("qr_every", est.params.qr_every);
        est.params.merge_tol = p.value("merge_tol", est.params.merge_tol);
        est.params.burn_in = p.value("burn_in", est.params.burn_in);
        est.params.window_stride = p.value("window_stride", est.params.window_stride);
        est.params.ensemble_size = p.value("ensemble_size", est.params.ensemble_size);
    }
    return est;
}

Json mane_to_json(ManeCertificate const& cert)
{
    return Json{{"theta", phase_point_to_json(cert.theta)},
                {"x0", vector_to_json(cert.x0)},
                {"lambda", cert.lambda},
                {"horizon_N", cert.horizon_N},
                {"c", cert.c},
                {"C", cert.C},
                {"ratio", cert.ratio},
                {"profile", cert.profile}};
}

Json hypo_to_json(HypoCertificate const& cert)
{
    Json evidence = Json::array();
    for (auto const& e : cert.evidence)
        evidence.push_back(Json::array({e.n, e.g1, e.g2}));
    auto [lo, hi] = cert.interval();
    return Json{{"lambda1", cert.lambda1},
                {"lambda2", cert.lambda2},
                {"conclusion", to_string(cert.conclusion)},
                {"interval", Json::array({lo, hi})},
                {"evidence", evidence}};
}

Json annulus_to_json(AnnulusReport const& report)
{
    Json radii = Json::array();
    for (auto const& [lo, hi] : report.radii)
        radii.push_back(Json::array({lo, hi}));
    return Json{{"radii", radii},
                {"hull", Json::array({report.hull.first, report.hull.second})},
                {"identity", report.identity}};
}

void write_samples_csv(std::ostream& os, std::vector<WindowSample> const& samples)
{
    os << "seed,index,window_start,rate\n";
    for (auto const& s : samples)
    {
        os << s.seed << ',' << s.index << ',';
        put_number(os, s.window_start);
        os << ',';
        put_number(os, s.rate);
        os << '\n';
    }
}

void write_trajectory_csv(std::ostream& os, std::vector<TrajectorySample> const& trajectory)
{
    if (trajectory.empty())
        return;
    auto const n = trajectory.front().point.x.size();
    os << 't';
    for (Eigen::Index i = 1; i <= n; ++i)
        os << ",x" << i;
    for (Eigen::Index i = 1; i <= n; ++i)
        os << ",eta" << i;
    os << ",s\n";
    for (auto const& sample : trajectory)
    {
        put_number(os, sample.t);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            os << ',';
            put_number(os, sample.point.x[i]);
        }
        for (Eigen::Index i = 0; i < n; ++i)
        {
            os << ',';
            put_number(os, sample.point.eta[i]);
        }
        os << ',';
        put_number(os, sample.point.s);
        os << '\n';
    }
}

}  // namespace dyspec
