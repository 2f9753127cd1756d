#include "dyspec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dyspec::oracle
{
namespace
{
double one_norm(Matrix const& a)
{
    return a.cwiseAbs().colwise().sum().maxCoeff();
}

// Antiderivative of rate on a uniform grid by composite Simpson per cell.
std::vector<double> cumulative_integral(RateFn const& rate, double t_end, double h)
{
    auto const n = static_cast<std::size_t>(std::ceil(t_end / h - 1e-9));
    std::vector<double> cum(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
    {
        double a = static_cast<double>(i) * h;
        double b = std::min(a + h, t_end);
        cum[i + 1] = cum[i] + (b - a) / 6 * (rate(a) + 4 * rate((a + b) / 2) + rate(b));
    }
    return cum;
}

double integrate_rate(RateFn const& rate, double t)
{
    if (t <= 0)
        return 0;
    double h = std::min(1e-3, t);
    return cumulative_integral(rate, t, h).back();
}

}  // namespace

OracleCocycle OracleCocycle::constant(Matrix const& a)
{
    if (a.rows() != a.cols())
        throw InputError("oracle generator must be square");
    OracleCocycle o;
    o.kind = Kind::constant;
    o.dim = static_cast<int>(a.rows());
    o.generator = a;
    o.exact_spectrum = exact_sacker_sell(o).intervals;
    return o;
}

OracleCocycle OracleCocycle::floquet(TimeMatrixFn a, double period, int dim)
{
    if (!(period > 0))
        throw InputError("floquet period must be positive");
    OracleCocycle o;
    o.kind = Kind::floquet;
    o.dim = dim;
    o.periodic = std::move(a);
    o.period = period;
    o.exact_spectrum = exact_sacker_sell(o).intervals;
    return o;
}

OracleCocycle OracleCocycle::shear_closed_form(double y)
{
    OracleCocycle o;
    o.kind = Kind::shear_closed_form;
    o.dim = 2;
    o.shear_y = y;
    o.exact_spectrum = std::vector<Interval>{{0, 0, 0}};
    return o;
}

OracleCocycle OracleCocycle::diagonal_timevarying(std::vector<RateFn> rates)
{
    if (rates.empty() || rates.size() > static_cast<std::size_t>(kMaxDim))
        throw InputError("diagonal oracle needs 1.." + std::to_string(kMaxDim) + " rates");
    OracleCocycle o;
    o.kind = Kind::diagonal_timevarying;
    o.dim = static_cast<int>(rates.size());
    o.rates = std::move(rates);
    return o;
}

Matrix OracleCocycle::generator_at(double t) const
{
    switch (kind)
    {
        case Kind::constant:
            return generator;
        case Kind::floquet:
            return periodic(t);
        case Kind::shear_closed_form: {
            Matrix a = Matrix::Zero(2, 2);
            a(1, 0) = -std::cos(shear_y);
            return a;
        }
        case Kind::diagonal_timevarying: {
            Matrix a = Matrix::Zero(dim, dim);
            for (int i = 0; i < dim; ++i)
                a(i, i) = rates[i](t);
            return a;
        }
    }
    throw Error("unreachable oracle kind");
}

//---------------------------------------------------------------------------//

Matrix matrix_exponential(Matrix const& a)
{
    if (a.rows() != a.cols())
        throw InputError("matrix_exponential needs a square matrix");
    auto const n = a.rows();
    Matrix const id = Matrix::Identity(n, n);
    double const norm = one_norm(a);

    auto pade = [&](Matrix const& x, std::vector<double> const& b) {
        // b has m + 1 coefficients for order m (odd)
        Matrix x2 = x * x;
        Matrix power = id;
        Matrix u_even = Matrix::Zero(n, n), v = Matrix::Zero(n, n);
        for (std::size_t k = 0; k + 1 < b.size(); k += 2)
        {
            v += b[k] * power;
            u_even += b[k + 1] * power;
            power = power * x2;
        }
        Matrix u = x * u_even;
        return Matrix((v - u).partialPivLu().solve(v + u));
    };

    static std::vector<double> const b3{120, 60, 12, 1};
    static std::vector<double> const b5{30240, 15120, 3360, 420, 30, 1};
    static std::vector<double> const b7{17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1};
    static std::vector<double> const b9{17643225600.0, 8821612800.0, 2075673600, 302702400, 30270240,
                                        2162160,       110880,        3960,       90,        1};
    static std::vector<double> const b13{64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                         1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                         670442572800.0,      33522128640.0,       1323241920.0,
                                         40840800.0,          960960.0,            16380.0,
                                         182.0,               1.0};

    if (norm <= 1.495585217958292e-2)
        return pade(a, b3);
    if (norm <= 2.539398330063230e-1)
        return pade(a, b5);
    if (norm <= 9.504178996162932e-1)
        return pade(a, b7);
    if (norm <= 2.097847961257068)
        return pade(a, b9);

    int squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / 5.371920351148152))));
    Matrix x = a / std::ldexp(1.0, squarings);
    Matrix r = pade(x, b13);
    for (int i = 0; i < squarings; ++i)
        r = r * r;
    return r;
}

Matrix brute_force_propagator(TimeMatrixFn const& generator, double t, double fine_step)
{
    if (!(fine_step > 0) || fine_step > 1e-4)
        throw InputError("brute_force_propagator requires 0 < fine_step <= 1e-4");
    Matrix first = generator(0);
    Matrix p = Matrix::Identity(first.rows(), first.cols());
    if (t <= 0)
        return p;
    auto const n = static_cast<long>(std::ceil(t / fine_step - 1e-9));
    double const h = t / static_cast<double>(n);
    for (long i = 0; i < n; ++i)
    {
        double mid = (static_cast<double>(i) + 0.5) * h;
        p = matrix_exponential(generator(mid) * h) * p;
    }
    return p;
}

Matrix monodromy(OracleCocycle const& oracle)
{
    if (oracle.kind != OracleCocycle::Kind::floquet)
        throw UnsupportedError("monodromy is defined for floquet oracles only");
    return brute_force_propagator(oracle.periodic, oracle.period, 1e-4);
}

Matrix exact_propagator(OracleCocycle const& oracle, double t)
{
    if (t < 0)
        throw InputError("exact_propagator requires t >= 0");
    switch (oracle.kind)
    {
        case OracleCocycle::Kind::constant:
            return matrix_exponential(oracle.generator * t);
        case OracleCocycle::Kind::floquet: {
            auto periods = static_cast<long>(std::floor(t / oracle.period));
            double rest = t - static_cast<double>(periods) * oracle.period;
            Matrix m = monodromy(oracle);
            Matrix power = Matrix::Identity(oracle.dim, oracle.dim);
            for (long k = 0; k < periods; ++k)
                power = m * power;
            return brute_force_propagator(oracle.periodic, rest, 1e-4) * power;
        }
        case OracleCocycle::Kind::shear_closed_form: {
            Matrix p = Matrix::Identity(2, 2);
            p(1, 0) = -t * std::cos(oracle.shear_y);
            return p;
        }
        case OracleCocycle::Kind::diagonal_timevarying: {
            Matrix p = Matrix::Zero(oracle.dim, oracle.dim);
            for (int i = 0; i < oracle.dim; ++i)
                p(i, i) = std::exp(integrate_rate(oracle.rates[i], t));
            return p;
        }
    }
    throw Error("unreachable oracle kind");
}

SpectrumEstimate exact_sacker_sell(OracleCocycle const& oracle, double T, double W, double burn_in)
{
    SpectrumEstimate est;
    est.params.T = T;
    est.params.W = W;
    est.params.burn_in = burn_in;
    est.params.merge_tol = 0;

    std::vector<Interval> points;
    auto add_point = [&points](double r) { points.push_back({r, r, 1}); };

    switch (oracle.kind)
    {
        case OracleCocycle::Kind::constant: {
            Eigen::MatrixXd a = oracle.generator;
            Eigen::EigenSolver<Eigen::MatrixXd> eig(a, false);
            for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
                add_point(eig.eigenvalues()[i].real());
            break;
        }
        case OracleCocycle::Kind::floquet: {
            Eigen::MatrixXd m = monodromy(oracle);
            Eigen::EigenSolver<Eigen::MatrixXd> eig(m, false);
            for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
                add_point(std::log(std::abs(eig.eigenvalues()[i])) / oracle.period);
            break;
        }
        case OracleCocycle::Kind::shear_closed_form:
            add_point(0);
            break;
        case OracleCocycle::Kind::diagonal_timevarying: {
            if (!(W > 0) || burn_in + W > T)
                throw InputError("window does not fit in the horizon");
            double const h = 1e-3;
            double const tau_step = 1e-2;
            for (auto const& rate : oracle.rates)
            {
                auto cum = cumulative_integral(rate, T, h);
                auto at = [&](double t) {
                    double pos = t / h;
                    auto i = std::min(static_cast<std::size_t>(pos), cum.size() - 2);
                    double frac = pos - static_cast<double>(i);
                    return cum[i] + frac * (cum[i + 1] - cum[i]);
                };
                double lo = std::numeric_limits<double>::infinity(), hi = -lo;
                for (double tau = burn_in; tau + W <= T + 1e-12; tau += tau_step)
                {
                    double avg = (at(tau + W) - at(tau)) / W;
                    lo = std::min(lo, avg);
                    hi = std::max(hi, avg);
                }
                points.push_back({lo, hi, 1});
            }
            break;
        }
    }
    est.intervals = merge_intervals(std::move(points), 1e-12);
    return est;
}

double shear_restricted_amplitude(double y, Vector const& eta0, double t)
{
    if (eta0.size() != 2)
        throw InputError("shear oracle is two-dimensional");
    Matrix p = exact_propagator(OracleCocycle::shear_closed_form(y), t);
    Vector xi = p * eta0.normalized();
    return 1.0 / xi.norm();
}

}  // namespace dyspec::oracle
