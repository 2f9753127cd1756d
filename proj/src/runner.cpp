#include "dyspec/runner.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

namespace dyspec
{
namespace
{
namespace fs = std::filesystem;

// Short decimal label for file names: 1 -> "1", 0.5 -> "0.5", -1 -> "-1"
std::string label(double v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

class Writer
{
  public:
    explicit Writer(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

    void json(std::string const& name, Json const& j)
    {
        std::ofstream os(dir_ / name, std::ios::binary);
        os << j.dump(2) << '\n';
        done(name, os);
    }

    void samples(std::string const& name, std::vector<WindowSample> const& samples)
    {
        std::ofstream os(dir_ / name, std::ios::binary);
        write_samples_csv(os, samples);
        done(name, os);
    }

    std::vector<std::string> files;

  private:
    fs::path dir_;

    void done(std::string const& name, std::ofstream& os)
    {
        if (!os)
            throw Error("failed to write " + (dir_ / name).string());
        files.push_back((dir_ / name).string());
    }
};

struct NamedSpectrum
{
    SpectrumEstimate estimate;
    std::vector<WindowSample> samples;
    std::string cocycle;
};

class Pipeline
{
  public:
    explicit Pipeline(RunConfig const& config)
        : config_(config), flow_(make_flow(config.flow_name, config.flow_params))
    {
        std::vector<PhasePoint> anchors;
        for (auto const& a : config.anchors)
        {
            Vector x(flow_->dim()), eta(flow_->dim());
            for (int i = 0; i < flow_->dim(); ++i)
            {
                x[i] = a.x[i];
                eta[i] = a.eta[i];
            }
            anchors.push_back(make_phase_point(x, eta));
        }
        ensemble_ = make_ensemble(flow_->dim(), config.ensemble_size, config.seed, anchors);
    }

    FlowPtr const& flow() const { return flow_; }
    std::vector<PhasePoint> const& ensemble() const { return ensemble_; }

    Cocycle restricted_b() const { return Cocycle::restricted_amplitude(flow_, config_.amplitude_form); }

    //! Spectrum by name, computed once: "B", "B_full", "X", "BX<m>"
    NamedSpectrum const& spectrum(std::string const& name, Cocycle const& cocycle)
    {
        auto it = cache_.find(name);
        if (it != cache_.end())
            return it->second;
        NamedSpectrum result;
        result.cocycle = cocycle.describe();
        result.estimate = sacker_sell_estimate(cocycle, ensemble_, config_.spectrum_params(), &result.samples);
        return cache_.emplace(name, std::move(result)).first->second;
    }

    NamedSpectrum const& sigma_b() { return spectrum("B", restricted_b()); }
    NamedSpectrum const& sigma_b_full()
    {
        return spectrum("B_full", Cocycle::amplitude(flow_, config_.amplitude_form));
    }
    NamedSpectrum const& sigma_x() { return spectrum("X", Cocycle::scalar_stretch(flow_, 1)); }
    NamedSpectrum const& sigma_bxm(double m)
    {
        return spectrum("BX" + label(m), product(Cocycle::scalar_stretch(flow_, m), restricted_b()));
    }

  private:
    RunConfig const& config_;
    FlowPtr flow_;
    std::vector<PhasePoint> ensemble_;
    std::map<std::string, NamedSpectrum> cache_;
};

Json spectrum_document(std::string const& name, NamedSpectrum const& s, Json const& config)
{
    Json j{{"name", name}, {"cocycle", s.cocycle}};
    Json const body = spectrum_to_json(s.estimate);
    for (auto const& [k, v] : body.items())
        j[k] = v;
    j["config"] = config;
    return j;
}

void emit_spectrum(Writer& w, std::string const& name, NamedSpectrum const& s, Json const& config)
{
    w.json("spectrum_" + name + ".json", spectrum_document(name, s, config));
    w.samples("samples_" + name + ".csv", s.samples);
}

}  // namespace

RunSummary run(RunConfig const& config)
{
    validate_config(config);
    Pipeline pipeline(config);
    Writer writer(config.output_dir);
    Json const config_json = config_to_json(config);

    if (config.spectrum_B)
    {
        emit_spectrum(writer, "B", pipeline.sigma_b(), config_json);
        emit_spectrum(writer, "B_full", pipeline.sigma_b_full(), config_json);
    }
    if (config.spectrum_X)
        emit_spectrum(writer, "X", pipeline.sigma_x(), config_json);
    for (double m : config.spectrum_BXm)
        emit_spectrum(writer, "BX" + label(m), pipeline.sigma_bxm(m), config_json);

    if (config.mane.enabled)
    {
        auto const& ensemble = pipeline.ensemble();
        std::vector<PhasePoint> grid(ensemble.begin(),
                                     ensemble.begin() + std::min(config.mane.grid_size, ensemble.size()));
        for (double lambda : config.mane.lambdas)
        {
            auto report = mane_search_bilateral(pipeline.restricted_b(), lambda, grid, config.mane.N, config.step,
                                                config.mane.ratio_threshold);
            Json j{{"lambda", lambda},
                   {"cocycle", pipeline.restricted_b().describe()},
                   {"N", config.mane.N},
                   {"ratio_threshold", config.mane.ratio_threshold},
                   {"grid_size", grid.size()},
                   {"side", report.side()},
                   {"primal", report.primal ? mane_to_json(*report.primal) : Json(nullptr)},
                   {"adjoint", report.adjoint ? mane_to_json(*report.adjoint) : Json(nullptr)},
                   {"config", config_json}};
            writer.json("mane_" + label(lambda) + ".json", j);
        }
    }

    if (config.euler_ess.enabled)
    {
        double const m = config.euler_ess.m;
        auto const& b = pipeline.sigma_b();
        auto const& x = pipeline.sigma_x();
        auto const& bxm = pipeline.sigma_bxm(m);

        double const lambda_max = x.estimate.max();
        double const lambda_min = x.estimate.min();
        std::optional<double> m_star;
        if (lambda_max > lambda_min)
            m_star = connectedness_threshold(b.estimate, lambda_max, lambda_min);
        // m* is a ratio of estimated diameters; equality up to rounding counts as satisfied
        bool const identity_claimed = m_star && std::abs(m) >= *m_star - 1e-6;

        auto annulus = essential_spectrum_annulus(bxm.estimate, config.euler_ess.t, identity_claimed);
        auto gaps = gap_bounds_check(scale(x.estimate, m), b.estimate, bxm.estimate);

        Json gap_json{{"lower_bound", gaps.lower_bound},
                      {"upper_bound", gaps.upper_bound},
                      {"gaps", gaps.gaps},
                      {"violations", Json::array()}};
        for (auto const& v : gaps.violations)
            gap_json["violations"].push_back(Json::array({v.gap_lo, v.gap_hi}));

        Json j{{"m", m},
               {"t", config.euler_ess.t},
               {"sigma_B", spectrum_to_json(b.estimate)},
               {"sigma_X", spectrum_to_json(x.estimate)},
               {"sigma_BXm", spectrum_to_json(bxm.estimate)},
               {"lambda_max", lambda_max},
               {"lambda_min", lambda_min},
               {"m_star", m_star ? Json(*m_star) : Json(nullptr)},
               {"identity_claimed", identity_claimed},
               {"annulus", annulus_to_json(annulus)},
               {"gap_bounds", gap_json},
               {"config", config_json}};
        writer.json("euler_ess.json", j);
    }

    return RunSummary{writer.files};
}

//---------------------------------------------------------------------------//

int run_cli(std::vector<std::string> const& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Dynamical spectra of WKB amplitude cocycles for steady Euler flows"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> output_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;

    auto* run_cmd = app.add_subcommand("run", "Run every task in a configuration file");
    run_cmd->add_option("config", config_path, "Configuration JSON")->required();
    run_cmd->add_option("--output-dir", output_dir, "Override output_dir");
    run_cmd->add_option("--seed", seed, "Override ensemble.seed");
    run_cmd->add_option("--threads", threads, "Worker threads (results do not depend on it)");

    auto* validate_cmd = app.add_subcommand("validate", "Check a configuration and print it normalized");
    validate_cmd->add_option("config", config_path, "Configuration JSON")->required();

    auto error_json = [&err](std::string const& type, std::string const& message, std::string const& field = {}) {
        Json e{{"type", type}, {"message", message}};
        if (!field.empty())
            e["field"] = field;
        err << Json{{"error", e}}.dump() << '\n';
    };

    try
    {
        // CLI11 wants argv order reversed when given a vector
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (CLI::ParseError const& e)
    {
        if (e.get_exit_code() == 0)
        {
            out << app.help();
            return 0;
        }
        error_json("usage", e.what());
        return 2;
    }

    try
    {
        RunConfig config = load_config(config_path);
        if (validate_cmd->parsed())
        {
            out << "OK\n" << config_to_json(config).dump(2) << '\n';
            return 0;
        }

        if (output_dir)
            config.output_dir = *output_dir;
        if (seed)
            config.seed = *seed;
        if (char const* env = std::getenv("DYSPEC_THREADS"))
        {
            try
            {
                config.threads = std::stoi(env);
            }
            catch (std::exception const&)
            {
                throw ConfigError("DYSPEC_THREADS", "must be an integer");
            }
        }
        if (threads)
            config.threads = *threads;
        validate_config(config);

        auto summary = run(config);
        for (auto const& f : summary.files)
            out << f << '\n';
        return 0;
    }
    catch (ConfigError const& e)
    {
        error_json("config", e.what(), e.field());
        return 2;
    }
    catch (IntegrationError const& e)
    {
        error_json("integration", std::string(e.what()) + " (last good t = " + std::to_string(e.last_good_time()) + ")");
        return 3;
    }
    catch (ConditioningError const& e)
    {
        error_json("conditioning", e.what());
        return 4;
    }
    catch (std::exception const& e)
    {
        error_json("error", e.what());
        return 1;
    }
}

}  // namespace dyspec
