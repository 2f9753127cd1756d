#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cocycle.hpp"
#include "flows.hpp"
#include "io.hpp"
#include "spectrum.hpp"

namespace dyspec
{
//! Configuration failure tied to a dotted field path such as "integration.step".
class ConfigError : public InputError
{
  public:
    ConfigError(std::string field, std::string const& message)
        : InputError(field.empty() ? message : field + ": " + message), field_(std::move(field))
    {
    }

    std::string const& field() const noexcept { return field_; }

  private:
    std::string field_;
};

struct AnchorSpec
{
    std::vector<double> x;
    std::vector<double> eta;
};

struct RunConfig
{
    std::string flow_name = "shear";
    FlowField::Params flow_params;

    double step = 1e-3;
    double T = 200;
    double W = 20;
    int qr_every = 10;
    double merge_tol = 0.05;
    double burn_in = 100;
    double window_stride = 1;
    AmplitudeForm amplitude_form = AmplitudeForm::projected;

    std::size_t ensemble_size = 64;
    std::uint64_t seed = 20240601;
    std::vector<AnchorSpec> anchors;

    bool spectrum_B = false;
    bool spectrum_X = false;
    std::vector<double> spectrum_BXm;  //!< exponents m; empty when not requested

    struct Mane
    {
        bool enabled = false;
        std::vector<double> lambdas;
        int N = 10;
        double ratio_threshold = 0.1;
        std::size_t grid_size = 8;
    } mane;

    struct EulerEss
    {
        bool enabled = false;
        double m = 1;
        double t = 1;
    } euler_ess;

    std::string output_dir = "results";
    int threads = 1;

    SpectrumParams spectrum_params() const;
};

//! Parse and validate; throws ConfigError naming the offending field.
RunConfig parse_config(Json const& j);

//! Read a JSON file; parse errors report line and column.
RunConfig load_config(std::string const& path);

//! Normalized form with every default resolved.
Json config_to_json(RunConfig const& config);

//! Check invariants of an already populated config.
void validate_config(RunConfig const& config);

}  // namespace dyspec
