#pragma once

#include <ostream>
#include <vector>

#include <json.hpp>

#include "bichar.hpp"
#include "spectrum.hpp"
#include "types.hpp"

namespace dyspec
{
using Json = nlohmann::ordered_json;

//! Matrix as a row-major array of rows.
Json matrix_to_json(Matrix const& m);
Json vector_to_json(Vector const& v);
Json phase_point_to_json(PhasePoint const& p);
Json params_to_json(SpectrumParams const& p);

//! {"intervals": [[lo, hi], ...], "samples": [...], "params": {...}}
Json spectrum_to_json(SpectrumEstimate const& estimate);
//! Inverse of spectrum_to_json (sample counts and params optional).
SpectrumEstimate spectrum_from_json(Json const& j);

Json mane_to_json(ManeCertificate const& cert);
Json hypo_to_json(HypoCertificate const& cert);
Json annulus_to_json(AnnulusReport const& report);

//! Header "seed,index,window_start,rate" then one row per sample.
void write_samples_csv(std::ostream& os, std::vector<WindowSample> const& samples);

//! Header "t,x1..xn,eta1..etan,s" then one row per sample.
void write_trajectory_csv(std::ostream& os, std::vector<TrajectorySample> const& trajectory);

}  // namespace dyspec
