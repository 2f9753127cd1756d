#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace dyspec
{
struct RunSummary
{
    std::vector<std::string> files;  //!< written paths, in write order
};

/*!
 * Execute every task of the configuration and write its result files to
 * config.output_dir. Library errors propagate to the caller.
 */
RunSummary run(RunConfig const& config);

/*!
 * Command-line entry point: `run <config>` or `validate <config>` with
 * --output-dir, --seed and --threads overrides. Returns the process exit
 * status (0 ok, 2 configuration, 3 integration, 4 conditioning, 1 other).
 */
int run_cli(std::vector<std::string> const& args, std::ostream& out, std::ostream& err);

}  // namespace dyspec
