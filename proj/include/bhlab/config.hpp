#pragma once

#include <string>

#include "bhlab/solver.hpp"

namespace bhlab::io {

// Parsed run configuration file.  Plain-text sections with key = value
// lines; '#' starts a comment.  Unknown sections or keys are rejected, as
// are missing required keys.
//
//   [grid]         n, L
//   [equation]     alpha
//   [time]         t_max, and exactly one of dt / cfl_sigma
//   [initial]      variant = rational | single_mode | gaussian | from_file
//                  rational: a, b      single_mode: amplitude, wavenumber
//                  gaussian: amplitude, width      from_file: path
//   [diagnostics]  cadence; optional beta0, weight_p + weight_q
//   [stop]         slope_factor, tail_fraction
//   [output]       directory; optional plot = on | off (default off)
struct RunConfig {
    solver::SimConfig sim;
    std::string output_directory;
    bool plot = false;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

} // namespace bhlab::io
