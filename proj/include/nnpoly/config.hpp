#pragma once

#include <filesystem>
#include <string_view>

#include "nnpoly/simlab.hpp"

namespace nnpoly {

// Settings for the `simulate` and `surfaces` commands, read from a small
// TOML subset: [section] headers, `key = value` pairs, '#' comments;
// values are numbers, booleans, "strings" or one-line arrays of those.
//
//   [data]        n, p, degree, mean_range, variance, coeff_range, noise_sd
//   [experiment]  train_fraction, epsilon
//   [grid]        activations, scalings, hidden, orders, reps, fixed_data, threads
//   [training]    max_epochs, gradient_tolerance, initial_step, increase,
//                 decrease, min_step, max_step, init_scale
//   [surfaces]    p, activation, scaling, hidden, order, networks,
//                 resolution, extend
//
// Every key is optional; omitted keys keep the defaults of GridConfig and
// CoefficientStudyConfig (the coefficient study defaults to p = 2,
// softplus, symmetric scaling, h1 = 4, order 2, four networks). Unknown
// sections or keys are errors.
struct SimulationConfig {
  GridConfig grid;
  CoefficientStudyConfig study;
};

SimulationConfig default_simulation_config();
SimulationConfig parse_simulation_config(std::string_view text, std::string_view source = "<string>");
SimulationConfig load_simulation_config(const std::filesystem::path& path);

}  // namespace nnpoly
