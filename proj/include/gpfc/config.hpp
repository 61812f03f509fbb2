#pragma once

#include <iosfwd>
#include <string>

#include "gpfc/trainer.hpp"

namespace gpfc {

/// Plain `key = value` lines overriding `base`. Keys: max_iterations,
/// grad_tolerance, objective_tolerance, restarts, seed, parallel_kernels.
TrainConfig read_train_config(std::istream& in, TrainConfig base = {});
TrainConfig load_train_config(const std::string& path, TrainConfig base = {});

}  // namespace gpfc
