#pragma once

// The end-to-end verification suite: constructive checks of the free-module
// stability results on the modular lattice at desk scale, plus the exactness
// contracts of the deformation machinery. Shared by the CLI `verify`
// subcommand and the acceptance test binary.

#include "pforms/json_io.hpp"

namespace pforms {

struct AcceptanceOptions {
  std::uint64_t seed = 20240801;
  int threads = 1;
  std::string kernel = "auto";
  long eisenstein_B = 5000;
  bool quick = false;  // trims the expensive bounds (unit-test use only)
};

std::vector<Check> run_acceptance(const AcceptanceOptions& opt);

}  // namespace pforms
