// Copyright 2026 The revival-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Seeded randomized sweeps over the library invariants. Shared by the unit
// tests and the acceptance report.

#include <cstdint>
#include <random>
#include <string>

#include "revival/types.hpp"

namespace revival::testing {

struct SweepOutcome {
  std::string name;
  int cases = 0;
  int failures = 0;
  double worst = 0.0;  // largest deviation seen
  double tol = 0.0;
  double total = 0.0;  // sum of deviations

  double mean() const { return cases > 0 ? total / cases : 0.0; }

  bool pass() const { return cases > 0 && failures == 0; }
};

/// Random density matrix of rank `rank` supported on Fock levels below `support`.
CMatrix random_density_matrix(std::mt19937_64& rng, int support, int rank, int dim);
/// Random normalized amplitudes supported below `support`.
CVector random_amplitudes(std::mt19937_64& rng, int support, int dim);
/// Flat-Dirichlet distribution on 0..n_max.
std::vector<double> random_distribution(std::mt19937_64& rng, int n_max);

SweepOutcome sweep_norm_preservation(std::uint64_t seed, int cases = 100);
SweepOutcome sweep_trace_preservation(std::uint64_t seed, int cases = 100);
SweepOutcome sweep_displacement_composition(std::uint64_t seed, int cases = 100);
SweepOutcome sweep_homography_gauge(std::uint64_t seed, int cases = 100);
SweepOutcome sweep_wigner_parity_origin(std::uint64_t seed, int cases = 100);
/// Rabi signal -> preprocess -> DFT -> peak extraction over [0, span_us]
/// effective time at 0.25 us sampling; worst total-variation distance.
SweepOutcome sweep_dft_round_trip(std::uint64_t seed, double span_us, int cases = 100);

}  // namespace revival::testing
