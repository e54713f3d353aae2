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

#include <gtest/gtest.h>

#include "support/property_sweeps.hpp"

namespace revival::testing {
namespace {

void expect_pass(const SweepOutcome& r) {
  EXPECT_TRUE(r.pass()) << r.name << ": " << r.failures << " of " << r.cases << " cases failed, worst " << r.worst
                        << " (tol " << r.tol << ")";
}

TEST(Properties, UnitaryStepsPreserveNorm) { expect_pass(sweep_norm_preservation(1)); }
TEST(Properties, LindbladPreservesTrace) { expect_pass(sweep_trace_preservation(2)); }
TEST(Properties, DisplacementsCompose) { expect_pass(sweep_displacement_composition(3)); }
TEST(Properties, HomographyGauge) { expect_pass(sweep_homography_gauge(4)); }
TEST(Properties, WignerOriginIsParity) { expect_pass(sweep_wigner_parity_origin(5)); }

// Sidelobes of the rectangular window bias the peak weights; a 600 us record
// keeps the round trip inside the bound for arbitrary distributions.
TEST(Properties, SpectralRoundTrip) { expect_pass(sweep_dft_round_trip(6, 600.0)); }

}  // namespace
}  // namespace revival::testing
