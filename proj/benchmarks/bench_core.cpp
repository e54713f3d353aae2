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

#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "revival/analysis.hpp"
#include "revival/analytic.hpp"
#include "revival/fock.hpp"
#include "revival/jc_dynamics.hpp"

namespace revival {
namespace {

void BM_LindbladRhs(benchmark::State& state) {
  JCParams jc;
  jc.dim = static_cast<int>(state.range(0));
  const BathParams bath{us(8100.0), 0.38, std::numeric_limits<double>::infinity()};
  const LindbladGenerator gen(jc, bath);
  const int n = gen.size();
  const FieldState coh = coherent_state(1.5, jc.dim);
  const CVector psi = joint_product(Eigen::Vector2cd(1.0, 0.0), coh);
  const CMatrix rho = psi * psi.adjoint();
  CMatrix out(n, n);
  for (auto _ : state) {
    gen.apply(rho.data(), out.data(), 0.8);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_LindbladRhs)->Arg(20)->Arg(50)->Arg(64);

void BM_RabiSignal(benchmark::State& state) {
  std::vector<double> p(50);
  for (int n = 0; n < 50; ++n) p[n] = std::exp(n * std::log(13.2) - 13.2 - std::lgamma(n + 1.0));
  const double omega0 = khz_to_rad_per_s(49.88);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rabi_signal(p, omega0, t));
    t += 2.5e-7;
  }
}
BENCHMARK(BM_RabiSignal);

void BM_PreprocessAndDft(benchmark::State& state) {
  SignalTrace tr;
  for (int k = 0; k <= 1200; ++k) {
    tr.times.push_back(us(0.25 * k));
    tr.values.push_back(0.5 + 0.3 * std::cos(2.1e6 * tr.times.back()));
  }
  for (auto _ : state) {
    const Spectrum s = dft_spectrum(preprocess(tr));
    benchmark::DoNotOptimize(s.magnitudes.data());
  }
}
BENCHMARK(BM_PreprocessAndDft)->Unit(benchmark::kMillisecond);

void BM_DisplaceDensityMatrix(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const FieldState cat = cat_state(2.0, 0.0, dim);
  const CMatrix rho = cat.amplitudes() * cat.amplitudes().adjoint();
  for (auto _ : state) {
    const CMatrix d = displace(rho, Complex(-0.6, 0.0));
    benchmark::DoNotOptimize(d.data());
  }
}
BENCHMARK(BM_DisplaceDensityMatrix)->Arg(50)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_WignerPoint(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const FieldState cat = cat_state(std::sqrt(13.2), 0.0, dim);
  const CMatrix rho = cat.amplitudes() * cat.amplitudes().adjoint();
  for (auto _ : state) benchmark::DoNotOptimize(wigner_point(rho, Complex(0.4, 0.2)));
}
BENCHMARK(BM_WignerPoint)->Arg(50)->Arg(64)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace revival

BENCHMARK_MAIN();
