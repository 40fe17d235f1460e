#include <benchmark/benchmark.h>

#include "isofield/analysis.hpp"

using namespace isofield;

namespace {

void BM_WignerDStack(benchmark::State& state) {
    const int lmax = static_cast<int>(state.range(0));
    double beta = 0.1;
    for (auto _ : state) {
        beta += 1e-6;  // defeat value caching
        benchmark::DoNotOptimize(wigner_d_stack(lmax, beta));
    }
    state.SetComplexityN(lmax);
}
BENCHMARK(BM_WignerDStack)->Arg(4)->Arg(8)->Arg(16)->Arg(32)->Arg(64)->Complexity();

void BM_HaarQuadratureSO3(benchmark::State& state) {
    const int band = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(haar_quadrature(Group::so3(), band));
}
BENCHMARK(BM_HaarQuadratureSO3)->Arg(4)->Arg(8);

void BM_TransformPlanBuild(benchmark::State& state) {
    const int band = static_cast<int>(state.range(0));
    const auto rule = haar_quadrature(Group::so3(), band);
    const auto labels = labels_up_to_band(Group::so3(), band);
    for (auto _ : state) {
        TransformPlan plan(rule, labels);
        benchmark::DoNotOptimize(plan.coeff_size());
    }
}
BENCHMARK(BM_TransformPlanBuild)->Arg(4)->Arg(8);

void BM_SynthesizeAnalyzeRoundTrip(benchmark::State& state) {
    const int band = static_cast<int>(state.range(0));
    const auto rule = haar_quadrature(Group::so3(), band);
    const auto labels = labels_up_to_band(Group::so3(), band);
    TransformPlan plan(rule, labels);
    const auto spec = PowerSpectrum::geometric(DomainSpec::so3(), band, 0.5);
    const auto sample = sample_gaussian(spec, 1, 0);
    for (auto _ : state) {
        const Eigen::VectorXcd values = plan.synthesize(sample.coeffs);
        benchmark::DoNotOptimize(plan.analyze_values(values));
    }
}
BENCHMARK(BM_SynthesizeAnalyzeRoundTrip)->Arg(4)->Arg(8);

void BM_SampleGaussian(benchmark::State& state) {
    const int band = static_cast<int>(state.range(0));
    const auto spec = PowerSpectrum::geometric(DomainSpec::so3(), band, 0.5);
    std::uint64_t replicate = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_gaussian(spec, 42, replicate++));
}
BENCHMARK(BM_SampleGaussian)->Arg(4)->Arg(8);

void BM_CharacterSO3(benchmark::State& state) {
    const int ell = static_cast<int>(state.range(0));
    double omega = 0.0;
    for (auto _ : state) {
        omega += 1e-5;
        benchmark::DoNotOptimize(so3_character(ell, omega));
    }
}
BENCHMARK(BM_CharacterSO3)->Arg(8)->Arg(64);

void BM_ProjectConvolution(benchmark::State& state) {
    const int band = static_cast<int>(state.range(0));
    const auto rule = haar_quadrature(Group::so3(), band);
    const auto labels = labels_up_to_band(Group::so3(), band);
    TransformPlan plan(rule, labels);
    const auto spec = PowerSpectrum::geometric(DomainSpec::so3(), band, 0.5);
    const Eigen::VectorXcd values = plan.synthesize(sample_gaussian(spec, 7, 0).coeffs);
    for (auto _ : state)
        benchmark::DoNotOptimize(project_convolution(values, rule, {Group::so3(), 1}));
}
BENCHMARK(BM_ProjectConvolution)->Arg(2)->Arg(4);

void BM_SphHarmonic(benchmark::State& state) {
    const int ell = static_cast<int>(state.range(0));
    SpherePoint x(1.1, 0.3);
    for (auto _ : state) {
        x.phi += 1e-6;
        benchmark::DoNotOptimize(sph_harmonic(ell, ell / 2, x));
    }
}
BENCHMARK(BM_SphHarmonic)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
