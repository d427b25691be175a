#include <admmrate/bounds.hpp>
#include <admmrate/engine.hpp>
#include <admmrate/lasso.hpp>
#include <admmrate/locus.hpp>
#include <admmrate/rng.hpp>

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

using namespace admmrate;

namespace {

Matrix random_orthogonal(Rng& rng, Eigen::Index n) {
    Matrix g(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) g(r, c) = rng.normal();
    Eigen::HouseholderQR<Matrix> qr(g);
    return qr.householderQ() * Matrix::Identity(n, n);
}

void bench_step_dr(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    const LassoInstance inst =
        gen_lasso(static_cast<int>(2 * n), static_cast<int>(n), 5, 1.0, 7);
    const SplitProblem p = inst.problem();
    AdmmEngine engine(p);
    AdmmConfig cfg;
    cfg.q = 0.9;
    Vector z = Vector::Ones(p.m());
    for (auto _ : state) {
        z = engine.step_dr(cfg, z);
        benchmark::DoNotOptimize(z.data());
    }
}
BENCHMARK(bench_step_dr)->Arg(32)->Arg(128)->Arg(512);

void bench_mu_joint(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    const LassoInstance inst =
        gen_lasso(static_cast<int>(2 * n), static_cast<int>(n), 5, 1.0, 7);
    const BoundSpectrum bs = bound_spectrum(build_spectral_model(inst.problem()));
    for (auto _ : state) {
        const MuResult mu = mu_joint(bs, 0.9);
        benchmark::DoNotOptimize(mu.value);
    }
}
BENCHMARK(bench_mu_joint)->Arg(8)->Arg(12)->Arg(24);

void bench_eig_formula(benchmark::State& state) {
    const auto m = static_cast<Eigen::Index>(state.range(0));
    Rng rng(7);
    LevelSpec ls;
    ls.p_bar1 = 0.8; ls.n_bar1 = 0.6; ls.p_bar2 = 1.1; ls.n_bar2 = 0.4;
    ls.p1 = m / 2; ls.n1 = m - ls.p1;
    ls.p2 = m / 3; ls.n2 = m - ls.p2;
    ls.G = random_orthogonal(rng, m);
    for (auto _ : state) {
        const auto eigs = theorem1_eigs(ls);
        benchmark::DoNotOptimize(eigs.data());
    }
}
BENCHMARK(bench_eig_formula)->Arg(16)->Arg(64)->Arg(256);

} // namespace

BENCHMARK_MAIN();
