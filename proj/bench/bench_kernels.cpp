// Kernel benchmark: serial reference vs OpenMP execution of the three hot
// paths. Results must agree bit for bit; the table reports the speedup.
// --quick shrinks the workloads to a smoke-test scale.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

#include "hyperstat/crofton.hpp"
#include "hyperstat/energetics.hpp"
#include "hyperstat/generators.hpp"
#include "hyperstat/parallel.hpp"
#include "hyperstat/sample.hpp"

using namespace hyperstat;
using parallel::Mode;

namespace {

template <class Fn>
double time_of(Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, double serial_ms, double openmp_ms, bool identical) {
    std::printf("%-28s %10.1f ms %10.1f ms   x%.2f   %s\n", name, serial_ms, openmp_ms, serial_ms / openmp_ms,
                identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    std::printf("threads available: %d\n", parallel::max_threads());
    std::printf("%-28s %13s %13s %8s\n", "kernel", "serial", "openmp", "speedup");
    int bad = 0;

    {
        const auto sampler = crofton::CroftonSampler::make(2, 1.5, quick ? 20000 : 2000000, 1);
        auto f = [](const crofton::HalfSpace& s) { return s.t() > 0 ? std::tanh(s.t()) : 0.0; };
        crofton::SeparationEstimate a, b;
        const double ts = time_of([&] { a = crofton::integrate(sampler, Mode::Serial, f); });
        const double tp = time_of([&] { b = crofton::integrate(sampler, Mode::OpenMP, f); });
        row("crofton integrate", ts, tp, a.value == b.value && a.std_error == b.std_error);
        bad += a.value != b.value;
    }
    {
        const auto sample = gen::uniform_ball(3, quick ? 300 : 1500, 1.5, 2);
        Eigen::MatrixXd a, b;
        const double ts = time_of([&] { a = metric::pairwise_distances(sample, Mode::Serial); });
        const double tp = time_of([&] { b = metric::pairwise_distances(sample, Mode::OpenMP); });
        row("pairwise distances", ts, tp, a == b);
        bad += !(a == b);
    }
    {
        const auto [x, y] = gen::two_ball(2, quick ? 60 : 200, 1.0, 1.4, 3);
        energetics::PermutationTestResult a, b;
        const int perms = quick ? 99 : 2000;
        const double ts = time_of([&] { a = energetics::energy_perm_test(x, y, perms, 4, energetics::Estimator::VStat, Mode::Serial); });
        const double tp = time_of([&] { b = energetics::energy_perm_test(x, y, perms, 4, energetics::Estimator::VStat, Mode::OpenMP); });
        row("energy permutation test", ts, tp, a.p_value == b.p_value && a.statistic == b.statistic);
        bad += a.p_value != b.p_value;
    }
    return bad;
}
