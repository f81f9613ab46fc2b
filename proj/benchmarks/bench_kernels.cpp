// Compares the serial reference implementations of the data-parallel
// kernels against their OpenMP versions and prints the timings.

#include <chrono>
#include <cstdio>
#include <vector>

#include "hardyp/ball_shooting.hpp"
#include "hardyp/exponents.hpp"
#include "hardyp/ground_state.hpp"

using namespace hardyp;

namespace {

template <class F>
double time_of(F&& f, int reps = 3) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::fmin(best, std::chrono::duration<double>(
                                   std::chrono::steady_clock::now() - t0)
                                   .count());
    }
    return best;
}

void row(const char* name, double serial, double openmp) {
    std::printf("%-24s serial %8.4fs   openmp %8.4fs   speedup %5.2fx\n", name,
                serial, openmp, serial / openmp);
}

} // namespace

int main() {
    Params P;
    P.N = 5;
    P.p = 3.0;
    P.mu = -2.0;
    const Exponents E = derive(P);

    const double ts = time_of([&] { build_h_table(P, E, 1e-12, 30.0, Exec::serial); });
    const double tp = time_of([&] { build_h_table(P, E, 1e-12, 30.0, Exec::openmp); });
    row("h-table build", ts, tp);

    HTable table = build_h_table(P, E, 1e-12, 16.0, Exec::serial);
    GridSpec grid;
    grid.samples = 100001;
    const double ss = time_of([&] { sample_profile(table, grid, Exec::serial); });
    const double sp = time_of([&] { sample_profile(table, grid, Exec::openmp); });
    row("profile sampling", ss, sp);

    Params B;
    B.N = 5;
    B.p = 2.0;
    B.mu = 0.5;
    B.lambda = 5.0;
    const Exponents EB = derive(B);
    std::vector<double> Cs(64);
    for (std::size_t i = 0; i < Cs.size(); ++i)
        Cs[i] = 0.03 * std::pow(1e6, i / 63.0);
    ShootOptions opt;
    const double bs =
        time_of([&] { scan_shoot(Cs, B, EB, opt, Exec::serial); });
    const double bp =
        time_of([&] { scan_shoot(Cs, B, EB, opt, Exec::openmp); });
    row("shooting scan", bs, bp);
    return 0;
}
