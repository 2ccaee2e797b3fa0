#include <complex>
#include <cstdio>
#include <vector>

#include <omp.h>

#include "dio/arrays.hpp"
#include "dio/moments.hpp"
#include "dio/scheme.hpp"
#include "dio/spectral.hpp"
#include "dio/waveform.hpp"

using namespace dio;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    double t0 = omp_get_wtime();
    f();
    double dt = (omp_get_wtime() - t0) * 1e3;
    if (dt < best) best = dt;
  }
  return best;
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-22s %10.2f ms %10.2f ms %8.2fx   %s\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms, identical ? "bitwise-equal" : "MISMATCH");
}

bool same(const LagMomentSequence& a, const LagMomentSequence& b) {
  if (a.value.size() != b.value.size()) return false;
  for (std::size_t i = 0; i < a.value.size(); ++i)
    if (a.value[i] != b.value[i] || a.count[i] != b.count[i]) return false;
  return true;
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-22s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  // Shared scenario: five noisy spectral lines.
  SourceSet src = random_sources(5, 0.4, 0.8, 1.2, 42);
  NoiseSpec noise{0.5, 7};

  {
    SchemeCoefficients s = consecutive_scheme(0);
    SampleSchedule sched = build_schedule(s, 256, 512);
    auto dem = schedule_demands(sched);
    SampleStream x1 = downsample_stream(src, s.rates[0], dem[0], noise);
    SampleStream x2 = downsample_stream(src, s.rates[1], dem[1], noise);
    SampleStream x3 = downsample_stream(src, s.rates[2], dem[2], noise);
    LagMomentSequence a, b;
    double ts = best_of(3, [&] { a = diophantine_third_order_serial(x1, x2, x3, sched); });
    double tp = best_of(3, [&] { b = diophantine_third_order(x1, x2, x3, sched); });
    report("third-order moments", ts, tp, same(a, b));
  }

  {
    i64 K = 15, R = 20000;
    CoprimeDemands cd = coprime_demands(3, 5, K, R);
    SampleStream xa = downsample_stream(src, 3, cd.first, noise);
    SampleStream xb = downsample_stream(src, 5, cd.second, noise);
    LagMomentSequence a, b;
    double ts = best_of(3, [&] { a = coprime_second_order_serial(xa, xb, K, R); });
    double tp = best_of(3, [&] { b = coprime_second_order(xa, xb, K, R); });
    report("second-order moments", ts, tp, same(a, b));
  }

  {
    ArrayGeometry geom = design_diophantine_array(4, 3, 5);
    DoaSourceSet ds;
    ds.src = {{{1.0, 0.3}, 0.11, -20.0}, {{0.7, -0.4}, 0.23, 5.0}, {{1.1, 0.2}, 0.37, 40.0}};
    SnapshotSet snaps = simulate_snapshots(ds, geom.positions, 96, noise);
    LagMomentSequence a, b;
    double ts = best_of(3, [&] { a = doa_lag_sequence_serial(snaps, geom, 60); });
    double tp = best_of(3, [&] { b = doa_lag_sequence(snaps, geom, 60); });
    report("bearing lag sequence", ts, tp, same(a, b));
  }

  {
    SchemeCoefficients s = consecutive_scheme(0);
    SampleSchedule sched = build_schedule(s, 128, 64);
    auto dem = schedule_demands(sched);
    SampleStream x1 = downsample_stream(src, s.rates[0], dem[0], noise);
    SampleStream x2 = downsample_stream(src, s.rates[1], dem[1], noise);
    SampleStream x3 = downsample_stream(src, s.rates[2], dem[2], noise);
    LagMomentSequence seq = diophantine_third_order(x1, x2, x3, sched);
    Eigen::MatrixXcd basis = noise_subspace(build_hankel(seq, 65), 5);
    std::vector<double> grid(16384);
    for (std::size_t i = 0; i < grid.size(); ++i)
      grid[i] = -3.14159265358979 + 6.2831853071795865 * double(i + 1) / double(grid.size());
    std::vector<double> pa, pb;
    double ts = best_of(3, [&] { pa = music_power_serial(basis, grid); });
    double tp = best_of(3, [&] { pb = music_power(basis, grid); });
    report("subspace scan", ts, tp, pa == pb);
  }

  return 0;
}
