#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "dio/arrays.hpp"
#include "dio/errors.hpp"
#include "dio/moments.hpp"
#include "dio/rng.hpp"
#include "dio/scheme.hpp"
#include "dio/waveform.hpp"
#include "doctest.h"
#include "oracle_utils.hpp"

using namespace dio;

namespace {

// Noiseless streams for every slot of a schedule.
std::array<SampleStream, 3> scheme_streams(const SourceSet& s, const SampleSchedule& sched,
                                           double sigma2 = 0.0, std::uint64_t seed = 0) {
  const auto demands = schedule_demands(sched);
  std::array<SampleStream, 3> out;
  for (int i = 0; i < 3; ++i)
    out[i] = downsample_stream(s, sched.rates[i], demands[i], NoiseSpec{sigma2, seed});
  return out;
}

// Streams for the co-prime pair estimator.
std::pair<SampleStream, SampleStream> pair_streams(const SourceSet& s, i64 m1, i64 m2, i64 K,
                                                   i64 R, double sigma2 = 0.0,
                                                   std::uint64_t seed = 0) {
  const CoprimeDemands d = coprime_demands(m1, m2, K, R);
  return {downsample_stream(s, m1, d.first, NoiseSpec{sigma2, seed}),
          downsample_stream(s, m2, d.second, NoiseSpec{sigma2, seed})};
}

SampleStream conj_stream(SampleStream x) {
  for (auto& [n, v] : x.values) v = std::conj(v);
  return x;
}

// All-ones snapshot rows over the given positions.
SnapshotSet ones_snapshots(std::vector<i64> positions, i64 L) {
  SnapshotSet s;
  s.positions = std::move(positions);
  s.series.assign(s.positions.size(), std::vector<cplx>(static_cast<std::size_t>(L), cplx{1, 0}));
  return s;
}

}  // namespace

TEST_CASE("find_bezout_pair pinned values") {
  CHECK(find_bezout_pair(3, 5, 1, 0) == std::pair<i64, i64>{2, 1});   // 6 - 5 = 1
  CHECK(find_bezout_pair(3, 5, 0, 0) == std::pair<i64, i64>{0, 0});
  CHECK(find_bezout_pair(3, 5, 15, 0) == std::pair<i64, i64>{5, 0});  // 15 = 5*3
}

TEST_CASE("find_bezout_pair preconditions") {
  CHECK_THROWS_AS((void)find_bezout_pair(4, 6, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)find_bezout_pair(3, 5, 16, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)find_bezout_pair(0, 5, 1, 0), std::invalid_argument);
}

TEST_CASE("find_bezout_pair matches exhaustive window search") {
  const std::vector<std::pair<i64, i64>> pairs{{3, 5}, {2, 7}, {4, 9}, {5, 7}, {1, 4}};
  for (const auto& [m1, m2] : pairs) {
    for (i64 r : {i64{0}, i64{1}, i64{5}}) {
      for (i64 k = -m1 * m2; k <= m1 * m2; ++k) {
        const auto brute = oracle::brute_bezout(m1, m2, k, r);
        if (brute) {
          const auto got = find_bezout_pair(m1, m2, k, r);
          CHECK(got == *brute);
          CHECK(got.first * m1 - got.second * m2 == k);
          CHECK(got.first >= r * m2);
          CHECK(got.first < (r + 2) * m2);
          CHECK(got.second >= r * m1);
          CHECK(got.second < (r + 1) * m1);
        } else {
          // The window genuinely holds no pair; the library treats this as
          // an internal contract breach and says so loudly.
          CHECK_THROWS_AS((void)find_bezout_pair(m1, m2, k, r), std::logic_error);
        }
      }
    }
  }
  // Every nonnegative lag up to the product is always in-window.
  for (const auto& [m1, m2] : pairs)
    for (i64 k = 0; k <= m1 * m2; ++k)
      for (i64 r : {i64{0}, i64{3}}) CHECK(oracle::brute_bezout(m1, m2, k, r).has_value());
}

TEST_CASE("second-order estimator is exact for a single source") {
  SourceSet s;
  s.amplitude = {1.0};
  s.omega = {0.5};
  s.phase = {1.234};  // phase cancels in the conjugate product
  for (i64 R : {i64{1}, i64{3}}) {
    const auto [x1, x2] = pair_streams(s, 3, 5, 15, R);
    const LagMomentSequence seq = coprime_second_order(x1, x2, 15, R);
    REQUIRE(seq.value.size() == 15);
    CHECK(seq.order == 2);
    CHECK(seq.first_lag == 1);
    for (i64 k = 1; k <= 15; ++k) {
      const cplx expect = std::polar(1.0, 0.5 * static_cast<double>(k));
      CHECK(std::abs(seq.value[static_cast<std::size_t>(k - 1)] - expect) < 1e-12);
      CHECK(seq.count[static_cast<std::size_t>(k - 1)] == R);
    }
  }
}

TEST_CASE("second-order estimator converges to the two-source closed form") {
  SourceSet s;
  s.amplitude = {1.0, 0.7};
  s.omega = {0.9, -1.7};
  s.phase = {0.3, 2.1};
  const i64 K = 15, R = 10000;
  const auto [x1, x2] = pair_streams(s, 3, 5, K, R);
  const LagMomentSequence seq = coprime_second_order(x1, x2, K, R);
  double amp2 = 0;
  for (double a : s.amplitude) amp2 = std::max(amp2, a * a);
  double worst = 0;
  for (i64 k = 1; k <= K; ++k) {
    const cplx expect = oracle::closed_second(s, k);
    worst = std::max(worst, std::abs(seq.value[static_cast<std::size_t>(k - 1)] - expect));
  }
  CHECK(worst < 10.0 * amp2 / std::sqrt(static_cast<double>(R)));
}

TEST_CASE("second-order edge cases") {
  SourceSet s;
  s.amplitude = {1.0};
  s.omega = {0.5};
  s.phase = {0.0};
  SUBCASE("zero lags yield an empty sequence") {
    const auto [x1, x2] = pair_streams(s, 3, 5, 0, 4);
    const LagMomentSequence seq = coprime_second_order(x1, x2, 0, 4);
    CHECK(seq.value.empty());
    CHECK(seq.count.empty());
  }
  SUBCASE("missing stream index") {
    auto [x1, x2] = pair_streams(s, 3, 5, 5, 4);
    x1.values.erase(x1.values.begin());
    CHECK_THROWS_AS((void)coprime_second_order(x1, x2, 5, 4), IncompleteStream);
  }
  SUBCASE("non-coprime stream rates") {
    const auto [x1, x2] = pair_streams(s, 3, 5, 5, 4);
    SampleStream bad = x1;
    bad.rate = 10;
    CHECK_THROWS_AS((void)coprime_second_order(bad, x2, 5, 4), std::invalid_argument);
  }
}

TEST_CASE("second-order parallel path equals the serial reference bitwise") {
  const SourceSet s = random_sources(3, 0.2, 0.5, 1.5, 21);
  const i64 K = 14, R = 500;
  const auto [x1, x2] = pair_streams(s, 3, 5, K, R, 0.5, 77);
  const LagMomentSequence a = coprime_second_order(x1, x2, K, R);
  const LagMomentSequence b = coprime_second_order_serial(x1, x2, K, R);
  REQUIRE(a.value.size() == b.value.size());
  for (std::size_t i = 0; i < a.value.size(); ++i) {
    CHECK(a.value[i] == b.value[i]);
    CHECK(a.count[i] == b.count[i]);
  }
}

TEST_CASE("third-order estimator is exact for a single source at any snapshot budget") {
  SourceSet s;
  s.amplitude = {1.0};
  s.omega = {0.5};
  s.phase = {0.0};
  for (i64 L : {i64{1}, i64{3}, i64{17}}) {
    const SampleSchedule sched = build_schedule(consecutive_scheme(0), 8, L);
    const auto st = scheme_streams(s, sched);
    const LagMomentSequence seq = diophantine_third_order(st[0], st[1], st[2], sched);
    CHECK(seq.order == 3);
    CHECK(seq.first_lag == 1);
    // Pinned point: lag 2 carries phase w*k = 1.0.
    CHECK(std::abs(seq.value[1] - std::polar(1.0, 1.0)) < 1e-10);
    for (i64 k = 1; k <= 8; ++k) {
      const cplx expect = std::polar(1.0, 0.5 * static_cast<double>(k));
      CHECK(std::abs(seq.value[static_cast<std::size_t>(k - 1)] - expect) < 1e-10);
      CHECK(seq.count[static_cast<std::size_t>(k - 1)] == L);
    }
  }
}

TEST_CASE("third-order estimator carries amplitude cubed and the phase factor") {
  SourceSet s;
  s.amplitude = {2.0};
  s.omega = {0.2};
  s.phase = {M_PI / 3};
  const SampleSchedule sched = build_schedule(consecutive_scheme(0), 6, 5);
  const auto st = scheme_streams(s, sched);
  const LagMomentSequence seq = diophantine_third_order(st[0], st[1], st[2], sched);
  for (i64 k = 1; k <= 6; ++k) {
    const cplx expect = 8.0 * std::polar(1.0, M_PI / 3 + 0.2 * static_cast<double>(k));
    CHECK(std::abs(seq.value[static_cast<std::size_t>(k - 1)] - expect) < 1e-10);
  }
}

TEST_CASE("third-order estimator approaches the three-source closed form") {
  const i64 K = 12, L = 2000;
  for (std::uint64_t seed : {11u, 12u}) {
    const SourceSet s = random_sources(3, 0.4, 0.8, 1.2, seed);
    if (!degeneracy_check(s, consecutive_scheme(0)).pass) continue;
    const SampleSchedule sched = build_schedule(consecutive_scheme(0), K, L);
    const auto st = scheme_streams(s, sched);
    const LagMomentSequence seq = diophantine_third_order(st[0], st[1], st[2], sched);
    double asum = std::accumulate(s.amplitude.begin(), s.amplitude.end(), 0.0);
    double worst = 0;
    for (i64 k = 1; k <= K; ++k)
      worst = std::max(worst,
                       std::abs(seq.value[static_cast<std::size_t>(k - 1)] - oracle::closed_third(s, k)));
    CHECK(worst < 20.0 * asum * asum * asum / std::sqrt(static_cast<double>(L)));
  }
}

TEST_CASE("third-order conjugation symmetry is exact") {
  const SourceSet s = random_sources(3, 0.4, 0.5, 1.5, 5);
  const SampleSchedule sched = build_schedule(consecutive_scheme(0), 10, 50);
  const auto st = scheme_streams(s, sched, 0.3, 123);
  const LagMomentSequence base = diophantine_third_order(st[0], st[1], st[2], sched);
  const LagMomentSequence flipped =
      diophantine_third_order(conj_stream(st[0]), conj_stream(st[1]), conj_stream(st[2]), sched);
  REQUIRE(base.value.size() == flipped.value.size());
  for (std::size_t i = 0; i < base.value.size(); ++i)
    CHECK(flipped.value[i] == std::conj(base.value[i]));
}

TEST_CASE("third-order estimator rejections") {
  SourceSet s;
  s.amplitude = {1.0};
  s.omega = {0.5};
  s.phase = {0.0};
  const SampleSchedule sched = build_schedule(consecutive_scheme(0), 4, 3);
  auto st = scheme_streams(s, sched);
  SUBCASE("stream rate must match the schedule") {
    SampleStream bad = st[0];
    bad.rate = 7;
    CHECK_THROWS_AS((void)diophantine_third_order(bad, st[1], st[2], sched),
                    std::invalid_argument);
  }
  SUBCASE("missing index") {
    st[1].values.erase(st[1].values.begin());
    CHECK_THROWS_AS((void)diophantine_third_order(st[0], st[1], st[2], sched), IncompleteStream);
  }
}

TEST_CASE("third-order parallel path equals the serial reference bitwise") {
  const SourceSet s = random_sources(4, 0.3, 0.5, 1.5, 31);
  const SampleSchedule sched = build_schedule(consecutive_scheme(0), 24, 64);
  const auto st = scheme_streams(s, sched, 1.0, 9);
  const LagMomentSequence a = diophantine_third_order(st[0], st[1], st[2], sched);
  const LagMomentSequence b = diophantine_third_order_serial(st[0], st[1], st[2], sched);
  REQUIRE(a.value.size() == b.value.size());
  for (std::size_t i = 0; i < a.value.size(); ++i) CHECK(a.value[i] == b.value[i]);
}

TEST_CASE("degeneracy_check catches aliasing source triples") {
  const SchemeCoefficients scheme = consecutive_scheme(0);  // a1*M1 = 4, a2*M2 = -9
  SUBCASE("single source always passes") {
    SourceSet s;
    s.amplitude = {1.0};
    s.omega = {0.5};
    s.phase = {0.0};
    CHECK(degeneracy_check(s, scheme).pass);
  }
  SUBCASE("crafted zero combination fails") {
    // 4*(0.9 - 0) - 9*(0.4 - 0) = 0 exactly.
    SourceSet s;
    s.amplitude = {1.0, 1.0, 1.0};
    s.omega = {0.9, 0.4, 0.0};
    s.phase = {0.0, 0.0, 0.0};
    const DegeneracyReport rep = degeneracy_check(s, scheme);
    CHECK_FALSE(rep.pass);
    CHECK(rep.offending == std::array<std::size_t, 3>{0, 1, 2});
  }
  SUBCASE("equal frequencies fail even off the diagonal") {
    SourceSet s;
    s.amplitude = {1.0, 1.0, 1.0};
    s.omega = {0.5, 0.7, 0.5};
    s.phase = {0.0, 0.0, 0.0};
    CHECK_FALSE(degeneracy_check(s, scheme).pass);
  }
  SUBCASE("combinations landing on 2*pi fail") {
    SourceSet s;
    s.amplitude = {1.0, 1.0};
    s.omega = {M_PI / 2 + 0.1, 0.1};
    s.phase = {0.0, 0.0};
    CHECK_FALSE(degeneracy_check(s, scheme).pass);  // 4*(pi/2) reduces to 0 mod 2*pi
  }
  SUBCASE("well-separated draws pass") {
    const SourceSet s = random_sources(5, 0.3, 1.0, 1.0, 2);
    CHECK(degeneracy_check(s, scheme).pass);
  }
}

TEST_CASE("snapshot statistic pinned values") {
  SUBCASE("broadside real envelope gives its cube at any lag") {
    DoaSourceSet s;
    s.src.push_back({cplx{2.0, 0.0}, 0.17, 0.0});
    const SnapshotSet snaps = simulate_snapshots(s, std::vector<i64>{0, 3, 7}, 16, NoiseSpec{0, 0});
    CHECK(std::abs(doa_third_order(snaps, {0, 0, 0}) - cplx{8, 0}) < 1e-10);
    CHECK(std::abs(doa_third_order(snaps, {7, 3, 0}) - cplx{8, 0}) < 1e-10);
  }
  SUBCASE("thirty degrees at co-array lag two negates the unit envelope") {
    DoaSourceSet s;
    s.src.push_back({cplx{1.0, 0.0}, 0.23, 30.0});
    const SnapshotSet snaps = simulate_snapshots(s, std::vector<i64>{0, 2}, 16, NoiseSpec{0, 0});
    CHECK(std::abs(doa_third_order(snaps, {2, 0, 0}) - cplx{-1, 0}) < 1e-10);
  }
  SUBCASE("fewer than two snapshots rejected") {
    DoaSourceSet s;
    s.src.push_back({cplx{1.0, 0.0}, 0.23, 30.0});
    const SnapshotSet snaps = simulate_snapshots(s, std::vector<i64>{0}, 1, NoiseSpec{0, 0});
    CHECK_THROWS_AS((void)doa_third_order(snaps, {0, 0, 0}), std::invalid_argument);
  }
}

TEST_CASE("snapshot statistic approaches the multi-source closed form") {
  DoaSourceSet s;
  s.src.push_back({cplx{1.0, 0.2}, 0.13, -35.0});
  s.src.push_back({cplx{0.6, -0.5}, 0.29, 10.0});
  s.src.push_back({cplx{-0.4, 0.8}, 0.41, 48.0});
  const i64 L = 200;
  const SnapshotSet snaps = simulate_snapshots(s, std::vector<i64>{0, 12, 15}, L, NoiseSpec{0, 0});
  double mag_sum = 0;
  for (const auto& src : s.src) mag_sum += std::abs(src.envelope);
  const i64 g = (12 - 15) + 15;  // = 12
  const cplx got = doa_third_order(snaps, {12, 15, 15});
  CHECK(std::abs(got - oracle::closed_doa(s, g)) <
        20.0 * mag_sum * mag_sum * mag_sum / std::sqrt(static_cast<double>(L)));
}

TEST_CASE("snapshot pair region: count and boundary membership") {
  for (i64 L : {i64{2}, i64{5}, i64{18}, i64{50}}) {
    const i64 expect = (L - 1) * (L - 2) / 2 + (L - 1);
    CHECK(doa_pair_count(L) == expect);
    CHECK(doa_pair_count(L) == L * (L - 1) / 2);
  }

  // Indicator probes on an all-ones snapshot set: zeroing one sample
  // removes exactly the region terms that touch it.
  const i64 L = 12;
  const double pairs = static_cast<double>(doa_pair_count(L));
  SUBCASE("zero-delay boundary n3 = 0 contributes L-1 terms") {
    SnapshotSet snaps = ones_snapshots({0, 1, 2}, L);
    snaps.series[2][0] = cplx{0, 0};  // x_c[0] only appears at n3 = 0
    const cplx v = doa_third_order(snaps, {0, 1, 2});
    CHECK(std::abs(v - cplx{1.0 - static_cast<double>(L - 1) / pairs, 0}) < 1e-12);
  }
  SUBCASE("n1 = 0 is excluded from the region") {
    SnapshotSet snaps = ones_snapshots({0, 1, 2}, L);
    snaps.series[0][0] = cplx{0, 0};  // x_a[0] would only appear at n1 = 0
    const cplx v = doa_third_order(snaps, {0, 1, 2});
    CHECK(std::abs(v - cplx{1, 0}) < 1e-12);
  }
  SUBCASE("the n1 + n3 = L-1 diagonal is included") {
    SnapshotSet snaps = ones_snapshots({0, 1, 2}, L);
    snaps.series[1][static_cast<std::size_t>(L - 1)] = cplx{0, 0};  // x_b[L-1]
    const cplx v = doa_third_order(snaps, {0, 1, 2});
    CHECK(std::abs(v - cplx{1.0 - static_cast<double>(L - 1) / pairs, 0}) < 1e-12);
  }
}

TEST_CASE("co-array sequence: single source is exact on every covered lag") {
  const ArrayGeometry geom = design_diophantine_array(4, 3, 5);
  DoaSourceSet s;
  s.src.push_back({cplx{0.9, 0.4}, 0.19, 24.0});
  const SnapshotSet snaps = simulate_snapshots(s, geom.positions, 24, NoiseSpec{0, 0});
  const i64 max_lag = 60;
  const LagMomentSequence seq = doa_lag_sequence(snaps, geom, max_lag);
  REQUIRE(seq.value.size() == static_cast<std::size_t>(max_lag + 1));
  CHECK(seq.first_lag == 0);
  CHECK(seq.order == 3);
  const cplx s3 = std::norm(s.src[0].envelope) * s.src[0].envelope;
  const double sth = std::sin(24.0 * M_PI / 180.0);
  for (i64 g = 0; g <= max_lag; ++g) {
    REQUIRE(seq.count[static_cast<std::size_t>(g)] > 0);  // full guaranteed span coverage
    const cplx expect = s3 * std::polar(1.0, M_PI * static_cast<double>(g) * sth);
    CHECK(std::abs(seq.value[static_cast<std::size_t>(g)] - expect) < 1e-9);
  }
}

TEST_CASE("co-array sequence: counts mirror the plain-statistic witness lists") {
  const ArrayGeometry geom = design_diophantine_array(4, 3, 5);
  DoaSourceSet s;
  s.src.push_back({cplx{1.0, 0.0}, 0.31, -18.0});
  const i64 L = 6;
  const SnapshotSet snaps = simulate_snapshots(s, geom.positions, L, NoiseSpec{0, 0});
  const i64 max_lag = 134;  // past the guaranteed span, into gap territory
  const LagMomentSequence seq = doa_lag_sequence(snaps, geom, max_lag);
  int absent = 0;
  for (i64 g = 0; g <= max_lag; ++g) {
    i64 plain = 0;
    try {
      for (const auto& w : lag_triples(geom, g)) plain += w.conjugated() ? 0 : 1;
    } catch (const NotCovered&) {
    }
    CHECK(seq.count[static_cast<std::size_t>(g)] == plain * doa_pair_count(L));
    if (plain == 0) {
      ++absent;
      CHECK(seq.value[static_cast<std::size_t>(g)] == cplx{0, 0});
    }
  }
  CHECK(absent > 0);  // beyond the guaranteed span some lags really are absent
}

TEST_CASE("co-array sequence parallel path equals the serial reference bitwise") {
  const ArrayGeometry geom = design_diophantine_array(4, 3, 5);
  DoaSourceSet s;
  s.src.push_back({cplx{1.0, 0.2}, 0.13, -35.0});
  s.src.push_back({cplx{0.6, -0.5}, 0.29, 10.0});
  const SnapshotSet snaps = simulate_snapshots(s, geom.positions, 32, NoiseSpec{0.8, 523});
  const LagMomentSequence a = doa_lag_sequence(snaps, geom, 60);
  const LagMomentSequence b = doa_lag_sequence_serial(snaps, geom, 60);
  REQUIRE(a.value.size() == b.value.size());
  for (std::size_t i = 0; i < a.value.size(); ++i) {
    CHECK(a.value[i] == b.value[i]);
    CHECK(a.count[i] == b.count[i]);
  }
}

TEST_CASE("lag sequence CSV serialization") {
  LagMomentSequence seq;
  seq.order = 2;
  seq.first_lag = 1;
  seq.value = {cplx{1.0, -0.5}, cplx{0.25, 0.0}};
  seq.count = {4, 4};
  std::ostringstream os;
  write_csv(seq, os);
  CHECK(os.str() == "lag,re,im,count\n1,1,-0.5,4\n2,0.25,0,4\n");
}
