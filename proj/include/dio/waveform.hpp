#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "dio/intmath.hpp"

namespace dio {

using cplx = std::complex<double>;

// Sum-of-exponentials source model: x(t) = sum_i A_i exp(j(w_i t + phi_i))
// with amplitudes A_i > 0, frequencies in (-pi, pi] radians per tick of the
// fast clock and phases in [0, 2pi).
struct SourceSet {
  std::vector<double> amplitude;
  std::vector<double> omega;
  std::vector<double> phase;

  std::size_t size() const { return amplitude.size(); }
};

// Additive circularly symmetric complex white Gaussian noise.  sigma2 == 0
// turns noise off entirely; seed keys the deterministic noise substreams.
struct NoiseSpec {
  double sigma2 = 0.0;
  std::uint64_t seed = 0;
};

// Output of one down-sampler: values indexed by the slow-clock sample
// number n, so the underlying waveform was read at tick n * rate.  Only the
// demanded indices are materialized.
struct SampleStream {
  i64 rate = 1;
  std::unordered_map<i64, cplx> values;

  const cplx& at(i64 n) const;  // throws IncompleteStream on a miss
};

// Draws d sources with pairwise circular frequency separation >= min_sep,
// amplitudes uniform on [amp_lo, amp_hi] and uniform phases.  Frequencies
// are redrawn as a block until the separation holds; throws
// std::runtime_error if the rejection loop fails to land within its cap.
SourceSet random_sources(std::size_t d, double min_sep, double amp_lo, double amp_hi,
                         std::uint64_t seed);

// Noise-free waveform value at fast-clock tick t.
cplx sample_at(const SourceSet& s, i64 t);

// Materializes the demanded slow-clock indices (each must be >= 0) of one
// down-sampler.  Noise is keyed by (seed, rate, index), so two streams at
// different rates get independent noise while repeated demands of the same
// index always see the same value.
SampleStream downsample_stream(const SourceSet& s, i64 rate, std::span<const i64> indices,
                               const NoiseSpec& noise);

// Narrowband far-field source for the array side: complex envelope times a
// slow temporal rotation, impinging from theta degrees off broadside.
struct DoaSource {
  cplx envelope;     // s_i
  double freq;       // cycles per snapshot, in (0, 0.5)
  double theta_deg;  // direction of arrival
};

struct DoaSourceSet {
  std::vector<DoaSource> src;

  std::size_t size() const { return src.size(); }
};

// One sensor reading: sum_i s_i exp(j pi d sin(theta_i)) exp(j 2 pi f_i n)
// plus noise keyed by (seed, position, n).  Positions are in units of the
// common element spacing (half wavelength).
cplx sensor_snapshot(const DoaSourceSet& s, i64 position, i64 n, const NoiseSpec& noise);

// L consecutive snapshots (n = 0..L-1) for each sensor position.
struct SnapshotSet {
  std::vector<i64> positions;               // sorted ascending
  std::vector<std::vector<cplx>> series;    // one row per position
  i64 snapshots() const { return series.empty() ? 0 : static_cast<i64>(series[0].size()); }

  const std::vector<cplx>& at_position(i64 d) const;  // throws IncompleteStream
};

SnapshotSet simulate_snapshots(const DoaSourceSet& s, std::span<const i64> positions, i64 L,
                               const NoiseSpec& noise);

}  // namespace dio
