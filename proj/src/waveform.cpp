#include "dio/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dio/errors.hpp"
#include "dio/rng.hpp"

namespace dio {

namespace {
constexpr double kPi = 3.141592653589793238462643383279;
constexpr double kTwoPi = 6.283185307179586476925286766559;

double circ_dist(double a, double b) {
  double d = std::abs(a - b);
  d = std::fmod(d, kTwoPi);
  return std::min(d, kTwoPi - d);
}
}  // namespace

const cplx& SampleStream::at(i64 n) const {
  auto it = values.find(n);
  if (it == values.end())
    throw IncompleteStream("stream at rate " + std::to_string(rate) +
                           " holds no sample for index " + std::to_string(n));
  return it->second;
}

SourceSet random_sources(std::size_t d, double min_sep, double amp_lo, double amp_hi,
                         std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("random_sources: need at least one source");
  if (min_sep < 0) throw std::invalid_argument("random_sources: min_sep must be >= 0");
  if (!(amp_lo > 0) || amp_hi < amp_lo)
    throw std::invalid_argument("random_sources: need 0 < amp_lo <= amp_hi");
  // A single source has no pair to separate, so any min_sep is fine.
  if (d > 1 && static_cast<double>(d) * min_sep >= kTwoPi)
    throw std::invalid_argument("random_sources: d * min_sep leaves no room on the circle");

  Rng rng(mix_key(seed, rtag::source_draw));
  SourceSet s;
  s.omega.resize(d);

  constexpr int kMaxTries = 100000;
  bool placed = false;
  for (int t = 0; t < kMaxTries && !placed; ++t) {
    for (std::size_t i = 0; i < d; ++i) s.omega[i] = kPi - kTwoPi * rng.uniform();  // (-pi, pi]
    placed = true;
    for (std::size_t i = 0; i < d && placed; ++i)
      for (std::size_t j = i + 1; j < d; ++j)
        if (circ_dist(s.omega[i], s.omega[j]) < min_sep) {
          placed = false;
          break;
        }
  }
  if (!placed) throw std::runtime_error("random_sources: separation constraint not met");

  s.amplitude.resize(d);
  s.phase.resize(d);
  for (std::size_t i = 0; i < d; ++i) s.amplitude[i] = rng.uniform(amp_lo, amp_hi);
  for (std::size_t i = 0; i < d; ++i) s.phase[i] = kTwoPi * rng.uniform();
  return s;
}

cplx sample_at(const SourceSet& s, i64 t) {
  cplx acc = 0;
  double td = static_cast<double>(t);
  for (std::size_t i = 0; i < s.size(); ++i)
    acc += std::polar(s.amplitude[i], s.omega[i] * td + s.phase[i]);
  return acc;
}

SampleStream downsample_stream(const SourceSet& s, i64 rate, std::span<const i64> indices,
                               const NoiseSpec& noise) {
  if (rate < 1) throw std::invalid_argument("downsample_stream: rate must be positive");
  if (noise.sigma2 < 0) throw std::invalid_argument("downsample_stream: sigma2 must be >= 0");
  SampleStream out;
  out.rate = rate;
  out.values.reserve(indices.size());
  for (i64 n : indices) {
    if (n < 0) throw std::invalid_argument("downsample_stream: indices must be >= 0");
    cplx v = sample_at(s, checked_mul(n, rate));
    if (noise.sigma2 > 0) {
      Rng r(mix_key(noise.seed, rtag::stream_noise, static_cast<u64>(rate), static_cast<u64>(n)));
      v += r.cgauss(noise.sigma2);
    }
    out.values[n] = v;
  }
  return out;
}

cplx sensor_snapshot(const DoaSourceSet& s, i64 position, i64 n, const NoiseSpec& noise) {
  if (noise.sigma2 < 0) throw std::invalid_argument("sensor_snapshot: sigma2 must be >= 0");
  cplx acc = 0;
  double pd = static_cast<double>(position);
  double nd = static_cast<double>(n);
  for (const DoaSource& src : s.src) {
    double phase = kPi * pd * std::sin(src.theta_deg * kPi / 180.0) + kTwoPi * src.freq * nd;
    acc += src.envelope * std::polar(1.0, phase);
  }
  if (noise.sigma2 > 0) {
    Rng r(mix_key(noise.seed, rtag::sensor_noise, static_cast<u64>(position), static_cast<u64>(n)));
    acc += r.cgauss(noise.sigma2);
  }
  return acc;
}

const std::vector<cplx>& SnapshotSet::at_position(i64 d) const {
  auto it = std::lower_bound(positions.begin(), positions.end(), d);
  if (it == positions.end() || *it != d)
    throw IncompleteStream("no sensor at position " + std::to_string(d));
  return series[static_cast<std::size_t>(it - positions.begin())];
}

SnapshotSet simulate_snapshots(const DoaSourceSet& s, std::span<const i64> positions, i64 L,
                               const NoiseSpec& noise) {
  if (L < 1) throw std::invalid_argument("simulate_snapshots: L must be >= 1");
  SnapshotSet out;
  out.positions.assign(positions.begin(), positions.end());
  std::sort(out.positions.begin(), out.positions.end());
  out.positions.erase(std::unique(out.positions.begin(), out.positions.end()),
                      out.positions.end());
  out.series.resize(out.positions.size());
  for (std::size_t p = 0; p < out.positions.size(); ++p) {
    out.series[p].resize(static_cast<std::size_t>(L));
    for (i64 n = 0; n < L; ++n)
      out.series[p][static_cast<std::size_t>(n)] = sensor_snapshot(s, out.positions[p], n, noise);
  }
  return out;
}

}  // namespace dio
