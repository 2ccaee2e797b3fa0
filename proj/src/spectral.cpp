#include "dio/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dio/errors.hpp"

namespace dio {

namespace {
constexpr double kPi = 3.141592653589793238462643383279;
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

HankelMatrix build_hankel(const LagMomentSequence& seq, i64 rows) {
  i64 n = static_cast<i64>(seq.value.size());
  if (n < 1) throw std::invalid_argument("build_hankel: empty sequence");
  if (rows < 1 || rows > n) throw std::invalid_argument("build_hankel: rows outside [1, n]");
  for (i64 c : seq.count)
    if (c <= 0) throw std::invalid_argument("build_hankel: sequence has unestimated lags");

  HankelMatrix h;
  h.first_lag = seq.first_lag;
  i64 cols = n - rows + 1;
  h.m.resize(rows, cols);
  for (i64 p = 0; p < rows; ++p)
    for (i64 q = 0; q < cols; ++q) h.m(p, q) = seq.value[static_cast<std::size_t>(p + q)];
  return h;
}

Eigen::MatrixXcd noise_subspace(const HankelMatrix& h, int model_order) {
  i64 P = h.m.rows(), Q = h.m.cols();
  if (model_order < 0 || model_order >= std::min(P, Q))
    throw std::invalid_argument("noise_subspace: model order must be in [0, min(rows, cols))");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h.m, Eigen::ComputeFullU);
  return svd.matrixU().rightCols(P - model_order);
}

namespace {

// Shared by the serial and OpenMP scans so both produce identical bits.
double power_at(const Eigen::MatrixXcd& basis, double w, std::vector<cplx>& v) {
  const i64 P = basis.rows();
  const i64 R = basis.cols();
  const double scale = 1.0 / std::sqrt(static_cast<double>(P));
  for (i64 p = 0; p < P; ++p) v[static_cast<std::size_t>(p)] = std::polar(scale, w * p);
  double acc = 0;
  for (i64 r = 0; r < R; ++r) {
    cplx s = 0;
    for (i64 p = 0; p < P; ++p) s += std::conj(basis(p, r)) * v[static_cast<std::size_t>(p)];
    acc += std::norm(s);
  }
  return 1.0 / std::max(acc, std::numeric_limits<double>::min());
}

void check_basis(const Eigen::MatrixXcd& basis) {
  if (basis.rows() < 1) throw std::invalid_argument("music_power: empty basis");
}

}  // namespace

std::vector<double> music_power(const Eigen::MatrixXcd& basis, std::span<const double> omegas) {
  check_basis(basis);
  std::vector<double> out(omegas.size());
#pragma omp parallel
  {
    std::vector<cplx> v(static_cast<std::size_t>(basis.rows()));
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(omegas.size()); ++i)
      out[static_cast<std::size_t>(i)] = power_at(basis, omegas[static_cast<std::size_t>(i)], v);
  }
  return out;
}

std::vector<double> music_power_serial(const Eigen::MatrixXcd& basis,
                                       std::span<const double> omegas) {
  check_basis(basis);
  std::vector<double> out(omegas.size());
  std::vector<cplx> v(static_cast<std::size_t>(basis.rows()));
  for (std::size_t i = 0; i < omegas.size(); ++i) out[i] = power_at(basis, omegas[i], v);
  return out;
}

Pseudospectrum frequency_spectrum(const Eigen::MatrixXcd& basis, std::size_t points) {
  if (points < 2) throw std::invalid_argument("frequency_spectrum: need at least two points");
  Pseudospectrum ps;
  ps.circular = true;
  ps.period = kTwoPi;
  ps.grid.resize(points);
  for (std::size_t i = 0; i < points; ++i)
    ps.grid[i] = -kPi + kTwoPi * static_cast<double>(i + 1) / static_cast<double>(points);
  ps.power = music_power(basis, ps.grid);
  return ps;
}

Pseudospectrum doa_spectrum(const Eigen::MatrixXcd& basis, double step_deg) {
  if (!(step_deg > 0) || step_deg > 45)
    throw std::invalid_argument("doa_spectrum: step must be in (0, 45] degrees");
  Pseudospectrum ps;
  ps.circular = false;
  ps.period = 0.0;
  for (double t = -90.0; t <= 90.0 + 1e-9; t += step_deg) ps.grid.push_back(t);
  std::vector<double> omegas(ps.grid.size());
  for (std::size_t i = 0; i < ps.grid.size(); ++i)
    omegas[i] = kPi * std::sin(ps.grid[i] * kPi / 180.0);
  ps.power = music_power(basis, omegas);
  return ps;
}

PeakSet pick_peaks(const Pseudospectrum& ps, std::size_t d) {
  const std::size_t n = ps.grid.size();
  if (d < 1) throw std::invalid_argument("pick_peaks: model order must be >= 1");
  if (d > n) throw std::invalid_argument("pick_peaks: model order exceeds grid size");
  if (n < 3) throw std::invalid_argument("pick_peaks: grid too small");

  std::vector<std::size_t> cand;
  const std::size_t lo = ps.circular ? 0 : 1;
  const std::size_t hi = ps.circular ? n : n - 1;
  for (std::size_t i = lo; i < hi; ++i) {
    std::size_t prev = (i + n - 1) % n;
    std::size_t next = (i + 1) % n;
    if (ps.power[i] > ps.power[prev] && ps.power[i] > ps.power[next]) cand.push_back(i);
  }
  if (cand.size() < d)
    throw DegenerateSpectrum("pseudospectrum exposes " + std::to_string(cand.size()) +
                             " maxima, model order is " + std::to_string(d));
  std::sort(cand.begin(), cand.end(), [&](std::size_t x, std::size_t y) {
    if (ps.power[x] != ps.power[y]) return ps.power[x] > ps.power[y];
    return x < y;
  });
  cand.resize(d);

  const double step =
      ps.circular ? ps.period / static_cast<double>(n) : ps.grid[1] - ps.grid[0];
  PeakSet out;
  out.locations.reserve(d);
  for (std::size_t i : cand) {
    std::size_t prev = (i + n - 1) % n;
    std::size_t next = (i + 1) % n;
    double a = std::log(ps.power[prev]);
    double b = std::log(ps.power[i]);
    double c = std::log(ps.power[next]);
    double denom = a - 2 * b + c;
    double delta = denom < 0 ? 0.5 * (a - c) / denom : 0.0;  // |delta| < 1/2 at a strict max
    double loc = ps.grid[i] + delta * step;
    if (ps.circular) {
      loc = std::remainder(loc, ps.period);
      if (loc <= -0.5 * ps.period) loc += ps.period;
    }
    out.locations.push_back(loc);
  }
  std::sort(out.locations.begin(), out.locations.end());
  return out;
}

double rmse_matched(std::vector<double> estimates, std::vector<double> truth, double period) {
  if (estimates.size() != truth.size())
    throw std::invalid_argument("rmse_matched: size mismatch");
  const std::size_t n = estimates.size();
  if (n == 0) return 0.0;
  std::sort(estimates.begin(), estimates.end());
  std::sort(truth.begin(), truth.end());

  auto mse_for = [&](std::size_t shift) {
    double acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double e = estimates[(i + shift) % n] - truth[i];
      if (period > 0) e = std::remainder(e, period);
      acc += e * e;
    }
    return acc / static_cast<double>(n);
  };

  if (period <= 0) return std::sqrt(mse_for(0));
  // On the circle the sorted order is only defined up to rotation.
  double best = mse_for(0);
  for (std::size_t s = 1; s < n; ++s) best = std::min(best, mse_for(s));
  return std::sqrt(best);
}

}  // namespace dio
