#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "dio/intmath.hpp"
#include "dio/moments.hpp"

namespace dio {

// Hankel lift of a consecutive-lag moment sequence:
// m(p, q) = seq.value[p + q] for p in [0, rows), q in [0, n - rows + 1).
struct HankelMatrix {
  Eigen::MatrixXcd m;
  i64 first_lag = 0;
};

// Requires 1 <= rows <= n and a gap-free sequence (every count positive).
HankelMatrix build_hankel(const LagMomentSequence& seq, i64 rows);

// Left singular vectors beyond the model order d, i.e. the orthogonal
// complement of the signal subspace.  Requires 0 <= d < min(rows, cols).
Eigen::MatrixXcd noise_subspace(const HankelMatrix& h, int model_order);

// MUSIC pseudospectrum values 1 / ||basis^H v(w)||^2 with the unit-norm
// steering vector v_p(w) = exp(j w p) / sqrt(P) over the basis rows.
// The default runs the grid under OpenMP; the _serial variant is the
// reference implementation and returns bit-identical values.
std::vector<double> music_power(const Eigen::MatrixXcd& basis, std::span<const double> omegas);
std::vector<double> music_power_serial(const Eigen::MatrixXcd& basis,
                                       std::span<const double> omegas);

struct Pseudospectrum {
  std::vector<double> grid;  // abscissa: radians for spectra, degrees for bearings
  std::vector<double> power;
  bool circular = false;
  double period = 0.0;  // wrap length of the abscissa when circular
};

// Uniform grid of `points` frequencies covering (-pi, pi], circular.
Pseudospectrum frequency_spectrum(const Eigen::MatrixXcd& basis, std::size_t points);

// Bearing grid over [-90, 90] degrees in steps of step_deg, scanning
// w = pi * sin(theta) against the virtual-array steering vector.
Pseudospectrum doa_spectrum(const Eigen::MatrixXcd& basis, double step_deg);

struct PeakSet {
  std::vector<double> locations;  // sorted ascending
};

// The d strongest strict local maxima, each refined by a parabolic fit on
// log power (the refinement stays within half a grid step).  Throws
// DegenerateSpectrum when fewer than d maxima exist.
PeakSet pick_peaks(const Pseudospectrum& ps, std::size_t d);

// Root mean square error after sorted matching.  period > 0 treats values
// as circular: differences take the shortest arc and the matching also
// minimizes over cyclic pairings.
double rmse_matched(std::vector<double> estimates, std::vector<double> truth,
                    double period = 0.0);

}  // namespace dio
