#pragma once

#include <array>
#include <iosfwd>
#include <utility>
#include <vector>

#include "dio/arrays.hpp"
#include "dio/intmath.hpp"
#include "dio/scheme.hpp"
#include "dio/waveform.hpp"

namespace dio {

// Estimated lag-domain moment sequence on consecutive lags
// first_lag, first_lag + 1, ...  A zero count marks a lag with no estimate.
struct LagMomentSequence {
  int order = 2;  // 2 or 3
  i64 first_lag = 0;
  std::vector<cplx> value;
  std::vector<i64> count;  // averaging weight behind each lag
};

// CSV with header "lag,re,im,count"; doubles are written round-trip exact.
void write_csv(const LagMomentSequence& seq, std::ostream& os);

// Smallest sample-index pair (n1, n2) with n1*m1 - n2*m2 == k inside the
// window n1 in [r*m2, (r+2)*m2), n2 in [r*m1, (r+1)*m1).  Requires
// coprime m1, m2 >= 1 and |k| <= m1*m2.
std::pair<i64, i64> find_bezout_pair(i64 m1, i64 m2, i64 k, i64 r);

// Sorted distinct indices each of the two streams must supply for
// second-order estimation over lags 1..K and blocks r = 0..R-1.
struct CoprimeDemands {
  std::vector<i64> first;
  std::vector<i64> second;
};
CoprimeDemands coprime_demands(i64 m1, i64 m2, i64 K, i64 R);

// Second-order correlation estimate over lags 1..K from two co-prime
// streams, averaging R window blocks per lag.  K == 0 yields an empty
// sequence.  The _serial variant is the reference implementation; the
// default runs the lag loop under OpenMP and returns bit-identical values.
LagMomentSequence coprime_second_order(const SampleStream& x1, const SampleStream& x2, i64 K,
                                       i64 R);
LagMomentSequence coprime_second_order_serial(const SampleStream& x1, const SampleStream& x2,
                                              i64 K, i64 R);

// Third-order lag moment over lags 1..K from three scheme streams:
// the snapshot average of x1[.] * x2[.] * x3[.] with the schedule's
// conjugated slot conjugated.  Streams must match the schedule's rates.
LagMomentSequence diophantine_third_order(const SampleStream& x1, const SampleStream& x2,
                                          const SampleStream& x3, const SampleSchedule& sched);
LagMomentSequence diophantine_third_order_serial(const SampleStream& x1, const SampleStream& x2,
                                                 const SampleStream& x3,
                                                 const SampleSchedule& sched);

// The third-order statistic collapses whenever two sources alias through
// the scheme: a1*M1*(w_i - w_v) + a2*M2*(w_u - w_v) == 0 (mod 2*pi) for
// some source combination that is not the all-equal diagonal.
struct DegeneracyReport {
  bool pass = true;
  std::array<std::size_t, 3> offending{0, 0, 0};  // (i, u, v) of the first hit
};
DegeneracyReport degeneracy_check(const SourceSet& s, const SchemeCoefficients& scheme);

// Plain third-order snapshot statistic of three sensors:
//   mean over {n1 >= 1, n3 >= 0, n1 + n3 <= L-1} of
//   x_a[n1] * conj(x_b[n1 + n3]) * x_c[n3],
// estimating sum_i |s_i|^2 s_i exp(j pi g sin(theta_i)) at co-array lag
// g = (a - b) + c.  Requires at least two snapshots.
cplx doa_third_order(const SnapshotSet& snaps, const std::array<i64, 3>& positions);

// Number of (n1, n3) pairs the statistic averages: L*(L-1)/2.
i64 doa_pair_count(i64 L);

// Co-array moment sequence on lags 0..max_lag, averaging the statistic
// over every sign_third > 0 witness of each lag.  Lags without such a
// witness get a zero count.
LagMomentSequence doa_lag_sequence(const SnapshotSet& snaps, const ArrayGeometry& geom,
                                   i64 max_lag);
LagMomentSequence doa_lag_sequence_serial(const SnapshotSet& snaps, const ArrayGeometry& geom,
                                          i64 max_lag);

}  // namespace dio
