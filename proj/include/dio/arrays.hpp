#pragma once

#include <array>
#include <vector>

#include "dio/intmath.hpp"

namespace dio {

enum class ArrayKind { diophantine, coprime, manual };

// A linear sensor array on the integer grid (units of the common element
// spacing).  The two constructed kinds remember their subarray structure;
// a manual geometry is just a set of positions.
struct ArrayGeometry {
  ArrayKind kind = ArrayKind::manual;
  std::vector<i64> positions;      // sorted, distinct
  std::vector<unsigned> labels;    // per position, bitmask of subarrays it belongs to
  std::array<i64, 3> moduli{0, 0, 0};  // subarray spacings (third unused for coprime)
  std::array<i64, 3> params{0, 0, 0};  // p1, p2, q (coprime: m1, m2, 0)
  std::array<i64, 3> counts{0, 0, 0};  // subarray index-range sizes

  i64 min_spacing() const;  // smallest adjacent gap, 0 for fewer than two sensors
};

// Three subarrays with spacings M1 = q*p1, M2 = q*p2, M3 = p1*p2 and index
// ranges [0, 2*p2), [0, p1), [0, q).  Requires p1, p2, q >= 2 and pairwise
// coprime.  Every co-array lag in [-p1*p2*q, p1*p2*q] is then reachable.
ArrayGeometry design_diophantine_array(i64 p1, i64 p2, i64 q);

// Classic two-subarray baseline: spacing m1 with 2*m2 elements against
// spacing m2 with m1 - 1 elements (index 0 kept only once).  Requires
// m1, m2 >= 1 coprime; pair differences then reach all of [-m1*m2, m1*m2].
ArrayGeometry design_coprime_array(i64 m1, i64 m2);

// One witness that a co-array lag is reachable:
//   diophantine  lag == sign_pair*(d[0] - d[1]) + sign_third*d[2]
//   coprime      lag == sign_pair*(d[0] - d[1]),          d[2] == 0
//   manual       lag ==            d[0] - d[1],           d[2] == 0
// A witness with sign_third < 0 needs its third slot conjugated in the
// moment statistic, which flips the statistic's envelope model; estimation
// therefore prefers sign_third > 0 witnesses.
struct LagWitness {
  std::array<i64, 3> d{0, 0, 0};  // sensor positions
  int sign_pair = 1;
  int sign_third = 1;

  bool conjugated() const { return sign_third < 0; }
};

// All witnesses for one lag, enumerating every subarray index combination
// and sign pattern.  Throws NotCovered when the lag is unreachable.
std::vector<LagWitness> lag_triples(const ArrayGeometry& g, i64 lag);

struct CoarrayReport {
  std::vector<i64> lags;            // sorted distinct reachable lags
  std::vector<i64> witness_counts;  // parallel to lags
  i64 span = 0;             // largest S with [-S, S] fully reachable (enumerated)
  i64 dof = 0;              // 2*span + 1
  i64 span_guaranteed = 0;  // what the construction promises
  i64 dof_guaranteed = 0;
  i64 distinct = 0;         // number of distinct lags
  i64 min_spacing = 0;
  i64 sensors = 0;          // distinct positions actually present
  i64 sensors_formula = 0;  // closed-form count; can disagree with `sensors`
};

CoarrayReport coarray_lags(const ArrayGeometry& g);

}  // namespace dio
