#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "dio/intmath.hpp"

namespace dio {

// A bank of integer down-sampling rates; rate M keeps one sample out of
// every M ticks of the underlying fast clock.
struct SamplerSet {
  std::vector<i64> rates;
};

// Integer coefficient pair (a, b) attached to a rate triple M, satisfying
//
//   a . M == 0,   b . M == 1,   sum(a) == sum(b) == 0.
//
// Exactly one slot carries a[i] < 0 together with b[i] < 0; samples drawn
// through that slot enter the triple product conjugated.  A zero-sum pair
// stays valid when every rate is shifted by the same Gamma, which is what
// makes one scheme reusable across a whole family of rate triples.
struct SchemeCoefficients {
  std::array<std::size_t, 3> triple{0, 1, 2};  // slot indices into a SamplerSet
  std::array<i64, 3> rates{};
  std::array<i64, 3> a{};
  std::array<i64, 3> b{};
  i64 gamma = 0;      // shift already applied to the base rates
  int conj_slot = -1; // -1 means "derive from the sign pattern"
};

// Index of the slot with a < 0 and b < 0.  Throws ScheduleInconsistency
// unless exactly one slot qualifies.
int conjugated_slot(const SchemeCoefficients& s);

// Checks every identity above with overflow-checked arithmetic and throws
// std::invalid_argument naming the first violated one.
void validate_scheme(const SchemeCoefficients& s);
bool is_valid_scheme(const SchemeCoefficients& s) noexcept;

// Constructs coefficients for three distinct positive rates.  Writing the
// rates in descending order as (hi, mid, lo), a solution exists iff
// gcd(hi - mid, mid - lo) == 1; otherwise UnsolvableTriple is thrown.
SchemeCoefficients solve_scheme(const std::array<i64, 3>& rates);

// The stock scheme on rates (2, 3, 5) shifted by gamma >= 0:
// a = (2, -3, 1), b = (1, -2, 1) on rates (2 + g, 3 + g, 5 + g).
SchemeCoefficients consecutive_scheme(i64 gamma);

// Shifts every rate of a valid scheme by gamma >= 0 and revalidates.
SchemeCoefficients shift_scheme(SchemeCoefficients s, i64 gamma);

// Concrete sampling plan over the lag/snapshot grid k in [1, K], l in [1, L].
// Entry (k, l) stores the nonnegative per-slot sample indices |k*b + l*a|;
// the conjugated slot's raw combination is <= 0, the other two are >= 0.
struct SampleSchedule {
  std::array<i64, 3> rates{};
  int conj_slot = -1;
  i64 lag_count = 0;       // K
  i64 snapshot_count = 0;  // L
  std::vector<std::array<i64, 3>> idx;  // row-major: (k-1)*L + (l-1)

  const std::array<i64, 3>& at(i64 k, i64 l) const;
  i64 max_index() const;  // largest per-slot index over the whole grid
};

// Builds the schedule for K >= 1, L >= 1, throwing ScheduleInconsistency
// if any raw combination lands on the wrong side of zero for its slot.
SampleSchedule build_schedule(const SchemeCoefficients& s, i64 K, i64 L);

// Sorted, deduplicated per-slot index demands of a schedule.
std::array<std::vector<i64>, 3> schedule_demands(const SampleSchedule& sched);

// All solvable 3-subsets of the sampler bank, in lexicographic order of
// their index triples.  Requires at least three samplers.
std::vector<SchemeCoefficients> enumerate_triplets(const SamplerSet& samplers);

// Worst-case sample index over the grid, in ticks of the fast clock:
// max_i max_corner |k*b_i + l*a_i| times the largest rate.
i64 delay_bound(const SchemeCoefficients& s, i64 K, i64 L);

}  // namespace dio
