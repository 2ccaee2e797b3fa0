#include "dio/scheme.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dio/errors.hpp"

namespace dio {

int conjugated_slot(const SchemeCoefficients& s) {
  int found = -1;
  for (int i = 0; i < 3; ++i) {
    if (s.a[i] < 0 && s.b[i] < 0) {
      if (found >= 0) throw ScheduleInconsistency("scheme has two doubly negative slots");
      found = i;
    }
  }
  if (found < 0) throw ScheduleInconsistency("scheme has no doubly negative slot");
  return found;
}

void validate_scheme(const SchemeCoefficients& s) {
  if (s.gamma < 0) throw std::invalid_argument("scheme: gamma must be nonnegative");
  i64 adot = 0, bdot = 0, asum = 0, bsum = 0;
  for (int i = 0; i < 3; ++i) {
    if (s.rates[i] < 1) throw std::invalid_argument("scheme: rates must be positive");
    adot = checked_add(adot, checked_mul(s.a[i], s.rates[i]));
    bdot = checked_add(bdot, checked_mul(s.b[i], s.rates[i]));
    asum = checked_add(asum, s.a[i]);
    bsum = checked_add(bsum, s.b[i]);
  }
  if (adot != 0) throw std::invalid_argument("scheme: a . M != 0");
  if (bdot != 1) throw std::invalid_argument("scheme: b . M != 1");
  if (asum != 0) throw std::invalid_argument("scheme: sum(a) != 0");
  if (bsum != 0) throw std::invalid_argument("scheme: sum(b) != 0");
  int conj;
  try {
    conj = conjugated_slot(s);
  } catch (const ScheduleInconsistency& e) {
    throw std::invalid_argument(std::string("scheme: ") + e.what());
  }
  if (s.conj_slot >= 0 && s.conj_slot != conj)
    throw std::invalid_argument("scheme: stored conj_slot does not match sign pattern");
}

bool is_valid_scheme(const SchemeCoefficients& s) noexcept {
  try {
    validate_scheme(s);
    return true;
  } catch (...) {
    return false;
  }
}

SchemeCoefficients solve_scheme(const std::array<i64, 3>& rates) {
  for (i64 m : rates)
    if (m < 1) throw std::invalid_argument("solve_scheme: rates must be positive");

  // Work on the slots sorted by descending rate.
  std::array<int, 3> ord{0, 1, 2};
  std::sort(ord.begin(), ord.end(), [&](int x, int y) { return rates[x] > rates[y]; });
  i64 hi = rates[ord[0]], mid = rates[ord[1]], lo = rates[ord[2]];
  if (hi == mid || mid == lo)
    throw UnsolvableTriple("solve_scheme: rates must be distinct");

  i64 d1 = checked_sub(hi, mid);  // > 0
  i64 m = checked_sub(mid, lo);   // > 0
  if (std::gcd(d1, m) != 1)
    throw UnsolvableTriple("solve_scheme: rate differences share a factor");

  // In difference coordinates the two identities collapse to
  //   a_hi*d1 - a_lo*m == 0   and   b_hi*d1 - b_lo*m == 1,
  // solved by a = (m, -(m + d1), d1) and the least positive inverse of d1
  // mod m for b_hi.  Taking the least positive (not least nonnegative)
  // inverse keeps b_hi > 0 when m == 1, which pins the sign pattern:
  // the mid slot is always the doubly negative one.
  i64 a_hi = m;
  i64 a_lo = d1;
  i64 a_mid = -checked_add(a_hi, a_lo);
  i64 b_hi = mod_inverse(d1, m);
  i64 b_lo = checked_sub(checked_mul(b_hi, d1), 1) / m;
  i64 b_mid = -checked_add(b_hi, b_lo);

  SchemeCoefficients s;
  s.rates = rates;
  s.a[ord[0]] = a_hi;
  s.a[ord[1]] = a_mid;
  s.a[ord[2]] = a_lo;
  s.b[ord[0]] = b_hi;
  s.b[ord[1]] = b_mid;
  s.b[ord[2]] = b_lo;
  s.gamma = 0;
  s.conj_slot = ord[1];
  validate_scheme(s);
  return s;
}

SchemeCoefficients consecutive_scheme(i64 gamma) {
  if (gamma < 0) throw std::invalid_argument("consecutive_scheme: gamma must be nonnegative");
  SchemeCoefficients s;
  s.rates = {checked_add(2, gamma), checked_add(3, gamma), checked_add(5, gamma)};
  s.a = {2, -3, 1};
  s.b = {1, -2, 1};
  s.gamma = gamma;
  s.conj_slot = 1;
  validate_scheme(s);
  return s;
}

SchemeCoefficients shift_scheme(SchemeCoefficients s, i64 gamma) {
  if (gamma < 0) throw std::invalid_argument("shift_scheme: gamma must be nonnegative");
  validate_scheme(s);
  for (auto& m : s.rates) m = checked_add(m, gamma);
  s.gamma = checked_add(s.gamma, gamma);
  validate_scheme(s);
  return s;
}

const std::array<i64, 3>& SampleSchedule::at(i64 k, i64 l) const {
  if (k < 1 || k > lag_count || l < 1 || l > snapshot_count)
    throw std::invalid_argument("SampleSchedule::at: (k, l) outside grid");
  return idx[static_cast<std::size_t>((k - 1) * snapshot_count + (l - 1))];
}

i64 SampleSchedule::max_index() const {
  i64 m = 0;
  for (const auto& e : idx)
    for (i64 v : e) m = std::max(m, v);
  return m;
}

SampleSchedule build_schedule(const SchemeCoefficients& s, i64 K, i64 L) {
  if (K < 1 || L < 1) throw std::invalid_argument("build_schedule: K and L must be >= 1");
  validate_scheme(s);
  int conj = conjugated_slot(s);

  SampleSchedule out;
  out.rates = s.rates;
  out.conj_slot = conj;
  out.lag_count = K;
  out.snapshot_count = L;
  out.idx.reserve(static_cast<std::size_t>(K * L));
  for (i64 k = 1; k <= K; ++k) {
    for (i64 l = 1; l <= L; ++l) {
      std::array<i64, 3> e;
      for (int i = 0; i < 3; ++i) {
        i64 raw = checked_add(checked_mul(k, s.b[i]), checked_mul(l, s.a[i]));
        if (i == conj ? raw > 0 : raw < 0)
          throw ScheduleInconsistency("build_schedule: index sign violates slot role at k=" +
                                      std::to_string(k) + " l=" + std::to_string(l));
        e[i] = std::abs(raw);
      }
      out.idx.push_back(e);
    }
  }
  return out;
}

std::array<std::vector<i64>, 3> schedule_demands(const SampleSchedule& sched) {
  std::array<std::vector<i64>, 3> d;
  for (int i = 0; i < 3; ++i) d[i].reserve(sched.idx.size());
  for (const auto& e : sched.idx)
    for (int i = 0; i < 3; ++i) d[i].push_back(e[i]);
  for (auto& v : d) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return d;
}

std::vector<SchemeCoefficients> enumerate_triplets(const SamplerSet& samplers) {
  const auto& r = samplers.rates;
  if (r.size() < 3) throw std::invalid_argument("enumerate_triplets: need at least 3 samplers");
  std::vector<SchemeCoefficients> out;
  for (std::size_t i = 0; i + 2 < r.size(); ++i) {
    for (std::size_t j = i + 1; j + 1 < r.size(); ++j) {
      for (std::size_t k = j + 1; k < r.size(); ++k) {
        try {
          SchemeCoefficients s = solve_scheme({r[i], r[j], r[k]});
          s.triple = {i, j, k};
          out.push_back(s);
        } catch (const UnsolvableTriple&) {
        }
      }
    }
  }
  return out;
}

i64 delay_bound(const SchemeCoefficients& s, i64 K, i64 L) {
  if (K < 1 || L < 1) throw std::invalid_argument("delay_bound: K and L must be >= 1");
  validate_scheme(s);
  i64 worst = 0;
  for (int i = 0; i < 3; ++i) {
    // |k*b + l*a| over the grid peaks at one of the four corners.
    for (i64 k : {i64{1}, K}) {
      for (i64 l : {i64{1}, L}) {
        i64 raw = checked_add(checked_mul(k, s.b[i]), checked_mul(l, s.a[i]));
        worst = std::max(worst, std::abs(raw));
      }
    }
  }
  i64 mmax = *std::max_element(s.rates.begin(), s.rates.end());
  return checked_mul(worst, mmax);
}

}  // namespace dio
