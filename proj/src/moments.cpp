#include "dio/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "dio/errors.hpp"
#include "parallel_util.hpp"
#include "textfmt.hpp"

namespace dio {

void write_csv(const LagMomentSequence& seq, std::ostream& os) {
  os << "lag,re,im,count\n";
  for (std::size_t i = 0; i < seq.value.size(); ++i) {
    os << (seq.first_lag + static_cast<i64>(i)) << ',' << format_double(seq.value[i].real())
       << ',' << format_double(seq.value[i].imag()) << ',' << seq.count[i] << '\n';
  }
}

std::pair<i64, i64> find_bezout_pair(i64 m1, i64 m2, i64 k, i64 r) {
  if (m1 < 1 || m2 < 1) throw std::invalid_argument("find_bezout_pair: rates must be positive");
  if (std::gcd(m1, m2) != 1)
    throw std::invalid_argument("find_bezout_pair: rates must be coprime");
  i64 prod = checked_mul(m1, m2);
  if (k > prod || k < -prod)
    throw std::invalid_argument("find_bezout_pair: |lag| exceeds rate product");

  // Solve n1*m1 == k (mod m2), then slide by m2 to meet the n2 window.
  i64 kr = ((k % m2) + m2) % m2;
  i64 base = static_cast<i64>((static_cast<unsigned __int128>(kr) * mod_inverse(m1, m2)) % m2);
  i64 lo1 = checked_mul(r, m2);
  i64 lo2 = checked_mul(r, m1);
  for (i64 n1 : {checked_add(lo1, base), checked_add(checked_add(lo1, base), m2)}) {
    i64 n2 = checked_sub(checked_mul(n1, m1), k) / m2;  // exact by the congruence
    if (n2 >= lo2 && n2 < checked_add(lo2, m1)) return {n1, n2};
  }
  // The window construction promises a hit for every |k| <= m1*m2; a miss
  // here means that promise is broken, not that the input was bad.
  throw std::logic_error("find_bezout_pair: no pair in window for lag " + std::to_string(k));
}

CoprimeDemands coprime_demands(i64 m1, i64 m2, i64 K, i64 R) {
  if (K < 0 || R < 1) throw std::invalid_argument("coprime_demands: need K >= 0 and R >= 1");
  CoprimeDemands d;
  d.first.reserve(static_cast<std::size_t>(K * R));
  d.second.reserve(static_cast<std::size_t>(K * R));
  for (i64 k = 1; k <= K; ++k) {
    for (i64 r = 0; r < R; ++r) {
      auto [n1, n2] = find_bezout_pair(m1, m2, k, r);
      d.first.push_back(n1);
      d.second.push_back(n2);
    }
  }
  for (auto* v : {&d.first, &d.second}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  return d;
}

namespace {

cplx second_order_lag(const SampleStream& x1, const SampleStream& x2, i64 k, i64 R) {
  cplx acc = 0;
  for (i64 r = 0; r < R; ++r) {
    auto [n1, n2] = find_bezout_pair(x1.rate, x2.rate, k, r);
    acc += x1.at(n1) * std::conj(x2.at(n2));
  }
  return acc / static_cast<double>(R);
}

LagMomentSequence second_order_shell(const SampleStream& x1, const SampleStream& x2, i64 K,
                                     i64 R) {
  if (K < 0 || R < 1)
    throw std::invalid_argument("coprime_second_order: need K >= 0 and R >= 1");
  if (std::gcd(x1.rate, x2.rate) != 1)
    throw std::invalid_argument("coprime_second_order: stream rates must be coprime");
  LagMomentSequence seq;
  seq.order = 2;
  seq.first_lag = 1;
  seq.value.resize(static_cast<std::size_t>(K));
  seq.count.assign(static_cast<std::size_t>(K), R);
  return seq;
}

}  // namespace

LagMomentSequence coprime_second_order(const SampleStream& x1, const SampleStream& x2, i64 K,
                                       i64 R) {
  LagMomentSequence seq = second_order_shell(x1, x2, K, R);
  parallel_index_loop(K, [&](i64 i) { seq.value[i] = second_order_lag(x1, x2, i + 1, R); });
  return seq;
}

LagMomentSequence coprime_second_order_serial(const SampleStream& x1, const SampleStream& x2,
                                              i64 K, i64 R) {
  LagMomentSequence seq = second_order_shell(x1, x2, K, R);
  for (i64 i = 0; i < K; ++i) seq.value[i] = second_order_lag(x1, x2, i + 1, R);
  return seq;
}

namespace {

cplx third_order_lag(const SampleStream& x1, const SampleStream& x2, const SampleStream& x3,
                     const SampleSchedule& sched, i64 k) {
  const SampleStream* xs[3] = {&x1, &x2, &x3};
  cplx acc = 0;
  for (i64 l = 1; l <= sched.snapshot_count; ++l) {
    const auto& e = sched.at(k, l);
    cplx p = 1;
    for (int i = 0; i < 3; ++i) {
      cplx v = xs[i]->at(e[i]);
      p *= (i == sched.conj_slot) ? std::conj(v) : v;
    }
    acc += p;
  }
  return acc / static_cast<double>(sched.snapshot_count);
}

LagMomentSequence third_order_shell(const SampleStream& x1, const SampleStream& x2,
                                    const SampleStream& x3, const SampleSchedule& sched) {
  const SampleStream* xs[3] = {&x1, &x2, &x3};
  for (int i = 0; i < 3; ++i)
    if (xs[i]->rate != sched.rates[i])
      throw std::invalid_argument("diophantine_third_order: stream rate does not match schedule");
  LagMomentSequence seq;
  seq.order = 3;
  seq.first_lag = 1;
  seq.value.resize(static_cast<std::size_t>(sched.lag_count));
  seq.count.assign(static_cast<std::size_t>(sched.lag_count), sched.snapshot_count);
  return seq;
}

}  // namespace

LagMomentSequence diophantine_third_order(const SampleStream& x1, const SampleStream& x2,
                                          const SampleStream& x3, const SampleSchedule& sched) {
  LagMomentSequence seq = third_order_shell(x1, x2, x3, sched);
  parallel_index_loop(sched.lag_count,
                      [&](i64 i) { seq.value[i] = third_order_lag(x1, x2, x3, sched, i + 1); });
  return seq;
}

LagMomentSequence diophantine_third_order_serial(const SampleStream& x1, const SampleStream& x2,
                                                 const SampleStream& x3,
                                                 const SampleSchedule& sched) {
  LagMomentSequence seq = third_order_shell(x1, x2, x3, sched);
  for (i64 i = 0; i < sched.lag_count; ++i)
    seq.value[i] = third_order_lag(x1, x2, x3, sched, i + 1);
  return seq;
}

DegeneracyReport degeneracy_check(const SourceSet& s, const SchemeCoefficients& scheme) {
  constexpr double kTol = 1e-12;
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  double c1 = static_cast<double>(scheme.a[0]) * static_cast<double>(scheme.rates[0]);
  double c2 = static_cast<double>(scheme.a[1]) * static_cast<double>(scheme.rates[1]);
  std::size_t d = s.size();
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t u = 0; u < d; ++u) {
      for (std::size_t v = 0; v < d; ++v) {
        if (i == u && u == v) continue;
        double val = c1 * (s.omega[i] - s.omega[v]) + c2 * (s.omega[u] - s.omega[v]);
        if (std::abs(std::remainder(val, kTwoPi)) < kTol) return {false, {i, u, v}};
      }
    }
  }
  return {true, {0, 0, 0}};
}

cplx doa_third_order(const SnapshotSet& snaps, const std::array<i64, 3>& positions) {
  i64 L = snaps.snapshots();
  if (L < 2) throw std::invalid_argument("doa_third_order: need at least two snapshots");
  const auto& xa = snaps.at_position(positions[0]);
  const auto& xb = snaps.at_position(positions[1]);
  const auto& xc = snaps.at_position(positions[2]);
  cplx acc = 0;
  for (i64 n1 = 1; n1 < L; ++n1)
    for (i64 n3 = 0; n3 + n1 < L; ++n3)
      acc += xa[static_cast<std::size_t>(n1)] *
             std::conj(xb[static_cast<std::size_t>(n1 + n3)]) *
             xc[static_cast<std::size_t>(n3)];
  return acc / static_cast<double>(doa_pair_count(L));
}

i64 doa_pair_count(i64 L) {
  if (L < 0) throw std::invalid_argument("doa_pair_count: L must be >= 0");
  return L * (L - 1) / 2;
}

namespace {

// Average the plain-model statistic over the sign_third > 0 witnesses of
// one lag.  weight reports (witnesses used) * (pairs per witness); zero
// means the lag has no usable witness.
cplx doa_lag_value(const SnapshotSet& snaps, const ArrayGeometry& geom, i64 lag, i64& weight) {
  std::vector<LagWitness> ws;
  try {
    ws = lag_triples(geom, lag);
  } catch (const NotCovered&) {
    weight = 0;
    return 0;
  }
  cplx acc = 0;
  i64 used = 0;
  for (const LagWitness& w : ws) {
    if (w.sign_third < 0) continue;
    // A negative pair sign is absorbed by swapping the first two sensors.
    std::array<i64, 3> pos = w.sign_pair > 0 ? std::array<i64, 3>{w.d[0], w.d[1], w.d[2]}
                                             : std::array<i64, 3>{w.d[1], w.d[0], w.d[2]};
    acc += doa_third_order(snaps, pos);
    ++used;
  }
  if (used == 0) {
    weight = 0;
    return 0;
  }
  weight = used * doa_pair_count(snaps.snapshots());
  return acc / static_cast<double>(used);
}

LagMomentSequence doa_shell(const SnapshotSet& snaps, i64 max_lag) {
  if (max_lag < 0) throw std::invalid_argument("doa_lag_sequence: max_lag must be >= 0");
  if (snaps.snapshots() < 2)
    throw std::invalid_argument("doa_lag_sequence: need at least two snapshots");
  LagMomentSequence seq;
  seq.order = 3;
  seq.first_lag = 0;
  seq.value.resize(static_cast<std::size_t>(max_lag + 1));
  seq.count.resize(static_cast<std::size_t>(max_lag + 1));
  return seq;
}

}  // namespace

LagMomentSequence doa_lag_sequence(const SnapshotSet& snaps, const ArrayGeometry& geom,
                                   i64 max_lag) {
  LagMomentSequence seq = doa_shell(snaps, max_lag);
  parallel_index_loop(max_lag + 1,
                      [&](i64 g) { seq.value[g] = doa_lag_value(snaps, geom, g, seq.count[g]); });
  return seq;
}

LagMomentSequence doa_lag_sequence_serial(const SnapshotSet& snaps, const ArrayGeometry& geom,
                                          i64 max_lag) {
  LagMomentSequence seq = doa_shell(snaps, max_lag);
  for (i64 g = 0; g <= max_lag; ++g)
    seq.value[g] = doa_lag_value(snaps, geom, g, seq.count[g]);
  return seq;
}

}  // namespace dio
