#include "dio/arrays.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dio/errors.hpp"

namespace dio {

namespace {

// Merge raw (position, subarray-bit) pairs into sorted distinct positions
// with membership masks.
void finalize_positions(ArrayGeometry& g, std::vector<std::pair<i64, unsigned>> raw) {
  std::sort(raw.begin(), raw.end());
  g.positions.clear();
  g.labels.clear();
  for (const auto& [pos, bit] : raw) {
    if (!g.positions.empty() && g.positions.back() == pos) {
      g.labels.back() |= bit;
    } else {
      g.positions.push_back(pos);
      g.labels.push_back(bit);
    }
  }
}

// Enumerate every (index combination, sign pattern) of the geometry and
// hand each realized lag with its witness to `emit`.
template <class Emit>
void for_each_witness(const ArrayGeometry& g, Emit emit) {
  switch (g.kind) {
    case ArrayKind::diophantine: {
      const auto [M1, M2, M3] = g.moduli;
      const auto [n1, n2, n3] = g.counts;
      for (i64 m1 = 0; m1 < n1; ++m1) {
        for (i64 m2 = 0; m2 < n2; ++m2) {
          i64 h = m1 * M1 - m2 * M2;
          for (i64 m3 = 0; m3 < n3; ++m3) {
            for (int e1 : {+1, -1}) {
              for (int e3 : {+1, -1}) {
                LagWitness w;
                w.d = {m1 * M1, m2 * M2, m3 * M3};
                w.sign_pair = e1;
                w.sign_third = e3;
                emit(e1 * h + e3 * m3 * M3, w);
              }
            }
          }
        }
      }
      break;
    }
    case ArrayKind::coprime: {
      const auto [M1, M2, M3] = g.moduli;
      (void)M3;
      const auto [n1, n2, n3] = g.counts;
      (void)n3;
      for (i64 m1 = 0; m1 < n1; ++m1) {
        for (i64 m2 = 0; m2 < n2; ++m2) {
          i64 h = m1 * M1 - m2 * M2;
          for (int e1 : {+1, -1}) {
            LagWitness w;
            w.d = {m1 * M1, m2 * M2, 0};
            w.sign_pair = e1;
            emit(e1 * h, w);
          }
        }
      }
      break;
    }
    case ArrayKind::manual: {
      for (i64 p : g.positions) {
        for (i64 pp : g.positions) {
          LagWitness w;
          w.d = {p, pp, 0};
          emit(p - pp, w);
        }
      }
      break;
    }
  }
}

}  // namespace

i64 ArrayGeometry::min_spacing() const {
  if (positions.size() < 2) return 0;
  i64 m = positions[1] - positions[0];
  for (std::size_t i = 2; i < positions.size(); ++i)
    m = std::min(m, positions[i] - positions[i - 1]);
  return m;
}

ArrayGeometry design_diophantine_array(i64 p1, i64 p2, i64 q) {
  if (p1 < 2 || p2 < 2 || q < 2)
    throw std::invalid_argument("design_diophantine_array: parameters must be >= 2");
  if (std::gcd(p1, p2) != 1 || std::gcd(p1, q) != 1 || std::gcd(p2, q) != 1)
    throw std::invalid_argument("design_diophantine_array: parameters must be pairwise coprime");

  ArrayGeometry g;
  g.kind = ArrayKind::diophantine;
  g.params = {p1, p2, q};
  g.moduli = {checked_mul(q, p1), checked_mul(q, p2), checked_mul(p1, p2)};
  g.counts = {checked_mul(2, p2), p1, q};

  std::vector<std::pair<i64, unsigned>> raw;
  for (int s = 0; s < 3; ++s)
    for (i64 m = 0; m < g.counts[s]; ++m)
      raw.emplace_back(checked_mul(m, g.moduli[s]), 1u << s);
  finalize_positions(g, std::move(raw));
  return g;
}

ArrayGeometry design_coprime_array(i64 m1, i64 m2) {
  if (m1 < 1 || m2 < 1)
    throw std::invalid_argument("design_coprime_array: spacings must be positive");
  if (std::gcd(m1, m2) != 1)
    throw std::invalid_argument("design_coprime_array: spacings must be coprime");

  ArrayGeometry g;
  g.kind = ArrayKind::coprime;
  g.params = {m1, m2, 0};
  g.moduli = {m1, m2, 0};
  g.counts = {checked_mul(2, m2), m1, 0};

  std::vector<std::pair<i64, unsigned>> raw;
  for (i64 i = 0; i < g.counts[0]; ++i) raw.emplace_back(checked_mul(i, m1), 1u << 0);
  for (i64 i = 1; i < g.counts[1]; ++i) raw.emplace_back(checked_mul(i, m2), 1u << 1);
  finalize_positions(g, std::move(raw));
  return g;
}

std::vector<LagWitness> lag_triples(const ArrayGeometry& g, i64 lag) {
  std::vector<LagWitness> out;
  for_each_witness(g, [&](i64 realized, const LagWitness& w) {
    if (realized == lag) out.push_back(w);
  });
  if (out.empty())
    throw NotCovered("lag " + std::to_string(lag) + " has no witness in this geometry");
  return out;
}

CoarrayReport coarray_lags(const ArrayGeometry& g) {
  std::map<i64, i64> hits;
  for_each_witness(g, [&](i64 realized, const LagWitness&) { ++hits[realized]; });

  CoarrayReport r;
  r.lags.reserve(hits.size());
  r.witness_counts.reserve(hits.size());
  for (const auto& [lag, n] : hits) {
    r.lags.push_back(lag);
    r.witness_counts.push_back(n);
  }
  r.distinct = static_cast<i64>(r.lags.size());

  i64 span = 0;
  if (hits.count(0)) {
    while (hits.count(span + 1) && hits.count(-(span + 1))) ++span;
    r.dof = 2 * span + 1;
  }
  r.span = span;

  switch (g.kind) {
    case ArrayKind::diophantine:
      r.span_guaranteed = checked_mul(checked_mul(g.params[0], g.params[1]), g.params[2]);
      r.sensors_formula = g.params[0] + 2 * g.params[1] + g.params[2] - 1;
      break;
    case ArrayKind::coprime:
      r.span_guaranteed = checked_mul(g.params[0], g.params[1]);
      r.sensors_formula = g.params[0] + 2 * g.params[1] - 1;
      break;
    case ArrayKind::manual:
      r.span_guaranteed = 0;
      r.sensors_formula = static_cast<i64>(g.positions.size());
      break;
  }
  r.dof_guaranteed = 2 * r.span_guaranteed + 1;
  r.min_spacing = g.min_spacing();
  r.sensors = static_cast<i64>(g.positions.size());
  return r;
}

}  // namespace dio
