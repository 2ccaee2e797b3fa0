#include "dio/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>

#include "dio/arrays.hpp"
#include "dio/errors.hpp"
#include "dio/moments.hpp"
#include "dio/rng.hpp"
#include "dio/scheme.hpp"
#include "dio/spectral.hpp"
#include "dio/waveform.hpp"
#include "parallel_util.hpp"
#include "textfmt.hpp"

namespace dio {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw std::invalid_argument("config: bad value for " + key + ": '" + value + "'");
}

i64 parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    i64 v = std::stoll(value, &used);
    if (used != value.size()) bad_value(key, value);
    return v;
  } catch (const std::invalid_argument&) {
    bad_value(key, value);
  } catch (const std::out_of_range&) {
    bad_value(key, value);
  }
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) bad_value(key, value);
    return v;
  } catch (const std::invalid_argument&) {
    bad_value(key, value);
  } catch (const std::out_of_range&) {
    bad_value(key, value);
  }
}

std::vector<double> parse_real_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    auto comma = value.find(',', pos);
    std::string item = trim(value.substr(pos, comma == std::string::npos ? std::string::npos
                                                                         : comma - pos));
    if (item.empty()) bad_value(key, value);
    out.push_back(parse_real(key, item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

bool parse_flag(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  bad_value(key, value);
}

double now_ms() {
  using clk = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clk::now().time_since_epoch()).count();
}

double total_power(const SourceSet& s) {
  double p = 0;
  for (double a : s.amplitude) p += a * a;
  return p;
}

// Coprime pair of scheme rates with the largest product; first < second.
// Returns (0, 0) when no pair of the triple is coprime.
std::pair<i64, i64> baseline_pair(const std::array<i64, 3>& rates) {
  std::pair<i64, i64> best{0, 0};
  i64 best_prod = 0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (std::gcd(rates[i], rates[j]) != 1) continue;
      i64 prod = checked_mul(rates[i], rates[j]);
      if (prod > best_prod) {
        best_prod = prod;
        best = {std::min(rates[i], rates[j]), std::max(rates[i], rates[j])};
      }
    }
  }
  return best;
}

void append_demands(std::map<i64, std::vector<i64>>& demand, i64 rate,
                    const std::vector<i64>& idx) {
  auto& v = demand[rate];
  v.insert(v.end(), idx.begin(), idx.end());
}

// Hankel row count putting rows >= cols with rows + cols == n + 1.
i64 hankel_rows(i64 n) { return (n + 2) / 2; }

}  // namespace

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));

    if (key == "mode") {
      if (value == "freq") cfg.mode = Mode::freq;
      else if (value == "doa") cfg.mode = Mode::doa;
      else bad_value(key, value);
    } else if (key == "sources") {
      cfg.sources = parse_int(key, value);
    } else if (key == "snr_db") {
      cfg.snr_db = parse_real_list(key, value);
    } else if (key == "lags") {
      cfg.lags = parse_int(key, value);
    } else if (key == "snapshots") {
      cfg.snapshots = parse_int(key, value);
    } else if (key == "trials") {
      cfg.trials = parse_int(key, value);
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "gamma") {
      cfg.gamma = parse_int(key, value);
    } else if (key == "min_sep") {
      cfg.min_sep = parse_real(key, value);
    } else if (key == "grid_points") {
      cfg.grid_points = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "baseline") {
      cfg.baseline = parse_flag(key, value);
    } else if (key == "p1") {
      cfg.p1 = parse_int(key, value);
    } else if (key == "p2") {
      cfg.p2 = parse_int(key, value);
    } else if (key == "q") {
      cfg.q = parse_int(key, value);
    } else if (key == "min_sep_deg") {
      cfg.min_sep_deg = parse_real(key, value);
    } else if (key == "grid_step_deg") {
      cfg.grid_step_deg = parse_real(key, value);
    } else if (key == "amp_lo") {
      cfg.amp_lo = parse_real(key, value);
    } else if (key == "amp_hi") {
      cfg.amp_hi = parse_real(key, value);
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.sources < 1) throw std::invalid_argument("config: sources must be >= 1");
  if (cfg.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (cfg.snr_db.empty()) throw std::invalid_argument("config: snr_db list is empty");
  if (cfg.lags < 1) throw std::invalid_argument("config: lags must be >= 1");
  if (cfg.snapshots < 1) throw std::invalid_argument("config: snapshots must be >= 1");
  if (cfg.gamma < 0) throw std::invalid_argument("config: gamma must be >= 0");
  if (!(cfg.amp_lo > 0) || cfg.amp_hi < cfg.amp_lo)
    throw std::invalid_argument("config: need 0 < amp_lo <= amp_hi");

  if (cfg.mode == Mode::freq) {
    if (cfg.min_sep < 0) throw std::invalid_argument("config: min_sep must be >= 0");
    if (static_cast<double>(cfg.sources) * cfg.min_sep >= kTwoPi)
      throw std::invalid_argument("config: sources * min_sep leaves no room on the circle");
    if (cfg.grid_points < 16) throw std::invalid_argument("config: grid_points must be >= 16");
    if ((cfg.lags + 1) / 2 <= cfg.sources)
      throw std::invalid_argument("config: lags too small for model order, need >= 2*sources + 1");
  } else {
    design_diophantine_array(cfg.p1, cfg.p2, cfg.q);  // rejects bad parameters
    if (cfg.snapshots < 2) throw std::invalid_argument("config: doa mode needs snapshots >= 2");
    if (!(cfg.grid_step_deg > 0) || cfg.grid_step_deg > 45)
      throw std::invalid_argument("config: grid_step_deg must be in (0, 45]");
    if (cfg.min_sep_deg < 0) throw std::invalid_argument("config: min_sep_deg must be >= 0");
    if (static_cast<double>(cfg.sources) * cfg.min_sep_deg >= 120.0)
      throw std::invalid_argument("config: sources * min_sep_deg leaves no room in (-60, 60)");
    i64 nlags = checked_mul(checked_mul(cfg.p1, cfg.p2), cfg.q) + 1;
    if ((nlags + 1) / 2 <= cfg.sources)
      throw std::invalid_argument("config: array too small for model order");
  }
}

FreqTrial run_freq_trial(const ExperimentConfig& cfg, double snr_linear,
                         std::uint64_t trial_key) {
  if (!(snr_linear > 0)) throw std::invalid_argument("run_freq_trial: snr must be positive");
  SchemeCoefficients scheme = consecutive_scheme(cfg.gamma);
  SampleSchedule sched = build_schedule(scheme, cfg.lags, cfg.snapshots);

  auto [bm1, bm2] = baseline_pair(scheme.rates);
  bool base_enabled = cfg.baseline && bm1 > 0;
  i64 kb = 0;
  if (base_enabled) {
    kb = std::min(cfg.lags, checked_mul(bm1, bm2));
    if ((kb + 1) / 2 <= cfg.sources) base_enabled = false;  // not enough lags for the order
  }

  FreqTrial out;
  constexpr int kMaxAttempts = 32;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::uint64_t base = mix_key(trial_key, attempt);
    SourceSet src = random_sources(static_cast<std::size_t>(cfg.sources), cfg.min_sep,
                                   cfg.amp_lo, cfg.amp_hi, base);
    if (!degeneracy_check(src, scheme).pass) {
      ++out.redraws;
      continue;
    }
    double sigma2 = std::isinf(snr_linear) ? 0.0 : total_power(src) / snr_linear;
    NoiseSpec noise{sigma2, base};

    // One stream per distinct rate; both pipelines read from the same pool
    // so shared indices see the same noise.
    std::map<i64, std::vector<i64>> demand;
    auto dem = schedule_demands(sched);
    for (int i = 0; i < 3; ++i) append_demands(demand, sched.rates[i], dem[i]);
    if (base_enabled) {
      CoprimeDemands cd = coprime_demands(bm1, bm2, kb, cfg.snapshots);
      append_demands(demand, bm1, cd.first);
      append_demands(demand, bm2, cd.second);
    }
    std::map<i64, SampleStream> streams;
    for (auto& [rate, idx] : demand) {
      std::sort(idx.begin(), idx.end());
      idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
      streams.emplace(rate, downsample_stream(src, rate, idx, noise));
    }

    out.truth = src.omega;
    std::sort(out.truth.begin(), out.truth.end());
    try {
      double t0 = now_ms();
      LagMomentSequence seq = diophantine_third_order(
          streams.at(sched.rates[0]), streams.at(sched.rates[1]), streams.at(sched.rates[2]),
          sched);
      Eigen::MatrixXcd basis =
          noise_subspace(build_hankel(seq, hankel_rows(cfg.lags)), static_cast<int>(cfg.sources));
      Pseudospectrum ps = frequency_spectrum(basis, cfg.grid_points);
      PeakSet pk = pick_peaks(ps, static_cast<std::size_t>(cfg.sources));
      out.runtime_ms = now_ms() - t0;
      out.estimate = pk.locations;
      out.rmse = rmse_matched(out.estimate, out.truth, kTwoPi);

      if (base_enabled) {
        t0 = now_ms();
        LagMomentSequence s2 =
            coprime_second_order(streams.at(bm1), streams.at(bm2), kb, cfg.snapshots);
        Eigen::MatrixXcd b2 =
            noise_subspace(build_hankel(s2, hankel_rows(kb)), static_cast<int>(cfg.sources));
        Pseudospectrum ps2 = frequency_spectrum(b2, cfg.grid_points);
        PeakSet pk2 = pick_peaks(ps2, static_cast<std::size_t>(cfg.sources));
        out.baseline_runtime_ms = now_ms() - t0;
        out.baseline_estimate = pk2.locations;
        out.baseline_rmse = rmse_matched(out.baseline_estimate, out.truth, kTwoPi);
        out.baseline_ok = true;
      }
    } catch (const DegenerateSpectrum&) {
      ++out.redraws;
      continue;
    }
    return out;
  }
  throw std::runtime_error("run_freq_trial: redraw limit exceeded");
}

DoaTrial run_doa_trial(const ExperimentConfig& cfg, double snr_linear, std::uint64_t trial_key) {
  if (!(snr_linear > 0)) throw std::invalid_argument("run_doa_trial: snr must be positive");
  ArrayGeometry geom = design_diophantine_array(cfg.p1, cfg.p2, cfg.q);
  i64 span = checked_mul(checked_mul(cfg.p1, cfg.p2), cfg.q);

  DoaTrial out;
  constexpr int kMaxAttempts = 32;
  constexpr int kMaxRejects = 100000;
  const std::size_t d = static_cast<std::size_t>(cfg.sources);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::uint64_t base = mix_key(trial_key, attempt);
    Rng rng(mix_key(base, rtag::doa_draw));

    std::vector<double> theta(d);
    bool ok = false;
    for (int t = 0; t < kMaxRejects && !ok; ++t) {
      for (auto& v : theta) v = rng.uniform(-60.0, 60.0);
      ok = true;
      for (std::size_t i = 0; i < d && ok; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
          if (std::abs(theta[i] - theta[j]) < cfg.min_sep_deg) {
            ok = false;
            break;
          }
    }
    if (!ok) throw std::runtime_error("run_doa_trial: bearing separation not met");

    // Distinct temporal rotations keep cross-source terms from surviving
    // the snapshot average.
    std::vector<double> freq(d);
    ok = false;
    for (int t = 0; t < kMaxRejects && !ok; ++t) {
      for (auto& v : freq) v = rng.uniform(0.02, 0.48);
      ok = true;
      for (std::size_t i = 0; i < d && ok; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
          if (std::abs(freq[i] - freq[j]) < 0.01) {
            ok = false;
            break;
          }
    }
    if (!ok) throw std::runtime_error("run_doa_trial: rotation separation not met");

    DoaSourceSet src;
    src.src.resize(d);
    double power = 0;
    for (std::size_t i = 0; i < d; ++i) {
      double amp = rng.uniform(cfg.amp_lo, cfg.amp_hi);
      double phase = kTwoPi * rng.uniform();
      src.src[i] = {std::polar(amp, phase), freq[i], theta[i]};
      power += amp * amp;
    }
    double sigma2 = std::isinf(snr_linear) ? 0.0 : power / snr_linear;
    SnapshotSet snaps = simulate_snapshots(src, geom.positions, cfg.snapshots, {sigma2, base});

    out.truth = theta;
    std::sort(out.truth.begin(), out.truth.end());
    try {
      double t0 = now_ms();
      LagMomentSequence seq = doa_lag_sequence(snaps, geom, span);
      Eigen::MatrixXcd basis =
          noise_subspace(build_hankel(seq, hankel_rows(span + 1)), static_cast<int>(cfg.sources));
      Pseudospectrum ps = doa_spectrum(basis, cfg.grid_step_deg);
      PeakSet pk = pick_peaks(ps, d);
      out.runtime_ms = now_ms() - t0;
      out.estimate = pk.locations;
      out.rmse = rmse_matched(out.estimate, out.truth);
    } catch (const DegenerateSpectrum&) {
      ++out.redraws;
      continue;
    }
    return out;
  }
  throw std::runtime_error("run_doa_trial: redraw limit exceeded");
}

SweepResult run_freq_experiment(const ExperimentConfig& cfg) {
  if (cfg.mode != Mode::freq)
    throw std::invalid_argument("run_freq_experiment: config mode is not freq");
  validate_config(cfg);
  SweepResult res;
  for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
    double lin = std::pow(10.0, cfg.snr_db[si] / 10.0);
    std::vector<FreqTrial> tr(static_cast<std::size_t>(cfg.trials));
    parallel_index_loop(cfg.trials, [&](i64 t) {
      tr[static_cast<std::size_t>(t)] =
          run_freq_trial(cfg, lin, mix_key(cfg.seed, rtag::freq_trial, si, t));
    });
    double rsum = 0, msum = 0, brsum = 0, bmsum = 0;
    i64 redraws = 0;
    bool with_base = !tr.empty() && tr[0].baseline_ok;
    for (const FreqTrial& t : tr) {
      rsum += t.rmse;
      msum += t.runtime_ms;
      redraws += t.redraws;
      brsum += t.baseline_rmse;
      bmsum += t.baseline_runtime_ms;
    }
    double n = static_cast<double>(cfg.trials);
    res.rows.push_back(
        {cfg.snr_db[si], "diophantine3", rsum / n, cfg.trials, redraws, msum / n});
    if (with_base)
      res.rows.push_back(
          {cfg.snr_db[si], "coprime2", brsum / n, cfg.trials, redraws, bmsum / n});
  }
  return res;
}

SweepResult run_doa_experiment(const ExperimentConfig& cfg) {
  if (cfg.mode != Mode::doa)
    throw std::invalid_argument("run_doa_experiment: config mode is not doa");
  validate_config(cfg);
  SweepResult res;
  for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
    double lin = std::pow(10.0, cfg.snr_db[si] / 10.0);
    std::vector<DoaTrial> tr(static_cast<std::size_t>(cfg.trials));
    parallel_index_loop(cfg.trials, [&](i64 t) {
      tr[static_cast<std::size_t>(t)] =
          run_doa_trial(cfg, lin, mix_key(cfg.seed, rtag::doa_trial, si, t));
    });
    double rsum = 0, msum = 0;
    i64 redraws = 0;
    for (const DoaTrial& t : tr) {
      rsum += t.rmse;
      msum += t.runtime_ms;
      redraws += t.redraws;
    }
    double n = static_cast<double>(cfg.trials);
    res.rows.push_back(
        {cfg.snr_db[si], "diophantine3", rsum / n, cfg.trials, redraws, msum / n});
  }
  return res;
}

std::string to_csv(const SweepResult& result, bool runtime_column) {
  std::string s = "snr_db,method,rmse,trials,redraws";
  if (runtime_column) s += ",mean_runtime_ms";
  s += '\n';
  for (const SweepRow& r : result.rows) {
    s += format_double(r.snr_db);
    s += ',';
    s += r.method;
    s += ',';
    s += format_double(r.rmse);
    s += ',';
    s += std::to_string(r.trials);
    s += ',';
    s += std::to_string(r.redraws);
    if (runtime_column) {
      s += ',';
      s += format_double(r.mean_runtime_ms);
    }
    s += '\n';
  }
  return s;
}

void emit_csv(const SweepResult& result, const std::string& path, bool runtime_column) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << to_csv(result, runtime_column);
  out.flush();
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace dio
