#include <array>
#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dio/arrays.hpp"
#include "dio/harness.hpp"
#include "dio/intmath.hpp"
#include "dio/moments.hpp"
#include "dio/rng.hpp"
#include "dio/scheme.hpp"
#include "dio/spectral.hpp"
#include "textfmt.hpp"

namespace {

using dio::i64;

void print_scheme(const dio::SchemeCoefficients& s) {
  std::printf("# rates %lld %lld %lld gamma %lld\n", static_cast<long long>(s.rates[0]),
              static_cast<long long>(s.rates[1]), static_cast<long long>(s.rates[2]),
              static_cast<long long>(s.gamma));
  std::printf("# a %lld %lld %lld\n", static_cast<long long>(s.a[0]),
              static_cast<long long>(s.a[1]), static_cast<long long>(s.a[2]));
  std::printf("# b %lld %lld %lld\n", static_cast<long long>(s.b[0]),
              static_cast<long long>(s.b[1]), static_cast<long long>(s.b[2]));
}

int cmd_design_scheme(const std::vector<i64>& rates, i64 gamma, i64 lags, i64 snapshots) {
  dio::SchemeCoefficients s = dio::solve_scheme({rates[0], rates[1], rates[2]});
  if (gamma > 0) s = dio::shift_scheme(s, gamma);
  print_scheme(s);
  dio::SampleSchedule sched = dio::build_schedule(s, lags, snapshots);
  std::printf("# schedule k l i1 i2 i3 conj_slot (max index %lld, delay bound %lld ticks)\n",
              static_cast<long long>(sched.max_index()),
              static_cast<long long>(dio::delay_bound(s, lags, snapshots)));
  for (i64 k = 1; k <= lags; ++k) {
    for (i64 l = 1; l <= snapshots; ++l) {
      const auto& e = sched.at(k, l);
      std::printf("%lld %lld %lld %lld %lld %d\n", static_cast<long long>(k),
                  static_cast<long long>(l), static_cast<long long>(e[0]),
                  static_cast<long long>(e[1]), static_cast<long long>(e[2]),
                  sched.conj_slot + 1);
    }
  }
  return 0;
}

dio::ArrayGeometry make_geometry(i64 p1, i64 p2, i64 q, const std::vector<i64>& coprime) {
  if (!coprime.empty()) return dio::design_coprime_array(coprime[0], coprime[1]);
  return dio::design_diophantine_array(p1, p2, q);
}

int cmd_design_array(const dio::ArrayGeometry& g) {
  for (std::size_t i = 0; i < g.positions.size(); ++i) {
    std::string subs;
    for (int s = 0; s < 3; ++s)
      if (g.labels[i] & (1u << s)) {
        if (!subs.empty()) subs += ',';
        subs += std::to_string(s + 1);
      }
    std::printf("%lld %s\n", static_cast<long long>(g.positions[i]), subs.c_str());
  }
  return 0;
}

int cmd_coarray_report(const dio::ArrayGeometry& g) {
  dio::CoarrayReport r = dio::coarray_lags(g);
  std::printf("lag,witness_count\n");
  for (std::size_t i = 0; i < r.lags.size(); ++i)
    std::printf("%lld,%lld\n", static_cast<long long>(r.lags[i]),
                static_cast<long long>(r.witness_counts[i]));
  std::printf("# guaranteed span %lld dof %lld, formula sensors %lld\n",
              static_cast<long long>(r.span_guaranteed),
              static_cast<long long>(r.dof_guaranteed),
              static_cast<long long>(r.sensors_formula));
  std::printf("span,dof,distinct,min_spacing,sensors\n");
  std::printf("%lld,%lld,%lld,%lld,%lld\n", static_cast<long long>(r.span),
              static_cast<long long>(r.dof), static_cast<long long>(r.distinct),
              static_cast<long long>(r.min_spacing), static_cast<long long>(r.sensors));
  return 0;
}

void print_trial(const std::vector<double>& truth, const std::vector<double>& estimate,
                 double rmse, int redraws, const char* unit) {
  std::printf("truth:");
  for (double v : truth) std::printf(" %s", dio::format_double(v).c_str());
  std::printf(" %s\nestimate:", unit);
  for (double v : estimate) std::printf(" %s", dio::format_double(v).c_str());
  std::printf(" %s\nrmse: %s\nredraws: %d\n", unit, dio::format_double(rmse).c_str(), redraws);
}

int cmd_simulate_freq(const dio::ExperimentConfig& cfg, double snr_db) {
  dio::ExperimentConfig c = cfg;
  c.mode = dio::Mode::freq;
  dio::validate_config(c);
  double lin = std::pow(10.0, snr_db / 10.0);
  dio::FreqTrial t = dio::run_freq_trial(c, lin, dio::mix_key(c.seed, dio::rtag::freq_trial));
  print_trial(t.truth, t.estimate, t.rmse, t.redraws, "rad");
  if (t.baseline_ok)
    std::printf("baseline rmse: %s\n", dio::format_double(t.baseline_rmse).c_str());
  return 0;
}

int cmd_simulate_doa(const dio::ExperimentConfig& cfg, double snr_db) {
  dio::ExperimentConfig c = cfg;
  c.mode = dio::Mode::doa;
  dio::validate_config(c);
  double lin = std::pow(10.0, snr_db / 10.0);
  dio::DoaTrial t = dio::run_doa_trial(c, lin, dio::mix_key(c.seed, dio::rtag::doa_trial));
  print_trial(t.truth, t.estimate, t.rmse, t.redraws, "deg");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse sampling schedules, sparse arrays and moment-domain recovery"};
  app.require_subcommand(1);

  // design-scheme
  auto* ds = app.add_subcommand("design-scheme", "Solve a rate triple and print its schedule");
  std::vector<i64> rates{2, 3, 5};
  i64 ds_gamma = 0, ds_lags = 8, ds_snaps = 4;
  ds->add_option("--rates", rates, "three sampling rates")->delimiter(',')->expected(3);
  ds->add_option("--gamma", ds_gamma, "uniform rate shift");
  ds->add_option("--lags", ds_lags, "lag budget K");
  ds->add_option("--snapshots", ds_snaps, "snapshot budget L");

  // shared geometry options
  i64 p1 = 4, p2 = 3, q = 5;
  std::vector<i64> coprime;

  auto* da = app.add_subcommand("design-array", "Print sensor positions of an array");
  da->add_option("--p1", p1, "first subarray parameter");
  da->add_option("--p2", p2, "second subarray parameter");
  da->add_option("--q", q, "third subarray parameter");
  da->add_option("--coprime", coprime, "use a two-subarray coprime layout m1,m2")
      ->delimiter(',')
      ->expected(2);

  auto* cr = app.add_subcommand("coarray-report", "Difference co-array census of an array");
  cr->add_option("--p1", p1, "first subarray parameter");
  cr->add_option("--p2", p2, "second subarray parameter");
  cr->add_option("--q", q, "third subarray parameter");
  cr->add_option("--coprime", coprime, "use a two-subarray coprime layout m1,m2")
      ->delimiter(',')
      ->expected(2);

  // simulate-freq / simulate-doa
  dio::ExperimentConfig one;
  one.sources = 3;
  one.trials = 1;
  double snr_db = 10.0;

  auto* sf = app.add_subcommand("simulate-freq", "One spectral-line recovery trial");
  sf->add_option("--sources", one.sources, "model order D");
  sf->add_option("--snr", snr_db, "SNR in dB");
  sf->add_option("--gamma", one.gamma, "uniform rate shift");
  sf->add_option("--lags", one.lags, "lag budget K");
  sf->add_option("--snapshots", one.snapshots, "snapshot budget L");
  sf->add_option("--seed", one.seed, "random seed");
  sf->add_option("--min-sep", one.min_sep, "minimum frequency separation (rad)");
  sf->add_flag("--no-baseline", "skip the second-order baseline");

  auto* sd = app.add_subcommand("simulate-doa", "One bearing recovery trial");
  sd->add_option("--sources", one.sources, "model order D");
  sd->add_option("--snr", snr_db, "SNR in dB");
  sd->add_option("--p1", one.p1, "first subarray parameter");
  sd->add_option("--p2", one.p2, "second subarray parameter");
  sd->add_option("--q", one.q, "third subarray parameter");
  sd->add_option("--snapshots", one.snapshots, "snapshot budget L");
  sd->add_option("--seed", one.seed, "random seed");

  // sweep-snr
  auto* sw = app.add_subcommand("sweep-snr", "Monte-Carlo RMSE sweep over an SNR list");
  std::string cfg_path, out_path;
  bool no_runtime = false;
  i64 ov_trials = -1, ov_seed = -1;
  sw->add_option("--config", cfg_path, "experiment config file")->required();
  sw->add_option("--out", out_path, "output CSV path")->required();
  sw->add_option("--trials", ov_trials, "override trial count");
  sw->add_option("--seed", ov_seed, "override random seed");
  sw->add_flag("--no-runtime-column", no_runtime, "omit the runtime column for byte-stable output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ds->parsed()) return cmd_design_scheme(rates, ds_gamma, ds_lags, ds_snaps);
    if (da->parsed()) return cmd_design_array(make_geometry(p1, p2, q, coprime));
    if (cr->parsed()) return cmd_coarray_report(make_geometry(p1, p2, q, coprime));
    if (sf->parsed()) {
      one.baseline = sf->count("--no-baseline") == 0;
      return cmd_simulate_freq(one, snr_db);
    }
    if (sd->parsed()) return cmd_simulate_doa(one, snr_db);
    if (sw->parsed()) {
      dio::ExperimentConfig cfg = dio::load_config(cfg_path);
      if (ov_trials >= 0) cfg.trials = ov_trials;
      if (ov_seed >= 0) cfg.seed = static_cast<std::uint64_t>(ov_seed);
      dio::SweepResult res = cfg.mode == dio::Mode::freq ? dio::run_freq_experiment(cfg)
                                                         : dio::run_doa_experiment(cfg);
      dio::emit_csv(res, out_path, !no_runtime);
      std::fprintf(stderr, "wrote %s (%zu rows)\n", out_path.c_str(), res.rows.size());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
