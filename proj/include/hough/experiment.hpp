#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "hough/accumulator.hpp"
#include "hough/builtins.hpp"
#include "hough/errors.hpp"
#include "hough/family.hpp"
#include "hough/family_json.hpp"
#include "hough/pipeline.hpp"
#include "hough/rng.hpp"
#include "hough/synthdata.hpp"
#include "hough/version.hpp"

namespace hough {

enum class ExperimentKind { NoiseFree, BackgroundNoise, Perturbation, Timing, N1Scaling };

inline const char* experiment_kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::NoiseFree:
      return "noise_free";
    case ExperimentKind::BackgroundNoise:
      return "background_noise";
    case ExperimentKind::Perturbation:
      return "perturbation";
    case ExperimentKind::Timing:
      return "timing";
    default:
      return "n1_scaling";
  }
}

inline ExperimentKind parse_experiment_kind(const std::string& s) {
  for (auto k : {ExperimentKind::NoiseFree, ExperimentKind::BackgroundNoise,
                 ExperimentKind::Perturbation, ExperimentKind::Timing, ExperimentKind::N1Scaling})
    if (s == experiment_kind_name(k)) return k;
  throw argument_error("unknown experiment kind '" + s + "'");
}

/// Total point counts of the earlier large-N runs the timing experiment
/// compares against, at 99% background noise.
inline std::optional<std::size_t> historical_point_count(const std::string& family) {
  static const std::map<std::string, std::size_t> kCounts = {{"descartes_folium", 10000},
                                                             {"elliptic2", 15800},
                                                             {"quartic_triple", 10000},
                                                             {"quartic_tacnode", 5000}};
  const auto it = kCounts.find(family);
  if (it == kCounts.end()) return std::nullopt;
  return it->second;
}

/// A family given by built-in name or by a path to a JSON definition.
inline FamilyDefinition resolve_family(const std::string& name_or_path,
                                       std::optional<int> m = std::nullopt) {
  const bool looks_like_file = name_or_path.find('/') != std::string::npos ||
                               (name_or_path.size() > 5 &&
                                name_or_path.substr(name_or_path.size() - 5) == ".json");
  if (looks_like_file) return load_family_file(name_or_path);
  return builtin(name_or_path, m);
}

struct ExperimentConfig {
  std::string family = "descartes_folium";
  std::optional<int> m;
  std::optional<ParamPoint> true_params;  // family reference parameters when unset
  ExperimentKind kind = ExperimentKind::BackgroundNoise;
  std::size_t runs = 100;
  std::vector<double> noise_levels{99, 95, 90, 85, 80};
  std::vector<double> sigmas{0.01, 0.02, 0.04, 0.05, 0.06, 0.08, 0.1, 0.15};
  std::optional<std::size_t> n1;  // nu_opt when unset
  std::vector<std::size_t> n1_values{9, 15, 20, 25};
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: hardware concurrency
  std::optional<VoteMode> vote_mode;  // per-kind default when unset
  std::optional<Window> noise_window;
  std::optional<std::vector<GridAxis>> grid;
  std::optional<std::size_t> historical_n;
  bool svg = false;

  /// Crossing fill for perturbation runs, which have no background clutter;
  /// column-center votes everywhere else.
  [[nodiscard]] VoteMode effective_vote_mode() const {
    if (vote_mode) return *vote_mode;
    return kind == ExperimentKind::Perturbation ? VoteMode::CrossingFill : kDefaultVoteMode;
  }

  void validate() const {
    if (runs < 1) throw argument_error("runs must be at least 1");
    for (double x : noise_levels)
      if (!(x >= 0.0) || !(x < 100.0)) throw argument_error("noise levels must lie in [0, 100)");
    for (double s : sigmas)
      if (!(s >= 0.0) || !std::isfinite(s)) throw argument_error("sigma must be non-negative");
    if (n1 && *n1 < 1) throw argument_error("n1 must be at least 1");
    for (auto v : n1_values)
      if (v < 1) throw argument_error("n1 values must be at least 1");
    if (grid && grid->size() != 2) throw argument_error("grid override needs two axes");
    if (historical_n && *historical_n < 2) throw argument_error("historical_n must be at least 2");
    if ((kind == ExperimentKind::BackgroundNoise || kind == ExperimentKind::Timing ||
         kind == ExperimentKind::N1Scaling) &&
        noise_levels.empty())
      throw argument_error("experiment needs at least one noise level");
    if (kind == ExperimentKind::Perturbation && sigmas.empty())
      throw argument_error("perturbation experiment needs at least one sigma");
    if (kind == ExperimentKind::N1Scaling && n1_values.empty())
      throw argument_error("n1_scaling experiment needs at least one n1 value");
  }
};

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["family"] = c.family;
  if (c.m) j["m"] = *c.m;
  if (c.true_params) j["true_params"] = c.true_params->coords;
  j["kind"] = experiment_kind_name(c.kind);
  j["runs"] = c.runs;
  j["noise_levels"] = c.noise_levels;
  j["sigmas"] = c.sigmas;
  if (c.n1) j["n1"] = *c.n1;
  j["n1_values"] = c.n1_values;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  if (c.vote_mode) j["vote_mode"] = vote_mode_name(*c.vote_mode);
  if (c.noise_window)
    j["noise_window"] = {{"x", {c.noise_window->x_range.lo, c.noise_window->x_range.hi}},
                         {"y", {c.noise_window->y_range.lo, c.noise_window->y_range.hi}}};
  if (c.grid) {
    j["grid"] = nlohmann::json::array();
    for (const auto& ax : *c.grid) j["grid"].push_back({{"min", ax.min}, {"max", ax.max}, {"delta", ax.delta}});
  }
  if (c.historical_n) j["historical_n"] = *c.historical_n;
  j["svg"] = c.svg;
  return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    if (!j.is_object()) throw argument_error("experiment config must be a JSON object");
    static const std::vector<std::string> kKeys = {
        "family", "m",    "true_params", "kind",    "runs",         "noise_levels", "sigmas", "n1",
        "n1_values", "seed", "threads",  "vote_mode", "noise_window", "grid", "historical_n", "svg"};
    for (const auto& [key, value] : j.items())
      if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
        throw argument_error("unknown config key '" + key + "'");
    if (j.contains("family")) c.family = j.at("family").get<std::string>();
    if (j.contains("m")) c.m = j.at("m").get<int>();
    if (j.contains("true_params")) c.true_params = ParamPoint(j.at("true_params").get<std::vector<double>>());
    if (j.contains("kind")) c.kind = parse_experiment_kind(j.at("kind").get<std::string>());
    if (j.contains("runs")) c.runs = j.at("runs").get<std::size_t>();
    if (j.contains("noise_levels")) c.noise_levels = j.at("noise_levels").get<std::vector<double>>();
    if (j.contains("sigmas")) c.sigmas = j.at("sigmas").get<std::vector<double>>();
    if (j.contains("n1")) c.n1 = j.at("n1").get<std::size_t>();
    if (j.contains("n1_values")) c.n1_values = j.at("n1_values").get<std::vector<std::size_t>>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads")) c.threads = j.at("threads").get<unsigned>();
    if (j.contains("vote_mode")) c.vote_mode = parse_vote_mode(j.at("vote_mode").get<std::string>());
    if (j.contains("noise_window")) {
      const auto& w = j.at("noise_window");
      const auto x = w.at("x").get<std::vector<double>>();
      const auto y = w.at("y").get<std::vector<double>>();
      if (x.size() != 2 || y.size() != 2) throw argument_error("noise_window needs [lo, hi] ranges");
      c.noise_window = Window({x[0], x[1]}, {y[0], y[1]});
    }
    if (j.contains("grid")) {
      std::vector<GridAxis> axes;
      for (const auto& ax : j.at("grid"))
        axes.push_back({ax.at("min").get<double>(), ax.at("max").get<double>(), ax.at("delta").get<double>()});
      c.grid = axes;
    }
    if (j.contains("historical_n")) c.historical_n = j.at("historical_n").get<std::size_t>();
    if (j.contains("svg")) c.svg = j.at("svg").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw argument_error(std::string("malformed experiment config: ") + e.what());
  }
  c.validate();
  return c;
}

inline ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw argument_error("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw argument_error("config '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Hash of everything in the config that can change results (not `threads`).
inline std::string config_hash(const ExperimentConfig& c) {
  auto j = config_to_json(c);
  j.erase("threads");
  std::ostringstream s;
  s << std::hex;
  s.width(16);
  s.fill('0');
  s << fnv1a64(j.dump());
  return s.str();
}

/// Seed of run `run` in condition `condition`. Both counters are packed into
/// one 64-bit stream index, so seeds do not depend on scheduling.
inline std::uint64_t run_seed(std::uint64_t master, std::size_t condition, std::size_t run) {
  return derive_seed(master, (static_cast<std::uint64_t>(condition) << 32) |
                                 static_cast<std::uint32_t>(run));
}

/// Stream of the perturbation experiment's fixed base point set.
inline std::uint64_t base_set_seed(std::uint64_t master) {
  return derive_seed(master, ~std::uint64_t{0});
}

struct RunRecord {
  std::size_t run = 0;
  std::uint64_t seed = 0;
  std::string status = "ok";  // "no_signal" or "sampling_error" on failure
  std::optional<RecognitionOutcome> outcome;
  double seconds = 0.0;  // timing experiments only
};

struct ConditionResult {
  std::size_t index = 0;
  std::string label;
  double noise = 0.0;
  double sigma = 0.0;
  std::size_t n1 = 0, n2 = 0;
  std::size_t runs = 0;
  std::size_t failures = 0;
  std::optional<RunSummary> summary;  // over successful runs
  std::vector<RunRecord> records;
  LabeledPoints first_points;  // point set of run 0, kept for rendering
  double seconds = 0.0;        // summed timed recognitions
  std::optional<double> ratio;
  std::string status = "ok";

  [[nodiscard]] std::size_t n() const { return n1 + n2; }
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string family;
  ParamPoint truth;
  GridSpec grid;
  std::vector<ConditionResult> conditions;
};

namespace detail {

/// Runs task(k) for k in [0, n) on `threads` workers; results go to caller
/// slots, so output does not depend on scheduling.
template <typename Task>
void parallel_for(std::size_t n, unsigned threads, Task&& task) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t k = 0; k < n; ++k) task(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < n; k = next++) task(k);
    });
  for (auto& t : pool) t.join();
}

struct ConditionPlan {
  std::string label;
  double noise = 0.0;
  double sigma = 0.0;
  std::size_t n1 = 0, n2 = 0;
  bool timed = false;
};

inline std::string fmt_label(const char* key, double v) {
  std::ostringstream s;
  s << key << '=' << v;
  return s.str();
}

inline std::vector<ConditionPlan> plan_conditions(const ExperimentConfig& c, std::size_t n1,
                                                  std::optional<std::size_t> hist_n) {
  std::vector<ConditionPlan> out;
  switch (c.kind) {
    case ExperimentKind::NoiseFree:
      out.push_back({"noise_free", 0.0, 0.0, n1, 0, false});
      break;
    case ExperimentKind::BackgroundNoise:
      for (double x : c.noise_levels)
        out.push_back({fmt_label("noise", x), x, 0.0, n1, background_count(n1, x), false});
      break;
    case ExperimentKind::Perturbation:
      for (double s : c.sigmas) out.push_back({fmt_label("sigma", s), 0.0, s, n1, 0, false});
      break;
    case ExperimentKind::N1Scaling:
      for (double x : c.noise_levels)
        for (auto v : c.n1_values)
          out.push_back({fmt_label("noise", x) + ";n1=" + std::to_string(v), x, 0.0, v,
                         background_count(v, x), false});
      break;
    case ExperimentKind::Timing:
      for (double x : c.noise_levels) {
        out.push_back({fmt_label("noise", x) + ";nu_opt", x, 0.0, n1, background_count(n1, x), true});
        const auto h1 = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(static_cast<double>(*hist_n) * (100.0 - x) / 100.0)));
        out.push_back({fmt_label("noise", x) + ";historical", x, 0.0, h1,
                       *hist_n > h1 ? *hist_n - h1 : 0, true});
      }
      break;
  }
  return out;
}

}  // namespace detail

/// Runs every condition of the configured experiment. Run failures (no vote,
/// sampling exhausted) are recorded per run and do not abort the experiment.
inline ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const FamilyDefinition fam = resolve_family(config.family, config.m);
  if (fam.t() != 2)
    throw unsupported_dimension_error("experiments need t = 2, family '" + fam.name() +
                                      "' has t = " + std::to_string(fam.t()));
  ExperimentReport report;
  report.config = config;
  report.family = fam.name();
  if (config.true_params)
    report.truth = *config.true_params;
  else if (fam.reference_params())
    report.truth = *fam.reference_params();
  else
    throw argument_error("family '" + fam.name() + "' has no reference parameters; pass true_params");
  if (report.truth.size() != 2) throw argument_error("true_params must have two values");
  report.grid = config.grid ? build_grid((*config.grid)[0], (*config.grid)[1]) : build_grid(fam);

  const std::size_t n1 = config.n1.value_or(static_cast<std::size_t>(nu_opt(fam)));
  std::optional<std::size_t> hist_n = config.historical_n;
  if (!hist_n) hist_n = historical_point_count(fam.name());
  if (config.kind == ExperimentKind::Timing && !hist_n)
    throw argument_error("no historical point count for '" + fam.name() + "'; pass historical_n");

  const CurveSampler sampler(fam, report.truth);
  Window noise_window;
  if (config.noise_window) {
    noise_window = *config.noise_window;
  } else if (sampler.extent()) {
    noise_window = *sampler.extent();
  }
  const AccumulateOptions vote_opt{config.effective_vote_mode(), 1};

  std::vector<ImagePoint> base_set;
  std::string base_status = "ok";
  if (config.kind == ExperimentKind::Perturbation) {
    try {
      Rng base_rng(base_set_seed(config.seed));
      base_set = sampler.draw(n1, base_rng);
    } catch (const sampling_error& e) {
      base_status = std::string("sampling_error: ") + e.what();
    }
  }

  const auto plans = detail::plan_conditions(config, n1, hist_n);
  for (std::size_t c = 0; c < plans.size(); ++c) {
    const auto& plan = plans[c];
    ConditionResult res;
    res.index = c;
    res.label = plan.label;
    res.noise = plan.noise;
    res.sigma = plan.sigma;
    res.n1 = plan.n1;
    res.n2 = plan.n2;
    res.runs = config.runs;
    res.records.resize(config.runs);
    std::vector<LabeledPoints> first(1);

    auto one_run = [&](std::size_t r) {
      RunRecord& rec = res.records[r];
      rec.run = r;
      rec.seed = run_seed(config.seed, c, r);
      Rng rng(rec.seed);
      LabeledPoints pts;
      try {
        if (config.kind == ExperimentKind::Perturbation) {
          if (base_status != "ok") {
            rec.status = "sampling_error";
            return;
          }
          pts.add(gaussian_perturb(base_set, plan.sigma, rng), PointLabel::Curve);
        } else {
          pts.add(sampler.draw(plan.n1, rng), PointLabel::Curve);
          if (plan.n2 > 0) pts.add(uniform_background(noise_window, plan.n2, rng), PointLabel::Noise);
        }
      } catch (const sampling_error&) {
        rec.status = "sampling_error";
        return;
      }
      try {
        const auto t0 = std::chrono::steady_clock::now();
        auto out = recognize(fam, pts.points, report.grid, report.truth, vote_opt);
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rec.outcome = std::move(out);
      } catch (const no_signal_error&) {
        rec.status = "no_signal";
      }
      if (r == 0) first[0] = std::move(pts);
    };

    if (plan.timed)
      for (std::size_t r = 0; r < config.runs; ++r) one_run(r);
    else
      detail::parallel_for(config.runs, config.threads, one_run);

    res.first_points = std::move(first[0]);
    std::vector<RecognitionOutcome> ok;
    for (const auto& rec : res.records) {
      if (rec.outcome)
        ok.push_back(*rec.outcome);
      else
        ++res.failures;
      res.seconds += rec.seconds;
    }
    if (!ok.empty()) res.summary = score_runs(ok);
    if (config.kind == ExperimentKind::Perturbation && base_status != "ok")
      res.status = base_status;
    else if (ok.empty())
      res.status = "failed";
    report.conditions.push_back(std::move(res));
  }

  if (config.kind == ExperimentKind::Timing)
    for (std::size_t c = 1; c < report.conditions.size(); c += 2) {
      const double small = report.conditions[c - 1].seconds;
      if (small > 0) report.conditions[c].ratio = report.conditions[c].seconds / small;
    }
  return report;
}

namespace detail {

inline std::string num(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

}  // namespace detail

/// Per-condition results; contains no timing, so it is reproducible byte for
/// byte from the config and seed.
inline void write_report_csv(std::ostream& out, const ExperimentReport& rep) {
  std::ostringstream s;
  s << "condition,label,family,kind,noise,sigma,n1,n2,n,runs,failures,exact,exact_rate,"
       "mean_distance,std_distance,top_a,top_b,top_rate,top_bucket,status\n";
  for (const auto& c : rep.conditions) {
    s << c.index << ',' << c.label << ',' << rep.family << ',' << experiment_kind_name(rep.config.kind)
      << ',' << detail::num(c.noise) << ',' << detail::num(c.sigma) << ',' << c.n1 << ',' << c.n2
      << ',' << c.n() << ',' << c.runs << ',' << c.failures << ',';
    if (c.summary) {
      const auto& sm = *c.summary;
      const auto& top = sm.pairs.front();
      s << sm.exact << ',' << detail::num(100.0 * sm.exact / c.runs) << ','
        << detail::num(sm.mean_distance) << ',' << detail::num(sm.std_distance) << ','
        << detail::num(top.center[0]) << ',' << detail::num(top.center[1]) << ','
        << detail::num(top.rate_percent) << ',' << bucket_name(top.bucket);
    } else {
      s << "0,0,,,,,,";
    }
    s << ',' << c.status << '\n';
  }
  out << s.str();
}

inline void write_timing_csv(std::ostream& out, const ExperimentReport& rep) {
  std::ostringstream s;
  s << "condition,label,family,n,runs,seconds,mean_seconds,ratio\n";
  for (const auto& c : rep.conditions) {
    const std::size_t done = c.runs - c.failures;
    s << c.index << ',' << c.label << ',' << rep.family << ',' << c.n() << ',' << c.runs << ','
      << detail::num(c.seconds) << ',' << (done ? detail::num(c.seconds / done) : "") << ','
      << (c.ratio ? detail::num(*c.ratio) : "") << '\n';
  }
  out << s.str();
}

inline void write_runs_csv(std::ostream& out, const ExperimentReport& rep) {
  std::ostringstream s;
  s << "condition,run,seed,status,a,b,i,j,votes,exact,distance,degenerate_skipped\n";
  for (const auto& c : rep.conditions)
    for (const auto& r : c.records) {
      s << c.index << ',' << r.run << ',' << r.seed << ',' << r.status << ',';
      if (r.outcome) {
        const auto& o = *r.outcome;
        s << detail::num(o.estimate[0]) << ',' << detail::num(o.estimate[1]) << ',' << o.cell.first
          << ',' << o.cell.second << ',' << o.votes << ',' << (o.exact ? 1 : 0) << ','
          << detail::num(o.distance) << ',' << o.degenerate_skipped;
      } else {
        s << ",,,,,,,";
      }
      s << '\n';
    }
  out << s.str();
}

/// Every distinct recognized pair per condition with its repetition bucket.
inline void write_pairs_csv(std::ostream& out, const ExperimentReport& rep) {
  std::ostringstream s;
  s << "condition,a,b,i,j,count,rate_percent,bucket\n";
  for (const auto& c : rep.conditions) {
    if (!c.summary) continue;
    for (const auto& p : c.summary->pairs)
      s << c.index << ',' << detail::num(p.center[0]) << ',' << detail::num(p.center[1]) << ','
        << p.cell.first << ',' << p.cell.second << ',' << p.count << ','
        << detail::num(p.rate_percent) << ',' << bucket_name(p.bucket) << '\n';
  }
  out << s.str();
}

inline nlohmann::json report_metadata(const ExperimentReport& rep) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["rng"] = Rng::kAlgorithm;
  j["seed"] = rep.config.seed;
  j["config_hash"] = config_hash(rep.config);
  j["config"] = config_to_json(rep.config);
  j["family"] = rep.family;
  j["true_params"] = rep.truth.coords;
  j["vote_mode"] = vote_mode_name(rep.config.effective_vote_mode());
  j["grid"] = {{"a", {rep.grid.a_min, rep.grid.a_max, rep.grid.delta_a}},
               {"b", {rep.grid.b_min, rep.grid.b_max, rep.grid.delta_b}},
               {"cells", {rep.grid.n_a, rep.grid.n_b}}};
  j["conditions"] = nlohmann::json::array();
  for (const auto& c : rep.conditions) {
    nlohmann::json row = {{"index", c.index}, {"label", c.label}, {"n1", c.n1}, {"n2", c.n2},
                          {"n", c.n()},       {"runs", c.runs},   {"failures", c.failures},
                          {"status", c.status}};
    if (c.summary) {
      row["exact_rate"] = 100.0 * static_cast<double>(c.summary->exact) / static_cast<double>(c.runs);
      row["mean_distance"] = c.summary->mean_distance;
      row["std_distance"] = c.summary->std_distance;
    }
    j["conditions"].push_back(row);
  }
  return j;
}

/// Writes report.csv, timing.csv, runs.csv, pairs.csv and report.json into `dir`.
inline void write_report_files(const ExperimentReport& rep, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name);
    if (!f) throw argument_error("cannot write '" + (dir / name).string() + "'");
    return f;
  };
  {
    auto f = open("report.csv");
    write_report_csv(f, rep);
  }
  {
    auto f = open("timing.csv");
    write_timing_csv(f, rep);
  }
  {
    auto f = open("runs.csv");
    write_runs_csv(f, rep);
  }
  {
    auto f = open("pairs.csv");
    write_pairs_csv(f, rep);
  }
  {
    auto f = open("report.json");
    f << report_metadata(rep).dump(2) << '\n';
  }
}

}  // namespace hough
