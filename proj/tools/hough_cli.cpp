// Command-line front end: family bounds, HT-matrices, single recognitions,
// experiment sweeps and SVG renders.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hough/hough.hpp"

namespace fs = std::filesystem;
using namespace hough;

namespace {

enum Exit { kOk = 0, kArgument = 2, kNoSignal = 3, kSampling = 4 };

struct FamilyArgs {
  std::string family;
  std::optional<int> m;
};

void add_family(CLI::App* cmd, FamilyArgs& f) {
  cmd->add_option("--family", f.family, "built-in family name or path to a family JSON file")
      ->required();
  cmd->add_option("--m", f.m, "exponent of the Lamet family (even, >= 4)");
}

FamilyDefinition load(const FamilyArgs& f) { return resolve_family(f.family, f.m); }

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw argument_error("cannot open '" + path + "'");
  return in;
}

std::ofstream open_out(const std::string& path) {
  if (const auto dir = fs::path(path).parent_path(); !dir.empty()) fs::create_directories(dir);
  std::ofstream out(path);
  if (!out) throw argument_error("cannot write '" + path + "'");
  return out;
}

ParamPoint param_point(const std::vector<double>& v, const char* flag) {
  if (v.empty()) throw argument_error(std::string(flag) + " needs values");
  return ParamPoint(v);
}

std::optional<GridSpec> grid_from_flag(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  if (v.size() != 6) throw argument_error("--grid takes a_min,a_max,delta_a,b_min,b_max,delta_b");
  return build_grid(v[0], v[1], v[2], v[3], v[4], v[5]);
}

std::optional<Window> window_from_flag(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  if (v.size() != 4) throw argument_error("window takes x_min,x_max,y_min,y_max");
  return Window({v[0], v[1]}, {v[2], v[3]});
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// ---- bounds ----------------------------------------------------------------

struct BoundsArgs {
  FamilyArgs fam;
  std::string points;
};

int run_bounds(const BoundsArgs& a) {
  const auto fam = load(a.fam);
  const auto support = generic_support(fam);
  std::cout << "family: " << fam.name() << '\n'
            << "t: " << fam.t() << '\n'
            << "d: " << fam.d() << '\n'
            << "base_points: " << fam.base_points().size() << '\n'
            << "nu_opt: " << nu_opt(fam) << '\n'
            << "s: " << support.s() << '\n'
            << "nu_best_prime: " << nu_best_prime(fam) << '\n';
  if (!a.points.empty()) {
    auto in = open_in(a.points);
    const auto pts = read_exact_points_csv(in);
    const auto m = ht_matrix(fam, pts);
    std::cout << "points: " << pts.size() << '\n' << "nu_best: " << nu_best(m) << '\n' << "generators:";
    for (auto r : select_generator_rows(m)) std::cout << ' ' << r;
    std::cout << '\n';
  }
  return kOk;
}

// ---- ht-matrix -------------------------------------------------------------

struct MatrixArgs {
  FamilyArgs fam;
  std::string points;
  std::string out;
};

int run_ht_matrix(const MatrixArgs& a) {
  const auto fam = load(a.fam);
  auto in = open_in(a.points);
  const auto m = ht_matrix(fam, read_exact_points_csv(in));
  if (a.out.empty()) {
    write_ht_matrix_csv(std::cout, m, fam.param_names());
    std::cerr << "rank: " << nu_best(m) << '\n';
  } else {
    auto out = open_out(a.out);
    write_ht_matrix_csv(out, m, fam.param_names());
    std::cout << "rows: " << m.rows.size() << '\n'
              << "columns: " << m.support.s() << '\n'
              << "rank: " << nu_best(m) << '\n';
  }
  return kOk;
}

// ---- sample / recognize ----------------------------------------------------

struct SampleArgs {
  FamilyArgs fam;
  std::vector<double> truth;
  std::optional<std::size_t> n1;
  double noise = 0.0;
  double sigma = 0.0;
  std::uint64_t seed = 1;
  std::vector<double> window;
};

/// n1 on-curve points, optionally perturbed, plus background noise.
LabeledPoints synthesize(const FamilyDefinition& fam, const SampleArgs& a) {
  const auto lambda = param_point(a.truth, "--true-params");
  const std::size_t n1 = a.n1.value_or(static_cast<std::size_t>(nu_opt(fam)));
  if (n1 < 1) throw argument_error("--n1 must be at least 1");
  if (a.sigma < 0) throw argument_error("--sigma must be non-negative");
  const std::size_t n2 = background_count(n1, a.noise);
  Rng rng(a.seed);
  const CurveSampler sampler(fam, lambda);
  LabeledPoints set;
  set.add(gaussian_perturb(sampler.draw(n1, rng), a.sigma, rng), PointLabel::Curve);
  if (n2 > 0) {
    auto w = window_from_flag(a.window);
    if (!w) w = sampler.extent();
    if (!w) throw sampling_error("no background window for '" + fam.name() + "'");
    set.add(uniform_background(*w, n2, rng), PointLabel::Noise);
  }
  return set;
}

int run_sample(const SampleArgs& a, const std::string& out_path) {
  const auto fam = load(a.fam);
  if (a.truth.empty()) throw argument_error("sample needs --true-params");
  const auto set = synthesize(fam, a);
  if (out_path.empty()) {
    write_points_csv(std::cout, set);
  } else {
    auto out = open_out(out_path);
    write_points_csv(out, set);
  }
  return kOk;
}

struct RecognizeArgs {
  SampleArgs sample;
  std::string points;
  std::vector<double> grid;
  std::string vote_mode = vote_mode_name(kDefaultVoteMode);
  unsigned threads = 1;
  std::string dump_accumulator;
  std::string accumulator_svg;
  std::string out;
};

int run_recognize(const RecognizeArgs& a) {
  const auto fam = load(a.sample.fam);
  LabeledPoints set;
  if (!a.points.empty()) {
    auto in = open_in(a.points);
    set = read_points_csv(in);
  } else if (!a.sample.truth.empty()) {
    set = synthesize(fam, a.sample);
  } else {
    throw argument_error("recognize needs --points or --true-params");
  }
  if (set.size() == 0) throw argument_error("no points to recognize");
  std::optional<ParamPoint> truth;
  if (!a.sample.truth.empty()) truth = param_point(a.sample.truth, "--true-params");
  auto spec = grid_from_flag(a.grid);
  if (!spec) spec = build_grid(fam);
  AccumulatorGrid acc(*spec);
  const bool keep = !a.dump_accumulator.empty() || !a.accumulator_svg.empty();
  const auto o = recognize(fam, set.points, *spec, truth, {parse_vote_mode(a.vote_mode), a.threads},
                           keep ? &acc : nullptr);
  std::cout << "points: " << set.size() << '\n'
            << "grid: " << spec->n_a << " x " << spec->n_b << '\n'
            << "estimate: " << fmt(o.estimate[0]) << ' ' << fmt(o.estimate[1]) << '\n'
            << "cell: " << o.cell.first << ' ' << o.cell.second << '\n'
            << "votes: " << o.votes << '\n'
            << "degenerate_skipped: " << o.degenerate_skipped << '\n';
  if (truth)
    std::cout << "exact: " << (o.exact ? "true" : "false") << '\n'
              << "distance: " << fmt(o.distance) << '\n';
  if (!a.dump_accumulator.empty()) {
    auto f = open_out(a.dump_accumulator);
    write_accumulator_csv(f, acc);
  }
  if (!a.accumulator_svg.empty()) {
    auto f = open_out(a.accumulator_svg);
    render_accumulator_svg(f, acc, fam.param_names());
  }
  if (!a.out.empty()) {
    fs::create_directories(a.out);
    auto pf = open_out((fs::path(a.out) / "points.csv").string());
    write_points_csv(pf, set);
    auto of = open_out((fs::path(a.out) / "outcome.csv").string());
    write_outcome_csv_header(of);
    write_outcome_csv_row(of, o);
  }
  return kOk;
}

// ---- experiment ------------------------------------------------------------

struct ExperimentArgs {
  std::string config;
  std::string family;
  std::optional<int> m;
  std::string kind;
  std::vector<double> truth;
  std::optional<std::size_t> runs;
  std::vector<double> noise;
  std::vector<double> sigma;
  std::optional<std::size_t> n1;
  std::vector<std::size_t> n1_values;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string vote_mode;
  std::vector<double> noise_window;
  bool svg = false;
  std::string out = "report";
};

void write_overlays(const ExperimentReport& rep, const fs::path& dir) {
  const auto fam = resolve_family(rep.config.family, rep.config.m);
  for (const auto& c : rep.conditions) {
    {
      auto f = open_out((dir / ("points_" + std::to_string(c.index) + ".csv")).string());
      write_points_csv(f, c.first_points);
    }
    if (!rep.config.svg || !c.summary) continue;
    Window view = rep.config.noise_window ? *rep.config.noise_window
                                          : default_noise_window(fam, rep.truth);
    auto f = open_out((dir / ("overlay_" + std::to_string(c.index) + ".svg")).string());
    render_overlay_svg(f, fam, c.first_points, bucket_curves(*c.summary), view);
  }
}

int run_experiment_cmd(const ExperimentArgs& a) {
  ExperimentConfig cfg = a.config.empty() ? ExperimentConfig{} : load_config_file(a.config);
  if (!a.family.empty()) cfg.family = a.family;
  if (a.m) cfg.m = a.m;
  if (!a.kind.empty()) cfg.kind = parse_experiment_kind(a.kind);
  if (!a.truth.empty()) cfg.true_params = param_point(a.truth, "--true-params");
  if (a.runs) cfg.runs = *a.runs;
  if (!a.noise.empty()) cfg.noise_levels = a.noise;
  if (!a.sigma.empty()) cfg.sigmas = a.sigma;
  if (a.n1) cfg.n1 = a.n1;
  if (!a.n1_values.empty()) cfg.n1_values = a.n1_values;
  if (a.seed) cfg.seed = *a.seed;
  if (a.threads) cfg.threads = *a.threads;
  if (!a.vote_mode.empty()) cfg.vote_mode = parse_vote_mode(a.vote_mode);
  if (auto w = window_from_flag(a.noise_window)) cfg.noise_window = w;
  if (a.svg) cfg.svg = true;
  cfg.validate();

  const auto rep = run_experiment(cfg);
  const fs::path dir(a.out);
  write_report_files(rep, dir);
  write_overlays(rep, dir);

  std::printf("%-22s %6s %6s %6s %9s %20s %s\n", "condition", "N1", "N2", "N", "exact%",
              "distance", "seconds");
  for (const auto& c : rep.conditions) {
    std::string dist = "-", rate = "-";
    if (c.summary) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3g +- %.3g", c.summary->mean_distance, c.summary->std_distance);
      dist = buf;
      std::snprintf(buf, sizeof buf, "%.1f", 100.0 * c.summary->exact / c.runs);
      rate = buf;
    }
    std::printf("%-22s %6zu %6zu %6zu %9s %20s %.3f", c.label.c_str(), c.n1, c.n2, c.n(),
                rate.c_str(), dist.c_str(), c.seconds);
    if (c.ratio) std::printf("  ratio %.2f", *c.ratio);
    if (c.status != "ok") std::printf("  [%s]", c.status.c_str());
    std::printf("\n");
  }
  std::cout << "report written to " << dir.string() << '\n';
  return kOk;
}

// ---- render ----------------------------------------------------------------

struct RenderArgs {
  FamilyArgs fam;
  std::string points;
  std::vector<double> params;
  std::vector<double> truth;
  std::string report;
  std::size_t condition = 0;
  std::vector<double> window;
  std::string out;
};

/// Recognized pairs of one condition from a report directory's pairs.csv.
std::vector<SvgCurve> curves_from_report(const fs::path& dir, std::size_t condition) {
  auto in = open_in((dir / "pairs.csv").string());
  std::vector<SvgCurve> out;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() < 8 || std::stoul(f[0]) != condition) continue;
    Bucket b = Bucket::None;
    for (auto k : {Bucket::Cyan, Bucket::Green, Bucket::Yellow, Bucket::Orange, Bucket::Red,
                   Bucket::Magenta})
      if (f[7] == bucket_name(k)) b = k;
    if (b == Bucket::None) continue;
    out.push_back({ParamPoint{std::stod(f[1]), std::stod(f[2])}, bucket_color(b), false});
  }
  std::reverse(out.begin(), out.end());
  return out;
}

int run_render(const RenderArgs& a) {
  const auto fam = load(a.fam);
  LabeledPoints set;
  std::string points = a.points;
  if (points.empty() && !a.report.empty()) {
    const auto p = fs::path(a.report) / ("points_" + std::to_string(a.condition) + ".csv");
    if (fs::exists(p)) points = p.string();
  }
  if (!points.empty()) {
    auto in = open_in(points);
    set = read_points_csv(in);
  }
  std::vector<SvgCurve> curves;
  if (!a.report.empty()) curves = curves_from_report(a.report, a.condition);
  if (!a.params.empty()) {
    if (a.params.size() % static_cast<std::size_t>(fam.t()) != 0)
      throw argument_error("--params must hold whole parameter tuples");
    for (std::size_t k = 0; k < a.params.size(); k += fam.t())
      curves.push_back({ParamPoint(std::vector<double>(a.params.begin() + k, a.params.begin() + k + fam.t())),
                        bucket_color(Bucket::Magenta), false});
  }
  if (!a.truth.empty()) curves.insert(curves.begin(), {param_point(a.truth, "--truth"), "#000000", true});
  if (set.size() == 0 && curves.empty()) throw argument_error("render needs points or curves");

  auto view = window_from_flag(a.window);
  if (!view && !curves.empty()) {
    try {
      view = default_noise_window(fam, a.truth.empty() ? curves.back().lambda : ParamPoint(a.truth));
    } catch (const sampling_error&) {
    }
  }
  if (!view) {
    if (set.size() == 0) throw argument_error("render needs --window");
    double x0 = set.points[0].x, x1 = x0, y0 = set.points[0].y, y1 = y0;
    for (const auto& p : set.points) {
      x0 = std::min(x0, p.x), x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
    }
    const double pad = 0.05 * std::max({x1 - x0, y1 - y0, 1e-6});
    view = Window({x0 - pad, x1 + pad}, {y0 - pad, y1 + pad});
  }
  auto out = open_out(a.out);
  render_overlay_svg(out, fam, set, curves, *view);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hough-transform recognition of algebraic curve families"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  BoundsArgs bounds;
  auto* c_bounds = app.add_subcommand("bounds", "print degree, base locus and point-count bounds");
  add_family(c_bounds, bounds.fam);
  c_bounds->add_option("--points", bounds.points, "CSV of points (x,y); exact decimals or p/q");

  MatrixArgs matrix;
  auto* c_matrix = app.add_subcommand("ht-matrix", "write the HT-matrix of a point set as CSV");
  add_family(c_matrix, matrix.fam);
  c_matrix->add_option("--points", matrix.points, "CSV of points")->required();
  c_matrix->add_option("--out", matrix.out, "output CSV (stdout when omitted)");

  auto add_sampling = [](CLI::App* cmd, SampleArgs& s) {
    add_family(cmd, s.fam);
    cmd->add_option("--true-params", s.truth, "curve parameters, comma separated")->delimiter(',');
    cmd->add_option("--n1", s.n1, "on-curve points (default nu_opt)");
    cmd->add_option("--noise", s.noise, "background noise percentage in [0, 100)");
    cmd->add_option("--sigma", s.sigma, "Gaussian perturbation of on-curve points");
    cmd->add_option("--seed", s.seed, "random seed");
    cmd->add_option("--noise-window", s.window, "x_min,x_max,y_min,y_max")->delimiter(',');
  };

  SampleArgs sample;
  std::string sample_out;
  auto* c_sample = app.add_subcommand("sample", "write a synthetic point set as CSV");
  add_sampling(c_sample, sample);
  c_sample->add_option("--out", sample_out, "output CSV (stdout when omitted)");

  RecognizeArgs rec;
  auto* c_rec = app.add_subcommand("recognize", "recognize one curve from a point set");
  add_sampling(c_rec, rec.sample);
  c_rec->add_option("--points", rec.points, "CSV of points; synthesized from --true-params when omitted");
  c_rec->add_option("--grid", rec.grid, "a_min,a_max,delta_a,b_min,b_max,delta_b")->delimiter(',');
  c_rec->add_option("--vote-mode", rec.vote_mode, "column or crossing");
  c_rec->add_option("--threads", rec.threads, "voting threads");
  c_rec->add_option("--dump-accumulator", rec.dump_accumulator, "write accumulator counts as CSV");
  c_rec->add_option("--accumulator-svg", rec.accumulator_svg, "write accumulator heatmap as SVG");
  c_rec->add_option("--out", rec.out, "directory for points.csv and outcome.csv");

  ExperimentArgs exp;
  auto* c_exp = app.add_subcommand("experiment", "run a seeded multi-run experiment");
  c_exp->add_option("--config", exp.config, "JSON experiment config; flags override it");
  c_exp->add_option("--family", exp.family, "family name or JSON path");
  c_exp->add_option("--m", exp.m, "exponent of the Lamet family");
  c_exp->add_option("--kind", exp.kind,
                    "noise_free, background_noise, perturbation, timing or n1_scaling");
  c_exp->add_option("--true-params", exp.truth, "curve parameters")->delimiter(',');
  c_exp->add_option("--runs", exp.runs, "runs per condition");
  c_exp->add_option("--noise", exp.noise, "noise percentages")->delimiter(',');
  c_exp->add_option("--sigma", exp.sigma, "perturbation sigmas")->delimiter(',');
  c_exp->add_option("--n1", exp.n1, "on-curve points (default nu_opt)");
  c_exp->add_option("--n1-values", exp.n1_values, "N1 values for n1_scaling")->delimiter(',');
  c_exp->add_option("--seed", exp.seed, "master seed");
  c_exp->add_option("--threads", exp.threads, "worker threads (0: all cores)");
  c_exp->add_option("--vote-mode", exp.vote_mode, "column or crossing (default: crossing for perturbation, else column)");
  c_exp->add_option("--noise-window", exp.noise_window, "x_min,x_max,y_min,y_max")->delimiter(',');
  c_exp->add_flag("--svg", exp.svg, "write an overlay SVG per condition");
  c_exp->add_option("--out", exp.out, "report directory");

  RenderArgs render;
  auto* c_render = app.add_subcommand("render", "draw points and curves as SVG");
  add_family(c_render, render.fam);
  c_render->add_option("--points", render.points, "CSV of points");
  c_render->add_option("--params", render.params, "curve parameters, tuples concatenated")->delimiter(',');
  c_render->add_option("--truth", render.truth, "ground-truth parameters, drawn dashed")->delimiter(',');
  c_render->add_option("--report", render.report, "experiment report directory");
  c_render->add_option("--condition", render.condition, "condition index within the report");
  c_render->add_option("--window", render.window, "x_min,x_max,y_min,y_max")->delimiter(',');
  c_render->add_option("--out", render.out, "output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kArgument;
  }

  try {
    if (*c_bounds) return run_bounds(bounds);
    if (*c_matrix) return run_ht_matrix(matrix);
    if (*c_sample) return run_sample(sample, sample_out);
    if (*c_rec) return run_recognize(rec);
    if (*c_exp) return run_experiment_cmd(exp);
    if (*c_render) return run_render(render);
  } catch (const argument_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kArgument;
  } catch (const unsupported_dimension_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kArgument;
  } catch (const degenerate_point_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kArgument;
  } catch (const no_signal_error& e) {
    std::cerr << "recognition failed: " << e.what() << '\n';
    return kNoSignal;
  } catch (const sampling_error& e) {
    std::cerr << "sampling failed: " << e.what() << '\n';
    return kSampling;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kOk;
}
