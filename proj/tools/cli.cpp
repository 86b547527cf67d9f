#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "specforge/dataset.hpp"
#include "specforge/error.hpp"
#include "specforge/evaluation.hpp"
#include "specforge/generators.hpp"
#include "specforge/render.hpp"
#include "specforge/spec.hpp"
#include "specforge/specset_io.hpp"
#include "specforge/verifier.hpp"

namespace specforge::cli {

namespace {

using nlohmann::json;

struct SynthArgs {
  std::string kind;
  int per_class = 300;
  int classes = 3;
  double noise = 0.2;
  std::string shape = "wound";
  std::size_t length = 2000;
  std::size_t window = 4;
  std::string from;
  std::string column = "0";
  int bins = 0;
  std::uint64_t seed = 0;
  std::string out;
};

struct GenArgs {
  std::string dataset;
  std::string algo = "tree";
  std::string task = "classification";
  std::string label = "label";
  double split = 0.9;
  std::uint64_t seed = 0;
  bool no_shuffle = false;
  bool presplit = false;
  int beta = 10;
  int k = 30;
  int max_iters = 300;
  int max_depth = -1;
  int min_leaf = 1;
  int min_split = 2;
  int bins = 10;
  double cell_cap = kDefaultCellCap;
  std::string out = "specs.json";
  std::string eval_out;
};

struct EvalArgs {
  std::string specs;
  std::string dataset;
  std::string label = "label";
  double alpha = 0.1;
  bool per_point = false;
  std::string out;
};

struct VerifyArgs {
  std::string network;
  std::string specs;
  std::string probe;
  std::string label = "label";
  std::size_t budget = 10000;
  std::uint64_t seed = 0;
  std::size_t max_cex = 10;
  std::string out;
  std::string cex_out;
};

struct RenderArgs {
  std::string specs;
  std::string dataset;
  std::string label = "label";
  std::string title;
  std::string out = "specs.svg";
};

double cell_cap_from_env() {
  if (const char* env = std::getenv("SPECFORGE_CELL_CAP")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) {
      throw std::invalid_argument(std::string("SPECFORGE_CELL_CAP='") + env +
                                  "' is not a positive number");
    }
    return v;
  }
  return kDefaultCellCap;
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  Dataset data;
  json meta;
  if (a.kind == "spiral") {
    data = synth_spiral(a.per_class, a.classes, a.noise, a.seed,
                        parse_spiral_shape(a.shape));
    meta = {{"kind", "spiral"}, {"per_class", a.per_class}, {"classes", a.classes},
            {"noise", a.noise}, {"shape", a.shape}, {"seed", a.seed}};
  } else {
    std::vector<double> series;
    if (!a.from.empty()) {
      series = load_csv_column(a.from, a.column);
    } else {
      series = synth_throughput_series(a.length + a.window, a.seed);
    }
    data = window_timeseries(series, a.window);
    if (a.bins > 0) data = bin_labels(data, a.bins, /*bin_features=*/true);
    meta = {{"kind", "timeseries"}, {"window", a.window}, {"bins", a.bins},
            {"seed", a.seed}, {"from", a.from}};
  }
  save_csv(data, a.out);
  out << "wrote " << data.rows() << " rows x " << data.cols() << " features to "
      << a.out << "  " << meta.dump() << '\n';
  return kExitOk;
}

std::string default_eval_path(const std::string& spec_path) {
  std::filesystem::path p(spec_path);
  p.replace_extension(".eval.csv");
  return p.string();
}

int cmd_gen(const GenArgs& a, double env_cap, bool cap_given, std::ostream& out) {
  SpecSet set;
  json run = {{"algo", a.algo}};
  std::optional<DatasetStats> full_stats;

  if (a.algo == "human") {
    set = gen_human_throughput(a.bins);
    if (!a.dataset.empty()) {
      const Dataset data = load_csv(a.dataset, a.label, TaskKind::Classification);
      if (data.cols() != 4) {
        throw DataError("human specs need 4 binned features, dataset has " +
                        std::to_string(data.cols()));
      }
      full_stats = compute_stats(data);
      run["dataset"] = a.dataset;
    }
  } else {
    if (a.dataset.empty()) throw std::invalid_argument("gen needs a dataset path");
    const TaskKind task = parse_task(a.task);
    const Dataset data = load_csv(a.dataset, a.label, task);
    full_stats = compute_stats(data);
    run.update({{"dataset", a.dataset}, {"label", a.label}, {"task", a.task}});

    Dataset gen = data;
    if (!a.presplit) {
      SplitOptions opts{a.split, a.seed, !a.no_shuffle};
      auto [g, e] = split(data, opts);
      gen = std::move(g);
      const std::string eval_path =
          a.eval_out.empty() ? default_eval_path(a.out) : a.eval_out;
      save_csv(e, eval_path, a.label);
      run.update({{"split", a.split}, {"shuffle", !a.no_shuffle},
                  {"eval_out", eval_path}, {"gen_rows", gen.rows()},
                  {"eval_rows", e.rows()}});
    } else {
      run["presplit"] = true;
    }
    run["seed"] = a.seed;

    if (a.algo == "grid") {
      set = gen_grid(gen, a.beta, task, cap_given ? a.cell_cap : env_cap);
    } else if (a.algo == "cluster") {
      set = gen_cluster(gen, ClusterParams{a.k, a.max_iters, a.seed}, task);
    } else {
      TreeParams tp;
      if (a.max_depth >= 0) tp.max_depth = a.max_depth;
      tp.min_samples_leaf = a.min_leaf;
      tp.min_samples_split = std::max(a.min_split, a.min_leaf + 1);
      tp.seed = a.seed;
      set = gen_tree(gen, tp, task);
    }
  }
  set.params["run"] = run;
  set.data_stats = full_stats;
  save_specset(set, a.out);
  out << "wrote " << set.specs.size() << " " << set.generator << " specs to "
      << a.out << '\n';
  return kExitOk;
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const SpecSet set = load_specset(a.specs);
  const Dataset eval = load_csv(a.dataset, a.label, set.task);
  if (set.feature_dim != eval.cols()) {
    throw DataError("spec file '" + a.specs + "' has feature_dim " +
                    std::to_string(set.feature_dim) + " but dataset '" +
                    a.dataset + "' has " + std::to_string(eval.cols()) +
                    " features");
  }
  DatasetStats stats = compute_stats(eval);
  if (set.data_stats) stats = merge_stats(*set.data_stats, stats);
  EvalOptions opts{a.alpha, a.per_point};
  const EvalReport report = evaluate(set, eval, stats, opts);
  print_report_table(out, set.generator.empty() ? "specs" : set.generator, report);
  if (report.specs_filtered > 0) {
    out << report.specs_filtered << " of " << set.specs.size()
        << " specs removed by the output-range filter (alpha=" << a.alpha << ")\n";
  }
  if (!a.out.empty()) {
    json doc = report_to_json(report);
    doc["alpha"] = a.alpha;
    doc["specs"] = a.specs;
    doc["dataset"] = a.dataset;
    doc["generator"] = set.generator;
    std::ofstream f(a.out);
    if (!f) throw DataError("cannot write '" + a.out + "'");
    f << doc.dump(2) << '\n';
  }
  return kExitOk;
}

void write_counterexamples(const std::string& path, const VerifySummary& summary,
                           std::size_t in_dim, std::size_t out_dim) {
  std::ofstream f(path);
  if (!f) throw DataError("cannot write '" + path + "'");
  f << std::setprecision(std::numeric_limits<double>::max_digits10);
  f << "spec_index,provenance,source";
  for (std::size_t j = 0; j < in_dim; ++j) f << ",x" << j;
  for (std::size_t j = 0; j < out_dim; ++j) f << ",out" << j;
  f << ",expected\n";
  for (const auto& c : summary.counterexamples) {
    f << c.spec_index << ",\"" << c.provenance << "\"," << to_string(c.source);
    for (double v : c.input) f << ',' << v;
    for (double v : c.output) f << ',' << v;
    f << ",\"" << describe(c.expected) << "\"\n";
  }
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const Network net = load_network(a.network);
  const SpecSet set = load_specset(a.specs);
  std::optional<Dataset> probe;
  std::optional<DatasetStats> stats = set.data_stats;
  if (!a.probe.empty()) {
    probe = load_csv(a.probe, a.label, set.task);
    stats = stats ? merge_stats(*stats, compute_stats(*probe)) : compute_stats(*probe);
  }
  SamplerConfig sampler{a.budget, a.seed, a.max_cex};
  const VerifySummary summary =
      verify_all(net, set, stats, sampler, probe ? &*probe : nullptr);

  out << "verified " << summary.verified << ", violated " << summary.violated
      << ", unknown " << summary.unknown << " of " << set.specs.size() << " specs\n";
  for (std::size_t i = 0; i < summary.results.size(); ++i) {
    const auto& r = summary.results[i];
    if (r.status != VerifyStatus::Violated) continue;
    const auto& c = r.counterexamples.front();
    out << "  spec " << i << " (" << set.specs[i].provenance << ") expects "
        << describe(set.specs[i].output) << "; input [";
    for (std::size_t j = 0; j < c.input.size(); ++j) out << (j ? ", " : "") << c.input[j];
    out << "] gives [";
    for (std::size_t j = 0; j < c.output.size(); ++j) out << (j ? ", " : "") << c.output[j];
    out << "] (" << to_string(c.source) << ")\n";
  }

  const std::string cex_path =
      a.cex_out.empty() ? std::string("counterexamples.csv") : a.cex_out;
  write_counterexamples(cex_path, summary, net.input_dim(), net.output_dim());

  if (!a.out.empty()) {
    json results = json::array();
    for (std::size_t i = 0; i < summary.results.size(); ++i) {
      const auto& r = summary.results[i];
      results.push_back({{"spec_index", i},
                         {"provenance", set.specs[i].provenance},
                         {"status", to_string(r.status)},
                         {"clamped", r.clamped},
                         {"output_lower", r.output_bounds.lower},
                         {"output_upper", r.output_bounds.upper},
                         {"counterexamples", r.counterexamples.size()}});
    }
    json doc = {{"network", a.network}, {"specs", a.specs},
                {"budget", a.budget},   {"seed", a.seed},
                {"verified", summary.verified}, {"violated", summary.violated},
                {"unknown", summary.unknown},   {"counterexample_file", cex_path},
                {"results", results}};
    std::ofstream f(a.out);
    if (!f) throw DataError("cannot write '" + a.out + "'");
    f << doc.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_render(const RenderArgs& a, std::ostream& out) {
  const SpecSet set = load_specset(a.specs);
  if (set.feature_dim != 2) {
    throw std::invalid_argument("render needs 2-D specs; '" + a.specs +
                                "' has feature_dim " +
                                std::to_string(set.feature_dim));
  }
  const Dataset data = load_csv(a.dataset, a.label, set.task);
  RenderOptions opts;
  opts.title = a.title.empty() ? set.generator + " specs" : a.title;
  write_svg(render_svg(set, data, opts), a.out);
  out << "wrote " << a.out << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mine, score and verify hyperrectangle input/output specifications"};
  app.name("specforge");
  app.require_subcommand(1);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Write a synthetic dataset CSV");
  s->add_option("kind", synth.kind, "spiral or timeseries")
      ->required()
      ->check(CLI::IsMember({"spiral", "timeseries"}));
  s->add_option("--per-class", synth.per_class, "Spiral points per class")
      ->check(CLI::PositiveNumber);
  s->add_option("--classes", synth.classes, "Spiral arms")->check(CLI::Range(2, 1000));
  s->add_option("--noise", synth.noise, "Spiral angular noise std")
      ->check(CLI::NonNegativeNumber);
  s->add_option("--shape", synth.shape, "Spiral arm shape: wound (1.5 turns) or open")
      ->check(CLI::IsMember({"wound", "open"}));
  s->add_option("--length", synth.length, "Synthetic series windows");
  s->add_option("--window", synth.window, "History length per row")
      ->check(CLI::PositiveNumber);
  s->add_option("--from", synth.from, "Window an existing series CSV instead");
  s->add_option("--column", synth.column, "Series column name or index");
  s->add_option("--bins", synth.bins, "Bin labels and features into N levels (0 = off)")
      ->check(CLI::Range(0, 1000));
  s->add_option("--seed", synth.seed, "Random seed");
  s->add_option("--out", synth.out, "Output CSV")->required();

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a specification set");
  g->add_option("dataset", gen.dataset, "Dataset CSV (optional for --algo human)");
  g->add_option("--algo", gen.algo, "Generator")
      ->check(CLI::IsMember({"grid", "cluster", "tree", "human"}));
  g->add_option("--task", gen.task, "classification or regression")
      ->check(CLI::IsMember({"classification", "regression"}));
  g->add_option("--label", gen.label, "Label column name or index");
  g->add_option("--split", gen.split, "Generation fraction")
      ->check(CLI::Range(0.0, 1.0));
  g->add_option("--seed", gen.seed, "Split / clustering seed");
  g->add_flag("--no-shuffle", gen.no_shuffle, "Chronological split");
  g->add_flag("--presplit", gen.presplit, "Use the whole dataset for generation");
  g->add_option("--beta", gen.beta, "Grid cells per axis")->check(CLI::PositiveNumber);
  g->add_option("--k", gen.k, "Clusters")->check(CLI::PositiveNumber);
  g->add_option("--max-iters", gen.max_iters, "k-means iterations")
      ->check(CLI::PositiveNumber);
  g->add_option("--max-depth", gen.max_depth, "Tree depth limit (-1 = unlimited)");
  g->add_option("--min-leaf", gen.min_leaf, "Minimum samples per leaf")
      ->check(CLI::PositiveNumber);
  g->add_option("--min-split", gen.min_split, "Minimum samples to split")
      ->check(CLI::Range(2, std::numeric_limits<int>::max()));
  g->add_option("--bins", gen.bins, "Bins for the human baseline")
      ->check(CLI::Range(2, 1000));
  auto* cap_opt = g->add_option("--cell-cap", gen.cell_cap, "Grid cell cap")
                      ->check(CLI::PositiveNumber);
  g->add_option("--out", gen.out, "Spec file to write");
  g->add_option("--eval-out", gen.eval_out, "Where to write the evaluation fold");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Score a specification set");
  e->add_option("specs", ev.specs, "Spec file")->required();
  e->add_option("dataset", ev.dataset, "Evaluation CSV")->required();
  e->add_option("--label", ev.label, "Label column name or index");
  e->add_option("--alpha", ev.alpha, "Output-range filter fraction")
      ->check(CLI::Range(0.0, 1.0));
  e->add_flag("--per-point", ev.per_point, "Include per-point verdicts in --out");
  e->add_option("--out", ev.out, "JSON report path");

  VerifyArgs vf;
  auto* v = app.add_subcommand("verify", "Check a network against a specification set");
  v->add_option("network", vf.network, "Network JSON")->required();
  v->add_option("specs", vf.specs, "Spec file")->required();
  v->add_option("--probe", vf.probe, "Dataset whose rows are tried as counterexamples");
  v->add_option("--label", vf.label, "Label column of the probe dataset");
  v->add_option("--budget", vf.budget, "Random samples per unproven spec");
  v->add_option("--seed", vf.seed, "Sampling seed");
  v->add_option("--max-cex", vf.max_cex, "Counterexamples kept per spec")
      ->check(CLI::PositiveNumber);
  v->add_option("--out", vf.out, "JSON report path");
  v->add_option("--cex-out", vf.cex_out, "Counterexample CSV path");

  RenderArgs rd;
  auto* r = app.add_subcommand("render", "Draw 2-D specs and points as SVG");
  r->add_option("specs", rd.specs, "Spec file")->required();
  r->add_option("dataset", rd.dataset, "Dataset CSV")->required();
  r->add_option("--label", rd.label, "Label column name or index");
  r->add_option("--title", rd.title, "Figure title");
  r->add_option("--out", rd.out, "SVG path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*s) return cmd_synth(synth, out);
    if (*g) return cmd_gen(gen, cell_cap_from_env(), cap_opt->count() > 0, out);
    if (*e) return cmd_eval(ev, out);
    if (*v) return cmd_verify(vf, out);
    if (*r) return cmd_render(rd, out);
  } catch (const std::invalid_argument& ex) {
    err << "usage error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace specforge::cli
