#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rankmetrics/complementarity.hpp"
#include "rankmetrics/error.hpp"
#include "rankmetrics/format.hpp"
#include "rankmetrics/kemeny.hpp"
#include "rankmetrics/prediction.hpp"
#include "rankmetrics/scoreset.hpp"
#include "rankmetrics/structure.hpp"
#include "rankmetrics/svg.hpp"
#include "rankmetrics/synthetic.hpp"

#ifndef RANKMETRICS_VERSION
#define RANKMETRICS_VERSION "0.0.0"
#endif

namespace rankmetrics::cli {

namespace {

using Json = nlohmann::ordered_json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidArgument:
      return kExitInput;
    case ErrorCode::DegenerateMatrix:
    case ErrorCode::NumericalFailure:
      return kExitNumerical;
    default:
      return kExitValidation;
  }
}

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out.push_back(sep);
    out += items[i];
  }
  return out;
}

std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

// Run context shared by every writer: provenance stamp and output location.
class Emitter {
 public:
  explicit Emitter(const RunConfig& config) : config_(config) {
    std::filesystem::create_directories(config.out);
  }

  std::string stamp() const {
    return "tool=rankmetrics version=" + std::string(version()) + " seed=" + std::to_string(config_.seed) +
           " config=" + config_.hash();
  }

  Json meta() const {
    Json m;
    m["tool"] = "rankmetrics";
    m["version"] = std::string(version());
    m["seed"] = config_.seed;
    m["config_hash"] = config_.hash();
    m["command"] = config_.command;
    return m;
  }

  void write(const std::string& name, const std::string& content, std::ostream& log) const {
    const auto path = config_.out / name;
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
    file << content;
    if (!file) throw Error(ErrorCode::ParseError, "failed writing " + path.string());
    log << "wrote " << path.string() << '\n';
  }

  // CSV with a leading provenance comment line.
  std::string csv_header() const { return "# " + stamp() + "\n"; }

  void write_json(const std::string& name, Json body, std::ostream& log) const {
    Json doc;
    doc["meta"] = meta();
    for (auto& [key, value] : body.items()) doc[key] = std::move(value);
    write(name, doc.dump(2) + "\n", log);
  }

 private:
  const RunConfig& config_;
};

Json json_number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

IngestResult load_input(const RunConfig& config) {
  if (config.input.empty()) throw Error(ErrorCode::InvalidArgument, "--input is required");
  if (config.profiles.empty()) throw Error(ErrorCode::InvalidArgument, "--profiles is required");
  const auto profiles = load_profiles(config.profiles);
  IngestOptions options;
  options.strict = config.strict;
  options.dataset = config.dataset;
  return load_long_table(config.input, profiles, options);
}

Level parse_level(const std::string& level) { return level == "utterance" ? Level::Utterance : Level::System; }

DesignMode parse_mode(const std::string& mode) { return mode == "ranks" ? DesignMode::Ranks : DesignMode::RawScores; }

Json group_json(const std::optional<GroupStat>& stat) {
  if (!stat) return nullptr;
  Json g;
  g["mean"] = stat->mean;
  g["std_error"] = stat->std_error ? Json(*stat->std_error) : Json(nullptr);
  g["count"] = stat->pairs.size();
  g["pairs"] = stat->pairs;
  return g;
}

int cmd_validate(const RunConfig& config, std::ostream& out) {
  const IngestResult result = load_input(config);
  const ScoreTensor& t = result.tensor;
  out << "dataset=" << t.dataset_id() << '\n';
  out << "M=" << t.num_metrics() << " N=" << t.num_systems() << " K=" << t.num_utterances() << '\n';
  std::size_t humans = 0;
  for (const auto& m : t.metrics()) humans += m.is_human() ? 1 : 0;
  out << "human=" << humans << " automatic=" << t.num_metrics() - humans << '\n';
  if (!result.dropped_utterances.empty()) {
    out << "dropped " << result.dropped_utterances.size() << " incomplete utterance(s): "
        << join(result.dropped_utterances, ' ') << '\n';
  }
  out << "ok\n";
  return kExitOk;
}

int cmd_complementarity(const RunConfig& config, std::ostream& out) {
  const IngestResult input = load_input(config);
  const Emitter emit(config);
  const ComplementarityMatrix matrix = complementarity_matrix(input.tensor);

  std::ostringstream csv;
  csv << emit.csv_header() << "metric";
  for (const auto& id : matrix.metric_ids) csv << ',' << csv_field(id);
  csv << '\n';
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    csv << csv_field(matrix.metric_ids[i]);
    for (std::size_t j = 0; j < matrix.size(); ++j) csv << ',' << format_double(matrix(i, j));
    csv << '\n';
  }
  emit.write("complementarity.csv", csv.str(), out);

  const GroupSummary summary = group_summary(matrix);
  Json body;
  body["dataset"] = input.tensor.dataset_id();
  body["shape"] = {{"M", input.tensor.num_metrics()}, {"N", input.tensor.num_systems()}, {"K", input.tensor.num_utterances()}};
  body["dropped_utterances"] = input.dropped_utterances;
  body["metrics"] = Json::array();
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    body["metrics"].push_back({{"id", matrix.metric_ids[i]}, {"kind", std::string(to_string(matrix.kinds[i]))}});
  }
  body["uncertainty"] = "standard error of the mean over pairs";
  body["groups"] = {{"human_human", group_json(summary.human_human)},
                    {"auto_auto", group_json(summary.auto_auto)},
                    {"cross", group_json(summary.cross)}};
  emit.write_json("group_summary.json", std::move(body), out);
  emit.write("heatmap.svg", heatmap_svg(matrix, emit.stamp()), out);
  return kExitOk;
}

int cmd_structure(const RunConfig& config, std::ostream& out) {
  const IngestResult input = load_input(config);
  const Emitter emit(config);
  const Level level = parse_level(config.level);
  const MetricMatrix metric_matrix = build_metric_matrix(input.tensor, level);
  const PcaResult pca_result = pca(metric_matrix, config.standardize);
  const std::size_t dimension = effective_dimension(pca_result.explained_ratio, config.threshold);

  const ComplementarityMatrix comp = complementarity_matrix(input.tensor);
  const ClusterAssignment clusters = louvain(similarity_graph(comp), config.resolution, config.seed);

  std::ostringstream variance;
  variance << emit.csv_header() << "component,ratio,cumulative\n";
  double cumulative = 0.0;
  for (std::size_t c = 0; c < pca_result.explained_ratio.size(); ++c) {
    cumulative += pca_result.explained_ratio[c];
    variance << c + 1 << ',' << format_double(pca_result.explained_ratio[c]) << ',' << format_double(cumulative) << '\n';
  }
  emit.write("explained_variance.csv", variance.str(), out);

  std::vector<ScatterPoint> points;
  std::ostringstream embedding;
  embedding << emit.csv_header() << "metric,x,y,cluster,kind\n";
  for (std::size_t m = 0; m < metric_matrix.metric_ids.size(); ++m) {
    const auto row = static_cast<Eigen::Index>(m);
    ScatterPoint p{metric_matrix.metric_ids[m], metric_matrix.kinds[m], pca_result.scores2d(row, 0),
                   pca_result.scores2d(row, 1), clusters.labels[comp.index_of(metric_matrix.metric_ids[m])]};
    embedding << csv_field(p.id) << ',' << format_double(p.x) << ',' << format_double(p.y) << ',' << p.cluster << ','
              << to_string(p.kind) << '\n';
    points.push_back(std::move(p));
  }
  emit.write("embedding.csv", embedding.str(), out);

  Json body;
  body["dataset"] = input.tensor.dataset_id();
  body["level"] = std::string(to_string(level));
  body["standardized"] = config.standardize;
  body["centered"] = true;
  body["dropped_columns"] = pca_result.dropped_columns;
  body["explained_ratio"] = pca_result.explained_ratio;
  body["threshold"] = config.threshold;
  body["effective_dimension"] = dimension;
  body["louvain"] = {{"resolution", config.resolution},
                     {"clusters", clusters.cluster_count()},
                     {"modularity", clusters.modularity},
                     {"pass_modularity", clusters.pass_modularity}};
  emit.write_json("structure.json", std::move(body), out);
  emit.write("scatter.svg",
             scatter_svg(points, input.tensor.dataset_id() + " (" + std::string(to_string(level)) + " level)", emit.stamp()),
             out);
  out << "effective_dimension=" << dimension << " clusters=" << clusters.cluster_count() << '\n';
  return kExitOk;
}

Json report_json(const PredictionReport& r) {
  Json j;
  j["target"] = r.target_id;
  j["feature_set"] = std::string(to_string(r.feature_set));
  j["features"] = r.feature_ids;
  j["mode"] = std::string(to_string(r.mode));
  j["regressor"] = std::string(to_string(r.regressor));
  j["folds"] = r.folds;
  j["seed"] = r.seed;
  j["fold_taus"] = r.fold_taus;
  j["mean_tau"] = r.mean_tau;
  return j;
}

int cmd_predict(const RunConfig& config, std::ostream& out) {
  const IngestResult input = load_input(config);
  const ScoreTensor& tensor = input.tensor;
  const Emitter emit(config);
  const DesignMode mode = parse_mode(config.mode);

  RegressorConfig regressor;
  regressor.kind = config.regressor == "lasso" ? RegressorKind::Lasso : RegressorKind::Gbt;
  regressor.lasso_alpha = config.lasso_alpha;
  regressor.gbt.rounds = config.rounds;
  regressor.gbt.depth = config.depth;
  regressor.gbt.learning_rate = config.learning_rate;

  std::vector<std::string> targets = config.targets;
  if (targets.empty()) {
    for (const auto& m : tensor.metrics()) {
      if (m.is_human()) targets.push_back(m.id);
    }
  }
  if (targets.empty()) throw Error(ErrorCode::TargetNotHuman, "dataset has no human metric to predict");
  for (const auto& t : targets) {
    if (!tensor.profile(t).is_human()) throw Error(ErrorCode::TargetNotHuman, "target '" + t + "' is not human");
  }

  Json reports = Json::array();
  Json skipped = Json::array();
  std::ostringstream summary;
  summary << emit.csv_header() << "target,feature_set,regressor,mode,folds,seed,mean_tau,fold_taus\n";
  for (const auto& target : targets) {
    for (FeatureSet set : {FeatureSet::AutoOnly, FeatureSet::HumanOnly, FeatureSet::Both}) {
      RegressionDesign design;
      try {
        design = build_design(tensor, target, set, mode);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoFeatures) throw;
        skipped.push_back({{"target", target}, {"feature_set", std::string(to_string(set))}, {"reason", e.what()}});
        continue;
      }
      const PredictionReport report = kfold_cv(design, regressor, config.folds, config.seed);
      std::vector<std::string> taus;
      for (double tau : report.fold_taus) taus.push_back(format_double(tau));
      summary << csv_field(target) << ',' << to_string(set) << ',' << to_string(report.regressor) << ','
              << to_string(mode) << ',' << report.folds << ',' << report.seed << ',' << format_double(report.mean_tau)
              << ',' << join(taus, ';') << '\n';
      reports.push_back(report_json(report));
    }
  }
  Json body;
  body["dataset"] = tensor.dataset_id();
  body["reports"] = std::move(reports);
  body["skipped"] = std::move(skipped);

  std::ostringstream path_csv;
  path_csv << emit.csv_header() << "target,alpha,feature,weight\n";
  std::ostringstream ratio_csv;
  ratio_csv << emit.csv_header() << "target,alpha,mse_with_humans,mse_auto_only,ratio\n";
  std::size_t ratio_rows = 0;
  for (const auto& target : targets) {
    RegressionDesign design;
    try {
      design = build_design(tensor, target, FeatureSet::Both, mode);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoFeatures) throw;
      continue;
    }
    std::vector<double> alphas = config.alphas;
    if (alphas.empty()) alphas = log_alpha_grid(lasso_alpha_max(design.features, design.target));
    std::sort(alphas.begin(), alphas.end(), std::greater<>());
    const LassoPath path = lasso_path(design, alphas);
    for (std::size_t a = 0; a < path.alphas.size(); ++a) {
      for (std::size_t f = 0; f < path.feature_ids.size(); ++f) {
        path_csv << csv_field(target) << ',' << format_double(path.alphas[a]) << ',' << csv_field(path.feature_ids[f])
                 << ',' << format_double(path.models[a].standardized_weights(static_cast<Eigen::Index>(f))) << '\n';
      }
    }
    try {
      for (const auto& point : mse_ratio(tensor, target, alphas, config.seed, mode)) {
        ratio_csv << csv_field(target) << ',' << format_double(point.alpha) << ','
                  << format_double(point.mse_with_humans) << ',' << format_double(point.mse_auto_only) << ','
                  << (point.ratio ? format_double(*point.ratio) : std::string()) << '\n';
        ++ratio_rows;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoOtherHumans && e.code() != ErrorCode::NoFeatures) throw;
    }
  }
  emit.write("lasso_path.csv", path_csv.str(), out);
  if (ratio_rows > 0) emit.write("mse_ratio.csv", ratio_csv.str(), out);

  const bool dated = std::none_of(tensor.metrics().begin(), tensor.metrics().end(),
                                  [](const MetricProfile& m) { return !m.is_human() && !m.release_date; });
  const bool has_auto = std::any_of(tensor.metrics().begin(), tensor.metrics().end(),
                                    [](const MetricProfile& m) { return !m.is_human(); });
  if (dated && has_auto) {
    std::ostringstream timeline;
    timeline << emit.csv_header() << "target,point,label,release_date,added,features,mean_tau\n";
    for (const auto& target : targets) {
      const auto points = timeline_fit(tensor, target, regressor, config.folds, config.seed, mode);
      for (std::size_t i = 0; i < points.size(); ++i) {
        timeline << csv_field(target) << ',' << i + 1 << ',' << csv_field(points[i].label) << ','
                 << points[i].release_date << ',' << csv_field(join(points[i].added_ids, ';')) << ','
                 << points[i].feature_ids.size() << ',' << format_double(points[i].mean_tau) << '\n';
      }
    }
    emit.write("timeline.csv", timeline.str(), out);
    body["timeline"] = "timeline.csv";
  } else {
    body["timeline"] = nullptr;
  }
  emit.write_json("predictions.json", std::move(body), out);
  emit.write("predictions.csv", summary.str(), out);
  return kExitOk;
}

int cmd_kemeny_audit(const RunConfig& config, std::ostream& out) {
  const Emitter emit(config);
  KemenyAuditConfig audit;
  audit.samples = config.samples;
  audit.max_voters = config.max_voters;
  audit.max_items = config.max_items;
  audit.seed = config.seed;
  const KemenyAuditReport report = run_kemeny_audit(audit);
  Json body;
  body["samples"] = audit.samples;
  body["max_voters"] = audit.max_voters;
  body["max_items"] = audit.max_items;
  body["bound"] = audit.bound;
  body["exact_zero_count"] = report.exact_zero_count;
  body["borda_optimal_count"] = report.borda_optimal_count;
  body["max_ratio"] = report.max_ratio;
  body["mean_ratio"] = report.mean_ratio;
  body["violations"] = Json::array();
  for (const auto& v : report.violations) {
    body["violations"].push_back({{"sample", v.sample},
                                  {"members", v.members},
                                  {"exact_cost", v.outcome.exact_cost},
                                  {"borda_cost", v.outcome.borda_cost},
                                  {"ratio", json_number(v.outcome.ratio)}});
  }
  emit.write_json("kemeny_audit.json", std::move(body), out);
  out << "samples=" << audit.samples << " max_ratio=" << format_double(report.max_ratio)
      << " mean_ratio=" << format_double(report.mean_ratio) << " violations=" << report.violations.size() << '\n';
  return report.violations.empty() ? kExitOk : kExitValidation;
}

int cmd_synth(const RunConfig& config, std::ostream& out) {
  SyntheticConfig synth;
  synth.systems = config.systems;
  synth.utterances = config.utterances;
  synth.humans = config.humans;
  synth.automatics = config.automatics;
  synth.seed = config.seed;
  const ScoreTensor tensor = generate_synthetic(synth);
  std::filesystem::create_directories(config.out);
  std::ostringstream table;
  dump_long_table(tensor, table);
  const Emitter emit(config);
  emit.write("scores.csv", table.str(), out);
  emit.write("profiles.json", profiles_to_json(tensor.metrics()), out);
  return kExitOk;
}

void add_input_options(CLI::App* sub, RunConfig& config) {
  sub->add_option("--input", config.input, "long-format score table (dataset,metric,system,utterance,score)")
      ->required();
  sub->add_option("--profiles", config.profiles, "metric profiles JSON")->required();
  sub->add_option("--dataset", config.dataset, "dataset to select when the table holds several");
  sub->add_flag("--strict,!--drop-incomplete", config.strict,
                "reject missing cells (default) or drop incomplete utterances");
}

}  // namespace

std::string_view version() { return RANKMETRICS_VERSION; }

std::string RunConfig::canonical() const {
  std::vector<std::string> alpha_text;
  for (double a : alphas) alpha_text.push_back(format_double(a));
  std::ostringstream s;
  s << "command=" << command << "\ninput=" << input.generic_string() << "\nprofiles=" << profiles.generic_string()
    << "\ndataset=" << dataset.value_or("") << "\nstrict=" << strict << "\nlevel=" << level
    << "\nthreshold=" << format_double(threshold) << "\nstandardize=" << standardize
    << "\nresolution=" << format_double(resolution) << "\nseed=" << seed << "\nfolds=" << folds
    << "\nalphas=" << join(alpha_text, ',') << "\nregressor=" << regressor
    << "\nlasso_alpha=" << format_double(lasso_alpha) << "\nrounds=" << rounds << "\ndepth=" << depth
    << "\nlearning_rate=" << format_double(learning_rate) << "\nmode=" << mode << "\ntargets=" << join(targets, ',')
    << "\nsamples=" << samples << "\nmax_voters=" << max_voters << "\nmax_items=" << max_items
    << "\nsystems=" << systems << "\nutterances=" << utterances << "\nhumans=" << humans
    << "\nautomatics=" << automatics << '\n';
  return s.str();
}

std::string RunConfig::hash() const { return to_hex(fnv1a64(canonical())); }

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Rank-based meta-analysis of evaluation metrics", "rankmetrics"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "check a score table and print its shape");
  add_input_options(validate, config);

  auto* complementarity = app.add_subcommand("complementarity", "pairwise complementarity matrix and group summary");
  add_input_options(complementarity, config);
  complementarity->add_option("--out", config.out, "output directory");
  complementarity->add_option("--seed", config.seed, "root seed (recorded only)");

  auto* structure = app.add_subcommand("structure", "PCA effective dimension and Louvain clusters");
  add_input_options(structure, config);
  structure->add_option("--out", config.out, "output directory");
  structure->add_option("--level", config.level, "representation level")
      ->check(CLI::IsMember({"system", "utterance"}));
  structure->add_option("--threshold", config.threshold, "cumulative variance threshold")
      ->check(CLI::Range(0.0, 1.0));
  structure->add_flag("--standardize", config.standardize, "scale columns to unit variance before PCA");
  structure->add_option("--resolution", config.resolution, "Louvain resolution")->check(CLI::PositiveNumber);
  structure->add_option("--seed", config.seed, "root seed");

  auto* predict = app.add_subcommand("predict", "cross-validated prediction of human metrics");
  add_input_options(predict, config);
  predict->add_option("--out", config.out, "output directory");
  predict->add_option("--seed", config.seed, "root seed");
  predict->add_option("--folds", config.folds, "cross-validation folds")->check(CLI::Range(2, 1000));
  predict->add_option("--alphas", config.alphas, "lasso alpha grid (comma separated)")
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber);
  predict->add_option("--regressor", config.regressor, "cross-validation regressor")
      ->check(CLI::IsMember({"lasso", "gbt"}));
  predict->add_option("--lasso-alpha", config.lasso_alpha, "alpha when --regressor lasso")
      ->check(CLI::NonNegativeNumber);
  predict->add_option("--rounds", config.rounds, "boosting rounds");
  predict->add_option("--depth", config.depth, "tree depth");
  predict->add_option("--learning-rate", config.learning_rate, "boosting learning rate")->check(CLI::PositiveNumber);
  predict->add_option("--mode", config.mode, "design values")->check(CLI::IsMember({"raw", "ranks"}));
  predict->add_option("--target", config.targets, "human metric(s) to predict (default: all)");

  auto* audit = app.add_subcommand("kemeny-audit", "randomized Borda vs exact Kemeny audit");
  audit->add_option("--out", config.out, "output directory");
  audit->add_option("--seed", config.seed, "root seed");
  audit->add_option("--samples", config.samples, "number of random families");
  audit->add_option("--max-voters", config.max_voters, "largest family size")->check(CLI::Range(1, 1000));
  audit->add_option("--max-items", config.max_items, "largest ranking length")
      ->check(CLI::Range(2, static_cast<int>(kMaxExactItems)));

  auto* synth = app.add_subcommand("synth", "write a synthetic latent-factor dataset");
  synth->add_option("--out", config.out, "output directory");
  synth->add_option("--seed", config.seed, "root seed");
  synth->add_option("--systems", config.systems, "number of systems")->check(CLI::Range(2, 100000));
  synth->add_option("--utterances", config.utterances, "number of utterances")->check(CLI::Range(1, 1000000));
  synth->add_option("--humans", config.humans, "number of human metrics");
  synth->add_option("--automatics", config.automatics, "number of automatic metrics");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  const std::vector<std::pair<CLI::App*, std::function<int(const RunConfig&, std::ostream&)>>> commands = {
      {validate, cmd_validate},  {complementarity, cmd_complementarity}, {structure, cmd_structure},
      {predict, cmd_predict},    {audit, cmd_kemeny_audit},              {synth, cmd_synth},
  };
  for (const auto& [sub, handler] : commands) {
    if (!sub->parsed()) continue;
    config.command = sub->get_name();
    try {
      return handler(config, out);
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return exit_code_for(e.code());
    } catch (const std::filesystem::filesystem_error& e) {
      err << "error: " << e.what() << '\n';
      return kExitInput;
    } catch (const std::exception& e) {
      err << "internal error: " << e.what() << '\n';
      return kExitNumerical;
    }
  }
  return kExitInput;
}

}  // namespace rankmetrics::cli
