#include "usab/pipeline.hpp"

#include <cinttypes>
#include <cstdio>
#include <initializer_list>
#include <set>
#include <sstream>

#include "json.hpp"
#include "usab/error.hpp"
#include "usab/io.hpp"

namespace usab {

using nlohmann::json;

std::uint64_t fnv1a(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string_view stage_name(Stage s) noexcept {
  switch (s) {
    case Stage::synth: return "synth";
    case Stage::ingest: return "ingest";
    case Stage::score: return "score";
    case Stage::tune: return "tune";
    case Stage::select: return "select";
    case Stage::evaluate: return "evaluate";
    case Stage::compare: return "compare";
    case Stage::report: return "report";
  }
  return "unknown";
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

void only_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  require(j.is_object(), ErrorCode::ParseError, where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    require(ok.count(key) == 1, ErrorCode::ParseError, "unknown key '" + key + "' in " + where);
  }
}

GaConfig parse_ga(const json& j, GaConfig base, const std::string& where) {
  only_keys(j, {"population", "crossover_rate", "mutation_rate", "generations", "elitism", "target_fitness"},
            where);
  if (j.contains("population")) base.population_size = j.at("population").get<std::size_t>();
  if (j.contains("crossover_rate")) base.crossover_rate = j.at("crossover_rate").get<double>();
  if (j.contains("mutation_rate")) base.mutation_rate = j.at("mutation_rate").get<double>();
  if (j.contains("generations")) base.max_generations = j.at("generations").get<std::size_t>();
  if (j.contains("elitism")) base.elitism = j.at("elitism").get<std::size_t>();
  if (j.contains("target_fitness")) base.target_fitness = j.at("target_fitness").get<double>();
  return base;
}

json ga_json(const GaConfig& g) {
  json j{{"population", g.population_size},
         {"crossover_rate", g.crossover_rate},
         {"mutation_rate", g.mutation_rate},
         {"generations", g.max_generations},
         {"elitism", g.elitism}};
  if (g.target_fitness) j["target_fitness"] = *g.target_fitness;
  return j;
}

PipelineConfig parse_config_json(const json& root, const std::filesystem::path& base_dir) {
  only_keys(root, {"seed", "dataset", "synthetic", "labels", "scoring", "tuning", "selection", "evaluation",
                   "comparison", "benchmarks", "verdicts"},
            "config");
  PipelineConfig cfg;
  if (root.contains("seed")) cfg.seed = root.at("seed").get<std::uint64_t>();

  if (root.contains("dataset")) {
    const auto& d = root.at("dataset");
    only_keys(d, {"path", "features", "questions"}, "dataset");
    std::filesystem::path p = d.at("path").get<std::string>();
    cfg.dataset_path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    cfg.schema.features = d.at("features").get<std::vector<std::string>>();
    if (d.contains("questions")) {
      for (const auto& q : d.at("questions")) {
        only_keys(q, {"id", "feature"}, "dataset.questions");
        cfg.schema.questions.push_back({q.at("id").get<std::string>(), q.at("feature").get<std::string>()});
      }
    } else {
      cfg.schema = SurveySchema::one_question_per_feature(cfg.schema.features);
    }
    cfg.schema.validate();
  }

  if (root.contains("synthetic")) {
    const auto& s = root.at("synthetic");
    only_keys(s, {"n", "mode", "polarity"}, "synthetic");
    if (s.contains("n")) cfg.synthetic_n = s.at("n").get<std::size_t>();
    if (s.contains("mode")) {
      const auto mode = s.at("mode").get<std::string>();
      require(mode == "exact" || mode == "sampled", ErrorCode::ParseError, "synthetic.mode must be exact or sampled");
      cfg.synthetic_mode = mode == "exact" ? SynthesisMode::exact : SynthesisMode::sampled;
    }
    for (const auto& row : s.at("polarity")) {
      only_keys(row, {"feature", "counts"}, "synthetic.polarity");
      const auto counts = row.at("counts").get<std::vector<std::uint64_t>>();
      require(counts.size() == kLikertLevels, ErrorCode::InconsistentCounts, "polarity rows need five counts");
      cfg.polarity.features.push_back(row.at("feature").get<std::string>());
      cfg.polarity.counts.push_back({counts[0], counts[1], counts[2], counts[3], counts[4]});
    }
  }
  require(cfg.dataset_path || !cfg.polarity.features.empty(), ErrorCode::ParseError,
          "config needs a dataset or a synthetic polarity table");

  if (root.contains("labels")) {
    cfg.label_bands.clear();
    for (const auto& b : root.at("labels")) {
      only_keys(b, {"threshold", "class"}, "labels");
      cfg.label_bands.push_back({b.at("threshold").get<double>(), b.at("class").get<std::string>()});
    }
  }

  if (root.contains("scoring")) {
    const auto& s = root.at("scoring");
    only_keys(s, {"runs", "threshold", "resolution", "ga"}, "scoring");
    if (s.contains("runs")) cfg.scoring_runs = s.at("runs").get<std::size_t>();
    if (s.contains("threshold")) cfg.weight_threshold = s.at("threshold").get<double>();
    if (s.contains("resolution")) cfg.weight_resolution = s.at("resolution").get<double>();
    if (s.contains("ga")) cfg.scoring_ga = parse_ga(s.at("ga"), cfg.scoring_ga, "scoring.ga");
  }
  require(cfg.scoring_runs >= 1, ErrorCode::EmptyRuns, "scoring.runs must be >= 1");

  if (root.contains("tuning")) {
    const auto& t = root.at("tuning");
    only_keys(t, {"kernel", "C", "gamma", "folds"}, "tuning");
    if (t.contains("kernel")) {
      const auto k = t.at("kernel").get<std::string>();
      require(k == "rbf" || k == "linear", ErrorCode::ParseError, "tuning.kernel must be rbf or linear");
      cfg.kernel = k == "rbf" ? KernelKind::rbf : KernelKind::linear;
    }
    if (t.contains("C")) cfg.C_grid = t.at("C").get<std::vector<double>>();
    if (t.contains("gamma")) cfg.gamma_grid = t.at("gamma").get<std::vector<double>>();
    if (t.contains("folds")) cfg.tuning_folds = t.at("folds").get<std::size_t>();
  }

  if (root.contains("selection")) {
    const auto& s = root.at("selection");
    only_keys(s, {"folds", "lambda", "ga"}, "selection");
    if (s.contains("folds")) cfg.selection.folds = s.at("folds").get<std::size_t>();
    if (s.contains("lambda")) cfg.selection.lambda = s.at("lambda").get<double>();
    if (s.contains("ga")) cfg.selection_ga = parse_ga(s.at("ga"), cfg.selection_ga, "selection.ga");
  }
  if (root.contains("evaluation")) {
    only_keys(root.at("evaluation"), {"folds"}, "evaluation");
    cfg.evaluation_folds = root.at("evaluation").at("folds").get<std::size_t>();
  }
  if (root.contains("comparison")) {
    only_keys(root.at("comparison"), {"folds"}, "comparison");
    cfg.comparison_folds = root.at("comparison").at("folds").get<std::size_t>();
  }
  if (root.contains("benchmarks")) {
    for (const auto& b : root.at("benchmarks")) {
      only_keys(b, {"feature", "value"}, "benchmarks");
      cfg.benchmarks[b.at("feature").get<std::string>()] = b.at("value").get<double>();
    }
  }
  if (root.contains("verdicts")) {
    const auto& v = root.at("verdicts");
    only_keys(v, {"bands", "floor"}, "verdicts");
    cfg.verdicts.bands.clear();
    for (const auto& b : v.at("bands")) {
      only_keys(b, {"min_delta", "label"}, "verdicts.bands");
      cfg.verdicts.bands.push_back({b.at("min_delta").get<double>(), b.at("label").get<std::string>()});
    }
    if (v.contains("floor")) cfg.verdicts.floor_label = v.at("floor").get<std::string>();
    cfg.verdicts.validate();
  }
  return cfg;
}

}  // namespace

std::string PipelineConfig::canonical() const {
  json j;
  j["seed"] = seed;
  if (dataset_path) {
    json qs = json::array();
    for (const auto& q : schema.questions) qs.push_back({{"id", q.id}, {"feature", q.feature}});
    j["dataset"] = {{"path", dataset_path->generic_string()}, {"features", schema.features}, {"questions", qs}};
  }
  if (!polarity.features.empty()) {
    json rows = json::array();
    for (std::size_t f = 0; f < polarity.features.size(); ++f) {
      rows.push_back({{"feature", polarity.features[f]},
                      {"counts", std::vector<std::uint64_t>(polarity.counts[f].begin(), polarity.counts[f].end())}});
    }
    j["synthetic"] = {{"n", synthetic_n},
                      {"mode", synthetic_mode == SynthesisMode::exact ? "exact" : "sampled"},
                      {"polarity", rows}};
  }
  json bands = json::array();
  for (const auto& b : label_bands) bands.push_back({{"threshold", b.threshold}, {"class", b.class_name}});
  j["labels"] = bands;
  j["scoring"] = {{"runs", scoring_runs},
                  {"threshold", weight_threshold},
                  {"resolution", weight_resolution},
                  {"ga", ga_json(scoring_ga)}};
  j["tuning"] = {{"kernel", kernel == KernelKind::rbf ? "rbf" : "linear"},
                 {"C", C_grid},
                 {"gamma", gamma_grid},
                 {"folds", tuning_folds}};
  j["selection"] = {{"folds", selection.folds}, {"lambda", selection.lambda}, {"ga", ga_json(selection_ga)}};
  j["evaluation"] = {{"folds", evaluation_folds}};
  j["comparison"] = {{"folds", comparison_folds}};
  json bench = json::array();
  for (const auto& [feature, value] : benchmarks) bench.push_back({{"feature", feature}, {"value", value}});
  j["benchmarks"] = bench;
  json vb = json::array();
  for (const auto& b : verdicts.bands) vb.push_back({{"min_delta", b.min_delta}, {"label", b.label}});
  j["verdicts"] = {{"bands", vb}, {"floor", verdicts.floor_label}};
  return j.dump(2) + "\n";
}

PipelineConfig parse_pipeline_config(std::string_view text, const std::filesystem::path& base_dir) {
  try {
    return parse_config_json(json::parse(text), base_dir);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("invalid config: ") + e.what());
  }
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  return parse_pipeline_config(read_text_file(path), path.parent_path());
}

namespace {

class Runner {
 public:
  Runner(const PipelineConfig& cfg, std::filesystem::path out) : cfg_(cfg), out_dir_(std::move(out)) {}

  PipelineOutputs run(Stage target) {
    guarded("setup", [&] {
      std::error_code ec;
      std::filesystem::create_directories(out_dir_, ec);
      require(!ec, ErrorCode::IoError, "cannot create output directory " + out_dir_.string());
    });

    std::vector<Stage> plan;
    switch (target) {
      case Stage::synth: plan = {Stage::synth}; break;
      case Stage::ingest: plan = {Stage::ingest}; break;
      case Stage::score: plan = {Stage::ingest, Stage::score}; break;
      case Stage::tune: plan = {Stage::ingest, Stage::tune}; break;
      case Stage::select: plan = {Stage::ingest, Stage::tune, Stage::select}; break;
      case Stage::evaluate: plan = {Stage::ingest, Stage::tune, Stage::select, Stage::evaluate}; break;
      case Stage::compare: plan = {Stage::ingest, Stage::tune, Stage::select, Stage::compare}; break;
      case Stage::report:
        plan = {Stage::ingest, Stage::score, Stage::tune, Stage::select, Stage::evaluate, Stage::compare, Stage::report};
        break;
    }
    for (Stage s : plan) {
      guarded(std::string(stage_name(s)), [&] { execute(s); });
      stages_.push_back(std::string(stage_name(s)));
    }
    guarded("manifest", [&] { write_manifest(); });
    return std::move(out_);
  }

 private:
  template <typename F>
  void guarded(const std::string& stage, F&& body) {
    try {
      body();
    } catch (const StageError&) {
      throw;
    } catch (const Error& e) {
      throw StageError(stage, e.code(), e.message());
    } catch (const std::exception& e) {
      throw StageError(stage, ErrorCode::Internal, e.what());
    }
  }

  RngSpec stage_rng(Stage s) const { return substream(RngSpec{cfg_.seed}, 0x57a9e, static_cast<std::uint64_t>(s)); }

  void emit(const std::string& name, std::string_view content) {
    write_text_file(out_dir_ / name, content);
    out_.files.push_back(name);
  }

  template <typename Writer>
  void emit_stream(const std::string& name, Writer&& w) {
    std::ostringstream ss;
    w(ss);
    emit(name, ss.str());
  }

  void execute(Stage s) {
    switch (s) {
      case Stage::synth: synth(); break;
      case Stage::ingest: ingest(); break;
      case Stage::score: score(); break;
      case Stage::tune: tune(); break;
      case Stage::select: select(); break;
      case Stage::evaluate: evaluate(); break;
      case Stage::compare: compare(); break;
      case Stage::report: report(); break;
    }
  }

  void write_survey(const SurveyDataset& ds) {
    std::ostringstream ss;
    write_survey_csv(ss, ds);
    survey_text_ = ss.str();
    emit("survey.csv", survey_text_);
    emit("polarity.json", to_json(polarity_table(ds)));
  }

  void synth() {
    require(!cfg_.polarity.features.empty(), ErrorCode::InvalidArgument,
            "config has no polarity table to synthesize from");
    out_.survey = generate_synthetic(cfg_.polarity, cfg_.synthetic_n, cfg_.synthetic_mode, stage_rng(Stage::synth));
    write_survey(*out_.survey);
  }

  void ingest() {
    if (cfg_.dataset_path) {
      out_.survey = load_survey(*cfg_.dataset_path, cfg_.schema);
      write_survey(*out_.survey);
    } else {
      synth();
    }
    out_.features = auto_label(encode(*out_.survey), cfg_.label_bands);
    emit_stream("labels.csv", [&](std::ostream& os) {
      os << "respondent,class\n";
      for (std::size_t i = 0; i < out_.features->rows(); ++i) {
        os << out_.survey->respondents()[i].id << ',' << out_.features->class_names[out_.features->labels[i]]
           << '\n';
      }
    });
  }

  void score() {
    const auto& fm = *out_.features;
    const auto problem = ScoringProblem::from_labeled(fm, cfg_.weight_resolution);
    GaConfig ga = cfg_.scoring_ga;
    ga.gene_count = fm.cols();
    std::vector<std::vector<double>> runs;
    for (std::size_t j = 0; j < cfg_.scoring_runs; ++j) {
      auto result = score_features(problem, ga, substream(stage_rng(Stage::score), j));
      runs.push_back(result.weights);
      if (j == 0) out_.scoring = std::move(result);
    }
    out_.weights = aggregate_weights(runs, cfg_.weight_threshold);

    // The published table carries the aggregate over all runs.
    auto& scoring = *out_.scoring;
    scoring.weights = out_.weights->mean;
    scoring.fitness = total_residual(scoring.weights, problem);
    scoring.table.rows.clear();
    for (std::size_t d = 0; d < fm.cols(); ++d) scoring.table.rows.push_back({fm.feature_names[d], scoring.weights[d]});
    scoring.table.sort();

    emit_stream("scores.csv", [&](std::ostream& os) { export_score_table(scoring.table, os); });
    std::map<std::string, std::string> meta{{"seed", std::to_string(cfg_.seed)},
                                            {"runs", std::to_string(cfg_.scoring_runs)}};
    emit("scores.json", scores_json(scoring, meta));
    emit_stream("scoring_trace.csv", [&](std::ostream& os) { scoring.trace.write_csv(os); });
  }

  void tune() {
    const auto& fm = *out_.features;
    SvmConfig base = default_svm_config(fm.cols());
    if (cfg_.kernel == KernelKind::linear) base.kernel = KernelSpec::linear();
    out_.tuning = grid_search(fm.values, fm.labels, fm.num_classes(), cfg_.C_grid, cfg_.gamma_grid,
                              cfg_.tuning_folds, base, stage_rng(Stage::tune));
    emit("tuning.json", to_json(*out_.tuning));
    emit_stream("tuning.csv", [&](std::ostream& os) { write_tuning_csv(os, *out_.tuning); });
  }

  void select() {
    const auto& fm = *out_.features;
    const auto rng = stage_rng(Stage::select);
    out_.selection = select_features(fm, out_.tuning->best, cfg_.selection_ga, cfg_.selection, rng);
    for (std::size_t d = 0; d < fm.cols(); ++d) {
      const double acc = mask_fitness(FeatureMask::single(fm.cols(), d), fm, out_.tuning->best,
                                      cfg_.selection.folds, selection_cv_stream(rng), 0.0);
      out_.feature_accuracy_pct[fm.feature_names[d]] = 100.0 * acc;
    }

    FeatureScoreTable table;
    if (out_.scoring) {
      table = out_.scoring->table;
    } else {
      for (const auto& name : fm.feature_names) table.rows.push_back({name, 0.0});
    }
    const auto rows = selection_report(*out_.selection, fm.feature_names, table);
    emit("selection.json", selection_json(*out_.selection, fm.feature_names, rows));
    emit_stream("trace.csv", [&](std::ostream& os) { out_.selection->trace.write_csv(os); });
  }

  ModelSpec ga_svm() const {
    return {"ga_svm", SvmSpec{out_.tuning->best, out_.selection->best_mask.indices()}};
  }

  void evaluate() {
    const auto& fm = *out_.features;
    out_.evaluation = evaluate_pipeline(fm, ga_svm(), cfg_.evaluation_folds, stage_rng(Stage::evaluate));
    emit_stream("confusion.csv", [&](std::ostream& os) { write_confusion_csv(os, out_.evaluation->confusion); });
    emit("metrics.json", to_json(out_.evaluation->metrics, out_.evaluation->confusion));
    const auto model = train_multiclass(fm.values.take_cols(out_.selection->best_mask.indices()), fm.labels,
                                        fm.num_classes(), out_.tuning->best, stage_rng(Stage::evaluate),
                                        fm.class_names);
    emit("model.json", to_json(model));
  }

  void compare() {
    const auto& fm = *out_.features;
    const auto suite = default_model_suite(out_.tuning->best, out_.selection->best_mask.indices());
    out_.comparison = compare_models(suite, fm, cfg_.comparison_folds, stage_rng(Stage::compare));
    emit_stream("comparison.csv", [&](std::ostream& os) { out_.comparison->write_csv(os); });
    emit("comparison.json", to_json(*out_.comparison));
  }

  void report() {
    out_.report = build_report(out_.scoring->table, cfg_.benchmarks, out_.feature_accuracy_pct, cfg_.verdicts);
    auto& meta = out_.report->metadata;
    meta["seed"] = std::to_string(cfg_.seed);
    meta["config_hash"] = hex64(fnv1a(cfg_.canonical()));
    meta["dataset_digest"] = hex64(fnv1a(survey_text_));
    meta["version"] = std::string(kVersion);
    meta["selected_mask"] = out_.selection->best_mask.to_string();
    std::ostringstream num;
    num.precision(17);
    num << out_.evaluation->metrics.accuracy;
    meta["evaluation_accuracy"] = num.str();
    meta["meets_threshold"] = out_.evaluation->meets_threshold ? "true" : "false";
    emit("report.json", to_json(*out_.report));
    emit_stream("report.csv", [&](std::ostream& os) { out_.report->write_csv(os); });
  }

  void write_manifest() {
    json files = json::array();
    for (const auto& f : out_.files) files.push_back({{"file", f}, {"digest", hex64(fnv1a(read_text_file(out_dir_ / f)))}});
    const json manifest{{"version", std::string(kVersion)},
                        {"seed", cfg_.seed},
                        {"config_hash", hex64(fnv1a(cfg_.canonical()))},
                        {"dataset_digest", survey_text_.empty() ? json(nullptr) : json(hex64(fnv1a(survey_text_)))},
                        {"stages", stages_},
                        {"files", files}};
    write_text_file(out_dir_ / "manifest.json", manifest.dump(2) + "\n");
    out_.files.push_back("manifest.json");
  }

  const PipelineConfig& cfg_;
  std::filesystem::path out_dir_;
  PipelineOutputs out_;
  std::string survey_text_;
  std::vector<std::string> stages_;
};

}  // namespace

PipelineOutputs run_stages(const PipelineConfig& cfg, Stage target, const std::filesystem::path& out_dir) {
  return Runner(cfg, out_dir).run(target);
}

}  // namespace usab
