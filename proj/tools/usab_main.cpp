#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "usab/error.hpp"
#include "usab/pipeline.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

void summarize(const usab::PipelineOutputs& out, const std::string& dir) {
  if (out.evaluation) {
    std::cout << "accuracy " << out.evaluation->metrics.accuracy
              << (out.evaluation->meets_threshold ? " (accepted)" : " (below threshold)") << '\n';
  }
  if (out.selection) std::cout << "selected mask " << out.selection->best_mask.to_string() << '\n';
  if (out.report) {
    for (const auto& row : out.report->rows) {
      std::cout << row.feature << ": " << row.score << " vs " << row.benchmark << " -> " << row.verdict << '\n';
    }
  }
  std::cout << "wrote " << out.files.size() << " files to " << dir << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Usability assessment toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "usab-out";
  app.add_option("--config", config_path, "Pipeline configuration (JSON)")->required();
  app.add_option("--seed", seed, "Master seed, overrides the config");
  app.add_option("--out", out_dir, "Run directory");

  const std::pair<const char*, usab::Stage> commands[] = {
      {"synth", usab::Stage::synth},      {"ingest", usab::Stage::ingest},
      {"score", usab::Stage::score},      {"tune", usab::Stage::tune},
      {"select", usab::Stage::select},    {"evaluate", usab::Stage::evaluate},
      {"compare", usab::Stage::compare},  {"report", usab::Stage::report},
  };
  const char* help[] = {
      "Generate a synthetic survey from the polarity table",
      "Load or generate the survey, encode and label it",
      "Score features with the residual GA",
      "Grid-search SVM hyperparameters",
      "GA-SVM feature selection",
      "Cross-validate the selected GA-SVM model",
      "Compare GA-SVM against the baseline models",
      "Build the usability report (full pipeline)",
  };
  usab::Stage target = usab::Stage::report;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    auto* sub = app.add_subcommand(commands[i].first, help[i]);
    const auto stage = commands[i].second;
    sub->callback([&target, stage] { target = stage; });
  }
  app.add_subcommand("run", "Run every stage")->callback([&target] { target = usab::Stage::report; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    auto cfg = usab::load_pipeline_config(config_path);
    if (seed) cfg.seed = *seed;
    const auto out = usab::run_stages(cfg, target, out_dir);
    summarize(out, out_dir);
    return kOk;
  } catch (const usab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usab::is_data_error(e.code()) ? kData : kInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}
