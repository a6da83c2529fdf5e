#ifndef ONTOPOP_PIPELINE_H_
#define ONTOPOP_PIPELINE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ontopop/corpus.h"
#include "ontopop/diagnostics.h"
#include "ontopop/embeddings.h"
#include "ontopop/ensemble.h"
#include "ontopop/evaluation.h"
#include "ontopop/models.h"
#include "ontopop/ontology.h"

namespace ontopop {

struct RunConfig {
  std::filesystem::path embedding;
  EmbeddingFormat embedding_format = EmbeddingFormat::kAuto;
  std::filesystem::path ontology;
  std::filesystem::path corpus;
  std::optional<std::filesystem::path> taxonomy;
  std::optional<std::filesystem::path> gold;
  std::filesystem::path output = "out";

  std::size_t min_count = 5;
  bool lowercase = true;
  std::uint64_t kmeans_seed = 42;
  std::size_t kmeans_max_iters = 300;
  std::string linkage = "average";
  std::size_t exclusion_min_seeds = 2;
  std::uint64_t split_seed = 42;
  std::array<double, 3> split_ratios{0.7, 0.2, 0.1};
  double threshold = 0.0;
  // Picks the threshold maximizing validation ensemble F1 instead.
  bool tune_threshold = false;
  std::optional<std::vector<double>> weights;
  AggregationMethod class_vector_method = AggregationMethod::kCentroid;
  Averaging averaging = Averaging::kMacro;
  bool strict = false;
  bool parallel = true;
};

// Reads the config keys from a JSON object. Relative paths resolve against
// `base_dir`. Unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json &doc,
                           const std::filesystem::path &base_dir = {});
RunConfig load_config(const std::filesystem::path &path);
nlohmann::json config_to_json(const RunConfig &config);

enum class Command { kInspect, kPopulate, kEvaluate };

// Throws ConfigError for missing inputs and invalid values. populate also
// needs a weight source (explicit weights or a gold standard); evaluate
// needs a gold standard.
void validate_config(const RunConfig &config, Command command);

struct PipelineResult {
  InstanceCorpus corpus;
  std::vector<ClassVector> class_vectors;
  // M1..M5 in order; M3 is empty when no taxonomy is configured.
  std::vector<ModelOutput> outputs;
  std::optional<Split> split;
  EnsembleWeights weights;
  std::string weight_source;
  double threshold = 0.0;
  ModelOutput ensemble{ModelTag::kEnsemble, {}};
  Ontology populated;
  std::optional<EvalReport> report;
  Diagnostics diagnostics;
};

// Loads every input, runs candidate extraction, the five models, the
// ensemble and (with a gold standard) the evaluation over the test split.
PipelineResult run_pipeline(const RunConfig &config);

// Writes ontology.json, M1.tsv..M5.tsv, ensemble.tsv and, when present,
// report.json and report.txt into config.output.
void write_outputs(const PipelineResult &result, const RunConfig &config);
void write_report(const EvalReport &report, const std::filesystem::path &dir);

// instance<TAB>class<TAB>score per membership, ordered by instance then class.
void write_membership_tsv(const ModelOutput &output, std::ostream &out);

struct InspectSummary {
  std::size_t dimension = 0;
  std::size_t vocabulary = 0;
  std::vector<std::pair<std::string, std::size_t>> seed_counts;
  std::vector<std::string> oov_seeds;
  Diagnostics diagnostics;
};

InspectSummary inspect(const RunConfig &config);
void print_inspect(const InspectSummary &summary, std::ostream &out);

}  // namespace ontopop

#endif  // ONTOPOP_PIPELINE_H_
