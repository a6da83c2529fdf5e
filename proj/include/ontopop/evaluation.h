#ifndef ONTOPOP_EVALUATION_H_
#define ONTOPOP_EVALUATION_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ontopop/diagnostics.h"
#include "ontopop/models.h"
#include "ontopop/ontology.h"

namespace ontopop {

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

// P = |model & gold| / |model|, R = |model & gold| / |gold|. An empty model
// set gives P = 0; an empty gold set gives R = 0 and a warning.
PrecisionRecall class_precision_recall(const std::set<std::string> &model_words,
                                       const std::set<std::string> &gold_words,
                                       Diagnostics *diag = nullptr);

// Harmonic mean; 0 when P + R = 0.
double f1(double precision, double recall);

struct Split {
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;
};

// Seeded shuffle, then sizes by largest-remainder rounding of the ratios
// (remainder ties go to the earlier part). Each part keeps the input order.
Split split_corpus(const std::vector<std::string> &candidates,
                   std::array<double, 3> ratios, std::uint64_t seed);

enum class Averaging { kMacro, kMicro };

struct ModelScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  std::map<std::pair<std::string, std::string>, PrecisionRecall> per_class;
  std::map<std::string, ModelScores> per_model;  // keyed by model tag
  std::optional<ModelScores> ensemble;
  std::vector<double> weights;
  std::string weight_source;
  double threshold = 0.0;
  std::array<std::size_t, 3> split_sizes{0, 0, 0};
  std::vector<std::string> warnings;
};

struct EvaluationOptions {
  Averaging averaging = Averaging::kMacro;
  // When set, model and gold sets are both restricted to these instances.
  std::optional<std::set<std::string>> scope;
};

// Per-class P/R of every output against the gold standard, averaged per
// model. Outputs tagged kEnsemble fill the ensemble row. Classes absent from
// the gold standard are excluded with a warning.
EvalReport evaluate_models(std::span<const ModelOutput> outputs,
                           const GoldStandard &gold, const Ontology &ontology,
                           const EvaluationOptions &options = {},
                           Diagnostics *diag = nullptr);

nlohmann::json report_to_json(const EvalReport &report);

// Precision / Recall / F1 table, one row per model and the ensemble.
std::string report_to_table(const EvalReport &report);

}  // namespace ontopop

#endif  // ONTOPOP_EVALUATION_H_
