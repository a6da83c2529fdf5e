#ifndef ONTOPOP_ENSEMBLE_H_
#define ONTOPOP_ENSEMBLE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ontopop/models.h"

namespace ontopop {

// One weight per model, in model order, summing to 1.
struct EnsembleWeights {
  std::vector<double> values;
};

// w_i = F1_i / sum(F1). Throws ConfigError when a score lies outside [0, 1]
// or all scores are zero.
EnsembleWeights compute_weights(std::span<const double> f1_scores);

// Explicit weights from configuration: non-negative, not all zero, scaled to
// sum to 1.
EnsembleWeights normalize_weights(std::span<const double> weights);

// p x n binary model-by-class table for one instance.
class MembershipMatrix {
 public:
  MembershipMatrix(std::size_t models, std::size_t classes)
      : models_(models), classes_(classes), entries_(models * classes, 0) {}

  std::size_t models() const { return models_; }
  std::size_t classes() const { return classes_; }
  int at(std::size_t model, std::size_t cls) const {
    return entries_[model * classes_ + cls];
  }
  void set(std::size_t model, std::size_t cls, int value) {
    entries_[model * classes_ + cls] = value;
  }
  int row_sum(std::size_t model) const;

 private:
  std::size_t models_;
  std::size_t classes_;
  std::vector<int> entries_;
};

// m[i][j] = 1 iff outputs[i] emitted classes[j] for `instance`. A model that
// skipped the instance gives a zero row. Throws ValidationError if a model
// emitted a class missing from `classes`.
MembershipMatrix membership_matrix(std::string_view instance,
                                   std::span<const ModelOutput> outputs,
                                   const std::vector<std::string> &classes);

// S = weights . matrix.
std::vector<double> score(const EnsembleWeights &weights,
                          const MembershipMatrix &matrix);

// Highest-scoring class if its score is positive and >= threshold; ties go
// to the smaller class id.
std::optional<std::string> assign(std::span<const double> scores,
                                  const std::vector<std::string> &classes,
                                  double threshold);

struct EnsembleDecision {
  std::string class_id;
  double score = 0.0;
  std::vector<std::string> models;  // models that voted for class_id
};

// Ensemble decision for every instance emitted by any model.
ModelOutput run_ensemble(std::span<const ModelOutput> outputs,
                         const EnsembleWeights &weights,
                         const std::vector<std::string> &classes,
                         double threshold);

std::optional<EnsembleDecision> decide(std::string_view instance,
                                       std::span<const ModelOutput> outputs,
                                       const EnsembleWeights &weights,
                                       const std::vector<std::string> &classes,
                                       double threshold);

}  // namespace ontopop

#endif  // ONTOPOP_ENSEMBLE_H_
