#include "ontopop/ensemble.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "ontopop/error.h"

namespace ontopop {

EnsembleWeights compute_weights(std::span<const double> f1_scores) {
  double total = 0.0;
  for (double f : f1_scores) {
    if (!(f >= 0.0 && f <= 1.0)) {
      throw ConfigError("F1 score " + std::to_string(f) + " outside [0, 1]");
    }
    total += f;
  }
  if (total <= 0.0) {
    throw ConfigError(
        "every model has F1 = 0; supply explicit ensemble weights instead");
  }
  EnsembleWeights w;
  for (double f : f1_scores) w.values.push_back(f / total);
  return w;
}

EnsembleWeights normalize_weights(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ConfigError("ensemble weights must be non-negative");
    }
    total += w;
  }
  if (total <= 0.0) throw ConfigError("ensemble weights are all zero");
  EnsembleWeights out;
  for (double w : weights) out.values.push_back(w / total);
  return out;
}

int MembershipMatrix::row_sum(std::size_t model) const {
  int sum = 0;
  for (std::size_t j = 0; j < classes_; ++j) sum += at(model, j);
  return sum;
}

MembershipMatrix membership_matrix(std::string_view instance,
                                   std::span<const ModelOutput> outputs,
                                   const std::vector<std::string> &classes) {
  MembershipMatrix matrix(outputs.size(), classes.size());
  const std::string key(instance);
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    auto it = outputs[i].memberships.find(key);
    if (it == outputs[i].memberships.end()) continue;
    for (const auto &m : it->second) {
      auto pos = std::find(classes.begin(), classes.end(), m.class_id);
      if (pos == classes.end()) {
        throw ValidationError(std::string(to_string(outputs[i].tag)) +
                              " emitted unknown class '" + m.class_id + "'");
      }
      matrix.set(i, static_cast<std::size_t>(pos - classes.begin()), 1);
    }
  }
  return matrix;
}

std::vector<double> score(const EnsembleWeights &weights,
                          const MembershipMatrix &matrix) {
  if (weights.values.size() != matrix.models()) {
    throw std::invalid_argument("weights have " +
                                std::to_string(weights.values.size()) +
                                " entries for " + std::to_string(matrix.models()) +
                                " models");
  }
  std::vector<double> s(matrix.classes(), 0.0);
  for (std::size_t i = 0; i < matrix.models(); ++i) {
    for (std::size_t j = 0; j < matrix.classes(); ++j) {
      s[j] += weights.values[i] * matrix.at(i, j);
    }
  }
  return s;
}

std::optional<std::string> assign(std::span<const double> scores,
                                  const std::vector<std::string> &classes,
                                  double threshold) {
  if (scores.size() != classes.size()) {
    throw std::invalid_argument("score vector and class list differ in length");
  }
  std::optional<std::size_t> best;
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (!best || scores[j] > scores[*best] ||
        (scores[j] == scores[*best] && classes[j] < classes[*best])) {
      best = j;
    }
  }
  if (!best || scores[*best] <= 0.0 || scores[*best] < threshold) {
    return std::nullopt;
  }
  return classes[*best];
}

std::optional<EnsembleDecision> decide(std::string_view instance,
                                       std::span<const ModelOutput> outputs,
                                       const EnsembleWeights &weights,
                                       const std::vector<std::string> &classes,
                                       double threshold) {
  const auto matrix = membership_matrix(instance, outputs, classes);
  const auto scores = score(weights, matrix);
  auto cls = assign(scores, classes, threshold);
  if (!cls) return std::nullopt;
  const auto j = static_cast<std::size_t>(
      std::find(classes.begin(), classes.end(), *cls) - classes.begin());
  EnsembleDecision decision{*cls, scores[j], {}};
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (matrix.at(i, j)) decision.models.emplace_back(to_string(outputs[i].tag));
  }
  return decision;
}

ModelOutput run_ensemble(std::span<const ModelOutput> outputs,
                         const EnsembleWeights &weights,
                         const std::vector<std::string> &classes,
                         double threshold) {
  std::set<std::string> instances;
  for (const auto &out : outputs) {
    for (const auto &[instance, list] : out.memberships) instances.insert(instance);
  }
  ModelOutput result{ModelTag::kEnsemble, {}};
  for (const auto &instance : instances) {
    if (auto d = decide(instance, outputs, weights, classes, threshold)) {
      result.add(instance, {d->class_id, d->score});
    }
  }
  return result;
}

}  // namespace ontopop
