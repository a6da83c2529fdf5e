#include "ontopop/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "ontopop/error.h"
#include "ontopop/rng.h"

namespace ontopop {

using nlohmann::json;

namespace {

std::size_t intersection_size(const std::set<std::string> &a,
                              const std::set<std::string> &b) {
  std::size_t n = 0;
  for (const auto &x : a) n += b.count(x);
  return n;
}

std::set<std::string> restrict_to(const std::set<std::string> &words,
                                  const std::optional<std::set<std::string>> &scope) {
  if (!scope) return words;
  std::set<std::string> out;
  for (const auto &w : words) {
    if (scope->count(w)) out.insert(w);
  }
  return out;
}

}  // namespace

PrecisionRecall class_precision_recall(const std::set<std::string> &model_words,
                                       const std::set<std::string> &gold_words,
                                       Diagnostics *diag) {
  const auto hits = static_cast<double>(intersection_size(model_words, gold_words));
  PrecisionRecall pr;
  if (!model_words.empty()) pr.precision = hits / static_cast<double>(model_words.size());
  if (gold_words.empty()) {
    warn(diag, "empty gold set: recall defined as 0");
  } else {
    pr.recall = hits / static_cast<double>(gold_words.size());
  }
  return pr;
}

double f1(double precision, double recall) {
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

Split split_corpus(const std::vector<std::string> &candidates,
                   std::array<double, 3> ratios, std::uint64_t seed) {
  if (candidates.empty()) throw ConfigError("cannot split an empty candidate set");
  double total = 0.0;
  for (double r : ratios) {
    if (r < 0.0) throw ConfigError("split ratios must be non-negative");
    total += r;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("split ratios must sum to 1");

  const std::size_t n = candidates.size();
  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> remainders{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double quota = ratios[i] * static_cast<double>(n);
    sizes[i] = static_cast<std::size_t>(std::floor(quota + 1e-9));
    remainders[i] = std::max(0.0, quota - static_cast<double>(sizes[i]));
    assigned += sizes[i];
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainders[a] > remainders[b] + 1e-12;
  });
  for (std::size_t k = 0; assigned < n; k = (k + 1) % 3, ++assigned) {
    ++sizes[order[k]];
  }

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  rng.shuffle(perm);

  std::vector<int> part(n, 0);
  std::size_t pos = 0;
  for (int p = 0; p < 3; ++p) {
    for (std::size_t i = 0; i < sizes[p]; ++i) part[perm[pos++]] = p;
  }
  Split split;
  for (std::size_t i = 0; i < n; ++i) {
    (part[i] == 0 ? split.train : part[i] == 1 ? split.validation : split.test)
        .push_back(candidates[i]);
  }
  return split;
}

EvalReport evaluate_models(std::span<const ModelOutput> outputs,
                           const GoldStandard &gold, const Ontology &ontology,
                           const EvaluationOptions &options, Diagnostics *diag) {
  EvalReport report;
  Diagnostics local;
  auto note = [&](const std::string &message) {
    local.warn(message);
    warn(diag, message);
  };

  std::vector<std::string> classes;
  for (const auto &cls : ontology.classes()) {
    if (gold.count(cls.id)) {
      classes.push_back(cls.id);
    } else {
      note("gold standard has no entry for class '" + cls.id +
           "'; excluded from averaging");
    }
  }
  if (classes.empty()) note("no class has a gold standard; all scores are 0");

  for (const auto &output : outputs) {
    const std::string tag(to_string(output.tag));
    double sum_p = 0.0, sum_r = 0.0;
    std::size_t hits = 0, emitted = 0, expected = 0;
    for (const auto &cls : classes) {
      const auto model_words = restrict_to(output.words_for(cls), options.scope);
      const auto gold_words = restrict_to(gold.at(cls), options.scope);
      Diagnostics pr_diag;
      const auto pr = class_precision_recall(model_words, gold_words, &pr_diag);
      if (!pr_diag.empty() && output.tag == outputs.front().tag) {
        note("class '" + cls + "' has an empty gold set in the evaluation scope");
      }
      report.per_class[{tag, cls}] = pr;
      sum_p += pr.precision;
      sum_r += pr.recall;
      hits += intersection_size(model_words, gold_words);
      emitted += model_words.size();
      expected += gold_words.size();
    }
    ModelScores scores;
    if (!classes.empty()) {
      if (options.averaging == Averaging::kMacro) {
        scores.precision = sum_p / static_cast<double>(classes.size());
        scores.recall = sum_r / static_cast<double>(classes.size());
      } else {
        scores.precision = emitted ? static_cast<double>(hits) / emitted : 0.0;
        scores.recall = expected ? static_cast<double>(hits) / expected : 0.0;
      }
    }
    scores.f1 = f1(scores.precision, scores.recall);
    if (output.tag == ModelTag::kEnsemble) {
      report.ensemble = scores;
    } else {
      report.per_model[tag] = scores;
    }
  }
  report.warnings = local.warnings();
  return report;
}

json report_to_json(const EvalReport &report) {
  json per_model = json::object();
  for (const auto &[tag, s] : report.per_model) {
    per_model[tag] = {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
  }
  json per_class = json::array();
  for (const auto &[key, pr] : report.per_class) {
    per_class.push_back({{"model", key.first},
                         {"class", key.second},
                         {"precision", pr.precision},
                         {"recall", pr.recall}});
  }
  json doc = {{"per_model", std::move(per_model)},
              {"per_class", std::move(per_class)},
              {"weights", report.weights},
              {"weight_source", report.weight_source},
              {"threshold", report.threshold},
              {"split_sizes",
               {{"train", report.split_sizes[0]},
                {"validation", report.split_sizes[1]},
                {"test", report.split_sizes[2]}}},
              {"warnings", report.warnings}};
  if (report.ensemble) {
    doc["ensemble"] = {{"precision", report.ensemble->precision},
                       {"recall", report.ensemble->recall},
                       {"f1", report.ensemble->f1}};
  } else {
    doc["ensemble"] = nullptr;
  }
  return doc;
}

std::string report_to_table(const EvalReport &report) {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof line, "%-10s %9s %9s %9s\n", "", "Precision",
                "Recall", "F1");
  out << line;
  auto row = [&](const std::string &name, const ModelScores &s) {
    std::snprintf(line, sizeof line, "%-10s %9.2f %9.2f %9.2f\n", name.c_str(),
                  s.precision, s.recall, s.f1);
    out << line;
  };
  for (const auto &[tag, s] : report.per_model) row(tag, s);
  if (report.ensemble) row("ensemble", *report.ensemble);
  if (!report.weights.empty()) {
    out << "\nweights (" << report.weight_source << "):";
    for (double w : report.weights) {
      std::snprintf(line, sizeof line, " %.2f", w);
      out << line;
    }
    out << '\n';
  }
  out << "split sizes: train=" << report.split_sizes[0]
      << " validation=" << report.split_sizes[1]
      << " test=" << report.split_sizes[2] << '\n';
  for (const auto &w : report.warnings) out << "warning: " << w << '\n';
  return out.str();
}

}  // namespace ontopop
