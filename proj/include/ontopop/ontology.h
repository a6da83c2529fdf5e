#ifndef ONTOPOP_ONTOLOGY_H_
#define ONTOPOP_ONTOLOGY_H_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ontopop/diagnostics.h"
#include "ontopop/embeddings.h"

namespace ontopop {

// An instance added to a class by the population driver, with provenance.
struct PopulatedInstance {
  std::string instance;
  std::vector<std::string> models;
  double score = 0.0;

  friend bool operator==(const PopulatedInstance &,
                         const PopulatedInstance &) = default;
};

struct OntologyClass {
  std::string id;
  std::string label;
  std::optional<std::string> parent;
  // Unique, in file order.
  std::vector<std::string> seeds;
  std::vector<PopulatedInstance> populated;

  bool has_seed(std::string_view token) const;

  friend bool operator==(const OntologyClass &, const OntologyClass &) = default;
};

// Class forest with seed and populated instances. Classes keep file order.
class Ontology {
 public:
  Ontology() = default;

  // Validates ids, parent links and the seed/populated disjointness.
  // Empty seed sets are a warning, or a ValidationError when `strict`.
  explicit Ontology(std::vector<OntologyClass> classes,
                    Diagnostics *diag = nullptr, bool strict = false);

  const std::vector<OntologyClass> &classes() const { return classes_; }
  std::size_t size() const { return classes_.size(); }
  const OntologyClass *find(std::string_view id) const;
  std::vector<std::string> class_ids() const;

  // Union of all seed sets.
  std::set<std::string> all_seeds() const;

  // Adds a populated instance to `class_id`. Throws ValidationError for an
  // unknown class or when the instance is a seed of that class; an instance
  // already populated in the class is replaced.
  void add_populated(std::string_view class_id, PopulatedInstance entry);
  void clear_populated();

  friend bool operator==(const Ontology &, const Ontology &) = default;

 private:
  std::vector<OntologyClass> classes_;
};

Ontology ontology_from_json(const nlohmann::json &doc,
                            Diagnostics *diag = nullptr, bool strict = false);
nlohmann::json ontology_to_json(const Ontology &ontology);

Ontology load_ontology(const std::filesystem::path &path,
                       Diagnostics *diag = nullptr, bool strict = false);
void save_population(const Ontology &ontology,
                     const std::filesystem::path &path);

// Gold standard: class id -> expected instance set.
using GoldStandard = std::map<std::string, std::set<std::string>>;

GoldStandard gold_from_json(const nlohmann::json &doc);
nlohmann::json gold_to_json(const GoldStandard &gold);
GoldStandard load_gold(const std::filesystem::path &path);

enum class AggregationMethod { kCentroid, kMedian };

AggregationMethod parse_aggregation_method(std::string_view name);
std::string_view to_string(AggregationMethod method);

struct ClassVector {
  std::string class_id;
  Vector vector;
  AggregationMethod method = AggregationMethod::kCentroid;
};

// Representative vector of a class: component-wise mean (centroid) or
// median of its in-vocabulary seed vectors. OOV seeds are skipped with a
// warning. Throws DegenerateInputError when no seed is in vocabulary or the
// aggregate is the zero vector.
ClassVector derive_class_vector(const OntologyClass &cls,
                                const EmbeddingStore &store,
                                AggregationMethod method,
                                Diagnostics *diag = nullptr);

// Class vectors for every derivable class, in ontology order. Classes that
// cannot be derived are reported and left out.
std::vector<ClassVector> derive_class_vectors(const Ontology &ontology,
                                              const EmbeddingStore &store,
                                              AggregationMethod method,
                                              Diagnostics *diag = nullptr);

}  // namespace ontopop

#endif  // ONTOPOP_ONTOLOGY_H_
