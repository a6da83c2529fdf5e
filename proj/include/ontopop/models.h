#ifndef ONTOPOP_MODELS_H_
#define ONTOPOP_MODELS_H_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ontopop/clustering.h"
#include "ontopop/diagnostics.h"
#include "ontopop/embeddings.h"
#include "ontopop/ontology.h"
#include "ontopop/taxonomy.h"

namespace ontopop {

enum class ModelTag { kM1, kM2, kM3, kM4, kM5, kEnsemble };

// The five candidate models in ensemble order.
inline constexpr std::array<ModelTag, 5> kCandidateModels = {
    ModelTag::kM1, ModelTag::kM2, ModelTag::kM3, ModelTag::kM4, ModelTag::kM5};

std::string_view to_string(ModelTag tag);
ModelTag parse_model_tag(std::string_view name);

struct Membership {
  std::string class_id;
  double score = 0.0;

  friend bool operator==(const Membership &, const Membership &) = default;
};

// Per-instance class memberships emitted by one model. Memberships of an
// instance are kept ordered by class id.
struct ModelOutput {
  ModelTag tag = ModelTag::kM1;
  std::map<std::string, std::vector<Membership>> memberships;

  void add(const std::string &instance, Membership membership);
  // Instances emitted for `class_id`.
  std::set<std::string> words_for(std::string_view class_id) const;
  bool emits(std::string_view instance, std::string_view class_id) const;
};

// --- Membership by distance -------------------------------------------------

// Class whose vector has the highest cosine with `instance`; the score is that
// cosine. Ties go to the smaller class id. Requires a non-empty class list.
Membership m1_assign(VectorView instance,
                     const std::vector<ClassVector> &class_vectors);

// nullopt for an out-of-vocabulary instance.
std::optional<Membership> m1_assign(std::string_view instance,
                                    const std::vector<ClassVector> &class_vectors,
                                    const EmbeddingStore &store);

ModelOutput run_m1(const std::vector<std::string> &candidates,
                   const std::vector<ClassVector> &class_vectors,
                   const EmbeddingStore &store, Diagnostics *diag = nullptr);

// --- Membership by dissimilar exclusion -------------------------------------

struct Member {
  std::string token;
  VectorView vector;
};

// Member with the lowest cosine to the mean of the unit-normalized member
// vectors; ties go to the lexicographically smaller token. Throws
// std::invalid_argument for fewer than 3 members and DegenerateInputError
// when the mean is the zero vector.
std::string exclusion(const std::vector<Member> &members);

struct ExclusionOptions {
  std::size_t min_seeds = 2;
};

// Classes j for which exclusion(seeds_j + {instance}) removes a seed rather
// than the instance. Confidence is the margin between the instance's and the
// excluded seed's similarity to the mean, clamped to [0, 1]. Classes with
// fewer than min_seeds in-vocabulary seeds are skipped with a warning.
std::vector<Membership> m2_memberships(std::string_view instance,
                                       const Ontology &ontology,
                                       const EmbeddingStore &store,
                                       const ExclusionOptions &options = {},
                                       Diagnostics *diag = nullptr);

ModelOutput run_m2(const std::vector<std::string> &candidates,
                   const Ontology &ontology, const EmbeddingStore &store,
                   const ExclusionOptions &options = {},
                   Diagnostics *diag = nullptr);

// --- Set expansion over a taxonomy ------------------------------------------

// Per class: pick one sense per seed by deepest average pairwise LCA, take
// the LCA of the chosen senses as the root, and return the root's subtree
// lemmas minus the class seeds, intersected with the candidates.
std::map<std::string, std::set<std::string>> m3_expand(
    const Ontology &ontology, const TaxonomyStore &taxonomy,
    const std::vector<std::string> &candidates, Diagnostics *diag = nullptr);

ModelOutput run_m3(const Ontology &ontology, const TaxonomyStore &taxonomy,
                   const std::vector<std::string> &candidates,
                   Diagnostics *diag = nullptr);

// --- Cluster to class assignment --------------------------------------------

// Which rule fixed a cluster's class.
enum class Resolution { kVote, kTieBreak, kContest, kGreedy };

struct ClusterAssignment {
  // cluster_to_class[c] is an index into the class list.
  std::vector<std::size_t> cluster_to_class;
  std::vector<Resolution> resolution;
  std::size_t iterations = 0;
};

// Bijection between K clusters and K classes from a seed-vote matrix
// (votes[c][j] = seeds of class j in cluster c) and an affinity matrix
// (affinity[c][j] = summed cosine of cluster c's members to class j's
// vector). class_ids orders ties. Procedure:
//   1. a cluster takes its strict-majority class;
//   2. a tied cluster takes the best-affinity class among its tied classes
//      that nobody claims;
//   3. a class claimed by several clusters stays with the best-affinity
//      claimant, the others become unassigned;
//   4. 2-3 repeat until an iteration assigns nothing new;
//   5. leftovers are matched greedily by descending affinity, ties by
//      (cluster index, class id).
ClusterAssignment resolve_clusters(
    const std::vector<std::vector<std::size_t>> &votes,
    const std::vector<std::vector<double>> &affinity,
    const std::vector<std::string> &class_ids);

// Builds votes and affinities for token clusters and resolves them. One
// class vector per ontology class participating, in the same order.
ClusterAssignment assign_clusters(const std::vector<std::vector<std::string>> &clusters,
                                  const Ontology &ontology,
                                  const std::vector<ClassVector> &class_vectors,
                                  const EmbeddingStore &store);

enum class ClusteringMethod { kKMeans, kAgglomerative };

struct ClusterModelOptions {
  KMeansOptions kmeans;
};

// M4 (k-means) and M5 (average-linkage): cluster candidates together with
// the seeds, map clusters to classes and label each candidate with its
// cluster's class. Score is the cosine to that class's vector.
ModelOutput run_cluster_model(ClusteringMethod method, const Ontology &ontology,
                              const std::vector<ClassVector> &class_vectors,
                              const EmbeddingStore &store,
                              const std::vector<std::string> &candidates,
                              const ClusterModelOptions &options = {},
                              Diagnostics *diag = nullptr);

inline ModelOutput run_m4(const Ontology &ontology,
                          const std::vector<ClassVector> &class_vectors,
                          const EmbeddingStore &store,
                          const std::vector<std::string> &candidates,
                          const ClusterModelOptions &options = {},
                          Diagnostics *diag = nullptr) {
  return run_cluster_model(ClusteringMethod::kKMeans, ontology, class_vectors,
                           store, candidates, options, diag);
}

inline ModelOutput run_m5(const Ontology &ontology,
                          const std::vector<ClassVector> &class_vectors,
                          const EmbeddingStore &store,
                          const std::vector<std::string> &candidates,
                          const ClusterModelOptions &options = {},
                          Diagnostics *diag = nullptr) {
  return run_cluster_model(ClusteringMethod::kAgglomerative, ontology,
                           class_vectors, store, candidates, options, diag);
}

}  // namespace ontopop

#endif  // ONTOPOP_MODELS_H_
