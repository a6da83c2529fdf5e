#include "ontopop/models.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "ontopop/error.h"

namespace ontopop {

std::string_view to_string(ModelTag tag) {
  switch (tag) {
    case ModelTag::kM1: return "M1";
    case ModelTag::kM2: return "M2";
    case ModelTag::kM3: return "M3";
    case ModelTag::kM4: return "M4";
    case ModelTag::kM5: return "M5";
    case ModelTag::kEnsemble: return "ensemble";
  }
  return "?";
}

ModelTag parse_model_tag(std::string_view name) {
  for (ModelTag tag : {ModelTag::kM1, ModelTag::kM2, ModelTag::kM3,
                       ModelTag::kM4, ModelTag::kM5, ModelTag::kEnsemble}) {
    if (to_string(tag) == name) return tag;
  }
  throw std::invalid_argument("unknown model tag '" + std::string(name) + "'");
}

void ModelOutput::add(const std::string &instance, Membership membership) {
  auto &list = memberships[instance];
  auto it = std::lower_bound(list.begin(), list.end(), membership.class_id,
                             [](const Membership &m, const std::string &id) {
                               return m.class_id < id;
                             });
  if (it != list.end() && it->class_id == membership.class_id) {
    *it = std::move(membership);
  } else {
    list.insert(it, std::move(membership));
  }
}

std::set<std::string> ModelOutput::words_for(std::string_view class_id) const {
  std::set<std::string> words;
  for (const auto &[instance, list] : memberships) {
    for (const auto &m : list) {
      if (m.class_id == class_id) words.insert(instance);
    }
  }
  return words;
}

bool ModelOutput::emits(std::string_view instance,
                        std::string_view class_id) const {
  auto it = memberships.find(std::string(instance));
  if (it == memberships.end()) return false;
  return std::any_of(it->second.begin(), it->second.end(),
                     [&](const Membership &m) { return m.class_id == class_id; });
}

// --- M1 ----------------------------------------------------------------------

Membership m1_assign(VectorView instance,
                     const std::vector<ClassVector> &class_vectors) {
  if (class_vectors.empty()) {
    throw std::invalid_argument("m1_assign needs at least one class vector");
  }
  const ClassVector *best = nullptr;
  double best_score = -std::numeric_limits<double>::infinity();
  for (const auto &cv : class_vectors) {
    const double score = cosine(instance, cv.vector);
    if (score > best_score ||
        (score == best_score && cv.class_id < best->class_id)) {
      best_score = score;
      best = &cv;
    }
  }
  return {best->class_id, best_score};
}

std::optional<Membership> m1_assign(std::string_view instance,
                                    const std::vector<ClassVector> &class_vectors,
                                    const EmbeddingStore &store) {
  auto v = store.vector_of(instance);
  if (!v) return std::nullopt;
  return m1_assign(*v, class_vectors);
}

ModelOutput run_m1(const std::vector<std::string> &candidates,
                   const std::vector<ClassVector> &class_vectors,
                   const EmbeddingStore &store, Diagnostics *diag) {
  ModelOutput out{ModelTag::kM1, {}};
  if (class_vectors.empty()) {
    warn(diag, "M1: no class vectors, nothing assigned");
    return out;
  }
  for (const auto &token : candidates) {
    if (auto m = m1_assign(token, class_vectors, store)) out.add(token, *m);
  }
  return out;
}

// --- M2 ----------------------------------------------------------------------

namespace {

// Cosine of each unit-normalized member to the members' mean direction.
std::vector<double> cohesion_scores(const std::vector<Member> &members) {
  if (members.size() < 3) {
    throw std::invalid_argument("exclusion needs at least 3 members, got " +
                                std::to_string(members.size()));
  }
  const std::size_t dim = members.front().vector.size();
  std::vector<Vector> units;
  units.reserve(members.size());
  Vector mean(dim, 0.0);
  for (const auto &m : members) {
    units.push_back(normalized(m.vector));
    for (std::size_t d = 0; d < dim; ++d) mean[d] += units.back()[d];
  }
  for (double &x : mean) x /= static_cast<double>(members.size());
  if (norm(mean) == 0.0) {
    throw DegenerateInputError("exclusion: member vectors cancel out");
  }
  std::vector<double> scores;
  scores.reserve(members.size());
  for (const auto &u : units) scores.push_back(cosine(u, mean));
  return scores;
}

std::size_t least_cohesive(const std::vector<Member> &members,
                           const std::vector<double> &scores) {
  std::size_t worst = 0;
  for (std::size_t i = 1; i < members.size(); ++i) {
    if (scores[i] < scores[worst] ||
        (scores[i] == scores[worst] && members[i].token < members[worst].token)) {
      worst = i;
    }
  }
  return worst;
}

struct SeedSet {
  std::string class_id;
  std::vector<Member> seeds;
};

std::vector<SeedSet> usable_seed_sets(const Ontology &ontology,
                                      const EmbeddingStore &store,
                                      std::size_t min_seeds, Diagnostics *diag) {
  std::vector<SeedSet> sets;
  const std::size_t needed = std::max<std::size_t>(min_seeds, 2);
  for (const auto &cls : ontology.classes()) {
    SeedSet set{cls.id, {}};
    for (const auto &seed : cls.seeds) {
      if (auto v = store.vector_of(seed)) set.seeds.push_back({seed, *v});
    }
    if (set.seeds.size() < needed) {
      warn(diag, "M2: class '" + cls.id + "' skipped, only " +
                     std::to_string(set.seeds.size()) +
                     " in-vocabulary seeds (need " + std::to_string(needed) + ")");
      continue;
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

std::vector<Membership> exclusion_memberships(std::string_view instance,
                                              VectorView vector,
                                              const std::vector<SeedSet> &sets) {
  std::vector<Membership> out;
  for (const auto &set : sets) {
    std::vector<Member> members;
    members.reserve(set.seeds.size() + 1);
    for (const auto &seed : set.seeds) {
      if (seed.token != instance) members.push_back(seed);
    }
    if (members.size() < 2) continue;
    members.push_back({std::string(instance), vector});
    std::vector<double> scores;
    try {
      scores = cohesion_scores(members);
    } catch (const DegenerateInputError &) {
      continue;
    }
    const std::size_t excluded = least_cohesive(members, scores);
    const std::size_t self = members.size() - 1;
    if (excluded == self) continue;
    const double margin = std::clamp(scores[self] - scores[excluded], 0.0, 1.0);
    out.push_back({set.class_id, margin});
  }
  std::sort(out.begin(), out.end(), [](const Membership &a, const Membership &b) {
    return a.class_id < b.class_id;
  });
  return out;
}

}  // namespace

std::string exclusion(const std::vector<Member> &members) {
  const auto scores = cohesion_scores(members);
  return members[least_cohesive(members, scores)].token;
}

std::vector<Membership> m2_memberships(std::string_view instance,
                                       const Ontology &ontology,
                                       const EmbeddingStore &store,
                                       const ExclusionOptions &options,
                                       Diagnostics *diag) {
  auto v = store.vector_of(instance);
  if (!v) return {};
  return exclusion_memberships(
      instance, *v, usable_seed_sets(ontology, store, options.min_seeds, diag));
}

ModelOutput run_m2(const std::vector<std::string> &candidates,
                   const Ontology &ontology, const EmbeddingStore &store,
                   const ExclusionOptions &options, Diagnostics *diag) {
  ModelOutput out{ModelTag::kM2, {}};
  const auto sets = usable_seed_sets(ontology, store, options.min_seeds, diag);
  for (const auto &token : candidates) {
    auto v = store.vector_of(token);
    if (!v) continue;
    for (auto &m : exclusion_memberships(token, *v, sets)) out.add(token, std::move(m));
  }
  return out;
}

// --- M3 ----------------------------------------------------------------------

std::map<std::string, std::set<std::string>> m3_expand(
    const Ontology &ontology, const TaxonomyStore &taxonomy,
    const std::vector<std::string> &candidates, Diagnostics *diag) {
  const std::set<std::string> pool(candidates.begin(), candidates.end());
  std::map<std::string, std::set<std::string>> result;
  for (const auto &cls : ontology.classes()) {
    std::vector<std::vector<std::string>> senses;
    for (const auto &seed : cls.seeds) {
      auto s = taxonomy.senses_of(seed);
      if (s.empty()) {
        warn(diag, "M3: class '" + cls.id + "': seed '" + seed +
                       "' has no synset, skipped");
        continue;
      }
      senses.push_back(std::move(s));
    }
    if (senses.size() < 2) {
      warn(diag, "M3: class '" + cls.id +
                     "' skipped, fewer than 2 seeds with synsets");
      continue;
    }

    // Sense of each seed: the one whose LCAs with the other seeds' closest
    // senses are deepest on average.
    std::vector<std::string> chosen;
    for (std::size_t w = 0; w < senses.size(); ++w) {
      const std::string *best = nullptr;
      double best_score = -std::numeric_limits<double>::infinity();
      for (const auto &sense : senses[w]) {
        double total = 0.0;
        for (std::size_t other = 0; other < senses.size(); ++other) {
          if (other == w) continue;
          int closest = -1;
          for (const auto &other_sense : senses[other]) {
            closest = std::max(closest, taxonomy.depth(taxonomy.lowest_common_ancestor(
                                            sense, other_sense)));
          }
          total += closest;
        }
        const double score = total / static_cast<double>(senses.size() - 1);
        if (score > best_score) {
          best_score = score;
          best = &sense;
        }
      }
      chosen.push_back(*best);
    }

    const std::string root = taxonomy.lowest_common_ancestor(chosen);
    auto &words = result[cls.id];
    if (root == TaxonomyStore::kVirtualRoot) {
      warn(diag, "M3: class '" + cls.id +
                     "' seeds share no common ancestor, expansion degenerated");
      continue;
    }
    for (const auto &lemma : taxonomy.subtree_lemmas(root)) {
      if (!cls.has_seed(lemma) && pool.count(lemma)) words.insert(lemma);
    }
  }
  return result;
}

ModelOutput run_m3(const Ontology &ontology, const TaxonomyStore &taxonomy,
                   const std::vector<std::string> &candidates,
                   Diagnostics *diag) {
  ModelOutput out{ModelTag::kM3, {}};
  for (const auto &[class_id, words] : m3_expand(ontology, taxonomy, candidates, diag)) {
    for (const auto &word : words) out.add(word, {class_id, 1.0});
  }
  return out;
}

// --- Cluster assignment --------------------------------------------------------

ClusterAssignment resolve_clusters(
    const std::vector<std::vector<std::size_t>> &votes,
    const std::vector<std::vector<double>> &affinity,
    const std::vector<std::string> &class_ids) {
  const std::size_t k = class_ids.size();
  if (votes.size() != k || affinity.size() != k) {
    throw std::invalid_argument("cluster count must equal class count");
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (votes[c].size() != k || affinity[c].size() != k) {
      throw std::invalid_argument("vote/affinity rows must have one entry per class");
    }
  }

  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  ClusterAssignment result;
  result.cluster_to_class.assign(k, kNone);
  result.resolution.assign(k, Resolution::kGreedy);
  std::vector<std::size_t> claim(k, kNone);
  std::vector<Resolution> claim_kind(k, Resolution::kVote);
  std::vector<std::vector<std::size_t>> tied(k);
  std::vector<char> taken(k, 0);

  // Best class for cluster c among `options`: highest affinity, then class id.
  auto closest = [&](std::size_t c, const std::vector<std::size_t> &options) {
    std::size_t best = options.front();
    for (std::size_t j : options) {
      if (affinity[c][j] > affinity[c][best] ||
          (affinity[c][j] == affinity[c][best] && class_ids[j] < class_ids[best])) {
        best = j;
      }
    }
    return best;
  };

  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t top = *std::max_element(votes[c].begin(), votes[c].end());
    if (top == 0) continue;
    std::vector<std::size_t> winners;
    for (std::size_t j = 0; j < k; ++j) {
      if (votes[c][j] == top) winners.push_back(j);
    }
    if (winners.size() == 1) {
      claim[c] = winners.front();
    } else {
      tied[c] = std::move(winners);
    }
  }

  while (true) {
    ++result.iterations;

    std::vector<char> claimed = taken;
    for (std::size_t c = 0; c < k; ++c) {
      if (claim[c] != kNone) claimed[claim[c]] = 1;
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (result.cluster_to_class[c] != kNone || claim[c] != kNone || tied[c].empty()) {
        continue;
      }
      std::vector<std::size_t> options;
      for (std::size_t j : tied[c]) {
        if (!claimed[j]) options.push_back(j);
      }
      if (!options.empty()) {
        claim[c] = closest(c, options);
        claim_kind[c] = Resolution::kTieBreak;
      }
    }

    std::size_t new_assignments = 0;
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<std::size_t> claimants;
      for (std::size_t c = 0; c < k; ++c) {
        if (claim[c] == j) claimants.push_back(c);
      }
      if (claimants.empty()) continue;
      std::size_t winner = claimants.front();
      for (std::size_t c : claimants) {
        if (affinity[c][j] > affinity[winner][j]) winner = c;
      }
      result.cluster_to_class[winner] = j;
      result.resolution[winner] =
          claimants.size() > 1 ? Resolution::kContest : claim_kind[winner];
      taken[j] = 1;
      ++new_assignments;
      for (std::size_t c : claimants) claim[c] = kNone;
    }
    if (new_assignments == 0) break;
  }

  struct Pair {
    double affinity;
    std::size_t cluster;
    std::size_t cls;
  };
  std::vector<Pair> pairs;
  for (std::size_t c = 0; c < k; ++c) {
    if (result.cluster_to_class[c] != kNone) continue;
    for (std::size_t j = 0; j < k; ++j) {
      if (!taken[j]) pairs.push_back({affinity[c][j], c, j});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [&](const Pair &a, const Pair &b) {
    if (a.affinity != b.affinity) return a.affinity > b.affinity;
    if (a.cluster != b.cluster) return a.cluster < b.cluster;
    return class_ids[a.cls] < class_ids[b.cls];
  });
  for (const auto &p : pairs) {
    if (result.cluster_to_class[p.cluster] != kNone || taken[p.cls]) continue;
    result.cluster_to_class[p.cluster] = p.cls;
    result.resolution[p.cluster] = Resolution::kGreedy;
    taken[p.cls] = 1;
  }
  return result;
}

ClusterAssignment assign_clusters(const std::vector<std::vector<std::string>> &clusters,
                                  const Ontology &ontology,
                                  const std::vector<ClassVector> &class_vectors,
                                  const EmbeddingStore &store) {
  const std::size_t k = class_vectors.size();
  if (clusters.size() != k) {
    throw std::invalid_argument("assign_clusters: " + std::to_string(clusters.size()) +
                                " clusters for " + std::to_string(k) + " classes");
  }
  std::vector<const OntologyClass *> classes;
  std::vector<std::string> class_ids;
  for (const auto &cv : class_vectors) {
    const auto *cls = ontology.find(cv.class_id);
    if (cls == nullptr) {
      throw std::invalid_argument("class vector for unknown class '" + cv.class_id + "'");
    }
    classes.push_back(cls);
    class_ids.push_back(cv.class_id);
  }

  std::vector<std::vector<std::size_t>> votes(k, std::vector<std::size_t>(k, 0));
  std::vector<std::vector<double>> affinity(k, std::vector<double>(k, 0.0));
  for (std::size_t c = 0; c < k; ++c) {
    for (const auto &token : clusters[c]) {
      for (std::size_t j = 0; j < k; ++j) {
        if (classes[j]->has_seed(token)) ++votes[c][j];
      }
      auto v = store.vector_of(token);
      if (!v) continue;
      for (std::size_t j = 0; j < k; ++j) {
        affinity[c][j] += cosine(*v, class_vectors[j].vector);
      }
    }
  }
  return resolve_clusters(votes, affinity, class_ids);
}

ModelOutput run_cluster_model(ClusteringMethod method, const Ontology &ontology,
                              const std::vector<ClassVector> &class_vectors,
                              const EmbeddingStore &store,
                              const std::vector<std::string> &candidates,
                              const ClusterModelOptions &options,
                              Diagnostics *diag) {
  const ModelTag tag =
      method == ClusteringMethod::kKMeans ? ModelTag::kM4 : ModelTag::kM5;
  const std::string name(to_string(tag));
  ModelOutput out{tag, {}};

  const auto seeds = ontology.all_seeds();
  std::vector<std::string> pool;
  std::set<std::string> in_pool;
  for (const auto &token : candidates) {
    if (seeds.count(token) || !store.contains(token)) continue;
    if (in_pool.insert(token).second) pool.push_back(token);
  }
  const std::size_t candidate_count = pool.size();
  if (candidate_count == 0) {
    warn(diag, name + ": no in-vocabulary candidates");
    return out;
  }
  for (const auto &cv : class_vectors) {
    for (const auto &seed : ontology.find(cv.class_id)->seeds) {
      if (store.contains(seed) && in_pool.insert(seed).second) pool.push_back(seed);
    }
  }
  const std::size_t k = class_vectors.size();
  if (k == 0 || pool.size() < k) {
    warn(diag, name + ": " + std::to_string(pool.size()) + " instances for " +
                   std::to_string(k) + " classes, clustering skipped");
    return out;
  }

  std::vector<Vector> vectors;
  vectors.reserve(pool.size());
  for (const auto &token : pool) {
    auto v = *store.vector_of(token);
    vectors.emplace_back(v.begin(), v.end());
  }
  const auto labels = method == ClusteringMethod::kKMeans
                          ? kmeans(vectors, k, options.kmeans)
                          : agglomerative_cut(vectors, k);

  std::vector<std::vector<std::string>> clusters(k);
  for (std::size_t i = 0; i < pool.size(); ++i) clusters[labels[i]].push_back(pool[i]);
  const auto assignment = assign_clusters(clusters, ontology, class_vectors, store);

  for (std::size_t i = 0; i < candidate_count; ++i) {
    const auto &cv = class_vectors[assignment.cluster_to_class[labels[i]]];
    out.add(pool[i], {cv.class_id, cosine(vectors[i], cv.vector)});
  }
  return out;
}

}  // namespace ontopop
