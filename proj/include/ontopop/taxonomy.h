#ifndef ONTOPOP_TAXONOMY_H_
#define ONTOPOP_TAXONOMY_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace ontopop {

struct Synset {
  std::string id;
  std::vector<std::string> lemmas;
  std::vector<std::string> hypernyms;
};

// WordNet-style synset DAG. Immutable after construction. All roots hang
// under a virtual super-root so every pair of synsets has a common ancestor.
class TaxonomyStore {
 public:
  // Id returned by lowest_common_ancestor when two synsets share no real
  // ancestor. Its depth is -1 and its subtree is the whole taxonomy.
  static constexpr std::string_view kVirtualRoot = "<virtual-root>";

  TaxonomyStore() = default;

  // Throws ValidationError on duplicate ids, empty lemma sets, dangling
  // hypernym references and cycles (reporting one witness).
  explicit TaxonomyStore(std::vector<Synset> synsets);

  std::size_t size() const { return synsets_.size(); }
  // Ordered by id.
  const std::vector<Synset> &synsets() const { return synsets_; }
  bool contains(std::string_view id) const;
  const Synset &synset(std::string_view id) const;

  // Minimum number of hypernym steps to a root; roots are 0, the virtual
  // root is -1.
  int depth(std::string_view id) const;

  // Synsets whose lemmas contain `token`, ordered by id.
  std::vector<std::string> senses_of(std::string_view token) const;

  // `id` and every synset reachable through hypernym edges.
  std::set<std::string> ancestors(std::string_view id) const;

  // Deepest common ancestor; ties go to the smaller id. Returns kVirtualRoot
  // when the synsets are in disconnected components.
  std::string lowest_common_ancestor(std::string_view a,
                                     std::string_view b) const;

  // Deepest ancestor common to every synset in `ids` (non-empty).
  std::string lowest_common_ancestor(const std::vector<std::string> &ids) const;

  // Lemmas of `root` and of every synset below it.
  std::set<std::string> subtree_lemmas(std::string_view root) const;

  std::set<std::string> all_lemmas() const;

 private:
  std::size_t index_of(std::string_view id) const;
  std::vector<std::size_t> ancestor_indices(std::size_t node) const;
  std::string deepest(const std::vector<std::size_t> &candidates) const;

  std::vector<Synset> synsets_;  // sorted by id
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<int> depth_;
  std::map<std::string, std::vector<std::string>, std::less<>> lemma_index_;
};

TaxonomyStore taxonomy_from_json(const nlohmann::json &doc);
nlohmann::json taxonomy_to_json(const TaxonomyStore &store);
TaxonomyStore load_taxonomy(const std::filesystem::path &path);

}  // namespace ontopop

#endif  // ONTOPOP_TAXONOMY_H_
