#include "ontopop/taxonomy.h"

#include <algorithm>
#include <deque>
#include <fstream>
#include <limits>

#include "ontopop/error.h"

namespace ontopop {

using nlohmann::json;

TaxonomyStore::TaxonomyStore(std::vector<Synset> synsets)
    : synsets_(std::move(synsets)) {
  std::sort(synsets_.begin(), synsets_.end(),
            [](const Synset &a, const Synset &b) { return a.id < b.id; });
  for (std::size_t i = 0; i < synsets_.size(); ++i) {
    auto &s = synsets_[i];
    if (s.id.empty() || s.id == kVirtualRoot) {
      throw ValidationError("invalid synset id '" + s.id + "'");
    }
    if (i > 0 && synsets_[i - 1].id == s.id) {
      throw ValidationError("duplicate synset id '" + s.id + "'");
    }
    std::sort(s.lemmas.begin(), s.lemmas.end());
    s.lemmas.erase(std::unique(s.lemmas.begin(), s.lemmas.end()), s.lemmas.end());
    if (s.lemmas.empty()) {
      throw ValidationError("synset '" + s.id + "' has no lemmas");
    }
    std::sort(s.hypernyms.begin(), s.hypernyms.end());
    s.hypernyms.erase(std::unique(s.hypernyms.begin(), s.hypernyms.end()),
                      s.hypernyms.end());
  }

  const std::size_t n = synsets_.size();
  parents_.assign(n, {});
  children_.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto &h : synsets_[i].hypernyms) {
      auto it = std::lower_bound(
          synsets_.begin(), synsets_.end(), h,
          [](const Synset &s, const std::string &id) { return s.id < id; });
      if (it == synsets_.end() || it->id != h) {
        throw ValidationError("synset '" + synsets_[i].id +
                              "' references missing hypernym '" + h + "'");
      }
      const auto p = static_cast<std::size_t>(it - synsets_.begin());
      parents_[i].push_back(p);
      children_[p].push_back(i);
    }
    for (const auto &lemma : synsets_[i].lemmas) {
      lemma_index_[lemma].push_back(synsets_[i].id);
    }
  }

  // Cycle check: iterative DFS over hypernym edges.
  std::vector<int> color(n, 0);
  std::vector<std::size_t> via(n, n);
  for (std::size_t start = 0; start < n; ++start) {
    if (color[start] != 0) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{start, 0}};
    color[start] = 1;
    while (!stack.empty()) {
      auto &[node, next] = stack.back();
      if (next == parents_[node].size()) {
        color[node] = 2;
        stack.pop_back();
        continue;
      }
      const std::size_t p = parents_[node][next++];
      if (color[p] == 1) {
        std::string witness = synsets_[p].id;
        for (std::size_t cur = node; cur != p; cur = via[cur]) {
          witness = synsets_[cur].id + " -> " + witness;
        }
        throw ValidationError("cycle in hypernym edges: " + synsets_[p].id +
                              " -> " + witness);
      }
      if (color[p] == 0) {
        color[p] = 1;
        via[p] = node;
        stack.emplace_back(p, 0);
      }
    }
  }

  // Depth: multi-source BFS downward from every root.
  depth_.assign(n, -1);
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < n; ++i) {
    if (parents_[i].empty()) {
      depth_[i] = 0;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    const std::size_t node = queue.front();
    queue.pop_front();
    for (std::size_t child : children_[node]) {
      if (depth_[child] < 0) {
        depth_[child] = depth_[node] + 1;
        queue.push_back(child);
      }
    }
  }
}

std::size_t TaxonomyStore::index_of(std::string_view id) const {
  auto it = std::lower_bound(
      synsets_.begin(), synsets_.end(), id,
      [](const Synset &s, std::string_view key) { return s.id < key; });
  if (it == synsets_.end() || it->id != id) {
    throw std::out_of_range("unknown synset '" + std::string(id) + "'");
  }
  return static_cast<std::size_t>(it - synsets_.begin());
}

bool TaxonomyStore::contains(std::string_view id) const {
  auto it = std::lower_bound(
      synsets_.begin(), synsets_.end(), id,
      [](const Synset &s, std::string_view key) { return s.id < key; });
  return it != synsets_.end() && it->id == id;
}

const Synset &TaxonomyStore::synset(std::string_view id) const {
  return synsets_[index_of(id)];
}

int TaxonomyStore::depth(std::string_view id) const {
  if (id == kVirtualRoot) return -1;
  return depth_[index_of(id)];
}

std::vector<std::string> TaxonomyStore::senses_of(std::string_view token) const {
  auto it = lemma_index_.find(token);
  if (it == lemma_index_.end()) return {};
  return it->second;
}

std::vector<std::size_t> TaxonomyStore::ancestor_indices(std::size_t node) const {
  std::vector<char> seen(synsets_.size(), 0);
  std::vector<std::size_t> out;
  std::vector<std::size_t> stack{node};
  seen[node] = 1;
  while (!stack.empty()) {
    const std::size_t cur = stack.back();
    stack.pop_back();
    out.push_back(cur);
    for (std::size_t p : parents_[cur]) {
      if (!seen[p]) {
        seen[p] = 1;
        stack.push_back(p);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::set<std::string> TaxonomyStore::ancestors(std::string_view id) const {
  std::set<std::string> out;
  for (std::size_t i : ancestor_indices(index_of(id))) out.insert(synsets_[i].id);
  return out;
}

std::string TaxonomyStore::deepest(const std::vector<std::size_t> &candidates) const {
  if (candidates.empty()) return std::string(kVirtualRoot);
  // Candidates are sorted by index, i.e. by id, so the first maximum wins ties.
  std::size_t best = candidates.front();
  for (std::size_t c : candidates) {
    if (depth_[c] > depth_[best]) best = c;
  }
  return synsets_[best].id;
}

std::string TaxonomyStore::lowest_common_ancestor(std::string_view a,
                                                  std::string_view b) const {
  return lowest_common_ancestor(std::vector<std::string>{std::string(a),
                                                         std::string(b)});
}

std::string TaxonomyStore::lowest_common_ancestor(
    const std::vector<std::string> &ids) const {
  if (ids.empty()) throw std::invalid_argument("LCA of an empty synset list");
  for (const auto &id : ids) {
    if (id == kVirtualRoot) return std::string(kVirtualRoot);
  }
  auto common = ancestor_indices(index_of(ids.front()));
  for (std::size_t k = 1; k < ids.size() && !common.empty(); ++k) {
    const auto other = ancestor_indices(index_of(ids[k]));
    std::vector<std::size_t> both;
    std::set_intersection(common.begin(), common.end(), other.begin(),
                          other.end(), std::back_inserter(both));
    common = std::move(both);
  }
  return deepest(common);
}

std::set<std::string> TaxonomyStore::subtree_lemmas(std::string_view root) const {
  if (root == kVirtualRoot) return all_lemmas();
  std::set<std::string> out;
  std::vector<char> seen(synsets_.size(), 0);
  std::vector<std::size_t> stack{index_of(root)};
  seen[stack.back()] = 1;
  while (!stack.empty()) {
    const std::size_t cur = stack.back();
    stack.pop_back();
    out.insert(synsets_[cur].lemmas.begin(), synsets_[cur].lemmas.end());
    for (std::size_t c : children_[cur]) {
      if (!seen[c]) {
        seen[c] = 1;
        stack.push_back(c);
      }
    }
  }
  return out;
}

std::set<std::string> TaxonomyStore::all_lemmas() const {
  std::set<std::string> out;
  for (const auto &[lemma, ids] : lemma_index_) out.insert(lemma);
  return out;
}

TaxonomyStore taxonomy_from_json(const json &doc) {
  if (!doc.is_object() || !doc.contains("synsets") ||
      !doc.at("synsets").is_array()) {
    throw ParseError("taxonomy document must be an object with a 'synsets' array");
  }
  std::vector<Synset> synsets;
  try {
    for (const auto &item : doc.at("synsets")) {
      Synset s;
      s.id = item.at("id").get<std::string>();
      s.lemmas = item.at("lemmas").get<std::vector<std::string>>();
      s.hypernyms = item.value("hypernyms", std::vector<std::string>{});
      synsets.push_back(std::move(s));
    }
  } catch (const json::exception &e) {
    throw ParseError(std::string("invalid taxonomy document: ") + e.what());
  }
  return TaxonomyStore(std::move(synsets));
}

json taxonomy_to_json(const TaxonomyStore &store) {
  json synsets = json::array();
  for (const auto &s : store.synsets()) {
    synsets.push_back({{"id", s.id}, {"lemmas", s.lemmas}, {"hypernyms", s.hypernyms}});
  }
  return {{"synsets", std::move(synsets)}};
}

TaxonomyStore load_taxonomy(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return taxonomy_from_json(json::parse(in));
  } catch (const json::parse_error &e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace ontopop
