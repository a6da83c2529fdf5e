#include "ontopop/ontology.h"

#include <algorithm>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "ontopop/error.h"

namespace ontopop {

using nlohmann::json;

bool OntologyClass::has_seed(std::string_view token) const {
  return std::find(seeds.begin(), seeds.end(), token) != seeds.end();
}

Ontology::Ontology(std::vector<OntologyClass> classes, Diagnostics *diag,
                   bool strict)
    : classes_(std::move(classes)) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    auto &cls = classes_[i];
    if (cls.id.empty()) throw ValidationError("class with empty id");
    if (!index.emplace(cls.id, i).second) {
      throw ValidationError("duplicate class id '" + cls.id + "'");
    }
    std::vector<std::string> unique;
    for (auto &seed : cls.seeds) {
      if (std::find(unique.begin(), unique.end(), seed) == unique.end()) {
        unique.push_back(std::move(seed));
      }
    }
    cls.seeds = std::move(unique);
    if (cls.seeds.empty()) {
      if (strict) throw ValidationError("class '" + cls.id + "' has no seeds");
      warn(diag, "class '" + cls.id + "' has no seeds");
    }
    for (const auto &entry : cls.populated) {
      if (cls.has_seed(entry.instance)) {
        throw ValidationError("class '" + cls.id + "' lists seed '" +
                              entry.instance + "' as a populated instance");
      }
    }
  }

  for (const auto &cls : classes_) {
    if (cls.parent && !index.count(*cls.parent)) {
      throw ValidationError("class '" + cls.id + "' has unknown parent '" +
                            *cls.parent + "'");
    }
  }

  // Parent links: walk each chain, tracking the path to name a cycle.
  std::vector<int> state(classes_.size(), 0);  // 0 new, 1 on path, 2 done
  for (std::size_t start = 0; start < classes_.size(); ++start) {
    std::vector<std::size_t> path;
    std::size_t cur = start;
    while (state[cur] == 0) {
      state[cur] = 1;
      path.push_back(cur);
      if (!classes_[cur].parent) break;
      cur = index.at(*classes_[cur].parent);
    }
    if (state[cur] == 1 && classes_[cur].parent) {
      auto it = std::find(path.begin(), path.end(), cur);
      std::string cycle;
      for (; it != path.end(); ++it) cycle += classes_[*it].id + " -> ";
      throw ValidationError("cycle in parent links: " + cycle +
                            classes_[cur].id);
    }
    for (std::size_t node : path) state[node] = 2;
  }

  std::unordered_map<std::string, std::string> owner;
  for (const auto &cls : classes_) {
    for (const auto &seed : cls.seeds) {
      auto [it, inserted] = owner.emplace(seed, cls.id);
      if (!inserted) {
        warn(diag, "seed '" + seed + "' appears in classes '" + it->second +
                       "' and '" + cls.id + "'");
      }
    }
  }
}

const OntologyClass *Ontology::find(std::string_view id) const {
  for (const auto &cls : classes_) {
    if (cls.id == id) return &cls;
  }
  return nullptr;
}

std::vector<std::string> Ontology::class_ids() const {
  std::vector<std::string> ids;
  ids.reserve(classes_.size());
  for (const auto &cls : classes_) ids.push_back(cls.id);
  return ids;
}

std::set<std::string> Ontology::all_seeds() const {
  std::set<std::string> seeds;
  for (const auto &cls : classes_) seeds.insert(cls.seeds.begin(), cls.seeds.end());
  return seeds;
}

void Ontology::add_populated(std::string_view class_id,
                             PopulatedInstance entry) {
  auto it = std::find_if(classes_.begin(), classes_.end(),
                         [&](const OntologyClass &c) { return c.id == class_id; });
  if (it == classes_.end()) {
    throw ValidationError("unknown class '" + std::string(class_id) + "'");
  }
  if (it->has_seed(entry.instance)) {
    throw ValidationError("'" + entry.instance + "' is already a seed of '" +
                          it->id + "'");
  }
  for (auto &existing : it->populated) {
    if (existing.instance == entry.instance) {
      existing = std::move(entry);
      return;
    }
  }
  it->populated.push_back(std::move(entry));
}

void Ontology::clear_populated() {
  for (auto &cls : classes_) cls.populated.clear();
}

Ontology ontology_from_json(const json &doc, Diagnostics *diag, bool strict) {
  if (!doc.is_object() || !doc.contains("classes") ||
      !doc.at("classes").is_array()) {
    throw ParseError("ontology document must be an object with a 'classes' array");
  }
  std::vector<OntologyClass> classes;
  try {
    for (const auto &item : doc.at("classes")) {
      OntologyClass cls;
      cls.id = item.at("id").get<std::string>();
      cls.label = item.value("label", cls.id);
      if (item.contains("parent") && !item.at("parent").is_null()) {
        cls.parent = item.at("parent").get<std::string>();
      }
      if (item.contains("seeds")) {
        cls.seeds = item.at("seeds").get<std::vector<std::string>>();
      }
      if (item.contains("populated")) {
        for (const auto &p : item.at("populated")) {
          PopulatedInstance entry;
          entry.instance = p.at("instance").get<std::string>();
          entry.models = p.value("models", std::vector<std::string>{});
          entry.score = p.value("score", 0.0);
          cls.populated.push_back(std::move(entry));
        }
      }
      classes.push_back(std::move(cls));
    }
  } catch (const json::exception &e) {
    throw ParseError(std::string("invalid ontology document: ") + e.what());
  }
  return Ontology(std::move(classes), diag, strict);
}

json ontology_to_json(const Ontology &ontology) {
  json classes = json::array();
  for (const auto &cls : ontology.classes()) {
    json populated = json::array();
    for (const auto &entry : cls.populated) {
      populated.push_back({{"instance", entry.instance},
                           {"models", entry.models},
                           {"score", entry.score}});
    }
    classes.push_back({{"id", cls.id},
                       {"label", cls.label},
                       {"parent", cls.parent ? json(*cls.parent) : json(nullptr)},
                       {"seeds", cls.seeds},
                       {"populated", std::move(populated)}});
  }
  return {{"classes", std::move(classes)}};
}

namespace {

json read_json(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace

Ontology load_ontology(const std::filesystem::path &path, Diagnostics *diag,
                       bool strict) {
  return ontology_from_json(read_json(path), diag, strict);
}

void save_population(const Ontology &ontology,
                     const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << ontology_to_json(ontology).dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

GoldStandard gold_from_json(const json &doc) {
  if (!doc.is_object() || !doc.contains("classes") ||
      !doc.at("classes").is_object()) {
    throw ParseError("gold standard must be an object with a 'classes' map");
  }
  GoldStandard gold;
  try {
    for (const auto &[id, words] : doc.at("classes").items()) {
      auto list = words.get<std::vector<std::string>>();
      gold[id] = std::set<std::string>(list.begin(), list.end());
    }
  } catch (const json::exception &e) {
    throw ParseError(std::string("invalid gold standard: ") + e.what());
  }
  return gold;
}

json gold_to_json(const GoldStandard &gold) {
  json classes = json::object();
  for (const auto &[id, words] : gold) {
    classes[id] = std::vector<std::string>(words.begin(), words.end());
  }
  return {{"classes", std::move(classes)}};
}

GoldStandard load_gold(const std::filesystem::path &path) {
  return gold_from_json(read_json(path));
}

AggregationMethod parse_aggregation_method(std::string_view name) {
  if (name == "centroid") return AggregationMethod::kCentroid;
  if (name == "median") return AggregationMethod::kMedian;
  throw ConfigError("unknown class-vector method '" + std::string(name) +
                    "' (expected centroid or median)");
}

std::string_view to_string(AggregationMethod method) {
  return method == AggregationMethod::kMedian ? "median" : "centroid";
}

ClassVector derive_class_vector(const OntologyClass &cls,
                                const EmbeddingStore &store,
                                AggregationMethod method, Diagnostics *diag) {
  std::vector<VectorView> rows;
  for (const auto &seed : cls.seeds) {
    if (auto v = store.vector_of(seed)) {
      rows.push_back(*v);
    } else {
      warn(diag, "class '" + cls.id + "': seed '" + seed +
                     "' is out of vocabulary");
    }
  }
  if (rows.empty()) {
    throw DegenerateInputError("class '" + cls.id +
                               "': no seed is in the embedding vocabulary");
  }

  const std::size_t dim = store.dimension();
  Vector out(dim, 0.0);
  if (method == AggregationMethod::kCentroid) {
    for (const auto &row : rows) {
      for (std::size_t d = 0; d < dim; ++d) out[d] += row[d];
    }
    for (double &x : out) x /= static_cast<double>(rows.size());
  } else {
    std::vector<double> column(rows.size());
    const std::size_t mid = rows.size() / 2;
    for (std::size_t d = 0; d < dim; ++d) {
      for (std::size_t r = 0; r < rows.size(); ++r) column[r] = rows[r][d];
      std::nth_element(column.begin(), column.begin() + mid, column.end());
      double median = column[mid];
      if (rows.size() % 2 == 0) {
        const double lower =
            *std::max_element(column.begin(), column.begin() + mid);
        median = (lower + median) / 2.0;
      }
      out[d] = median;
    }
  }
  if (norm(out) == 0.0) {
    throw DegenerateInputError("class '" + cls.id +
                               "': representative vector is zero");
  }
  return ClassVector{cls.id, std::move(out), method};
}

std::vector<ClassVector> derive_class_vectors(const Ontology &ontology,
                                              const EmbeddingStore &store,
                                              AggregationMethod method,
                                              Diagnostics *diag) {
  std::vector<ClassVector> out;
  for (const auto &cls : ontology.classes()) {
    try {
      out.push_back(derive_class_vector(cls, store, method, diag));
    } catch (const DegenerateInputError &e) {
      warn(diag, e.what());
    }
  }
  return out;
}

}  // namespace ontopop
