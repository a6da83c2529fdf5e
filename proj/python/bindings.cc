#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ontopop/clustering.h"
#include "ontopop/corpus.h"
#include "ontopop/embeddings.h"
#include "ontopop/ensemble.h"
#include "ontopop/error.h"
#include "ontopop/evaluation.h"
#include "ontopop/fixture.h"
#include "ontopop/models.h"
#include "ontopop/ontology.h"
#include "ontopop/pipeline.h"
#include "ontopop/taxonomy.h"

namespace py = pybind11;
using namespace py::literals;

namespace {

std::vector<ontopop::ClassVector> to_class_vectors(
    const std::map<std::string, std::vector<double>> &vectors) {
  std::vector<ontopop::ClassVector> out;
  for (const auto &[id, v] : vectors) out.push_back({id, v, ontopop::AggregationMethod::kCentroid});
  return out;
}

py::dict summarize(const ontopop::PipelineResult &result) {
  py::dict populated;
  for (const auto &cls : result.populated.classes()) {
    py::list items;
    for (const auto &p : cls.populated) items.append(p.instance);
    populated[py::str(cls.id)] = items;
  }
  py::dict out("candidates"_a = result.corpus.candidates,
               "weights"_a = result.weights.values,
               "weight_source"_a = result.weight_source,
               "threshold"_a = result.threshold, "populated"_a = populated,
               "warnings"_a = result.diagnostics.warnings());
  if (result.report) {
    py::dict rows;
    for (const auto &[tag, s] : result.report->per_model) {
      rows[py::str(tag)] = py::make_tuple(s.precision, s.recall, s.f1);
    }
    if (result.report->ensemble) {
      const auto &e = *result.report->ensemble;
      rows["ensemble"] = py::make_tuple(e.precision, e.recall, e.f1);
    }
    out["report"] = rows;
  } else {
    out["report"] = py::none();
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_ontopop, m) {
  m.doc() = "Semi-supervised ontology population with word embeddings";

  auto base = py::register_exception<ontopop::Error>(m, "OntopopError");
  py::register_exception<ontopop::ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ontopop::ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ontopop::DegenerateInputError>(m, "DegenerateInputError", base.ptr());
  py::register_exception<ontopop::ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ontopop::IoError>(m, "IoError", base.ptr());

  // Embeddings
  py::class_<ontopop::EmbeddingStore>(m, "EmbeddingStore")
      .def(py::init<std::size_t, std::vector<std::string>, std::vector<double>>(),
           "dimension"_a, "vocabulary"_a, "values"_a)
      .def_property_readonly("dimension", &ontopop::EmbeddingStore::dimension)
      .def_property_readonly("vocabulary", &ontopop::EmbeddingStore::vocabulary)
      .def("__len__", &ontopop::EmbeddingStore::size)
      .def("__contains__", &ontopop::EmbeddingStore::contains)
      .def("vector_of", [](const ontopop::EmbeddingStore &s, const std::string &token)
               -> std::optional<std::vector<double>> {
             auto v = s.vector_of(token);
             if (!v) return std::nullopt;
             return std::vector<double>(v->begin(), v->end());
           });
  m.def("load_text_model", [](const std::filesystem::path &p) { return ontopop::load_text_model(p); });
  m.def("load_binary_model", [](const std::filesystem::path &p) { return ontopop::load_binary_model(p); });
  m.def("load_model", [](const std::filesystem::path &p, const std::string &format) {
    return ontopop::load_model(p, ontopop::parse_embedding_format(format));
  }, "path"_a, "format"_a = "auto");
  m.def("save_text_model", &ontopop::save_text_model);
  m.def("save_binary_model", &ontopop::save_binary_model);
  m.def("cosine", [](const std::vector<double> &a, const std::vector<double> &b) {
    return ontopop::cosine(a, b);
  });

  // Corpus
  m.def("tokenize", &ontopop::tokenize, "text"_a, "lowercase"_a = true);
  m.def("split_sentences", &ontopop::split_sentences);

  // Ontology
  py::class_<ontopop::OntologyClass>(m, "OntologyClass")
      .def_readonly("id", &ontopop::OntologyClass::id)
      .def_readonly("label", &ontopop::OntologyClass::label)
      .def_readonly("parent", &ontopop::OntologyClass::parent)
      .def_readonly("seeds", &ontopop::OntologyClass::seeds);
  py::class_<ontopop::Ontology>(m, "Ontology")
      .def_property_readonly("classes", &ontopop::Ontology::classes)
      .def("class_ids", &ontopop::Ontology::class_ids)
      .def("to_json", [](const ontopop::Ontology &o) { return ontopop::ontology_to_json(o).dump(); });
  m.def("load_ontology", [](const std::filesystem::path &p, bool strict) {
    return ontopop::load_ontology(p, nullptr, strict);
  }, "path"_a, "strict"_a = false);
  m.def("save_population", &ontopop::save_population);

  // Taxonomy
  py::class_<ontopop::TaxonomyStore>(m, "TaxonomyStore")
      .def("__len__", &ontopop::TaxonomyStore::size)
      .def("senses_of", &ontopop::TaxonomyStore::senses_of)
      .def("depth", &ontopop::TaxonomyStore::depth)
      .def("lowest_common_ancestor",
           py::overload_cast<std::string_view, std::string_view>(
               &ontopop::TaxonomyStore::lowest_common_ancestor, py::const_))
      .def("subtree_lemmas", &ontopop::TaxonomyStore::subtree_lemmas);
  m.attr("VIRTUAL_ROOT") = std::string(ontopop::TaxonomyStore::kVirtualRoot);
  m.def("load_taxonomy", &ontopop::load_taxonomy);

  // Models
  m.def("m1_assign", [](const std::vector<double> &instance,
                        const std::map<std::string, std::vector<double>> &class_vectors) {
    const auto r = ontopop::m1_assign(instance, to_class_vectors(class_vectors));
    return py::make_tuple(r.class_id, r.score);
  }, "instance"_a, "class_vectors"_a);
  m.def("exclusion", [](const std::vector<std::pair<std::string, std::vector<double>>> &members) {
    std::vector<ontopop::Member> view;
    for (const auto &[token, v] : members) view.push_back({token, v});
    return ontopop::exclusion(view);
  });
  m.def("kmeans", [](const std::vector<std::vector<double>> &vectors, std::size_t k,
                     std::uint64_t seed, std::size_t max_iters) {
    return ontopop::kmeans(vectors, k, {seed, max_iters});
  }, "vectors"_a, "k"_a, "seed"_a = 42, "max_iters"_a = 300);
  m.def("agglomerative_cut", &ontopop::agglomerative_cut, "vectors"_a, "k"_a);
  m.def("resolve_clusters", [](const std::vector<std::vector<std::size_t>> &votes,
                               const std::vector<std::vector<double>> &affinity,
                               const std::vector<std::string> &class_ids) {
    return ontopop::resolve_clusters(votes, affinity, class_ids).cluster_to_class;
  });

  // Ensemble and evaluation
  m.def("compute_weights", [](const std::vector<double> &f1s) {
    return ontopop::compute_weights(f1s).values;
  });
  m.def("ensemble_score", [](const std::vector<double> &weights,
                             const std::vector<std::vector<int>> &matrix) {
    ontopop::MembershipMatrix mm(matrix.size(), matrix.empty() ? 0 : matrix[0].size());
    for (std::size_t i = 0; i < matrix.size(); ++i) {
      if (matrix[i].size() != mm.classes()) throw std::invalid_argument("ragged matrix");
      for (std::size_t j = 0; j < mm.classes(); ++j) mm.set(i, j, matrix[i][j] != 0);
    }
    return ontopop::score({weights}, mm);
  });
  m.def("assign", [](const std::vector<double> &scores, const std::vector<std::string> &classes,
                     double threshold) { return ontopop::assign(scores, classes, threshold); },
        "scores"_a, "classes"_a, "threshold"_a = 0.0);
  m.def("f1", &ontopop::f1, "precision"_a, "recall"_a);
  m.def("class_precision_recall", [](const std::set<std::string> &model,
                                     const std::set<std::string> &gold) {
    const auto pr = ontopop::class_precision_recall(model, gold);
    return py::make_tuple(pr.precision, pr.recall);
  });
  m.def("split_corpus", [](const std::vector<std::string> &candidates,
                           std::array<double, 3> ratios, std::uint64_t seed) {
    const auto s = ontopop::split_corpus(candidates, ratios, seed);
    return py::make_tuple(s.train, s.validation, s.test);
  }, "candidates"_a, "ratios"_a = std::array<double, 3>{0.7, 0.2, 0.1}, "seed"_a = 42);

  // Pipeline
  m.def("gen_fixture", [](const std::filesystem::path &out, std::size_t classes,
                          std::size_t per_class, double noise, std::uint64_t seed,
                          std::size_t dim, std::size_t filler) {
    ontopop::FixtureOptions o;
    o.classes = classes;
    o.per_class = per_class;
    o.noise = noise;
    o.seed = seed;
    o.dimension = dim;
    o.filler = filler;
    ontopop::write_fixture(ontopop::generate_fixture(o), out, o.min_count);
  }, "out"_a, "classes"_a = 3, "per_class"_a = 50, "noise"_a = 0.1, "seed"_a = 7,
     "dim"_a = 200, "filler"_a = 100);
  m.def("populate", [](const std::filesystem::path &config_path, bool write) {
    const auto config = ontopop::load_config(config_path);
    const auto result = ontopop::run_pipeline(config);
    if (write) ontopop::write_outputs(result, config);
    return summarize(result);
  }, "config"_a, "write"_a = true,
     "Run the full pipeline from a JSON config and return a summary dict.");
}
