#ifndef ONTOPOP_FIXTURE_H_
#define ONTOPOP_FIXTURE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ontopop/corpus.h"
#include "ontopop/embeddings.h"
#include "ontopop/ontology.h"
#include "ontopop/taxonomy.h"

namespace ontopop {

struct FixtureOptions {
  std::size_t classes = 3;
  std::size_t per_class = 50;
  // 0 is perfectly separated, 1 is pure noise in both the embedding and the
  // taxonomy placement.
  double noise = 0.1;
  std::uint64_t seed = 7;
  std::size_t dimension = 200;
  std::size_t seeds_per_class = 4;
  // In-vocabulary words that occur too rarely to become candidates.
  std::size_t filler = 100;
  std::size_t min_count = 5;
};

// A mutually consistent synthetic dataset: class blobs on the unit sphere, a
// seeded ontology, a corpus mentioning every instance at least min_count
// times, a taxonomy placing instances under class synsets, and the planted
// labels as gold standard.
struct Fixture {
  EmbeddingStore embeddings;
  Ontology ontology;
  std::vector<Document> corpus;
  TaxonomyStore taxonomy;
  GoldStandard gold;
  // instance -> planted class
  std::map<std::string, std::string> labels;
};

Fixture generate_fixture(const FixtureOptions &options);

// Writes embeddings.txt, ontology.json, corpus/*.txt, taxonomy.json,
// gold.json and a config.json wired to them (output directory "out").
void write_fixture(const Fixture &fixture, const std::filesystem::path &dir,
                   std::size_t min_count = 5);

}  // namespace ontopop

#endif  // ONTOPOP_FIXTURE_H_
