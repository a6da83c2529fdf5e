#include "ontopop/fixture.h"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <set>

#include "ontopop/error.h"
#include "ontopop/pipeline.h"
#include "ontopop/rng.h"

namespace ontopop {

namespace {

constexpr std::string_view kConsonants = "bdfgklmnprstvz";
constexpr std::string_view kVowels = "aeiou";
constexpr std::array<std::string_view, 10> kFunctionWords = {
    "of", "and", "in", "the", "that", "by", "with", "for", "under", "against"};

class WordMaker {
 public:
  explicit WordMaker(Rng &rng) : rng_(rng) {
    for (auto w : kFunctionWords) used_.insert(std::string(w));
    for (auto w : {"court", "held", "case", "was", "entity"}) used_.insert(w);
  }

  std::string next() {
    while (true) {
      std::string word;
      const std::size_t syllables = 2 + rng_.below(3);
      for (std::size_t s = 0; s < syllables; ++s) {
        word.push_back(kConsonants[rng_.below(kConsonants.size())]);
        word.push_back(kVowels[rng_.below(kVowels.size())]);
      }
      if (rng_.below(2) == 0) word.push_back(kConsonants[rng_.below(kConsonants.size())]);
      if (used_.insert(word).second) return word;
    }
  }

 private:
  Rng &rng_;
  std::set<std::string> used_;
};

Vector random_direction(std::size_t dim, Rng &rng) {
  Vector v(dim);
  do {
    for (double &x : v) x = rng.normal();
  } while (norm(v) == 0.0);
  return normalized(v);
}

// Unit vector at mixing level `noise` between `center` and Gaussian noise.
Vector blob_point(const Vector &center, double noise, Rng &rng) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(center.size()));
  Vector v(center.size());
  do {
    for (std::size_t d = 0; d < v.size(); ++d) {
      v[d] = (1.0 - noise) * center[d] + noise * scale * rng.normal();
    }
  } while (norm(v) == 0.0);
  return normalized(v);
}

std::string capitalize(std::string word) {
  if (!word.empty() && word[0] >= 'a' && word[0] <= 'z') word[0] = static_cast<char>(word[0] - 'a' + 'A');
  return word;
}

void write_text(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

}  // namespace

Fixture generate_fixture(const FixtureOptions &options) {
  if (options.classes < 2) throw ConfigError("a fixture needs at least 2 classes");
  if (options.seeds_per_class < 2) throw ConfigError("a fixture needs at least 2 seeds per class");
  if (!(options.noise >= 0.0 && options.noise <= 1.0)) {
    throw ConfigError("fixture noise must lie in [0, 1]");
  }
  if (options.min_count < 2) throw ConfigError("fixture min_count must be >= 2");
  Rng rng(options.seed);
  WordMaker words(rng);
  const std::size_t dim = options.dimension;
  const std::size_t k = options.classes;
  const int width = k < 10 ? 1 : k < 100 ? 2 : 3;

  Fixture fx;
  std::vector<std::string> vocabulary;
  std::vector<double> values;
  auto add_vector = [&](const std::string &token, const Vector &v) {
    vocabulary.push_back(token);
    values.insert(values.end(), v.begin(), v.end());
  };

  std::vector<Synset> synsets;
  synsets.push_back({"entity.n.01", {"entity"}, {}});
  std::vector<std::string> class_synsets;
  std::vector<OntologyClass> classes;
  std::vector<std::string> mentioned;  // seeds and instances

  for (std::size_t c = 0; c < k; ++c) {
    char id[32];
    std::snprintf(id, sizeof id, "class-%0*zu", width, c + 1);
    const std::string class_word = words.next();
    class_synsets.push_back(class_word + ".n.01");
    synsets.push_back({class_synsets.back(), {class_word}, {"entity.n.01"}});
    classes.push_back({id, capitalize(class_word), std::nullopt, {}, {}});
  }

  for (std::size_t c = 0; c < k; ++c) {
    const Vector center = random_direction(dim, rng);
    for (std::size_t s = 0; s < options.seeds_per_class; ++s) {
      const std::string seed = words.next();
      add_vector(seed, blob_point(center, options.noise, rng));
      classes[c].seeds.push_back(seed);
      mentioned.push_back(seed);
      synsets.push_back({seed + ".n.01", {seed}, {class_synsets[c]}});
      if (rng.uniform() < options.noise) {
        const std::size_t other = (c + 1 + rng.below(k - 1)) % k;
        synsets.push_back({seed + ".n.02", {seed}, {class_synsets[other]}});
      }
    }
    for (std::size_t i = 0; i < options.per_class; ++i) {
      const std::string word = words.next();
      add_vector(word, blob_point(center, options.noise, rng));
      fx.gold[classes[c].id].insert(word);
      fx.labels[word] = classes[c].id;
      mentioned.push_back(word);
      const std::size_t placed = rng.uniform() < options.noise ? rng.below(k) : c;
      synsets.push_back({word + ".n.01", {word}, {class_synsets[placed]}});
    }
  }

  std::vector<std::string> filler;
  for (std::size_t f = 0; f < options.filler; ++f) {
    filler.push_back(words.next());
    add_vector(filler.back(), random_direction(dim, rng));
  }

  // Corpus: every seed and instance at least min_count times, filler below.
  std::vector<std::string> stream;
  for (const auto &w : mentioned) {
    const std::size_t n = options.min_count + rng.below(options.min_count + 1);
    stream.insert(stream.end(), n, w);
  }
  for (const auto &w : filler) {
    const std::size_t n = 1 + rng.below(options.min_count - 1);
    stream.insert(stream.end(), n, w);
  }
  rng.shuffle(stream);

  std::size_t pos = 0;
  std::size_t doc_no = 0;
  while (pos < stream.size()) {
    std::string text;
    for (int sentence = 0; sentence < 20 && pos < stream.size(); ++sentence) {
      std::string line = "The court held that";
      const std::size_t n = std::min<std::size_t>(4 + rng.below(5), stream.size() - pos);
      for (std::size_t t = 0; t < n; ++t) {
        line += ' ';
        line += kFunctionWords[rng.below(kFunctionWords.size())];
        line += ' ';
        line += stream[pos++];
      }
      line += rng.below(4) == 0 ? "!" : ".";
      if (!text.empty()) text += ' ';
      text += line;
    }
    char id[32];
    std::snprintf(id, sizeof id, "doc-%04zu.txt", doc_no++);
    fx.corpus.push_back({id, text + "\n"});
  }

  fx.embeddings = EmbeddingStore(dim, std::move(vocabulary), std::move(values));
  fx.ontology = Ontology(std::move(classes));
  fx.taxonomy = TaxonomyStore(std::move(synsets));
  return fx;
}

void write_fixture(const Fixture &fixture, const std::filesystem::path &dir,
                   std::size_t min_count) {
  std::filesystem::create_directories(dir / "corpus");
  save_text_model(fixture.embeddings, dir / "embeddings.txt");
  save_population(fixture.ontology, dir / "ontology.json");
  for (const auto &doc : fixture.corpus) write_text(dir / "corpus" / doc.id, doc.text);
  write_text(dir / "taxonomy.json", taxonomy_to_json(fixture.taxonomy).dump(2) + "\n");
  write_text(dir / "gold.json", gold_to_json(fixture.gold).dump(2) + "\n");

  RunConfig config;
  config.embedding = "embeddings.txt";
  config.embedding_format = EmbeddingFormat::kText;
  config.ontology = "ontology.json";
  config.corpus = "corpus";
  config.taxonomy = "taxonomy.json";
  config.gold = "gold.json";
  config.output = "out";
  config.min_count = min_count;
  write_text(dir / "config.json", config_to_json(config).dump(2) + "\n");
}

}  // namespace ontopop
