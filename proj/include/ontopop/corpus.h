#ifndef ONTOPOP_CORPUS_H_
#define ONTOPOP_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ontopop/diagnostics.h"
#include "ontopop/embeddings.h"
#include "ontopop/ontology.h"

namespace ontopop {

// Tokens are maximal runs of letters and digits, with hyphens and
// apostrophes kept only between two such characters. Bytes >= 0x80 count as
// letters so UTF-8 words stay whole; only ASCII is case-folded.
std::vector<std::string> tokenize(std::string_view text, bool lowercase = true);

// Splits after '.', '!' or '?' when followed by whitespace and an uppercase
// letter. A '.' after a single letter or a known abbreviation does not end a
// sentence. Returned sentences are whitespace-trimmed.
std::vector<std::string> split_sentences(std::string_view text);

struct Document {
  std::string id;
  std::string text;
};

// Reads every *.txt file in `dir`, ordered by file name.
std::vector<Document> read_corpus_dir(const std::filesystem::path &dir);

struct CorpusOptions {
  std::size_t min_count = 5;
  bool lowercase = true;
  // 0 picks the hardware concurrency.
  unsigned threads = 0;
};

struct InstanceCorpus {
  std::vector<std::string> documents;
  std::map<std::string, std::size_t> frequencies;
  // Descending frequency, then lexicographic.
  std::vector<std::string> candidates;
};

// Candidate instances: in-vocabulary tokens with frequency >= min_count that
// are not a seed of any class.
InstanceCorpus extract_candidates(const std::vector<Document> &documents,
                                  const EmbeddingStore &store,
                                  const Ontology &ontology,
                                  const CorpusOptions &options,
                                  Diagnostics *diag = nullptr);

}  // namespace ontopop

#endif  // ONTOPOP_CORPUS_H_
