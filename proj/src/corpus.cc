#include "ontopop/corpus.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include "ontopop/error.h"

namespace ontopop {

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c >= 0x80;
}

bool is_joiner(char c) { return c == '-' || c == '\''; }

bool is_blank(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

constexpr std::array<std::string_view, 8> kAbbreviations = {
    "v", "no", "inc", "co", "mr", "mrs", "dr", "st"};

bool is_abbreviation(std::string_view word) {
  if (word.size() == 1) return true;
  std::string lower(word);
  for (char &c : lower) c = ascii_lower(c);
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), lower) !=
         kAbbreviations.end();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_blank(s.back())) s.remove_suffix(1);
  return s;
}

using Counts = std::map<std::string, std::size_t>;

Counts count_tokens(const Document &doc, bool lowercase) {
  Counts counts;
  for (const auto &sentence : split_sentences(doc.text)) {
    for (auto &token : tokenize(sentence, lowercase)) ++counts[std::move(token)];
  }
  return counts;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, bool lowercase) {
  std::vector<std::string> tokens;
  std::string current;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (is_word_byte(static_cast<unsigned char>(c))) {
      current.push_back(lowercase ? ascii_lower(c) : c);
    } else if (is_joiner(c) && !current.empty() && i + 1 < text.size() &&
               is_word_byte(static_cast<unsigned char>(text[i + 1]))) {
      current.push_back(c);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    if (i + 1 >= text.size() || !is_blank(text[i + 1])) continue;
    std::size_t next = i + 1;
    while (next < text.size() && is_blank(text[next])) ++next;
    if (next >= text.size() || !(text[next] >= 'A' && text[next] <= 'Z')) {
      continue;
    }
    if (c == '.') {
      std::size_t word_start = i;
      while (word_start > start &&
             is_word_byte(static_cast<unsigned char>(text[word_start - 1]))) {
        --word_start;
      }
      if (word_start < i && is_abbreviation(text.substr(word_start, i - word_start))) {
        continue;
      }
    }
    auto sentence = trim(text.substr(start, i + 1 - start));
    if (!sentence.empty()) sentences.emplace_back(sentence);
    start = next;
    i = next - 1;
  }
  auto tail = trim(text.substr(std::min(start, text.size())));
  if (!tail.empty()) sentences.emplace_back(tail);
  return sentences;
}

std::vector<Document> read_corpus_dir(const std::filesystem::path &dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw IoError("corpus directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto &entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<Document> docs;
  docs.reserve(files.size());
  for (const auto &file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot open " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    docs.push_back({file.filename().string(), buf.str()});
  }
  return docs;
}

InstanceCorpus extract_candidates(const std::vector<Document> &documents,
                                  const EmbeddingStore &store,
                                  const Ontology &ontology,
                                  const CorpusOptions &options,
                                  Diagnostics *diag) {
  if (options.min_count < 1) throw ConfigError("min_count must be >= 1");
  InstanceCorpus corpus;
  for (const auto &doc : documents) corpus.documents.push_back(doc.id);
  if (documents.empty()) {
    warn(diag, "empty corpus: no candidate instances");
    return corpus;
  }

  // Per-document counting runs in parallel over contiguous chunks; the merge
  // is a single ordered reduction.
  unsigned threads = options.threads != 0 ? options.threads
                                          : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1,
                                 static_cast<unsigned>(documents.size()));
  const std::size_t chunk = (documents.size() + threads - 1) / threads;
  std::vector<std::future<Counts>> parts;
  for (std::size_t begin = 0; begin < documents.size(); begin += chunk) {
    const std::size_t end = std::min(documents.size(), begin + chunk);
    parts.push_back(std::async(std::launch::async, [&, begin, end] {
      Counts counts;
      for (std::size_t d = begin; d < end; ++d) {
        for (auto &[token, n] : count_tokens(documents[d], options.lowercase)) {
          counts[token] += n;
        }
      }
      return counts;
    }));
  }
  for (auto &part : parts) {
    for (auto &[token, n] : part.get()) corpus.frequencies[token] += n;
  }

  const auto seeds = ontology.all_seeds();
  for (const auto &[token, n] : corpus.frequencies) {
    if (n >= options.min_count && store.contains(token) && !seeds.count(token)) {
      corpus.candidates.push_back(token);
    }
  }
  std::stable_sort(corpus.candidates.begin(), corpus.candidates.end(),
                   [&](const std::string &a, const std::string &b) {
                     return corpus.frequencies.at(a) > corpus.frequencies.at(b);
                   });
  if (corpus.candidates.empty()) {
    warn(diag, "no candidate instances passed the vocabulary and min_count filters");
  }
  return corpus;
}

}  // namespace ontopop
