#ifndef ONTOPOP_EMBEDDINGS_H_
#define ONTOPOP_EMBEDDINGS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ontopop/diagnostics.h"

namespace ontopop {

using Vector = std::vector<double>;
using VectorView = std::span<const double>;

// Immutable token -> dense vector table. Values are held in double precision
// regardless of the on-disk representation. Lookup is exact and
// case-sensitive.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;

  // `values` is row-major, vocabulary.size() * dimension entries. Throws
  // ValidationError on empty or duplicate tokens and on a size mismatch.
  EmbeddingStore(std::size_t dimension, std::vector<std::string> vocabulary,
                 std::vector<double> values);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return vocabulary_.size(); }
  const std::vector<std::string> &vocabulary() const { return vocabulary_; }

  // The stored row, or nullopt for an out-of-vocabulary token.
  std::optional<VectorView> vector_of(std::string_view token) const;
  bool contains(std::string_view token) const;

  VectorView row(std::size_t index) const {
    return {values_.data() + index * dimension_, dimension_};
  }

 private:
  std::size_t dimension_ = 0;
  std::vector<std::string> vocabulary_;
  std::vector<double> values_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class EmbeddingFormat { kText, kBinary, kAuto };

EmbeddingFormat parse_embedding_format(std::string_view name);

// word2vec text format: "<count> <dim>" header, then one "token v1 .. vdim"
// line per entry. Zero vectors are dropped with a warning.
EmbeddingStore parse_text_model(std::istream &in, Diagnostics *diag = nullptr);
EmbeddingStore load_text_model(const std::filesystem::path &path,
                               Diagnostics *diag = nullptr);

// word2vec binary format: ASCII header line, then per entry the token, a
// single space and `dim` little-endian float32 values, optionally followed by
// a newline.
EmbeddingStore parse_binary_model(std::istream &in,
                                  Diagnostics *diag = nullptr);
EmbeddingStore load_binary_model(const std::filesystem::path &path,
                                 Diagnostics *diag = nullptr);

// Guesses the format by parsing the header and checking whether the bytes
// after the first token look like decimal text.
EmbeddingFormat sniff_format(const std::filesystem::path &path);

EmbeddingStore load_model(const std::filesystem::path &path,
                          EmbeddingFormat format = EmbeddingFormat::kAuto,
                          Diagnostics *diag = nullptr);

void write_text_model(const EmbeddingStore &store, std::ostream &out);
void save_text_model(const EmbeddingStore &store,
                     const std::filesystem::path &path);
void write_binary_model(const EmbeddingStore &store, std::ostream &out);
void save_binary_model(const EmbeddingStore &store,
                       const std::filesystem::path &path);

double dot(VectorView a, VectorView b);
double norm(VectorView a);
Vector normalized(VectorView a);

// Cosine similarity. Throws std::invalid_argument on a length mismatch and
// DegenerateInputError when either vector is all-zero.
double cosine(VectorView a, VectorView b);

}  // namespace ontopop

#endif  // ONTOPOP_EMBEDDINGS_H_
