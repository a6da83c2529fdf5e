#include "ontopop/embeddings.h"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ontopop/error.h"

namespace ontopop {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' ||
         c == '\f';
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view field, T &out) {
  const char *first = field.data();
  const char *last = field.data() + field.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

struct Header {
  std::size_t count = 0;
  std::size_t dimension = 0;
};

std::optional<Header> parse_header(std::string_view line) {
  const auto fields = split_fields(line);
  Header header;
  if (fields.size() != 2 || !parse_number(fields[0], header.count) ||
      !parse_number(fields[1], header.dimension) || header.dimension == 0) {
    return std::nullopt;
  }
  return header;
}

bool is_zero(VectorView v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

std::ifstream open_input(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

// Accumulates parsed rows, dropping zero vectors.
class StoreBuilder {
 public:
  StoreBuilder(std::size_t dimension, Diagnostics *diag)
      : dimension_(dimension), diag_(diag) {}

  // Returns false when `token` was already added.
  bool add(std::string token, const std::vector<double> &row) {
    if (!seen_.insert({token, 0}).second) return false;
    if (is_zero(row)) {
      warn(diag_, "dropping zero vector for token '" + token + "'");
      return true;
    }
    vocabulary_.push_back(std::move(token));
    values_.insert(values_.end(), row.begin(), row.end());
    return true;
  }

  EmbeddingStore build() {
    return EmbeddingStore(dimension_, std::move(vocabulary_),
                          std::move(values_));
  }

 private:
  std::size_t dimension_;
  Diagnostics *diag_;
  std::unordered_map<std::string, int> seen_;
  std::vector<std::string> vocabulary_;
  std::vector<double> values_;
};

}  // namespace

EmbeddingStore::EmbeddingStore(std::size_t dimension,
                               std::vector<std::string> vocabulary,
                               std::vector<double> values)
    : dimension_(dimension),
      vocabulary_(std::move(vocabulary)),
      values_(std::move(values)) {
  if (dimension_ == 0) throw ValidationError("embedding dimension must be > 0");
  if (values_.size() != vocabulary_.size() * dimension_) {
    throw ValidationError("embedding matrix has " +
                          std::to_string(values_.size()) + " values, expected " +
                          std::to_string(vocabulary_.size() * dimension_));
  }
  index_.reserve(vocabulary_.size());
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    if (vocabulary_[i].empty()) throw ValidationError("empty token in vocabulary");
    if (!index_.emplace(vocabulary_[i], i).second) {
      throw ValidationError("duplicate token '" + vocabulary_[i] + "'");
    }
  }
}

std::optional<VectorView> EmbeddingStore::vector_of(
    std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return row(it->second);
}

bool EmbeddingStore::contains(std::string_view token) const {
  return index_.count(std::string(token)) > 0;
}

EmbeddingFormat parse_embedding_format(std::string_view name) {
  if (name == "text") return EmbeddingFormat::kText;
  if (name == "binary") return EmbeddingFormat::kBinary;
  if (name == "auto") return EmbeddingFormat::kAuto;
  throw ConfigError("unknown embedding format '" + std::string(name) +
                    "' (expected text, binary or auto)");
}

EmbeddingStore parse_text_model(std::istream &in, Diagnostics *diag) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header", 1);
  const auto header = parse_header(line);
  if (!header) throw ParseError("malformed header '" + line + "'", 1);

  StoreBuilder builder(header->dimension, diag);
  std::vector<double> row(header->dimension);
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (rows == header->count) {
      throw ParseError("more entries than the " +
                           std::to_string(header->count) +
                           " declared in the header",
                       line_no);
    }
    if (fields.size() - 1 != header->dimension) {
      throw ParseError("expected " + std::to_string(header->dimension) +
                           " values after token '" + std::string(fields[0]) +
                           "', found " + std::to_string(fields.size() - 1),
                       line_no);
    }
    for (std::size_t d = 0; d < header->dimension; ++d) {
      if (!parse_number(fields[d + 1], row[d]) || !std::isfinite(row[d])) {
        throw ParseError("non-numeric field '" + std::string(fields[d + 1]) +
                             "'",
                         line_no);
      }
    }
    if (!builder.add(std::string(fields[0]), row)) {
      throw ParseError("duplicate token '" + std::string(fields[0]) + "'",
                       line_no);
    }
    ++rows;
  }
  if (rows != header->count) {
    throw ParseError("header declares " + std::to_string(header->count) +
                         " entries but file has " + std::to_string(rows),
                     line_no);
  }
  return builder.build();
}

EmbeddingStore load_text_model(const std::filesystem::path &path,
                               Diagnostics *diag) {
  auto in = open_input(path);
  return parse_text_model(in, diag);
}

EmbeddingStore parse_binary_model(std::istream &in, Diagnostics *diag) {
  std::string header_line;
  if (!std::getline(in, header_line)) {
    throw ParseError("empty file: header not parseable");
  }
  const auto header = parse_header(header_line);
  if (!header) throw ParseError("header not parseable: '" + header_line + "'");

  StoreBuilder builder(header->dimension, diag);
  std::vector<double> row(header->dimension);
  std::vector<char> block(header->dimension * 4);
  for (std::size_t entry = 0; entry < header->count; ++entry) {
    int c = in.get();
    while (c == '\n' || c == '\r') c = in.get();
    if (c == std::char_traits<char>::eof()) {
      throw ParseError("vocab_count mismatch: header declares " +
                       std::to_string(header->count) + " entries, found " +
                       std::to_string(entry));
    }
    std::string token;
    while (c != ' ' && c != std::char_traits<char>::eof()) {
      token.push_back(static_cast<char>(c));
      c = in.get();
    }
    if (c == std::char_traits<char>::eof()) {
      throw TruncationError("truncated file: entry " + std::to_string(entry) +
                                " ends inside its token",
                            entry);
    }
    if (token.empty()) {
      throw ParseError("empty token at entry " + std::to_string(entry));
    }
    in.read(block.data(), static_cast<std::streamsize>(block.size()));
    if (static_cast<std::size_t>(in.gcount()) != block.size()) {
      throw TruncationError("truncated file: entry " + std::to_string(entry) +
                                " ('" + token + "') ends mid-vector",
                            entry);
    }
    for (std::size_t d = 0; d < header->dimension; ++d) {
      const auto *b = reinterpret_cast<const unsigned char *>(&block[d * 4]);
      const std::uint32_t bits = std::uint32_t{b[0]} |
                                 (std::uint32_t{b[1]} << 8) |
                                 (std::uint32_t{b[2]} << 16) |
                                 (std::uint32_t{b[3]} << 24);
      row[d] = static_cast<double>(std::bit_cast<float>(bits));
      if (!std::isfinite(row[d])) {
        throw ParseError("non-finite value in entry " + std::to_string(entry));
      }
    }
    if (!builder.add(std::move(token), row)) {
      throw ParseError("duplicate token at entry " + std::to_string(entry));
    }
  }
  for (int c = in.get(); c != std::char_traits<char>::eof(); c = in.get()) {
    if (!is_space(static_cast<char>(c))) {
      throw ParseError("vocab_count mismatch: data after the " +
                       std::to_string(header->count) + " declared entries");
    }
  }
  return builder.build();
}

EmbeddingStore load_binary_model(const std::filesystem::path &path,
                                 Diagnostics *diag) {
  auto in = open_input(path);
  return parse_binary_model(in, diag);
}

EmbeddingFormat sniff_format(const std::filesystem::path &path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) return EmbeddingFormat::kText;
  const auto header = parse_header(line);
  if (!header || header->count == 0) return EmbeddingFormat::kText;

  int c = in.get();
  while (c == '\n' || c == '\r') c = in.get();
  std::size_t token_len = 0;
  while (c != ' ' && c != '\t' && c != '\n' &&
         c != std::char_traits<char>::eof()) {
    if (++token_len > 4096) return EmbeddingFormat::kText;
    c = in.get();
  }
  std::string block(header->dimension * 4, '\0');
  in.read(block.data(), static_cast<std::streamsize>(block.size()));
  block.resize(static_cast<std::size_t>(in.gcount()));
  // Text rows end at the newline; anything after belongs to the next word.
  if (const auto nl = block.find('\n'); nl != std::string::npos) block.resize(nl);
  constexpr std::string_view kTextBytes = "0123456789+-.eEinfaINFA \t\r\n";
  const bool textual =
      std::all_of(block.begin(), block.end(), [&](char ch) {
        return kTextBytes.find(ch) != std::string_view::npos;
      });
  return textual ? EmbeddingFormat::kText : EmbeddingFormat::kBinary;
}

EmbeddingStore load_model(const std::filesystem::path &path,
                          EmbeddingFormat format, Diagnostics *diag) {
  if (format == EmbeddingFormat::kAuto) format = sniff_format(path);
  return format == EmbeddingFormat::kBinary ? load_binary_model(path, diag)
                                            : load_text_model(path, diag);
}

void write_text_model(const EmbeddingStore &store, std::ostream &out) {
  out << store.size() << ' ' << store.dimension() << '\n';
  std::array<char, 64> buf;
  for (std::size_t i = 0; i < store.size(); ++i) {
    out << store.vocabulary()[i];
    for (double v : store.row(i)) {
      auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
      out << ' ' << std::string_view(buf.data(), ptr - buf.data());
    }
    out << '\n';
  }
}

void save_text_model(const EmbeddingStore &store,
                     const std::filesystem::path &path) {
  auto out = open_output(path);
  write_text_model(store, out);
  if (!out) throw IoError("failed writing " + path.string());
}

void write_binary_model(const EmbeddingStore &store, std::ostream &out) {
  out << store.size() << ' ' << store.dimension() << '\n';
  for (std::size_t i = 0; i < store.size(); ++i) {
    out << store.vocabulary()[i] << ' ';
    for (double v : store.row(i)) {
      const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
      const char bytes[4] = {static_cast<char>(bits & 0xff),
                             static_cast<char>((bits >> 8) & 0xff),
                             static_cast<char>((bits >> 16) & 0xff),
                             static_cast<char>((bits >> 24) & 0xff)};
      out.write(bytes, 4);
    }
    out << '\n';
  }
}

void save_binary_model(const EmbeddingStore &store,
                       const std::filesystem::path &path) {
  auto out = open_output(path);
  write_binary_model(store, out);
  if (!out) throw IoError("failed writing " + path.string());
}

double dot(VectorView a, VectorView b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("vector length mismatch: " +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double norm(VectorView a) { return std::sqrt(dot(a, a)); }

Vector normalized(VectorView a) {
  const double n = norm(a);
  if (n == 0.0) throw DegenerateInputError("cannot normalize a zero vector");
  Vector out(a.begin(), a.end());
  for (double &x : out) x /= n;
  return out;
}

double cosine(VectorView a, VectorView b) {
  const double ab = dot(a, b);
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) {
    throw DegenerateInputError("cosine undefined for a zero vector");
  }
  return std::clamp(ab / (na * nb), -1.0, 1.0);
}

}  // namespace ontopop
