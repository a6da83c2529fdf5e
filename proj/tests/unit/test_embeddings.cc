#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <functional>
#include <sstream>

#include "ontopop/diagnostics.h"
#include "ontopop/embeddings.h"
#include "ontopop/error.h"
#include "ontopop/fixture.h"
#include "support.h"

using namespace ontopop;

namespace {

EmbeddingStore parse_text(const std::string &text, Diagnostics *diag = nullptr) {
  std::istringstream in(text);
  return parse_text_model(in, diag);
}

EmbeddingStore parse_binary(const std::string &bytes) {
  std::istringstream in(bytes, std::ios::binary);
  return parse_binary_model(in);
}

// Encoder written against the file layout, independent of write_binary_model.
std::string encode_binary(const std::vector<std::pair<std::string, std::vector<float>>> &rows,
                          std::size_t dim, bool newline_separated = true) {
  static_assert(std::endian::native == std::endian::little);
  std::string out = std::to_string(rows.size()) + " " + std::to_string(dim) + "\n";
  for (const auto &[token, values] : rows) {
    out += token;
    out += ' ';
    for (float f : values) {
      char bytes[4];
      std::memcpy(bytes, &f, 4);
      out.append(bytes, 4);
    }
    if (newline_separated) out += '\n';
  }
  return out;
}

int line_of(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const ParseError &e) {
    return static_cast<int>(e.line());
  }
  return -1;
}

}  // namespace

TEST_CASE("text model: minimal file") {
  const auto store = parse_text("2 3\na 1 0 0\nb 0 1 0\n");
  CHECK(store.size() == 2);
  CHECK(store.dimension() == 3);
  const auto b = store.vector_of("b");
  REQUIRE(b);
  CHECK((*b)[1] == 1.0);
}

TEST_CASE("text model: errors carry line numbers") {
  CHECK(line_of([] { parse_text("2 3\na 1 0\n"); }) == 2);
  CHECK(line_of([] { parse_text("two 3\n"); }) == 1);
  CHECK(line_of([] { parse_text("2 3\na 1 0 0\na 0 1 0\n"); }) == 3);
  CHECK(line_of([] { parse_text("2 3\na 1 0 0\nb 0 x 0\n"); }) == 3);
  CHECK(line_of([] { parse_text("2 3\na 1 0 nan\nb 0 1 0\n"); }) == 2);
  CHECK_THROWS_AS(parse_text("3 3\na 1 0 0\nb 0 1 0\n"), ParseError);
  CHECK_THROWS_AS(parse_text(""), ParseError);
}

TEST_CASE("text model: zero vectors are dropped with a warning") {
  Diagnostics diag;
  const auto store = parse_text("2 2\nz 0 0\na 1 1\n", &diag);
  CHECK(store.size() == 1);
  CHECK_FALSE(store.contains("z"));
  CHECK(diag.warnings().size() == 1);
}

TEST_CASE("lookup is exact and case-sensitive") {
  const auto store = parse_text("1 2\nCourt 1 2\n");
  CHECK(store.vector_of("Court"));
  CHECK_FALSE(store.vector_of("court"));
  CHECK_FALSE(store.vector_of("missing"));
}

TEST_CASE("binary model matches text load") {
  const auto text = parse_text("2 3\na 1 0 0\nb 0 1 0\n");
  for (bool nl : {true, false}) {
    const auto bin = parse_binary(encode_binary({{"a", {1, 0, 0}}, {"b", {0, 1, 0}}}, 3, nl));
    REQUIRE(bin.size() == 2);
    for (const auto &token : text.vocabulary()) {
      const auto x = *text.vector_of(token);
      const auto y = *bin.vector_of(token);
      for (std::size_t d = 0; d < 3; ++d) CHECK(std::abs(x[d] - y[d]) <= 1e-6);
    }
  }
}

TEST_CASE("binary model: failure modes") {
  CHECK_THROWS_WITH_AS(parse_binary(""), doctest::Contains("header"), ParseError);
  CHECK_THROWS_WITH_AS(parse_binary("x y\n"), doctest::Contains("header"), ParseError);

  auto full = encode_binary({{"a", {1, 0, 0}}, {"b", {0, 1, 0}}}, 3);
  const auto cut = full.substr(0, full.size() - 6);
  try {
    parse_binary(cut);
    FAIL("expected truncation");
  } catch (const TruncationError &e) {
    CHECK(e.entry() == 1);
  }

  auto short_count = encode_binary({{"a", {1, 0, 0}}}, 3);
  short_count[0] = '2';
  CHECK_THROWS_WITH_AS(parse_binary(short_count), doctest::Contains("vocab_count"), ParseError);

  auto long_count = encode_binary({{"a", {1, 0, 0}}, {"b", {0, 1, 0}}}, 3);
  long_count[0] = '1';
  CHECK_THROWS_WITH_AS(parse_binary(long_count), doctest::Contains("vocab_count"), ParseError);
}

TEST_CASE("format sniffing") {
  testing::TempDir dir;
  testing::write_file(dir / "m.txt", "2 3\na 1 0 0\nb 0 1 0\n");
  testing::write_file(dir / "m.bin", encode_binary({{"a", {1, 0, 0}}, {"b", {0, 1, 0}}}, 3));
  CHECK(sniff_format(dir / "m.txt") == EmbeddingFormat::kText);
  CHECK(sniff_format(dir / "m.bin") == EmbeddingFormat::kBinary);
  CHECK(load_model(dir / "m.bin").size() == 2);
  CHECK(load_model(dir / "m.txt", EmbeddingFormat::kText).size() == 2);
  CHECK_THROWS_AS(parse_embedding_format("csv"), ConfigError);
}

TEST_CASE("cosine examples") {
  CHECK(cosine(Vector{1, 0}, Vector{0, 1}) == doctest::Approx(0.0));
  CHECK(cosine(Vector{2, 0}, Vector{5, 0}) == doctest::Approx(1.0));
  // 32 / sqrt(14 * 77)
  CHECK(cosine(Vector{1, 2, 3}, Vector{4, 5, 6}) ==
        doctest::Approx(32.0 / std::sqrt(1078.0)).epsilon(1e-12));
  CHECK(cosine(Vector{1, 2, 3}, Vector{4, 5, 6}) == doctest::Approx(0.974631846).epsilon(1e-9));
  CHECK_THROWS_AS(cosine(Vector{0, 0}, Vector{1, 0}), DegenerateInputError);
  CHECK_THROWS_AS(cosine(Vector{1, 0}, Vector{1, 0, 0}), std::invalid_argument);
}

TEST_CASE("cosine properties on random vectors") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto v = testing::random_vector(1 + rng.below(20), rng);
    auto w = testing::random_vector(v.size(), rng);
    Vector neg(v.size()), scaled(v.size());
    const double alpha = 0.001 + 100 * rng.uniform();
    for (std::size_t i = 0; i < v.size(); ++i) {
      neg[i] = -v[i];
      scaled[i] = alpha * v[i];
    }
    CHECK(std::abs(cosine(v, v) - 1.0) <= 1e-9);
    CHECK(std::abs(cosine(v, neg) + 1.0) <= 1e-9);
    CHECK(std::abs(cosine(scaled, w) - cosine(v, w)) <= 1e-9);
    const double c = cosine(v, w);
    CHECK(c >= -1.0);
    CHECK(c <= 1.0);
    CHECK(std::abs(c - testing::naive_cosine(v, w)) <= 1e-12);
  }
}

TEST_CASE("round trip through both formats") {
  Rng rng(5);
  const std::size_t dim = 7;
  std::vector<std::string> vocab;
  std::vector<double> values;
  for (int i = 0; i < 40; ++i) {
    vocab.push_back("tok" + std::to_string(i));
    for (double x : testing::random_vector(dim, rng)) values.push_back(x);
  }
  const EmbeddingStore original(dim, vocab, values);

  std::stringstream text;
  write_text_model(original, text);
  const auto from_text = parse_text_model(text);
  std::stringstream bin(std::ios::in | std::ios::out | std::ios::binary);
  write_binary_model(original, bin);
  const auto from_bin = parse_binary_model(bin);
  std::stringstream text2;
  write_text_model(from_bin, text2);
  const auto back = parse_text_model(text2);

  REQUIRE(from_text.vocabulary() == vocab);
  REQUIRE(back.vocabulary() == vocab);
  for (std::size_t r = 0; r < vocab.size(); ++r) {
    for (std::size_t d = 0; d < dim; ++d) {
      const double x = original.row(r)[d];
      CHECK(from_text.row(r)[d] == x);
      CHECK(std::abs(back.row(r)[d] - x) <= 1e-6 * std::max(1.0, std::abs(x)));
    }
  }
}

TEST_CASE("fixture model loads and every row is queryable") {
  FixtureOptions options;
  options.filler = 838;
  const auto fx = generate_fixture(options);
  testing::TempDir dir;
  save_text_model(fx.embeddings, dir / "e.txt");
  const auto store = load_text_model(dir / "e.txt");
  CHECK(store.size() == 1000);
  CHECK(store.dimension() == 200);
  for (const auto &token : store.vocabulary()) {
    const auto v = store.vector_of(token);
    REQUIRE(v);
    CHECK(v->size() == 200);
    CHECK(std::abs(cosine(*v, *v) - 1.0) <= 1e-6);
  }
}
