#ifndef ONTOPOP_TESTS_SUPPORT_H_
#define ONTOPOP_TESTS_SUPPORT_H_

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "ontopop/embeddings.h"
#include "ontopop/rng.h"
#include "ontopop/taxonomy.h"

namespace testing {

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("ontopop-test-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::filesystem::path operator/(const std::string &name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline ontopop::Vector random_vector(std::size_t dim, ontopop::Rng &rng) {
  ontopop::Vector v(dim);
  for (double &x : v) x = rng.normal();
  return v;
}

// Straight textbook cosine, kept separate from the library's.
inline double naive_cosine(const std::vector<double> &a, const std::vector<double> &b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

// entity
// |-- animal (animal, beast)
// |   `-- mammal
// |       |-- dog (dog, domestic_dog)
// |       |-- cat
// |       `-- wolf
// |-- andiron (andiron, dog, firedog)
// `-- chair
inline ontopop::TaxonomyStore toy_taxonomy() {
  return ontopop::TaxonomyStore({
      {"entity.n.01", {"entity"}, {}},
      {"animal.n.01", {"animal", "beast"}, {"entity.n.01"}},
      {"mammal.n.01", {"mammal"}, {"animal.n.01"}},
      {"dog.n.01", {"dog", "domestic_dog"}, {"mammal.n.01"}},
      {"cat.n.01", {"cat"}, {"mammal.n.01"}},
      {"wolf.n.01", {"wolf"}, {"mammal.n.01"}},
      {"andiron.n.01", {"andiron", "dog", "firedog"}, {"entity.n.01"}},
      {"chair.n.01", {"chair"}, {"entity.n.01"}},
  });
}

}  // namespace testing

#endif  // ONTOPOP_TESTS_SUPPORT_H_
