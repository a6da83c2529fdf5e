#ifndef ONTOPOP_CLUSTERING_H_
#define ONTOPOP_CLUSTERING_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ontopop/embeddings.h"

namespace ontopop {

struct KMeansOptions {
  std::uint64_t seed = 42;
  std::size_t max_iters = 300;
};

// Spherical k-means: Lloyd iterations on length-normalized vectors with
// k-means++ seeding under cosine distance. Stops when no assignment changes
// or after max_iters. A cluster that empties is re-seeded with the point
// farthest from its own centroid. Returns a cluster index in [0, k) per
// vector. Requires 1 <= k <= vectors.size() and non-zero vectors.
std::vector<std::size_t> kmeans(const std::vector<Vector> &vectors,
                                std::size_t k, const KMeansOptions &options = {});

// Average-linkage agglomerative clustering under cosine distance, merged
// until k clusters remain. The closest pair is merged first; equal distances
// go to the pair with the smallest cluster indices. Clusters are numbered by
// their smallest member index.
std::vector<std::size_t> agglomerative_cut(const std::vector<Vector> &vectors,
                                           std::size_t k);

}  // namespace ontopop

#endif  // ONTOPOP_CLUSTERING_H_
