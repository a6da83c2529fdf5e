#include "ontopop/clustering.h"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "ontopop/rng.h"

namespace ontopop {

namespace {

void check_arguments(const std::vector<Vector> &vectors, std::size_t k) {
  if (k == 0 || k > vectors.size()) {
    throw std::invalid_argument("cluster count " + std::to_string(k) +
                                " outside [1, " +
                                std::to_string(vectors.size()) + "]");
  }
}

std::vector<Vector> normalize_all(const std::vector<Vector> &vectors) {
  std::vector<Vector> out;
  out.reserve(vectors.size());
  for (const auto &v : vectors) out.push_back(normalized(v));
  return out;
}

std::vector<Vector> seed_plus_plus(const std::vector<Vector> &points,
                                   std::size_t k, Rng &rng) {
  const std::size_t n = points.size();
  std::vector<Vector> centers;
  std::vector<char> chosen(n, 0);
  std::size_t first = rng.below(n);
  chosen[first] = 1;
  centers.push_back(points[first]);

  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    dist[i] = std::max(0.0, 1.0 - dot(points[i], points[first]));
  }
  while (centers.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!chosen[i]) total += dist[i] * dist[i];
    }
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double cumulative = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (chosen[i]) continue;
        cumulative += dist[i] * dist[i];
        if (cumulative > target) {
          pick = i;
          break;
        }
      }
    }
    if (pick == n) {
      // Every remaining point coincides with a center (or rounding left the
      // draw past the end): take the first remaining point with the largest
      // distance.
      double best = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!chosen[i] && dist[i] > best) {
          best = dist[i];
          pick = i;
        }
      }
    }
    chosen[pick] = 1;
    centers.push_back(points[pick]);
    for (std::size_t i = 0; i < n; ++i) {
      dist[i] = std::min(dist[i], std::max(0.0, 1.0 - dot(points[i], points[pick])));
    }
  }
  return centers;
}

std::size_t nearest(const Vector &point, const std::vector<Vector> &centers) {
  std::size_t best = 0;
  double best_sim = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double sim = dot(point, centers[c]);
    if (sim > best_sim) {
      best_sim = sim;
      best = c;
    }
  }
  return best;
}

// Normalized mean direction of the cluster members; keeps `fallback` when
// the members cancel out.
Vector mean_direction(const std::vector<Vector> &points,
                      const std::vector<std::size_t> &labels, std::size_t cluster,
                      const Vector &fallback) {
  Vector sum(fallback.size(), 0.0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (labels[i] != cluster) continue;
    for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += points[i][d];
  }
  if (norm(sum) == 0.0) return fallback;
  return normalized(sum);
}

}  // namespace

std::vector<std::size_t> kmeans(const std::vector<Vector> &vectors,
                                std::size_t k, const KMeansOptions &options) {
  check_arguments(vectors, k);
  const auto points = normalize_all(vectors);
  const std::size_t n = points.size();
  Rng rng(options.seed);
  auto centers = seed_plus_plus(points, k, rng);

  std::vector<std::size_t> labels(n, k);
  for (std::size_t iter = 0; iter < std::max<std::size_t>(options.max_iters, 1);
       ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = nearest(points[i], centers);
      if (c != labels[i]) {
        labels[i] = c;
        changed = true;
      }
    }
    if (!changed) break;

    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t label : labels) ++sizes[label];
    for (std::size_t c = 0; c < k; ++c) {
      centers[c] = mean_direction(points, labels, c, centers[c]);
    }
    for (std::size_t empty = 0; empty < k; ++empty) {
      if (sizes[empty] != 0) continue;
      std::size_t far = n;
      double worst = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[labels[i]] < 2) continue;
        const double sim = dot(points[i], centers[labels[i]]);
        if (sim < worst) {
          worst = sim;
          far = i;
        }
      }
      if (far == n) break;  // unreachable while k <= n
      const std::size_t donor = labels[far];
      --sizes[donor];
      labels[far] = empty;
      sizes[empty] = 1;
      centers[empty] = points[far];
      centers[donor] = mean_direction(points, labels, donor, centers[donor]);
    }
  }
  return labels;
}

std::vector<std::size_t> agglomerative_cut(const std::vector<Vector> &vectors,
                                           std::size_t k) {
  check_arguments(vectors, k);
  const auto points = normalize_all(vectors);
  const std::size_t n = points.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Condensed upper-triangular distance matrix.
  auto at = [n](std::size_t i, std::size_t j) {
    return i * n - i * (i + 1) / 2 + (j - i - 1);
  };
  std::vector<double> dist(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      dist[at(i, j)] = 1.0 - dot(points[i], points[j]);
    }
  }
  auto d = [&](std::size_t a, std::size_t b) -> double & {
    return a < b ? dist[at(a, b)] : dist[at(b, a)];
  };

  std::vector<char> active(n, 1);
  std::vector<std::size_t> size(n, 1);
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;

  // Cached nearest neighbour of each row among active clusters with a larger
  // index; the first minimum is kept so ties resolve to the smaller index.
  std::vector<std::size_t> nn(n, n);
  std::vector<double> nn_dist(n, kInf);
  auto rescan = [&](std::size_t i) {
    nn[i] = n;
    nn_dist[i] = kInf;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (active[j] && dist[at(i, j)] < nn_dist[i]) {
        nn_dist[i] = dist[at(i, j)];
        nn[i] = j;
      }
    }
  };
  for (std::size_t i = 0; i < n; ++i) rescan(i);

  for (std::size_t clusters = n; clusters > k; --clusters) {
    std::size_t a = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (active[i] && nn[i] != n && (a == n || nn_dist[i] < nn_dist[a])) a = i;
    }
    const std::size_t b = nn[a];
    const double wa = static_cast<double>(size[a]);
    const double wb = static_cast<double>(size[b]);
    for (std::size_t m = 0; m < n; ++m) {
      if (!active[m] || m == a || m == b) continue;
      d(a, m) = (wa * d(a, m) + wb * d(b, m)) / (wa + wb);
    }
    active[b] = 0;
    size[a] += size[b];
    parent[b] = a;

    rescan(a);
    for (std::size_t r = 0; r < a; ++r) {
      if (!active[r]) continue;
      if (nn[r] == a || nn[r] == b) {
        rescan(r);
      } else if (d(r, a) < nn_dist[r] || (d(r, a) == nn_dist[r] && a < nn[r])) {
        nn[r] = a;
        nn_dist[r] = d(r, a);
      }
    }
    for (std::size_t r = a + 1; r < b; ++r) {
      if (active[r] && nn[r] == b) rescan(r);
    }
  }

  std::vector<std::size_t> label_of_root(n, n);
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (active[i]) label_of_root[i] = next++;
  }
  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t root = i;
    while (parent[root] != root) root = parent[root];
    labels[i] = label_of_root[root];
  }
  return labels;
}

}  // namespace ontopop
