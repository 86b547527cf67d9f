#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "specforge/generators.hpp"

namespace specforge {

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double t = a[j] - b[j];
    d += t * t;
  }
  return d;
}

}  // namespace

KMeansResult kmeans(std::span<const double> features, std::size_t dim,
                    const ClusterParams& params) {
  if (dim == 0 || features.size() % dim != 0 || features.empty()) {
    throw std::invalid_argument("feature matrix shape is inconsistent");
  }
  const std::size_t n = features.size() / dim;
  if (params.k < 1 || static_cast<std::size_t>(params.k) > n) {
    throw std::invalid_argument("k must lie in [1, N]; got k=" +
                                std::to_string(params.k) + " for N=" +
                                std::to_string(n));
  }
  const auto k = static_cast<std::size_t>(params.k);
  auto point = [&](std::size_t i) { return features.subspan(i * dim, dim); };

  KMeansResult res;
  res.dim = dim;
  res.centroids.resize(k * dim);
  auto centroid = [&](std::size_t c) {
    return std::span<double>(res.centroids).subspan(c * dim, dim);
  };

  // k-means++ seeding.
  std::mt19937_64 rng(params.seed);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  std::vector<char> chosen(n, 0);
  std::size_t first = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t pick = first;
    if (c > 0) {
      double total = 0.0;
      for (double v : d2) total += v;
      if (total > 0.0) {
        double target = std::uniform_real_distribution<double>(0.0, total)(rng);
        pick = n;
        for (std::size_t i = 0; i < n; ++i) {
          if (d2[i] <= 0.0) continue;
          target -= d2[i];
          pick = i;
          if (target < 0.0) break;
        }
      } else {
        // Every remaining point coincides with a centroid.
        pick = static_cast<std::size_t>(
            std::find(chosen.begin(), chosen.end(), 0) - chosen.begin());
      }
    }
    chosen[pick] = 1;
    std::copy_n(point(pick).begin(), dim, centroid(c).begin());
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], sq_dist(point(i), centroid(c)));
    }
  }

  res.assignment.assign(n, -1);
  std::vector<double> best_d(n, 0.0);
  std::vector<double> sums(k * dim);
  std::vector<std::size_t> counts(k);
  for (int iter = 0; iter < std::max(1, params.max_iters); ++iter) {
    bool changed = false;
    const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) reduction(|| : changed)
    for (std::ptrdiff_t si = 0; si < sn; ++si) {
      const auto i = static_cast<std::size_t>(si);
      int best = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = sq_dist(point(i), centroid(c));
        if (d < bd) {
          bd = d;
          best = static_cast<int>(c);
        }
      }
      best_d[i] = bd;
      if (res.assignment[i] != best) {
        res.assignment[i] = best;
        changed = true;
      }
    }
    res.iterations = iter + 1;
    if (!changed && iter > 0) break;

    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(res.assignment[i]);
      ++counts[c];
      for (std::size_t j = 0; j < dim; ++j) sums[c * dim + j] += point(i)[j];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        for (std::size_t j = 0; j < dim; ++j) {
          centroid(c)[j] = sums[c * dim + j] / static_cast<double>(counts[c]);
        }
        continue;
      }
      // Empty cluster: move it onto the point worst served by its centroid.
      const auto far = static_cast<std::size_t>(
          std::max_element(best_d.begin(), best_d.end()) - best_d.begin());
      std::copy_n(point(far).begin(), dim, centroid(c).begin());
      best_d[far] = 0.0;
      res.assignment[far] = static_cast<int>(c);
    }
  }

  res.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    res.inertia += sq_dist(
        point(i), centroid(static_cast<std::size_t>(res.assignment[i])));
  }
  return res;
}

SpecSet gen_cluster(const Dataset& gen, const ClusterParams& params,
                    TaskKind task) {
  if (task != gen.task()) {
    throw std::invalid_argument("task kind differs from the dataset's");
  }
  const auto km = kmeans(gen.features(), gen.cols(), params);
  const std::size_t k = static_cast<std::size_t>(params.k);
  const std::size_t dim = gen.cols();

  std::vector<double> lo(k * dim, INFINITY);
  std::vector<double> hi(k * dim, -INFINITY);
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t i = 0; i < gen.rows(); ++i) {
    const auto c = static_cast<std::size_t>(km.assignment[i]);
    ++sizes[c];
    auto r = gen.row(i);
    for (std::size_t j = 0; j < dim; ++j) {
      lo[c * dim + j] = std::min(lo[c * dim + j], r[j]);
      hi[c * dim + j] = std::max(hi[c * dim + j], r[j]);
    }
  }

  std::vector<std::optional<Specification>> found(k);
  const auto sk = static_cast<std::ptrdiff_t>(k);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t sc = 0; sc < sk; ++sc) {
    const auto c = static_cast<std::size_t>(sc);
    if (sizes[c] == 0) continue;
    Hyperrectangle box(
        std::vector<double>(lo.begin() + c * dim, lo.begin() + (c + 1) * dim),
        std::vector<double>(hi.begin() + c * dim, hi.begin() + (c + 1) * dim));
    if (auto spec = extract_specification(box, gen, task)) {
      spec->provenance = "cluster:" + std::to_string(c);
      found[c] = std::move(*spec);
    }
  }

  SpecSet set;
  set.task = task;
  set.feature_dim = dim;
  set.generator = "cluster";
  set.params = {{"k", params.k},
                {"max_iters", params.max_iters},
                {"seed", params.seed},
                {"init", "k-means++"},
                {"iterations", km.iterations}};
  for (auto& spec : found) {
    if (spec) set.specs.push_back(std::move(*spec));
  }
  return set;
}

}  // namespace specforge
