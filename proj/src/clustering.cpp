#include "pci/clustering.hpp"

#include <algorithm>
#include <queue>
#include <unordered_map>

#include "pci/types.hpp"

namespace pci {

DistanceMatrix pci_to_distance(const std::vector<PciRecord>& matrix,
                               std::vector<std::string> places) {
  std::sort(places.begin(), places.end());
  const std::size_t n = places.size();
  std::unordered_map<std::string, std::uint32_t> idx;
  idx.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) idx.emplace(places[i], i);

  DistanceMatrix out;
  out.places = std::move(places);
  out.d = Eigen::MatrixXd::Constant(n, n, -1.0);  // -1 marks absent
  double max_finite = 0.0;
  for (const auto& r : matrix) {
    const auto it_i = idx.find(r.place_i);
    const auto it_j = idx.find(r.place_j);
    if (it_i == idx.end() || it_j == idx.end()) {
      throw DataError("pci record names a place outside the clustering set: " +
                      (it_i == idx.end() ? r.place_i : r.place_j));
    }
    if (it_i == it_j || r.place_i == r.place_j) continue;  // self row
    if (!(r.pci > 0.0)) {
      throw DataError("cannot invert non-positive pci for pair " + r.place_i +
                      "," + r.place_j);
    }
    const double d = 1.0 / r.pci;
    out.d(it_i->second, it_j->second) = d;
    out.d(it_j->second, it_i->second) = d;
    max_finite = std::max(max_finite, d);
  }
  out.dmax = max_finite > 0.0 ? 10.0 * max_finite : 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && out.d(i, j) < 0.0) out.d(i, j) = out.dmax;
    }
    out.d(i, i) = 0.0;
  }
  return out;
}

namespace {

// Heap entry keyed exactly like the greedy scan: smallest distance
// first, then smallest (a, b). Entries go stale when either cluster is
// merged away; they are skipped on pop. An entry that references two
// live clusters always carries their current distance, because average
// linkage never changes the distance between two surviving clusters.
struct PairEntry {
  double d;
  std::uint32_t a;
  std::uint32_t b;
};

// The matrix tracks cross-cluster sums of leaf-pair distances rather
// than means: a merge is then two additions, and each reported height
// is a single division sum / (|a|*|b|). Sums of integer-valued inputs
// stay exact, so heights carry no accumulated linkage rounding.

struct PairGreater {
  bool operator()(const PairEntry& x, const PairEntry& y) const {
    if (x.d != y.d) return x.d > y.d;
    if (x.a != y.a) return x.a > y.a;
    return x.b > y.b;
  }
};

}  // namespace

Dendrogram agglomerate(const DistanceMatrix& dist) {
  const std::size_t n = dist.places.size();
  if (n < 2) {
    throw DataError("clustering needs at least two places");
  }
  Dendrogram out;
  out.places = dist.places;
  out.merges.reserve(n - 1);

  // Cluster ids: leaves 0..n-1, merge i creates n+i. The sum matrix is
  // kept dense over n slots; a merge writes the new cluster's row into
  // the left slot and frees the right one.
  Eigen::MatrixXd s = dist.d;
  std::vector<std::int32_t> slot_of(2 * n - 1, -1);
  std::vector<std::uint32_t> leaf_count(2 * n - 1, 1);
  std::vector<std::uint32_t> active;  // live cluster ids, ascending
  active.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    slot_of[i] = std::int32_t(i);
    active.push_back(i);
  }

  std::priority_queue<PairEntry, std::vector<PairEntry>, PairGreater> heap;
  {
    std::vector<PairEntry> init;
    init.reserve(n * (n - 1) / 2);
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = i + 1; j < n; ++j)
        init.push_back({s(i, j), i, j});
    heap = decltype(heap)(PairGreater{}, std::move(init));
  }

  for (std::uint32_t step = 0; step < n - 1; ++step) {
    PairEntry top;
    for (;;) {
      top = heap.top();
      heap.pop();
      if (slot_of[top.a] >= 0 && slot_of[top.b] >= 0) break;
    }
    const std::uint32_t id_new = std::uint32_t(n) + step;
    const std::uint32_t sa = std::uint32_t(slot_of[top.a]);
    const std::uint32_t sb = std::uint32_t(slot_of[top.b]);
    leaf_count[id_new] = leaf_count[top.a] + leaf_count[top.b];

    active.erase(std::remove_if(active.begin(), active.end(),
                                [&](std::uint32_t id) {
                                  return id == top.a || id == top.b;
                                }),
                 active.end());
    for (const std::uint32_t c : active) {
      const std::uint32_t sc = std::uint32_t(slot_of[c]);
      const double ns = s(sa, sc) + s(sb, sc);
      s(sa, sc) = ns;
      s(sc, sa) = ns;
      heap.push({ns / (double(leaf_count[id_new]) * double(leaf_count[c])), c,
                 id_new});
    }
    slot_of[top.a] = -1;
    slot_of[top.b] = -1;
    slot_of[id_new] = std::int32_t(sa);
    active.push_back(id_new);

    out.merges.push_back(
        {top.a, top.b, top.d, id_new, leaf_count[id_new]});
  }
  return out;
}

CommunityAssignment cut(const Dendrogram& dendro, std::uint32_t k) {
  const std::size_t n = dendro.places.size();
  if (k < 1 || k > n) {
    throw ConfigError("community count must be between 1 and " +
                      std::to_string(n) + ", got " + std::to_string(k));
  }
  // Replay all but the last k-1 merges; union-find roots then name the
  // communities.
  std::vector<std::uint32_t> parent(2 * n - 1);
  for (std::uint32_t i = 0; i < parent.size(); ++i) parent[i] = i;
  const auto find = [&](std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  const std::size_t applied = n - k;
  for (std::size_t i = 0; i < applied; ++i) {
    const Merge& m = dendro.merges[i];
    parent[find(m.cluster_a)] = m.new_cluster_id;
    parent[find(m.cluster_b)] = m.new_cluster_id;
  }

  // Places are sorted, so first-seen root order is smallest-member-code
  // order.
  CommunityAssignment out;
  out.places = dendro.places;
  out.community.resize(n);
  out.k = k;
  std::unordered_map<std::uint32_t, std::uint32_t> id_of_root;
  id_of_root.reserve(k);
  for (std::uint32_t leaf = 0; leaf < n; ++leaf) {
    const std::uint32_t root = find(leaf);
    const auto [it, fresh] =
        id_of_root.emplace(root, std::uint32_t(id_of_root.size()));
    out.community[leaf] = it->second;
    (void)fresh;
  }
  return out;
}

}  // namespace pci
