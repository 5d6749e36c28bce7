#include "ntpetri/clusters.hpp"

#include <algorithm>
#include <numeric>

namespace ntpetri {

namespace {

struct UnionFind {
  std::vector<std::uint32_t> parent;

  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  void unite(std::uint32_t a, std::uint32_t b) { parent[find(a)] = find(b); }
};

WorkClusterPartition canonicalize(std::vector<std::vector<TransitionId>> cs) {
  for (auto& c : cs) std::sort(c.begin(), c.end());
  std::sort(cs.begin(), cs.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return WorkClusterPartition{std::move(cs)};
}

WorkClusterPartition from_components(std::size_t n, UnionFind& uf) {
  std::vector<std::vector<TransitionId>> by_root(n);
  for (std::uint32_t t = 0; t < n; ++t) {
    by_root[uf.find(t)].push_back(t);
  }
  std::vector<std::vector<TransitionId>> clusters;
  for (auto& c : by_root) {
    if (!c.empty()) clusters.push_back(std::move(c));
  }
  return canonicalize(std::move(clusters));
}

}  // namespace

WorkClusterPartition WorkClusterPartition::all_in_one(const Net& n) {
  if (n.transition_count() == 0) return {};
  std::vector<TransitionId> all(n.transition_count());
  std::iota(all.begin(), all.end(), 0);
  return WorkClusterPartition{{std::move(all)}};
}

WorkClusterPartition WorkClusterPartition::singletons(const Net& n) {
  WorkClusterPartition p;
  for (TransitionId t = 0; t < n.transition_count(); ++t) {
    p.clusters.push_back({t});
  }
  return p;
}

WorkClusterPartition compute_work_clusters(const Net& n) {
  const std::size_t T = n.transition_count();
  UnionFind uf(T);
  // Transitions sharing an input place must share a cluster; the maximal
  // partition is exactly the component closure of that relation.
  std::vector<std::int64_t> consumer_of(n.place_count(), -1);
  for (TransitionId t = 0; t < T; ++t) {
    for (PlaceId p : n.transition(t).input_places()) {
      if (p >= n.place_count()) continue;
      if (consumer_of[p] < 0) {
        consumer_of[p] = t;
      } else {
        uf.unite(static_cast<std::uint32_t>(consumer_of[p]), t);
      }
    }
  }
  return from_components(T, uf);
}

bool validate_partition(const Net& n, const WorkClusterPartition& p) {
  const std::size_t T = n.transition_count();
  std::vector<std::int64_t> cluster_of(T, -1);
  std::size_t covered = 0;
  for (std::size_t c = 0; c < p.clusters.size(); ++c) {
    if (p.clusters[c].empty()) {
      throw NotAPartitionError("cluster " + std::to_string(c) + " is empty");
    }
    for (TransitionId t : p.clusters[c]) {
      if (t >= T) {
        throw NotAPartitionError("cluster " + std::to_string(c) +
                                 " names unknown transition id " +
                                 std::to_string(t));
      }
      if (cluster_of[t] >= 0) {
        throw NotAPartitionError("transition id " + std::to_string(t) +
                                 " appears in more than one cluster");
      }
      cluster_of[t] = static_cast<std::int64_t>(c);
      ++covered;
    }
  }
  if (covered != T) {
    throw NotAPartitionError("partition covers " + std::to_string(covered) +
                             " of " + std::to_string(T) + " transitions");
  }

  std::vector<std::int64_t> consuming_cluster(n.place_count(), -1);
  for (TransitionId t = 0; t < T; ++t) {
    for (PlaceId place : n.transition(t).input_places()) {
      if (place >= n.place_count()) continue;
      if (consuming_cluster[place] < 0) {
        consuming_cluster[place] = cluster_of[t];
      } else if (consuming_cluster[place] != cluster_of[t]) {
        return false;
      }
    }
  }
  return true;
}

WorkClusterPartition coarsen(
    const WorkClusterPartition& p,
    std::span<const std::pair<std::size_t, std::size_t>> merges) {
  const std::size_t k = p.clusters.size();
  UnionFind uf(k);
  for (const auto& [a, b] : merges) {
    if (a >= k || b >= k) {
      throw IndexOutOfRangeError("merge names cluster index " +
                                 std::to_string(std::max(a, b)) + " of " +
                                 std::to_string(k));
    }
    uf.unite(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
  }
  std::vector<std::vector<TransitionId>> merged(k);
  for (std::size_t c = 0; c < k; ++c) {
    auto& target = merged[uf.find(static_cast<std::uint32_t>(c))];
    target.insert(target.end(), p.clusters[c].begin(), p.clusters[c].end());
  }
  std::vector<std::vector<TransitionId>> clusters;
  for (auto& c : merged) {
    if (!c.empty()) clusters.push_back(std::move(c));
  }
  return canonicalize(std::move(clusters));
}

}  // namespace ntpetri
