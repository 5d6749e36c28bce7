#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ntpetri/net.hpp"

namespace ntpetri {

/// A disjoint covering of the net's transitions. Canonical form: every
/// cluster sorted ascending, clusters ordered by their least member.
struct WorkClusterPartition {
  std::vector<std::vector<TransitionId>> clusters;

  static WorkClusterPartition all_in_one(const Net& n);
  static WorkClusterPartition singletons(const Net& n);

  bool operator==(const WorkClusterPartition&) const = default;
};

/// The unique maximal valid partition: connected components of the
/// conflict graph joining transitions whose input-place sets intersect.
WorkClusterPartition compute_work_clusters(const Net& n);

/// True iff no input place is consumed by transitions in two different
/// clusters. Throws NotAPartitionError when `p` is not a disjoint covering
/// of the net's transitions.
bool validate_partition(const Net& n, const WorkClusterPartition& p);

/// Unions the requested cluster pairs (indices into p.clusters) and
/// re-canonicalizes. A union of valid clusters stays valid.
WorkClusterPartition coarsen(
    const WorkClusterPartition& p,
    std::span<const std::pair<std::size_t, std::size_t>> merges);

}  // namespace ntpetri
