#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ntpetri/clusters.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace ntpetri;
using namespace ntpetri::testing;

namespace {

// The invalid-work-cluster example: T0 consumes {P0, P1}, T1 consumes
// {P1, P2}; the shared P1 forces them into one cluster.
Net conflict_net() {
  NetBuilder b({"P0", "P1", "P2", "P3", "P4"}, {"unit"});
  b.add_and("T0", {{0, 0, 1}, {1, 0, 1}}, {{3, 0, 1}});
  b.add_and("T1", {{1, 0, 1}, {2, 0, 1}}, {{4, 0, 1}});
  return b.build();
}

}  // namespace

TEST_CASE("transitions sharing an input place land in one cluster") {
  WorkClusterPartition p = compute_work_clusters(conflict_net());
  REQUIRE(p.clusters.size() == 1);
  CHECK(p.clusters[0] == std::vector<TransitionId>{0, 1});
}

TEST_CASE("splitting the conflicting pair is invalid, merging is valid") {
  Net net = conflict_net();
  WorkClusterPartition split{{{0}, {1}}};
  CHECK_FALSE(validate_partition(net, split));
  WorkClusterPartition merged{{{0, 1}}};
  CHECK(validate_partition(net, merged));
  CHECK(validate_partition(net, WorkClusterPartition::all_in_one(net)));
}

TEST_CASE("singleton and disjoint cases") {
  NetBuilder one({"H2", "O2", "H2O"}, {"unit"});
  one.add_and("combust", {{0, 0, 2}, {1, 0, 1}}, {{2, 0, 2}});
  WorkClusterPartition p1 = compute_work_clusters(one.build());
  REQUIRE(p1.clusters.size() == 1);
  CHECK(p1.clusters[0] == std::vector<TransitionId>{0});

  NetBuilder two({"P0", "P1"}, {"unit"});
  two.add_and("T0", {{0, 0, 1}}, {});
  two.add_and("T1", {{1, 0, 1}}, {});
  WorkClusterPartition p2 = compute_work_clusters(two.build());
  REQUIRE(p2.clusters.size() == 2);
  CHECK(p2.clusters[0] == std::vector<TransitionId>{0});
  CHECK(p2.clusters[1] == std::vector<TransitionId>{1});

  NetBuilder none({"P0"}, {"unit"});
  CHECK(compute_work_clusters(none.build()).clusters.empty());
}

TEST_CASE("partitions must be disjoint coverings") {
  Net net = conflict_net();
  CHECK_THROWS_AS(validate_partition(net, WorkClusterPartition{{{0}}}),
                  NotAPartitionError);
  CHECK_THROWS_AS(validate_partition(net, WorkClusterPartition{{{0, 1}, {1}}}),
                  NotAPartitionError);
  CHECK_THROWS_AS(validate_partition(net, WorkClusterPartition{{{0, 1}, {}}}),
                  NotAPartitionError);
  CHECK_THROWS_AS(validate_partition(net, WorkClusterPartition{{{0, 1, 7}}}),
                  NotAPartitionError);
}

TEST_CASE("coarsen unions clusters and stays canonical") {
  WorkClusterPartition p{{{0}, {1}, {2}}};
  auto merged = coarsen(p, std::vector<std::pair<std::size_t, std::size_t>>{
                               {0, 2}});
  REQUIRE(merged.clusters.size() == 2);
  CHECK(merged.clusters[0] == std::vector<TransitionId>{0, 2});
  CHECK(merged.clusters[1] == std::vector<TransitionId>{1});

  CHECK(coarsen(p, {}) == p);

  WorkClusterPartition pair{{{0}, {1}}};
  auto all = coarsen(pair, std::vector<std::pair<std::size_t, std::size_t>>{
                               {0, 1}});
  REQUIRE(all.clusters.size() == 1);
  CHECK(all.clusters[0] == std::vector<TransitionId>{0, 1});

  CHECK_THROWS_AS(
      coarsen(p, std::vector<std::pair<std::size_t, std::size_t>>{{0, 9}}),
      IndexOutOfRangeError);
}

TEST_CASE("property: computed partitions validate and are maximal-unique") {
  Rng rng(41);
  for (int i = 0; i < 120; ++i) {
    GeneratedNet gen = arbitrary_net(rng, 5, 5);
    const Net& net = gen.net;
    WorkClusterPartition computed = compute_work_clusters(net);
    CHECK(validate_partition(net, computed));

    // Maximality: any 2-split of a computed cluster is invalid.
    for (std::size_t c = 0; c < computed.clusters.size(); ++c) {
      const auto& cluster = computed.clusters[c];
      if (cluster.size() < 2) continue;
      const std::size_t n = cluster.size();
      for (std::size_t mask = 1; mask + 1 < (1u << n); mask += 2) {
        // Odd masks keep element 0 in the first part: each unordered
        // 2-split appears exactly once.
        std::vector<TransitionId> left, right;
        for (std::size_t j = 0; j < n; ++j) {
          ((mask >> j) & 1u ? left : right).push_back(cluster[j]);
        }
        if (right.empty()) continue;
        WorkClusterPartition split;
        for (std::size_t k = 0; k < computed.clusters.size(); ++k) {
          if (k == c) continue;
          split.clusters.push_back(computed.clusters[k]);
        }
        split.clusters.push_back(left);
        split.clusters.push_back(right);
        CHECK_FALSE(validate_partition(net, split));
      }
    }

    // Uniqueness: every valid partition coarsens the computed one, i.e.
    // each computed cluster sits inside a single block.
    for (const auto& blocks : all_partitions(net.transition_count())) {
      WorkClusterPartition candidate{blocks};
      if (!validate_partition(net, candidate)) continue;
      std::vector<std::size_t> block_of(net.transition_count());
      for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        for (TransitionId t : blocks[bi]) block_of[t] = bi;
      }
      for (const auto& cluster : computed.clusters) {
        for (TransitionId t : cluster) {
          CHECK(block_of[t] == block_of[cluster.front()]);
        }
      }
    }
  }
}

TEST_CASE("property: adding an arc can merge clusters but never split them") {
  Rng rng(43);
  for (int i = 0; i < 150; ++i) {
    GeneratedNet gen = arbitrary_net(rng, 5, 5);
    const Net& net = gen.net;
    WorkClusterPartition before = compute_work_clusters(net);

    // Rebuild the net with one extra input arc on a random AND transition.
    NetBuilder b(net.place_names(), net.color_names());
    const auto victim =
        static_cast<TransitionId>(pick(rng, 0, net.transition_count() - 1));
    bool changed = false;
    for (TransitionId t = 0; t < net.transition_count(); ++t) {
      const TransitionSpec& spec = net.transition(t);
      if (spec.kind() == TransitionKind::And) {
        AndPayload p = spec.and_payload();
        if (t == victim) {
          p.inputs.push_back(
              {static_cast<PlaceId>(pick(rng, 0, net.place_count() - 1)), 0,
               1});
          changed = true;
        }
        b.add_and(spec.name(), p.inputs, p.outputs);
      } else {
        b.add_xor(spec.name(), spec.xor_payload().pairs);
      }
    }
    if (!changed) continue;
    WorkClusterPartition after = compute_work_clusters(b.build());
    CHECK(after.clusters.size() <= before.clusters.size());

    // Refinement: each old cluster is contained in one new cluster.
    std::vector<std::size_t> new_cluster_of(net.transition_count());
    for (std::size_t c = 0; c < after.clusters.size(); ++c) {
      for (TransitionId t : after.clusters[c]) new_cluster_of[t] = c;
    }
    for (const auto& cluster : before.clusters) {
      for (TransitionId t : cluster) {
        CHECK(new_cluster_of[t] == new_cluster_of[cluster.front()]);
      }
    }
  }
}
