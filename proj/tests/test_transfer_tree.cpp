#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <slotlab/rng.hpp>
#include <slotlab/transfer_tree.hpp>

#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

using namespace slotlab;

namespace {

// Independent oracle: walk levels from the leaves upward and return the
// first node whose covered interval contains both times.
TreeNode lca_oracle(const TreeSpec& spec, uint64_t t1, uint64_t t2) {
  for (unsigned l = 0; l <= spec.height; ++l) {
    uint64_t w = spec.widths[l];
    uint64_t lo = (t1 / w) * w;
    uint64_t hi = lo + w;
    if (t2 >= lo && t2 < hi && t1 != t2) return TreeNode{l, t1 / w};
  }
  throw std::logic_error("oracle: no covering node");
}

std::vector<TraceRecord> make_records(
    const std::vector<std::pair<uint64_t, uint64_t>>& time_addr) {
  std::vector<TraceRecord> out;
  for (auto [t, a] : time_addr) out.push_back(TraceRecord{t, a, 'M'});
  return out;
}

}  // namespace

TEST_CASE("paper-scale widths for n=2^16, k=4, c=1") {
  TreeSpec spec = build_tree_spec(1 << 16, 4, 1.0);
  CHECK(!spec.binary_fallback);
  CHECK(spec.height == 4);
  REQUIRE(spec.widths.size() == 5);
  CHECK(spec.widths[0] == 1);
  CHECK(spec.widths[1] == 4096);
  CHECK(spec.widths[2] == 16384);
  CHECK(spec.widths[3] == 32768);
  CHECK(spec.widths[4] == 65536);
  REQUIRE(spec.raw_widths.size() == 4);
  CHECK(spec.raw_widths[0] == 4096);
  CHECK(spec.raw_widths[1] == 16384);
  CHECK(spec.raw_widths[2] == 32768);
  CHECK(spec.raw_widths[3] == 65536);
  REQUIRE(spec.branching.size() == 4);
  CHECK(spec.branching[0] == 4096);
  CHECK(spec.branching[1] == 4);
  CHECK(spec.branching[2] == 2);
  CHECK(spec.branching[3] == 2);
}

TEST_CASE("divisor chain holds for every built spec") {
  for (uint64_t n : {uint64_t(1) << 12, uint64_t(1) << 16, uint64_t(1) << 20}) {
    for (unsigned k = 1; k <= log_star(n); ++k) {
      TreeSpec spec = build_tree_spec(n, k, 1.0);
      REQUIRE(spec.widths.front() == 1);
      REQUIRE(spec.widths.back() == n);
      for (size_t l = 1; l < spec.widths.size(); ++l) {
        CHECK(spec.widths[l] % spec.widths[l - 1] == 0);
        CHECK(spec.widths[l] > spec.widths[l - 1]);
      }
    }
  }
}

TEST_CASE("binary fallback when the formula collapses") {
  // Small n: every k collapses to the uniform binary tree.
  TreeSpec spec = build_tree_spec(8, 2, 1.0);
  CHECK(spec.binary_fallback);
  CHECK(spec.height == 3);
  CHECK(spec.widths == std::vector<uint64_t>({1, 2, 4, 8}));
  CHECK(spec.branching == std::vector<uint64_t>({2, 2, 2}));

  // k = 1 makes level 1 already full-width; degenerate by construction.
  CHECK(build_tree_spec(1 << 16, 1, 1.0).binary_fallback);
  // The paper-sized constant pushes every width past n: degenerate too.
  CHECK(build_tree_spec(1 << 16, 4, 1e6).binary_fallback);
}

TEST_CASE("spec builder validation") {
  CHECK_THROWS_AS(build_tree_spec(1, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_tree_spec(1 << 16, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_tree_spec(1 << 16, 5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_tree_spec(1 << 16, 4, 0.0), std::invalid_argument);
  // c so small that no level qualifies: height would be 0.
  CHECK_THROWS_AS(build_tree_spec(1 << 16, 4, 0.2), std::invalid_argument);
  // Fallback needs a power of two.
  CHECK_THROWS_AS(build_tree_spec(24, 2, 1.0), std::invalid_argument);
}

TEST_CASE("geometric builder") {
  TreeSpec spec = build_tree_spec_geometric(64, 4, 4);
  CHECK(spec.widths == std::vector<uint64_t>({1, 4, 16, 64}));
  CHECK(spec.branching == std::vector<uint64_t>({4, 4, 4}));
  CHECK_THROWS_AS(build_tree_spec_geometric(64, 3, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_tree_spec_geometric(64, 4, 3), std::invalid_argument);
  CHECK_THROWS_AS(build_tree_spec_geometric(64, 4, 1), std::invalid_argument);
}

TEST_CASE("single address touched at 0,3,4 on the 8-leaf binary tree") {
  TreeSpec spec = build_tree_spec(8, 2, 1.0);
  auto recs = make_records({{0, 7}, {3, 7}, {4, 7}});
  TreeAccounting acc = account_trace(recs, spec);
  // (0,3) meet at level 2 node 0; (3,4) only at the root.
  CHECK(acc.cost[2].at(0) == 1);
  CHECK(acc.cost[3].at(0) == 1);
  CHECK(acc.total_cost() == 2);
  CHECK(acc.dedup_touches == 3);
  CHECK(acc.distinct_addresses == 1);
  // Raw probes partition at every level.
  for (unsigned l = 0; l <= spec.height; ++l) CHECK(acc.level_probe(l) == 3);
}

TEST_CASE("single touch and empty traces cost nothing") {
  TreeSpec spec = build_tree_spec(8, 2, 1.0);
  CHECK(account_trace(make_records({{5, 1}}), spec).total_cost() == 0);
  CHECK(account_trace({}, spec).total_cost() == 0);
  CHECK(account_trace({}, spec).raw_touches == 0);
}

TEST_CASE("duplicate touches within one meta-operation deduplicate") {
  TreeSpec spec = build_tree_spec(8, 2, 1.0);
  // Address 3 touched twice at t=1 and once at t=2: one pair, not two.
  TreeAccounting acc = account_trace(make_records({{1, 3}, {1, 3}, {2, 3}}), spec);
  CHECK(acc.total_cost() == 1);
  CHECK(acc.dedup_touches == 2);
  CHECK(acc.raw_touches == 3);
  // Probes stay raw: 3 per level.
  CHECK(acc.level_probe(0) == 3);
}

TEST_CASE("addresses accumulate independently") {
  TreeSpec spec = build_tree_spec(8, 2, 1.0);
  auto one = account_trace(make_records({{0, 7}, {3, 7}}), spec);
  auto two = account_trace(make_records({{1, 9}, {6, 9}}), spec);
  auto both =
      account_trace(make_records({{0, 7}, {3, 7}, {1, 9}, {6, 9}}), spec);
  CHECK(both.total_cost() == one.total_cost() + two.total_cost());
  for (unsigned l = 1; l <= spec.height; ++l)
    CHECK(both.level_cost(l) == one.level_cost(l) + two.level_cost(l));
}

TEST_CASE("lca matches the ancestor-walk oracle") {
  SplitMix64 rng(5150);
  std::vector<TreeSpec> specs = {
      build_tree_spec(8, 2, 1.0),
      build_tree_spec(64, 2, 1.0),
      build_tree_spec(1 << 16, 4, 1.0),
      build_tree_spec_geometric(64, 4, 4),
  };
  for (const auto& spec : specs) {
    for (int i = 0; i < 2000; ++i) {
      uint64_t t1 = rng.bounded(spec.n_leaves);
      uint64_t t2 = rng.bounded(spec.n_leaves);
      if (t1 == t2) continue;
      TreeNode got = tree_lca(spec, t1, t2);
      TreeNode want = lca_oracle(spec, t1, t2);
      CHECK(got == want);
    }
  }
}

TEST_CASE("conservation identity under fuzz") {
  SplitMix64 rng(9000);
  for (int round = 0; round < 200; ++round) {
    uint64_t leaves = uint64_t(8) << rng.bounded(4);  // 8..64
    TreeSpec spec = build_tree_spec(leaves, 2, 1.0);
    std::vector<TraceRecord> recs;
    uint64_t steps = rng.bounded(200);
    for (uint64_t s = 0; s < steps; ++s)
      recs.push_back(
          TraceRecord{rng.bounded(leaves), rng.bounded(16), 'M'});
    TreeAccounting acc = account_trace(recs, spec);

    // Independent recount of the identity terms.
    std::map<uint64_t, std::set<uint64_t>> by_addr;
    for (const auto& r : recs) by_addr[r.address].insert(r.time);
    uint64_t dedup = 0;
    for (const auto& [a, ts] : by_addr) dedup += ts.size();
    CHECK(acc.total_cost() == dedup - by_addr.size());
    CHECK(acc.dedup_touches == dedup);
    CHECK(acc.distinct_addresses == by_addr.size());
    for (unsigned l = 0; l <= spec.height; ++l)
      CHECK(acc.level_probe(l) == recs.size());
  }
}

TEST_CASE("trace times outside the leaf range are rejected") {
  TreeSpec spec = build_tree_spec(8, 2, 1.0);
  CHECK_THROWS_AS(account_trace(make_records({{8, 0}}), spec),
                  std::invalid_argument);
}

TEST_CASE("csv output shapes") {
  TreeSpec spec = build_tree_spec(8, 2, 1.0);
  TreeAccounting acc = account_trace(make_records({{0, 7}, {3, 7}, {4, 7}}), spec);
  std::ostringstream nodes;
  write_node_csv(acc, nodes);
  CHECK(nodes.str().rfind("level,node_index,cost,probe\n", 0) == 0);
  // Leaf rows carry the probes; the two cost nodes appear with theirs.
  CHECK(nodes.str().find("2,0,1,3") != std::string::npos);
  CHECK(nodes.str().find("3,0,1,3") != std::string::npos);

  auto rows = level_summary(acc);
  REQUIRE(rows.size() == spec.height);  // one row per internal level
  CHECK(rows[1].level == 2);
  CHECK(rows[1].sum_cost == 1);
  CHECK(rows[1].sum_probe == 3);
  CHECK(rows[1].mean_cost == doctest::Approx(0.5));  // 1 cost over 2 nodes
  std::ostringstream sum;
  write_summary_csv(rows, sum);
  CHECK(sum.str().rfind("level,sum_cost,sum_probe,mean_cost\n", 0) == 0);
}
