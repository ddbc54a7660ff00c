#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <slotlab/slot_model.hpp>

// Probe accounting over a balanced interval tree on the time axis.
//
// Leaves are meta-operation indices 0..n-1.  A node at level l covers
// widths[l] consecutive leaves.  Two charges are computed from a trace:
//
//   cost(u):  +1 at the lowest common ancestor of every pair of
//             consecutive touches of the same address (touches of one
//             address within one meta-operation are deduplicated first).
//             Summed over the tree this equals deduplicated touches minus
//             distinct addresses touched.
//
//   probe(u): the raw number of trace records whose time falls in u's
//             interval.  Every level partitions the leaves, so each
//             level's probe sum equals the total record count.

namespace slotlab {

struct TreeSpec {
  uint64_t n_leaves = 0;
  unsigned k = 0;       // wasted-bits parameter the widths were derived from
  double c = 1.0;       // width multiplier
  unsigned height = 0;  // h; widths has h+1 entries
  bool binary_fallback = false;
  // widths[0] = 1, widths[height] = n_leaves, each divides the next.
  std::vector<uint64_t> widths;
  // Formula values floor(c * n * log^(k) n / log^(l) n) before rounding
  // to the divisor chain; empty when the binary fallback was taken.
  std::vector<uint64_t> raw_widths;
  // branching[l] = widths[l] / widths[l-1] for l = 1..height.
  std::vector<uint64_t> branching;
};

// Widths m_l = c * n * log^(k) n / log^(l) n for l = 1..h, where h is the
// first level with log^(h) n <= c * log^(k) n; each width is rounded down
// so the chain 1 = m_0 | m_1 | ... | m_h = n holds.  When the formula
// collapses (h = 1, or some rounded width fails to grow), the spec falls
// back to a uniform binary tree, which requires n to be a power of two.
// Throws std::invalid_argument for n < 2, k outside 1..log*(n), c <= 0,
// or parameters that leave no valid height.
TreeSpec build_tree_spec(uint64_t n, unsigned k, double c = 1.0);

// Alternate geometric builder: level-1 width m1, branching factor lambda
// at every level above.  Meant for small lambda; at this library's scales
// the huge branching factors the asymptotic argument uses would make every
// tree a single root.  Requires m1 | n, lambda >= 2, and that the chain
// m1 * lambda^j lands exactly on n.
TreeSpec build_tree_spec_geometric(uint64_t n, uint64_t m1, uint64_t lambda);

struct TreeNode {
  unsigned level = 0;
  uint64_t index = 0;
  bool operator==(const TreeNode&) const = default;
};

// Lowest common ancestor of two distinct leaf times.
TreeNode tree_lca(const TreeSpec& spec, uint64_t t1, uint64_t t2);

struct TreeAccounting {
  TreeSpec spec;
  // cost[l] and probe[l] are sparse node-index maps for level l (0..height);
  // cost[0] is always empty since an LCA of distinct leaves is internal.
  std::vector<std::map<uint64_t, uint64_t>> cost;
  std::vector<std::map<uint64_t, uint64_t>> probe;
  uint64_t raw_touches = 0;
  uint64_t dedup_touches = 0;
  uint64_t distinct_addresses = 0;

  uint64_t total_cost() const;
  uint64_t level_cost(unsigned level) const;
  uint64_t level_probe(unsigned level) const;
};

// Runs both charges over the records.  Record kinds are ignored; times must
// be < spec.n_leaves.
TreeAccounting account_trace(const std::vector<TraceRecord>& records,
                             const TreeSpec& spec);

struct LevelSummaryRow {
  unsigned level = 0;
  uint64_t sum_cost = 0;
  uint64_t sum_probe = 0;
  double mean_cost = 0.0;  // sum_cost / number of nodes at this level
};

// One row per internal level 1..height.
std::vector<LevelSummaryRow> level_summary(const TreeAccounting& acc);

// CSV: "level,node_index,cost,probe", one row per node with a nonzero
// entry, levels ascending then node index ascending.
void write_node_csv(const TreeAccounting& acc, std::ostream& out);
// CSV: "level,sum_cost,sum_probe,mean_cost".
void write_summary_csv(const std::vector<LevelSummaryRow>& rows,
                       std::ostream& out);

}  // namespace slotlab
