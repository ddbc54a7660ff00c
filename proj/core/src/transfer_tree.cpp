#include <slotlab/transfer_tree.hpp>

#include <slotlab/mathkit.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace slotlab {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument("transfer_tree: " + msg);
}

bool is_power_of_two(uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

TreeSpec binary_fallback_spec(uint64_t n, unsigned k, double c) {
  if (!is_power_of_two(n))
    fail("binary fallback needs n to be a power of two, got " +
         std::to_string(n));
  TreeSpec spec;
  spec.n_leaves = n;
  spec.k = k;
  spec.c = c;
  spec.binary_fallback = true;
  for (uint64_t w = 1; w <= n; w *= 2) spec.widths.push_back(w);
  spec.height = unsigned(spec.widths.size() - 1);
  for (size_t l = 1; l < spec.widths.size(); ++l)
    spec.branching.push_back(spec.widths[l] / spec.widths[l - 1]);
  return spec;
}

void finish_spec(TreeSpec& spec) {
  spec.height = unsigned(spec.widths.size() - 1);
  spec.branching.clear();
  for (size_t l = 1; l < spec.widths.size(); ++l)
    spec.branching.push_back(spec.widths[l] / spec.widths[l - 1]);
}

}  // namespace

TreeSpec build_tree_spec(uint64_t n, unsigned k, double c) {
  if (n < 2) fail("n must be >= 2");
  if (c <= 0.0) fail("c must be positive");
  unsigned ls = log_star(n);
  if (k < 1 || k > ls)
    fail("k must be in 1..log*(n) = 1.." + std::to_string(ls) + ", got " +
         std::to_string(k));

  double target = c * iter_log(n, k);
  unsigned h = 0;
  for (unsigned l = 1; l <= ls; ++l) {
    if (iter_log(n, l) <= target) {
      h = l;
      break;
    }
  }
  if (h == 0)
    fail("no level satisfies log^(l) n <= c*log^(k) n; height would be 0 "
         "(n=" + std::to_string(n) + ", k=" + std::to_string(k) + ", c=" +
         std::to_string(c) + ")");
  if (h == 1) return binary_fallback_spec(n, k, c);

  TreeSpec spec;
  spec.n_leaves = n;
  spec.k = k;
  spec.c = c;
  spec.widths.push_back(1);
  for (unsigned l = 1; l <= h; ++l) {
    double formula = c * double(n) * iter_log(n, k) / iter_log(n, l);
    uint64_t raw = l == h ? n : uint64_t(std::min(std::floor(formula), double(n)));
    spec.raw_widths.push_back(raw);
    if (l == h) {
      spec.widths.push_back(n);
      break;
    }
    // Largest multiple of widths[l-1] that divides n and is <= raw.
    uint64_t prev = spec.widths.back();
    if (n % prev != 0) return binary_fallback_spec(n, k, c);
    uint64_t best = 0;
    for (uint64_t d = 1; d * d <= n / prev; ++d) {
      if ((n / prev) % d != 0) continue;
      for (uint64_t cand : {prev * d, prev * ((n / prev) / d)}) {
        if (cand <= raw && cand > best) best = cand;
      }
    }
    if (best <= prev) return binary_fallback_spec(n, k, c);
    spec.widths.push_back(best);
  }
  if (spec.widths.back() <= spec.widths[spec.widths.size() - 2])
    return binary_fallback_spec(n, k, c);
  finish_spec(spec);
  return spec;
}

TreeSpec build_tree_spec_geometric(uint64_t n, uint64_t m1, uint64_t lambda) {
  if (n < 2) fail("n must be >= 2");
  if (m1 < 1 || m1 > n || n % m1 != 0) fail("m1 must divide n");
  if (lambda < 2) fail("lambda must be >= 2");
  TreeSpec spec;
  spec.n_leaves = n;
  spec.widths.push_back(1);
  if (m1 > 1) spec.widths.push_back(m1);
  uint64_t w = m1;
  while (w < n) {
    if (w > n / lambda)
      fail("chain m1 * lambda^j does not land on n (reached " +
           std::to_string(w) + ")");
    w *= lambda;
    if (n % w != 0)
      fail("width " + std::to_string(w) + " does not divide n");
    spec.widths.push_back(w);
  }
  finish_spec(spec);
  return spec;
}

TreeNode tree_lca(const TreeSpec& spec, uint64_t t1, uint64_t t2) {
  if (t1 >= spec.n_leaves || t2 >= spec.n_leaves)
    fail("leaf time out of range");
  if (t1 == t2) fail("lca of a leaf with itself");
  for (unsigned l = 1; l <= spec.height; ++l) {
    uint64_t w = spec.widths[l];
    if (t1 / w == t2 / w) return TreeNode{l, t1 / w};
  }
  fail("widths do not cover the leaf range");  // unreachable: widths[h] = n
}

TreeAccounting account_trace(const std::vector<TraceRecord>& records,
                             const TreeSpec& spec) {
  TreeAccounting acc;
  acc.spec = spec;
  acc.cost.resize(spec.height + 1);
  acc.probe.resize(spec.height + 1);
  acc.raw_touches = records.size();

  std::unordered_map<uint64_t, std::set<uint64_t>> times_by_address;
  for (const auto& r : records) {
    if (r.time >= spec.n_leaves)
      fail("trace time " + std::to_string(r.time) +
           " outside tree with " + std::to_string(spec.n_leaves) + " leaves");
    for (unsigned l = 0; l <= spec.height; ++l)
      acc.probe[l][r.time / spec.widths[l]] += 1;
    times_by_address[r.address].insert(r.time);  // dedup within meta-op
  }

  acc.distinct_addresses = times_by_address.size();
  for (const auto& [addr, times] : times_by_address) {
    (void)addr;
    acc.dedup_touches += times.size();
    auto it = times.begin();
    uint64_t prev = *it++;
    for (; it != times.end(); ++it) {
      TreeNode u = tree_lca(spec, prev, *it);
      acc.cost[u.level][u.index] += 1;
      prev = *it;
    }
  }
  return acc;
}

uint64_t TreeAccounting::total_cost() const {
  uint64_t s = 0;
  for (const auto& level : cost)
    for (const auto& [idx, v] : level) s += v;
  return s;
}

uint64_t TreeAccounting::level_cost(unsigned level) const {
  uint64_t s = 0;
  for (const auto& [idx, v] : cost.at(level)) s += v;
  return s;
}

uint64_t TreeAccounting::level_probe(unsigned level) const {
  uint64_t s = 0;
  for (const auto& [idx, v] : probe.at(level)) s += v;
  return s;
}

std::vector<LevelSummaryRow> level_summary(const TreeAccounting& acc) {
  std::vector<LevelSummaryRow> rows;
  for (unsigned l = 1; l <= acc.spec.height; ++l) {
    LevelSummaryRow row;
    row.level = l;
    row.sum_cost = acc.level_cost(l);
    row.sum_probe = acc.level_probe(l);
    uint64_t nodes = acc.spec.n_leaves / acc.spec.widths[l];
    row.mean_cost = nodes ? double(row.sum_cost) / double(nodes) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

void write_node_csv(const TreeAccounting& acc, std::ostream& out) {
  out << "level,node_index,cost,probe\n";
  for (unsigned l = 0; l <= acc.spec.height; ++l) {
    // Union of node indices with nonzero cost or probe, ascending.
    auto ci = acc.cost[l].begin();
    auto pi = acc.probe[l].begin();
    while (ci != acc.cost[l].end() || pi != acc.probe[l].end()) {
      uint64_t idx;
      if (ci == acc.cost[l].end())
        idx = pi->first;
      else if (pi == acc.probe[l].end())
        idx = ci->first;
      else
        idx = std::min(ci->first, pi->first);
      uint64_t cv = 0, pv = 0;
      if (ci != acc.cost[l].end() && ci->first == idx) cv = (ci++)->second;
      if (pi != acc.probe[l].end() && pi->first == idx) pv = (pi++)->second;
      out << l << ',' << idx << ',' << cv << ',' << pv << '\n';
    }
  }
}

void write_summary_csv(const std::vector<LevelSummaryRow>& rows,
                       std::ostream& out) {
  out << "level,sum_cost,sum_probe,mean_cost\n";
  for (const auto& r : rows)
    out << r.level << ',' << r.sum_cost << ',' << r.sum_probe << ','
        << r.mean_cost << '\n';
}

}  // namespace slotlab
