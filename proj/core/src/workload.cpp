#include <slotlab/workload.hpp>

#include <slotlab/rng.hpp>

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace slotlab {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument("workload: " + msg);
}

// Uniform n-subset of [0, universe) as a random-order sequence, via a
// partial Fisher-Yates shuffle over a sparse permutation map.
std::vector<uint64_t> sample_subset(uint64_t n, uint64_t universe,
                                    SplitMix64& rng) {
  std::unordered_map<uint64_t, uint64_t> perm;
  auto at = [&](uint64_t i) {
    auto it = perm.find(i);
    return it == perm.end() ? i : it->second;
  };
  std::vector<uint64_t> out;
  out.reserve(n);
  for (uint64_t i = 0; i < n; ++i) {
    uint64_t j = i + rng.bounded(universe - i);
    uint64_t picked = at(j);
    perm[j] = at(i);
    out.push_back(picked);
  }
  return out;
}

}  // namespace

OperationSequence generate_workload(uint64_t n, uint64_t universe,
                                    uint64_t seed, bool include_queries,
                                    std::optional<uint64_t> value_universe) {
  if (n < 1) fail("n must be >= 1");
  if (universe < 3 * n)
    fail("universe " + std::to_string(universe) + " below 3n = " +
         std::to_string(3 * n));
  if (value_universe && *value_universe == 0)
    fail("value universe must be >= 1 when present");

  OperationSequence seq;
  seq.n = n;
  seq.universe = universe;
  seq.value_universe = value_universe;
  seq.seed = seed;
  seq.include_queries = include_queries;
  seq.ops.reserve(n + (include_queries ? 3 : 2) * n);
  seq.meta_boundaries.reserve(n);

  SplitMix64 rng(seed);
  auto draw_value = [&]() -> std::optional<uint64_t> {
    if (!value_universe) return std::nullopt;
    return rng.bounded(*value_universe);
  };

  std::vector<uint64_t> initial = sample_subset(n, universe, rng);
  std::unordered_set<uint64_t> in_k(initial.begin(), initial.end());
  for (uint64_t k : initial) {
    auto v = draw_value();
    seq.ops.push_back(Operation{OpKind::kInsert, k, v});
  }

  // remaining = not-yet-deleted members of K; added = keys inserted since.
  std::vector<uint64_t> remaining = initial;
  std::unordered_set<uint64_t> added;
  for (uint64_t i = 0; i < n; ++i) {
    seq.meta_boundaries.push_back(seq.ops.size());

    uint64_t idx = rng.bounded(remaining.size());
    uint64_t d = remaining[idx];
    remaining[idx] = remaining.back();
    remaining.pop_back();
    if (include_queries)
      seq.ops.push_back(Operation{OpKind::kQuery, d, std::nullopt});
    seq.ops.push_back(Operation{OpKind::kDelete, d, std::nullopt});

    uint64_t a;
    do {
      a = rng.bounded(universe);
    } while (in_k.count(a) || added.count(a));
    added.insert(a);
    auto v = draw_value();
    seq.ops.push_back(Operation{OpKind::kInsert, a, v});
  }
  return seq;
}

void write_op_stream(const OperationSequence& seq, std::ostream& out) {
  unsigned flags = (seq.include_queries ? 1u : 0u) |
                   (seq.value_universe ? 2u : 0u);
  out << seq.n << ' ' << seq.universe << ' '
      << (seq.value_universe ? *seq.value_universe : 0) << ' ' << seq.seed
      << ' ' << flags << '\n';
  for (const auto& op : seq.ops) {
    switch (op.kind) {
      case OpKind::kInsert:
        out << 'I' << ' ' << op.key;
        if (op.value) out << ' ' << *op.value;
        out << '\n';
        break;
      case OpKind::kDelete:
        out << 'D' << ' ' << op.key << '\n';
        break;
      case OpKind::kQuery:
        out << 'Q' << ' ' << op.key << '\n';
        break;
    }
  }
}

void write_op_stream_file(const OperationSequence& seq,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("workload: cannot open " + path);
  write_op_stream(seq, out);
  if (!out) throw std::runtime_error("workload: write failed for " + path);
}

namespace {

[[noreturn]] void parse_fail(size_t line, const std::string& what) {
  throw std::runtime_error("workload: op-stream parse error at line " +
                           std::to_string(line) + ": " + what);
}

}  // namespace

OperationSequence read_op_stream(std::istream& in) {
  OperationSequence seq;
  std::string line;
  size_t lineno = 0;

  if (!std::getline(in, line)) parse_fail(1, "missing header");
  ++lineno;
  uint64_t v = 0;
  unsigned flags = 0;
  {
    std::istringstream h(line);
    if (!(h >> seq.n >> seq.universe >> v >> seq.seed >> flags))
      parse_fail(lineno, "header must be 'n U V seed flags'");
  }
  seq.include_queries = (flags & 1u) != 0;
  bool has_values = (flags & 2u) != 0;
  if (has_values) {
    if (v == 0) parse_fail(lineno, "value flag set but V = 0");
    seq.value_universe = v;
  }

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream rec(line);
    char kind = 0;
    Operation op;
    if (!(rec >> kind >> op.key))
      parse_fail(lineno, "record must be 'I|D|Q key [value]'");
    switch (kind) {
      case 'I': {
        op.kind = OpKind::kInsert;
        if (has_values) {
          uint64_t val = 0;
          if (!(rec >> val)) parse_fail(lineno, "insert is missing its value");
          op.value = val;
        }
        break;
      }
      case 'D':
        op.kind = OpKind::kDelete;
        break;
      case 'Q':
        op.kind = OpKind::kQuery;
        break;
      default:
        parse_fail(lineno, std::string("unknown op '") + kind + "'");
    }
    seq.ops.push_back(op);
  }

  // A meta-operation starts at each query, or at each delete when the
  // stream carries no queries.
  OpKind lead = seq.include_queries ? OpKind::kQuery : OpKind::kDelete;
  for (size_t i = 0; i < seq.ops.size(); ++i)
    if (seq.ops[i].kind == lead) seq.meta_boundaries.push_back(i);
  return seq;
}

OperationSequence read_op_stream_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("workload: cannot open " + path);
  return read_op_stream(in);
}

}  // namespace slotlab
