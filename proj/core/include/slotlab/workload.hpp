#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

// The hard workload: a random resident set followed by paired displacements.
//
// generate(n, U, seed) draws a uniform n-subset K of [0, U), inserts it, and
// then runs n meta-operations.  Meta-operation i picks d_i uniformly from
// the still-resident members of K, queries it (optional), deletes it, then
// inserts a_i drawn uniformly from the keys of [0, U) that are neither in K
// nor currently resident.  The dictionary therefore always holds exactly n
// keys at meta-operation boundaries.  Requires U >= 3n so rejection sampling
// for a_i has at least a third of the universe to hit.
//
// With a value universe V attached, every insert carries an independent
// uniform value from [0, V).
//
// All randomness comes from SplitMix64 seeded with `seed`; for a fixed
// parameter tuple the byte stream of the serialized sequence is identical
// on every platform.

namespace slotlab {

enum class OpKind : uint8_t { kInsert, kDelete, kQuery };

struct Operation {
  OpKind kind = OpKind::kInsert;
  uint64_t key = 0;
  std::optional<uint64_t> value;
};

struct OperationSequence {
  uint64_t n = 0;
  uint64_t universe = 0;
  std::optional<uint64_t> value_universe;
  uint64_t seed = 0;
  bool include_queries = true;
  std::vector<Operation> ops;
  // ops index of the first operation of each meta-operation; size n.
  // Everything before meta_boundaries[0] is the initial build phase.
  std::vector<size_t> meta_boundaries;
};

OperationSequence generate_workload(
    uint64_t n, uint64_t universe, uint64_t seed, bool include_queries = true,
    std::optional<uint64_t> value_universe = std::nullopt);

// ---- Op-stream files ----
// Line 1:  n U V seed flags     (V = 0 when no values; flags bit0 = queries
//                                included, bit1 = values attached)
// Then one op per line:  "I key [value]" | "D key" | "Q key".
void write_op_stream(const OperationSequence& seq, std::ostream& out);
void write_op_stream_file(const OperationSequence& seq, const std::string& path);
// Re-derives meta boundaries from the op pattern.  Throws std::runtime_error
// naming the line on malformed input.
OperationSequence read_op_stream(std::istream& in);
OperationSequence read_op_stream_file(const std::string& path);

}  // namespace slotlab
