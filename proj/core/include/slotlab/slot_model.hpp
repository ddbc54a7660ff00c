#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

// The two cost models everything else is measured in.
//
// SlotArray: n atomic key slots.  Moving a key between slots costs one
// move-unit; reading slots is free.  Every move is charged to move_count and
// leaves departure/arrival entries in an append-only access trace.
//
// CellMemory: N cells of w bits.  Every read or write costs one probe and is
// recorded in a probe trace.
//
// Both structures are single-writer; traces only grow and their timestamps
// never decrease.

namespace slotlab {

// One slot touch.  arrival marks the slot that received a key, so that
// move_count == number of arrival entries holds for any operation mix
// (a swap records one arrival, a plain move one, an eviction none).
struct SlotTouch {
  uint64_t time = 0;
  uint32_t slot = 0;
  bool arrival = false;
};

struct AccessTrace {
  std::vector<SlotTouch> entries;
};

struct SlotEntry {
  uint64_t key = 0;
  uint64_t value = 0;
};

// A single relocation inside a batch rearrangement.
struct SlotRelocation {
  uint32_t from = 0;
  uint32_t to = 0;
};

class SlotArray {
 public:
  // capacity >= 1 slots, all initially empty.
  explicit SlotArray(uint32_t capacity);

  uint32_t capacity() const { return uint32_t(slots_.size()); }
  uint64_t move_count() const { return move_count_; }
  const AccessTrace& trace() const { return trace_; }
  uint64_t stored_count() const { return uint64_t(by_key_.size()); }

  bool occupied(uint32_t slot) const;
  // Reading slots is free and untraced.
  const SlotEntry& read(uint32_t slot) const;
  // Slot currently holding key, if any.  Free lookup for validation and
  // tests; dictionaries implement their own search over slot reads.
  std::optional<uint32_t> find_key(uint64_t key) const;

  // Move the key in `from` to the empty slot `to`.  One move-unit; traces
  // departure at `from` and arrival at `to`.
  void slot_move(uint32_t from, uint32_t to, uint64_t time);

  // Exchange the keys of two occupied slots.  One move-unit; both slots are
  // traced once (`b` as the arrival).
  void slot_swap(uint32_t a, uint32_t b, uint64_t time);

  // Bring a key from outside into an empty slot.  One move-unit.
  void slot_place(uint64_t key, uint32_t slot, uint64_t time);
  void slot_place(uint64_t key, uint64_t value, uint32_t slot, uint64_t time);

  // Remove the key in `slot` from the array.  Free; the slot is traced.
  void slot_evict(uint32_t slot, uint64_t time);

  // Apply a set of relocations as one rearrangement: all sources are read
  // first, then written to their targets.  Sources must be occupied and
  // distinct, targets distinct, and every target either empty or also a
  // source.  Each relocation (from != to required) costs one move-unit and
  // traces both slots.
  void rearrange(const std::vector<SlotRelocation>& moves, uint64_t time);

 private:
  void check_slot(uint32_t slot) const;
  void bump_time(uint64_t time);
  void touch(uint64_t time, uint32_t slot, bool arrival);

  std::vector<std::optional<SlotEntry>> slots_;
  std::unordered_map<uint64_t, uint32_t> by_key_;
  uint64_t move_count_ = 0;
  uint64_t last_time_ = 0;
  AccessTrace trace_;
};

enum class ProbeKind : uint8_t { kRead, kWrite };

// One cell access.  `value` keeps the written word (0 for reads) so that a
// trace replay can rebuild the final memory image; it is not part of the
// on-disk format.
struct ProbeRecord {
  uint64_t time = 0;
  uint64_t cell = 0;
  ProbeKind kind = ProbeKind::kRead;
  uint64_t value = 0;
};

struct ProbeTrace {
  std::vector<ProbeRecord> entries;
};

class CellMemory {
 public:
  // cell_count cells of word_bits bits each (1..64), zero-initialized.
  CellMemory(uint64_t cell_count, unsigned word_bits);

  // Memory sized for a dictionary: N = ceil((log2 C(universe, n) +
  // redundancy_bits) / w), with w defaulting to ceil(log2 universe).
  static CellMemory for_dictionary(uint64_t universe, uint64_t n,
                                   uint64_t redundancy_bits,
                                   unsigned word_bits = 0);

  uint64_t cell_count() const { return cells_.size(); }
  unsigned word_bits() const { return word_bits_; }
  uint64_t probe_count() const { return trace_.entries.size(); }
  const ProbeTrace& trace() const { return trace_; }

  uint64_t mem_read(uint64_t cell, uint64_t time);
  void mem_write(uint64_t cell, uint64_t value, uint64_t time);

 private:
  std::vector<uint64_t> cells_;
  unsigned word_bits_;
  uint64_t last_time_ = 0;
  ProbeTrace trace_;
};

// ---- Trace files ----
// One line format for both trace kinds:
//   header:  n <TAB> N <TAB> w      (slot count, cell count, word bits)
//   record:  time <TAB> address <TAB> kind
// kind is M for slot moves, R/W for cell probes.  A slot trace has N = w = 0;
// a probe trace has n = 0.

struct TraceRecord {
  uint64_t time = 0;
  uint64_t address = 0;
  char kind = 'M';
};

struct TraceFile {
  uint64_t n = 0;        // slot count (slot traces)
  uint64_t cells = 0;    // cell count (probe traces)
  unsigned word_bits = 0;
  std::vector<TraceRecord> records;
};

TraceFile to_trace_file(const AccessTrace& t, uint32_t slot_count,
                        size_t first_entry = 0);
TraceFile to_trace_file(const ProbeTrace& t, uint64_t cell_count,
                        unsigned word_bits, size_t first_entry = 0);

void write_trace(const TraceFile& t, std::ostream& out);
void write_trace_file(const TraceFile& t, const std::string& path);
// Throws std::runtime_error naming the offending line on malformed input.
TraceFile read_trace(std::istream& in);
TraceFile read_trace_file(const std::string& path);

}  // namespace slotlab
