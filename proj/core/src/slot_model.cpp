#include <slotlab/slot_model.hpp>

#include <slotlab/mathkit.hpp>

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace slotlab {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument("slot_model: " + msg);
}

}  // namespace

SlotArray::SlotArray(uint32_t capacity) : slots_(capacity) {
  if (capacity == 0) fail("capacity must be >= 1");
}

void SlotArray::check_slot(uint32_t slot) const {
  if (slot >= slots_.size())
    throw std::out_of_range("slot_model: slot " + std::to_string(slot) +
                            " out of range (capacity " +
                            std::to_string(slots_.size()) + ")");
}

void SlotArray::bump_time(uint64_t time) {
  if (time < last_time_)
    fail("time " + std::to_string(time) + " precedes last recorded time " +
         std::to_string(last_time_));
  last_time_ = time;
}

void SlotArray::touch(uint64_t time, uint32_t slot, bool arrival) {
  trace_.entries.push_back(SlotTouch{time, slot, arrival});
}

bool SlotArray::occupied(uint32_t slot) const {
  check_slot(slot);
  return slots_[slot].has_value();
}

const SlotEntry& SlotArray::read(uint32_t slot) const {
  check_slot(slot);
  if (!slots_[slot]) fail("read of empty slot " + std::to_string(slot));
  return *slots_[slot];
}

std::optional<uint32_t> SlotArray::find_key(uint64_t key) const {
  auto it = by_key_.find(key);
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

void SlotArray::slot_move(uint32_t from, uint32_t to, uint64_t time) {
  check_slot(from);
  check_slot(to);
  if (!slots_[from]) fail("move from empty slot " + std::to_string(from));
  if (slots_[to]) fail("move to occupied slot " + std::to_string(to));
  bump_time(time);
  slots_[to] = slots_[from];
  slots_[from].reset();
  by_key_[slots_[to]->key] = to;
  ++move_count_;
  touch(time, from, false);
  touch(time, to, true);
}

void SlotArray::slot_swap(uint32_t a, uint32_t b, uint64_t time) {
  check_slot(a);
  check_slot(b);
  if (a == b) fail("swap of a slot with itself");
  if (!slots_[a] || !slots_[b]) fail("swap requires both slots occupied");
  bump_time(time);
  std::swap(slots_[a], slots_[b]);
  by_key_[slots_[a]->key] = a;
  by_key_[slots_[b]->key] = b;
  ++move_count_;
  touch(time, a, false);
  touch(time, b, true);
}

void SlotArray::slot_place(uint64_t key, uint32_t slot, uint64_t time) {
  slot_place(key, 0, slot, time);
}

void SlotArray::slot_place(uint64_t key, uint64_t value, uint32_t slot,
                           uint64_t time) {
  check_slot(slot);
  if (slots_[slot]) fail("place into occupied slot " + std::to_string(slot));
  if (by_key_.count(key)) fail("place of duplicate key " + std::to_string(key));
  bump_time(time);
  slots_[slot] = SlotEntry{key, value};
  by_key_[key] = slot;
  ++move_count_;
  touch(time, slot, true);
}

void SlotArray::slot_evict(uint32_t slot, uint64_t time) {
  check_slot(slot);
  if (!slots_[slot]) fail("evict of empty slot " + std::to_string(slot));
  bump_time(time);
  by_key_.erase(slots_[slot]->key);
  slots_[slot].reset();
  touch(time, slot, false);
}

void SlotArray::rearrange(const std::vector<SlotRelocation>& moves,
                          uint64_t time) {
  std::set<uint32_t> sources, targets;
  for (const auto& m : moves) {
    check_slot(m.from);
    check_slot(m.to);
    if (m.from == m.to) fail("rearrange relocation with from == to");
    if (!slots_[m.from])
      fail("rearrange source slot " + std::to_string(m.from) + " is empty");
    if (!sources.insert(m.from).second) fail("rearrange duplicate source");
    if (!targets.insert(m.to).second) fail("rearrange duplicate target");
  }
  for (const auto& m : moves) {
    if (slots_[m.to] && !sources.count(m.to))
      fail("rearrange target slot " + std::to_string(m.to) +
           " occupied and not part of the rearrangement");
  }
  bump_time(time);

  // Read all sources first, then rewrite: order inside the batch is free.
  std::vector<SlotEntry> carried;
  carried.reserve(moves.size());
  for (const auto& m : moves) carried.push_back(*slots_[m.from]);
  for (const auto& m : moves) slots_[m.from].reset();
  for (size_t i = 0; i < moves.size(); ++i) {
    slots_[moves[i].to] = carried[i];
    by_key_[carried[i].key] = moves[i].to;
  }
  move_count_ += moves.size();
  for (const auto& m : moves) {
    touch(time, m.from, false);
    touch(time, m.to, true);
  }
}

CellMemory::CellMemory(uint64_t cell_count, unsigned word_bits)
    : cells_(cell_count, 0), word_bits_(word_bits) {
  if (word_bits < 1 || word_bits > 64) fail("word_bits must be in 1..64");
}

CellMemory CellMemory::for_dictionary(uint64_t universe, uint64_t n,
                                      uint64_t redundancy_bits,
                                      unsigned word_bits) {
  if (n > universe) fail("dictionary capacity exceeds universe");
  unsigned w = word_bits ? word_bits : std::max(1u, ceil_log2_u64(universe));
  double bits = log_binomial(universe, n) + double(redundancy_bits);
  uint64_t cells = uint64_t(std::ceil(bits / double(w)));
  return CellMemory(std::max<uint64_t>(cells, 1), w);
}

uint64_t CellMemory::mem_read(uint64_t cell, uint64_t time) {
  if (cell >= cells_.size())
    throw std::out_of_range("slot_model: cell out of range");
  if (time < last_time_) fail("time precedes last recorded time");
  last_time_ = time;
  trace_.entries.push_back(ProbeRecord{time, cell, ProbeKind::kRead, 0});
  return cells_[cell];
}

void CellMemory::mem_write(uint64_t cell, uint64_t value, uint64_t time) {
  if (cell >= cells_.size())
    throw std::out_of_range("slot_model: cell out of range");
  uint64_t mask = word_bits_ == 64 ? ~uint64_t(0)
                                   : ((uint64_t(1) << word_bits_) - 1);
  if (value & ~mask)
    fail("value " + std::to_string(value) + " exceeds " +
         std::to_string(word_bits_) + "-bit word");
  if (time < last_time_) fail("time precedes last recorded time");
  last_time_ = time;
  cells_[cell] = value;
  trace_.entries.push_back(ProbeRecord{time, cell, ProbeKind::kWrite, value});
}

TraceFile to_trace_file(const AccessTrace& t, uint32_t slot_count,
                        size_t first_entry) {
  TraceFile out;
  out.n = slot_count;
  for (size_t i = first_entry; i < t.entries.size(); ++i)
    out.records.push_back(
        TraceRecord{t.entries[i].time, t.entries[i].slot, 'M'});
  return out;
}

TraceFile to_trace_file(const ProbeTrace& t, uint64_t cell_count,
                        unsigned word_bits, size_t first_entry) {
  TraceFile out;
  out.cells = cell_count;
  out.word_bits = word_bits;
  for (size_t i = first_entry; i < t.entries.size(); ++i)
    out.records.push_back(
        TraceRecord{t.entries[i].time, t.entries[i].cell,
                    t.entries[i].kind == ProbeKind::kRead ? 'R' : 'W'});
  return out;
}

void write_trace(const TraceFile& t, std::ostream& out) {
  out << t.n << '\t' << t.cells << '\t' << t.word_bits << '\n';
  for (const auto& r : t.records)
    out << r.time << '\t' << r.address << '\t' << r.kind << '\n';
}

void write_trace_file(const TraceFile& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("slot_model: cannot open " + path);
  write_trace(t, out);
  if (!out) throw std::runtime_error("slot_model: write failed for " + path);
}

namespace {

[[noreturn]] void parse_fail(size_t line, const std::string& what) {
  throw std::runtime_error("slot_model: trace parse error at line " +
                           std::to_string(line) + ": " + what);
}

}  // namespace

TraceFile read_trace(std::istream& in) {
  TraceFile out;
  std::string line;
  size_t lineno = 0;

  if (!std::getline(in, line)) parse_fail(1, "missing header");
  ++lineno;
  {
    std::istringstream h(line);
    if (!(h >> out.n >> out.cells >> out.word_bits))
      parse_fail(lineno, "header must be 'n N w'");
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream rec(line);
    TraceRecord r;
    if (!(rec >> r.time >> r.address >> r.kind))
      parse_fail(lineno, "record must be 'time address kind'");
    if (r.kind != 'M' && r.kind != 'R' && r.kind != 'W')
      parse_fail(lineno, std::string("unknown kind '") + r.kind + "'");
    out.records.push_back(r);
  }
  return out;
}

TraceFile read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("slot_model: cannot open " + path);
  return read_trace(in);
}

}  // namespace slotlab
