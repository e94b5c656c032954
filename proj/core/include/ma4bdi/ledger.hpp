#pragma once
// Condition-keyed source reliability ledger. Entries live at
// (source_id, condition); the Condition::unknown row of a source doubles as
// its unconditioned entry and is the fallback when no conditional entry
// matches. Every index stays inside [floor, cap].

#include <map>
#include <string>
#include <utility>

#include "ma4bdi/types.hpp"

namespace ma4bdi {

class ReliabilityLedger {
 public:
  using Key = std::pair<std::string, Condition>;
  using EntryMap = std::map<Key, double>;

  ReliabilityLedger() = default;
  ReliabilityLedger(double floor, double cap, double delta);

  double floor() const { return floor_; }
  double cap() const { return cap_; }
  double delta() const { return delta_; }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const EntryMap& entries() const { return entries_; }

  // Seeds or overwrites one entry; the value must lie in [floor, cap].
  void set(const std::string& source_id, Condition cond, double index);

  bool contains(const std::string& source_id, Condition cond) const;

  // Conditional entry if present, else the source's unconditioned entry;
  // unknown-source when neither exists.
  double lookup(const std::string& source_id, Condition cond) const;

  // The entry key lookup() would read for (source_id, cond).
  Key resolve_key(const std::string& source_id, Condition cond) const;

  // +delta when the source agreed with the fused outcome, -delta otherwise,
  // clamped to [floor, cap]. Returns the key that was touched.
  Key apply_outcome(const std::string& source_id, Condition cond, bool agreed);

  bool operator==(const ReliabilityLedger&) const = default;

 private:
  double floor_ = 0.0;
  double cap_ = 0.30;
  double delta_ = 0.05;
  EntryMap entries_;
};

}  // namespace ma4bdi
