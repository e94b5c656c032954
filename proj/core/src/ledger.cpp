#include "ma4bdi/ledger.hpp"

#include <algorithm>

#include "ma4bdi/error.hpp"
#include "ma4bdi/textio.hpp"

namespace ma4bdi {

ReliabilityLedger::ReliabilityLedger(double floor, double cap, double delta)
    : floor_(floor), cap_(cap), delta_(delta) {
  if (!(floor >= 0.0) || !(cap <= 1.0) || !(floor <= cap) || !(delta > 0.0)) {
    throw Error(ErrorKind::bad_config,
                "ledger bounds must satisfy 0 <= floor <= cap <= 1 and delta > 0, got floor=" +
                    textio::fmt_double(floor) + " cap=" + textio::fmt_double(cap) +
                    " delta=" + textio::fmt_double(delta));
  }
}

void ReliabilityLedger::set(const std::string& source_id, Condition cond, double index) {
  if (!(index >= floor_ && index <= cap_)) {
    throw Error(ErrorKind::out_of_range_field,
                "reliability index " + textio::fmt_double(index) + " for " + source_id +
                    "/" + to_string(cond) + " outside [" + textio::fmt_double(floor_) +
                    ", " + textio::fmt_double(cap_) + "]");
  }
  entries_[Key{source_id, cond}] = index;
}

bool ReliabilityLedger::contains(const std::string& source_id, Condition cond) const {
  return entries_.count(Key{source_id, cond}) > 0 ||
         entries_.count(Key{source_id, Condition::unknown}) > 0;
}

double ReliabilityLedger::lookup(const std::string& source_id, Condition cond) const {
  return entries_.at(resolve_key(source_id, cond));
}

ReliabilityLedger::Key ReliabilityLedger::resolve_key(const std::string& source_id,
                                                      Condition cond) const {
  if (auto it = entries_.find(Key{source_id, cond}); it != entries_.end()) {
    return it->first;
  }
  if (auto it = entries_.find(Key{source_id, Condition::unknown}); it != entries_.end()) {
    return it->first;
  }
  throw Error(ErrorKind::unknown_source,
              "no ledger entry for source '" + source_id + "' under condition " +
                  to_string(cond) + " (and no unconditioned entry)");
}

ReliabilityLedger::Key ReliabilityLedger::apply_outcome(const std::string& source_id,
                                                        Condition cond, bool agreed) {
  Key key = resolve_key(source_id, cond);
  double& value = entries_.at(key);
  value = std::clamp(value + (agreed ? delta_ : -delta_), floor_, cap_);
  return key;
}

}  // namespace ma4bdi
