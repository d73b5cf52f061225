#pragma once

#include <string>
#include <utility>
#include <vector>

#include "evs/event_set.hpp"
#include "evs/universe.hpp"

namespace evs {

/// An (a, b) relation entry as written in a source document.
struct RawPair {
  std::string first;
  std::string second;
  int line = 0;
};

/// Unvalidated input for a binary-conflict event structure: `first < second` for
/// causes, `first # second` for conflicts.
struct RawPrime {
  std::string name = "es";
  std::vector<std::string> events;
  std::vector<RawPair> causes;
  std::vector<RawPair> conflicts;
  bool truncated = false;
};

/// Event structure with a causality partial order and a binary, symmetric, irreflexive,
/// inherited conflict relation. Both relations are stored closed.
class PrimeES {
 public:
  PrimeES() = default;

  const std::string& name() const { return name_; }
  const EventUniverse& universe() const { return universe_; }
  std::size_t size() const { return universe_.size(); }
  EventSet all() const { return universe_.all(); }
  const std::string& event_name(EventId e) const { return universe_.name(e); }
  EventId id(std::string_view name) const { return universe_.id(name); }

  /// Strict causes of `e`.
  EventSet causes(EventId e) const { return causes_[e]; }
  /// Down-closure ⌈e⌉, including `e`.
  EventSet history(EventId e) const { return causes_[e] | EventSet::singleton(e); }
  EventSet history(EventSet x) const;
  EventSet conflicts(EventId e) const { return conflicts_[e]; }
  bool precedes(EventId a, EventId b) const { return causes_[b].contains(a); }
  bool in_conflict(EventId a, EventId b) const { return conflicts_[a].contains(b); }

  bool is_prefix(EventSet x) const { return history(x) == x; }
  bool conflict_free(EventSet x) const;
  bool is_configuration(EventSet x) const { return is_prefix(x) && conflict_free(x); }

  /// Set when the structure is a truncated unfolding prefix.
  bool truncated() const { return truncated_; }
  void set_truncated(bool t) { truncated_ = t; }

  /// Sub-structure on `keep` with restricted relations.
  PrimeES restrict_to(EventSet keep, std::string name) const;

  bool operator==(const PrimeES&) const = default;

 private:
  friend PrimeES make_prime(std::string name, EventUniverse u, std::vector<EventSet> causes,
                            std::vector<EventSet> conflicts);

  std::string name_;
  EventUniverse universe_;
  std::vector<EventSet> causes_;
  std::vector<EventSet> conflicts_;
  bool truncated_ = false;
};

struct PrimeValidation {
  PrimeES es;
  /// Causality pairs (a, b) meaning a < b, added by transitive closure.
  std::vector<std::pair<EventId, EventId>> added_causality;
  /// Conflict pairs added by symmetry or inheritance, each listed once with first < second.
  std::vector<std::pair<EventId, EventId>> added_conflicts;
};

/// Normalizes raw input. Throws Error on unknown ids, causality cycles and self-conflict
/// (including self-conflict produced by inheritance).
PrimeValidation validate_prime(const RawPrime& raw);

/// Builds a structure from already-closed relations; validates like validate_prime.
PrimeES make_prime(std::string name, EventUniverse u, std::vector<EventSet> causes,
                   std::vector<EventSet> conflicts);

/// All configurations in canonical order.
std::vector<EventSet> configurations(const PrimeES& es);

/// The ⊆-maximal configurations, canonical order.
std::vector<EventSet> maximal_configurations(const PrimeES& es);

/// Future of `v`: events e ∉ v with ⌈e⌉ ∪ v a configuration. Throws if v is not a configuration.
PrimeES future(const PrimeES& es, EventSet v);

/// e #μ e': the only conflicting pair in ⌈e⌉ × ⌈e'⌉ is (e, e').
bool immediate_conflict(const PrimeES& es, EventId e, EventId f);

/// Immediate-conflict partners of every event.
std::vector<EventSet> immediate_conflicts(const PrimeES& es);

/// Events without strict causes.
EventSet initial_events(const PrimeES& es);

/// Covering pairs of the causality order (Hasse diagram), as (cause, effect).
std::vector<std::pair<EventId, EventId>> causality_cover(const PrimeES& es);

}  // namespace evs
