#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evs/prime_es.hpp"
#include "evs/stable_es.hpp"

namespace evs {

/// Partial event map between two structures. `map[e]` is the image of source event e.
struct Morphism {
  EventUniverse source;
  EventUniverse target;
  std::vector<std::optional<EventId>> map;

  bool total() const;
  /// Image of a set; undefined events are dropped.
  EventSet apply(EventSet x) const;
};

Morphism identity_morphism(const EventUniverse& u);

/// Configuration-level morphism test: every configuration of `source` is mapped injectively
/// onto a configuration of `target`.
bool is_morphism(const StableES& source, const StableES& target, const Morphism& f);

/// Θ of a stable structure: one event per distinct local history, ordered by inclusion,
/// with jointly compatible histories consistent. Events are named "e@{history}".
struct ThetaResult {
  /// Represented as a stable structure whose single rule per event is its set of strict
  /// predecessors; forbidden sets are the minimal incompatible history sets.
  StableES pes;
  /// Per event of `pes`: the history it stands for, as a set of source events.
  std::vector<EventSet> histories;
  /// The counit, mapping each history to its top event.
  Morphism counit;
};

ThetaResult theta(const StableES& ses);

/// Canonical name of the Θ event for history `h` with top `e`.
std::string history_name(const EventUniverse& u, EventId e, EventSet h);

struct GenerableReport {
  bool generable = true;
  /// p # p' iff {p, p'} is inconsistent, as partner sets over `pes` events.
  std::vector<EventSet> conflict;
  /// Smallest inconsistent set that is pairwise consistent, when not generable.
  std::optional<EventSet> witness;
};

GenerableReport binary_conflict_generable(const ThetaResult& t);

struct AssociatedES {
  PrimeES es;
  /// θ̃: each event of `es` to the source event it represents.
  Morphism map;
  ThetaResult theta;
};

/// Ê with its map back to the source. Throws Error(NotGenerable) naming the witness.
AssociatedES associated_es(const StableES& ses);

/// v ↦ f(v) is an order isomorphism between the configuration posets. Throws
/// Error(NotTotal) when f is partial.
bool domains_isomorphic(const StableES& a, const StableES& b, const Morphism& f);
bool domains_isomorphic(const PrimeES& a, const PrimeES& b, const Morphism& f);
bool domains_isomorphic(const PrimeES& a, const StableES& b, const Morphism& f);

}  // namespace evs
