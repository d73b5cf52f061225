#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "evs/event_set.hpp"
#include "evs/prime_es.hpp"
#include "evs/universe.hpp"

namespace evs {

struct RawRule {
  std::vector<std::string> premise;
  std::string conclusion;
  int line = 0;
};

struct RawForbidden {
  std::vector<std::string> events;
  int line = 0;
};

struct RawStable {
  std::string name = "ses";
  std::vector<std::string> events;
  std::vector<RawRule> rules;
  std::vector<RawForbidden> forbidden;
};

struct Rule {
  EventSet premise;
  EventId conclusion = 0;
  bool operator==(const Rule&) const = default;
};

/// Stable event structure. Consistency is presented by minimal forbidden sets
/// (Con = sets containing none of them); enabling by minimal rules, closed monotonically.
class StableES {
 public:
  StableES() = default;

  const std::string& name() const { return name_; }
  const EventUniverse& universe() const { return universe_; }
  std::size_t size() const { return universe_.size(); }
  EventSet all() const { return universe_.all(); }
  const std::string& event_name(EventId e) const { return universe_.name(e); }
  EventId id(std::string_view name) const { return universe_.id(name); }

  /// Minimal forbidden sets, canonical order.
  const std::vector<EventSet>& forbidden() const { return forbidden_; }
  /// Minimal rules, ordered by conclusion then canonical premise order.
  const std::vector<Rule>& rules() const { return rules_; }
  std::vector<EventSet> premises_of(EventId e) const;

  bool consistent(EventSet x) const;
  /// Monotone closure of the rules: x consistent and some premise of `e` inside x.
  bool derives(EventSet x, EventId e) const;
  /// `e` can occur right after configuration `v`: e ∉ v, v ∪ {e} consistent, v derives e.
  bool enables(EventSet v, EventId e) const;
  EventSet enabled_events(EventSet v) const;

  /// Events mentioned by no rule.
  EventSet dead_events() const;

  bool operator==(const StableES&) const = default;

 private:
  friend StableES make_stable(std::string name, EventUniverse u, std::vector<EventSet> forbidden,
                              std::vector<Rule> rules);

  std::string name_;
  EventUniverse universe_;
  std::vector<EventSet> forbidden_;
  std::vector<Rule> rules_;
};

struct StabilityWitness {
  Rule first;
  Rule second;
};

struct StableValidation {
  StableES ses;
  /// Events without any rule; such events never occur.
  std::vector<std::string> dead_events;
  /// Forbidden sets dropped because they contain a smaller forbidden set.
  std::vector<EventSet> redundant_forbidden;
  /// Rules dropped because a smaller premise for the same event exists.
  std::vector<Rule> redundant_rules;
};

/// Normalizes and checks stability. Throws Error (StabilityViolation with the witness rule
/// pair in the message, InconsistentRule, UnknownEvent).
StableValidation validate_stable(const RawStable& raw);

/// Builds and validates from resolved sets. Singleton forbidden sets are permitted and
/// make their event impossible.
StableES make_stable(std::string name, EventUniverse u, std::vector<EventSet> forbidden, std::vector<Rule> rules);

/// A rule pair violating stability, if any.
std::optional<StabilityWitness> find_stability_violation(const StableES& ses);

/// Stable view of a binary-conflict structure: forbidden pairs are the conflicts,
/// each event has the single rule ⌈e⌉ \ {e} ⊢ e.
StableES to_stable(const PrimeES& es);

bool is_consistent(const StableES& ses, EventSet x);
std::vector<EventSet> configurations(const StableES& ses);
std::vector<EventSet> maximal_configurations(const StableES& ses);
bool is_configuration(const StableES& ses, EventSet x);

/// Future of configuration `v`: events consistent with v, with Con^v = {X : X ∪ v ∈ Con}
/// and X ⊢^v e iff X ∪ v ⊢ e.
StableES future(const StableES& ses, EventSet v);

/// Least configuration within `u` containing `e`. Throws if e ∉ u or u is not a configuration.
EventSet local_history(const StableES& ses, EventId e, EventSet u);

/// e #_v e' when `v` is given, otherwise the global conflict ∀v. e #_v e'.
bool conflict(const StableES& ses, EventId e, EventId f, std::optional<EventSet> v = std::nullopt);

/// e #μ,v e' when `v` is given, otherwise the global ∀v,v'∃v''⊆v∪v' form.
bool immediate_conflict(const StableES& ses, EventId e, EventId f, std::optional<EventSet> v = std::nullopt);

/// One history per event of `xs`, ordered like xs.ids().
using HistorySelection = std::vector<EventSet>;

/// *X: every choice of one local history per event of X.
std::vector<HistorySelection> star_histories(const StableES& ses, EventSet xs);

struct SensibleReport {
  bool sensible = true;
  /// Minimal consistent sets contained in no configuration.
  std::vector<EventSet> pruned;
  StableES pruned_ses;
};

SensibleReport check_sensible(const StableES& ses);

struct ConflictDrivenReport {
  bool sensible = true;
  bool inconsistency_traced = true;
  bool conflicts_persist = true;
  bool holds() const { return sensible && inconsistency_traced && conflicts_persist; }

  /// Condition 1 witness: a consistent set in no configuration.
  std::optional<EventSet> unreachable_consistent;
  /// Condition 2 witness: inconsistent X and a selection T ∈ *X without a #μ pair.
  std::optional<EventSet> untraced_set;
  std::optional<HistorySelection> untraced_selection;
  /// Condition 3 witness: e #μ,v e' but not e # e'.
  struct Triple {
    EventId first;
    EventId second;
    EventSet under;
  };
  std::optional<Triple> transient_conflict;
};

ConflictDrivenReport check_conflict_driven(const StableES& ses);

/// Precomputed configuration-level data for one stable structure: configurations,
/// local histories, configuration-dependent immediate conflicts and the global relations.
/// Construction is exhaustive; intended for desk-scale structures.
class StableAnalysis {
 public:
  explicit StableAnalysis(const StableES& ses);

  const StableES& ses() const { return ses_; }
  const std::vector<EventSet>& configurations() const { return configs_; }
  bool is_configuration(EventSet x) const { return config_set_.contains(x); }

  /// ⌈e⌉_u for e ∈ u; for e ∉ u with u enabling e, the history in u ∪ {e}.
  EventSet history(EventId e, EventSet u) const;

  /// Distinct local histories of `e` over all configurations.
  const std::vector<EventSet>& histories_of(EventId e) const { return histories_[e]; }

  struct ImmediateConflict {
    EventSet under;
    EventId first;
    EventId second;
  };
  /// Every (v, e, e') with e #μ,v e', both orientations.
  const std::vector<ImmediateConflict>& immediate_conflicts() const { return immediate_; }
  bool immediate_conflict_under(EventId e, EventId f, EventSet v) const;

  bool global_conflict(EventId e, EventId f) const { return global_conflict_[e].contains(f); }
  bool global_immediate(EventId e, EventId f) const { return global_immediate_[e].contains(f); }

  /// x is contained in some configuration.
  bool reachable(EventSet x) const;

 private:
  EventSet compute_history(EventId e, EventSet u) const;

  StableES ses_;
  std::vector<EventSet> configs_;
  std::unordered_set<EventSet> config_set_;
  std::vector<EventSet> maximal_;
  std::vector<std::vector<EventSet>> histories_;
  std::vector<ImmediateConflict> immediate_;
  std::vector<EventSet> global_conflict_;
  std::vector<EventSet> global_immediate_;
};

}  // namespace evs
