#pragma once

#include <array>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "evs/prime_es.hpp"
#include "evs/stable_es.hpp"

namespace evs {

/// An initial stopping prefix of the future at `enabled_at`. All sets use the host's ids.
struct BranchingCell {
  EventSet events;
  EventSet enabled_at;
  /// Ω_c: maximal configurations of the cell, canonical order.
  std::vector<EventSet> maximal;
};

struct CoveringStep {
  BranchingCell cell;
  EventSet choice;
};

struct Covering {
  EventSet configuration;
  std::vector<CoveringStep> steps;
  /// Every valid decomposition resolves the same cell set.
  bool invariant = true;
  /// The cells of every decomposition are pairwise disjoint.
  bool disjoint = true;

  /// Δ(v): cell event sets in canonical order.
  std::vector<EventSet> cells() const;
};

struct DecompositionResult {
  std::optional<Covering> covering;
  /// On failure: the largest configuration reached by cell steps inside v.
  EventSet reached;
  std::string reason;
};

namespace detail {
template <class Host>
struct HostOps;
}

/// Cell machinery over one host, with δ(v) cached per configuration. Not thread-safe;
/// use one instance per thread.
template <class Host>
class CellAnalysis {
 public:
  explicit CellAnalysis(const Host& host);

  const Host& host() const;
  const std::vector<EventSet>& configurations() const;
  bool is_configuration(EventSet x) const;

  /// Events of the future at configuration v.
  EventSet future_events(EventSet v) const;
  /// Events enabled by v, i.e. the initial events of the future at v.
  EventSet enabled_events(EventSet v) const;

  bool is_stopping_prefix(EventSet b) const { return is_stopping_prefix_at(EventSet{}, b); }
  /// `b` is a stopping prefix of the future at configuration v.
  bool is_stopping_prefix_at(EventSet v, EventSet b) const;

  /// δ(v). Throws Error(NotRStopped).
  const std::vector<BranchingCell>& enabled_cells(EventSet v) const;

  /// Finite R-stopped configurations, canonical order.
  const std::vector<EventSet>& r_stopped() const;
  bool is_r_stopped(EventSet v) const;

  /// A decomposition of v into cell steps, or the reason none exists.
  DecompositionResult valid_decomposition(EventSet v) const;
  /// Throws Error(NotRStopped).
  Covering covering(EventSet v) const;
  /// Cell lists of every decomposition of v (duplicates kept, so overlaps stay visible).
  std::set<std::vector<EventSet>> decomposition_cell_sets(EventSet v) const;

  /// 𝒞: every cell enabled at some finite R-stopped configuration, keyed by event set;
  /// the first occurrence in canonical configuration order is kept.
  std::vector<BranchingCell> all_cells() const;

  /// Ω_c of the stopping prefix `c` of the future at v, as sets of events of c.
  std::vector<EventSet> maximal_in(EventSet v, EventSet c) const;

 private:
  const std::vector<BranchingCell>& delta(EventSet v) const;
  const std::set<std::vector<EventSet>>& cell_sets_from(EventSet u, EventSet v) const;

  std::shared_ptr<const detail::HostOps<Host>> ops_;
  mutable std::unordered_map<EventSet, std::vector<BranchingCell>> delta_;
  mutable std::optional<std::vector<EventSet>> r_stopped_;
  mutable std::unordered_map<EventSet, bool> r_stopped_set_;
  mutable std::unordered_map<EventSet, std::unordered_map<EventSet, std::set<std::vector<EventSet>>>> cell_sets_;
};

extern template class CellAnalysis<PrimeES>;
extern template class CellAnalysis<StableES>;

/// Least prefix containing X closed under immediate conflict.
EventSet minimal_stopping_prefix(const PrimeES& es, EventSet x);
/// Stable hosts have no canonical least stopping prefix; always throws Error(WrongHost).
EventSet minimal_stopping_prefix(const StableES& ses, EventSet x);

struct PreRegularReport {
  bool holds = true;
  std::size_t max_enabled = 0;
  /// Enabled-event count per configuration, canonical order.
  std::vector<std::pair<EventSet, std::size_t>> enabled_counts;
};

struct LocallyFiniteReport {
  bool holds = true;
  EventSet uncovered;
};

struct JumpReport {
  bool jump_free = true;
  /// e, e1, ..., ek, e' for the first jump found.
  std::vector<EventId> chain;
  /// Stable hosts: the configuration v ordering e before e', and the configuration
  /// under which each chain edge is an immediate conflict.
  std::optional<EventSet> under;
  std::vector<EventSet> edge_configs;
};

struct FlatnessReport {
  bool flat = true;
  std::optional<BranchingCell> cell;
  std::optional<EventId> non_initial;
};

struct CellIsomorphismReport {
  bool precondition_ok = true;
  std::string precondition_failure;
  bool isomorphic = false;
  std::string mismatch;
  std::size_t cells_stable = 0;
  std::size_t cells_prime = 0;
};

struct ConfusionReport {
  bool confused = false;
  /// e #μ f #μ g with e, g distinct and not in immediate conflict.
  std::optional<std::array<EventId, 3>> asymmetric_triple;
  /// e #μ f with different strict causes (prime hosts only).
  std::optional<std::pair<EventId, EventId>> unequal_causes;
  /// A cell with a maximal configuration holding two concurrent initial events.
  std::optional<BranchingCell> concurrent_cell;
  std::optional<EventSet> concurrent_choice;
  /// Two overlapping cells enabled at the same configuration.
  std::optional<std::pair<BranchingCell, BranchingCell>> overlapping;
};

PreRegularReport check_pre_regular(const PrimeES& es);
PreRegularReport check_pre_regular(const StableES& ses);
LocallyFiniteReport check_locally_finite(const PrimeES& es);
LocallyFiniteReport check_locally_finite(const StableES& ses);
JumpReport check_jump_free(const PrimeES& es);
JumpReport check_jump_free(const StableES& ses);
/// Throws Error(Precondition) when the host is not jump-free.
FlatnessReport check_cells_flat(const PrimeES& es);
FlatnessReport check_cells_flat(const StableES& ses);
CellIsomorphismReport check_cell_isomorphism(const StableES& ses);
ConfusionReport check_confusion(const PrimeES& es);
ConfusionReport check_confusion(const StableES& ses);

}  // namespace evs
