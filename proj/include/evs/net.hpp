#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "evs/prime_es.hpp"

namespace evs {

struct RawArc {
  std::string from;
  std::string to;
  int line = 0;
};

struct RawNet {
  std::string name = "net";
  std::vector<std::string> places;
  std::vector<std::string> transitions;
  std::vector<RawArc> arcs;
  std::vector<std::string> marking;
  int marking_line = 0;
};

/// A place/transition net with a set-valued initial marking. Names are kept sorted.
class SafeNet {
 public:
  SafeNet() = default;

  const std::string& name() const { return name_; }
  const std::vector<std::string>& places() const { return places_; }
  const std::vector<std::string>& transitions() const { return transitions_; }
  /// Place indices consumed and produced by each transition.
  const std::vector<std::vector<std::size_t>>& preset() const { return pre_; }
  const std::vector<std::vector<std::size_t>>& postset() const { return post_; }
  const std::vector<std::size_t>& marking() const { return marking_; }

  bool operator==(const SafeNet&) const = default;

 private:
  friend SafeNet validate_net(const RawNet& raw);

  std::string name_;
  std::vector<std::string> places_;
  std::vector<std::string> transitions_;
  std::vector<std::vector<std::size_t>> pre_;
  std::vector<std::vector<std::size_t>> post_;
  std::vector<std::size_t> marking_;
};

/// Throws Error(InvalidNet) for non-bipartite arcs, unknown names, marking outside the
/// places, or a transition without input places.
SafeNet validate_net(const RawNet& raw);

struct Unfolding {
  PrimeES es;
  bool truncated = false;
  /// Transition of each event of `es`, by event index.
  std::vector<std::string> labels;
  std::size_t conditions = 0;
};

/// Prefix of the standard unfolding with at most `max_events` events, grown by increasing
/// history size. Events are named after their transition, suffixed ".k" when the transition
/// occurs more than once. Throws Error(UnsafeNet) with a firing sequence reaching a
/// doubly marked place, Error(Precondition) when max_events is 0.
Unfolding unfold_net(const SafeNet& net, std::size_t max_events);

}  // namespace evs
