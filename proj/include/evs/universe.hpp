#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evs/event_set.hpp"

namespace evs {

/// The event alphabet of one structure. Names are kept sorted, so an event's index
/// is its rank and canonical set order agrees with sorted-name order.
class EventUniverse {
 public:
  EventUniverse() = default;
  /// Sorts `names`; throws on duplicates, bad identifiers or more than kMaxEvents names.
  explicit EventUniverse(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  EventSet all() const { return EventSet::first_n(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(EventId id) const { return names_[id]; }

  std::optional<EventId> find(std::string_view name) const;
  /// Throws Error(UnknownEvent).
  EventId id(std::string_view name, int line = 0) const;
  EventSet set_of(std::span<const std::string> names, int line = 0) const;
  EventSet set_of(std::initializer_list<std::string_view> names) const;

  std::vector<std::string> names_of(EventSet s) const;
  /// "{a,b,c}" in index order.
  std::string format(EventSet s) const;

  bool operator==(const EventUniverse&) const = default;

 private:
  std::vector<std::string> names_;
};

/// Identifiers are nonempty and free of whitespace and of the grammar's reserved tokens.
bool valid_identifier(std::string_view id);

/// Maps a set over `from` onto `to` by event name; names missing from `to` are dropped.
EventSet remap(const EventUniverse& from, const EventUniverse& to, EventSet s);

}  // namespace evs
