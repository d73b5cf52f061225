#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

namespace evs {

using EventId = std::uint32_t;

// Structures are desk-scale: every event set fits in one machine word.
inline constexpr std::size_t kMaxEvents = 64;

/// A finite set of events of one structure, as a bitmask over event indices.
class EventSet {
 public:
  constexpr EventSet() = default;
  constexpr explicit EventSet(std::uint64_t bits) : bits_(bits) {}
  EventSet(std::initializer_list<EventId> ids) {
    for (EventId id : ids) insert(id);
  }

  static constexpr EventSet singleton(EventId id) { return EventSet(std::uint64_t{1} << id); }
  static constexpr EventSet first_n(std::size_t n) {
    return EventSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool contains(EventId id) const { return (bits_ >> id) & 1u; }

  constexpr void insert(EventId id) { bits_ |= std::uint64_t{1} << id; }
  constexpr void erase(EventId id) { bits_ &= ~(std::uint64_t{1} << id); }

  constexpr bool subset_of(EventSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(EventSet other) const { return (bits_ & other.bits_) != 0; }

  constexpr EventSet operator|(EventSet o) const { return EventSet(bits_ | o.bits_); }
  constexpr EventSet operator&(EventSet o) const { return EventSet(bits_ & o.bits_); }
  constexpr EventSet operator-(EventSet o) const { return EventSet(bits_ & ~o.bits_); }
  constexpr EventSet& operator|=(EventSet o) { bits_ |= o.bits_; return *this; }
  constexpr EventSet& operator&=(EventSet o) { bits_ &= o.bits_; return *this; }
  constexpr EventSet& operator-=(EventSet o) { bits_ &= ~o.bits_; return *this; }

  constexpr bool operator==(const EventSet&) const = default;
  /// Orders by bitmask; use canonical_less for presentation order.
  constexpr auto operator<=>(const EventSet&) const = default;

  /// Lowest member; undefined on the empty set.
  constexpr EventId front() const { return static_cast<EventId>(std::countr_zero(bits_)); }

  std::vector<EventId> ids() const {
    std::vector<EventId> out;
    out.reserve(size());
    for (EventId id : *this) out.push_back(id);
    return out;
  }

  class iterator {
   public:
    using value_type = EventId;
    using difference_type = std::ptrdiff_t;
    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t rest) : rest_(rest) {}
    constexpr EventId operator*() const { return static_cast<EventId>(std::countr_zero(rest_)); }
    constexpr iterator& operator++() { rest_ &= rest_ - 1; return *this; }
    constexpr iterator operator++(int) { auto t = *this; ++*this; return t; }
    constexpr bool operator==(const iterator&) const = default;

   private:
    std::uint64_t rest_ = 0;
  };

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

 private:
  std::uint64_t bits_ = 0;
};

/// Canonical order: by cardinality, then lexicographically on the sorted index lists.
/// Event indices follow sorted event names, so this is also the order on sorted name lists.
bool canonical_less(EventSet a, EventSet b);

void sort_canonical(std::vector<EventSet>& sets);

/// Calls `fn` on every subset of `universe` (including the empty set and `universe`).
template <class Fn>
void for_each_subset(EventSet universe, Fn&& fn) {
  const std::uint64_t u = universe.bits();
  std::uint64_t s = 0;
  while (true) {
    fn(EventSet(s));
    if (s == u) break;
    s = (s - u) & u;
  }
}

}  // namespace evs

template <>
struct std::hash<evs::EventSet> {
  std::size_t operator()(evs::EventSet s) const noexcept { return std::hash<std::uint64_t>{}(s.bits()); }
};
