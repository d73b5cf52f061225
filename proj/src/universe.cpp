#include "evs/universe.hpp"

#include <algorithm>
#include <cctype>

#include "evs/errors.hpp"

namespace evs {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownEvent: return "unknown event";
    case ErrorKind::DuplicateEvent: return "duplicate event";
    case ErrorKind::InvalidIdentifier: return "invalid identifier";
    case ErrorKind::TooManyEvents: return "too many events";
    case ErrorKind::CausalityCycle: return "causality cycle";
    case ErrorKind::SelfConflict: return "self-conflict";
    case ErrorKind::StabilityViolation: return "stability violation";
    case ErrorKind::InconsistentRule: return "inconsistent rule";
    case ErrorKind::NotAConfiguration: return "not a configuration";
    case ErrorKind::NotRStopped: return "not R-stopped";
    case ErrorKind::WrongHost: return "wrong host";
    case ErrorKind::NotGenerable: return "not generable from a binary conflict";
    case ErrorKind::NotTotal: return "morphism not total";
    case ErrorKind::Precondition: return "precondition violated";
    case ErrorKind::Distribution: return "invalid distribution";
    case ErrorKind::UnsafeNet: return "unsafe net";
    case ErrorKind::InvalidNet: return "invalid net";
    case ErrorKind::Syntax: return "syntax error";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

bool valid_identifier(std::string_view id) {
  if (id.empty() || id.front() == '{' || id.starts_with("//")) return false;
  if (id == "}" || id == "|-" || id == "<" || id == "->") return false;
  int depth = 0;
  for (char c : id) {
    if (std::isspace(static_cast<unsigned char>(c))) return false;
    if (c == '{') ++depth;
    if (c == '}' && --depth < 0) return false;
    // Commas separate ids on the command line; they may only appear inside braces.
    if (c == ',' && depth == 0) return false;
  }
  return depth == 0;
}

EventUniverse::EventUniverse(std::vector<std::string> names) : names_(std::move(names)) {
  for (const auto& n : names_) {
    if (!valid_identifier(n)) throw Error(ErrorKind::InvalidIdentifier, "invalid event identifier '" + n + "'");
  }
  std::sort(names_.begin(), names_.end());
  auto dup = std::adjacent_find(names_.begin(), names_.end());
  if (dup != names_.end()) throw Error(ErrorKind::DuplicateEvent, "duplicate event '" + *dup + "'");
  if (names_.size() > kMaxEvents) {
    throw Error(ErrorKind::TooManyEvents,
                "structure has " + std::to_string(names_.size()) + " events; at most " +
                    std::to_string(kMaxEvents) + " are supported");
  }
}

std::optional<EventId> EventUniverse::find(std::string_view name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) return std::nullopt;
  return static_cast<EventId>(it - names_.begin());
}

EventId EventUniverse::id(std::string_view name, int line) const {
  if (auto id = find(name)) return *id;
  throw Error(ErrorKind::UnknownEvent, "unknown event '" + std::string(name) + "'", line);
}

EventSet EventUniverse::set_of(std::span<const std::string> names, int line) const {
  EventSet s;
  for (const auto& n : names) s.insert(id(n, line));
  return s;
}

EventSet EventUniverse::set_of(std::initializer_list<std::string_view> names) const {
  EventSet s;
  for (auto n : names) s.insert(id(n));
  return s;
}

std::vector<std::string> EventUniverse::names_of(EventSet s) const {
  std::vector<std::string> out;
  for (EventId e : s) out.push_back(names_[e]);
  return out;
}

std::string EventUniverse::format(EventSet s) const {
  std::string out = "{";
  bool first = true;
  for (EventId e : s) {
    if (!first) out += ',';
    out += names_[e];
    first = false;
  }
  return out + "}";
}

EventSet remap(const EventUniverse& from, const EventUniverse& to, EventSet s) {
  EventSet out;
  for (EventId e : s) {
    if (auto id = to.find(from.name(e))) out.insert(*id);
  }
  return out;
}

bool canonical_less(EventSet a, EventSet b) {
  if (a.size() != b.size()) return a.size() < b.size();
  // Same cardinality: compare sorted index lists lexicographically. The first index
  // where the sets differ decides; the set that has it is smaller.
  const EventSet diff(a.bits() ^ b.bits());
  if (diff.empty()) return false;
  return a.contains(diff.front());
}

void sort_canonical(std::vector<EventSet>& sets) {
  std::sort(sets.begin(), sets.end(), canonical_less);
}

}  // namespace evs
