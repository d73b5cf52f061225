#include "evs/prime_es.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "evs/errors.hpp"

namespace evs {

namespace {

// Transitive closure of direct strict causes; throws on cycles.
std::vector<EventSet> close_causality(const EventUniverse& u, const std::vector<EventSet>& direct) {
  std::vector<EventSet> closed = direct;
  bool changed = true;
  while (changed) {
    changed = false;
    for (EventId e = 0; e < u.size(); ++e) {
      EventSet next = closed[e];
      for (EventId d : closed[e]) next |= closed[d];
      if (next != closed[e]) {
        closed[e] = next;
        changed = true;
      }
      if (closed[e].contains(e)) {
        throw Error(ErrorKind::CausalityCycle, "causality cycle through '" + u.name(e) + "'");
      }
    }
  }
  return closed;
}

// Inherited closure: e # f iff some cause-or-self of e directly conflicts with a cause-or-self of f.
std::vector<EventSet> close_conflict(const EventUniverse& u, const std::vector<EventSet>& causes,
                                     const std::vector<EventSet>& direct) {
  const std::size_t n = u.size();
  std::vector<EventSet> up(n);
  for (EventId e = 0; e < n; ++e) {
    up[e].insert(e);
    for (EventId c : causes[e]) up[c].insert(e);
  }
  std::vector<EventSet> closed(n);
  for (EventId e = 0; e < n; ++e) {
    const EventSet below = causes[e] | EventSet::singleton(e);
    for (EventId x : below) {
      for (EventId y : direct[x]) closed[e] |= up[y];
    }
  }
  return closed;
}

}  // namespace

PrimeES make_prime(std::string name, EventUniverse u, std::vector<EventSet> causes,
                   std::vector<EventSet> conflicts) {
  const std::size_t n = u.size();
  causes.resize(n);
  conflicts.resize(n);
  for (EventId e = 0; e < n; ++e) {
    for (EventId f : conflicts[e]) conflicts[f].insert(e);
  }
  PrimeES es;
  es.causes_ = close_causality(u, causes);
  es.conflicts_ = close_conflict(u, es.causes_, conflicts);
  for (EventId e = 0; e < n; ++e) {
    if (es.conflicts_[e].contains(e)) {
      throw Error(ErrorKind::SelfConflict, "event '" + u.name(e) + "' is in conflict with itself");
    }
  }
  es.name_ = std::move(name);
  es.universe_ = std::move(u);
  return es;
}

PrimeValidation validate_prime(const RawPrime& raw) {
  EventUniverse u(raw.events);
  const std::size_t n = u.size();

  std::vector<EventSet> direct_causes(n);
  for (const auto& p : raw.causes) {
    const EventId a = u.id(p.first, p.line);
    const EventId b = u.id(p.second, p.line);
    if (a == b) throw Error(ErrorKind::CausalityCycle, "event '" + p.first + "' causes itself", p.line);
    direct_causes[b].insert(a);
  }
  std::vector<EventSet> direct_conflicts(n);
  for (const auto& p : raw.conflicts) {
    const EventId a = u.id(p.first, p.line);
    const EventId b = u.id(p.second, p.line);
    if (a == b) throw Error(ErrorKind::SelfConflict, "event '" + p.first + "' is in conflict with itself", p.line);
    direct_conflicts[a].insert(b);
    direct_conflicts[b].insert(a);
  }

  PrimeValidation out;
  try {
    out.es = make_prime(raw.name, u, direct_causes, direct_conflicts);
  } catch (const Error& err) {
    // Attach the line of a relation entry involved in the failure.
    int line = 0;
    if (err.kind() == ErrorKind::CausalityCycle) {
      std::vector<EventSet> reach = direct_causes;
      for (std::size_t round = 0; round < n; ++round) {
        for (EventId e = 0; e < n; ++e) {
          for (EventId d : reach[e]) reach[e] |= reach[d];
        }
      }
      for (const auto& p : raw.causes) {
        if (reach[u.id(p.first)].contains(u.id(p.second))) {
          line = p.line;
          break;
        }
      }
    } else if (err.kind() == ErrorKind::SelfConflict) {
      PrimeES no_conflicts = make_prime(raw.name, u, direct_causes, {});
      for (const auto& p : raw.conflicts) {
        const EventId a = u.id(p.first), b = u.id(p.second);
        bool shared = false;
        for (EventId e = 0; e < n; ++e) {
          if (no_conflicts.history(e).contains(a) && no_conflicts.history(e).contains(b)) shared = true;
        }
        if (shared) {
          line = p.line;
          break;
        }
      }
    }
    throw Error(err.kind(), err.what(), line);
  }
  out.es.set_truncated(raw.truncated);

  for (EventId b = 0; b < n; ++b) {
    for (EventId a : out.es.causes(b) - direct_causes[b]) out.added_causality.emplace_back(a, b);
  }
  std::sort(out.added_causality.begin(), out.added_causality.end());
  for (EventId a = 0; a < n; ++a) {
    for (EventId b : out.es.conflicts(a) - direct_conflicts[a]) {
      if (a < b) out.added_conflicts.emplace_back(a, b);
    }
  }
  return out;
}

EventSet PrimeES::history(EventSet x) const {
  EventSet out = x;
  for (EventId e : x) out |= causes_[e];
  return out;
}

bool PrimeES::conflict_free(EventSet x) const {
  for (EventId e : x) {
    if (conflicts_[e].intersects(x)) return false;
  }
  return true;
}

PrimeES PrimeES::restrict_to(EventSet keep, std::string name) const {
  EventUniverse sub(universe_.names_of(keep));
  std::vector<EventSet> causes(sub.size()), conflicts(sub.size());
  for (EventId e : keep) {
    const EventId s = *sub.find(universe_.name(e));
    causes[s] = remap(universe_, sub, causes_[e] & keep);
    conflicts[s] = remap(universe_, sub, conflicts_[e] & keep);
  }
  PrimeES out = make_prime(std::move(name), std::move(sub), std::move(causes), std::move(conflicts));
  out.truncated_ = truncated_;
  return out;
}

std::vector<EventSet> configurations(const PrimeES& es) {
  std::vector<EventSet> out;
  std::unordered_set<EventSet> seen{EventSet{}};
  std::deque<EventSet> queue{EventSet{}};
  while (!queue.empty()) {
    const EventSet v = queue.front();
    queue.pop_front();
    out.push_back(v);
    for (EventId e : es.all() - v) {
      if (!es.causes(e).subset_of(v) || es.conflicts(e).intersects(v)) continue;
      const EventSet w = v | EventSet::singleton(e);
      if (seen.insert(w).second) queue.push_back(w);
    }
  }
  sort_canonical(out);
  return out;
}

std::vector<EventSet> maximal_configurations(const PrimeES& es) {
  // A configuration is maximal iff no event extends it.
  std::vector<EventSet> out;
  for (EventSet v : configurations(es)) {
    bool extensible = false;
    for (EventId e : es.all() - v) {
      if (es.causes(e).subset_of(v) && !es.conflicts(e).intersects(v)) {
        extensible = true;
        break;
      }
    }
    if (!extensible) out.push_back(v);
  }
  return out;
}

PrimeES future(const PrimeES& es, EventSet v) {
  if (!v.subset_of(es.all()) || !es.is_configuration(v)) {
    throw Error(ErrorKind::NotAConfiguration, es.universe().format(v) + " is not a configuration");
  }
  EventSet keep;
  for (EventId e : es.all() - v) {
    if (es.is_configuration(es.history(e) | v)) keep.insert(e);
  }
  return es.restrict_to(keep, es.name());
}

bool immediate_conflict(const PrimeES& es, EventId e, EventId f) {
  if (!es.in_conflict(e, f)) return false;
  for (EventId x : es.history(e)) {
    for (EventId y : es.history(f) & es.conflicts(x)) {
      if (x != e || y != f) return false;
    }
  }
  return true;
}

std::vector<EventSet> immediate_conflicts(const PrimeES& es) {
  std::vector<EventSet> out(es.size());
  for (EventId e = 0; e < es.size(); ++e) {
    for (EventId f : es.conflicts(e)) {
      if (immediate_conflict(es, e, f)) out[e].insert(f);
    }
  }
  return out;
}

EventSet initial_events(const PrimeES& es) {
  EventSet out;
  for (EventId e = 0; e < es.size(); ++e) {
    if (es.causes(e).empty()) out.insert(e);
  }
  return out;
}

std::vector<std::pair<EventId, EventId>> causality_cover(const PrimeES& es) {
  std::vector<std::pair<EventId, EventId>> out;
  for (EventId b = 0; b < es.size(); ++b) {
    for (EventId a : es.causes(b)) {
      bool covered = true;
      for (EventId m : es.causes(b)) {
        if (m != a && es.precedes(a, m)) {
          covered = false;
          break;
        }
      }
      if (covered) out.emplace_back(a, b);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace evs
