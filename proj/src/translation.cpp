#include "evs/translation.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "evs/errors.hpp"

namespace evs {

bool Morphism::total() const {
  return std::all_of(map.begin(), map.end(), [](const auto& m) { return m.has_value(); });
}

EventSet Morphism::apply(EventSet x) const {
  EventSet out;
  for (EventId e : x) {
    if (map[e]) out.insert(*map[e]);
  }
  return out;
}

Morphism identity_morphism(const EventUniverse& u) {
  Morphism f{u, u, {}};
  for (EventId e = 0; e < u.size(); ++e) f.map.emplace_back(e);
  return f;
}

bool is_morphism(const StableES& source, const StableES& target, const Morphism& f) {
  const auto target_configs = configurations(target);
  const std::unordered_set<EventSet> targets(target_configs.begin(), target_configs.end());
  for (EventSet x : configurations(source)) {
    EventSet image;
    std::size_t defined = 0;
    for (EventId e : x) {
      if (f.map[e]) {
        image.insert(*f.map[e]);
        ++defined;
      }
    }
    if (image.size() != defined || !targets.contains(image)) return false;
  }
  return true;
}

std::string history_name(const EventUniverse& u, EventId e, EventSet h) {
  return u.name(e) + "@" + u.format(h);
}

ThetaResult theta(const StableES& ses) {
  StableAnalysis analysis(ses);
  const EventUniverse& src = ses.universe();

  struct Entry {
    std::string name;
    EventId top;
    EventSet history;
  };
  std::vector<Entry> entries;
  for (EventId e = 0; e < ses.size(); ++e) {
    for (EventSet h : analysis.histories_of(e)) entries.push_back({history_name(src, e, h), e, h});
  }
  std::vector<std::string> names;
  for (const auto& en : entries) names.push_back(en.name);
  EventUniverse u(names);
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.name < b.name; });
  const std::size_t n = entries.size();

  // A set of histories is compatible iff its union is a configuration.
  auto joined = [&](EventSet xs) {
    EventSet out;
    for (EventId p : xs) out |= entries[p].history;
    return out;
  };
  std::vector<EventSet> forbidden;
  std::unordered_set<EventSet> level{EventSet{}};
  while (!level.empty()) {
    std::unordered_set<EventSet> next;
    for (EventSet xs : level) {
      const EventId start = xs.empty() ? 0 : static_cast<EventId>(63 - std::countl_zero(xs.bits())) + 1;
      for (EventId p = start; p < n; ++p) {
        const EventSet cand = xs | EventSet::singleton(p);
        bool minimal = true;
        for (EventId d : xs) {
          if (!level.contains(cand - EventSet::singleton(d))) {
            minimal = false;
            break;
          }
        }
        if (!minimal) continue;
        if (analysis.is_configuration(joined(cand))) {
          next.insert(cand);
        } else {
          forbidden.push_back(cand);
        }
      }
    }
    level = std::move(next);
  }

  std::vector<Rule> rules;
  for (EventId p = 0; p < n; ++p) {
    EventSet below;
    for (EventId q = 0; q < n; ++q) {
      if (q != p && entries[q].history.subset_of(entries[p].history)) below.insert(q);
    }
    rules.push_back(Rule{below, p});
  }

  ThetaResult out;
  out.pes = make_stable(ses.name(), u, std::move(forbidden), std::move(rules));
  out.counit = Morphism{u, src, {}};
  for (const auto& en : entries) {
    out.histories.push_back(en.history);
    out.counit.map.emplace_back(en.top);
  }
  return out;
}

GenerableReport binary_conflict_generable(const ThetaResult& t) {
  GenerableReport report;
  report.conflict.assign(t.pes.size(), EventSet{});
  // Minimal forbidden sets are exactly the minimal incompatible history sets, so the
  // consistency is binary iff all of them are pairs.
  for (EventSet f : t.pes.forbidden()) {
    if (f.size() == 2) {
      const auto ids = f.ids();
      report.conflict[ids[0]].insert(ids[1]);
      report.conflict[ids[1]].insert(ids[0]);
    } else if (report.generable) {
      report.generable = false;
      report.witness = f;
    }
  }
  return report;
}

AssociatedES associated_es(const StableES& ses) {
  AssociatedES out;
  out.theta = theta(ses);
  const GenerableReport gen = binary_conflict_generable(out.theta);
  const EventUniverse& u = out.theta.pes.universe();
  if (!gen.generable) {
    throw Error(ErrorKind::NotGenerable,
                "histories " + u.format(*gen.witness) + " are pairwise consistent but jointly inconsistent");
  }
  std::vector<EventSet> causes(u.size());
  for (const Rule& r : out.theta.pes.rules()) causes[r.conclusion] = r.premise;
  out.es = make_prime(ses.name(), u, std::move(causes), gen.conflict);
  out.map = out.theta.counit;
  return out;
}

bool domains_isomorphic(const StableES& a, const StableES& b, const Morphism& f) {
  if (!f.total()) throw Error(ErrorKind::NotTotal, "event map is not defined on every event");
  const auto ca = configurations(a);
  const auto cb = configurations(b);
  if (ca.size() != cb.size()) return false;
  const std::unordered_set<EventSet> targets(cb.begin(), cb.end());
  std::unordered_map<EventSet, EventSet> image;
  std::unordered_set<EventSet> hit;
  for (EventSet x : ca) {
    const EventSet y = f.apply(x);
    if (y.size() != x.size() || !targets.contains(y) || !hit.insert(y).second) return false;
    image.emplace(x, y);
  }
  for (EventSet x : ca) {
    for (EventSet z : ca) {
      if (x.subset_of(z) != image[x].subset_of(image[z])) return false;
    }
  }
  return true;
}

bool domains_isomorphic(const PrimeES& a, const PrimeES& b, const Morphism& f) {
  return domains_isomorphic(to_stable(a), to_stable(b), f);
}

bool domains_isomorphic(const PrimeES& a, const StableES& b, const Morphism& f) {
  return domains_isomorphic(to_stable(a), b, f);
}

}  // namespace evs
