#include "evs/stable_es.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "evs/errors.hpp"

namespace evs {

namespace {

std::vector<EventSet> minimize_sets(std::vector<EventSet> sets, std::vector<EventSet>* dropped = nullptr) {
  sort_canonical(sets);
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<EventSet> out;
  for (EventSet s : sets) {
    bool redundant = false;
    for (EventSet kept : out) {
      if (kept.subset_of(s)) {
        redundant = true;
        break;
      }
    }
    if (redundant) {
      if (dropped) dropped->push_back(s);
    } else {
      out.push_back(s);
    }
  }
  return out;
}

bool rule_less(const Rule& a, const Rule& b) {
  if (a.conclusion != b.conclusion) return a.conclusion < b.conclusion;
  return canonical_less(a.premise, b.premise);
}

std::string format_rule(const EventUniverse& u, const Rule& r) {
  return u.format(r.premise) + " |- " + u.name(r.conclusion);
}

}  // namespace

StableES make_stable(std::string name, EventUniverse u, std::vector<EventSet> forbidden, std::vector<Rule> rules) {
  StableES ses;
  for (EventSet f : forbidden) {
    if (f.empty()) throw Error(ErrorKind::Precondition, "empty forbidden set makes every set inconsistent");
  }
  ses.forbidden_ = minimize_sets(std::move(forbidden));

  std::sort(rules.begin(), rules.end(), rule_less);
  rules.erase(std::unique(rules.begin(), rules.end()), rules.end());
  for (const Rule& r : rules) {
    if (r.premise.contains(r.conclusion)) {
      throw Error(ErrorKind::InconsistentRule, "rule " + format_rule(u, r) + " mentions its conclusion in its premise");
    }
    if (!ses.consistent(r.premise | EventSet::singleton(r.conclusion))) {
      throw Error(ErrorKind::InconsistentRule, "rule " + format_rule(u, r) + " is inconsistent");
    }
  }
  // Monotone closure makes a rule with a larger premise for the same event redundant.
  for (const Rule& r : rules) {
    bool redundant = false;
    for (const Rule& s : rules) {
      if (s.conclusion == r.conclusion && s.premise != r.premise && s.premise.subset_of(r.premise)) {
        redundant = true;
        break;
      }
    }
    if (!redundant) ses.rules_.push_back(r);
  }
  ses.name_ = std::move(name);
  ses.universe_ = std::move(u);
  if (auto w = find_stability_violation(ses)) {
    throw Error(ErrorKind::StabilityViolation,
                "rules " + format_rule(ses.universe_, w->first) + " and " + format_rule(ses.universe_, w->second) +
                    " are jointly consistent but their common part enables nothing");
  }
  return ses;
}

std::optional<StabilityWitness> find_stability_violation(const StableES& ses) {
  const auto& rules = ses.rules();
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for (std::size_t j = i + 1; j < rules.size(); ++j) {
      const Rule& a = rules[i];
      const Rule& b = rules[j];
      if (a.conclusion != b.conclusion) continue;
      if (!ses.consistent(a.premise | b.premise | EventSet::singleton(a.conclusion))) continue;
      const EventSet common = a.premise & b.premise;
      bool enabled = false;
      for (const Rule& r : rules) {
        if (r.conclusion == a.conclusion && r.premise.subset_of(common)) enabled = true;
      }
      if (!enabled) return StabilityWitness{a, b};
    }
  }
  return std::nullopt;
}

StableValidation validate_stable(const RawStable& raw) {
  EventUniverse u(raw.events);
  std::vector<EventSet> forbidden;
  for (const auto& f : raw.forbidden) forbidden.push_back(u.set_of(f.events, f.line));

  StableValidation out;
  minimize_sets(forbidden, &out.redundant_forbidden);
  StableES probe = make_stable(raw.name, u, forbidden, {});

  std::vector<Rule> rules;
  std::map<std::pair<std::uint64_t, EventId>, int> lines;
  for (const auto& r : raw.rules) {
    Rule rule{u.set_of(r.premise, r.line), u.id(r.conclusion, r.line)};
    if (rule.premise.contains(rule.conclusion) || !probe.consistent(rule.premise | EventSet::singleton(rule.conclusion))) {
      throw Error(ErrorKind::InconsistentRule,
                  "rule " + format_rule(u, rule) +
                      (rule.premise.contains(rule.conclusion) ? " mentions its conclusion in its premise"
                                                              : " is inconsistent"),
                  r.line);
    }
    lines.emplace(std::make_pair(rule.premise.bits(), rule.conclusion), r.line);
    rules.push_back(rule);
  }

  try {
    out.ses = make_stable(raw.name, u, forbidden, rules);
  } catch (const Error& err) {
    int line = 0;
    if (err.kind() == ErrorKind::StabilityViolation) {
      // Rebuild without the stability check to recover the witness and its line.
      StableES loose;
      std::vector<Rule> kept;
      for (const Rule& r : rules) {
        bool redundant = false;
        for (const Rule& s : rules) {
          if (s.conclusion == r.conclusion && s.premise != r.premise && s.premise.subset_of(r.premise)) redundant = true;
        }
        if (!redundant) kept.push_back(r);
      }
      for (const Rule& a : kept) {
        for (const Rule& b : kept) {
          if (a.conclusion != b.conclusion || a.premise == b.premise) continue;
          if (probe.consistent(a.premise | b.premise | EventSet::singleton(a.conclusion))) {
            line = std::max(lines[{a.premise.bits(), a.conclusion}], lines[{b.premise.bits(), b.conclusion}]);
          }
        }
      }
    }
    throw Error(err.kind(), err.what(), line);
  }

  for (const Rule& r : rules) {
    if (std::find(out.ses.rules().begin(), out.ses.rules().end(), r) == out.ses.rules().end()) {
      out.redundant_rules.push_back(r);
    }
  }
  for (EventId e : out.ses.dead_events()) out.dead_events.push_back(u.name(e));
  return out;
}

std::vector<EventSet> StableES::premises_of(EventId e) const {
  std::vector<EventSet> out;
  for (const Rule& r : rules_) {
    if (r.conclusion == e) out.push_back(r.premise);
  }
  return out;
}

bool StableES::consistent(EventSet x) const {
  for (EventSet f : forbidden_) {
    if (f.subset_of(x)) return false;
  }
  return true;
}

bool StableES::derives(EventSet x, EventId e) const {
  if (!consistent(x)) return false;
  for (const Rule& r : rules_) {
    if (r.conclusion == e && r.premise.subset_of(x)) return true;
  }
  return false;
}

bool StableES::enables(EventSet v, EventId e) const {
  if (v.contains(e) || !consistent(v | EventSet::singleton(e))) return false;
  for (const Rule& r : rules_) {
    if (r.conclusion == e && r.premise.subset_of(v)) return true;
  }
  return false;
}

EventSet StableES::enabled_events(EventSet v) const {
  EventSet out;
  for (EventId e : all() - v) {
    if (enables(v, e)) out.insert(e);
  }
  return out;
}

EventSet StableES::dead_events() const {
  EventSet live;
  for (const Rule& r : rules_) live.insert(r.conclusion);
  return all() - live;
}

StableES to_stable(const PrimeES& es) {
  std::vector<EventSet> forbidden;
  std::vector<Rule> rules;
  for (EventId e = 0; e < es.size(); ++e) {
    for (EventId f : es.conflicts(e)) {
      if (e < f) forbidden.push_back(EventSet{e, f});
    }
    rules.push_back(Rule{es.causes(e), e});
  }
  return make_stable(es.name(), es.universe(), std::move(forbidden), std::move(rules));
}

bool is_consistent(const StableES& ses, EventSet x) {
  if (!x.subset_of(ses.all())) throw Error(ErrorKind::UnknownEvent, "set mentions unknown events");
  return ses.consistent(x);
}

std::vector<EventSet> configurations(const StableES& ses) {
  std::vector<EventSet> out;
  std::unordered_set<EventSet> seen{EventSet{}};
  std::deque<EventSet> queue{EventSet{}};
  while (!queue.empty()) {
    const EventSet v = queue.front();
    queue.pop_front();
    out.push_back(v);
    for (EventId e : ses.enabled_events(v)) {
      const EventSet w = v | EventSet::singleton(e);
      if (seen.insert(w).second) queue.push_back(w);
    }
  }
  sort_canonical(out);
  return out;
}

std::vector<EventSet> maximal_configurations(const StableES& ses) {
  std::vector<EventSet> out;
  for (EventSet v : configurations(ses)) {
    if (ses.enabled_events(v).empty()) out.push_back(v);
  }
  return out;
}

bool is_configuration(const StableES& ses, EventSet x) {
  if (!x.subset_of(ses.all()) || !ses.consistent(x)) return false;
  EventSet built;
  bool grew = true;
  while (grew && built != x) {
    grew = false;
    for (EventId e : x - built) {
      if (ses.enables(built, e)) {
        built.insert(e);
        grew = true;
      }
    }
  }
  return built == x;
}

StableES future(const StableES& ses, EventSet v) {
  if (!is_configuration(ses, v)) {
    throw Error(ErrorKind::NotAConfiguration, ses.universe().format(v) + " is not a configuration");
  }
  EventSet keep;
  for (EventId e : ses.all() - v) {
    if (ses.consistent(v | EventSet::singleton(e))) keep.insert(e);
  }
  EventUniverse sub(ses.universe().names_of(keep));
  std::vector<EventSet> forbidden;
  for (EventSet f : ses.forbidden()) {
    const EventSet rest = f - v;
    if (rest.subset_of(keep)) forbidden.push_back(remap(ses.universe(), sub, rest));
  }
  std::vector<Rule> rules;
  for (const Rule& r : ses.rules()) {
    if (!keep.contains(r.conclusion)) continue;
    const EventSet rest = r.premise - v;
    if (!rest.subset_of(keep)) continue;
    if (!ses.consistent(r.premise | v | EventSet::singleton(r.conclusion))) continue;
    rules.push_back(Rule{remap(ses.universe(), sub, rest), *sub.find(ses.event_name(r.conclusion))});
  }
  return make_stable(ses.name(), std::move(sub), std::move(forbidden), std::move(rules));
}

EventSet local_history(const StableES& ses, EventId e, EventSet u) {
  if (e >= ses.size()) throw Error(ErrorKind::UnknownEvent, "unknown event index");
  if (!u.contains(e)) {
    throw Error(ErrorKind::Precondition, ses.event_name(e) + " is not in " + ses.universe().format(u));
  }
  if (!is_configuration(ses, u)) {
    throw Error(ErrorKind::NotAConfiguration, ses.universe().format(u) + " is not a configuration");
  }
  // Within a configuration every event has a unique minimal premise; the history is the
  // closure of e under those premises.
  EventSet out;
  std::vector<EventId> stack{e};
  while (!stack.empty()) {
    const EventId x = stack.back();
    stack.pop_back();
    if (out.contains(x)) continue;
    out.insert(x);
    std::optional<EventSet> least;
    for (const Rule& r : ses.rules()) {
      if (r.conclusion != x || !r.premise.subset_of(u - EventSet::singleton(x))) continue;
      if (!least || r.premise.subset_of(*least)) least = r.premise;
    }
    if (least) {
      for (EventId d : *least) stack.push_back(d);
    }
  }
  return out;
}

bool conflict(const StableES& ses, EventId e, EventId f, std::optional<EventSet> v) {
  if (e >= ses.size() || f >= ses.size()) throw Error(ErrorKind::UnknownEvent, "unknown event index");
  const EventSet pair = EventSet{e, f};
  if (v) {
    if (!is_configuration(ses, *v)) {
      throw Error(ErrorKind::NotAConfiguration, ses.universe().format(*v) + " is not a configuration");
    }
    return !ses.consistent(pair | *v);
  }
  for (EventSet w : configurations(ses)) {
    if (ses.consistent(pair | w)) return false;
  }
  return true;
}

bool immediate_conflict(const StableES& ses, EventId e, EventId f, std::optional<EventSet> v) {
  if (e >= ses.size() || f >= ses.size()) throw Error(ErrorKind::UnknownEvent, "unknown event index");
  StableAnalysis analysis(ses);
  if (v) {
    if (!analysis.is_configuration(*v)) {
      throw Error(ErrorKind::NotAConfiguration, ses.universe().format(*v) + " is not a configuration");
    }
    return analysis.immediate_conflict_under(e, f, *v);
  }
  return analysis.global_immediate(e, f);
}

std::vector<HistorySelection> star_histories(const StableES& ses, EventSet xs) {
  if (!xs.subset_of(ses.all())) throw Error(ErrorKind::UnknownEvent, "set mentions unknown events");
  StableAnalysis analysis(ses);
  std::vector<HistorySelection> out{HistorySelection{}};
  for (EventId e : xs) {
    std::vector<HistorySelection> next;
    for (const auto& partial : out) {
      for (EventSet h : analysis.histories_of(e)) {
        auto extended = partial;
        extended.push_back(h);
        next.push_back(std::move(extended));
      }
    }
    out = std::move(next);
  }
  return out;
}

SensibleReport check_sensible(const StableES& ses) {
  StableAnalysis analysis(ses);
  SensibleReport report;
  // Level-wise search for minimal consistent sets outside every configuration: a candidate
  // is only examined when all of its one-smaller subsets are reachable.
  std::unordered_set<EventSet> level{EventSet{}};
  while (!level.empty()) {
    std::unordered_set<EventSet> next;
    for (EventSet x : level) {
      const EventId start = x.empty() ? 0 : static_cast<EventId>(63 - std::countl_zero(x.bits())) + 1;
      for (EventId e = start; e < ses.size(); ++e) {
        const EventSet cand = x | EventSet::singleton(e);
        bool subsets_reachable = true;
        for (EventId d : x) {
          if (!level.contains(cand - EventSet::singleton(d))) {
            subsets_reachable = false;
            break;
          }
        }
        if (!subsets_reachable) continue;
        if (analysis.reachable(cand)) {
          next.insert(cand);
        } else if (ses.consistent(cand)) {
          report.pruned.push_back(cand);
        }
      }
    }
    level = std::move(next);
  }
  sort_canonical(report.pruned);
  report.sensible = report.pruned.empty();
  if (report.sensible) {
    report.pruned_ses = ses;
    return report;
  }
  std::vector<EventSet> forbidden = ses.forbidden();
  forbidden.insert(forbidden.end(), report.pruned.begin(), report.pruned.end());
  StableES probe = make_stable(ses.name(), ses.universe(), forbidden, {});
  std::vector<Rule> rules;
  for (const Rule& r : ses.rules()) {
    if (probe.consistent(r.premise | EventSet::singleton(r.conclusion))) rules.push_back(r);
  }
  report.pruned_ses = make_stable(ses.name(), ses.universe(), std::move(forbidden), std::move(rules));
  return report;
}

ConflictDrivenReport check_conflict_driven(const StableES& ses) {
  ConflictDrivenReport report;
  const SensibleReport sensible = check_sensible(ses);
  report.sensible = sensible.sensible;
  if (!sensible.sensible) report.unreachable_consistent = sensible.pruned.front();

  StableAnalysis analysis(ses);
  // Supersets of a forbidden set inherit its selections' pairs, so minimal sets suffice.
  for (EventSet f : ses.forbidden()) {
    if (!report.inconsistency_traced) break;
    for (const HistorySelection& t : star_histories(ses, f)) {
      EventSet joined;
      for (EventSet h : t) joined |= h;
      bool found = false;
      for (EventId a : joined) {
        for (EventId b : joined) {
          if (a != b && analysis.global_immediate(a, b)) found = true;
        }
      }
      if (!found) {
        report.inconsistency_traced = false;
        report.untraced_set = f;
        report.untraced_selection = t;
        break;
      }
    }
  }
  for (const auto& ic : analysis.immediate_conflicts()) {
    if (!analysis.global_conflict(ic.first, ic.second)) {
      report.conflicts_persist = false;
      report.transient_conflict = ConflictDrivenReport::Triple{ic.first, ic.second, ic.under};
      break;
    }
  }
  return report;
}

StableAnalysis::StableAnalysis(const StableES& ses) : ses_(ses) {
  configs_ = evs::configurations(ses_);
  config_set_.insert(configs_.begin(), configs_.end());
  for (EventSet v : configs_) {
    if (ses_.enabled_events(v).empty()) maximal_.push_back(v);
  }

  const std::size_t n = ses_.size();
  histories_.resize(n);
  for (EventSet x : configs_) {
    for (EventId e : x) {
      const EventSet h = compute_history(e, x);
      auto& list = histories_[e];
      if (std::find(list.begin(), list.end(), h) == list.end()) list.push_back(h);
    }
  }
  for (auto& list : histories_) sort_canonical(list);

  for (EventSet v : configs_) {
    const EventSet enabled = ses_.enabled_events(v);
    for (EventId e : enabled) {
      for (EventId f : enabled) {
        if (e != f && immediate_conflict_under(e, f, v)) immediate_.push_back({v, e, f});
      }
    }
  }

  global_conflict_.assign(n, EventSet{});
  for (EventId e = 0; e < n; ++e) {
    for (EventId f = 0; f < n; ++f) {
      bool all = true;
      for (EventSet v : configs_) {
        if (ses_.consistent(EventSet{e, f} | v)) {
          all = false;
          break;
        }
      }
      if (all) global_conflict_[e].insert(f);
    }
  }

  // e #μ e' iff every pair of enabling configurations contains a configuration under which
  // the two are in immediate conflict.
  global_immediate_.assign(n, EventSet{});
  std::vector<std::vector<EventSet>> enabling(n);
  for (EventSet v : configs_) {
    for (EventId e : ses_.enabled_events(v)) enabling[e].push_back(v);
  }
  std::map<std::pair<EventId, EventId>, std::vector<EventSet>> witnesses;
  for (const auto& ic : immediate_) witnesses[{ic.first, ic.second}].push_back(ic.under);
  for (const auto& [pair, unders] : witnesses) {
    const auto [e, f] = pair;
    bool all = true;
    for (EventSet v : enabling[e]) {
      for (EventSet w : enabling[f]) {
        const EventSet bound = v | w;
        bool exists = false;
        for (EventSet u : unders) {
          if (u.subset_of(bound)) {
            exists = true;
            break;
          }
        }
        if (!exists) {
          all = false;
          break;
        }
      }
      if (!all) break;
    }
    if (all) global_immediate_[e].insert(f);
  }
}

EventSet StableAnalysis::compute_history(EventId e, EventSet u) const {
  EventSet out;
  std::vector<EventId> stack{e};
  while (!stack.empty()) {
    const EventId x = stack.back();
    stack.pop_back();
    if (out.contains(x)) continue;
    out.insert(x);
    std::optional<EventSet> least;
    for (const Rule& r : ses_.rules()) {
      if (r.conclusion != x || !r.premise.subset_of(u - EventSet::singleton(x))) continue;
      if (!least || r.premise.subset_of(*least)) least = r.premise;
    }
    if (least) {
      for (EventId d : *least) stack.push_back(d);
    }
  }
  return out;
}

EventSet StableAnalysis::history(EventId e, EventSet u) const {
  if (u.contains(e)) return compute_history(e, u);
  return compute_history(e, u | EventSet::singleton(e));
}

bool StableAnalysis::immediate_conflict_under(EventId e, EventId f, EventSet v) const {
  if (e == f || !ses_.enables(v, e) || !ses_.enables(v, f)) return false;
  if (ses_.consistent(EventSet{e, f} | v)) return false;
  const EventSet he = history(e, v);
  const EventSet hf = history(f, v);
  for (EventId x : he) {
    for (EventId y : hf) {
      if (x == e && y == f) continue;
      if (!ses_.consistent(EventSet{x, y} | v)) return false;
    }
  }
  return true;
}

bool StableAnalysis::reachable(EventSet x) const {
  for (EventSet m : maximal_) {
    if (x.subset_of(m)) return true;
  }
  return false;
}

}  // namespace evs
