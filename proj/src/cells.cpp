#include "evs/cells.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <unordered_set>

#include "evs/errors.hpp"
#include "evs/translation.hpp"

namespace evs {

namespace {

// Stable hosts enumerate subsets of the future; cap the width.
constexpr std::size_t kMaxEnumeratedFuture = 22;

std::vector<EventSet> keep_minimal(std::vector<EventSet> sets) {
  sort_canonical(sets);
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<EventSet> out;
  for (EventSet s : sets) {
    bool has_smaller = std::any_of(out.begin(), out.end(), [&](EventSet m) { return m.subset_of(s); });
    if (!has_smaller) out.push_back(s);
  }
  return out;
}

// A simple path from -> x1 -> ... -> xk -> to with k >= 2, intermediates distinct and
// different from both endpoints. Neighbours are tried in index order.
std::optional<std::vector<EventId>> long_chain(const std::vector<EventSet>& adj, EventId from, EventId to) {
  const EventSet ends = EventSet{from, to};
  // Nodes from which `to` is reachable without passing through the endpoints.
  EventSet useful;
  for (EventId x = 0; x < adj.size(); ++x) {
    if (adj[x].contains(to) && !ends.contains(x)) useful.insert(x);
  }
  bool grew = true;
  while (grew) {
    grew = false;
    for (EventId x = 0; x < adj.size(); ++x) {
      if (!ends.contains(x) && !useful.contains(x) && adj[x].intersects(useful)) {
        useful.insert(x);
        grew = true;
      }
    }
  }
  std::vector<EventId> path{from};
  EventSet visited = ends;
  std::function<bool(EventId)> dfs = [&](EventId x) {
    if (path.size() >= 3 && adj[x].contains(to)) return true;
    for (EventId y : adj[x] & useful) {
      if (visited.contains(y)) continue;
      visited.insert(y);
      path.push_back(y);
      if (dfs(y)) return true;
      path.pop_back();
      visited.erase(y);
    }
    return false;
  };
  for (EventId y : adj[from] & useful) {
    visited.insert(y);
    path.push_back(y);
    if (dfs(y)) {
      path.push_back(to);
      return path;
    }
    path.pop_back();
    visited.erase(y);
  }
  return std::nullopt;
}

}  // namespace

namespace detail {

template <>
struct HostOps<PrimeES> {
  PrimeES host;
  std::vector<EventSet> configs;
  std::unordered_set<EventSet> config_set;
  std::vector<EventSet> imm;

  explicit HostOps(const PrimeES& h)
      : host(h), configs(evs::configurations(h)), config_set(configs.begin(), configs.end()),
        imm(immediate_conflicts(h)) {}

  EventSet future(EventSet v) const {
    EventSet out;
    for (EventId e : host.all() - v) {
      if (!host.conflicts(e).intersects(v) && host.conflict_free(host.history(e) | v)) out.insert(e);
    }
    return out;
  }

  EventSet enabled(EventSet v) const {
    EventSet out;
    for (EventId e : host.all() - v) {
      if (host.causes(e).subset_of(v) && !host.conflicts(e).intersects(v)) out.insert(e);
    }
    return out;
  }

  bool stopping_at(EventSet v, EventSet b) const {
    const EventSet fut = future(v);
    if (!b.subset_of(fut)) return false;
    for (EventId e : b) {
      if (!(host.causes(e) - v).subset_of(b)) return false;
      if (!(imm[e] & fut).subset_of(b)) return false;
    }
    return true;
  }

  // Stopping prefixes are closed under intersection, so the initial ones are among the
  // least stopping prefixes containing a single event.
  std::vector<EventSet> cell_candidates(EventSet v, EventSet fut) const {
    std::vector<EventSet> out;
    for (EventId e : fut) {
      EventSet cur = EventSet::singleton(e);
      while (true) {
        EventSet next = cur;
        for (EventId x : cur) next |= (host.causes(x) - v) | (imm[x] & fut);
        if (next == cur) break;
        cur = next;
      }
      out.push_back(cur);
    }
    return out;
  }
};

template <>
struct HostOps<StableES> {
  struct Triple {
    EventSet under;
    EventSet first_history;
    EventSet second_history;
  };

  StableES host;
  StableAnalysis analysis;
  std::vector<EventSet> configs;
  std::vector<Triple> triples;

  explicit HostOps(const StableES& h) : host(h), analysis(h), configs(analysis.configurations()) {
    for (const auto& ic : analysis.immediate_conflicts()) {
      triples.push_back({ic.under, analysis.history(ic.first, ic.under), analysis.history(ic.second, ic.under)});
    }
  }

  EventSet future(EventSet v) const {
    EventSet out;
    for (EventId e : host.all() - v) {
      if (host.consistent(v | EventSet::singleton(e))) out.insert(e);
    }
    return out;
  }

  EventSet enabled(EventSet v) const { return host.enabled_events(v); }

  bool prefix_at(EventSet v, EventSet b) const {
    for (EventId e : b) {
      bool justified = false;
      for (const Rule& r : host.rules()) {
        if (r.conclusion == e && (r.premise - v).subset_of(b) && host.consistent(r.premise | v)) {
          justified = true;
          break;
        }
      }
      if (!justified) return false;
    }
    return true;
  }

  // Closed under e #μ,w e' for every configuration w of the future: once the history of e
  // lies in b, so does the history of e'.
  bool closed_at(EventSet v, EventSet b) const {
    for (const Triple& t : triples) {
      if (!v.subset_of(t.under)) continue;
      if ((t.first_history - v).subset_of(b) && !(t.second_history - v).subset_of(b)) return false;
    }
    return true;
  }

  bool stopping_at(EventSet v, EventSet b) const {
    return b.subset_of(future(v)) && prefix_at(v, b) && closed_at(v, b);
  }

  std::vector<EventSet> cell_candidates(EventSet v, EventSet fut) const {
    if (fut.size() > kMaxEnumeratedFuture) {
      throw Error(ErrorKind::Precondition, "future of " + host.universe().format(v) + " has " +
                                               std::to_string(fut.size()) + " events; too many to enumerate");
    }
    std::vector<EventSet> out;
    for_each_subset(fut, [&](EventSet b) {
      if (!b.empty() && prefix_at(v, b) && closed_at(v, b)) out.push_back(b);
    });
    return out;
  }
};

}  // namespace detail

std::vector<EventSet> Covering::cells() const {
  std::vector<EventSet> out;
  for (const auto& s : steps) out.push_back(s.cell.events);
  sort_canonical(out);
  return out;
}

template <class Host>
CellAnalysis<Host>::CellAnalysis(const Host& host) : ops_(std::make_shared<detail::HostOps<Host>>(host)) {}

template <class Host>
const Host& CellAnalysis<Host>::host() const {
  return ops_->host;
}

template <class Host>
const std::vector<EventSet>& CellAnalysis<Host>::configurations() const {
  return ops_->configs;
}

template <class Host>
bool CellAnalysis<Host>::is_configuration(EventSet x) const {
  return std::binary_search(ops_->configs.begin(), ops_->configs.end(), x, canonical_less);
}

template <class Host>
EventSet CellAnalysis<Host>::future_events(EventSet v) const {
  return ops_->future(v);
}

template <class Host>
EventSet CellAnalysis<Host>::enabled_events(EventSet v) const {
  return ops_->enabled(v);
}

template <class Host>
bool CellAnalysis<Host>::is_stopping_prefix_at(EventSet v, EventSet b) const {
  if (!b.subset_of(ops_->host.all())) throw Error(ErrorKind::UnknownEvent, "set mentions unknown events");
  if (!is_configuration(v)) {
    throw Error(ErrorKind::NotAConfiguration, ops_->host.universe().format(v) + " is not a configuration");
  }
  return ops_->stopping_at(v, b);
}

template <class Host>
std::vector<EventSet> CellAnalysis<Host>::maximal_in(EventSet v, EventSet c) const {
  std::vector<EventSet> out;
  std::unordered_set<EventSet> seen{v};
  std::deque<EventSet> queue{v};
  while (!queue.empty()) {
    const EventSet u = queue.front();
    queue.pop_front();
    const EventSet ext = ops_->enabled(u) & c;
    if (ext.empty()) out.push_back(u - v);
    for (EventId e : ext) {
      const EventSet w = u | EventSet::singleton(e);
      if (seen.insert(w).second) queue.push_back(w);
    }
  }
  sort_canonical(out);
  return out;
}

template <class Host>
const std::vector<BranchingCell>& CellAnalysis<Host>::delta(EventSet v) const {
  auto it = delta_.find(v);
  if (it != delta_.end()) return it->second;
  const EventSet fut = ops_->future(v);
  std::vector<BranchingCell> cells;
  for (EventSet c : keep_minimal(ops_->cell_candidates(v, fut))) {
    cells.push_back(BranchingCell{c, v, maximal_in(v, c)});
  }
  return delta_.emplace(v, std::move(cells)).first->second;
}

template <class Host>
const std::vector<EventSet>& CellAnalysis<Host>::r_stopped() const {
  if (r_stopped_) return *r_stopped_;
  std::vector<EventSet> out;
  std::unordered_set<EventSet> seen{EventSet{}};
  std::deque<EventSet> queue{EventSet{}};
  while (!queue.empty()) {
    const EventSet u = queue.front();
    queue.pop_front();
    out.push_back(u);
    for (const auto& c : delta(u)) {
      for (EventSet w : c.maximal) {
        if (seen.insert(u | w).second) queue.push_back(u | w);
      }
    }
  }
  sort_canonical(out);
  for (EventSet u : out) r_stopped_set_[u] = true;
  r_stopped_ = std::move(out);
  return *r_stopped_;
}

template <class Host>
bool CellAnalysis<Host>::is_r_stopped(EventSet v) const {
  r_stopped();
  return r_stopped_set_.contains(v);
}

template <class Host>
const std::vector<BranchingCell>& CellAnalysis<Host>::enabled_cells(EventSet v) const {
  if (!is_r_stopped(v)) {
    throw Error(ErrorKind::NotRStopped, ops_->host.universe().format(v) + " is not a finite R-stopped configuration");
  }
  return delta(v);
}

template <class Host>
DecompositionResult CellAnalysis<Host>::valid_decomposition(EventSet v) const {
  if (!is_configuration(v)) {
    throw Error(ErrorKind::NotAConfiguration, ops_->host.universe().format(v) + " is not a configuration");
  }
  DecompositionResult result;
  std::unordered_set<EventSet> failed;
  std::vector<CoveringStep> steps;
  std::function<bool(EventSet)> search = [&](EventSet u) {
    if (u == v) return true;
    if (failed.contains(u)) return false;
    if (u.size() > result.reached.size() || (u.size() == result.reached.size() && canonical_less(u, result.reached))) {
      result.reached = u;
    }
    for (const auto& c : delta(u)) {
      const EventSet w = v & c.events;
      if (w.empty() || std::find(c.maximal.begin(), c.maximal.end(), w) == c.maximal.end()) continue;
      steps.push_back({c, w});
      if (search(u | w)) return true;
      steps.pop_back();
    }
    failed.insert(u);
    return false;
  };
  if (search(EventSet{})) {
    result.covering = Covering{v, steps};
    result.reached = v;
  } else {
    result.reason = "no cell enabled at " + ops_->host.universe().format(result.reached) +
                    " is resolved by the remaining events " + ops_->host.universe().format(v - result.reached);
  }
  return result;
}

template <class Host>
const std::set<std::vector<EventSet>>& CellAnalysis<Host>::cell_sets_from(EventSet u, EventSet v) const {
  auto& memo = cell_sets_[v];
  auto it = memo.find(u);
  if (it != memo.end()) return it->second;
  std::set<std::vector<EventSet>> out;
  if (u == v) {
    out.insert(std::vector<EventSet>{});
  } else {
    for (const auto& c : delta(u)) {
      const EventSet w = v & c.events;
      if (w.empty() || std::find(c.maximal.begin(), c.maximal.end(), w) == c.maximal.end()) continue;
      for (const auto& rest : cell_sets_from(u | w, v)) {
        auto cells = rest;
        cells.push_back(c.events);
        sort_canonical(cells);
        out.insert(std::move(cells));
      }
    }
  }
  return cell_sets_[v].emplace(u, std::move(out)).first->second;
}

template <class Host>
std::set<std::vector<EventSet>> CellAnalysis<Host>::decomposition_cell_sets(EventSet v) const {
  if (!is_configuration(v)) {
    throw Error(ErrorKind::NotAConfiguration, ops_->host.universe().format(v) + " is not a configuration");
  }
  return cell_sets_from(EventSet{}, v);
}

template <class Host>
Covering CellAnalysis<Host>::covering(EventSet v) const {
  if (!is_configuration(v) || !is_r_stopped(v)) {
    throw Error(ErrorKind::NotRStopped, ops_->host.universe().format(v) + " is not a finite R-stopped configuration");
  }
  Covering cov = *valid_decomposition(v).covering;
  const auto& sets = cell_sets_from(EventSet{}, v);
  cov.invariant = sets.size() == 1;
  for (const auto& cells : sets) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      for (std::size_t j = i + 1; j < cells.size(); ++j) {
        if (cells[i].intersects(cells[j])) cov.disjoint = false;
      }
    }
  }
  return cov;
}

template <class Host>
std::vector<BranchingCell> CellAnalysis<Host>::all_cells() const {
  std::vector<BranchingCell> out;
  std::unordered_set<EventSet> seen;
  for (EventSet v : r_stopped()) {
    for (const auto& c : delta(v)) {
      if (seen.insert(c.events).second) out.push_back(c);
    }
  }
  return out;
}

template class CellAnalysis<PrimeES>;
template class CellAnalysis<StableES>;

EventSet minimal_stopping_prefix(const PrimeES& es, EventSet x) {
  if (!x.subset_of(es.all())) throw Error(ErrorKind::UnknownEvent, "set mentions unknown events");
  const auto imm = immediate_conflicts(es);
  EventSet cur = x;
  while (true) {
    EventSet next = es.history(cur);
    for (EventId e : cur) next |= imm[e];
    if (next == cur) return cur;
    cur = next;
  }
}

EventSet minimal_stopping_prefix(const StableES&, EventSet) {
  throw Error(ErrorKind::WrongHost, "stable structures have no least stopping prefix containing a set");
}

namespace {

template <class Host>
PreRegularReport pre_regular(const Host& host) {
  CellAnalysis<Host> cells(host);
  PreRegularReport report;
  for (EventSet v : cells.configurations()) {
    const std::size_t n = cells.enabled_events(v).size();
    report.enabled_counts.emplace_back(v, n);
    report.max_enabled = std::max(report.max_enabled, n);
  }
  return report;
}

template <class Host>
FlatnessReport cells_flat(const Host& host) {
  const JumpReport jump = check_jump_free(host);
  if (!jump.jump_free) throw Error(ErrorKind::Precondition, "structure is not jump-free");
  CellAnalysis<Host> cells(host);
  FlatnessReport report;
  for (EventSet v : cells.r_stopped()) {
    const EventSet initial = cells.enabled_events(v);
    for (const auto& c : cells.enabled_cells(v)) {
      const EventSet outside = c.events - initial;
      if (!outside.empty()) {
        report.flat = false;
        report.cell = c;
        report.non_initial = outside.front();
        return report;
      }
    }
  }
  return report;
}

template <class Host>
void confusing_cells(const Host& host, ConfusionReport& report) {
  CellAnalysis<Host> cells(host);
  for (EventSet v : cells.r_stopped()) {
    const EventSet initial = cells.enabled_events(v);
    const auto& delta = cells.enabled_cells(v);
    for (std::size_t i = 0; i < delta.size(); ++i) {
      if (!report.concurrent_cell) {
        for (EventSet w : delta[i].maximal) {
          if ((w & initial).size() >= 2) {
            report.concurrent_cell = delta[i];
            report.concurrent_choice = w;
            break;
          }
        }
      }
      for (std::size_t j = i + 1; j < delta.size() && !report.overlapping; ++j) {
        if (delta[i].events.intersects(delta[j].events)) report.overlapping = std::make_pair(delta[i], delta[j]);
      }
    }
  }
}

std::optional<std::array<EventId, 3>> asymmetric_triple(const std::vector<EventSet>& imm) {
  for (EventId f = 0; f < imm.size(); ++f) {
    for (EventId e : imm[f]) {
      for (EventId g : imm[f]) {
        if (e != g && !imm[e].contains(g)) return std::array<EventId, 3>{e, f, g};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

PreRegularReport check_pre_regular(const PrimeES& es) { return pre_regular(es); }
PreRegularReport check_pre_regular(const StableES& ses) { return pre_regular(ses); }

LocallyFiniteReport check_locally_finite(const PrimeES& es) {
  LocallyFiniteReport report;
  CellAnalysis<PrimeES> cells(es);
  for (EventId e = 0; e < es.size(); ++e) {
    if (!cells.is_stopping_prefix(minimal_stopping_prefix(es, EventSet::singleton(e)))) report.uncovered.insert(e);
  }
  report.holds = report.uncovered.empty();
  return report;
}

LocallyFiniteReport check_locally_finite(const StableES& ses) {
  // Every stopping prefix lies inside the largest prefix, and the largest prefix is itself
  // stopping, so exactly its events are covered.
  EventSet largest = ses.all();
  bool shrunk = true;
  while (shrunk) {
    shrunk = false;
    for (EventId e : largest) {
      bool justified = false;
      for (const Rule& r : ses.rules()) {
        if (r.conclusion == e && r.premise.subset_of(largest) && ses.consistent(r.premise)) justified = true;
      }
      if (!justified) {
        largest.erase(e);
        shrunk = true;
      }
    }
  }
  LocallyFiniteReport report;
  CellAnalysis<StableES> cells(ses);
  report.uncovered = cells.is_stopping_prefix(largest) ? ses.all() - largest : ses.all();
  report.holds = report.uncovered.empty();
  return report;
}

JumpReport check_jump_free(const PrimeES& es) {
  const auto imm = immediate_conflicts(es);
  JumpReport report;
  for (EventId e = 0; e < es.size(); ++e) {
    for (EventId f = 0; f < es.size(); ++f) {
      if (!es.precedes(e, f)) continue;
      if (auto chain = long_chain(imm, e, f)) {
        report.jump_free = false;
        report.chain = *chain;
        return report;
      }
    }
  }
  return report;
}

JumpReport check_jump_free(const StableES& ses) {
  StableAnalysis analysis(ses);
  JumpReport report;
  for (EventSet v : analysis.configurations()) {
    std::vector<EventSet> adj(ses.size());
    std::map<std::pair<EventId, EventId>, EventSet> edge_config;
    for (const auto& ic : analysis.immediate_conflicts()) {
      if (!ic.under.subset_of(v)) continue;
      adj[ic.first].insert(ic.second);
      edge_config.emplace(std::make_pair(ic.first, ic.second), ic.under);
    }
    for (EventId e : v) {
      for (EventId f : v) {
        if (e == f || !analysis.history(f, v).contains(e)) continue;
        if (auto chain = long_chain(adj, e, f)) {
          report.jump_free = false;
          report.chain = *chain;
          report.under = v;
          for (std::size_t i = 0; i + 1 < chain->size(); ++i) {
            report.edge_configs.push_back(edge_config.at({(*chain)[i], (*chain)[i + 1]}));
          }
          return report;
        }
      }
    }
  }
  return report;
}

FlatnessReport check_cells_flat(const PrimeES& es) { return cells_flat(es); }
FlatnessReport check_cells_flat(const StableES& ses) { return cells_flat(ses); }

CellIsomorphismReport check_cell_isomorphism(const StableES& ses) {
  CellIsomorphismReport report;
  const ConflictDrivenReport cd = check_conflict_driven(ses);
  if (!cd.holds()) {
    report.precondition_ok = false;
    report.precondition_failure = "not conflict-driven";
  }
  const JumpReport jump = check_jump_free(ses);
  if (!jump.jump_free) {
    report.precondition_ok = false;
    if (!report.precondition_failure.empty()) report.precondition_failure += "; ";
    report.precondition_failure += "not jump-free";
  }
  if (!report.precondition_ok) return report;

  AssociatedES assoc;
  try {
    assoc = associated_es(ses);
  } catch (const Error& err) {
    report.mismatch = err.what();
    return report;
  }
  StableAnalysis analysis(ses);
  CellAnalysis<StableES> lhs(ses);
  CellAnalysis<PrimeES> rhs(assoc.es);
  const EventUniverse& src = ses.universe();
  const EventUniverse& hat = assoc.es.universe();
  auto lift = [&](EventSet v) {
    EventSet out;
    for (EventId e : v) out.insert(hat.id(history_name(src, e, analysis.history(e, v))));
    return out;
  };

  if (lhs.r_stopped().size() != rhs.r_stopped().size()) {
    report.mismatch = "R-stopped configuration counts differ: " + std::to_string(lhs.r_stopped().size()) + " vs " +
                      std::to_string(rhs.r_stopped().size());
    return report;
  }
  for (EventSet v : lhs.r_stopped()) {
    const EventSet vhat = lift(v);
    if (!rhs.is_r_stopped(vhat)) {
      report.mismatch = src.format(v) + " is R-stopped but its image " + hat.format(vhat) + " is not";
      return report;
    }
    const auto& left = lhs.enabled_cells(v);
    const auto& right = rhs.enabled_cells(vhat);
    report.cells_stable += left.size();
    report.cells_prime += right.size();
    if (left.size() != right.size()) {
      report.mismatch = "at " + src.format(v) + ": " + std::to_string(left.size()) + " cells vs " +
                        std::to_string(right.size());
      return report;
    }
    std::vector<bool> used(left.size(), false);
    for (const auto& rc : right) {
      const EventSet image = assoc.map.apply(rc.events);
      bool matched = false;
      for (std::size_t i = 0; i < left.size() && !matched; ++i) {
        if (used[i] || left[i].events != image || image.size() != rc.events.size()) continue;
        std::vector<EventSet> omega;
        for (EventSet w : rc.maximal) omega.push_back(assoc.map.apply(w));
        sort_canonical(omega);
        if (omega == left[i].maximal) {
          used[i] = true;
          matched = true;
        }
      }
      if (!matched) {
        report.mismatch = "at " + src.format(v) + ": cell " + hat.format(rc.events) + " has no counterpart";
        return report;
      }
    }
  }
  report.isomorphic = true;
  return report;
}

ConfusionReport check_confusion(const PrimeES& es) {
  ConfusionReport report;
  const auto imm = immediate_conflicts(es);
  report.asymmetric_triple = asymmetric_triple(imm);
  for (EventId e = 0; e < es.size() && !report.unequal_causes; ++e) {
    for (EventId f : imm[e]) {
      if (es.causes(e) != es.causes(f)) {
        report.unequal_causes = std::make_pair(e, f);
        break;
      }
    }
  }
  confusing_cells(es, report);
  report.confused = report.asymmetric_triple || report.unequal_causes || report.concurrent_cell || report.overlapping;
  return report;
}

ConfusionReport check_confusion(const StableES& ses) {
  ConfusionReport report;
  StableAnalysis analysis(ses);
  std::vector<EventSet> imm(ses.size());
  for (EventId e = 0; e < ses.size(); ++e) {
    for (EventId f = 0; f < ses.size(); ++f) {
      if (analysis.global_immediate(e, f)) imm[e].insert(f);
    }
  }
  report.asymmetric_triple = asymmetric_triple(imm);
  confusing_cells(ses, report);
  report.confused = report.asymmetric_triple || report.concurrent_cell || report.overlapping;
  return report;
}

}  // namespace evs
