#include "evs/probability.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <type_traits>

#include "evs/errors.hpp"

namespace evs {

namespace {

using NameSet = std::vector<std::string>;

// Ω_c per cell event set; the same event set must carry the same Ω wherever it is enabled.
template <class Host>
std::unordered_map<EventSet, const BranchingCell*> cell_index(const CellAnalysis<Host>& analysis) {
  std::unordered_map<EventSet, const BranchingCell*> out;
  for (EventSet v : analysis.r_stopped()) {
    for (const auto& c : analysis.enabled_cells(v)) {
      auto [it, fresh] = out.emplace(c.events, &c);
      if (!fresh && it->second->maximal != c.maximal) {
        const auto& u = analysis.host().universe();
        throw Error(ErrorKind::Distribution, "cell " + u.format(c.events) + " has different maximal configurations at " +
                                                 u.format(it->second->enabled_at) + " and " + u.format(v));
      }
    }
  }
  return out;
}

}  // namespace

template <class Host>
LocallyRandomizedES<Host>::LocallyRandomizedES(const Host& host, bool allow_truncated)
    : analysis_(host), allow_truncated_(allow_truncated) {
  if constexpr (std::is_same_v<Host, PrimeES>) {
    if (host.truncated() && !allow_truncated) {
      throw Error(ErrorKind::Precondition, "structure is a truncated unfolding; cells near the frontier may be incomplete");
    }
  }
  EventSet occurring;
  for (EventSet x : analysis_.configurations()) occurring |= x;
  const EventSet uncovered = check_locally_finite(host).uncovered & occurring;
  if (!uncovered.empty()) {
    throw Error(ErrorKind::Precondition,
                "structure is not locally finite: " + host.universe().format(uncovered) + " lie in no stopping prefix");
  }
}

template <class Host>
void LocallyRandomizedES<Host>::attach(const std::map<NameSet, std::map<NameSet, double>>& by_name) {
  const auto& u = host().universe();
  by_name_ = by_name;
  dists_.clear();
  index_.clear();
  for (const auto& c : analysis_.all_cells()) {
    auto it = by_name.find(u.names_of(c.events));
    if (it == by_name.end()) throw Error(ErrorKind::Distribution, "no distribution for cell " + u.format(c.events));
    CellDistribution d{c.events, c.maximal, {}};
    for (EventSet w : c.maximal) {
      auto wt = it->second.find(u.names_of(w));
      if (wt == it->second.end()) {
        throw Error(ErrorKind::Distribution, "no weight for " + u.format(w) + " in cell " + u.format(c.events));
      }
      d.weights.push_back(wt->second);
    }
    index_.emplace(c.events, dists_.size());
    dists_.push_back(std::move(d));
  }
}

template <class Host>
LocallyRandomizedES<Host> LocallyRandomizedES<Host>::uniform(const Host& host, bool allow_truncated) {
  LocallyRandomizedES out(host, allow_truncated);
  const auto& u = host.universe();
  std::map<NameSet, std::map<NameSet, double>> by_name;
  for (const auto& [events, cell] : cell_index(out.analysis_)) {
    auto& weights = by_name[u.names_of(events)];
    for (EventSet w : cell->maximal) weights[u.names_of(w)] = 1.0 / static_cast<double>(cell->maximal.size());
  }
  out.attach(by_name);
  return out;
}

template <class Host>
LocallyRandomizedES<Host> LocallyRandomizedES<Host>::from_table(const Host& host, const DistributionTable& table,
                                                                bool allow_truncated) {
  LocallyRandomizedES out(host, allow_truncated);
  const auto& u = host.universe();
  const auto cells = cell_index(out.analysis_);
  std::map<NameSet, std::map<NameSet, double>> by_name;
  for (const auto& entry : table.cells) {
    const EventSet events = u.set_of(entry.events, entry.line);
    auto cell = cells.find(events);
    if (cell == cells.end()) {
      throw Error(ErrorKind::Distribution, u.format(events) + " is not a branching cell", entry.line);
    }
    const NameSet key = u.names_of(events);
    if (by_name.contains(key)) throw Error(ErrorKind::Distribution, "cell " + u.format(events) + " listed twice", entry.line);
    auto& weights = by_name[key];
    double sum = 0;
    for (const auto& w : entry.weights) {
      const EventSet choice = u.set_of(w.choice, w.line);
      const auto& omega = cell->second->maximal;
      if (std::find(omega.begin(), omega.end(), choice) == omega.end()) {
        throw Error(ErrorKind::Distribution,
                    u.format(choice) + " is not a maximal configuration of cell " + u.format(events), w.line);
      }
      if (!(w.weight >= 0)) throw Error(ErrorKind::Distribution, "negative weight", w.line);
      if (!weights.emplace(u.names_of(choice), w.weight).second) {
        throw Error(ErrorKind::Distribution, u.format(choice) + " weighted twice", w.line);
      }
      sum += w.weight;
    }
    for (EventSet w : cell->second->maximal) {
      if (!weights.contains(u.names_of(w))) {
        throw Error(ErrorKind::Distribution, "no weight for " + u.format(w) + " in cell " + u.format(events), entry.line);
      }
    }
    if (std::abs(sum - 1.0) > kProbabilityTolerance) {
      throw Error(ErrorKind::Distribution, "weights of cell " + u.format(events) + " sum to " + std::to_string(sum),
                  entry.line);
    }
  }
  out.attach(by_name);
  return out;
}

template <class Host>
DistributionTable LocallyRandomizedES<Host>::table() const {
  const auto& u = host().universe();
  DistributionTable out;
  out.name = host().name();
  for (const auto& d : dists_) {
    DistributionTable::Cell cell{u.names_of(d.cell), {}, 0};
    for (std::size_t i = 0; i < d.outcomes.size(); ++i) cell.weights.push_back({u.names_of(d.outcomes[i]), d.weights[i], 0});
    out.cells.push_back(std::move(cell));
  }
  return out;
}

template <class Host>
double LocallyRandomizedES<Host>::q(EventSet cell, EventSet choice) const {
  auto it = index_.find(cell);
  if (it == index_.end()) {
    throw Error(ErrorKind::Distribution, host().universe().format(cell) + " is not a branching cell");
  }
  const auto& d = dists_[it->second];
  for (std::size_t i = 0; i < d.outcomes.size(); ++i) {
    if (d.outcomes[i] == choice) return d.weights[i];
  }
  return 0.0;
}

template <class Host>
double LocallyRandomizedES<Host>::likelihood(EventSet v) const {
  if (!analysis_.is_configuration(v) || !analysis_.is_r_stopped(v)) {
    throw Error(ErrorKind::NotRStopped, host().universe().format(v) + " is not a finite R-stopped configuration");
  }
  const DecompositionResult d = analysis_.valid_decomposition(v);
  double p = 1.0;
  for (const auto& step : d.covering->steps) p *= q(step.cell.events, step.choice);
  return p;
}

template <class Host>
Measure LocallyRandomizedES<Host>::global_measure() const {
  Measure m;
  for (EventSet w : analysis_.configurations()) {
    if (!analysis_.enabled_events(w).empty()) continue;
    if (!analysis_.is_r_stopped(w)) {
      throw Error(ErrorKind::NotRStopped, "maximal configuration " + host().universe().format(w) + " has no covering");
    }
    m.outcomes.push_back(w);
    m.probabilities.push_back(likelihood(w));
    m.mass += m.probabilities.back();
  }
  if (std::abs(m.mass - 1.0) > kProbabilityTolerance) {
    throw Error(ErrorKind::Distribution, "maximal configurations carry total mass " + std::to_string(m.mass));
  }
  return m;
}

template <class Host>
double LocallyRandomizedES<Host>::shadow(EventSet v) const {
  if (!analysis_.is_configuration(v)) {
    throw Error(ErrorKind::NotAConfiguration, host().universe().format(v) + " is not a configuration");
  }
  const Measure m = global_measure();
  double p = 0;
  for (std::size_t i = 0; i < m.outcomes.size(); ++i) {
    if (v.subset_of(m.outcomes[i])) p += m.probabilities[i];
  }
  return p;
}

template <class Host>
SampleRun LocallyRandomizedES<Host>::sample_run(std::mt19937_64& rng, CellOrder order) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SampleRun run;
  while (true) {
    const auto& cells = analysis_.enabled_cells(run.configuration);
    if (cells.empty()) break;
    const auto& cell = order == CellOrder::CanonicalFirst ? cells.front() : cells.back();
    const auto& d = dists_[index_.at(cell.events)];
    const double r = unit(rng);
    double acc = 0;
    std::size_t pick = d.outcomes.size() - 1;
    for (std::size_t i = 0; i < d.outcomes.size(); ++i) {
      acc += d.weights[i];
      if (r < acc) {
        pick = i;
        break;
      }
    }
    // Skip trailing zero-weight outcomes left over from rounding.
    while (pick > 0 && d.weights[pick] == 0) --pick;
    const EventSet choice = d.outcomes[pick];
    if (choice.empty()) break;
    run.trace.push_back({cell.events, choice});
    run.configuration |= choice;
  }
  return run;
}

template <class Host>
SampleRun LocallyRandomizedES<Host>::sample_run(std::uint64_t seed, CellOrder order) const {
  std::mt19937_64 rng(seed);
  return sample_run(rng, order);
}

template <class Host>
LocallyRandomizedES<Host> LocallyRandomizedES<Host>::future(EventSet u) const {
  if (!analysis_.is_configuration(u) || !analysis_.is_r_stopped(u)) {
    throw Error(ErrorKind::NotRStopped, host().universe().format(u) + " is not a finite R-stopped configuration");
  }
  LocallyRandomizedES out(evs::future(host(), u), allow_truncated_);
  out.attach(by_name_);
  return out;
}

template class LocallyRandomizedES<PrimeES>;
template class LocallyRandomizedES<StableES>;

}  // namespace evs
