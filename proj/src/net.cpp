#include "evs/net.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "evs/errors.hpp"

namespace evs {

SafeNet validate_net(const RawNet& raw) {
  SafeNet net;
  net.name_ = raw.name;
  net.places_ = raw.places;
  net.transitions_ = raw.transitions;
  std::sort(net.places_.begin(), net.places_.end());
  std::sort(net.transitions_.begin(), net.transitions_.end());
  for (const auto* names : {&net.places_, &net.transitions_}) {
    for (const auto& n : *names) {
      if (!valid_identifier(n)) throw Error(ErrorKind::InvalidIdentifier, "invalid identifier '" + n + "'");
    }
    auto dup = std::adjacent_find(names->begin(), names->end());
    if (dup != names->end()) throw Error(ErrorKind::DuplicateEvent, "duplicate name '" + *dup + "'");
  }
  auto index_of = [](const std::vector<std::string>& names, const std::string& n) -> std::optional<std::size_t> {
    auto it = std::lower_bound(names.begin(), names.end(), n);
    if (it == names.end() || *it != n) return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
  };
  for (const auto& p : net.places_) {
    if (index_of(net.transitions_, p)) {
      throw Error(ErrorKind::InvalidNet, "'" + p + "' is both a place and a transition");
    }
  }

  net.pre_.assign(net.transitions_.size(), {});
  net.post_.assign(net.transitions_.size(), {});
  for (const auto& arc : raw.arcs) {
    const auto fp = index_of(net.places_, arc.from), ft = index_of(net.transitions_, arc.from);
    const auto tp = index_of(net.places_, arc.to), tt = index_of(net.transitions_, arc.to);
    if (!fp && !ft) throw Error(ErrorKind::InvalidNet, "unknown node '" + arc.from + "'", arc.line);
    if (!tp && !tt) throw Error(ErrorKind::InvalidNet, "unknown node '" + arc.to + "'", arc.line);
    if (fp && tp) throw Error(ErrorKind::InvalidNet, "arc joins two places", arc.line);
    if (ft && tt) throw Error(ErrorKind::InvalidNet, "arc joins two transitions", arc.line);
    if (fp) {
      net.pre_[*tt].push_back(*fp);
    } else {
      net.post_[*ft].push_back(*tp);
    }
  }
  for (auto* lists : {&net.pre_, &net.post_}) {
    for (auto& l : *lists) {
      std::sort(l.begin(), l.end());
      l.erase(std::unique(l.begin(), l.end()), l.end());
    }
  }
  for (std::size_t t = 0; t < net.transitions_.size(); ++t) {
    if (net.pre_[t].empty()) {
      throw Error(ErrorKind::InvalidNet, "transition '" + net.transitions_[t] + "' has no input place");
    }
  }
  for (const auto& m : raw.marking) {
    auto p = index_of(net.places_, m);
    if (!p) throw Error(ErrorKind::InvalidNet, "marked place '" + m + "' is not a place", raw.marking_line);
    net.marking_.push_back(*p);
  }
  std::sort(net.marking_.begin(), net.marking_.end());
  if (std::adjacent_find(net.marking_.begin(), net.marking_.end()) != net.marking_.end()) {
    throw Error(ErrorKind::UnsafeNet, "initial marking puts two tokens on one place", raw.marking_line);
  }
  return net;
}

namespace {

struct Condition {
  std::size_t place;
  std::optional<std::size_t> producer;
};

struct Event {
  std::size_t transition;
  std::vector<std::size_t> preset;
  std::vector<std::size_t> postset;
  std::set<std::size_t> history;  // events, including this one
};

class Unfolder {
 public:
  explicit Unfolder(const SafeNet& net) : net_(net) {
    for (std::size_t p : net.marking()) conditions_.push_back({p, std::nullopt});
  }

  std::set<std::size_t> history_of(const std::vector<std::size_t>& conds) const {
    std::set<std::size_t> out;
    for (std::size_t b : conds) {
      if (auto e = conditions_[b].producer) out.insert(events_[*e].history.begin(), events_[*e].history.end());
    }
    return out;
  }

  // The conditions are jointly marked after firing the union of their histories.
  bool co_set(const std::vector<std::size_t>& conds) const {
    const auto h = history_of(conds);
    std::set<std::size_t> consumed;
    for (std::size_t e : h) {
      for (std::size_t b : events_[e].preset) {
        if (!consumed.insert(b).second) return false;
      }
    }
    for (std::size_t b : conds) {
      if (consumed.contains(b)) return false;
    }
    return true;
  }

  struct Extension {
    std::size_t history_size;
    std::string transition;
    std::vector<std::size_t> conds;
    std::size_t t;
    bool operator<(const Extension& o) const {
      return std::tie(history_size, transition, conds) < std::tie(o.history_size, o.transition, o.conds);
    }
  };

  std::optional<Extension> next_extension() const {
    std::optional<Extension> best;
    for (std::size_t t = 0; t < net_.transitions().size(); ++t) {
      const auto& pre = net_.preset()[t];
      std::vector<std::vector<std::size_t>> options(pre.size());
      for (std::size_t i = 0; i < pre.size(); ++i) {
        for (std::size_t b = 0; b < conditions_.size(); ++b) {
          if (conditions_[b].place == pre[i]) options[i].push_back(b);
        }
        if (options[i].empty()) break;
      }
      std::vector<std::size_t> pick(pre.size());
      auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == pre.size()) {
          std::vector<std::size_t> conds = pick;
          std::sort(conds.begin(), conds.end());
          if (existing_.contains({t, conds}) || !co_set(conds)) return;
          Extension ext{history_of(conds).size() + 1, net_.transitions()[t], conds, t};
          if (!best || ext < *best) best = ext;
          return;
        }
        for (std::size_t b : options[i]) {
          pick[i] = b;
          self(self, i + 1);
        }
      };
      if (std::all_of(options.begin(), options.end(), [](const auto& o) { return !o.empty(); })) rec(rec, 0);
    }
    return best;
  }

  void add(const Extension& ext) {
    const std::size_t id = events_.size();
    Event ev{ext.t, ext.conds, {}, history_of(ext.conds)};
    ev.history.insert(id);
    existing_.insert({ext.t, ext.conds});
    events_.push_back(ev);
    for (std::size_t p : net_.postset()[ext.t]) {
      const std::size_t b = conditions_.size();
      conditions_.push_back({p, id});
      events_[id].postset.push_back(b);
      for (std::size_t other = 0; other < b; ++other) {
        if (conditions_[other].place == p && co_set({other, b})) unsafe(p, other, b);
      }
    }
  }

  [[noreturn]] void unsafe(std::size_t place, std::size_t b1, std::size_t b2) const {
    const auto h = history_of({b1, b2});
    std::string seq;
    for (std::size_t e : h) {
      if (!seq.empty()) seq += ' ';
      seq += net_.transitions()[events_[e].transition];
    }
    throw Error(ErrorKind::UnsafeNet,
                "place '" + net_.places()[place] + "' holds two tokens after firing: " + (seq.empty() ? "(nothing)" : seq));
  }

  Unfolding result(bool truncated) const {
    std::map<std::size_t, std::size_t> occurrences;
    for (const auto& e : events_) ++occurrences[e.transition];
    std::map<std::size_t, std::size_t> seen;
    std::vector<std::string> names;
    for (const auto& e : events_) {
      const std::string& t = net_.transitions()[e.transition];
      names.push_back(occurrences[e.transition] == 1 ? t : t + "." + std::to_string(++seen[e.transition]));
    }
    EventUniverse u(names);
    const std::size_t n = events_.size();
    std::vector<EventId> id(n);
    for (std::size_t i = 0; i < n; ++i) id[i] = *u.find(names[i]);
    std::vector<EventSet> causes(n), conflicts(n);
    std::vector<std::vector<std::size_t>> consumers(conditions_.size());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t b : events_[i].preset) {
        consumers[b].push_back(i);
        if (auto p = conditions_[b].producer) causes[id[i]].insert(id[*p]);
      }
    }
    for (const auto& cs : consumers) {
      for (std::size_t a : cs) {
        for (std::size_t b : cs) {
          if (a != b) conflicts[id[a]].insert(id[b]);
        }
      }
    }
    Unfolding out;
    out.es = make_prime(net_.name(), u, std::move(causes), std::move(conflicts));
    out.es.set_truncated(truncated);
    out.truncated = truncated;
    out.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.labels[id[i]] = net_.transitions()[events_[i].transition];
    out.conditions = conditions_.size();
    return out;
  }

  std::size_t size() const { return events_.size(); }

 private:
  const SafeNet& net_;
  std::vector<Condition> conditions_;
  std::vector<Event> events_;
  std::set<std::pair<std::size_t, std::vector<std::size_t>>> existing_;
};

}  // namespace

Unfolding unfold_net(const SafeNet& net, std::size_t max_events) {
  if (max_events == 0) throw Error(ErrorKind::Precondition, "event bound must be positive");
  if (max_events > kMaxEvents) {
    throw Error(ErrorKind::TooManyEvents, "event bound exceeds " + std::to_string(kMaxEvents));
  }
  Unfolder unfolder(net);
  while (true) {
    auto ext = unfolder.next_extension();
    if (!ext) return unfolder.result(false);
    if (unfolder.size() == max_events) return unfolder.result(true);
    unfolder.add(*ext);
  }
}

}  // namespace evs
