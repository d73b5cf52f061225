#include <doctest.h>

#include <algorithm>

#include "evs/errors.hpp"
#include "evs/io.hpp"
#include "support/fixtures.hpp"
#include "support/generator.hpp"
#include "support/oracle.hpp"

using namespace evs;

namespace {

EventSet s(const StableES& ses, std::initializer_list<std::string_view> names) { return ses.universe().set_of(names); }

bool contains(const std::vector<EventSet>& v, EventSet x) { return std::find(v.begin(), v.end(), x) != v.end(); }

std::vector<EventSet> minimal_unreachable(const StableES& ses) {
  const auto configs = oracle::stable_configs(ses);
  std::vector<EventSet> bad;
  for (EventSet x : oracle::subsets(ses.all())) {
    if (oracle::consistent(ses, x) && !oracle::bounded(configs, x)) bad.push_back(x);
  }
  return oracle::minimal_nonempty(bad);
}

}  // namespace

TEST_CASE("validation of stable structures") {
  const StableES example = fx::stable("example.ses");
  CHECK(example.size() == 6);
  CHECK(example.forbidden().size() == 4);
  CHECK(example.rules().size() == 7);
  CHECK(make_stable("empty", EventUniverse{}, {}, {}).size() == 0);

  RawStable unstable;
  unstable.events = {"a", "b", "c"};
  unstable.rules = {{{}, "a", 1}, {{}, "b", 2}, {{"a"}, "c", 3}, {{"b"}, "c", 4}};
  try {
    validate_stable(unstable);
    FAIL("expected a stability violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StabilityViolation);
    CHECK(e.line() > 0);
  }
  unstable.forbidden = {{{"a", "b"}, 5}};
  CHECK_NOTHROW(validate_stable(unstable));

  RawStable self;
  self.events = {"a"};
  self.rules = {{{"a"}, "a", 1}};
  CHECK_THROWS_AS(validate_stable(self), Error);

  RawStable redundant;
  redundant.events = {"a", "b", "c"};
  redundant.rules = {{{}, "a", 1}, {{}, "b", 2}, {{"a"}, "b", 3}};
  redundant.forbidden = {{{"a", "c"}, 4}, {{"a", "b", "c"}, 5}};
  const StableValidation v = validate_stable(redundant);
  CHECK(v.redundant_rules.size() == 1);
  CHECK(v.redundant_forbidden.size() == 1);
  CHECK(v.dead_events == std::vector<std::string>{"c"});
}

TEST_CASE("consistency") {
  const StableES example = fx::stable("example.ses");
  CHECK(is_consistent(example, s(example, {"e1", "e3"})));
  CHECK_FALSE(is_consistent(example, s(example, {"e1", "e2"})));
  CHECK_FALSE(is_consistent(example, s(example, {"e1", "ea", "eb"})));
  CHECK(is_consistent(example, s(example, {"e2", "ea", "eb"})));
}

TEST_CASE("configurations") {
  const StableES example = fx::stable("example.ses");
  const auto configs = configurations(example);
  CHECK(contains(configs, s(example, {"e1", "e3", "ea"})));
  CHECK(contains(configs, s(example, {"e1", "e3", "eb"})));
  CHECK_FALSE(contains(configs, s(example, {"e1", "ea", "eb"})));
  CHECK(configs == oracle::stable_configs(example));
  CHECK(configs.size() == 15);
  CHECK(configurations(make_stable("empty", EventUniverse{}, {}, {})) == std::vector<EventSet>{{}});
  for (const auto& [name, ses] : fx::all_as_stable()) {
    CAPTURE(name);
    CHECK(configurations(ses) == oracle::stable_configs(ses));
  }
}

TEST_CASE("local histories") {
  const StableES example = fx::stable("example.ses");
  const EventId ea = example.id("ea");
  CHECK(local_history(example, ea, s(example, {"e1", "e3", "ea"})) == s(example, {"e1", "ea"}));
  CHECK(local_history(example, ea, s(example, {"e2", "e4", "ea"})) == s(example, {"e2", "ea"}));
  CHECK(local_history(example, example.id("e1"), s(example, {"e1"})) == s(example, {"e1"}));
  CHECK_THROWS_AS(local_history(example, ea, s(example, {"e1", "e3"})), Error);
}

TEST_CASE("conflict under a configuration and globally") {
  const StableES example = fx::stable("example.ses");
  const EventId e1 = example.id("e1"), e2 = example.id("e2"), ea = example.id("ea"), eb = example.id("eb");
  CHECK(conflict(example, e1, e2, EventSet{}));
  CHECK(conflict(example, ea, eb, s(example, {"e1"})));
  CHECK_FALSE(conflict(example, ea, eb, s(example, {"e2"})));
  CHECK_FALSE(conflict(example, ea, eb));
  CHECK(conflict(example, e1, e2));
}

TEST_CASE("immediate conflict under a configuration") {
  const StableES example = fx::stable("example.ses");
  const EventId e1 = example.id("e1"), e2 = example.id("e2"), e4 = example.id("e4"), ea = example.id("ea"),
                eb = example.id("eb");
  CHECK(immediate_conflict(example, ea, eb, s(example, {"e1", "e3"})));
  CHECK(immediate_conflict(example, e1, e2, EventSet{}));
  CHECK_FALSE(immediate_conflict(example, e2, e4, EventSet{}));
  // {e1} enables ea but not eb.
  CHECK_FALSE(immediate_conflict(example, ea, eb, s(example, {"e1"})));
}

TEST_CASE("history selections") {
  const StableES example = fx::stable("example.ses");
  const auto one = star_histories(example, s(example, {"ea"}));
  CHECK(one.size() == 2);
  CHECK(std::find(one.begin(), one.end(), HistorySelection{s(example, {"e1", "ea"})}) != one.end());
  CHECK(std::find(one.begin(), one.end(), HistorySelection{s(example, {"e2", "ea"})}) != one.end());
  CHECK(star_histories(example, {}) == std::vector<HistorySelection>{HistorySelection{}});
  const auto two = star_histories(example, s(example, {"ea", "eb"}));
  CHECK(two.size() == 2);
  for (const auto& t : two) CHECK(t[1] == s(example, {"e3", "eb"}));
}

TEST_CASE("sensible structures and pruning") {
  const StableES ns = fx::stable("nonsensible.ses");
  const SensibleReport r = check_sensible(ns);
  CHECK_FALSE(r.sensible);
  CHECK(contains(r.pruned, s(ns, {"e2", "e4"})));
  CHECK(r.pruned == minimal_unreachable(ns));
  CHECK(check_sensible(r.pruned_ses).sensible);
  CHECK(check_sensible(r.pruned_ses).pruned_ses == r.pruned_ses);
  CHECK(configurations(r.pruned_ses) == configurations(ns));

  const StableES example = fx::stable("example.ses");
  const SensibleReport pr = check_sensible(example);
  CHECK(pr.pruned == minimal_unreachable(example));
  CHECK(pr.pruned == std::vector<EventSet>{s(example, {"e2", "eb"}), s(example, {"e4", "eb"}), s(example, {"ea", "eb"})});
  CHECK(check_sensible(make_stable("empty", EventUniverse{}, {}, {})).sensible);
}

TEST_CASE("conflict-driven structures") {
  const ConflictDrivenReport ns = check_conflict_driven(fx::stable("nonsensible.ses"));
  CHECK_FALSE(ns.sensible);
  CHECK(ns.unreachable_consistent.has_value());

  const StableES example = fx::stable("example.ses");
  const ConflictDrivenReport pr = check_conflict_driven(example);
  CHECK_FALSE(pr.conflicts_persist);
  REQUIRE(pr.transient_conflict.has_value());
  CHECK(oracle::immediate_under(example, oracle::stable_configs(example), pr.transient_conflict->first,
                                pr.transient_conflict->second, pr.transient_conflict->under));

  CHECK(check_conflict_driven(fx::stable("jumpfree.ses")).holds());
  const ConflictDrivenReport t = check_conflict_driven(fx::stable("ternary.ses"));
  CHECK(t.sensible);
  CHECK_FALSE(t.inconsistency_traced);

  for (const auto& [name, ses] : fx::all_as_stable()) {
    CAPTURE(name);
    CHECK(check_conflict_driven(ses).holds() == oracle::conflict_driven(ses));
  }
}

TEST_CASE("random structures agree with the reference enumeration") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 150; ++i) {
    const StableES ses = gen::random_stable(rng, 6);
    const auto configs = oracle::stable_configs(ses);
    REQUIRE(configurations(ses) == configs);
    StableAnalysis analysis(ses);
    for (EventSet x : configs) {
      for (EventId e : x) CHECK(local_history(ses, e, x) == oracle::history(configs, e, x));
    }
    for (EventId a = 0; a < ses.size(); ++a) {
      for (EventId b = 0; b < ses.size(); ++b) {
        if (a == b) continue;
        CHECK(analysis.global_conflict(a, b) == oracle::global_conflict(ses, configs, a, b));
        CHECK(analysis.global_immediate(a, b) == oracle::global_immediate(ses, configs, a, b));
        for (EventSet v : configs) {
          CHECK(analysis.immediate_conflict_under(a, b, v) == oracle::immediate_under(ses, configs, a, b, v));
        }
      }
    }
    CHECK(check_sensible(ses).pruned == minimal_unreachable(ses));
    CHECK(check_conflict_driven(ses).holds() == oracle::conflict_driven(ses));
  }
}

TEST_CASE("invariants on random structures") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 150; ++i) {
    const StableES ses = gen::random_stable(rng, 6);
    const auto configs = oracle::stable_configs(ses);
    // Compatible configurations are closed under intersection.
    for (EventSet a : configs) {
      for (EventSet b : configs) {
        if (oracle::bounded(configs, a | b)) CHECK(std::binary_search(configs.begin(), configs.end(), a & b, canonical_less));
      }
    }
    // Immediate conflict under v implies conflict under v.
    for (const auto& t : oracle::immediate_triples(ses, configs)) CHECK(conflict(ses, t.first, t.second, t.under));
    // Pruning is idempotent.
    const StableES once = check_sensible(ses).pruned_ses;
    CHECK(check_sensible(once).pruned_ses == once);
    // Conflict-driven: every selection over an inconsistent set holds a globally conflicting pair.
    if (check_conflict_driven(ses).holds()) {
      for (EventSet x : oracle::subsets(ses.all())) {
        if (oracle::consistent(ses, x)) continue;
        for (const auto& sel : star_histories(ses, x)) {
          EventSet joined;
          for (EventSet h : sel) joined |= h;
          bool found = false;
          for (EventId a : joined) {
            for (EventId b : joined) found = found || (a != b && oracle::global_conflict(ses, configs, a, b));
          }
          CHECK(found);
        }
      }
    }
  }
}

TEST_CASE("stable view of a binary-conflict structure") {
  for (const auto& n : fx::prime_names()) {
    const PrimeES es = fx::prime(n);
    const StableES ses = to_stable(es);
    CHECK(configurations(ses) == configurations(es));
  }
}
