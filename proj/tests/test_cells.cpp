#include <doctest.h>

#include <algorithm>

#include "evs/cells.hpp"
#include "evs/errors.hpp"
#include "evs/translation.hpp"
#include "support/fixtures.hpp"
#include "support/generator.hpp"
#include "support/oracle.hpp"

using namespace evs;

namespace {

std::vector<oracle::Cell> as_oracle(const std::vector<BranchingCell>& cells) {
  std::vector<oracle::Cell> out;
  for (const auto& c : cells) {
    std::vector<EventSet> omega;
    for (EventSet w : c.maximal) omega.push_back(w);
    out.push_back({c.events, oracle::sorted(omega)});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return canonical_less(a.events, b.events); });
  return out;
}

std::vector<oracle::Cell> sorted_cells(std::vector<oracle::Cell> cells) {
  std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) { return canonical_less(a.events, b.events); });
  return cells;
}

void compare_prime(const PrimeES& es) {
  const CellAnalysis<PrimeES> cells(es);
  auto stopping = [&](EventSet v, EventSet b) { return oracle::prime_stopping_at(es, v, b); };
  auto is_config = [&](EventSet x) { return oracle::prime_is_config(es, x); };
  auto at = [&](EventSet v) { return oracle::cells_at(v, oracle::prime_future(es, v), stopping, is_config); };
  std::vector<EventSet> r_stopped;
  for (EventSet v : oracle::prime_configs(es)) {
    const auto expected = oracle::decompositions(v, at);
    if (!expected.empty()) r_stopped.push_back(v);
    CHECK(cells.is_r_stopped(v) == !expected.empty());
    if (expected.empty()) continue;
    CHECK(as_oracle(cells.enabled_cells(v)) == sorted_cells(at(v)));
    CHECK(cells.decomposition_cell_sets(v) == expected);
  }
  CHECK(cells.r_stopped() == r_stopped);
}

void compare_stable(const StableES& ses) {
  const CellAnalysis<StableES> cells(ses);
  const auto configs = oracle::stable_configs(ses);
  const auto triples = oracle::immediate_triples(ses, configs);
  auto stopping = [&](EventSet v, EventSet b) { return oracle::stable_stopping_at(ses, triples, v, b); };
  auto is_config = [&](EventSet x) { return std::binary_search(configs.begin(), configs.end(), x, canonical_less); };
  auto at = [&](EventSet v) { return oracle::cells_at(v, oracle::stable_future(ses, v), stopping, is_config); };
  std::vector<EventSet> r_stopped;
  for (EventSet v : configs) {
    const auto expected = oracle::decompositions(v, at);
    if (!expected.empty()) r_stopped.push_back(v);
    CHECK(cells.is_r_stopped(v) == !expected.empty());
    if (expected.empty()) continue;
    CHECK(as_oracle(cells.enabled_cells(v)) == sorted_cells(at(v)));
    CHECK(cells.decomposition_cell_sets(v) == expected);
  }
  CHECK(cells.r_stopped() == r_stopped);
}

}  // namespace

TEST_CASE("stopping prefixes of the binary-conflict example") {
  const PrimeES es = fx::prime("example.es");
  const auto& u = es.universe();
  const CellAnalysis<PrimeES> cells(es);
  CHECK(cells.is_stopping_prefix(u.set_of({"e1", "e2", "e3", "e4"})));
  CHECK_FALSE(cells.is_stopping_prefix(u.set_of({"e1", "e2"})));
  CHECK_FALSE(cells.is_stopping_prefix(u.set_of({"ea"})));
  CHECK(cells.is_stopping_prefix(EventSet{}));
  CHECK(cells.is_stopping_prefix(es.all()));
  CHECK(CellAnalysis<PrimeES>(fx::prime("twocell.es")).is_stopping_prefix(fx::prime("twocell.es").all()));
  CHECK(CellAnalysis<PrimeES>(fx::prime("empty.es")).is_stopping_prefix(EventSet{}));
  CHECK(cells.is_stopping_prefix_at(u.set_of({"e1", "e3"}), u.set_of({"ea", "eb"})));
  CHECK_FALSE(cells.is_stopping_prefix_at(u.set_of({"e1", "e3"}), u.set_of({"ea"})));

  CHECK(minimal_stopping_prefix(es, u.set_of({"e4"})) == u.set_of({"e1", "e2", "e3", "e4"}));
  CHECK(minimal_stopping_prefix(es, u.set_of({"ea"})) == u.set_of({"e1", "e2", "e3", "e4", "ea", "eb"}));
  const PrimeES pair = fx::prime("pair.es");
  CHECK(minimal_stopping_prefix(pair, pair.universe().set_of({"a"})) == pair.all());
  for (const auto& n : fx::prime_names()) {
    const PrimeES p = fx::prime(n);
    for (EventSet x : oracle::subsets(p.all())) {
      if (x.size() > 2) continue;
      const EventSet m = minimal_stopping_prefix(p, x);
      CHECK(x.subset_of(m));
      CHECK(oracle::prime_stopping_at(p, {}, m));
      for (EventSet b : oracle::subsets(p.all())) {
        if (x.subset_of(b) && oracle::prime_stopping_at(p, {}, b)) CHECK(m.subset_of(b));
      }
    }
  }
}

TEST_CASE("stopping prefixes of the stable example") {
  const StableES ses = fx::stable("example.ses");
  const auto& u = ses.universe();
  const CellAnalysis<StableES> cells(ses);
  CHECK(cells.is_stopping_prefix(u.set_of({"e1", "e2", "e3", "e4"})));
  CHECK_FALSE(cells.is_stopping_prefix(u.set_of({"e1", "e2"})));
  try {
    minimal_stopping_prefix(ses, u.set_of({"e1"}));
    FAIL("expected WrongHost");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::WrongHost);
  }
}

TEST_CASE("enabled cells and coverings") {
  const PrimeES es = fx::prime("example.es");
  const auto& u = es.universe();
  const CellAnalysis<PrimeES> cells(es);
  const auto& at0 = cells.enabled_cells({});
  REQUIRE(at0.size() == 1);
  CHECK(at0[0].events == u.set_of({"e1", "e2", "e3", "e4"}));
  CHECK(at0[0].maximal == std::vector<EventSet>{u.set_of({"e1", "e3"}), u.set_of({"e1", "e4"}), u.set_of({"e2", "e4"})});

  const Covering c = cells.covering(u.set_of({"e1", "e3", "ea"}));
  REQUIRE(c.steps.size() == 2);
  CHECK(c.steps[0].choice == u.set_of({"e1", "e3"}));
  CHECK(c.steps[1].cell.events == u.set_of({"ea", "eb"}));
  CHECK(c.steps[1].choice == u.set_of({"ea"}));
  CHECK(c.invariant);
  CHECK(c.disjoint);

  CHECK_FALSE(cells.is_r_stopped(u.set_of({"e1"})));
  CHECK_FALSE(cells.valid_decomposition(u.set_of({"e1"})).covering.has_value());
  try {
    cells.covering(u.set_of({"e1"}));
    FAIL("expected NotRStopped");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotRStopped);
  }

  const PrimeES two = fx::prime("twocell.es");
  const CellAnalysis<PrimeES> tc(two);
  CHECK(tc.enabled_cells({}).size() == 2);
  CHECK(tc.all_cells().size() == 2);
  CHECK(tc.r_stopped().size() == 9);
}

TEST_CASE("pre-regularity and local finiteness") {
  const PreRegularReport two = check_pre_regular(fx::prime("twocell.es"));
  CHECK(two.holds);
  CHECK(two.max_enabled == 4);
  for (const auto& n : fx::prime_names()) CHECK(check_locally_finite(fx::prime(n)).holds);
  CHECK(check_locally_finite(fx::stable("example.ses")).holds);

  EventUniverse u({"a", "b"});
  const StableES dead = make_stable("dead", u, {}, {{{}, 0}});
  const LocallyFiniteReport lf = check_locally_finite(dead);
  CHECK_FALSE(lf.holds);
  CHECK(lf.uncovered.contains(1));
}

TEST_CASE("jumps") {
  const PrimeES es = fx::prime("jump.es");
  const JumpReport r = check_jump_free(es);
  CHECK_FALSE(r.jump_free);
  std::vector<std::string> chain;
  for (EventId e : r.chain) chain.push_back(es.event_name(e));
  CHECK(chain == std::vector<std::string>{"e", "x1", "x2", "e2"});
  CHECK_FALSE(check_jump_free(to_stable(es)).jump_free);

  for (const auto& n : {"empty.es", "pair.es", "conf.es", "twocell.es", "example.es"}) {
    CAPTURE(n);
    CHECK(check_jump_free(fx::prime(n)).jump_free);
  }
  CHECK(check_jump_free(fx::stable("jumpfree.ses")).jump_free);
}

TEST_CASE("flat cells") {
  try {
    check_cells_flat(fx::prime("jump.es"));
    FAIL("expected Precondition");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
  CHECK(check_cells_flat(fx::prime("example.es")).flat);
  CHECK(check_cells_flat(fx::prime("conf.es")).flat);
  CHECK(check_cells_flat(fx::prime("twocell.es")).flat);
  CHECK(check_cells_flat(fx::stable("jumpfree.ses")).flat);
}

TEST_CASE("cell isomorphism") {
  const CellIsomorphismReport ok = check_cell_isomorphism(fx::stable("jumpfree.ses"));
  CHECK(ok.precondition_ok);
  CHECK(ok.isomorphic);
  CHECK(ok.cells_stable == ok.cells_prime);

  const CellIsomorphismReport bad = check_cell_isomorphism(fx::stable("example.ses"));
  CHECK_FALSE(bad.precondition_ok);
  CHECK_FALSE(bad.precondition_failure.empty());
}

TEST_CASE("confusion") {
  CHECK_FALSE(check_confusion(fx::prime("pair.es")).confused);
  CHECK_FALSE(check_confusion(fx::prime("twocell.es")).confused);
  const PrimeES conf = fx::prime("conf.es");
  const ConfusionReport r = check_confusion(conf);
  CHECK(r.confused);
  REQUIRE(r.asymmetric_triple.has_value());
  CHECK(conf.event_name((*r.asymmetric_triple)[1]) == "b");
  CHECK(r.concurrent_cell.has_value());
}

TEST_CASE("cells and decompositions agree with the reference enumeration on fixtures") {
  for (const auto& n : fx::prime_names()) {
    CAPTURE(n);
    compare_prime(fx::prime(n));
  }
  for (const auto& n : fx::stable_names()) {
    CAPTURE(n);
    compare_stable(fx::stable(n));
  }
}

TEST_CASE("cells and decompositions agree with the reference enumeration on random structures") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 120; ++i) compare_stable(gen::random_stable(rng, 6));
  for (int i = 0; i < 120; ++i) {
    const RawPrime raw = gen::random_raw_prime(rng, 1 + i % 7);
    try {
      compare_prime(validate_prime(raw).es);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::SelfConflict);
    }
  }
}

TEST_CASE("cell steps from R-stopped configurations stay R-stopped") {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 100; ++i) {
    const StableES ses = gen::random_stable(rng, 6);
    const CellAnalysis<StableES> cells(ses);
    for (EventSet v : cells.r_stopped()) {
      for (const auto& c : cells.enabled_cells(v)) {
        CHECK_FALSE(c.events.intersects(v));
        for (EventSet w : c.maximal) CHECK(cells.is_r_stopped(v | w));
      }
      const Covering cov = cells.covering(v);
      EventSet joined;
      for (const auto& s : cov.steps) joined |= s.choice;
      CHECK(joined == v);
    }
  }
}

TEST_CASE("jump-free conflict-driven structures have jump-free associated structures") {
  CHECK(check_jump_free(associated_es(fx::stable("jumpfree.ses")).es).jump_free);
  std::mt19937_64 rng(33);
  for (int i = 0; i < 40; ++i) {
    const auto ses = gen::random_filtered(rng, 6, {true, true});
    REQUIRE(ses.has_value());
    CHECK(check_jump_free(associated_es(*ses).es).jump_free);
  }
}
