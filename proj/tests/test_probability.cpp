#include <doctest.h>

#include <cmath>
#include <map>

#include "evs/errors.hpp"
#include "evs/io.hpp"
#include "evs/net.hpp"
#include "evs/probability.hpp"
#include "support/fixtures.hpp"
#include "support/generator.hpp"

using namespace evs;

namespace {

DistributionTable table(const std::string& text) { return parse_distribution(text); }

ErrorKind kind_of(const StableES& ses, const std::string& text) {
  try {
    LocallyRandomizedES<StableES>::from_table(ses, table(text));
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Io;
}

template <class Host>
void check_chain_rule(const LocallyRandomizedES<Host>& m) {
  const auto& a = m.analysis();
  const Measure g = m.global_measure();
  CHECK(g.mass == doctest::Approx(1.0).epsilon(kProbabilityTolerance));
  for (EventSet u : a.r_stopped()) {
    const double pu = m.likelihood(u);
    CHECK(m.shadow(u) == doctest::Approx(pu).epsilon(kProbabilityTolerance));
    const auto fut = m.future(u);
    for (EventSet w : fut.analysis().r_stopped()) {
      const EventSet joined = u | remap(fut.host().universe(), m.host().universe(), w);
      REQUIRE(a.is_r_stopped(joined));
      CHECK(m.likelihood(joined) == doctest::Approx(pu * fut.likelihood(w)).epsilon(kProbabilityTolerance));
    }
  }
}

}  // namespace

TEST_CASE("uniform distributions") {
  const PrimeES pair = fx::prime("pair.es");
  const auto m = LocallyRandomizedES<PrimeES>::uniform(pair);
  CHECK(m.likelihood(pair.universe().set_of({"a"})) == doctest::Approx(0.5));
  CHECK(m.likelihood({}) == 1.0);

  const PrimeES two = fx::prime("twocell.es");
  const auto t = LocallyRandomizedES<PrimeES>::uniform(two);
  CHECK(t.likelihood(two.universe().set_of({"a1", "b2"})) == doctest::Approx(0.25));
  CHECK(t.likelihood(two.universe().set_of({"a1"})) == doctest::Approx(0.5));
  const Measure g = t.global_measure();
  CHECK(g.outcomes.size() == 4);
  for (double p : g.probabilities) CHECK(p == doctest::Approx(0.25));

  CHECK_THROWS_AS(m.likelihood(pair.universe().set_of({"a", "b"})), Error);
}

TEST_CASE("distributions read from tables") {
  const PrimeES conf = fx::prime("conf.es");
  const auto m = LocallyRandomizedES<PrimeES>::from_table(conf, parse_distribution(fx::text("conf.prob")));
  const auto& u = conf.universe();
  CHECK(m.likelihood(u.set_of({"a", "c"})) == doctest::Approx(0.6));
  CHECK(m.likelihood(u.set_of({"b"})) == doctest::Approx(0.4));
  CHECK(m.q(conf.all(), u.set_of({"b"})) == doctest::Approx(0.4));
  const DistributionTable t = m.table();
  CHECK(parse_distribution(serialize(t)) == t);
  const auto again = LocallyRandomizedES<PrimeES>::from_table(conf, t);
  CHECK(again.likelihood(u.set_of({"a", "c"})) == m.likelihood(u.set_of({"a", "c"})));

  const StableES ses = fx::stable("example.ses");
  const auto p = LocallyRandomizedES<StableES>::from_table(ses, parse_distribution(fx::text("example.prob")));
  CHECK(p.likelihood(ses.universe().set_of({"e1", "e3", "ea"})) == doctest::Approx(0.35));
  CHECK(p.likelihood(ses.universe().set_of({"e2", "e4", "ea"})) == doctest::Approx(0.2));
  CHECK(p.global_measure().mass == doctest::Approx(1.0));
}

TEST_CASE("malformed tables are rejected") {
  const StableES ses = fx::stable("example.ses");
  const std::string good_tail = "cell { ea eb }\n  config { ea } 0.5\n  config { eb } 0.5\ncell { ea }\n  config { ea } 1\n";
  CHECK(kind_of(ses, "prob p\ncell { e1 e2 e3 e4 }\n  config { e1 e3 } 0.5\n  config { e1 e4 } 0.5\n  config { e2 e4 } 0.2\n" +
                         good_tail) == ErrorKind::Distribution);
  CHECK(kind_of(ses, "prob p\ncell { e1 e2 e3 e4 }\n  config { e1 e3 } 1.2\n  config { e1 e4 } -0.2\n  config { e2 e4 } 0\n" +
                         good_tail) == ErrorKind::Distribution);
  CHECK(kind_of(ses, "prob p\ncell { e1 e2 e3 e4 }\n  config { e1 } 0.5\n  config { e1 e4 } 0.3\n  config { e2 e4 } 0.2\n" +
                         good_tail) == ErrorKind::Distribution);
  CHECK(kind_of(ses, "prob p\ncell { e1 e2 }\n  config { e1 } 1\n" + good_tail) == ErrorKind::Distribution);
  CHECK(kind_of(ses, "prob p\n" + good_tail) == ErrorKind::Distribution);
  CHECK(kind_of(ses, fx::text("example.prob")) == ErrorKind::Io);
}

TEST_CASE("measure, shadow and chain rule on fixtures") {
  for (const auto& n : {"pair.es", "conf.es", "twocell.es", "example.es", "jump.es"}) {
    CAPTURE(n);
    check_chain_rule(LocallyRandomizedES<PrimeES>::uniform(fx::prime(n)));
  }
  check_chain_rule(LocallyRandomizedES<StableES>::uniform(fx::stable("jumpfree.ses")));
  check_chain_rule(LocallyRandomizedES<StableES>::from_table(fx::stable("example.ses"), parse_distribution(fx::text("example.prob"))));
}

TEST_CASE("measure on random conflict-driven structures") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 40; ++i) {
    const auto ses = gen::random_filtered(rng, 6, {true, true});
    REQUIRE(ses.has_value());
    check_chain_rule(LocallyRandomizedES<StableES>::uniform(*ses));
  }
}

TEST_CASE("sampling") {
  const PrimeES conf = fx::prime("conf.es");
  const auto m = LocallyRandomizedES<PrimeES>::from_table(conf, parse_distribution(fx::text("conf.prob")));
  CHECK(m.sample_run(7).configuration == m.sample_run(7).configuration);
  CHECK(m.sample_run(7).trace.size() == 1);

  const PrimeES two = fx::prime("twocell.es");
  const auto t = LocallyRandomizedES<PrimeES>::uniform(two);
  const SampleRun first = t.sample_run(3, CellOrder::CanonicalFirst);
  const SampleRun last = t.sample_run(3, CellOrder::CanonicalLast);
  REQUIRE(first.trace.size() == 2);
  REQUIRE(last.trace.size() == 2);
  CHECK(first.trace[0].cell == last.trace[1].cell);

  std::mt19937_64 rng(9);
  int hits = 0;
  const int runs = 20000;
  const EventSet ac = conf.universe().set_of({"a", "c"});
  for (int i = 0; i < runs; ++i) hits += m.sample_run(rng).configuration == ac;
  CHECK(std::abs(static_cast<double>(hits) / runs - 0.6) < 0.02);
}

TEST_CASE("truncated unfoldings are refused unless allowed") {
  const Unfolding u = unfold_net(fx::net("right.net"), 6);
  REQUIRE(u.truncated);
  try {
    LocallyRandomizedES<PrimeES>::uniform(u.es);
    FAIL("expected Precondition");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
  CHECK_NOTHROW(LocallyRandomizedES<PrimeES>::uniform(u.es, true));
}
