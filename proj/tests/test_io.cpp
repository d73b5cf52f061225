#include <doctest.h>

#include <algorithm>
#include <string>

#include "evs/dot.hpp"
#include "evs/errors.hpp"
#include "evs/io.hpp"
#include "support/fixtures.hpp"
#include "support/generator.hpp"

using namespace evs;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

Error error_of(const std::string& text) {
  try {
    parse_document(text);
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected an error");
  return Error(ErrorKind::Io, "");
}

std::size_t node_lines(const std::string& dot) {
  std::size_t n = 0;
  std::size_t start = 0;
  while (start < dot.size()) {
    const std::size_t end = dot.find('\n', start);
    const std::string line = dot.substr(start, end - start);
    if (line.rfind("  \"", 0) == 0 && line.find("->") == std::string::npos && line.find('[') == std::string::npos) ++n;
    start = end == std::string::npos ? dot.size() : end + 1;
  }
  return n;
}

}  // namespace

TEST_CASE("document kinds") {
  CHECK(document_kind(fx::text("pair.es")) == DocumentKind::Prime);
  CHECK(document_kind(fx::text("example.ses")) == DocumentKind::Stable);
  CHECK(document_kind(fx::text("left.net")) == DocumentKind::Net);
  CHECK(document_kind(fx::text("conf.prob")) == DocumentKind::Distribution);
  CHECK(document_kind("// comment\n\ncell { a }\n  config { a } 1\n") == DocumentKind::Distribution);
}

TEST_CASE("parse errors carry locations") {
  const Error self = error_of("es X\nevents a b\nconflict a a");
  CHECK(self.kind() == ErrorKind::SelfConflict);
  CHECK(self.line() == 3);

  const Error empty = error_of("");
  CHECK(empty.kind() == ErrorKind::Syntax);
  CHECK(std::string(empty.what()) == "missing header");
  CHECK(empty.line() == 1);
  CHECK(empty.column() == 1);

  const Error unknown = error_of("es X\nevents a\ncause a < b\n");
  CHECK(unknown.kind() == ErrorKind::UnknownEvent);
  CHECK(unknown.line() == 3);

  const Error brace = error_of("ses X\nevents a\nenabling { |- a\n");
  CHECK(brace.kind() == ErrorKind::Syntax);
  CHECK(brace.line() == 3);
  CHECK(brace.column() > 0);

  CHECK(error_of("es X\nevents a a\n").kind() == ErrorKind::DuplicateEvent);
  CHECK(error_of("ses X\nevents a b\nenabling {} |- a\nenabling {} |- b\nenabling { a } |- b\nforbidden { a b }\n").kind() ==
        ErrorKind::InconsistentRule);
  CHECK(error_of("net N\nplaces p\ntransitions t\narc p -> p\nmarking p\n").kind() == ErrorKind::InvalidNet);
  CHECK(error_of("prob P\ncell { a }\n  config { a } x\n").kind() == ErrorKind::Syntax);
  CHECK_THROWS_AS(read_file(fx::path("missing.es")), Error);
}

TEST_CASE("the stable example parses to the validated structure") {
  const StableES parsed = parse_stable(fx::text("example.ses"));
  CHECK(parsed == validate_stable(parse_raw_stable(fx::text("example.ses"))).ses);
  CHECK(parse_prime("es X\nevents a\n// trailing comment\n").size() == 1);
  CHECK(parse_prime("es X\nevents a b\ntruncated\n").truncated());
}

TEST_CASE("round trip on every fixture") {
  for (const auto& n : fx::prime_names()) {
    CAPTURE(n);
    const PrimeES es = fx::prime(n);
    CHECK(parse_prime(serialize(es)) == es);
  }
  for (const auto& n : fx::stable_names()) {
    CAPTURE(n);
    const StableES ses = fx::stable(n);
    CHECK(parse_stable(serialize(ses)) == ses);
  }
  for (const auto& n : fx::net_names()) {
    CAPTURE(n);
    const SafeNet net = fx::net(n);
    CHECK(parse_net(serialize(net)) == net);
  }
  for (const auto& n : fx::prob_names()) {
    CAPTURE(n);
    const DistributionTable t = parse_distribution(fx::text(n));
    CHECK(parse_distribution(serialize(t)) == t);
  }
  std::mt19937_64 rng(51);
  for (int i = 0; i < 100; ++i) {
    const StableES ses = gen::random_stable(rng, 7);
    CHECK(parse_stable(serialize(ses)) == ses);
  }
}

TEST_CASE("weights are printed in shortest form") {
  CHECK(format_weight(0.6) == "0.6");
  CHECK(format_weight(1) == "1");
  CHECK(format_weight(0.1 + 0.2) == "0.30000000000000004");
}

TEST_CASE("DOT export") {
  const std::string pair = export_dot(fx::prime("pair.es"));
  CHECK(count(pair, "style=dashed") == 1);
  CHECK(pair.rfind("digraph", 0) == 0);

  const std::string example = export_dot(fx::prime("example.es"));
  CHECK(node_lines(example) == 7);
  CHECK(count(example, "style=dashed") == 4);
  CHECK(count(example, "->") - count(example, "style=dashed") == 3);
  CHECK(example == export_dot(fx::prime("example.es")));

  const PrimeES two = fx::prime("twocell.es");
  CHECK(count(export_dot(two, EventSet{}), "subgraph cluster_") == 2);

  const StableES ses = fx::stable("example.ses");
  const std::string s = export_dot(ses);
  CHECK(count(s, "shape=point") == 1);
  CHECK(count(s, "style=dashed") == 3);
  try {
    export_dot(ses, ses.universe().set_of({"e1"}));
    FAIL("expected NotRStopped");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotRStopped);
  }
}
