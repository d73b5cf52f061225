#pragma once

#include <string>
#include <vector>

#include "evs/io.hpp"

namespace fx {

inline std::string path(const std::string& name) { return std::string(EVS_FIXTURE_DIR) + "/" + name; }

inline std::string text(const std::string& name) { return evs::read_file(path(name)); }

inline evs::PrimeES prime(const std::string& name) { return evs::parse_prime(text(name)); }

inline evs::StableES stable(const std::string& name) { return evs::parse_stable(text(name)); }

inline evs::SafeNet net(const std::string& name) { return evs::parse_net(text(name)); }

inline const std::vector<std::string>& prime_names() {
  static const std::vector<std::string> names{"empty.es", "pair.es", "conf.es", "twocell.es", "jump.es", "example.es"};
  return names;
}

inline const std::vector<std::string>& stable_names() {
  static const std::vector<std::string> names{"example.ses", "jumpfree.ses", "nonsensible.ses", "ternary.ses"};
  return names;
}

inline const std::vector<std::string>& net_names() {
  static const std::vector<std::string> names{"left.net", "right.net", "single.net"};
  return names;
}

inline const std::vector<std::string>& prob_names() {
  static const std::vector<std::string> names{"conf.prob", "example.prob"};
  return names;
}

/// Every structure fixture viewed as a stable structure.
inline std::vector<std::pair<std::string, evs::StableES>> all_as_stable() {
  std::vector<std::pair<std::string, evs::StableES>> out;
  for (const auto& n : prime_names()) out.emplace_back(n, evs::to_stable(prime(n)));
  for (const auto& n : stable_names()) out.emplace_back(n, stable(n));
  return out;
}

}  // namespace fx
