#pragma once

#include <optional>
#include <string>

#include "evs/prime_es.hpp"
#include "evs/stable_es.hpp"

namespace evs {

/// Graphviz text. Prime: solid arrows for covering causality, dashed undirected edges for
/// immediate conflict. Stable: one arrow per premise event of each minimal rule (labelled
/// when an event has several rules), dashed edges for binary forbidden sets and a point
/// node joining the members of larger ones. With `v`, the cells enabled at v are drawn as
/// clusters and v's events are filled; throws Error(NotRStopped) if v is not R-stopped.
std::string export_dot(const PrimeES& es, std::optional<EventSet> v = std::nullopt);
std::string export_dot(const StableES& ses, std::optional<EventSet> v = std::nullopt);

}  // namespace evs
