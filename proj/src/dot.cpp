#include "evs/dot.hpp"

#include <sstream>

#include "evs/cells.hpp"

namespace evs {

namespace {

std::string quoted(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

template <class Host>
void emit_nodes_and_cells(std::ostream& out, const Host& host, std::optional<EventSet> v) {
  const auto& u = host.universe();
  EventSet clustered;
  if (v) {
    CellAnalysis<Host> cells(host);
    const auto& delta = cells.enabled_cells(*v);
    for (std::size_t i = 0; i < delta.size(); ++i) {
      out << "  subgraph cluster_" << i << " {\n";
      out << "    label=" << quoted("c" + std::to_string(i + 1) + " " + u.format(delta[i].events)) << ";\n";
      out << "    style=rounded;\n";
      for (EventId e : delta[i].events - clustered) out << "    " << quoted(u.name(e)) << ";\n";
      clustered |= delta[i].events;
      out << "  }\n";
    }
  }
  for (EventId e = 0; e < host.size(); ++e) {
    out << "  " << quoted(u.name(e));
    if (v && v->contains(e)) out << " [style=filled, fillcolor=lightgrey]";
    out << ";\n";
  }
}

}  // namespace

std::string export_dot(const PrimeES& es, std::optional<EventSet> v) {
  const auto& u = es.universe();
  std::ostringstream out;
  out << "digraph " << quoted(es.name()) << " {\n";
  out << "  rankdir=BT;\n";
  out << "  node [shape=circle];\n";
  emit_nodes_and_cells(out, es, v);
  for (auto [a, b] : causality_cover(es)) out << "  " << quoted(u.name(a)) << " -> " << quoted(u.name(b)) << ";\n";
  const auto imm = immediate_conflicts(es);
  for (EventId e = 0; e < es.size(); ++e) {
    for (EventId f : imm[e]) {
      if (e < f) {
        out << "  " << quoted(u.name(e)) << " -> " << quoted(u.name(f))
            << " [style=dashed, dir=none, constraint=false];\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

std::string export_dot(const StableES& ses, std::optional<EventSet> v) {
  const auto& u = ses.universe();
  std::ostringstream out;
  out << "digraph " << quoted(ses.name()) << " {\n";
  out << "  rankdir=BT;\n";
  out << "  node [shape=circle];\n";
  emit_nodes_and_cells(out, ses, v);
  for (EventId e = 0; e < ses.size(); ++e) {
    const auto premises = ses.premises_of(e);
    for (std::size_t k = 0; k < premises.size(); ++k) {
      for (EventId d : premises[k]) {
        out << "  " << quoted(u.name(d)) << " -> " << quoted(u.name(e));
        if (premises.size() > 1) out << " [label=" << quoted("r" + std::to_string(k + 1)) << "]";
        out << ";\n";
      }
    }
  }
  std::size_t joint = 0;
  for (EventSet f : ses.forbidden()) {
    const auto ids = f.ids();
    if (ids.size() == 2) {
      out << "  " << quoted(u.name(ids[0])) << " -> " << quoted(u.name(ids[1]))
          << " [style=dashed, dir=none, constraint=false];\n";
    } else {
      const std::string node = "forbidden" + std::to_string(++joint);
      out << "  " << quoted(node) << " [shape=point];\n";
      for (EventId e : ids) {
        out << "  " << quoted(node) << " -> " << quoted(u.name(e)) << " [style=dotted, dir=none, constraint=false];\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace evs
