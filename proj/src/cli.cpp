#include "evs/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <json.hpp>
#include <map>
#include <ostream>
#include <set>
#include <variant>

#include "evs/cells.hpp"
#include "evs/dot.hpp"
#include "evs/errors.hpp"
#include "evs/io.hpp"
#include "evs/net.hpp"
#include "evs/probability.hpp"
#include "evs/translation.hpp"

namespace evs {

namespace {

using json = nlohmann::ordered_json;
using Host = std::variant<PrimeES, StableES>;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  bool json = false;
  bool allow_truncated = false;
  std::string file;
  std::string at;
  std::string config;
  std::string dist;
  std::string output;
  bool uniform = false;
  bool measure = false;
  std::size_t runs = 0;
  std::uint64_t seed = 0;
  std::string order = "first";
  std::size_t max_events = 10;
  // File that line numbers in errors refer to.
  mutable std::string source;
};

struct Result {
  json report;
  int code = kExitOk;
  // Plain text written instead of the human report (documents, DOT).
  std::optional<std::string> text;
};

json names(const EventUniverse& u, EventSet s) { return u.names_of(s); }

json name_sets(const EventUniverse& u, const std::vector<EventSet>& sets) {
  json out = json::array();
  for (EventSet s : sets) out.push_back(names(u, s));
  return out;
}

json sequence(const EventUniverse& u, std::span<const EventId> ids) {
  json out = json::array();
  for (EventId e : ids) out.push_back(u.name(e));
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

// Commas inside braces belong to event names such as "ea@{e1,ea}".
std::vector<std::string> split_list(const std::string& list) {
  std::string body = trim(list);
  if (body.size() >= 2 && body.front() == '{' && body.back() == '}') body = body.substr(1, body.size() - 2);
  std::vector<std::string> out;
  std::string current;
  int depth = 0;
  auto flush = [&] {
    std::string item = trim(current);
    if (!item.empty()) out.push_back(item);
    current.clear();
  };
  for (char c : body) {
    if (c == '{') ++depth;
    if (c == '}') --depth;
    if (c == ',' && depth == 0) {
      flush();
    } else {
      current += c;
    }
  }
  flush();
  return out;
}

EventSet parse_list(const EventUniverse& u, const std::string& list) { return u.set_of(split_list(list)); }

bool is_sequence_key(const std::string& key) {
  static const std::set<std::string> keys{"chain", "asymmetric_triple", "unequal_causes"};
  return keys.contains(key);
}

std::string render_value(const std::string& key, const json& v);

std::string render_set(const json& v) {
  std::string out = "{";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i].get<std::string>();
  return out + "}";
}

bool is_name_array(const json& v) {
  if (!v.is_array()) return false;
  for (const auto& x : v) {
    if (!x.is_string()) return false;
  }
  return true;
}

std::string render_value(const std::string& key, const json& v) {
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_weight(v.get<double>());
  if (v.is_number()) return v.dump();
  if (is_name_array(v)) {
    if (is_sequence_key(key)) {
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + v[i].get<std::string>();
      return out;
    }
    return render_set(v);
  }
  if (v.is_array()) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + render_value("", v[i]);
    return out;
  }
  std::string out;
  for (const auto& [k, x] : v.items()) out += (out.empty() ? "" : ", ") + k + " " + render_value(k, x);
  return out;
}

void render_fields(std::ostream& out, const json& obj, const std::string& indent) {
  for (const auto& [k, v] : obj.items()) {
    if (v.is_object()) {
      out << indent << k << ":\n";
      render_fields(out, v, indent + "  ");
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      out << indent << k << ":\n";
      for (const auto& item : v) {
        out << indent << "  - " << render_value("", item) << "\n";
      }
    } else {
      out << indent << k << ": " << render_value(k, v) << "\n";
    }
  }
}

void render_check(std::ostream& out, const json& r) {
  for (const auto& [k, v] : r.items()) {
    if (k == "properties") {
      for (const auto& p : v) {
        out << p["property"].get<std::string>() << ": " << (p["holds"].get<bool>() ? "yes" : "NO") << "\n";
        for (const auto& [pk, pv] : p.items()) {
          if (pk == "property" || pk == "holds") continue;
          if (pv.is_object()) {
            out << "  " << pk << ":\n";
            render_fields(out, pv, "    ");
          } else {
            out << "  " << pk << ": " << render_value(pk, pv) << "\n";
          }
        }
      }
    } else if (v.is_object()) {
      out << k << ":\n";
      render_fields(out, v, "  ");
    } else {
      out << k << ": " << render_value(k, v) << "\n";
    }
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
}

Host load_host(const std::string& path) {
  Document doc = load_document(path);
  if (auto* p = std::get_if<PrimeES>(&doc)) return std::move(*p);
  if (auto* s = std::get_if<StableES>(&doc)) return std::move(*s);
  if (std::holds_alternative<SafeNet>(doc)) {
    throw UsageError("'" + path + "' is a net; unfold it first with 'unfold " + path + " --max-events N'");
  }
  throw UsageError("'" + path + "' is a distribution file, not a structure");
}

const char* kind_name(const Host& h) { return std::holds_alternative<PrimeES>(h) ? "es" : "ses"; }

json cell_json(const EventUniverse& u, const BranchingCell& c) {
  json out;
  out["events"] = names(u, c.events);
  out["enabled_at"] = names(u, c.enabled_at);
  out["omega"] = name_sets(u, c.maximal);
  return out;
}

// check

json property(const std::string& name, bool holds) {
  json p;
  p["property"] = name;
  p["holds"] = holds;
  return p;
}

template <class H>
json jump_property(const H& host) {
  const auto& u = host.universe();
  const JumpReport j = check_jump_free(host);
  json p = property("jump-free", j.jump_free);
  if (!j.jump_free) {
    p["chain"] = sequence(u, j.chain);
    if (j.under) p["ordered_under"] = names(u, *j.under);
    if (!j.edge_configs.empty()) p["edge_configs"] = name_sets(u, j.edge_configs);
  }
  return p;
}

template <class H>
json common_properties(const H& host) {
  const auto& u = host.universe();
  json props = json::array();
  const LocallyFiniteReport lf = check_locally_finite(host);
  json p = property("locally-finite", lf.holds);
  if (!lf.holds) p["uncovered"] = names(u, lf.uncovered);
  props.push_back(p);
  const PreRegularReport pr = check_pre_regular(host);
  p = property("pre-regular", pr.holds);
  p["max_enabled"] = pr.max_enabled;
  props.push_back(p);
  props.push_back(jump_property(host));
  return props;
}

template <class H>
json confusion_json(const H& host) {
  const auto& u = host.universe();
  const ConfusionReport c = check_confusion(host);
  json out;
  out["confused"] = c.confused;
  if (c.asymmetric_triple) out["asymmetric_triple"] = sequence(u, *c.asymmetric_triple);
  if (c.unequal_causes) {
    const std::array<EventId, 2> pair{c.unequal_causes->first, c.unequal_causes->second};
    out["unequal_causes"] = sequence(u, pair);
  }
  if (c.concurrent_cell) {
    out["concurrent_cell"] = names(u, c.concurrent_cell->events);
    out["concurrent_choice"] = names(u, *c.concurrent_choice);
  }
  if (c.overlapping) {
    out["overlapping_cells"] = json::array({names(u, c.overlapping->first.events), names(u, c.overlapping->second.events)});
    out["overlapping_at"] = names(u, c.overlapping->first.enabled_at);
  }
  return out;
}

json pair_list(const EventUniverse& u, const std::vector<std::pair<EventId, EventId>>& pairs) {
  json out = json::array();
  for (auto [a, b] : pairs) out.push_back(json::array({u.name(a), u.name(b)}));
  return out;
}

json check_prime(const PrimeValidation& v) {
  const PrimeES& es = v.es;
  const auto& u = es.universe();
  json r;
  r["command"] = "check";
  r["kind"] = "es";
  r["name"] = es.name();
  r["events"] = es.size();
  if (es.truncated()) r["truncated"] = true;
  json props = json::array();
  json valid = property("valid", true);
  if (!v.added_causality.empty()) valid["closure_added_causality"] = pair_list(u, v.added_causality);
  if (!v.added_conflicts.empty()) valid["closure_added_conflicts"] = pair_list(u, v.added_conflicts);
  props.push_back(valid);
  for (auto& p : common_properties(es)) props.push_back(p);
  r["properties"] = props;
  r["confusion"] = confusion_json(es);
  return r;
}

json check_stable(const StableValidation& v) {
  const StableES& ses = v.ses;
  const auto& u = ses.universe();
  json r;
  r["command"] = "check";
  r["kind"] = "ses";
  r["name"] = ses.name();
  r["events"] = ses.size();
  json props = json::array();
  json valid = property("valid", true);
  if (!v.dead_events.empty()) valid["dead_events"] = v.dead_events;
  if (!v.redundant_forbidden.empty()) valid["redundant_forbidden"] = name_sets(u, v.redundant_forbidden);
  if (!v.redundant_rules.empty()) {
    json rules = json::array();
    for (const Rule& rule : v.redundant_rules) {
      rules.push_back(render_set(names(u, rule.premise)) + " |- " + u.name(rule.conclusion));
    }
    valid["redundant_rules"] = rules;
  }
  props.push_back(valid);

  const SensibleReport sr = check_sensible(ses);
  json sensible = property("sensible", sr.sensible);
  if (!sr.sensible) sensible["consistent_unreachable"] = name_sets(u, sr.pruned);
  props.push_back(sensible);

  const ConflictDrivenReport cd = check_conflict_driven(ses);
  json driven = property("conflict-driven", cd.holds());
  if (!cd.holds()) {
    json conditions;
    conditions["sensible"] = cd.sensible;
    conditions["inconsistency_traced"] = cd.inconsistency_traced;
    conditions["conflicts_persist"] = cd.conflicts_persist;
    driven["conditions"] = conditions;
    if (cd.unreachable_consistent) driven["unreachable_consistent"] = names(u, *cd.unreachable_consistent);
    if (cd.untraced_set) {
      json w;
      w["inconsistent"] = names(u, *cd.untraced_set);
      w["histories"] = name_sets(u, *cd.untraced_selection);
      driven["untraced"] = w;
    }
    if (cd.transient_conflict) {
      json w;
      w["first"] = u.name(cd.transient_conflict->first);
      w["second"] = u.name(cd.transient_conflict->second);
      w["immediate_under"] = names(u, cd.transient_conflict->under);
      driven["transient_conflict"] = w;
    }
  }
  props.push_back(driven);
  for (auto& p : common_properties(ses)) props.push_back(p);
  r["properties"] = props;
  r["confusion"] = confusion_json(ses);
  return r;
}

Result cmd_check(const Options& o) {
  const std::string text = read_file(o.file);
  json r;
  switch (document_kind(text)) {
    case DocumentKind::Prime: r = check_prime(validate_prime(parse_raw_prime(text))); break;
    case DocumentKind::Stable: r = check_stable(validate_stable(parse_raw_stable(text))); break;
    case DocumentKind::Net: {
      const SafeNet net = parse_net(text);
      const Unfolding uf = unfold_net(net, o.max_events);
      json unfolding;
      unfolding["max_events"] = o.max_events;
      unfolding["events"] = uf.es.size();
      unfolding["truncated"] = uf.truncated;
      PrimeValidation v{uf.es, {}, {}};
      r = check_prime(v);
      r["unfolding"] = unfolding;
      break;
    }
    case DocumentKind::Distribution: throw UsageError("'" + o.file + "' is a distribution file; use 'prob --dist'");
  }
  Result res;
  for (const auto& p : r["properties"]) {
    if (!p["holds"].get<bool>()) res.code = kExitPropertyFails;
  }
  res.report = std::move(r);
  return res;
}

// cells, cover

template <class H>
Result cells_for(const H& host, const Options& o) {
  const auto& u = host.universe();
  CellAnalysis<H> analysis(host);
  json r;
  r["name"] = host.name();
  json cells = json::array();
  if (!o.at.empty()) {
    const EventSet v = parse_list(u, o.at);
    if (!analysis.is_configuration(v)) throw Error(ErrorKind::NotAConfiguration, u.format(v) + " is not a configuration");
    r["at"] = names(u, v);
    for (const auto& c : analysis.enabled_cells(v)) cells.push_back(cell_json(u, c));
  } else {
    for (const auto& c : analysis.all_cells()) cells.push_back(cell_json(u, c));
  }
  r["cells"] = cells;
  return {r, kExitOk, std::nullopt};
}

template <class H>
Result cover_for(const H& host, const Options& o) {
  const auto& u = host.universe();
  CellAnalysis<H> analysis(host);
  const EventSet v = parse_list(u, o.config);
  if (!analysis.is_configuration(v)) throw Error(ErrorKind::NotAConfiguration, u.format(v) + " is not a configuration");
  json r;
  r["configuration"] = names(u, v);
  const DecompositionResult d = analysis.valid_decomposition(v);
  r["r_stopped"] = d.covering.has_value();
  Result res;
  if (!d.covering) {
    r["reached"] = names(u, d.reached);
    r["reason"] = d.reason;
    res.code = kExitPropertyFails;
  } else {
    json steps = json::array();
    for (const auto& s : d.covering->steps) {
      json step;
      step["cell"] = names(u, s.cell.events);
      step["enabled_at"] = names(u, s.cell.enabled_at);
      step["choice"] = names(u, s.choice);
      steps.push_back(step);
    }
    r["steps"] = steps;
    r["covering"] = name_sets(u, d.covering->cells());
    r["invariant"] = d.covering->invariant;
    r["disjoint"] = d.covering->disjoint;
    if (!d.covering->invariant || !d.covering->disjoint) res.code = kExitPropertyFails;
  }
  res.report = std::move(r);
  return res;
}

// prob, sample

template <class H>
LocallyRandomizedES<H> randomize(const H& host, const Options& o) {
  if (!o.dist.empty()) {
    o.source = o.dist;
    Document doc = load_document(o.dist);
    auto* table = std::get_if<DistributionTable>(&doc);
    if (!table) throw UsageError("'" + o.dist + "' is not a distribution file");
    auto model = LocallyRandomizedES<H>::from_table(host, *table, o.allow_truncated);
    o.source = o.file;
    return model;
  }
  return LocallyRandomizedES<H>::uniform(host, o.allow_truncated);
}

template <class H>
Result prob_for(const H& host, const Options& o) {
  if (o.config.empty() && !o.measure) throw UsageError("prob needs --config or --measure");
  const auto& u = host.universe();
  const auto model = randomize(host, o);
  json r;
  r["distribution"] = o.dist.empty() ? "uniform" : o.dist;
  std::optional<EventSet> v;
  if (!o.config.empty()) {
    v = parse_list(u, o.config);
    r["configuration"] = names(u, *v);
    r["likelihood"] = model.likelihood(*v);
  }
  if (o.measure) {
    const Measure m = model.global_measure();
    json outcomes = json::array();
    for (std::size_t i = 0; i < m.outcomes.size(); ++i) {
      json item;
      item["configuration"] = names(u, m.outcomes[i]);
      item["probability"] = m.probabilities[i];
      outcomes.push_back(item);
    }
    r["measure"] = outcomes;
    r["mass"] = m.mass;
    if (v) r["shadow"] = model.shadow(*v);
  }
  return {r, kExitOk, std::nullopt};
}

template <class H>
Result sample_for(const H& host, const Options& o) {
  const auto& u = host.universe();
  const auto model = randomize(host, o);
  const CellOrder order = o.order == "last" ? CellOrder::CanonicalLast : CellOrder::CanonicalFirst;
  std::mt19937_64 rng(o.seed);
  std::map<EventSet, std::size_t> counts;
  for (std::size_t i = 0; i < o.runs; ++i) ++counts[model.sample_run(rng, order).configuration];
  std::vector<EventSet> outcomes;
  for (const auto& [w, n] : counts) outcomes.push_back(w);
  sort_canonical(outcomes);
  json r;
  r["distribution"] = o.dist.empty() ? "uniform" : o.dist;
  r["runs"] = o.runs;
  r["seed"] = o.seed;
  json rows = json::array();
  for (EventSet w : outcomes) {
    json row;
    row["configuration"] = names(u, w);
    row["count"] = counts[w];
    row["frequency"] = static_cast<double>(counts[w]) / static_cast<double>(o.runs);
    rows.push_back(row);
  }
  r["outcomes"] = rows;
  return {r, kExitOk, std::nullopt};
}

// translate, unfold, dot

Result emit_document(const Options& o, json r, const std::string& text) {
  Result res;
  if (!o.output.empty()) {
    write_file(o.output, text);
    r["output"] = o.output;
  } else {
    r["document"] = text;
    res.text = text;
  }
  res.report = std::move(r);
  return res;
}

Result cmd_translate(const Options& o) {
  Host host = load_host(o.file);
  auto* ses = std::get_if<StableES>(&host);
  if (!ses) throw UsageError("translate expects a stable structure (.ses)");
  const ThetaResult t = theta(*ses);
  const GenerableReport g = binary_conflict_generable(t);
  json r;
  r["generable"] = g.generable;
  if (!g.generable) {
    r["witness"] = names(t.pes.universe(), *g.witness);
    return {r, kExitPropertyFails, std::nullopt};
  }
  const AssociatedES a = associated_es(*ses);
  r["events"] = a.es.size();
  json map;
  for (EventId e = 0; e < a.es.size(); ++e) map[a.es.event_name(e)] = ses->event_name(*a.map.map[e]);
  r["map"] = map;
  return emit_document(o, r, serialize(a.es));
}

Result cmd_unfold(const Options& o) {
  const SafeNet net = parse_net(read_file(o.file));
  const Unfolding uf = unfold_net(net, o.max_events);
  json r;
  r["events"] = uf.es.size();
  r["conditions"] = uf.conditions;
  r["truncated"] = uf.truncated;
  return emit_document(o, r, serialize(uf.es));
}

Result cmd_dot(const Options& o) {
  Host host = load_host(o.file);
  const std::string text = std::visit(
      [&](const auto& h) {
        std::optional<EventSet> v;
        if (!o.at.empty()) v = parse_list(h.universe(), o.at);
        return export_dot(h, v);
      },
      host);
  Result res;
  json r;
  if (!o.output.empty()) {
    write_file(o.output, text);
    r["output"] = o.output;
  } else {
    r["dot"] = text;
    res.text = text;
  }
  res.report = std::move(r);
  return res;
}

template <class F>
Result with_host(const Options& o, const std::string& command, F&& f) {
  Host host = load_host(o.file);
  Result res = std::visit(f, host);
  json r;
  r["command"] = command;
  r["kind"] = kind_name(host);
  for (auto& [k, v] : res.report.items()) r[k] = v;
  res.report = std::move(r);
  return res;
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotRStopped:
    case ErrorKind::NotGenerable:
    case ErrorKind::NotTotal:
    case ErrorKind::UnsafeNet:
    case ErrorKind::Precondition:
    case ErrorKind::WrongHost: return kExitPropertyFails;
    default: return kExitInputError;
  }
}

}  // namespace

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Event structure analyzer", "evs"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", o.json, "Machine-readable report");
  app.add_flag("--allow-truncated", o.allow_truncated, "Accept truncated unfoldings for probabilistic analysis");

  auto* check = app.add_subcommand("check", "Validity and structural property summary");
  check->add_option("file", o.file, "Structure or net")->required();
  check->add_option("--max-events", o.max_events, "Unfolding bound for nets")->check(CLI::PositiveNumber);

  auto* cells = app.add_subcommand("cells", "Branching cells, all or enabled at a configuration");
  cells->add_option("file", o.file)->required();
  cells->add_option("--at", o.at, "Comma-separated configuration");

  auto* cover = app.add_subcommand("cover", "Covering of an R-stopped configuration");
  cover->add_option("file", o.file)->required();
  cover->add_option("--config", o.config, "Comma-separated configuration")->required();

  auto* translate = app.add_subcommand("translate", "Associated binary-conflict structure");
  translate->add_option("file", o.file)->required();
  translate->add_option("-o,--output", o.output);

  auto* prob = app.add_subcommand("prob", "Likelihood and global measure");
  prob->add_option("file", o.file)->required();
  prob->add_option("--config", o.config, "Comma-separated configuration");
  auto* dist = prob->add_option("--dist", o.dist, "Distribution file");
  prob->add_flag("--uniform", o.uniform, "Uniform distribution on every cell")->excludes(dist);
  prob->add_flag("--measure", o.measure, "Print the measure on maximal configurations");

  auto* sample = app.add_subcommand("sample", "Monte Carlo runs");
  sample->add_option("file", o.file)->required();
  sample->add_option("--runs", o.runs)->required()->check(CLI::PositiveNumber);
  sample->add_option("--seed", o.seed)->required();
  auto* sdist = sample->add_option("--dist", o.dist, "Distribution file");
  sample->add_flag("--uniform", o.uniform)->excludes(sdist);
  sample->add_option("--order", o.order, "Cell resolution order")->check(CLI::IsMember({"first", "last"}));

  auto* unfold = app.add_subcommand("unfold", "Bounded unfolding of a safe net");
  unfold->add_option("file", o.file)->required();
  unfold->add_option("--max-events", o.max_events)->required()->check(CLI::PositiveNumber);
  unfold->add_option("-o,--output", o.output);

  auto* dot = app.add_subcommand("dot", "Graphviz export");
  dot->add_option("file", o.file)->required();
  dot->add_option("-o,--output", o.output);
  dot->add_option("--at", o.at, "Draw the cells enabled at this configuration");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  o.source = o.file;
  try {
    Result res;
    if (command == "check") {
      res = cmd_check(o);
    } else if (command == "cells") {
      res = with_host(o, command, [&](const auto& h) { return cells_for(h, o); });
    } else if (command == "cover") {
      res = with_host(o, command, [&](const auto& h) { return cover_for(h, o); });
    } else if (command == "prob") {
      res = with_host(o, command, [&](const auto& h) { return prob_for(h, o); });
    } else if (command == "sample") {
      res = with_host(o, command, [&](const auto& h) { return sample_for(h, o); });
    } else if (command == "translate") {
      res = cmd_translate(o);
    } else if (command == "unfold") {
      res = cmd_unfold(o);
    } else {
      res = cmd_dot(o);
    }
    if (!res.report.contains("command")) {
      json head{{"command", command}, {"file", o.file}};
      head.update(res.report);
      res.report = std::move(head);
    }
    res.report["exit_code"] = res.code;

    if (o.json) {
      out << res.report.dump(2) << "\n";
    } else if (res.text) {
      out << *res.text;
    } else if (command == "check") {
      render_check(out, res.report);
    } else {
      json shown = res.report;
      shown.erase("exit_code");
      render_fields(out, shown, "");
    }
    return res.code;
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    std::string where = o.source;
    if (e.line() > 0) where += ":" + std::to_string(e.line());
    if (e.column() > 0) where += ":" + std::to_string(e.column());
    if (o.json) {
      json r{{"command", command}, {"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}};
      if (e.line() > 0) r["error"]["line"] = e.line();
      if (e.column() > 0) r["error"]["column"] = e.column();
      r["exit_code"] = code;
      out << r.dump(2) << "\n";
    }
    err << "error: " << where << ": " << to_string(e.kind()) << ": " << e.what() << "\n";
    return code;
  } catch (const UsageError& e) {
    if (o.json) out << json{{"command", command}, {"error", {{"kind", "usage"}, {"message", e.what()}}}, {"exit_code", 2}}.dump(2) << "\n";
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace evs
