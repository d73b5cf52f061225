#include "evs/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "evs/errors.hpp"

namespace evs {

namespace {

struct Token {
  std::string text;
  int column = 0;
};

struct Line {
  int number = 0;
  std::vector<Token> tokens;
  int end_column = 0;
};

std::vector<Line> lex(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view raw = text.substr(pos, eol - pos);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    ++number;
    Line line{number, {}, static_cast<int>(raw.size()) + 1};
    std::size_t i = 0;
    while (i < raw.size()) {
      if (std::isspace(static_cast<unsigned char>(raw[i]))) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
      std::string tok(raw.substr(i, j - i));
      if (tok.starts_with("//")) break;
      line.tokens.push_back({tok, static_cast<int>(i) + 1});
      i = j;
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    pos = eol + 1;
  }
  return lines;
}

[[noreturn]] void syntax(const std::string& msg, int line, int column) {
  throw Error(ErrorKind::Syntax, msg, line, column);
}

class Cursor {
 public:
  explicit Cursor(const Line& line) : line_(line) {}

  bool done() const { return i_ == line_.tokens.size(); }
  int column() const { return done() ? line_.end_column : line_.tokens[i_].column; }
  int line() const { return line_.number; }

  const std::string& next(const char* what) {
    if (done()) syntax(std::string("expected ") + what, line(), column());
    return line_.tokens[i_++].text;
  }

  std::string identifier(const char* what = "identifier") {
    const int col = column();
    const std::string& t = next(what);
    if (!valid_identifier(t)) syntax("invalid identifier '" + t + "'", line(), col);
    return t;
  }

  void expect(std::string_view tok) {
    const int col = column();
    if (next(std::string("'").append(tok).append("'").c_str()) != tok) {
      syntax("expected '" + std::string(tok) + "'", line(), col);
    }
  }

  // `{ a b }`; braces may touch the neighbouring identifiers.
  std::vector<std::string> set() {
    const int col = column();
    std::string t = next("'{'");
    if (t.empty() || t.front() != '{') syntax("expected '{'", line(), col);
    t.erase(0, 1);
    std::vector<std::string> out;
    while (true) {
      if (t.empty()) {
        if (done()) syntax("unterminated set", line(), column());
        t = next("'}'");
      }
      if (t == "}") return out;
      const auto opens = std::count(t.begin(), t.end(), '{');
      const auto closes = std::count(t.begin(), t.end(), '}');
      if (closes > opens && t.back() == '}') {
        t.pop_back();
        out.push_back(t);
        return out;
      }
      out.push_back(t);
      t.clear();
    }
  }

  void end() {
    if (!done()) syntax("unexpected '" + line_.tokens[i_].text + "'", line(), column());
  }

 private:
  const Line& line_;
  std::size_t i_ = 0;
};

std::vector<Line> lines_with_header(std::string_view text, std::string_view keyword, std::string& name) {
  auto lines = lex(text);
  if (lines.empty()) syntax("missing header", 1, 1);
  Cursor c(lines.front());
  const int col = c.column();
  if (c.next("header") != keyword) syntax("missing header '" + std::string(keyword) + " NAME'", c.line(), col);
  name = c.identifier("name");
  c.end();
  return lines;
}

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ' ';
    out += n;
  }
  return out;
}

std::string braced(const std::vector<std::string>& names) {
  return names.empty() ? "{ }" : "{ " + join(names) + " }";
}

}  // namespace

std::string format_weight(double w) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, w);
  return std::string(buf, res.ptr);
}

DocumentKind document_kind(std::string_view text) {
  const auto lines = lex(text);
  if (lines.empty()) syntax("missing header", 1, 1);
  const auto& first = lines.front().tokens.front();
  if (first.text == "es") return DocumentKind::Prime;
  if (first.text == "ses") return DocumentKind::Stable;
  if (first.text == "net") return DocumentKind::Net;
  if (first.text == "prob" || first.text == "cell") return DocumentKind::Distribution;
  syntax("missing header: expected es, ses, net, prob or cell", lines.front().number, first.column);
}

RawPrime parse_raw_prime(std::string_view text) {
  RawPrime raw;
  const auto lines = lines_with_header(text, "es", raw.name);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    Cursor c(lines[k]);
    const int col = c.column();
    const std::string kw = c.next("statement");
    if (kw == "events") {
      while (!c.done()) raw.events.push_back(c.identifier());
    } else if (kw == "cause") {
      RawPair p;
      p.first = c.identifier();
      c.expect("<");
      p.second = c.identifier();
      p.line = c.line();
      raw.causes.push_back(p);
    } else if (kw == "conflict") {
      RawPair p;
      p.first = c.identifier();
      p.second = c.identifier();
      p.line = c.line();
      raw.conflicts.push_back(p);
    } else if (kw == "truncated") {
      raw.truncated = true;
    } else {
      syntax("unknown statement '" + kw + "'", c.line(), col);
    }
    c.end();
  }
  return raw;
}

RawStable parse_raw_stable(std::string_view text) {
  RawStable raw;
  const auto lines = lines_with_header(text, "ses", raw.name);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    Cursor c(lines[k]);
    const int col = c.column();
    const std::string kw = c.next("statement");
    if (kw == "events") {
      while (!c.done()) raw.events.push_back(c.identifier());
    } else if (kw == "enabling") {
      RawRule r;
      r.premise = c.set();
      c.expect("|-");
      r.conclusion = c.identifier();
      r.line = c.line();
      raw.rules.push_back(r);
    } else if (kw == "forbidden") {
      const int set_col = c.column();
      RawForbidden f{c.set(), c.line()};
      if (f.events.empty()) syntax("forbidden set must not be empty", c.line(), set_col);
      raw.forbidden.push_back(f);
    } else {
      syntax("unknown statement '" + kw + "'", c.line(), col);
    }
    c.end();
  }
  return raw;
}

RawNet parse_raw_net(std::string_view text) {
  RawNet raw;
  const auto lines = lines_with_header(text, "net", raw.name);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    Cursor c(lines[k]);
    const int col = c.column();
    const std::string kw = c.next("statement");
    if (kw == "places") {
      while (!c.done()) raw.places.push_back(c.identifier());
    } else if (kw == "transitions") {
      while (!c.done()) raw.transitions.push_back(c.identifier());
    } else if (kw == "arc") {
      RawArc a;
      a.from = c.identifier();
      c.expect("->");
      a.to = c.identifier();
      a.line = c.line();
      raw.arcs.push_back(a);
    } else if (kw == "marking") {
      while (!c.done()) raw.marking.push_back(c.identifier());
      raw.marking_line = c.line();
    } else {
      syntax("unknown statement '" + kw + "'", c.line(), col);
    }
    c.end();
  }
  return raw;
}

PrimeES parse_prime(std::string_view text) { return validate_prime(parse_raw_prime(text)).es; }
StableES parse_stable(std::string_view text) { return validate_stable(parse_raw_stable(text)).ses; }
SafeNet parse_net(std::string_view text) { return validate_net(parse_raw_net(text)); }

DistributionTable parse_distribution(std::string_view text) {
  const auto lines = lex(text);
  if (lines.empty()) syntax("missing header", 1, 1);
  DistributionTable table;
  std::size_t k = 0;
  if (lines.front().tokens.front().text == "prob") {
    Cursor c(lines.front());
    c.next("prob");
    table.name = c.identifier("name");
    c.end();
    k = 1;
  }
  for (; k < lines.size(); ++k) {
    Cursor c(lines[k]);
    const int col = c.column();
    const std::string kw = c.next("statement");
    if (kw == "cell") {
      table.cells.push_back({c.set(), {}, c.line()});
    } else if (kw == "config") {
      if (table.cells.empty()) syntax("'config' before any 'cell'", c.line(), col);
      DistributionTable::Weight w;
      w.choice = c.set();
      const int wcol = c.column();
      const std::string& num = c.next("weight");
      auto res = std::from_chars(num.data(), num.data() + num.size(), w.weight);
      if (res.ec != std::errc{} || res.ptr != num.data() + num.size()) {
        syntax("invalid weight '" + num + "'", c.line(), wcol);
      }
      w.line = c.line();
      table.cells.back().weights.push_back(w);
    } else {
      syntax("unknown statement '" + kw + "'", c.line(), col);
    }
    c.end();
  }
  return table;
}

Document parse_document(std::string_view text) {
  switch (document_kind(text)) {
    case DocumentKind::Prime: return parse_prime(text);
    case DocumentKind::Stable: return parse_stable(text);
    case DocumentKind::Net: return parse_net(text);
    case DocumentKind::Distribution: return parse_distribution(text);
  }
  syntax("unknown document kind", 1, 1);
}

std::string serialize(const PrimeES& es) {
  const auto& u = es.universe();
  std::ostringstream out;
  out << "es " << es.name() << '\n';
  out << "events";
  for (const auto& n : u.names()) out << ' ' << n;
  out << '\n';
  for (auto [a, b] : causality_cover(es)) out << "cause " << u.name(a) << " < " << u.name(b) << '\n';
  const auto imm = immediate_conflicts(es);
  for (EventId e = 0; e < es.size(); ++e) {
    for (EventId f : imm[e]) {
      if (e < f) out << "conflict " << u.name(e) << ' ' << u.name(f) << '\n';
    }
  }
  if (es.truncated()) out << "truncated\n";
  return out.str();
}

std::string serialize(const StableES& ses) {
  const auto& u = ses.universe();
  std::ostringstream out;
  out << "ses " << ses.name() << '\n';
  out << "events";
  for (const auto& n : u.names()) out << ' ' << n;
  out << '\n';
  for (const Rule& r : ses.rules()) out << "enabling " << braced(u.names_of(r.premise)) << " |- " << u.name(r.conclusion) << '\n';
  for (EventSet f : ses.forbidden()) out << "forbidden " << braced(u.names_of(f)) << '\n';
  return out.str();
}

std::string serialize(const SafeNet& net) {
  std::ostringstream out;
  out << "net " << net.name() << '\n';
  out << "places " << join(net.places()) << '\n';
  out << "transitions " << join(net.transitions()) << '\n';
  for (std::size_t t = 0; t < net.transitions().size(); ++t) {
    for (std::size_t p : net.preset()[t]) out << "arc " << net.places()[p] << " -> " << net.transitions()[t] << '\n';
    for (std::size_t p : net.postset()[t]) out << "arc " << net.transitions()[t] << " -> " << net.places()[p] << '\n';
  }
  std::vector<std::string> marked;
  for (std::size_t p : net.marking()) marked.push_back(net.places()[p]);
  out << "marking " << join(marked) << '\n';
  return out.str();
}

std::string serialize(const DistributionTable& table) {
  std::ostringstream out;
  if (!table.name.empty()) out << "prob " << table.name << '\n';
  for (const auto& cell : table.cells) {
    out << "cell " << braced(cell.events) << '\n';
    for (const auto& w : cell.weights) out << "  config " << braced(w.choice) << ' ' << format_weight(w.weight) << '\n';
  }
  return out.str();
}

std::string serialize(const Document& doc) {
  return std::visit([](const auto& d) { return serialize(d); }, doc);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Document load_document(const std::filesystem::path& path) { return parse_document(read_file(path)); }

}  // namespace evs
