#include "kgagent/nquads.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "kgagent/errors.hpp"

namespace kgagent {

namespace {

void append_escaped(std::string& out, const std::string& raw) {
  for (const char c : raw) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
}

void append_term(std::string& out, const Term& t) {
  if (is_literal(t)) {
    out.push_back('"');
    append_escaped(out, t.value);
    out.push_back('"');
    if (!t.datatype.empty()) {
      out += "^^<";
      out += t.datatype;
      out.push_back('>');
    }
  } else {
    out.push_back('<');
    out += t.value;
    out.push_back('>');
  }
}

struct LineScanner {
  const std::string& line;
  std::size_t pos = 0;
  std::size_t lineno;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("line " + std::to_string(lineno) + ": " + what);
  }

  void skip_ws() {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  }

  bool done() {
    skip_ws();
    return pos >= line.size();
  }

  std::string read_iri() {
    if (line[pos] != '<') fail("expected '<'");
    const auto end = line.find('>', ++pos);
    if (end == std::string::npos) fail("unterminated IRI");
    std::string out = line.substr(pos, end - pos);
    pos = end + 1;
    return out;
  }

  std::string read_quoted() {
    std::string out;
    ++pos;  // opening quote
    while (pos < line.size()) {
      const char c = line[pos++];
      if (c == '"') return out;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (pos >= line.size()) break;
      switch (line[pos++]) {
        case '\\': out.push_back('\\'); break;
        case '"': out.push_back('"'); break;
        case 'n': out.push_back('\n'); break;
        case 'r': out.push_back('\r'); break;
        case 't': out.push_back('\t'); break;
        default: fail("unsupported escape");
      }
    }
    fail("unterminated literal");
  }

  Term read_term(bool literal_ok) {
    skip_ws();
    if (pos >= line.size()) fail("truncated statement");
    if (line[pos] == '<') return iri(read_iri());
    if (line[pos] == '"') {
      if (!literal_ok) fail("literal outside object position");
      std::string value = read_quoted();
      std::string datatype;
      if (pos + 1 < line.size() && line[pos] == '^' && line[pos + 1] == '^') {
        pos += 2;
        if (pos >= line.size() || line[pos] != '<') fail("expected datatype IRI");
        datatype = read_iri();
      }
      return lit(std::move(value), std::move(datatype));
    }
    fail(std::string("unexpected character '") + line[pos] + "'");
  }
};

}  // namespace

std::string to_nquads(const QuadStore& store) {
  std::string out;
  for (const Quad& q : store.quads()) {
    append_term(out, q.s);
    out.push_back(' ');
    append_term(out, q.p);
    out.push_back(' ');
    append_term(out, q.o);
    out.push_back(' ');
    append_term(out, q.g);
    out += " .\n";
  }
  return out;
}

void write_nquads(const QuadStore& store, std::ostream& out) { out << to_nquads(store); }

void save_nquads(const QuadStore& store, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_nquads(store, out);
}

QuadStore parse_nquads(std::istream& in) {
  QuadStore store;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    LineScanner sc{line, 0, lineno};
    if (sc.done()) continue;
    if (line[sc.pos] == '#') continue;
    try {
      Quad q;
      q.s = sc.read_term(false);
      q.p = sc.read_term(false);
      q.o = sc.read_term(true);
      q.g = sc.read_term(false);
      sc.skip_ws();
      if (sc.pos >= line.size() || line[sc.pos] != '.') sc.fail("expected terminating '.'");
      ++sc.pos;
      if (!sc.done()) sc.fail("trailing content after '.'");
      store.insert(q);
    } catch (const MalformedTermError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return store;
}

QuadStore parse_nquads_text(const std::string& text) {
  std::istringstream in(text);
  return parse_nquads(in);
}

QuadStore load_nquads(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return parse_nquads(in);
}

}  // namespace kgagent
