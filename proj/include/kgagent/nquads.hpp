#pragma once

#include <iosfwd>
#include <string>

#include "kgagent/store.hpp"

namespace kgagent {

// N-Quads, restricted to what the stores actually contain: IRIs in angle
// brackets, plain or ^^-typed double-quoted literals, a mandatory graph term,
// one statement per line. No blank nodes, language tags, or \u escapes.

std::string to_nquads(const QuadStore& store);  // canonical (g,s,p,o) order
void write_nquads(const QuadStore& store, std::ostream& out);
void save_nquads(const QuadStore& store, const std::string& path);

// Throws ParseError with a 1-based line number on malformed input.
QuadStore parse_nquads(std::istream& in);
QuadStore parse_nquads_text(const std::string& text);
QuadStore load_nquads(const std::string& path);

}  // namespace kgagent
