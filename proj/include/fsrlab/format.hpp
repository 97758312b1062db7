#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "fsrlab/model.hpp"

namespace fsrlab {

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UnknownIdentifier, DuplicateIdentifier };

  ParseError(Kind kind, int line, int column, const std::string& message);

  Kind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  Kind kind_;
  int line_;
  int column_;
};

const char* to_string(ParseError::Kind kind);

// Parses the `.fsr` text format. Only name resolution happens here; semantic
// checks live in validate_fsr.
FsrSpec parse_fsr(std::string_view text);

// Canonical form: declarations are emitted in stored order with fixed
// spacing, so serialize(parse(serialize(s))) == serialize(s).
std::string serialize_fsr(const FsrSpec& spec);

std::string signed_edge_name(const FsrSpec& spec, SignedEdge e);

}  // namespace fsrlab
