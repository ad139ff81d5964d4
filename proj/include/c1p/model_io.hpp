#pragma once

// Line-oriented model file format:
//
//   c1pvass v1
//   state <name> [lb=<nonneg-int>] [initial] [final]
//   trans <src> <dst> add=<int> stack=none|push:<sym>|pop:<sym>
//
// '#' starts a comment, blank lines are ignored, names match [A-Za-z0-9_]+.
// The stack alphabet is the set of symbols mentioned by transitions.

#include "c1p/model.hpp"

#include <istream>
#include <string>
#include <variant>
#include <vector>

namespace c1p {

struct ParseError {
  int line = 0;  // 1-based, 0 for whole-file problems
  std::string message;
};

using ParseResult = std::variant<C1pvassModel, std::vector<ParseError>>;

ParseResult parse_model(std::istream& in);
ParseResult parse_model_text(const std::string& text);
ParseResult load_model_file(const std::string& path);

// Canonical serialization: header, states in declaration order, transitions
// in model order. Round-trips through parse_model for models with
// file-legal names.
std::string serialize_model(const C1pvassModel& model);

std::string format_errors(const std::vector<ParseError>& errors);

}  // namespace c1p
