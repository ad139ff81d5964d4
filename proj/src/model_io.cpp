#include "c1p/model_io.hpp"

#include <charconv>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace c1p {

namespace {

bool legal_name(const std::string& s) {
  static const std::regex kName("[A-Za-z0-9_]+");
  return std::regex_match(s, kName);
}

template <typename Int>
bool parse_int(std::string_view text, Int& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

}  // namespace

ParseResult parse_model(std::istream& in) {
  C1pvassModel model;
  std::vector<ParseError> errors;
  auto fail = [&](int line, std::string msg) { errors.push_back({line, std::move(msg)}); };

  bool header = false;
  int initial_count = 0;
  std::set<std::pair<std::string, std::string>> pairs;
  std::vector<std::pair<int, Transition>> pending;

  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    auto tokens = tokenize(raw);
    if (tokens.empty()) continue;

    if (!header) {
      if (tokens.size() != 2 || tokens[0] != "c1pvass" || tokens[1] != "v1") {
        fail(lineno, "expected header 'c1pvass v1'");
        return errors;
      }
      header = true;
      continue;
    }

    if (tokens[0] == "state") {
      if (tokens.size() < 2 || !legal_name(tokens[1])) {
        fail(lineno, "state needs a name matching [A-Za-z0-9_]+");
        continue;
      }
      const std::string& name = tokens[1];
      if (model.has_state(name)) {
        fail(lineno, "duplicate state " + name);
        continue;
      }
      std::int64_t lb = 0;
      bool is_initial = false, is_final = false, ok = true;
      for (std::size_t i = 2; i < tokens.size(); ++i) {
        const auto& tok = tokens[i];
        if (tok.rfind("lb=", 0) == 0) {
          if (!parse_int(std::string_view(tok).substr(3), lb) || lb < 0) {
            fail(lineno, "lb must be a nonnegative integer");
            ok = false;
          }
        } else if (tok == "initial") {
          is_initial = true;
        } else if (tok == "final") {
          is_final = true;
        } else {
          fail(lineno, "unknown state attribute '" + tok + "'");
          ok = false;
        }
      }
      if (!ok) continue;
      model.add_state(name, lb);
      if (is_initial) {
        ++initial_count;
        model.initial = name;
      }
      if (is_final) model.finals.insert(name);
    } else if (tokens[0] == "trans") {
      if (tokens.size() != 5 || tokens[3].rfind("add=", 0) != 0 || tokens[4].rfind("stack=", 0) != 0) {
        fail(lineno, "expected 'trans <src> <dst> add=<int> stack=<op>'");
        continue;
      }
      Transition t;
      t.src = tokens[1];
      t.dst = tokens[2];
      if (!legal_name(t.src) || !legal_name(t.dst)) {
        fail(lineno, "illegal state name in transition");
        continue;
      }
      if (!parse_int(std::string_view(tokens[3]).substr(4), t.update)) {
        fail(lineno, "add must be an integer");
        continue;
      }
      std::string op = tokens[4].substr(6);
      if (op == "none") {
        t.stack = StackOp::none();
      } else if (op.rfind("push:", 0) == 0 || op.rfind("pop:", 0) == 0) {
        bool push = op[1] == 'u';
        std::string sym = op.substr(push ? 5 : 4);
        if (!legal_name(sym)) {
          fail(lineno, "illegal stack symbol '" + sym + "'");
          continue;
        }
        t.stack = push ? StackOp::push(sym) : StackOp::pop(sym);
        model.stack_alphabet.insert(sym);
      } else {
        fail(lineno, "stack must be none, push:<sym> or pop:<sym>");
        continue;
      }
      if (!pairs.emplace(t.src, t.dst).second) {
        fail(lineno, "duplicate transition " + t.src + " -> " + t.dst);
        continue;
      }
      pending.emplace_back(lineno, std::move(t));
    } else {
      fail(lineno, "unknown directive '" + tokens[0] + "'");
    }
  }

  if (!header) fail(0, "empty file: expected header 'c1pvass v1'");
  for (auto& [line, t] : pending) {
    if (!model.has_state(t.src)) fail(line, "undeclared state " + t.src);
    if (!model.has_state(t.dst)) fail(line, "undeclared state " + t.dst);
    model.transitions.push_back(std::move(t));
  }
  if (header && initial_count != 1) fail(0, "exactly one initial state required");
  if (header && model.finals.empty()) fail(0, "at least one final state required");
  if (errors.empty()) {
    for (const auto& d : validate(model)) fail(0, d.message);
  }
  if (!errors.empty()) return errors;
  return model;
}

ParseResult parse_model_text(const std::string& text) {
  std::istringstream in(text);
  return parse_model(in);
}

ParseResult load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::vector<ParseError>{{0, "cannot open " + path}};
  return parse_model(in);
}

std::string serialize_model(const C1pvassModel& model) {
  std::ostringstream out;
  out << "c1pvass v1\n";
  for (const auto& s : model.states) {
    out << "state " << s;
    if (auto g = model.guard(s); g != 0) out << " lb=" << g;
    if (s == model.initial) out << " initial";
    if (model.finals.contains(s)) out << " final";
    out << "\n";
  }
  for (const auto& t : model.transitions) {
    out << "trans " << t.src << " " << t.dst << " add=" << t.update << " stack=";
    switch (t.stack.kind) {
      case StackKind::None: out << "none"; break;
      case StackKind::Push: out << "push:" << t.stack.symbol; break;
      case StackKind::Pop: out << "pop:" << t.stack.symbol; break;
    }
    out << "\n";
  }
  return out.str();
}

std::string format_errors(const std::vector<ParseError>& errors) {
  std::ostringstream out;
  for (const auto& e : errors) {
    if (e.line > 0) out << "line " << e.line << ": ";
    out << e.message << "\n";
  }
  return out.str();
}

}  // namespace c1p
