#include "c1p/model.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <set>
#include <sstream>
#include <utility>

namespace c1p {

std::int64_t C1pvassModel::guard(const std::string& state) const {
  auto it = lower_bound.find(state);
  return it == lower_bound.end() ? 0 : it->second;
}

bool C1pvassModel::has_state(const std::string& state) const {
  return std::find(states.begin(), states.end(), state) != states.end();
}

bool C1pvassModel::all_guards_zero() const {
  return std::all_of(lower_bound.begin(), lower_bound.end(),
                     [](const auto& kv) { return kv.second == 0; });
}

bool C1pvassModel::updates_flat() const {
  return std::all_of(transitions.begin(), transitions.end(),
                     [](const Transition& t) { return t.update >= -1 && t.update <= 1; });
}

void C1pvassModel::add_state(const std::string& name, std::int64_t g) {
  if (has_state(name)) throw ModelError("duplicate state: " + name);
  states.push_back(name);
  lower_bound[name] = g;
}

std::vector<Diagnostic> validate(const C1pvassModel& model) {
  std::vector<Diagnostic> out;
  auto report = [&](std::string msg) { out.push_back({std::move(msg)}); };

  std::set<std::string> seen;
  for (const auto& s : model.states) {
    if (!seen.insert(s).second) report("duplicate state: " + s);
  }
  for (const auto& [s, g] : model.lower_bound) {
    if (!seen.contains(s)) report("guard on undeclared state: " + s);
    if (g < 0) report("negative guard on state " + s);
  }
  if (!seen.contains(model.initial)) {
    report("initial state undeclared: " + model.initial);
  } else if (model.guard(model.initial) != 0) {
    report("initial guard nonzero: state " + model.initial);
  }
  if (model.finals.empty()) report("no final state");
  for (const auto& f : model.finals) {
    if (!seen.contains(f)) report("final state undeclared: " + f);
  }
  if (model.stack_alphabet.contains(std::string(kBottomSymbol))) {
    report("bottom symbol in stack alphabet");
  }

  std::set<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i < model.transitions.size(); ++i) {
    const auto& t = model.transitions[i];
    std::string where = "transition #" + std::to_string(i) + " " + t.src + "->" + t.dst;
    if (!seen.contains(t.src)) report(where + ": undeclared source");
    if (!seen.contains(t.dst)) report(where + ": undeclared target");
    if (!pairs.emplace(t.src, t.dst).second) report(where + ": duplicate state pair");
    if (t.stack.kind == StackKind::None) continue;
    if (t.stack.symbol == kBottomSymbol) {
      report(where + (t.stack.kind == StackKind::Push ? ": bottom symbol pushed" : ": bottom symbol popped"));
    } else if (!model.stack_alphabet.contains(t.stack.symbol)) {
      report(where + ": unknown stack symbol " + t.stack.symbol);
    }
  }
  return out;
}

void require_valid(const C1pvassModel& model) {
  auto diags = validate(model);
  if (diags.empty()) return;
  std::string msg = "invalid model:";
  for (const auto& d : diags) msg += "\n  " + d.message;
  throw ModelError(msg);
}

std::vector<std::string> binary_update_symbols(std::int64_t n) {
  std::uint64_t magnitude = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
  std::vector<std::string> out;
  for (int bit = 63; bit >= 0; --bit) {
    if ((magnitude >> bit) & 1U) out.push_back("$a" + std::to_string(bit + 1));
  }
  return out;
}

namespace {

std::string fresh_name(const C1pvassModel& model, const std::string& base) {
  if (!model.has_state(base)) return base;
  for (int i = 1;; ++i) {
    std::string candidate = base + "_" + std::to_string(i);
    if (!model.has_state(candidate)) return candidate;
  }
}

// Pop-loop gadget for one sign. Created lazily, shared by all transitions of
// that sign.
struct Gadget {
  std::string hub;
  bool built = false;
  std::set<std::string> exits;
};

}  // namespace

C1pvassModel flatten_updates(const C1pvassModel& model) {
  require_valid(model);
  if (model.updates_flat()) return model;

  std::uint64_t widest = 0;
  for (const auto& t : model.transitions) {
    std::uint64_t mag = t.update < 0 ? static_cast<std::uint64_t>(-(t.update + 1)) + 1 : static_cast<std::uint64_t>(t.update);
    widest = std::max(widest, mag);
  }
  const int width = static_cast<int>(std::bit_width(widest));

  C1pvassModel out = model;
  out.transitions.clear();
  for (int i = 1; i <= width; ++i) out.stack_alphabet.insert("$a" + std::to_string(i));
  for (const auto& s : model.states) out.stack_alphabet.insert("$#" + s);

  Gadget plus{fresh_name(out, "$gplus"), false, {}};
  Gadget minus{fresh_name(out, "$gminus"), false, {}};
  auto build = [&](Gadget& g, std::int64_t step) {
    if (g.built) return;
    g.built = true;
    out.add_state(g.hub);
    out.transitions.push_back({g.hub, g.hub, step, StackOp::pop("$a1")});
    for (int i = 2; i <= width; ++i) {
      std::string first = fresh_name(out, g.hub + "_" + std::to_string(i));
      out.add_state(first);
      std::string second = fresh_name(out, g.hub + "_" + std::to_string(i) + "b");
      out.add_state(second);
      std::string lower = "$a" + std::to_string(i - 1);
      out.transitions.push_back({g.hub, first, 0, StackOp::pop("$a" + std::to_string(i))});
      out.transitions.push_back({first, second, 0, StackOp::push(lower)});
      out.transitions.push_back({second, g.hub, 0, StackOp::push(lower)});
    }
  };

  for (std::size_t idx = 0; idx < model.transitions.size(); ++idx) {
    const auto& t = model.transitions[idx];
    if (t.update >= -1 && t.update <= 1) {
      out.transitions.push_back(t);
      continue;
    }
    Gadget& g = t.update > 0 ? plus : minus;
    build(g, t.update > 0 ? 1 : -1);

    std::vector<StackOp> pushes{StackOp::push("$#" + t.dst)};
    for (auto& sym : binary_update_symbols(t.update)) pushes.push_back(StackOp::push(std::move(sym)));

    std::string prefix = "$t" + std::to_string(idx) + "_";
    std::string current = fresh_name(out, prefix + "0");
    out.add_state(current);
    out.transitions.push_back({t.src, current, 0, t.stack});
    for (std::size_t j = 0; j < pushes.size(); ++j) {
      std::string next;
      if (j + 1 == pushes.size()) {
        next = g.hub;
      } else {
        next = fresh_name(out, prefix + std::to_string(j + 1));
        out.add_state(next);
      }
      out.transitions.push_back({current, next, 0, pushes[j]});
      current = next;
    }
    if (g.exits.insert(t.dst).second) {
      out.transitions.push_back({g.hub, t.dst, 0, StackOp::pop("$#" + t.dst)});
    }
  }
  return out;
}

C1pvassModel single_final(const C1pvassModel& model) {
  if (model.finals.size() == 1) return model;
  C1pvassModel out = model;
  std::string sink = fresh_name(out, "$final");
  out.add_state(sink);
  for (const auto& f : model.finals) out.transitions.push_back({f, sink, 0, StackOp::none()});
  out.finals = {sink};
  return out;
}

C1pvassModel erase_guards(const C1pvassModel& model) {
  C1pvassModel out = model;
  for (auto& [_, g] : out.lower_bound) g = 0;
  return out;
}

std::size_t encoding_size(const C1pvassModel& model) {
  auto bits = [](std::int64_t v) -> std::size_t {
    std::uint64_t mag = v < 0 ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
    return std::max<std::size_t>(1, std::bit_width(mag)) + 1;
  };
  std::size_t size = model.states.size() + model.stack_alphabet.size() + model.finals.size();
  for (const auto& [_, g] : model.lower_bound) size += bits(g);
  for (const auto& t : model.transitions) size += 3 + bits(t.update);
  return size;
}

// ---------------------------------------------------------------------------

int Pda::add_state(std::string name) {
  states.push_back(std::move(name));
  return static_cast<int>(states.size()) - 1;
}

int Pda::add_letter(std::string name) {
  int existing = letter_index(name);
  if (existing >= 0) return existing;
  alphabet.push_back(std::move(name));
  return static_cast<int>(alphabet.size()) - 1;
}

int Pda::add_stack_symbol(std::string name) {
  int existing = stack_symbol_index(name);
  if (existing >= 0) return existing;
  stack_alphabet.push_back(std::move(name));
  return static_cast<int>(stack_alphabet.size()) - 1;
}

int Pda::letter_index(std::string_view name) const {
  auto it = std::find(alphabet.begin(), alphabet.end(), name);
  return it == alphabet.end() ? -1 : static_cast<int>(it - alphabet.begin());
}

int Pda::stack_symbol_index(std::string_view name) const {
  auto it = std::find(stack_alphabet.begin(), stack_alphabet.end(), name);
  return it == stack_alphabet.end() ? -1 : static_cast<int>(it - stack_alphabet.begin());
}

bool Pda::is_final(int state) const {
  return std::find(finals.begin(), finals.end(), state) != finals.end();
}

std::vector<Diagnostic> validate(const Pda& pda) {
  std::vector<Diagnostic> out;
  const int n = static_cast<int>(pda.states.size());
  auto in_range = [](int v, std::size_t size) { return v >= 0 && v < static_cast<int>(size); };
  if (!in_range(pda.initial, pda.states.size())) out.push_back({"initial state out of range"});
  for (int f : pda.finals) {
    if (!in_range(f, pda.states.size())) out.push_back({"final state out of range"});
  }
  for (std::size_t i = 0; i < pda.transitions.size(); ++i) {
    const auto& t = pda.transitions[i];
    std::string where = "pda transition #" + std::to_string(i);
    if (t.src < 0 || t.src >= n || t.dst < 0 || t.dst >= n) out.push_back({where + ": state out of range"});
    if (t.letter != kEpsilon && !in_range(t.letter, pda.alphabet.size())) out.push_back({where + ": letter out of range"});
    if (t.op != StackKind::None && !in_range(t.symbol, pda.stack_alphabet.size())) {
      out.push_back({where + ": stack symbol out of range"});
    }
  }
  return out;
}

Pda underlying_pda(const C1pvassModel& model) {
  Pda pda;
  std::map<std::string, int> index;
  for (const auto& s : model.states) index[s] = pda.add_state(s);
  for (const auto& g : model.stack_alphabet) pda.add_stack_symbol(g);
  pda.initial = index.at(model.initial);
  for (const auto& f : model.finals) pda.finals.push_back(index.at(f));
  std::sort(pda.finals.begin(), pda.finals.end());
  for (const auto& t : model.transitions) {
    PdaTransition pt{index.at(t.src), index.at(t.dst), kEpsilon, t.stack.kind, -1};
    if (t.stack.kind != StackKind::None) pt.symbol = pda.stack_symbol_index(t.stack.symbol);
    pda.transitions.push_back(pt);
  }
  return pda;
}

ParikhVector parikh_image(const Pda& pda, const std::vector<int>& word) {
  ParikhVector v;
  for (const auto& letter : pda.alphabet) v.counts[letter] = 0;
  for (int l : word) ++v.counts[pda.alphabet.at(l)];
  return v;
}

}  // namespace c1p
