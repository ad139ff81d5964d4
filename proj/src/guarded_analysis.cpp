#include "c1p/guarded_analysis.hpp"

#include "c1p/grammar.hpp"
#include "c1p/zero_analysis.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace c1p {

GuardLadder GuardLadder::of(const C1pvassModel& model) {
  GuardLadder ladder;
  ladder.levels.push_back(0);
  for (const auto& s : model.states) ladder.levels.push_back(model.guard(s));
  std::sort(ladder.levels.begin(), ladder.levels.end());
  ladder.levels.erase(std::unique(ladder.levels.begin(), ladder.levels.end()), ladder.levels.end());
  for (const auto& s : model.states) {
    auto it = std::lower_bound(ladder.levels.begin(), ladder.levels.end(), BigInt(model.guard(s)));
    ladder.state_level[s] = static_cast<int>(it - ladder.levels.begin());
  }
  return ladder;
}

void GuardLadder::insert(const std::string& state, const BigInt& guard) {
  auto it = std::lower_bound(levels.begin(), levels.end(), guard);
  const int at = static_cast<int>(it - levels.begin());
  if (it == levels.end() || *it != guard) {
    levels.insert(it, guard);
    for (auto& [_, level] : state_level) {
      if (level >= at) ++level;
    }
  }
  state_level[state] = at;
}

std::string SliceLetter::name() const {
  const std::string i = std::to_string(index);
  switch (kind) {
    case LetterKind::A: return "a" + i;
    case LetterKind::APrime: return "a" + i + "'";
    case LetterKind::AHat: return "a" + i + "^";
    case LetterKind::B: return "b" + i;
    case LetterKind::BPrime: return "b" + i + "'";
    case LetterKind::BHat: return "b" + i + "^";
    case LetterKind::End: return "e" + i;
    case LetterKind::EndPlus: return "e" + i + "+";
  }
  return {};
}

C1pvassModel prepare_guarded_model(const C1pvassModel& model) {
  require_valid(model);
  return single_final(flatten_updates(model));
}

namespace {

// Minus is B_{i-1}- in the prefix ladder and C_{i-1}- in the suffix ladder;
// its cap is the level below its slice.
enum class Phase { Base, Plus, Minus, Rest };

struct Block {
  Phase phase;
  int level;

  bool operator==(const Block&) const = default;
};

struct Move {
  Block to;
  std::optional<SliceLetter> letter;
};

std::vector<Block> all_blocks(int m) {
  std::vector<Block> out;
  for (int i = 0; i <= m; ++i) {
    out.push_back({Phase::Base, i});
    out.push_back({Phase::Plus, i});
    if (i >= 1) out.push_back({Phase::Minus, i});
    out.push_back({Phase::Rest, i});
  }
  return out;
}

const BigInt& cap(const GuardLadder& ladder, Block b) {
  return ladder.levels[b.phase == Phase::Minus ? b.level - 1 : b.level];
}

std::string prefix_tag(Block b) {
  const std::string i = std::to_string(b.level);
  switch (b.phase) {
    case Phase::Base: return "G" + i;
    case Phase::Plus: return "G" + i + "+";
    case Phase::Minus: return "B" + std::to_string(b.level - 1) + "-";
    case Phase::Rest: return "R" + i;
  }
  return {};
}

std::string suffix_tag(Block b) {
  const std::string i = std::to_string(b.level);
  switch (b.phase) {
    case Phase::Base: return "H" + i;
    case Phase::Plus: return "H" + i + "+";
    case Phase::Minus: return "C" + std::to_string(b.level - 1) + "-";
    case Phase::Rest: return "S" + i;
  }
  return {};
}

SliceLetter letter(LetterKind kind, int index) { return {kind, index}; }

// Prefix ladder over the number of increments so far. For reachability a
// decrement reads nothing here and the crossing out of R_i reads ahat.
std::vector<Move> prefix_moves(Block b, std::int64_t update, int m, bool reach) {
  const int i = b.level;
  if (update == 0) return {{b, std::nullopt}};
  std::vector<Move> out;
  if (update > 0) {
    switch (b.phase) {
      case Phase::Base:
      case Phase::Plus:
        out.push_back({{Phase::Plus, i}, letter(LetterKind::A, i)});
        if (i < m) out.push_back({{Phase::Base, i + 1}, letter(LetterKind::APrime, i)});
        break;
      case Phase::Minus: out.push_back({{Phase::Rest, i}, letter(LetterKind::A, i)}); break;
      case Phase::Rest:
        out.push_back({{Phase::Rest, i}, letter(LetterKind::A, i)});
        if (i < m) out.push_back({{Phase::Rest, i + 1}, letter(reach ? LetterKind::AHat : LetterKind::APrime, i)});
        break;
    }
    return out;
  }
  std::optional<SliceLetter> dec;
  if (!reach) dec = letter(LetterKind::B, i);
  switch (b.phase) {
    case Phase::Base:
      if (i >= 1) out.push_back({{Phase::Minus, i}, dec});
      break;
    case Phase::Plus: out.push_back({{Phase::Rest, i}, dec}); break;
    case Phase::Minus: out.push_back({{Phase::Minus, i}, dec}); break;
    case Phase::Rest: out.push_back({{Phase::Rest, i}, dec}); break;
  }
  return out;
}

// Suffix ladder over k plus the decrements still to come, in forward time:
// levels only go down, and the phase records whether an increment is ahead.
std::vector<Move> suffix_moves(Block b, std::int64_t update) {
  const int i = b.level;
  if (update == 0) return {{b, std::nullopt}};
  std::vector<Move> out;
  if (update < 0) {
    switch (b.phase) {
      case Phase::Plus:
        out.push_back({{Phase::Plus, i}, letter(LetterKind::B, i)});
        out.push_back({{Phase::Base, i}, letter(LetterKind::B, i)});
        break;
      case Phase::Base:
        if (i >= 1) {
          out.push_back({{Phase::Base, i - 1}, letter(LetterKind::BPrime, i - 1)});
          out.push_back({{Phase::Plus, i - 1}, letter(LetterKind::BPrime, i - 1)});
        }
        break;
      case Phase::Rest:
        out.push_back({{Phase::Rest, i}, letter(LetterKind::B, i)});
        if (i >= 1) {
          out.push_back({{Phase::Minus, i}, letter(LetterKind::B, i)});
          out.push_back({{Phase::Rest, i - 1}, letter(LetterKind::BHat, i - 1)});
        }
        break;
      case Phase::Minus: break;
    }
    return out;
  }
  switch (b.phase) {
    case Phase::Minus:
      out.push_back({{Phase::Minus, i}, std::nullopt});
      out.push_back({{Phase::Base, i}, std::nullopt});
      break;
    case Phase::Rest:
      out.push_back({{Phase::Rest, i}, std::nullopt});
      out.push_back({{Phase::Plus, i}, std::nullopt});
      break;
    default: break;
  }
  return out;
}

struct Source {
  const C1pvassModel& model;
  GuardLadder ladder;
  std::vector<std::string> states;
  std::vector<Transition> transitions;
  std::map<std::string, BigInt> guards;
  std::string final;
};

Source make_source(const C1pvassModel& prepared, const std::optional<BigInt>& target) {
  Source src{prepared, GuardLadder::of(prepared), prepared.states, prepared.transitions, {}, *prepared.finals.begin()};
  for (const auto& s : prepared.states) src.guards[s] = prepared.guard(s);
  if (target) {
    const std::string t(kCoverTarget);
    src.states.push_back(t);
    src.guards[t] = *target;
    src.transitions.push_back({src.final, t, 0, StackOp::none()});
    src.ladder.insert(t, *target);
    src.final = t;
  }
  return src;
}

void add_letters(Pda& pda, int m, std::initializer_list<LetterKind> kinds) {
  for (int i = 0; i <= m; ++i) {
    for (auto k : kinds) pda.add_letter(letter(k, i).name());
  }
}

int letter_of(const Pda& pda, const std::optional<SliceLetter>& l) {
  return l ? pda.letter_index(l->name()) : kEpsilon;
}

PdaTransition pda_transition(const Pda& pda, int src, int dst, int l, const StackOp& op) {
  PdaTransition t{src, dst, l, op.kind, -1};
  if (op.kind != StackKind::None) t.symbol = pda.stack_symbol_index(op.symbol);
  return t;
}

SlicePda finish(const Pda& pda, GuardLadder ladder) {
  SlicePda out{trim(pda), std::move(ladder), {}, {}};
  for (const auto& name : out.pda.states) {
    auto at = name.rfind('@');
    if (at == std::string::npos) {
      out.origin.emplace_back();
      out.block.emplace_back();
    } else {
      out.origin.push_back(name.substr(0, at));
      out.block.push_back(name.substr(at + 1));
    }
  }
  return out;
}

LinearExpr count(LetterKind kind, int index) { return LinearExpr::var(count_variable(letter(kind, index).name())); }

LinearExpr counts_below(int level, std::initializer_list<LetterKind> kinds) {
  LinearExpr e;
  for (int i = 0; i < level; ++i) {
    for (auto k : kinds) e += count(k, i);
  }
  return e;
}

BigInt integer_query(const Rational& k) {
  if (!is_integer(k) || k < 0) throw std::invalid_argument("guarded queries need a nonnegative integer k");
  return numerator(k);
}

// The slice grammar, simplified, or nullopt when its language is empty.
std::optional<Cfg> slice_grammar(const SlicePda& slices) {
  Cfg g = pda_to_cfg(slices.pda);
  if (is_empty(g)) return std::nullopt;
  return simplify_for_parikh(g);
}

Formula query(const SlicePda& slices, const Formula& condition) {
  auto g = slice_grammar(slices);
  if (!g) return Formula::falsity();
  return Formula::conj({condition, parikh_formula(*g)});
}

bool decide(const SlicePda& slices, const Formula& condition, const GuardedOptions& options) {
  auto g = slice_grammar(slices);
  if (!g) return false;
  auto r = solve_parikh(*g, condition, {options.node_budget});
  if (r.status == SolveStatus::ResourceExceeded) {
    throw ResourceExceeded("solver gave up after " + std::to_string(r.nodes) + " nodes");
  }
  return r.status == SolveStatus::Sat;
}

}  // namespace

SlicePda build_cover_slices(const C1pvassModel& prepared, const std::optional<BigInt>& target) {
  Source src = make_source(prepared, target);
  const int m = src.ladder.top();
  const auto blocks = all_blocks(m);

  Pda pda;
  add_letters(pda, m, {LetterKind::A, LetterKind::APrime, LetterKind::B});
  for (const auto& g : prepared.stack_alphabet) pda.add_stack_symbol(g);
  std::map<std::pair<std::string, std::string>, int> index;
  for (auto b : blocks) {
    for (const auto& s : src.states) {
      if (src.guards.at(s) <= cap(src.ladder, b)) {
        index[{s, prefix_tag(b)}] = pda.add_state(s + "@" + prefix_tag(b));
      }
    }
  }
  auto find = [&](const std::string& s, Block b) {
    auto it = index.find({s, prefix_tag(b)});
    return it == index.end() ? -1 : it->second;
  };
  // An initial state with a positive guard admits no run at all.
  pda.initial = find(prepared.initial, {Phase::Base, 0});
  if (pda.initial < 0) pda.initial = pda.add_state("$start");
  for (auto b : blocks) {
    if (int f = find(src.final, b); f >= 0) pda.finals.push_back(f);
  }
  for (const auto& t : src.transitions) {
    for (auto b : blocks) {
      const int from = find(t.src, b);
      if (from < 0) continue;
      for (const auto& mv : prefix_moves(b, t.update, m, false)) {
        const int to = find(t.dst, mv.to);
        if (to >= 0) pda.transitions.push_back(pda_transition(pda, from, to, letter_of(pda, mv.letter), t.stack));
      }
    }
  }
  return finish(pda, std::move(src.ladder));
}

SlicePda build_reach_slices(const C1pvassModel& prepared) {
  Source src = make_source(prepared, std::nullopt);
  const int m = src.ladder.top();
  const auto blocks = all_blocks(m);

  Pda pda;
  add_letters(pda, m,
              {LetterKind::A, LetterKind::APrime, LetterKind::AHat, LetterKind::B, LetterKind::BPrime,
               LetterKind::BHat, LetterKind::End, LetterKind::EndPlus});
  for (const auto& g : prepared.stack_alphabet) pda.add_stack_symbol(g);
  const int start = pda.add_state("$start");
  const int end = pda.add_state("$end");
  pda.initial = start;
  pda.finals = {end};

  auto tag = [](Block p, Block s) { return prefix_tag(p) + "|" + suffix_tag(s); };
  std::map<std::pair<std::string, std::string>, int> index;
  for (auto p : blocks) {
    for (auto s : blocks) {
      for (const auto& q : src.states) {
        const BigInt& g = src.guards.at(q);
        if (g <= cap(src.ladder, p) && g <= cap(src.ladder, s)) index[{q, tag(p, s)}] = pda.add_state(q + "@" + tag(p, s));
      }
    }
  }
  auto find = [&](const std::string& q, Block p, Block s) {
    auto it = index.find({q, tag(p, s)});
    return it == index.end() ? -1 : it->second;
  };

  for (auto s : blocks) {
    if (int q = find(prepared.initial, {Phase::Base, 0}, s); q >= 0) {
      pda.transitions.push_back({start, q, kEpsilon, StackKind::None, -1});
    }
  }
  for (auto p : blocks) {
    for (auto s : blocks) {
      if (s.phase != Phase::Base && s.phase != Phase::Plus) continue;
      const int f = find(src.final, p, s);
      if (f < 0) continue;
      auto kind = s.phase == Phase::Base ? LetterKind::End : LetterKind::EndPlus;
      pda.transitions.push_back({f, end, pda.letter_index(letter(kind, s.level).name()), StackKind::None, -1});
    }
  }
  for (const auto& t : src.transitions) {
    for (auto p : blocks) {
      for (auto s : blocks) {
        const int from = find(t.src, p, s);
        if (from < 0) continue;
        for (const auto& pm : prefix_moves(p, t.update, m, true)) {
          for (const auto& sm : suffix_moves(s, t.update)) {
            const int to = find(t.dst, pm.to, sm.to);
            if (to < 0) continue;
            const auto& read = t.update > 0 ? pm.letter : sm.letter;
            pda.transitions.push_back(pda_transition(pda, from, to, letter_of(pda, read), t.stack));
          }
        }
      }
    }
  }
  return finish(pda, std::move(src.ladder));
}

Formula cover_formula(const GuardLadder& ladder) {
  using K = LetterKind;
  std::vector<Formula> parts;
  for (int level = 1; level <= ladder.top(); ++level) {
    const LinearExpr ups = counts_below(level, {K::A, K::APrime});
    const LinearExpr downs = counts_below(level, {K::B});
    const LinearExpr bound = LinearExpr::num(ladder.levels[level]);
    const LinearExpr zero = LinearExpr::num(0);
    parts.push_back(Formula::disj({eq(count(K::APrime, level - 1), zero), Formula::conj({ge(ups, bound), eq(downs, zero)}),
                                   Formula::conj({gt(ups, bound), gt(downs, zero)})}));
  }
  return Formula::conj(std::move(parts));
}

Formula reach_formula(const GuardLadder& ladder, const BigInt& k) {
  using K = LetterKind;
  const int m = ladder.top();
  const LinearExpr zero = LinearExpr::num(0);
  std::vector<Formula> parts;
  for (int level = 1; level <= m; ++level) {
    const LinearExpr bound = LinearExpr::num(ladder.levels[level]);
    const LinearExpr ups = counts_below(level, {K::A, K::APrime, K::AHat});
    const LinearExpr downs = LinearExpr::num(k) + counts_below(level, {K::B, K::BPrime, K::BHat});
    parts.push_back(Formula::disj({eq(count(K::APrime, level - 1), zero), ge(ups, bound)}));
    parts.push_back(Formula::disj({eq(count(K::AHat, level - 1), zero), gt(ups, bound)}));
    parts.push_back(Formula::disj({eq(count(K::BPrime, level - 1), zero), ge(downs, bound)}));
    parts.push_back(Formula::disj({eq(count(K::BHat, level - 1), zero), gt(downs, bound)}));
  }
  for (int level = 0; level <= m; ++level) {
    if (k < ladder.levels[level]) parts.push_back(eq(count(K::End, level), zero));
    if (k < ladder.levels[level] + 1) parts.push_back(eq(count(K::EndPlus, level), zero));
  }
  const LinearExpr ups = counts_below(m + 1, {K::A, K::APrime, K::AHat});
  const LinearExpr downs = counts_below(m + 1, {K::B, K::BPrime, K::BHat});
  const LinearExpr target = LinearExpr::num(k);
  parts.push_back(ge(ups, target));
  parts.push_back(Formula::disj({eq(downs, zero), gt(ups, target)}));
  return Formula::conj(std::move(parts));
}

bool blocks_acyclic(const SlicePda& slices) {
  std::map<std::string, std::set<std::string>> next;
  for (const auto& t : slices.pda.transitions) {
    const auto& a = slices.block[t.src];
    const auto& b = slices.block[t.dst];
    if (a.empty() || b.empty() || a == b) continue;
    next[a].insert(b);
    next[b];
  }
  std::map<std::string, int> color;  // 1 on the DFS stack, 2 done
  std::function<bool(const std::string&)> cyclic = [&](const std::string& u) {
    color[u] = 1;
    for (const auto& v : next[u]) {
      if (color[v] == 1 || (color[v] == 0 && cyclic(v))) return true;
    }
    color[u] = 2;
    return false;
  };
  for (const auto& [u, _] : next) {
    if (color[u] == 0 && cyclic(u)) return false;
  }
  return true;
}

Formula cover_query(const C1pvassModel& model, const Rational& k) {
  SlicePda slices = build_cover_slices(prepare_guarded_model(model), integer_query(k));
  return query(slices, cover_formula(slices.ladder));
}

Formula reach_query(const C1pvassModel& model, const Rational& k) {
  const BigInt target = integer_query(k);
  SlicePda slices = build_reach_slices(prepare_guarded_model(model));
  return query(slices, reach_formula(slices.ladder, target));
}

bool decide_cover_guarded(const C1pvassModel& model, const Rational& k, const GuardedOptions& options) {
  SlicePda slices = build_cover_slices(prepare_guarded_model(model), integer_query(k));
  return decide(slices, cover_formula(slices.ladder), options);
}

bool decide_reach_guarded(const C1pvassModel& model, const Rational& k, const GuardedOptions& options) {
  const BigInt target = integer_query(k);
  SlicePda slices = build_reach_slices(prepare_guarded_model(model));
  return decide(slices, reach_formula(slices.ladder, target), options);
}

BigInt boundedness_threshold(const C1pvassModel& model) {
  SlicePda slices = build_cover_slices(prepare_guarded_model(model));
  const auto vars = to_cnf(pda_to_cfg(slices.pda)).grammar.variables.size();
  return slices.ladder.levels.back() + (BigInt(1) << static_cast<unsigned>(vars + 1)) + 2;
}

bool decide_bounded_guarded(const C1pvassModel& model, const GuardedOptions& options) {
  require_valid(model);
  if (decide_bounded_zero(erase_guards(model))) return true;
  return !decide_cover_guarded(model, Rational(boundedness_threshold(model)), options);
}

}  // namespace c1p
