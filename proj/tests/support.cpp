#include "support.hpp"

#include <deque>
#include <map>
#include <stdexcept>
#include <variant>

#ifndef C1P_FIXTURE_DIR
#define C1P_FIXTURE_DIR "tests/fixtures"
#endif

namespace c1p::test {

C1pvassModel fixture(const std::string& name) {
  auto parsed = load_model_file(std::string(C1P_FIXTURE_DIR) + "/" + name);
  if (auto* errors = std::get_if<std::vector<ParseError>>(&parsed)) {
    throw std::runtime_error("fixture " + name + ": " + format_errors(*errors));
  }
  return std::get<C1pvassModel>(parsed);
}

C1pvassModel model_from_text(const std::string& text) {
  auto parsed = parse_model_text(text);
  if (auto* errors = std::get_if<std::vector<ParseError>>(&parsed)) {
    throw std::runtime_error(format_errors(*errors));
  }
  return std::get<C1pvassModel>(parsed);
}

C1pvassModel random_model(std::mt19937_64& rng, const RandomModelOptions& opts) {
  std::uniform_int_distribution<int> n_states(2, opts.max_states);
  std::uniform_int_distribution<int> n_syms(0, opts.max_stack_symbols);
  std::uniform_int_distribution<int> upd(-opts.max_update, opts.max_update);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  C1pvassModel m;
  const int n = n_states(rng);
  std::vector<std::int64_t> levels;
  if (opts.max_guard > 0) {
    std::uniform_int_distribution<int> g(1, opts.max_guard);
    std::uniform_int_distribution<int> count(0, opts.max_guard_levels);
    for (int i = count(rng); i > 0; --i) levels.push_back(g(rng));
  }
  for (int i = 0; i < n; ++i) {
    std::int64_t guard = 0;
    if (i > 0 && !levels.empty() && coin(rng) < 0.4) {
      guard = levels[std::uniform_int_distribution<std::size_t>(0, levels.size() - 1)(rng)];
    }
    m.add_state("s" + std::to_string(i), guard);
  }
  m.initial = "s0";
  m.finals.insert("s" + std::to_string(n - 1));
  if (coin(rng) < 0.2) m.finals.insert("s" + std::to_string(std::uniform_int_distribution<int>(0, n - 1)(rng)));
  const int syms = n_syms(rng);
  for (int i = 0; i < syms; ++i) m.stack_alphabet.insert(std::string(1, static_cast<char>('A' + i)));
  std::vector<std::string> alphabet(m.stack_alphabet.begin(), m.stack_alphabet.end());

  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (coin(rng) >= opts.edge_probability) continue;
      Transition t{m.states[a], m.states[b], upd(rng), StackOp::none()};
      if (!alphabet.empty()) {
        double r = coin(rng);
        const std::string& sym = alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
        if (r < 0.25) t.stack = StackOp::push(sym);
        else if (r < 0.5) t.stack = StackOp::pop(sym);
      }
      m.transitions.push_back(t);
    }
  }
  return m;
}

Pda random_pda(std::mt19937_64& rng, const RandomPdaOptions& opts) {
  Pda pda;
  const int n = std::uniform_int_distribution<int>(1, opts.max_states)(rng);
  for (int i = 0; i < n; ++i) pda.add_state("q" + std::to_string(i));
  for (int i = 0; i < opts.letters; ++i) pda.add_letter(std::string(1, static_cast<char>('a' + i)));
  const int syms = std::uniform_int_distribution<int>(0, opts.max_stack_symbols)(rng);
  for (int i = 0; i < syms; ++i) pda.add_stack_symbol(std::string(1, static_cast<char>('A' + i)));
  pda.initial = 0;
  std::uniform_int_distribution<int> state(0, n - 1);
  pda.finals.push_back(state(rng));
  const int count = std::uniform_int_distribution<int>(0, opts.max_transitions)(rng);
  for (int i = 0; i < count; ++i) {
    PdaTransition t;
    t.src = state(rng);
    t.dst = state(rng);
    t.letter = std::uniform_int_distribution<int>(-1, opts.letters - 1)(rng);
    int op = syms == 0 ? 0 : std::uniform_int_distribution<int>(0, 2)(rng);
    t.op = static_cast<StackKind>(op);
    if (op != 0) t.symbol = std::uniform_int_distribution<int>(0, syms - 1)(rng);
    pda.transitions.push_back(t);
  }
  return pda;
}

std::set<Word> pda_words(const Pda& pda, std::size_t max_len, std::size_t max_depth) {
  using Config = std::tuple<int, std::vector<int>, Word>;
  std::set<Config> seen;
  std::deque<Config> queue;
  std::set<Word> out;
  auto push = [&](Config c) {
    if (seen.insert(c).second) queue.push_back(std::move(c));
  };
  push({pda.initial, {}, {}});
  while (!queue.empty()) {
    auto [s, stack, word] = queue.front();
    queue.pop_front();
    if (pda.is_final(s)) out.insert(word);
    for (const auto& t : pda.transitions) {
      if (t.src != s) continue;
      Word w = word;
      if (t.letter != kEpsilon) {
        if (w.size() == max_len) continue;
        w.push_back(t.letter);
      }
      auto st = stack;
      if (t.op == StackKind::Push) {
        if (st.size() == max_depth) continue;
        st.push_back(t.symbol);
      } else if (t.op == StackKind::Pop) {
        if (st.empty() || st.back() != t.symbol) continue;
        st.pop_back();
      }
      push({t.dst, std::move(st), std::move(w)});
    }
  }
  return out;
}

std::set<Word> grammar_words(const Cfg& g, std::size_t max_len) {
  std::vector<std::set<Word>> sets(g.variables.size());
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions) {
      std::set<Word> acc{{}};
      for (const auto& sym : p.body) {
        std::set<Word> next;
        for (const auto& prefix : acc) {
          if (sym.terminal) {
            if (prefix.size() < max_len) {
              Word w = prefix;
              w.push_back(sym.index);
              next.insert(std::move(w));
            }
          } else {
            for (const auto& suffix : sets[sym.index]) {
              if (prefix.size() + suffix.size() > max_len) continue;
              Word w = prefix;
              w.insert(w.end(), suffix.begin(), suffix.end());
              next.insert(std::move(w));
            }
          }
        }
        acc = std::move(next);
      }
      for (auto& w : acc) changed |= sets[p.head].insert(w).second;
    }
  }
  return sets[g.start];
}

Cfg random_cfg(std::mt19937_64& rng, int variables, int terminals, int productions) {
  Cfg g;
  for (int i = 0; i < variables; ++i) g.add_variable("V" + std::to_string(i));
  for (int i = 0; i < terminals; ++i) g.add_terminal(std::string(1, static_cast<char>('a' + i)));
  g.start = 0;
  std::uniform_int_distribution<int> len(0, 3);
  std::uniform_int_distribution<int> var(0, variables - 1);
  std::uniform_int_distribution<int> term(0, terminals - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int i = 0; i < productions; ++i) {
    Production p{i < variables ? i : var(rng), {}};
    for (int j = len(rng); j > 0; --j) {
      p.body.push_back(coin(rng) < 0.5 ? GrammarSymbol::term(term(rng)) : GrammarSymbol::var(var(rng)));
    }
    g.productions.push_back(std::move(p));
  }
  return g;
}

Cfg make_cfg(const std::vector<std::pair<std::string, std::vector<std::string>>>& rules) {
  Cfg g;
  std::map<std::string, int> vars;
  for (const auto& [head, _] : rules) {
    if (!vars.contains(head)) vars[head] = g.add_variable(head);
  }
  g.start = vars.at(rules.front().first);
  for (const auto& [head, body] : rules) {
    Production p{vars.at(head), {}};
    for (const auto& s : body) {
      auto it = vars.find(s);
      p.body.push_back(it != vars.end() ? GrammarSymbol::var(it->second) : GrammarSymbol::term(g.add_terminal(s)));
    }
    g.productions.push_back(std::move(p));
  }
  return g;
}

}  // namespace c1p::test
