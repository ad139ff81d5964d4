#include "c1p/grammar.hpp"

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <tuple>

namespace c1p {

int Cfg::add_variable(std::string name) {
  variables.push_back(std::move(name));
  return static_cast<int>(variables.size()) - 1;
}

int Cfg::add_terminal(std::string name) {
  int existing = terminal_index(name);
  if (existing >= 0) return existing;
  terminals.push_back(std::move(name));
  return static_cast<int>(terminals.size()) - 1;
}

int Cfg::terminal_index(const std::string& name) const {
  auto it = std::find(terminals.begin(), terminals.end(), name);
  return it == terminals.end() ? -1 : static_cast<int>(it - terminals.begin());
}

std::size_t Cfg::size() const {
  std::size_t total = 0;
  for (const auto& p : productions) total += 1 + p.body.size();
  return total;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<int>> stack_free_successors(const Pda& pda, bool reverse) {
  std::vector<std::vector<int>> adj(pda.states.size());
  for (const auto& t : pda.transitions) {
    if (reverse) {
      adj[t.dst].push_back(t.src);
    } else {
      adj[t.src].push_back(t.dst);
    }
  }
  return adj;
}

std::vector<bool> bfs(const std::vector<std::vector<int>>& adj, const std::vector<int>& sources) {
  std::vector<bool> seen(adj.size(), false);
  std::deque<int> queue;
  for (int s : sources) {
    if (!seen[s]) {
      seen[s] = true;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        queue.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace

Pda trim(const Pda& pda) {
  auto fwd = bfs(stack_free_successors(pda, false), {pda.initial});
  auto bwd = bfs(stack_free_successors(pda, true), pda.finals);

  Pda out;
  out.alphabet = pda.alphabet;
  out.stack_alphabet = pda.stack_alphabet;
  std::vector<int> remap(pda.states.size(), -1);
  for (std::size_t s = 0; s < pda.states.size(); ++s) {
    if ((fwd[s] && bwd[s]) || static_cast<int>(s) == pda.initial) {
      remap[s] = out.add_state(pda.states[s]);
    }
  }
  out.initial = remap[pda.initial];
  for (int f : pda.finals) {
    if (remap[f] >= 0) out.finals.push_back(remap[f]);
  }
  for (const auto& t : pda.transitions) {
    if (remap[t.src] < 0 || remap[t.dst] < 0) continue;
    if (!(fwd[t.src] && bwd[t.src] && fwd[t.dst] && bwd[t.dst])) continue;
    PdaTransition copy = t;
    copy.src = remap[t.src];
    copy.dst = remap[t.dst];
    out.transitions.push_back(copy);
  }
  return out;
}

Pda eliminate_silent_moves(const Pda& pda) {
  const std::size_t n = pda.states.size();
  auto silent = [](const PdaTransition& t) { return t.letter == kEpsilon && t.op == StackKind::None; };

  std::vector<std::vector<int>> silent_adj(n);
  std::vector<std::vector<const PdaTransition*>> loud_out(n);
  for (const auto& t : pda.transitions) {
    if (silent(t)) {
      if (t.src != t.dst) silent_adj[t.src].push_back(t.dst);
    } else {
      loud_out[t.src].push_back(&t);
    }
  }

  Pda out;
  out.states = pda.states;
  out.alphabet = pda.alphabet;
  out.stack_alphabet = pda.stack_alphabet;
  out.initial = pda.initial;
  std::set<std::tuple<int, int, int, StackKind, int>> seen;
  for (std::size_t p = 0; p < n; ++p) {
    auto closure = bfs(silent_adj, {static_cast<int>(p)});
    bool final = false;
    for (std::size_t r = 0; r < n; ++r) {
      if (!closure[r]) continue;
      final = final || pda.is_final(static_cast<int>(r));
      for (const auto* t : loud_out[r]) {
        auto key = std::make_tuple(static_cast<int>(p), t->dst, t->letter, t->op, t->symbol);
        if (seen.insert(key).second) {
          out.transitions.push_back({static_cast<int>(p), t->dst, t->letter, t->op, t->symbol});
        }
      }
    }
    if (final) out.finals.push_back(static_cast<int>(p));
  }
  return trim(out);
}

// ---------------------------------------------------------------------------

Cfg pda_to_cfg(const Pda& input) {
  // Drain: finals move silently into a sink that pops anything.
  Pda pda = input;
  const int drain = pda.add_state("$drain");
  for (int f : input.finals) pda.transitions.push_back({f, drain, kEpsilon, StackKind::None, -1});
  for (std::size_t a = 0; a < pda.stack_alphabet.size(); ++a) {
    pda.transitions.push_back({drain, drain, kEpsilon, StackKind::Pop, static_cast<int>(a)});
  }

  const std::size_t n = pda.states.size();
  std::vector<std::vector<const PdaTransition*>> noop_from(n), push_from(n), pop_from(n);
  for (const auto& t : pda.transitions) {
    switch (t.op) {
      case StackKind::None: noop_from[t.src].push_back(&t); break;
      case StackKind::Push: push_from[t.src].push_back(&t); break;
      case StackKind::Pop: pop_from[t.src].push_back(&t); break;
    }
  }

  // Balanced reachability R(p,q): a run from p to q that returns to the
  // starting stack height and never dips below it. Saturation over "step
  // edges" p => u, which are no-op transitions or matched push/pop pairs.
  std::vector<char> reach(n * n, 0);
  std::vector<std::vector<int>> reach_succ(n);
  std::vector<std::vector<int>> step_in(n);  // step_in[u] = sources p with p => u
  std::set<std::pair<int, int>> steps;
  std::vector<std::vector<const PdaTransition*>> push_into(n);
  for (const auto& t : pda.transitions) {
    if (t.op == StackKind::Push) push_into[t.dst].push_back(&t);
  }
  std::deque<std::pair<int, int>> work;
  auto add_reach = [&](int p, int q) {
    char& cell = reach[static_cast<std::size_t>(p) * n + q];
    if (cell) return;
    cell = 1;
    reach_succ[p].push_back(q);
    work.emplace_back(p, q);
  };
  auto add_step = [&](int p, int u) {
    if (!steps.emplace(p, u).second) return;
    step_in[u].push_back(p);
    for (std::size_t i = 0; i < reach_succ[u].size(); ++i) add_reach(p, reach_succ[u][i]);
  };
  for (std::size_t p = 0; p < n; ++p) add_reach(static_cast<int>(p), static_cast<int>(p));
  for (const auto& t : pda.transitions) {
    if (t.op == StackKind::None) add_step(t.src, t.dst);
  }
  while (!work.empty()) {
    auto [u, v] = work.front();
    work.pop_front();
    for (std::size_t i = 0; i < step_in[u].size(); ++i) add_reach(step_in[u][i], v);
    for (const auto* push : push_into[u]) {
      for (const auto* pop : pop_from[v]) {
        if (pop->symbol == push->symbol) add_step(push->src, pop->dst);
      }
    }
  }
  auto R = [&](int p, int q) { return reach[static_cast<std::size_t>(p) * n + q] != 0; };

  Cfg g;
  g.terminals = pda.alphabet;
  std::map<std::pair<int, int>, int> var_of;
  std::deque<std::pair<int, int>> pending;
  auto var = [&](int p, int q) {
    auto [it, fresh] = var_of.try_emplace({p, q}, 0);
    if (fresh) {
      it->second = g.add_variable("[" + pda.states[p] + "," + pda.states[q] + "]");
      pending.emplace_back(p, q);
    }
    return it->second;
  };
  auto letter = [](std::vector<GrammarSymbol>& body, int l) {
    if (l != kEpsilon) body.push_back(GrammarSymbol::term(l));
  };

  g.start = var(pda.initial, drain);
  if (!R(pda.initial, drain)) {
    pending.clear();
    return g;
  }
  while (!pending.empty()) {
    auto [p, q] = pending.front();
    pending.pop_front();
    const int head = var_of.at({p, q});
    if (p == q) g.productions.push_back({head, {}});
    for (const auto* t : noop_from[p]) {
      if (!R(t->dst, q)) continue;
      Production prod{head, {}};
      letter(prod.body, t->letter);
      prod.body.push_back(GrammarSymbol::var(var(t->dst, q)));
      g.productions.push_back(std::move(prod));
    }
    for (const auto* push : push_from[p]) {
      const int r = push->dst;
      for (std::size_t i = 0; i < reach_succ[r].size(); ++i) {
        const int s = reach_succ[r][i];
        for (const auto* pop : pop_from[s]) {
          if (pop->symbol != push->symbol || !R(pop->dst, q)) continue;
          Production prod{head, {}};
          letter(prod.body, push->letter);
          prod.body.push_back(GrammarSymbol::var(var(r, s)));
          letter(prod.body, pop->letter);
          prod.body.push_back(GrammarSymbol::var(var(pop->dst, q)));
          g.productions.push_back(std::move(prod));
        }
      }
    }
  }
  return g;
}

// ---------------------------------------------------------------------------

std::vector<bool> productive_variables(const Cfg& g) {
  const std::size_t nv = g.variables.size();
  std::vector<bool> productive(nv, false);
  // Counter-based marking: each production waits for its unproductive body
  // variables.
  std::vector<std::size_t> missing(g.productions.size(), 0);
  std::vector<std::vector<std::size_t>> uses(nv);
  std::deque<int> queue;
  for (std::size_t i = 0; i < g.productions.size(); ++i) {
    for (const auto& sym : g.productions[i].body) {
      if (!sym.terminal) {
        ++missing[i];
        uses[sym.index].push_back(i);
      }
    }
    if (missing[i] == 0 && !productive[g.productions[i].head]) {
      productive[g.productions[i].head] = true;
      queue.push_back(g.productions[i].head);
    }
  }
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (std::size_t i : uses[v]) {
      if (--missing[i] == 0 && !productive[g.productions[i].head]) {
        productive[g.productions[i].head] = true;
        queue.push_back(g.productions[i].head);
      }
    }
  }
  return productive;
}

std::vector<bool> reachable_variables(const Cfg& g) {
  std::vector<std::vector<int>> adj(g.variables.size());
  for (const auto& p : g.productions) {
    for (const auto& sym : p.body) {
      if (!sym.terminal) adj[p.head].push_back(sym.index);
    }
  }
  return bfs(adj, {g.start});
}

namespace {

Cfg restrict_to(const Cfg& g, const std::vector<bool>& keep_var) {
  Cfg out;
  out.terminals = g.terminals;
  std::vector<int> remap(g.variables.size(), -1);
  for (std::size_t v = 0; v < g.variables.size(); ++v) {
    if (keep_var[v] || static_cast<int>(v) == g.start) remap[v] = out.add_variable(g.variables[v]);
  }
  out.start = remap[g.start];
  for (const auto& p : g.productions) {
    if (!keep_var[p.head]) continue;
    bool ok = true;
    Production copy{remap[p.head], {}};
    for (const auto& sym : p.body) {
      if (!sym.terminal && !keep_var[sym.index]) {
        ok = false;
        break;
      }
      copy.body.push_back(sym.terminal ? sym : GrammarSymbol::var(remap[sym.index]));
    }
    if (ok) out.productions.push_back(std::move(copy));
  }
  return out;
}

}  // namespace

Cfg prune(const Cfg& g) {
  Cfg productive = restrict_to(g, productive_variables(g));
  return restrict_to(productive, reachable_variables(productive));
}

bool is_empty(const Cfg& g) { return !productive_variables(g)[g.start]; }

// ---------------------------------------------------------------------------

CnfGrammar to_cnf(const Cfg& input) {
  Cfg g = prune(input);
  CnfGrammar out;
  out.pruned = true;
  if (is_empty(g)) {
    out.grammar.terminals = g.terminals;
    out.grammar.start = out.grammar.add_variable(g.variables[g.start]);
    return out;
  }

  std::set<std::string> names(g.variables.begin(), g.variables.end());
  auto fresh = [&](const std::string& base) {
    std::string name = base;
    for (int i = 1; names.contains(name); ++i) name = base + "_" + std::to_string(i);
    names.insert(name);
    return g.add_variable(name);
  };

  // Fresh start symbol so that S never occurs in a body.
  bool start_in_body = std::any_of(g.productions.begin(), g.productions.end(), [&](const Production& p) {
    return std::any_of(p.body.begin(), p.body.end(),
                       [&](const GrammarSymbol& s) { return !s.terminal && s.index == g.start; });
  });
  if (start_in_body) {
    int s0 = fresh("$S0");
    g.productions.push_back({s0, {GrammarSymbol::var(g.start)}});
    g.start = s0;
  }

  // Terminals inside long bodies get their own variable.
  std::map<int, int> term_var;
  std::vector<Production> rules;
  for (auto p : g.productions) {
    if (p.body.size() >= 2) {
      for (auto& sym : p.body) {
        if (!sym.terminal) continue;
        auto it = term_var.find(sym.index);
        if (it == term_var.end()) {
          int v = fresh("$T" + g.terminals[sym.index]);
          it = term_var.emplace(sym.index, v).first;
        }
        sym = GrammarSymbol::var(it->second);
      }
    }
    rules.push_back(std::move(p));
  }
  for (auto [t, v] : term_var) rules.push_back({v, {GrammarSymbol::term(t)}});

  // Binarize.
  std::vector<Production> binary;
  int chain_id = 0;
  for (auto& p : rules) {
    if (p.body.size() <= 2) {
      binary.push_back(std::move(p));
      continue;
    }
    int head = p.head;
    for (std::size_t i = 0; i + 2 < p.body.size(); ++i) {
      int next = fresh("$X" + std::to_string(chain_id++));
      binary.push_back({head, {p.body[i], GrammarSymbol::var(next)}});
      head = next;
    }
    binary.push_back({head, {p.body[p.body.size() - 2], p.body.back()}});
  }

  // Epsilon removal.
  const std::size_t nv = g.variables.size();
  std::vector<bool> nullable(nv, false);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : binary) {
      if (nullable[p.head]) continue;
      bool all = std::all_of(p.body.begin(), p.body.end(),
                             [&](const GrammarSymbol& s) { return !s.terminal && nullable[s.index]; });
      if (all) nullable[p.head] = changed = true;
    }
  }
  std::vector<Production> no_eps;
  for (const auto& p : binary) {
    if (p.body.empty()) continue;
    no_eps.push_back(p);
    if (p.body.size() == 2) {
      const auto& [x, y] = std::tie(p.body[0], p.body[1]);
      if (!x.terminal && nullable[x.index]) no_eps.push_back({p.head, {y}});
      if (!y.terminal && nullable[y.index]) no_eps.push_back({p.head, {x}});
    }
  }

  // Unit removal via unit closure.
  std::vector<std::vector<int>> unit_adj(nv);
  std::vector<std::vector<const Production*>> proper(nv);
  for (const auto& p : no_eps) {
    if (p.body.size() == 1 && !p.body[0].terminal) {
      unit_adj[p.head].push_back(p.body[0].index);
    } else {
      proper[p.head].push_back(&p);
    }
  }
  std::set<std::pair<int, std::vector<GrammarSymbol>>> seen;
  Cfg cnf;
  cnf.variables = g.variables;
  cnf.terminals = g.terminals;
  cnf.start = g.start;
  for (std::size_t a = 0; a < nv; ++a) {
    auto closure = bfs(unit_adj, {static_cast<int>(a)});
    for (std::size_t b = 0; b < nv; ++b) {
      if (!closure[b]) continue;
      for (const auto* p : proper[b]) {
        if (seen.emplace(static_cast<int>(a), p->body).second) {
          cnf.productions.push_back({static_cast<int>(a), p->body});
        }
      }
    }
  }
  if (nullable[g.start]) cnf.productions.push_back({g.start, {}});

  out.grammar = prune(cnf);
  return out;
}

// ---------------------------------------------------------------------------

bool is_finite(const CnfGrammar& cnf) {
  if (!cnf.pruned) throw GrammarError("finiteness requires a pruned grammar");
  const Cfg& g = cnf.grammar;
  const std::size_t nv = g.variables.size();
  std::vector<std::vector<int>> adj(nv);
  for (const auto& p : g.productions) {
    for (const auto& s : p.body) {
      if (!s.terminal) adj[p.head].push_back(s.index);
    }
  }
  // Iterative DFS with colors: 0 white, 1 on stack, 2 done.
  std::vector<char> color(nv, 0);
  for (std::size_t root = 0; root < nv; ++root) {
    if (color[root]) continue;
    std::vector<std::pair<int, std::size_t>> stack{{static_cast<int>(root), 0}};
    color[root] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < adj[v].size()) {
        int w = adj[v][next++];
        if (color[w] == 1) return false;
        if (color[w] == 0) {
          color[w] = 1;
          stack.emplace_back(w, 0);
        }
      } else {
        color[v] = 2;
        stack.pop_back();
      }
    }
  }
  return true;
}

WordLengthMap longest_word_lengths(const CnfGrammar& cnf) {
  if (!is_finite(cnf)) throw GrammarError("longest word lengths require a finite language");
  const Cfg& g = cnf.grammar;
  WordLengthMap out;
  out.lengths.assign(g.variables.size(), BigInt(0));
  for (;;) {
    std::vector<BigInt> next = out.lengths;
    for (const auto& p : g.productions) {
      BigInt candidate(0);
      for (const auto& s : p.body) candidate += s.terminal ? BigInt(1) : out.lengths[s.index];
      if (candidate > next[p.head]) next[p.head] = candidate;
    }
    if (next == out.lengths) break;
    out.lengths = std::move(next);
    ++out.iterations;
    if (out.iterations > g.variables.size() + 1) throw GrammarError("word length iteration did not converge");
  }
  return out;
}

std::vector<std::optional<BigInt>> shortest_word_lengths(const Cfg& g) {
  std::vector<std::optional<BigInt>> best(g.variables.size());
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions) {
      BigInt total(0);
      bool defined = true;
      for (const auto& s : p.body) {
        if (s.terminal) {
          total += 1;
        } else if (best[s.index]) {
          total += *best[s.index];
        } else {
          defined = false;
          break;
        }
      }
      if (defined && (!best[p.head] || total < *best[p.head])) {
        best[p.head] = total;
        changed = true;
      }
    }
  }
  return best;
}

bool derives_word_of_length(const CnfGrammar& cnf, const BigInt& length, std::size_t max_length) {
  if (length < 0) return false;
  if (length > BigInt(max_length)) throw GrammarError("length-set bound too large: " + length.str());
  const std::size_t n = static_cast<std::size_t>(length);
  const Cfg& g = cnf.grammar;
  using Bits = boost::dynamic_bitset<>;
  std::vector<Bits> sets(g.variables.size(), Bits(n + 1));
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions) {
      Bits add(n + 1);
      if (p.body.empty()) {
        add.set(0);
      } else if (p.body.size() == 1 && p.body[0].terminal) {
        if (n >= 1) add.set(1);
      } else {
        // General fold over the body, so that non-CNF shapes still work.
        add.set(0);
        for (const auto& s : p.body) {
          Bits acc(n + 1);
          if (s.terminal) {
            acc = add << 1;
          } else {
            const Bits& other = sets[s.index];
            for (auto x = other.find_first(); x != Bits::npos; x = other.find_next(x)) acc |= add << x;
          }
          add = std::move(acc);
        }
      }
      Bits merged = sets[p.head] | add;
      if (merged != sets[p.head]) {
        sets[p.head] = std::move(merged);
        changed = true;
      }
    }
  }
  return sets[g.start].test(n);
}

// ---------------------------------------------------------------------------

std::string production_to_string(const Cfg& g, const Production& p) {
  std::string out = g.variables[p.head] + " ->";
  if (p.body.empty()) return out + " @eps";
  for (const auto& s : p.body) out += " " + (s.terminal ? g.terminals[s.index] : g.variables[s.index]);
  return out;
}

void print_pda(std::ostream& out, const Pda& pda) {
  auto line = [&](const char* head, const std::vector<std::string>& items) {
    out << head;
    for (const auto& i : items) out << ' ' << i;
    out << '\n';
  };
  line("letters", pda.alphabet);
  line("stack", pda.stack_alphabet);
  out << "initial " << pda.states[pda.initial] << '\n';
  std::vector<std::string> finals;
  for (int f : pda.finals) finals.push_back(pda.states[f]);
  line("final", finals);
  for (const auto& s : pda.states) out << "state " << s << '\n';
  for (const auto& t : pda.transitions) {
    out << "trans " << pda.states[t.src] << ' ' << pda.states[t.dst] << ' '
        << (t.letter == kEpsilon ? std::string("@eps") : pda.alphabet[t.letter]) << ' ';
    switch (t.op) {
      case StackKind::None: out << "none"; break;
      case StackKind::Push: out << "push:" << pda.stack_alphabet[t.symbol]; break;
      case StackKind::Pop: out << "pop:" << pda.stack_alphabet[t.symbol]; break;
    }
    out << '\n';
  }
}

void print_cnf(std::ostream& out, const CnfGrammar& cnf) {
  const Cfg& g = cnf.grammar;
  std::vector<std::pair<std::string, std::vector<std::string>>> rows;
  for (const auto& p : g.productions) {
    std::vector<std::string> body;
    if (p.body.empty()) body.push_back("@eps");
    for (const auto& s : p.body) body.push_back(s.terminal ? g.terminals[s.index] : g.variables[s.index]);
    rows.emplace_back(g.variables[p.head], std::move(body));
  }
  std::sort(rows.begin(), rows.end());
  for (const auto& [head, body] : rows) {
    out << head << " ->";
    for (const auto& s : body) out << " " << s;
    out << "\n";
  }
}

}  // namespace c1p
