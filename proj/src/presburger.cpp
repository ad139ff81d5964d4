#include "c1p/presburger.hpp"

#include "integer_program.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace c1p {

Formula Formula::conj(std::vector<Formula> parts) {
  Formula out;
  for (auto& p : parts) {
    if (p.kind == Kind::And) {
      for (auto& c : p.children) out.children.push_back(std::move(c));
    } else {
      out.children.push_back(std::move(p));
    }
  }
  if (out.children.size() == 1) return std::move(out.children.front());
  return out;
}

Formula Formula::disj(std::vector<Formula> parts) {
  Formula out = falsity();
  for (auto& p : parts) {
    if (p.kind == Kind::And && p.children.empty()) return truth();
    if (p.kind == Kind::Or) {
      for (auto& c : p.children) out.children.push_back(std::move(c));
    } else {
      out.children.push_back(std::move(p));
    }
  }
  if (out.children.size() == 1) return std::move(out.children.front());
  return out;
}

LinearExpr LinearExpr::var(const std::string& name, const BigInt& coeff) {
  LinearExpr e;
  if (coeff != 0) e.coeffs[name] = coeff;
  return e;
}

LinearExpr LinearExpr::num(const BigInt& value) {
  LinearExpr e;
  e.constant = value;
  return e;
}

LinearExpr& LinearExpr::operator+=(const LinearExpr& other) {
  for (const auto& [v, c] : other.coeffs) {
    auto& slot = coeffs[v];
    slot += c;
    if (slot == 0) coeffs.erase(v);
  }
  constant += other.constant;
  return *this;
}

LinearExpr& LinearExpr::operator-=(const LinearExpr& other) { return *this += BigInt(-1) * other; }

LinearExpr operator+(LinearExpr a, const LinearExpr& b) { return a += b; }
LinearExpr operator-(LinearExpr a, const LinearExpr& b) { return a -= b; }

LinearExpr operator*(const BigInt& c, LinearExpr a) {
  if (c == 0) return {};
  for (auto& [v, coeff] : a.coeffs) coeff *= c;
  a.constant *= c;
  return a;
}

LinearExpr sum(const std::vector<std::string>& names) {
  LinearExpr e;
  for (const auto& n : names) e += LinearExpr::var(n);
  return e;
}

Formula compare(const LinearExpr& lhs, Relation rel, const LinearExpr& rhs) {
  LinearExpr diff = lhs - rhs;
  LinearAtom atom;
  atom.terms.assign(diff.coeffs.begin(), diff.coeffs.end());
  atom.rel = rel;
  atom.constant = -diff.constant;
  return Formula::of(std::move(atom));
}

namespace {

bool holds(const BigInt& lhs, Relation rel, const BigInt& rhs) {
  switch (rel) {
    case Relation::Eq: return lhs == rhs;
    case Relation::Le: return lhs <= rhs;
    case Relation::Lt: return lhs < rhs;
    case Relation::Ge: return lhs >= rhs;
    case Relation::Gt: return lhs > rhs;
  }
  return false;
}

void collect(const Formula& f, std::set<std::string>& out) {
  if (f.kind == Formula::Kind::Atom) {
    for (const auto& [v, c] : f.atom.terms) out.insert(v);
  }
  for (const auto& c : f.children) collect(c, out);
}

}  // namespace

std::set<std::string> variables(const Formula& f) {
  std::set<std::string> out;
  collect(f, out);
  return out;
}

bool evaluate(const LinearAtom& atom, const Assignment& a) {
  BigInt lhs = 0;
  for (const auto& [v, c] : atom.terms) {
    auto it = a.find(v);
    if (it != a.end()) lhs += c * it->second;
  }
  return holds(lhs, atom.rel, atom.constant);
}

bool evaluate(const Formula& f, const Assignment& a) {
  switch (f.kind) {
    case Formula::Kind::Atom: return evaluate(f.atom, a);
    case Formula::Kind::And:
      return std::all_of(f.children.begin(), f.children.end(), [&](const Formula& c) { return evaluate(c, a); });
    case Formula::Kind::Or:
      return std::any_of(f.children.begin(), f.children.end(), [&](const Formula& c) { return evaluate(c, a); });
  }
  return false;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Sat: return "SAT";
    case SolveStatus::Unsat: return "UNSAT";
    case SolveStatus::ResourceExceeded: return "RESOURCE-EXCEEDED";
  }
  return "?";
}

// --- Solver --------------------------------------------------------------------

namespace {

using detail::Row;
using detail::RowKind;

// The formula with variables replaced by column indices.
struct Compiled {
  Formula::Kind kind = Formula::Kind::And;
  std::vector<Compiled> children;
  std::vector<std::pair<int, BigInt>> terms;
  Relation rel = Relation::Eq;
  BigInt constant = 0;
};

Compiled compile(const Formula& f, const std::map<std::string, int>& index) {
  Compiled c;
  c.kind = f.kind;
  for (const auto& child : f.children) c.children.push_back(compile(child, index));
  if (f.kind == Formula::Kind::Atom) {
    for (const auto& [v, k] : f.atom.terms) c.terms.emplace_back(index.at(v), k);
    c.rel = f.atom.rel;
    c.constant = f.atom.constant;
  }
  return c;
}

bool evaluate(const Compiled& f, const std::vector<BigInt>& x) {
  switch (f.kind) {
    case Formula::Kind::Atom: {
      BigInt lhs = 0;
      for (const auto& [v, c] : f.terms) lhs += c * x[v];
      return holds(lhs, f.rel, f.constant);
    }
    case Formula::Kind::And:
      return std::all_of(f.children.begin(), f.children.end(), [&](const Compiled& c) { return evaluate(c, x); });
    case Formula::Kind::Or:
      return std::any_of(f.children.begin(), f.children.end(), [&](const Compiled& c) { return evaluate(c, x); });
  }
  return false;
}

// Number of atoms (or nested disjunctions) of f that x violates.
int violations(const Compiled& f, const std::vector<BigInt>& x) {
  switch (f.kind) {
    case Formula::Kind::Atom:
    case Formula::Kind::Or: return evaluate(f, x) ? 0 : 1;
    case Formula::Kind::And: {
      int n = 0;
      for (const auto& c : f.children) n += violations(c, x);
      return n;
    }
  }
  return 0;
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Integer atoms become <=, =, >= rows with coprime coefficients. Returns
// false when the atom is unsatisfiable on its own.
bool to_row(const Compiled& atom, std::vector<Row>& rows) {
  BigInt rhs = atom.constant;
  RowKind kind = RowKind::Eq;
  switch (atom.rel) {
    case Relation::Eq: kind = RowKind::Eq; break;
    case Relation::Le: kind = RowKind::Le; break;
    case Relation::Lt: kind = RowKind::Le; rhs -= 1; break;
    case Relation::Ge: kind = RowKind::Ge; break;
    case Relation::Gt: kind = RowKind::Ge; rhs += 1; break;
  }
  if (atom.terms.empty()) {
    switch (kind) {
      case RowKind::Eq: return rhs == 0;
      case RowKind::Le: return rhs >= 0;
      case RowKind::Ge: return rhs <= 0;
    }
  }
  BigInt g = 0;
  for (const auto& [v, c] : atom.terms) g = gcd(g, BigInt(abs(c)));
  Row row;
  row.kind = kind;
  for (const auto& [v, c] : atom.terms) row.coeffs.emplace_back(v, BigInt(c / g));
  switch (kind) {
    case RowKind::Eq:
      if (rhs % g != 0) return false;
      row.rhs = rhs / g;
      break;
    case RowKind::Le: row.rhs = floor_div(rhs, g); break;
    case RowKind::Ge: row.rhs = -floor_div(-rhs, g); break;
  }
  rows.push_back(std::move(row));
  return true;
}

struct Branch {
  std::vector<Row> rows;
  std::vector<const Compiled*> pending;  // disjunctions not yet decided
};

bool absorb(const Compiled& f, Branch& b) {
  switch (f.kind) {
    case Formula::Kind::Atom: return to_row(f, b.rows);
    case Formula::Kind::And:
      for (const auto& c : f.children) {
        if (!absorb(c, b)) return false;
      }
      return true;
    case Formula::Kind::Or:
      if (f.children.empty()) return false;
      if (f.children.size() == 1) return absorb(f.children.front(), b);
      b.pending.push_back(&f);
      return true;
  }
  return false;
}

class Search {
 public:
  Search(int num_vars, std::size_t budget) : num_vars_(num_vars), counter_(budget) {}

  std::optional<std::vector<BigInt>> run(const Branch& b) {
    counter_.tick();
    auto x = detail::solve_integer(num_vars_, b.rows, counter_);
    if (!x) return std::nullopt;
    auto open = std::find_if(b.pending.begin(), b.pending.end(),
                             [&](const Compiled* d) { return !evaluate(*d, *x); });
    if (open == b.pending.end()) return x;

    const Compiled& choice = **open;
    std::vector<int> score;
    for (const auto& c : choice.children) score.push_back(violations(c, *x));
    std::vector<std::size_t> order(choice.children.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return score[l] < score[r]; });

    for (std::size_t i : order) {
      Branch next{b.rows, {}};
      for (const Compiled* d : b.pending) {
        if (d != &choice) next.pending.push_back(d);
      }
      if (!absorb(choice.children[i], next)) continue;
      if (auto found = run(next)) return found;
    }
    return std::nullopt;
  }

  std::size_t nodes() const { return counter_.used(); }

 private:
  int num_vars_;
  detail::NodeCounter counter_;
};

}  // namespace

SolveResult solve(const Formula& f, const SolveOptions& options) {
  std::vector<std::string> names;
  std::map<std::string, int> index;
  for (const auto& v : variables(f)) {
    index[v] = static_cast<int>(names.size());
    names.push_back(v);
  }
  Compiled compiled = compile(f, index);
  Search search(static_cast<int>(names.size()), options.node_budget);
  SolveResult result;
  Branch root;
  try {
    if (absorb(compiled, root)) {
      if (auto x = search.run(root)) {
        result.status = SolveStatus::Sat;
        for (std::size_t i = 0; i < names.size(); ++i) result.model[names[i]] = (*x)[i];
        if (!evaluate(f, result.model)) throw std::logic_error("solver produced a non-model");
      }
    }
  } catch (const detail::BudgetExceeded&) {
    result.status = SolveStatus::ResourceExceeded;
    result.model.clear();
  }
  result.nodes = search.nodes();
  return result;
}

// --- Parikh images -------------------------------------------------------------

std::string count_variable(const std::string& terminal) { return "#" + terminal; }

namespace {

std::vector<int> bfs_order(const Cfg& g) {
  std::vector<std::vector<int>> children(g.variables.size());
  for (const auto& p : g.productions) {
    for (const auto& s : p.body) {
      if (!s.terminal) children[p.head].push_back(s.index);
    }
  }
  std::vector<bool> seen(g.variables.size(), false);
  std::vector<int> order{g.start};
  seen[g.start] = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (int c : children[order[i]]) {
      if (!seen[c]) {
        seen[c] = true;
        order.push_back(c);
      }
    }
  }
  return order;
}

}  // namespace

namespace {

std::string y_var(std::size_t p) { return "$y" + std::to_string(p); }
std::string z_var(int v) { return "$z" + std::to_string(v); }

void require_trim(const Cfg& g) {
  auto productive = productive_variables(g);
  if (!productive[g.start]) throw std::invalid_argument("grammar language is empty");
  auto reachable = reachable_variables(g);
  for (std::size_t v = 0; v < g.variables.size(); ++v) {
    if (!productive[v] || !reachable[v]) throw std::invalid_argument("grammar has useless variable " + g.variables[v]);
  }
}

struct FlowParts {
  std::vector<Formula> equations;  // letter counts and flow conservation
  std::vector<LinearExpr> consumed;
};

FlowParts flow_parts(const Cfg& g) {
  const std::size_t nv = g.variables.size();
  std::vector<LinearExpr> produced(nv), consumed(nv), letters(g.terminals.size());
  produced[g.start] = LinearExpr::num(1);
  for (std::size_t i = 0; i < g.productions.size(); ++i) {
    const auto& p = g.productions[i];
    consumed[p.head] += LinearExpr::var(y_var(i));
    for (const auto& s : p.body) {
      (s.terminal ? letters[s.index] : produced[s.index]) += LinearExpr::var(y_var(i));
    }
  }
  FlowParts out;
  for (std::size_t t = 0; t < g.terminals.size(); ++t) {
    out.equations.push_back(eq(LinearExpr::var(count_variable(g.terminals[t])), letters[t]));
  }
  for (std::size_t v = 0; v < nv; ++v) out.equations.push_back(eq(produced[v], consumed[v]));
  out.consumed = std::move(consumed);
  return out;
}

bool mentions(const Production& p, int v) {
  return std::any_of(p.body.begin(), p.body.end(), [&](const GrammarSymbol& s) { return !s.terminal && s.index == v; });
}

}  // namespace

Formula parikh_formula(const Cfg& g) {
  require_trim(g);
  auto flow = flow_parts(g);
  std::vector<Formula> parts = std::move(flow.equations);

  // Every used variable hangs below a used parent one z-level up.
  parts.push_back(eq(LinearExpr::var(z_var(g.start)), LinearExpr::num(1)));
  for (int v : bfs_order(g)) {
    if (v == g.start) continue;
    std::vector<Formula> options;
    options.push_back(
        Formula::conj({eq(flow.consumed[v], LinearExpr::num(0)), eq(LinearExpr::var(z_var(v)), LinearExpr::num(0))}));
    for (std::size_t i = 0; i < g.productions.size(); ++i) {
      const auto& p = g.productions[i];
      if (p.head == v || !mentions(p, v)) continue;
      options.push_back(Formula::conj({ge(LinearExpr::var(y_var(i)), LinearExpr::num(1)),
                                       ge(LinearExpr::var(z_var(p.head)), LinearExpr::num(1)),
                                       eq(LinearExpr::var(z_var(v)), LinearExpr::var(z_var(p.head)) + LinearExpr::num(1))}));
    }
    parts.push_back(Formula::disj(std::move(options)));
  }
  return Formula::conj(std::move(parts));
}

SolveResult solve_parikh(const Cfg& g, const Formula& phi, const SolveOptions& options) {
  require_trim(g);
  const std::size_t nv = g.variables.size();
  std::vector<Formula> parts = flow_parts(g).equations;
  parts.push_back(phi);

  SolveResult result;
  for (;;) {
    const std::size_t left = options.node_budget > result.nodes ? options.node_budget - result.nodes : 0;
    SolveResult r = solve(Formula::conj(parts), {left});
    result.nodes += r.nodes;
    if (r.status != SolveStatus::Sat) {
      result.status = r.status;
      return result;
    }

    // Variables reachable from the start through used productions get their
    // breadth-first depth as z; the rest of the support is cut off.
    auto used = [&](std::size_t i) { return r.model.contains(y_var(i)) && r.model.at(y_var(i)) > 0; };
    std::vector<int> depth(nv, 0);
    depth[g.start] = 1;
    std::vector<int> queue{g.start};
    for (std::size_t q = 0; q < queue.size(); ++q) {
      for (std::size_t i = 0; i < g.productions.size(); ++i) {
        const auto& p = g.productions[i];
        if (p.head != queue[q] || !used(i)) continue;
        for (const auto& s : p.body) {
          if (s.terminal || depth[s.index] != 0) continue;
          depth[s.index] = depth[p.head] + 1;
          queue.push_back(s.index);
        }
      }
    }

    std::vector<int> component(nv);
    std::iota(component.begin(), component.end(), 0);
    std::function<int(int)> root = [&](int v) { return component[v] == v ? v : component[v] = root(component[v]); };
    bool stranded = false;
    for (std::size_t i = 0; i < g.productions.size(); ++i) {
      const auto& p = g.productions[i];
      if (!used(i) || depth[p.head] != 0) continue;
      stranded = true;
      for (const auto& s : p.body) {
        if (!s.terminal) component[root(s.index)] = root(p.head);
      }
    }
    if (!stranded) {
      result.status = SolveStatus::Sat;
      result.model = std::move(r.model);
      for (std::size_t v = 0; v < nv; ++v) result.model[z_var(static_cast<int>(v))] = depth[v];
      if (!evaluate(Formula::conj({parikh_formula(g), phi}), result.model)) {
        throw std::logic_error("solver produced a non-model");
      }
      return result;
    }

    // A used part unreachable from the start: either it goes unused, or a
    // production from outside enters it.
    std::map<int, std::vector<int>> parts_of;
    for (std::size_t i = 0; i < g.productions.size(); ++i) {
      const int h = g.productions[i].head;
      if (used(i) && depth[h] == 0) parts_of[root(h)];
    }
    for (std::size_t v = 0; v < nv; ++v) {
      if (depth[v] == 0 && parts_of.contains(root(static_cast<int>(v)))) parts_of[root(static_cast<int>(v))].push_back(static_cast<int>(v));
    }
    for (const auto& [_, members] : parts_of) {
      std::vector<bool> inside(nv, false);
      for (int v : members) inside[v] = true;
      LinearExpr inner, entering;
      for (std::size_t i = 0; i < g.productions.size(); ++i) {
        const auto& p = g.productions[i];
        if (inside[p.head]) {
          inner += LinearExpr::var(y_var(i));
        } else if (std::any_of(p.body.begin(), p.body.end(),
                               [&](const GrammarSymbol& s) { return !s.terminal && inside[s.index]; })) {
          entering += LinearExpr::var(y_var(i));
        }
      }
      std::vector<Formula> options{eq(inner, LinearExpr::num(0))};
      if (!entering.coeffs.empty()) options.push_back(ge(entering, LinearExpr::num(1)));
      parts.push_back(Formula::disj(std::move(options)));
    }
  }
}

Cfg simplify_for_parikh(const Cfg& input) {
  Cfg g = prune(input);
  if (is_empty(g)) return g;
  for (bool changed = true; changed;) {
    changed = false;
    const std::size_t nv = g.variables.size();

    // Variables that reach no terminal derive only the empty word.
    std::vector<bool> lettered(nv, false);
    for (bool grow = true; grow;) {
      grow = false;
      for (const auto& p : g.productions) {
        if (lettered[p.head]) continue;
        if (std::any_of(p.body.begin(), p.body.end(),
                        [&](const GrammarSymbol& s) { return s.terminal || lettered[s.index]; })) {
          lettered[p.head] = grow = true;
        }
      }
    }
    if (!lettered[g.start]) {
      Cfg eps;
      eps.terminals = g.terminals;
      eps.start = eps.add_variable(g.variables[g.start]);
      eps.productions.push_back({eps.start, {}});
      return eps;
    }

    // Bodies as sorted multisets, minus silent variables, without duplicates
    // or A -> A.
    std::set<std::pair<int, std::vector<GrammarSymbol>>> seen;
    std::vector<Production> rules;
    for (const auto& p : g.productions) {
      if (!lettered[p.head]) {
        changed = true;
        continue;
      }
      Production q{p.head, {}};
      for (const auto& s : p.body) {
        if (s.terminal || lettered[s.index]) q.body.push_back(s);
      }
      std::sort(q.body.begin(), q.body.end());
      if (q.body.size() == 1 && q.body[0] == GrammarSymbol::var(q.head)) continue;
      if (seen.emplace(q.head, q.body).second) rules.push_back(std::move(q));
    }
    if (rules.size() != g.productions.size()) changed = true;
    g.productions = std::move(rules);

    // Inline one variable other than the start that has a single rule, when
    // that rule is short or the variable is used once.
    std::vector<int> rule_count(nv, 0), uses(nv, 0);
    for (const auto& p : g.productions) {
      ++rule_count[p.head];
      for (const auto& s : p.body) {
        if (!s.terminal) ++uses[s.index];
      }
    }
    for (const auto& p : g.productions) {
      int v = p.head;
      if (v == g.start || rule_count[v] != 1 || uses[v] == 0) continue;
      bool recursive = std::any_of(p.body.begin(), p.body.end(),
                                   [&](const GrammarSymbol& s) { return !s.terminal && s.index == v; });
      if (recursive || (p.body.size() > 1 && uses[v] > 1)) continue;
      const auto body = p.body;
      std::vector<Production> rules;
      for (const auto& q : g.productions) {
        if (q.head == v) continue;
        Production r{q.head, {}};
        for (const auto& s : q.body) {
          if (!s.terminal && s.index == v) {
            r.body.insert(r.body.end(), body.begin(), body.end());
          } else {
            r.body.push_back(s);
          }
        }
        rules.push_back(std::move(r));
      }
      g.productions = std::move(rules);
      changed = true;
      break;
    }
    g = prune(g);
  }

  // Unit closure.
  const std::size_t nv = g.variables.size();
  std::vector<std::vector<int>> unit(nv);
  for (const auto& p : g.productions) {
    if (p.body.size() == 1 && !p.body[0].terminal) unit[p.head].push_back(p.body[0].index);
  }
  if (std::all_of(unit.begin(), unit.end(), [](const auto& u) { return u.empty(); })) return g;
  std::vector<Production> rules;
  std::set<std::pair<int, std::vector<GrammarSymbol>>> seen;
  for (std::size_t a = 0; a < nv; ++a) {
    std::vector<bool> reach(nv, false);
    std::deque<int> queue{static_cast<int>(a)};
    reach[a] = true;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int w : unit[v]) {
        if (!reach[w]) {
          reach[w] = true;
          queue.push_back(w);
        }
      }
    }
    for (const auto& p : g.productions) {
      if (!reach[p.head] || (p.body.size() == 1 && !p.body[0].terminal)) continue;
      if (seen.emplace(static_cast<int>(a), p.body).second) rules.push_back({static_cast<int>(a), p.body});
    }
  }
  g.productions = std::move(rules);
  return prune(g);
}

// --- Output --------------------------------------------------------------------

namespace {

std::string smt_symbol(const std::string& name) {
  bool simple = !name.empty() && !std::isdigit(static_cast<unsigned char>(name[0]));
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') simple = false;
  }
  return simple ? name : "|" + name + "|";
}

std::string smt_number(const BigInt& n) { return n < 0 ? "(- " + BigInt(-n).str() + ")" : n.str(); }

void print_formula(std::ostream& out, const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Atom: {
      static const char* const kRel[] = {"=", "<=", "<", ">=", ">"};
      out << "(" << kRel[static_cast<int>(f.atom.rel)] << " ";
      const auto& terms = f.atom.terms;
      auto term = [&](const std::pair<std::string, BigInt>& t) {
        if (t.second == 1) {
          out << smt_symbol(t.first);
        } else {
          out << "(* " << smt_number(t.second) << " " << smt_symbol(t.first) << ")";
        }
      };
      if (terms.empty()) {
        out << "0";
      } else if (terms.size() == 1) {
        term(terms.front());
      } else {
        out << "(+";
        for (const auto& t : terms) {
          out << " ";
          term(t);
        }
        out << ")";
      }
      out << " " << smt_number(f.atom.constant) << ")";
      return;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      bool conj = f.kind == Formula::Kind::And;
      if (f.children.empty()) {
        out << (conj ? "true" : "false");
        return;
      }
      out << (conj ? "(and" : "(or");
      for (const auto& c : f.children) {
        out << " ";
        print_formula(out, c);
      }
      out << ")";
      return;
    }
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  std::ostringstream out;
  print_formula(out, f);
  return out.str();
}

void print_smtlib(std::ostream& out, const Formula& f) {
  out << "(set-logic QF_LIA)\n";
  for (const auto& v : variables(f)) {
    out << "(declare-const " << smt_symbol(v) << " Int)\n";
    out << "(assert (>= " << smt_symbol(v) << " 0))\n";
  }
  if (f.kind == Formula::Kind::And) {
    for (const auto& c : f.children) out << "(assert " << to_string(c) << ")\n";
  } else {
    out << "(assert " << to_string(f) << ")\n";
  }
  out << "(check-sat)\n";
}

}  // namespace c1p
