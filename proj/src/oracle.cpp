#include "c1p/oracle.hpp"

#include "c1p/grammar.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace c1p {

namespace {

RationalInterval apply_update(const RationalInterval& in, std::int64_t update, std::int64_t guard) {
  if (in.empty) return in;
  RationalInterval out = in;
  if (update > 0) {
    std::optional<Rational> hi;
    if (in.hi) hi = *in.hi + update;
    out = RationalInterval::make(in.lo, false, hi, in.hi_closed);
  } else if (update < 0) {
    std::optional<Rational> lo;
    if (in.lo) lo = *in.lo + update;
    out = RationalInterval::make(lo, in.lo_closed, in.hi, false);
  }
  return out.intersect(RationalInterval::make(Rational(guard), true, std::nullopt, false));
}

struct Walker {
  const C1pvassModel& model;
  std::string state;
  std::vector<std::string> stack;
  RationalInterval interval;

  explicit Walker(const C1pvassModel& m)
      : model(m), state(m.initial), interval(RationalInterval::point(Rational(0))) {}

  // Returns false when the stack operation is not applicable.
  bool apply_stack(const StackOp& op) {
    switch (op.kind) {
      case StackKind::None: return true;
      case StackKind::Push: stack.push_back(op.symbol); return true;
      case StackKind::Pop:
        if (stack.empty() || stack.back() != op.symbol) return false;
        stack.pop_back();
        return true;
    }
    return false;
  }
};

}  // namespace

OracleRun trace(const C1pvassModel& model, const std::vector<std::size_t>& path) {
  require_valid(model);
  Walker w(model);
  OracleRun run;
  run.steps.push_back({w.state, w.stack, w.interval});
  for (std::size_t idx : path) {
    if (idx >= model.transitions.size()) throw InvalidPath("transition index out of range");
    const auto& t = model.transitions[idx];
    if (t.src != w.state) throw InvalidPath("path is not connected at " + t.src + "->" + t.dst);
    if (!w.apply_stack(t.stack)) throw InvalidPath("stack mismatch at " + t.src + "->" + t.dst);
    w.state = t.dst;
    w.interval = apply_update(w.interval, t.update, model.guard(t.dst));
    run.transitions.push_back(idx);
    run.steps.push_back({w.state, w.stack, w.interval});
  }
  return run;
}

RationalInterval propagate(const C1pvassModel& model, const std::vector<std::size_t>& path) {
  return trace(model, path).steps.back().interval;
}

bool accepts(const OracleQuery& query, const RationalInterval& at_final) {
  switch (query.mode) {
    case OracleMode::Reach: return at_final.contains(query.k);
    case OracleMode::Cover: return at_final.reaches_at_least(query.k);
    case OracleMode::CoverAny: return !at_final.empty;
  }
  return false;
}

SearchResult search(const C1pvassModel& model, const OracleQuery& query) {
  require_valid(model);
  SearchResult result;
  std::map<std::string, std::vector<std::size_t>> out_edges;
  for (std::size_t i = 0; i < model.transitions.size(); ++i) out_edges[model.transitions[i].src].push_back(i);

  // Configurations already explored with at least as many remaining steps
  // cannot produce anything new.
  std::map<std::tuple<std::string, std::vector<std::string>, std::string>, std::size_t> seen;
  std::vector<std::size_t> path;

  auto dfs = [&](auto& self, Walker& w) -> bool {
    ++result.nodes;
    if (model.finals.contains(w.state) && accepts(query, w.interval)) return true;
    std::size_t remaining = query.max_steps - path.size();
    if (remaining == 0) return false;
    auto key = std::make_tuple(w.state, w.stack, to_string(w.interval));
    auto it = seen.find(key);
    if (it != seen.end() && it->second >= remaining) return false;
    seen[key] = remaining;

    auto edges = out_edges.find(w.state);
    if (edges == out_edges.end()) return false;
    for (std::size_t idx : edges->second) {
      const auto& t = model.transitions[idx];
      Walker next = w;
      if (!next.apply_stack(t.stack)) continue;
      if (next.stack.size() > query.max_stack) continue;
      next.state = t.dst;
      next.interval = apply_update(w.interval, t.update, model.guard(t.dst));
      if (next.interval.empty) continue;
      path.push_back(idx);
      if (self(self, next)) return true;
      path.pop_back();
    }
    return false;
  };

  Walker start(model);
  if (dfs(dfs, start)) result.witness = trace(model, path);
  return result;
}

// ---------------------------------------------------------------------------

bool decide_by_propagation(const C1pvassModel& model, OracleMode mode, const Rational& k, std::size_t max_states) {
  require_valid(model);
  if (k < 0) throw std::invalid_argument("k must be nonnegative");
  std::int64_t max_guard = 0;
  for (const auto& [_, g] : model.lower_bound) max_guard = std::max(max_guard, g);
  const std::int64_t cap = std::max<std::int64_t>(max_guard, static_cast<std::int64_t>(ceil_of(k))) + 1;

  // Abstract interval: integer endpoints, hi saturating at `cap`.
  struct Abs {
    std::int64_t lo, hi;
    bool lo_closed, hi_closed;
    auto operator<=>(const Abs&) const = default;
  };
  auto step = [&](Abs a, std::int64_t update, std::int64_t guard) -> std::optional<Abs> {
    if (update > 0) {
      a.lo_closed = false;
      a.hi = std::min(cap, a.hi + update);
    } else if (update < 0) {
      a.lo += update;
      a.hi_closed = false;
    }
    if (guard > a.lo) {
      a.lo = guard;
      a.lo_closed = true;
    }
    if (a.lo > a.hi || (a.lo == a.hi && !(a.lo_closed && a.hi_closed))) return std::nullopt;
    return a;
  };
  auto as_interval = [](const Abs& a) {
    return RationalInterval::make(Rational(a.lo), a.lo_closed, Rational(a.hi), a.hi_closed);
  };
  OracleQuery query{mode, k, 0, 0};

  std::map<std::string, std::vector<const Transition*>> out_edges;
  for (const auto& t : model.transitions) out_edges[t.src].push_back(&t);

  Pda pda;
  for (const auto& g : model.stack_alphabet) pda.add_stack_symbol(g);
  std::map<std::pair<std::string, Abs>, int> index;
  std::vector<std::pair<std::string, Abs>> todo;
  auto node = [&](const std::string& s, const Abs& a) {
    auto [it, fresh] = index.try_emplace({s, a}, 0);
    if (fresh) {
      if (index.size() > max_states) throw std::length_error("propagation product too large");
      it->second = pda.add_state(s + "#" + std::to_string(index.size()));
      todo.emplace_back(s, a);
      if (model.finals.contains(s) && accepts(query, as_interval(a))) pda.finals.push_back(it->second);
    }
    return it->second;
  };
  pda.initial = node(model.initial, Abs{0, 0, true, true});
  while (!todo.empty()) {
    auto [s, a] = todo.back();
    todo.pop_back();
    int from = index.at({s, a});
    for (const auto* t : out_edges[s]) {
      auto next = step(a, t->update, model.guard(t->dst));
      if (!next) continue;
      int to = node(t->dst, *next);
      PdaTransition pt{from, to, kEpsilon, t->stack.kind, -1};
      if (t->stack.kind != StackKind::None) pt.symbol = pda.stack_symbol_index(t->stack.symbol);
      pda.transitions.push_back(pt);
    }
  }
  if (pda.finals.empty()) return false;
  return !is_empty(pda_to_cfg(pda));
}

// ---------------------------------------------------------------------------

std::string to_string(DnfTag tag, const Rational& update_sign) {
  const bool positive = update_sign > 0;
  switch (tag) {
    case DnfTag::Full: return positive ? "+1" : "-1";
    case DnfTag::Epsilon: return "+eps";
    case DnfTag::Delta: return "-delta";
    case DnfTag::Zero: return "+0";
    case DnfTag::FullLessDelta: return "+(1-delta)";
    case DnfTag::FullLessEpsilon: return "-(1-eps)";
  }
  return "?";
}

namespace {

enum class Tok { Plus1, Minus1, Eps, Del };

// Expands composite tags into their two constituent tokens.
std::vector<Tok> tokens_of(const std::vector<DnfTag>& tags, const std::vector<Rational>& updates) {
  std::vector<Tok> out;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    switch (tags[i]) {
      case DnfTag::Full: out.push_back(updates[i] > 0 ? Tok::Plus1 : Tok::Minus1); break;
      case DnfTag::Epsilon: out.push_back(Tok::Eps); break;
      case DnfTag::Delta: out.push_back(Tok::Del); break;
      case DnfTag::Zero: break;
      case DnfTag::FullLessDelta: out.insert(out.end(), {Tok::Plus1, Tok::Del}); break;
      case DnfTag::FullLessEpsilon: out.insert(out.end(), {Tok::Minus1, Tok::Eps}); break;
    }
  }
  return out;
}

// Segment automaton for (+1 | -D)* (-D | +E)* (-1 | +E)*, staying in the
// lowest segment possible. Returns 0 when the token is not allowed.
int advance(int segment, Tok t) {
  switch (t) {
    case Tok::Plus1: return segment <= 1 ? 1 : 0;
    case Tok::Del: return segment <= 2 ? std::max(segment, 1) : 0;
    case Tok::Eps: return std::max(segment, 2);
    case Tok::Minus1: return 3;
  }
  return 0;
}

bool tag_matches_sign(DnfTag tag, const Rational& update) {
  switch (tag) {
    case DnfTag::Zero: return update == 0;
    case DnfTag::Full: return update != 0;
    case DnfTag::Epsilon:
    case DnfTag::FullLessDelta: return update > 0;
    case DnfTag::Delta:
    case DnfTag::FullLessEpsilon: return update < 0;
  }
  return false;
}

struct Frac {
  bool eps;        // +E when true, -D otherwise
  Rational size;   // positive magnitude
};

std::vector<Frac> fractional_tokens(const std::vector<DnfTag>& tags, const std::vector<Rational>& values) {
  std::vector<Frac> out;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    switch (tags[i]) {
      case DnfTag::Epsilon: out.push_back({true, values[i]}); break;
      case DnfTag::Delta: out.push_back({false, -values[i]}); break;
      case DnfTag::FullLessDelta: out.push_back({false, Rational(1) - values[i]}); break;
      case DnfTag::FullLessEpsilon: out.push_back({true, values[i] + 1}); break;
      default: break;
    }
  }
  return out;
}

std::vector<Rational> counters(const std::vector<Rational>& updates) {
  std::vector<Rational> out;
  Rational c = 0;
  for (const auto& u : updates) {
    c += u;
    out.push_back(c);
  }
  return out;
}

// Unit sizes for the fractional tokens so that the shape conditions hold.
// Returns nullopt when the token sequence matches neither shape.
std::optional<std::vector<BigInt>> fractional_units(const std::vector<bool>& is_eps) {
  const std::size_t n = is_eps.size();
  std::vector<BigInt> units(n, BigInt(1));
  if (n == 0) return units;
  auto last_delta = std::find(is_eps.rbegin(), is_eps.rend(), false);
  bool has_eps = std::find(is_eps.begin(), is_eps.end(), true) != is_eps.end();
  if (last_delta == is_eps.rend() || !has_eps) return std::nullopt;
  const std::size_t final_delta = static_cast<std::size_t>(is_eps.rend() - last_delta) - 1;

  // Within the mixed part, the first epsilon outweighs all deltas but the
  // final one, every other token weighs one unit.
  auto weigh_mixed = [&](std::size_t end) {
    BigInt deltas(0);
    for (std::size_t i = 0; i < end; ++i) {
      if (!is_eps[i]) deltas += 1;
    }
    BigInt sum(0);
    bool first = true;
    for (std::size_t i = 0; i < end; ++i) {
      if (is_eps[i] && first) {
        units[i] = deltas + 1;
        first = false;
      }
      sum += is_eps[i] ? units[i] : BigInt(-units[i]);
    }
    return sum;
  };

  if (!is_eps.back()) {
    // (-D)* (+E) (+E | -D)* (-D)
    BigInt sum = weigh_mixed(n - 1);
    if (sum <= 0) return std::nullopt;
    units[n - 1] = sum;
    return units;
  }
  // (+E | -D)* (-D) (+E)+
  for (std::size_t i = final_delta + 1; i < n; ++i) {
    if (!is_eps[i]) return std::nullopt;
  }
  BigInt mixed = weigh_mixed(final_delta);
  const BigInt trailing(static_cast<long>(n - final_delta - 1));
  BigInt target = mixed > 0 ? BigInt(1) : BigInt(1 - mixed);  // amount the trailing epsilons restore
  units[final_delta] = mixed + target;
  // Trailing epsilons share `target` units; scale everything by `trailing`
  // to keep integers.
  for (std::size_t i = 0; i <= final_delta; ++i) units[i] *= trailing;
  for (std::size_t i = final_delta + 1; i < n; ++i) units[i] = target;
  return units;
}

}  // namespace

bool dnf_nonzero_pattern_ok(const std::vector<DnfTag>& tags, const std::vector<Rational>& updates) {
  if (tags.size() != updates.size()) return false;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (!tag_matches_sign(tags[i], updates[i])) return false;
  }
  int segment = 1;
  for (Tok t : tokens_of(tags, updates)) {
    segment = advance(segment, t);
    if (segment == 0) return false;
  }
  return true;
}

bool dnf_fractional_pattern_ok(const std::vector<DnfTag>& tags, const std::vector<Rational>& values,
                               const std::vector<Rational>& updates) {
  if (!dnf_nonzero_pattern_ok(tags, updates)) return false;
  auto toks = fractional_tokens(tags, values);
  if (toks.empty()) return true;
  for (const auto& t : toks) {
    if (t.size <= 0 || t.size >= 1) return false;
  }
  const std::size_t n = toks.size();
  std::optional<std::size_t> final_delta;
  for (std::size_t i = n; i-- > 0;) {
    if (!toks[i].eps) {
      final_delta = i;
      break;
    }
  }
  bool has_eps = std::any_of(toks.begin(), toks.end(), [](const Frac& f) { return f.eps; });
  if (!final_delta || !has_eps) return false;

  Rational total = 0;
  for (const auto& t : toks) total += t.eps ? t.size : Rational(-t.size);
  if (total != 0) return false;

  Rational prefix = 0;
  bool seen_eps = false;
  if (!toks.back().eps) {
    // Type 1: leading deltas, then an epsilon, ..., ending in a delta.
    for (std::size_t i = 0; i + 1 < n; ++i) {
      prefix += toks[i].eps ? toks[i].size : Rational(-toks[i].size);
      seen_eps = seen_eps || toks[i].eps;
      if (seen_eps && prefix <= 0) return false;
    }
    return true;
  }
  // Type 2: ..., the final delta, then only epsilons.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    prefix += toks[i].eps ? toks[i].size : Rational(-toks[i].size);
    seen_eps = seen_eps || toks[i].eps;
    if (i >= *final_delta) {
      if (prefix >= 0) return false;
    } else if (seen_eps && prefix <= 0) {
      return false;
    }
  }
  return true;
}

bool dnf_floor_domination_ok(const std::vector<Rational>& original, const std::vector<Rational>& normalized) {
  if (original.size() != normalized.size()) return false;
  auto a = counters(original);
  auto b = counters(normalized);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i] < Rational(floor_of(a[i]))) return false;
  }
  return true;
}

std::optional<DnfScaledRun> normalize_run(const ScaledRun& run) {
  const auto& ups = run.updates;
  const std::size_t n = ups.size();
  if (!run.guards.empty() && run.guards.size() != n) throw std::invalid_argument("one guard per step expected");
  auto guard_at = [&](std::size_t i) { return run.guards.empty() ? std::int64_t{0} : run.guards[i]; };

  DnfScaledRun out;
  for (const auto& u : ups) {
    if (u > 1 || u < -1) throw std::invalid_argument("scaled update outside [-1,1]");
    if (u > 0) out.positive_sum += u;
    if (u < 0) out.negative_sum += u;
  }
  auto original = counters(ups);
  for (std::size_t i = 0; i < n; ++i) {
    if (original[i] < guard_at(i) || original[i] < 0) throw std::invalid_argument("run violates a guard");
  }
  const Rational final_value = n == 0 ? Rational(0) : original.back();
  if (!is_integer(final_value)) throw std::invalid_argument("run does not end at an integer");
  out.int_positive = floor_of(out.positive_sum);
  out.frac_positive = out.positive_sum - Rational(out.int_positive);
  out.int_negative = ceil_of(out.negative_sum);
  out.frac_negative = Rational(out.int_negative) - out.negative_sum;
  const BigInt k = floor_of(final_value);

  auto realize = [&](const std::vector<DnfTag>& tags) -> std::optional<std::vector<Rational>> {
    std::vector<bool> is_eps;
    for (auto t : tags) {
      if (t == DnfTag::Epsilon || t == DnfTag::FullLessEpsilon) is_eps.push_back(true);
      if (t == DnfTag::Delta || t == DnfTag::FullLessDelta) is_eps.push_back(false);
    }
    auto units = fractional_units(is_eps);
    if (!units) return std::nullopt;
    BigInt total(0);
    for (const auto& u : *units) total += u;
    const Rational unit(BigInt(1), BigInt(2) * (total + 1));
    std::vector<Rational> values(n);
    std::size_t f = 0;
    for (std::size_t i = 0; i < n; ++i) {
      switch (tags[i]) {
        case DnfTag::Full: values[i] = ups[i] > 0 ? 1 : -1; break;
        case DnfTag::Zero: values[i] = 0; break;
        case DnfTag::Epsilon: values[i] = Rational((*units)[f++]) * unit; break;
        case DnfTag::Delta: values[i] = -Rational((*units)[f++]) * unit; break;
        case DnfTag::FullLessDelta: values[i] = 1 - Rational((*units)[f++]) * unit; break;
        case DnfTag::FullLessEpsilon: values[i] = -1 + Rational((*units)[f++]) * unit; break;
      }
    }
    return values;
  };

  auto accept = [&](const std::vector<DnfTag>& tags) -> bool {
    auto values = realize(tags);
    if (!values) return false;
    if (!dnf_fractional_pattern_ok(tags, *values, ups)) return false;
    if (!dnf_floor_domination_ok(ups, *values)) return false;
    auto c = counters(*values);
    if (n > 0 && c.back() != Rational(k)) return false;
    for (std::size_t i = 0; i < n; ++i) {
      if (c[i] < guard_at(i)) return false;
    }
    out.tags = tags;
    out.values = std::move(*values);
    return true;
  };

  for (bool composites : {false, true}) {
    std::vector<DnfTag> tags(n, DnfTag::Zero);
    auto dfs = [&](auto& self, std::size_t i, int segment, BigInt full_balance) -> bool {
      if (i == n) return full_balance == k && accept(tags);
      if (ups[i] == 0) {
        tags[i] = DnfTag::Zero;
        return self(self, i + 1, segment, full_balance);
      }
      const bool pos = ups[i] > 0;
      std::vector<DnfTag> options{DnfTag::Full, pos ? DnfTag::Epsilon : DnfTag::Delta};
      if (composites) options.push_back(pos ? DnfTag::FullLessDelta : DnfTag::FullLessEpsilon);
      for (DnfTag t : options) {
        int seg = segment;
        for (Tok tok : tokens_of({t}, {ups[i]})) {
          seg = seg == 0 ? 0 : advance(seg, tok);
        }
        if (seg == 0) continue;
        tags[i] = t;
        BigInt bal = full_balance;
        if (t == DnfTag::Full || t == DnfTag::FullLessDelta || t == DnfTag::FullLessEpsilon) bal += pos ? 1 : -1;
        if (self(self, i + 1, seg, bal)) return true;
      }
      return false;
    };
    if (dfs(dfs, 0, 1, BigInt(0))) return out;
  }
  return std::nullopt;
}

}  // namespace c1p
