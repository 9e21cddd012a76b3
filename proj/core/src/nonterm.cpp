#include "cyclerw/nonterm.hpp"

#include <set>
#include <unordered_map>

namespace cyclerw {

std::string_view to_string(LoopKind k) {
  return k == LoopKind::CycleRepetition ? "cycle-repetition" : "string-self-embedding";
}

std::vector<Word> start_words(const Srs& problem, std::size_t max_start_len, const Deadline& deadline) {
  std::vector<Word> out;
  std::set<Word> seen;
  auto add = [&](Word w) {
    if (!w.empty() && seen.insert(w).second) out.push_back(std::move(w));
  };
  for (const Rule& r : problem.rules()) add(r.lhs);
  for (const Rule& r : problem.rules())
    for (const Rule& s : problem.rules()) add(concat(r.lhs, s.lhs));
  const auto syms = problem.used_symbols();
  if (syms.empty()) return out;
  std::vector<Word> layer{Word{}};
  for (std::size_t len = 1; len <= max_start_len && !deadline.expired(); ++len) {
    std::vector<Word> next;
    next.reserve(layer.size() * syms.size());
    for (const auto& w : layer)
      for (Symbol s : syms) {
        Word v = w;
        v.push_back(s);
        next.push_back(std::move(v));
      }
    for (const auto& w : next) add(w);
    layer = std::move(next);
  }
  return out;
}

namespace {

struct Node {
  Word word;
  bool strict;
  int parent;
  std::size_t rule, position, depth;
};

// Steps from the root to `leaf`, then the closing step.
std::vector<LoopStep> path_to(const std::vector<Node>& nodes, int leaf, LoopStep last) {
  std::vector<LoopStep> steps{std::move(last)};
  for (int n = leaf; nodes[n].parent >= 0; n = nodes[n].parent)
    steps.push_back({nodes[n].rule, nodes[n].position, nodes[n].word});
  std::reverse(steps.begin(), steps.end());
  return steps;
}

std::size_t strict_steps(const Srs& P, const std::vector<LoopStep>& steps) {
  std::size_t n = 0;
  for (const auto& s : steps) n += P.rule(s.rule).strict ? 1 : 0;
  return n;
}

enum class Mode { Cycle, String };

// Breadth-first search from one start word; `stop` is set when the deadline
// passes so callers stop trying further starts.
std::optional<LoopWitness> search_from(const Srs& P, const Word& start, Mode mode, const NontermConfig& cfg,
                                       const Deadline& deadline, bool& stop) {
  std::vector<Node> nodes{{start, false, -1, 0, 0, 0}};
  std::unordered_map<Word, int, WordHash> seen[2];
  seen[0].emplace(start, 0);
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    if ((head & 63) == 0 && deadline.expired()) {
      stop = true;
      return std::nullopt;
    }
    if (nodes[head].depth >= cfg.max_depth) continue;
    const Word cur = nodes[head].word;
    const bool cur_strict = nodes[head].strict;
    const std::size_t depth = nodes[head].depth;

    auto visit = [&](std::size_t rule, std::size_t position, const Word& next) -> std::optional<LoopWitness> {
      const bool strict = cur_strict || P.rule(rule).strict;
      std::size_t where = 0;
      const bool closes = strict && (mode == Mode::Cycle ? next == start
                                                         : next.size() >= start.size() && is_factor(start, next, &where));
      if (closes) {
        LoopWitness w;
        w.start = start;
        if (mode == Mode::Cycle) {
          w.kind = LoopKind::CycleRepetition;
        } else {
          w.kind = LoopKind::StringSelfEmbedding;
          w.x.assign(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(where));
          w.y.assign(next.begin() + static_cast<std::ptrdiff_t>(where + start.size()), next.end());
        }
        w.steps = path_to(nodes, static_cast<int>(head), {rule, position, next});
        w.strict_count = strict_steps(P, w.steps);
        return w;
      }
      if (next.size() > cfg.max_word_len || nodes.size() >= cfg.max_states) return std::nullopt;
      if (!seen[strict].emplace(next, static_cast<int>(nodes.size())).second) return std::nullopt;
      nodes.push_back({next, strict, static_cast<int>(head), rule, position, depth + 1});
      return std::nullopt;
    };

    if (mode == Mode::Cycle) {
      for (const auto& cs : cycle_successors(P, cur))
        if (auto w = visit(cs.rule, cs.offset, cs.target.repr())) return w;
    } else {
      for (const auto& rd : string_successors(P, cur))
        if (auto w = visit(rd.rule, rd.position, rd.result)) return w;
    }
  }
  return std::nullopt;
}

std::optional<LoopWitness> search(const Srs& P, Mode mode, const NontermConfig& cfg, const Deadline& outer) {
  if (P.strict_count() == 0) return std::nullopt;
  const Deadline deadline = outer.sooner(cfg.budget);
  std::set<Word> tried;
  bool stop = false;
  for (Word w : start_words(P, cfg.max_start_len, deadline)) {
    if (mode == Mode::Cycle) w = canonical_rotation(w);
    if (!tried.insert(w).second) continue;
    if (auto found = search_from(P, w, mode, cfg, deadline, stop)) return found;
    if (stop || deadline.expired()) break;
  }
  return std::nullopt;
}

}  // namespace

std::optional<LoopWitness> find_cycle_loop(const Srs& problem, const NontermConfig& cfg, const Deadline& deadline) {
  return search(problem, Mode::Cycle, cfg, deadline);
}

std::optional<LoopWitness> find_string_loop(const Srs& problem, const NontermConfig& cfg,
                                            const Deadline& deadline) {
  return search(problem, Mode::String, cfg, deadline);
}

std::optional<LoopWitness> find_cycle_loop_from(const Srs& problem, const Word& start, const NontermConfig& cfg,
                                                const Deadline& deadline) {
  if (start.empty()) return std::nullopt;
  bool stop = false;
  return search_from(problem, canonical_rotation(start), Mode::Cycle, cfg, deadline.sooner(cfg.budget), stop);
}

std::optional<LoopWitness> find_string_loop_from(const Srs& problem, const Word& start, const NontermConfig& cfg,
                                                 const Deadline& deadline) {
  if (start.empty()) return std::nullopt;
  bool stop = false;
  return search_from(problem, start, Mode::String, cfg, deadline.sooner(cfg.budget), stop);
}

std::optional<LoopWitness> find_loop(const Srs& problem, const NontermConfig& cfg, const Deadline& deadline) {
  const Deadline total = deadline.sooner(cfg.budget);
  NontermConfig half = cfg;
  half.budget = cfg.budget / 2;
  if (auto w = find_cycle_loop(problem, half, total)) return w;
  // Whatever the cycle search left over goes to the string search.
  NontermConfig rest = cfg;
  rest.budget = total.remaining();
  return find_string_loop(problem, rest, total);
}

WitnessCheck verify_witness(const Srs& problem, const LoopWitness& w) {
  auto fail = [](std::size_t i, std::string why) { return WitnessCheck{false, i, std::move(why)}; };
  if (w.steps.empty()) return fail(0, "a loop needs at least one step");
  Word cur = w.start;
  std::size_t strict = 0;
  for (std::size_t i = 0; i < w.steps.size(); ++i) {
    const LoopStep& st = w.steps[i];
    if (st.rule >= problem.size()) return fail(i, "rule index out of range");
    const Rule& r = problem.rule(st.rule);
    if (w.kind == LoopKind::CycleRepetition) {
      if (cur.empty() || st.position >= cur.size()) return fail(i, "rotation out of range");
      auto res = apply_at_rotation(r, cur, st.position);
      if (!res || !cycle_equal(*res, st.word)) return fail(i, "not a cycle rewrite step");
    } else {
      const std::size_t p = st.position;
      if (p + r.lhs.size() > cur.size() || !std::equal(r.lhs.begin(), r.lhs.end(), cur.begin() + p))
        return fail(i, "left-hand side does not occur at the position");
      Word res(cur.begin(), cur.begin() + p);
      res.insert(res.end(), r.rhs.begin(), r.rhs.end());
      res.insert(res.end(), cur.begin() + p + r.lhs.size(), cur.end());
      if (res != st.word) return fail(i, "not a string rewrite step");
    }
    strict += r.strict ? 1 : 0;
    cur = st.word;
  }
  const std::size_t end = w.steps.size();
  if (strict == 0) return fail(end, "loop has no strict step");
  if (strict != w.strict_count) return fail(end, "strict step count does not match");
  if (w.kind == LoopKind::CycleRepetition) {
    if (!cycle_equal(cur, w.start)) return fail(end, "end class differs from start class");
  } else if (cur != concat(concat(w.x, w.start), w.y)) {
    return fail(end, "end word is not x.start.y");
  }
  return {};
}

}  // namespace cyclerw
