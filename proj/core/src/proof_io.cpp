#include "cyclerw/proof_io.hpp"

#include <sstream>

namespace cyclerw {

using nlohmann::json;

namespace {

constexpr const char* kFormatName = "cyclerw-proof";
constexpr int kFormatVersion = 1;

std::string word_text(const Alphabet& a, const Word& w) { return a.render(w); }

Word word_from(const Alphabet& a, const json& j) {
  const std::string text = j.get<std::string>();
  std::istringstream in(text);
  Word w;
  for (std::string tok; in >> tok;) {
    auto s = a.find(tok);
    if (!s) throw std::runtime_error("unknown symbol '" + tok + "'");
    w.push_back(*s);
  }
  return w;
}

Symbol symbol_from(const Alphabet& a, const std::string& name) {
  auto s = a.find(name);
  if (!s) throw std::runtime_error("unknown symbol '" + name + "'");
  return *s;
}

json removed_json(const Srs& cur, const std::vector<std::size_t>& removed) {
  json rules = json::array();
  for (auto i : removed) rules.push_back(i < cur.size() ? cur.render_rule(i) : std::string("?"));
  return rules;
}

// Rules left after each step, for rendering.
std::vector<Srs> step_inputs(const Srs& problem, const ProofObject& proof) {
  std::vector<Srs> out;
  Srs cur = problem;
  for (const auto& st : proof.steps) {
    out.push_back(cur);
    if (const auto* c = std::get_if<CountingRemoval>(&st)) cur = without_rules(cur, c->removed);
    if (const auto* m = std::get_if<MatrixRemoval>(&st)) cur = without_rules(cur, m->removed);
  }
  return out;
}

}  // namespace

json proof_to_json(const Srs& problem, const ProofObject& proof) {
  const Alphabet& A = problem.alphabet();
  const auto inputs = step_inputs(problem, proof);
  json steps = json::array();
  for (std::size_t i = 0; i < proof.steps.size(); ++i) {
    const Srs& cur = inputs[i];
    json s;
    std::visit(
        [&](const auto& st) {
          using T = std::decay_t<decltype(st)>;
          if constexpr (std::is_same_v<T, CountingRemoval>) {
            s["type"] = "counting";
            json w = json::object();
            for (Symbol x : cur.used_symbols()) w[A.name(x)] = st.weights.of(x).str();
            s["weights"] = w;
            s["removed"] = st.removed;
            s["removed_rules"] = removed_json(cur, st.removed);
          } else if constexpr (std::is_same_v<T, MatrixRemoval>) {
            const Interpretation& I = st.interpretation;
            s["type"] = "matrix";
            s["semiring"] = to_string(I.kind());
            s["dim"] = I.dim();
            s["config"] = st.config;
            json ms = json::object();
            for (Symbol x : I.domain()) {
              const Matrix& M = I.get(x);
              json rows = json::array();
              for (std::size_t r = 0; r < M.dim(); ++r) {
                json row = json::array();
                for (std::size_t c = 0; c < M.dim(); ++c) row.push_back(M.at(r, c).str());
                rows.push_back(row);
              }
              ms[A.name(x)] = rows;
            }
            s["matrices"] = ms;
            s["removed"] = st.removed;
            s["removed_rules"] = removed_json(cur, st.removed);
          } else if constexpr (std::is_same_v<T, TransformDelegate>) {
            s["type"] = "delegate";
            s["transform"] = st.kind ? json(std::string(to_string(*st.kind))) : json(nullptr);
            s["relative"] = st.relative;
            s["command"] = st.command;
            s["verdict"] = to_string(st.verdict);
            s["input_digest"] = st.input_digest;
            s["output_digest"] = st.output_digest;
          } else if constexpr (std::is_same_v<T, Loop>) {
            const LoopWitness& w = st.witness;
            s["type"] = "loop";
            s["kind"] = to_string(w.kind);
            s["start"] = word_text(A, w.start);
            json trace = json::array();
            for (const auto& ls : w.steps)
              trace.push_back({{"rule", ls.rule},
                               {"rule_text", ls.rule < cur.size() ? cur.render_rule(ls.rule) : std::string("?")},
                               {"position", ls.position},
                               {"word", word_text(A, ls.word)}});
            s["steps"] = trace;
            s["x"] = word_text(A, w.x);
            s["y"] = word_text(A, w.y);
            s["strict_count"] = w.strict_count;
          } else {
            s["type"] = "empty-strict-set";
          }
        },
        proof.steps[i]);
    steps.push_back(std::move(s));
  }
  return {{"format", kFormatName},
          {"version", kFormatVersion},
          {"problem_digest", proof.problem_digest},
          {"verdict", to_string(proof.verdict())},
          {"steps", steps}};
}

ProofObject proof_from_json(const json& j, const Srs& problem) {
  try {
    if (j.at("format").get<std::string>() != kFormatName) throw std::runtime_error("not a proof file");
    if (j.at("version").get<int>() != kFormatVersion) throw std::runtime_error("unsupported proof version");
    const Alphabet& A = problem.alphabet();
    ProofObject p;
    p.problem_digest = j.at("problem_digest").get<std::string>();
    for (const auto& s : j.at("steps")) {
      const std::string type = s.at("type").get<std::string>();
      if (type == "counting") {
        CountingRemoval c;
        for (const auto& [name, v] : s.at("weights").items()) {
          const Symbol x = symbol_from(A, name);
          if (c.weights.w.size() <= x.id) c.weights.w.resize(x.id + 1);
          c.weights.w[x.id] = Integer(v.get<std::string>());
        }
        c.removed = s.at("removed").get<std::vector<std::size_t>>();
        p.steps.emplace_back(std::move(c));
      } else if (type == "matrix") {
        const auto kind = parse_semiring(s.at("semiring").get<std::string>());
        if (!kind) throw std::runtime_error("unknown semiring");
        const auto dim = s.at("dim").get<std::size_t>();
        Interpretation I(*kind, dim);
        for (const auto& [name, rows] : s.at("matrices").items()) {
          if (rows.size() != dim) throw std::runtime_error("matrix of wrong size for " + name);
          std::vector<Value> e;
          for (const auto& row : rows) {
            if (row.size() != dim) throw std::runtime_error("matrix of wrong size for " + name);
            for (const auto& v : row) e.push_back(Value::parse(v.get<std::string>()));
          }
          I.set(symbol_from(A, name), Matrix(dim, std::move(e)));
        }
        p.steps.emplace_back(MatrixRemoval{std::move(I), s.at("removed").get<std::vector<std::size_t>>(),
                                           s.value("config", std::string())});
      } else if (type == "delegate") {
        TransformDelegate d;
        if (!s.at("transform").is_null()) {
          d.kind = parse_transform_kind(s.at("transform").get<std::string>());
          if (!d.kind) throw std::runtime_error("unknown transformation");
        }
        d.relative = s.at("relative").get<bool>();
        d.command = s.at("command").get<std::string>();
        const auto v = parse_verdict(s.at("verdict").get<std::string>());
        if (!v) throw std::runtime_error("unknown verdict");
        d.verdict = *v;
        d.input_digest = s.at("input_digest").get<std::string>();
        d.output_digest = s.at("output_digest").get<std::string>();
        p.steps.emplace_back(std::move(d));
      } else if (type == "loop") {
        LoopWitness w;
        const std::string kind = s.at("kind").get<std::string>();
        if (kind == to_string(LoopKind::CycleRepetition)) w.kind = LoopKind::CycleRepetition;
        else if (kind == to_string(LoopKind::StringSelfEmbedding)) w.kind = LoopKind::StringSelfEmbedding;
        else throw std::runtime_error("unknown loop kind");
        w.start = word_from(A, s.at("start"));
        for (const auto& ls : s.at("steps"))
          w.steps.push_back({ls.at("rule").get<std::size_t>(), ls.at("position").get<std::size_t>(),
                             word_from(A, ls.at("word"))});
        w.x = word_from(A, s.at("x"));
        w.y = word_from(A, s.at("y"));
        w.strict_count = s.at("strict_count").get<std::size_t>();
        p.steps.emplace_back(Loop{std::move(w)});
      } else if (type == "empty-strict-set") {
        p.steps.emplace_back(EmptyStrictSet{});
      } else {
        throw std::runtime_error("unknown step type '" + type + "'");
      }
    }
    return p;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed proof: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("malformed proof: ") + e.what());
  }
}

std::string print_proof(const Srs& problem, const ProofObject& proof, ProofFormat format) {
  if (format == ProofFormat::Json) return proof_to_json(problem, proof).dump(2) + "\n";
  const Alphabet& A = problem.alphabet();
  const auto inputs = step_inputs(problem, proof);
  std::ostringstream out;
  out << to_string(proof.verdict()) << "\n";
  out << "problem sha256 " << proof.problem_digest << "\n";
  for (std::size_t i = 0; i < proof.steps.size(); ++i) {
    const Srs& cur = inputs[i];
    out << "\n" << i + 1 << ". ";
    auto rule_text = [&](std::size_t r) { return r < cur.size() ? cur.render_rule(r) : std::string("?"); };
    auto removed = [&](const std::vector<std::size_t>& rs) {
      out << "   removes:\n";
      for (auto r : rs) out << "     " << rule_text(r) << "\n";
    };
    std::visit(
        [&](const auto& st) {
          using T = std::decay_t<decltype(st)>;
          if constexpr (std::is_same_v<T, CountingRemoval>) {
            out << "counting removal, weights";
            for (Symbol x : cur.used_symbols()) out << " " << A.name(x) << "=" << st.weights.of(x).str();
            out << "\n";
            removed(st.removed);
          } else if constexpr (std::is_same_v<T, MatrixRemoval>) {
            out << to_string(st.interpretation.kind()) << " matrix removal, dimension " << st.interpretation.dim();
            if (!st.config.empty()) out << " (" << st.config << ")";
            out << "\n";
            for (Symbol x : st.interpretation.domain())
              out << "   " << A.name(x) << " = " << st.interpretation.get(x).str() << "\n";
            removed(st.removed);
          } else if constexpr (std::is_same_v<T, TransformDelegate>) {
            out << "external prover on " << (st.kind ? std::string(to_string(*st.kind)) : std::string("input"))
                << (st.relative ? " (relative)" : "") << " answered " << to_string(st.verdict) << "\n"
                << "   command: " << st.command << "\n"
                << "   input sha256 " << st.input_digest << "\n"
                << "   output sha256 " << st.output_digest << "\n";
          } else if constexpr (std::is_same_v<T, Loop>) {
            const LoopWitness& w = st.witness;
            const bool cyc = w.kind == LoopKind::CycleRepetition;
            out << to_string(w.kind) << " loop, " << w.steps.size() << (w.steps.size() == 1 ? " step\n" : " steps\n");
            auto show = [&](const Word& u) { return cyc ? "[" + A.render(u) + "]" : A.render(u); };
            out << "   " << show(w.start) << "\n";
            for (const auto& ls : w.steps)
              out << "   -> " << show(ls.word) << "   by " << rule_text(ls.rule) << "\n";
            if (!cyc) out << "   x = '" << A.render(w.x) << "', y = '" << A.render(w.y) << "'\n";
          } else {
            out << "no strict rules left\n";
          }
        },
        proof.steps[i]);
  }
  return out.str();
}

}  // namespace cyclerw
