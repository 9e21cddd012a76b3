#include "cyclerw/tpdb.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <sstream>

namespace cyclerw {

TpdbError::TpdbError(std::size_t line, std::size_t column, const std::string& what)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  enum class Kind { Open, Close, Comma, Arrow, WeakArrow, Name, End } kind;
  std::string text;
  std::size_t line, column;
};

bool name_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ',' && c != '"';
}

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    skip_space();
    const std::size_t l = line_, c = col_;
    if (pos_ >= s_.size()) return {Token::Kind::End, "", l, c};
    const char ch = s_[pos_];
    if (ch == '(' || ch == ')' || ch == ',') {
      advance();
      return {ch == '(' ? Token::Kind::Open : ch == ')' ? Token::Kind::Close : Token::Kind::Comma,
              std::string(1, ch), l, c};
    }
    if (ch == '"') throw TpdbError(l, c, "unexpected '\"'");
    std::string text;
    while (pos_ < s_.size() && name_char(s_[pos_])) {
      text.push_back(s_[pos_]);
      advance();
    }
    if (text == "->") return {Token::Kind::Arrow, text, l, c};
    if (text == "->=") return {Token::Kind::WeakArrow, text, l, c};
    return {Token::Kind::Name, text, l, c};
  }

  // Raw text up to the parenthesis closing an already opened one.
  std::string balanced(std::size_t open_line, std::size_t open_col) {
    std::string out;
    int depth = 1;
    while (pos_ < s_.size()) {
      const char ch = s_[pos_];
      if (ch == '(') ++depth;
      if (ch == ')' && --depth == 0) {
        advance();
        return out;
      }
      out.push_back(ch);
      advance();
    }
    throw TpdbError(open_line, open_col, "unclosed '('");
  }

 private:
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance();
  }

  std::string_view s_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

ProblemFile parse_tpdb(std::string_view text, const TpdbOptions& opts) {
  Lexer lex(text);
  ProblemFile out;
  Alphabet alphabet;
  std::vector<Rule> rules;
  bool seen_rules = false;

  auto symbol = [&](const Token& t) {
    if (!opts.allow_reserved && t.text.find('#') != std::string::npos)
      throw TpdbError(t.line, t.column, "symbol '" + t.text + "' uses the reserved character '#'");
    return alphabet.intern(t.text);
  };

  for (Token t = lex.next(); t.kind != Token::Kind::End; t = lex.next()) {
    if (t.kind != Token::Kind::Open) throw TpdbError(t.line, t.column, "expected '(' but found '" + t.text + "'");
    const Token head = lex.next();
    if (head.kind != Token::Kind::Name) throw TpdbError(head.line, head.column, "expected a section name");
    if (head.text == "COMMENT") {
      out.comments.push_back(trim(lex.balanced(t.line, t.column)));
    } else if (head.text == "VAR") {
      const Token v = lex.next();
      if (v.kind != Token::Kind::Close)
        throw TpdbError(v.line, v.column, "string rewriting systems have no variables");
    } else if (head.text == "RULES") {
      if (seen_rules) throw TpdbError(head.line, head.column, "duplicate RULES section");
      seen_rules = true;
      Token tok = lex.next();
      while (tok.kind != Token::Kind::Close) {
        Rule r;
        const Token start = tok;
        while (tok.kind == Token::Kind::Name) {
          r.lhs.push_back(symbol(tok));
          tok = lex.next();
        }
        if (tok.kind != Token::Kind::Arrow && tok.kind != Token::Kind::WeakArrow)
          throw TpdbError(tok.line, tok.column, tok.kind == Token::Kind::End ? "unexpected end of input"
                                                                             : "expected '->' or '->='");
        if (r.lhs.empty()) throw TpdbError(start.line, start.column, "empty left-hand side");
        r.strict = tok.kind == Token::Kind::Arrow;
        tok = lex.next();
        while (tok.kind == Token::Kind::Name) {
          r.rhs.push_back(symbol(tok));
          tok = lex.next();
        }
        rules.push_back(std::move(r));
        if (tok.kind == Token::Kind::Comma) {
          tok = lex.next();
        } else if (tok.kind != Token::Kind::Close) {
          throw TpdbError(tok.line, tok.column,
                          tok.kind == Token::Kind::End ? "unexpected end of input" : "expected ',' or ')'");
        }
      }
    } else {
      lex.balanced(t.line, t.column);
      out.warnings.push_back(std::to_string(head.line) + ":" + std::to_string(head.column) +
                             ": skipped unknown section " + head.text);
    }
  }
  out.srs = Srs(std::move(alphabet), std::move(rules));
  out.relative = out.srs.is_relative();
  return out;
}

ProblemFile read_tpdb_file(const std::string& path, const TpdbOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  ProblemFile f = parse_tpdb(ss.str(), opts);
  f.path = path;
  return f;
}

std::string print_tpdb(const Srs& problem, const std::vector<std::string>& comments) {
  std::string out;
  for (const auto& c : comments) out += "(COMMENT " + c + ")\n";
  out += "(RULES";
  const auto& A = problem.alphabet();
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const Rule& r = problem.rule(i);
    out += "\n  ";
    out += A.render(r.lhs);
    out += r.strict ? " ->" : " ->=";
    if (!r.rhs.empty()) out += " " + A.render(r.rhs);
    if (i + 1 < problem.size()) out += ",";
  }
  out += "\n)\n";
  return out;
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

std::string problem_digest(const Srs& problem) { return sha256_hex(print_tpdb(problem)); }

}  // namespace cyclerw
