#include "saturn/fol/tptp.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace saturn::fol {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { LowerWord, UpperWord, Dollar, Integer, Quoted, LParen, RParen, LBracket, RBracket,
                 Comma, Dot, Pipe, Tilde, Other, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return cur_; }

  Token next() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  char at(std::size_t i) const { return i < src_.size() ? src_[i] : '\0'; }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space_and_comments() {
    for (;;) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) bump();
      if (at(pos_) == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
        continue;
      }
      if (at(pos_) == '/' && at(pos_ + 1) == '*') {
        const std::size_t l = line_, c = col_;
        bump();
        bump();
        while (pos_ < src_.size() && !(at(pos_) == '*' && at(pos_ + 1) == '/')) bump();
        if (pos_ >= src_.size()) throw ParseError("unterminated block comment", l, c);
        bump();
        bump();
        continue;
      }
      return;
    }
  }

  static bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  void advance() {
    skip_space_and_comments();
    cur_ = Token{};
    cur_.line = line_;
    cur_.column = col_;
    if (pos_ >= src_.size()) {
      cur_.kind = Tok::End;
      return;
    }
    const char c = src_[pos_];
    auto take_word = [&] {
      while (pos_ < src_.size() && word_char(src_[pos_])) {
        cur_.text.push_back(src_[pos_]);
        bump();
      }
    };
    if (std::islower(static_cast<unsigned char>(c))) {
      cur_.kind = Tok::LowerWord;
      take_word();
    } else if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
      cur_.kind = Tok::UpperWord;
      take_word();
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      cur_.kind = Tok::Integer;
      take_word();
    } else if (c == '$') {
      cur_.kind = Tok::Dollar;
      cur_.text.push_back(c);
      bump();
      take_word();
    } else if (c == '\'') {
      cur_.kind = Tok::Quoted;
      bump();
      while (pos_ < src_.size() && src_[pos_] != '\'') {
        if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) bump();
        cur_.text.push_back(src_[pos_]);
        bump();
      }
      if (pos_ >= src_.size()) throw ParseError("unterminated quoted atom", cur_.line, cur_.column);
      bump();
    } else {
      cur_.text.push_back(c);
      bump();
      switch (c) {
        case '(': cur_.kind = Tok::LParen; break;
        case ')': cur_.kind = Tok::RParen; break;
        case '[': cur_.kind = Tok::LBracket; break;
        case ']': cur_.kind = Tok::RBracket; break;
        case ',': cur_.kind = Tok::Comma; break;
        case '.': cur_.kind = Tok::Dot; break;
        case '|': cur_.kind = Tok::Pipe; break;
        case '~': cur_.kind = Tok::Tilde; break;
        default: cur_.kind = Tok::Other; break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  Token cur_;
};

class Parser {
 public:
  Parser(std::string_view src, SymbolTable& symbols, FreshVars& fresh)
      : lex_(src), symbols_(symbols), fresh_(fresh) {}

  Problem problem(std::string name) {
    Problem p;
    p.name = std::move(name);
    ClauseId next_id = 0;
    while (lex_.peek().kind != Tok::End) {
      Clause c = statement();
      c.id = next_id++;
      (c.role == Role::NegatedConjecture ? p.negated_conjecture : p.axioms).push_back(std::move(c));
    }
    p.next_var = fresh_.peek();
    return p;
  }

  std::vector<Literal> bare_disjunction() {
    vars_.clear();
    auto lits = disjunction();
    if (lex_.peek().kind != Tok::End) fail("trailing input after formula", lex_.peek());
    return lits;
  }

 private:
  [[noreturn]] static void fail(const std::string& what, const Token& at) {
    throw ParseError(what, at.line, at.column);
  }

  Token expect(Tok kind, const char* what) {
    if (lex_.peek().kind != kind) {
      const auto& t = lex_.peek();
      fail(std::string("expected ") + what + (t.kind == Tok::End ? ", found end of input"
                                                                  : ", found '" + t.text + "'"),
           t);
    }
    return lex_.next();
  }

  Clause statement() {
    Token kw = lex_.next();
    if (kw.kind != Tok::LowerWord) fail("expected cnf statement", kw);
    if (kw.text == "include") fail("include directives are not supported", kw);
    if (kw.text != "cnf") fail("only cnf statements are supported, found '" + kw.text + "'", kw);
    expect(Tok::LParen, "'('");
    Token name = lex_.next();
    if (name.kind != Tok::LowerWord && name.kind != Tok::Integer && name.kind != Tok::Quoted &&
        name.kind != Tok::UpperWord) {
      fail("expected statement name", name);
    }
    expect(Tok::Comma, "','");
    Token role = expect(Tok::LowerWord, "role");
    Clause c;
    c.name = name.text;
    if (role.text == "axiom" || role.text == "hypothesis") {
      c.role = Role::Axiom;
    } else if (role.text == "negated_conjecture") {
      c.role = Role::NegatedConjecture;
    } else {
      fail("unknown role '" + role.text + "'", role);
    }
    c.sos = c.role == Role::NegatedConjecture;
    expect(Tok::Comma, "','");
    vars_.clear();
    c.literals = disjunction();
    while (lex_.peek().kind == Tok::Comma) {
      lex_.next();
      skip_annotation();
    }
    expect(Tok::RParen, "')'");
    expect(Tok::Dot, "'.'");
    return c;
  }

  void skip_annotation() {
    int depth = 0;
    for (;;) {
      const Token& t = lex_.peek();
      if (t.kind == Tok::End) fail("unterminated annotation", t);
      if (depth == 0 && (t.kind == Tok::RParen || t.kind == Tok::Comma)) return;
      if (t.kind == Tok::LParen || t.kind == Tok::LBracket) ++depth;
      if (t.kind == Tok::RParen || t.kind == Tok::RBracket) --depth;
      lex_.next();
    }
  }

  std::vector<Literal> disjunction() {
    std::vector<Literal> lits;
    if (lex_.peek().kind == Tok::LParen) {
      lex_.next();
      lits = disjunction();
      expect(Tok::RParen, "')'");
      return lits;
    }
    literal(lits);
    while (lex_.peek().kind == Tok::Pipe) {
      lex_.next();
      literal(lits);
    }
    return lits;
  }

  void literal(std::vector<Literal>& out) {
    bool positive = true;
    if (lex_.peek().kind == Tok::Tilde) {
      lex_.next();
      positive = false;
    }
    const Token head = lex_.next();
    if (head.kind == Tok::Dollar) {
      if (head.text == "$false" && positive) return;
      fail("unsupported constant '" + head.text + "'", head);
    }
    if (head.kind == Tok::LParen) {
      std::vector<Literal> inner;
      literal(inner);
      expect(Tok::RParen, "')'");
      for (auto& l : inner) {
        if (!positive) l.positive = !l.positive;
        out.push_back(std::move(l));
      }
      return;
    }
    if (head.kind != Tok::LowerWord && head.kind != Tok::Quoted) fail("expected predicate symbol", head);
    std::vector<TermPtr> args = arguments();
    if (lex_.peek().kind == Tok::Other && (lex_.peek().text == "=" || lex_.peek().text == "!")) {
      fail("equality literals are not supported", lex_.peek());
    }
    Literal l;
    l.positive = positive;
    l.predicate = intern(head, SymbolKind::Predicate, static_cast<std::uint32_t>(args.size()));
    l.args = std::move(args);
    out.push_back(std::move(l));
  }

  std::vector<TermPtr> arguments() {
    std::vector<TermPtr> args;
    if (lex_.peek().kind != Tok::LParen) return args;
    lex_.next();
    args.push_back(term());
    while (lex_.peek().kind == Tok::Comma) {
      lex_.next();
      args.push_back(term());
    }
    expect(Tok::RParen, "')'");
    return args;
  }

  TermPtr term() {
    const Token t = lex_.next();
    if (t.kind == Tok::UpperWord) {
      auto [it, inserted] = vars_.try_emplace(t.text, 0);
      if (inserted) it->second = fresh_.take();
      return Term::variable(it->second);
    }
    if (t.kind == Tok::LowerWord || t.kind == Tok::Quoted || t.kind == Tok::Integer) {
      auto args = arguments();
      const auto arity = static_cast<std::uint32_t>(args.size());
      return Term::apply(intern(t, arity == 0 ? SymbolKind::Constant : SymbolKind::Function, arity),
                         std::move(args));
    }
    fail(t.kind == Tok::End ? "expected term, found end of input" : "expected term, found '" + t.text + "'", t);
  }

  SymbolId intern(const Token& at, SymbolKind kind, std::uint32_t arity) {
    try {
      return symbols_.intern(at.text, kind, arity);
    } catch (const ArityConflict& e) {
      fail(e.what(), at);
    }
  }

  Lexer lex_;
  SymbolTable& symbols_;
  FreshVars& fresh_;
  std::unordered_map<std::string, VarId> vars_;
};

bool plain_word(const std::string& s) {
  if (s.empty()) return false;
  const bool lower = std::islower(static_cast<unsigned char>(s[0]));
  const bool digits = std::isdigit(static_cast<unsigned char>(s[0]));
  if (!lower && !digits) return false;
  for (char c : s) {
    if (digits ? !std::isdigit(static_cast<unsigned char>(c))
               : !(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
      return false;
    }
  }
  return true;
}

std::string quote_name(const std::string& s) {
  if (plain_word(s)) return s;
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

void write_term(std::ostringstream& os, const Term& t, const SymbolTable& symbols) {
  if (t.is_variable()) {
    os << 'V' << t.var();
    return;
  }
  os << quote_name(symbols[t.symbol()].name);
  if (t.args().empty()) return;
  os << '(';
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) os << ',';
    write_term(os, *t.args()[i], symbols);
  }
  os << ')';
}

void write_literal(std::ostringstream& os, const Literal& l, const SymbolTable& symbols) {
  if (!l.positive) os << '~';
  os << quote_name(symbols[l.predicate].name);
  if (l.args.empty()) return;
  os << '(';
  for (std::size_t i = 0; i < l.args.size(); ++i) {
    if (i) os << ',';
    write_term(os, *l.args[i], symbols);
  }
  os << ')';
}

}  // namespace

Problem parse_tptp(std::string_view text, std::string name) {
  auto symbols = std::make_shared<SymbolTable>();
  FreshVars fresh;
  Parser parser(text, *symbols, fresh);
  Problem p = parser.problem(std::move(name));
  p.symbols = std::move(symbols);
  return p;
}

Problem parse_tptp_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_tptp(buf.str(), path.stem().string());
}

std::vector<Literal> parse_literals(std::string_view text, SymbolTable& symbols, FreshVars& fresh) {
  Parser parser(text, symbols, fresh);
  return parser.bare_disjunction();
}

std::string to_string(const TermPtr& t, const SymbolTable& symbols) {
  std::ostringstream os;
  write_term(os, *t, symbols);
  return os.str();
}

std::string to_string(const Literal& l, const SymbolTable& symbols) {
  std::ostringstream os;
  write_literal(os, l, symbols);
  return os.str();
}

std::string formula_string(const Clause& c, const SymbolTable& symbols) {
  if (c.literals.empty()) return "$false";
  std::ostringstream os;
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    if (i) os << " | ";
    write_literal(os, c.literals[i], symbols);
  }
  return os.str();
}

std::string to_tptp(const Clause& c, const SymbolTable& symbols) {
  std::string name = c.name.empty() ? "c" + std::to_string(c.id) : quote_name(c.name);
  return "cnf(" + name + ", " + std::string(role_name(c.role)) + ", " + formula_string(c, symbols) + ").";
}

std::string to_tptp(const Problem& p) {
  std::string out;
  for (const Clause* c : p.inputs()) {
    out += to_tptp(*c, *p.symbols);
    out += '\n';
  }
  return out;
}

}  // namespace saturn::fol
