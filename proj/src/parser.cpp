#include "ctrabs/parser.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace ctrabs::front {

namespace {

enum class Tok {
  Ident, Num, Colon, Semi, Comma, Dot, LParen, RParen, LBrace, RBrace,
  CardOpen, Pipe, Amp, Bang, Plus, Minus, Star, Eq, Lt, Le, Gt, Ge,
  KwParams, KwSorts, KwIntvars, KwArrays, KwCounters, KwInvariant, KwInit,
  KwTrans, KwUnsafe, KwCase, KwForall, KwDiv, KwMod, KwInt, KwBool, KwTrue,
  KwFalse, End,
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Num: return "number";
    case Tok::Colon: return "':'";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::CardOpen: return "'#{'";
    case Tok::Pipe: return "'|'";
    case Tok::Amp: return "'&'";
    case Tok::Bang: return "'!'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Eq: return "'='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::KwParams: return "'params'";
    case Tok::KwSorts: return "'sorts'";
    case Tok::KwIntvars: return "'intvars'";
    case Tok::KwArrays: return "'arrays'";
    case Tok::KwCounters: return "'counters'";
    case Tok::KwInvariant: return "'invariant'";
    case Tok::KwInit: return "'init'";
    case Tok::KwTrans: return "'trans'";
    case Tok::KwUnsafe: return "'unsafe'";
    case Tok::KwCase: return "'case'";
    case Tok::KwForall: return "'forall'";
    case Tok::KwDiv: return "'div'";
    case Tok::KwMod: return "'mod'";
    case Tok::KwInt: return "'int'";
    case Tok::KwBool: return "'bool'";
    case Tok::KwTrue: return "'true'";
    case Tok::KwFalse: return "'false'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok t;
  std::string text;
  bool primed = false;
  Pos pos;
};

const std::map<std::string, Tok> kKeywords = {
    {"params", Tok::KwParams},   {"sorts", Tok::KwSorts},
    {"intvars", Tok::KwIntvars}, {"arrays", Tok::KwArrays},
    {"counters", Tok::KwCounters}, {"invariant", Tok::KwInvariant},
    {"init", Tok::KwInit},       {"trans", Tok::KwTrans},
    {"unsafe", Tok::KwUnsafe},   {"case", Tok::KwCase},
    {"forall", Tok::KwForall},   {"div", Tok::KwDiv},
    {"mod", Tok::KwMod},         {"int", Tok::KwInt},
    {"bool", Tok::KwBool},       {"true", Tok::KwTrue},
    {"false", Tok::KwFalse},
};

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto bump = [&](size_t n) {
    for (size_t j = 0; j < n; ++j) {
      if (text[i + j] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      bump(1);
      continue;
    }
    if (c == '#') {
      if (i + 1 < text.size() && text[i + 1] == '{') {
        out.push_back({Tok::CardOpen, "#{", false, {line, col}});
        bump(2);
        continue;
      }
      while (i < text.size() && text[i] != '\n') bump(1);
      continue;
    }
    Pos pos{line, col};
    if (std::isdigit((unsigned char)c)) {
      size_t j = i;
      while (j < text.size() && std::isdigit((unsigned char)text[j])) ++j;
      out.push_back({Tok::Num, text.substr(i, j - i), false, pos});
      bump(j - i);
      continue;
    }
    if (std::isalpha((unsigned char)c)) {
      size_t j = i;
      while (j < text.size() &&
             (std::isalnum((unsigned char)text[j]) || text[j] == '_'))
        ++j;
      std::string word = text.substr(i, j - i);
      bump(j - i);
      auto kw = kKeywords.find(word);
      if (kw != kKeywords.end()) {
        out.push_back({kw->second, word, false, pos});
        continue;
      }
      bool primed = false;
      if (i < text.size() && text[i] == '\'') {
        primed = true;
        bump(1);
      }
      out.push_back({Tok::Ident, word, primed, pos});
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < text.size() && text[i + 1] == b;
    };
    if (two('<', '=')) {
      out.push_back({Tok::Le, "<=", false, pos});
      bump(2);
      continue;
    }
    if (two('>', '=')) {
      out.push_back({Tok::Ge, ">=", false, pos});
      bump(2);
      continue;
    }
    Tok t;
    switch (c) {
      case ':': t = Tok::Colon; break;
      case ';': t = Tok::Semi; break;
      case ',': t = Tok::Comma; break;
      case '.': t = Tok::Dot; break;
      case '(': t = Tok::LParen; break;
      case ')': t = Tok::RParen; break;
      case '{': t = Tok::LBrace; break;
      case '}': t = Tok::RBrace; break;
      case '|': t = Tok::Pipe; break;
      case '&': t = Tok::Amp; break;
      case '!': t = Tok::Bang; break;
      case '+': t = Tok::Plus; break;
      case '-': t = Tok::Minus; break;
      case '*': t = Tok::Star; break;
      case '=': t = Tok::Eq; break;
      case '<': t = Tok::Lt; break;
      case '>': t = Tok::Gt; break;
      default:
        fail(ErrKind::Syntax, std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back({t, std::string(1, c), false, pos});
    bump(1);
  }
  out.push_back({Tok::End, "", false, {line, col}});
  return out;
}

struct Parser {
  std::vector<Token> toks;
  size_t at = 0;

  const Token& peek(size_t ahead = 0) const {
    return toks[std::min(at + ahead, toks.size() - 1)];
  }
  Token next() { return toks[at == toks.size() - 1 ? at : at++]; }
  bool accept(Tok t) {
    if (peek().t == t) {
      next();
      return true;
    }
    return false;
  }
  Token expect(Tok t, const std::string& what) {
    if (peek().t != t)
      fail(ErrKind::Syntax,
           "expected " + (what.empty() ? tok_name(t) : what) + ", found " +
               tok_name(peek().t),
           peek().pos.line, peek().pos.col);
    return next();
  }

  SExprP mk(SExpr::K k, Pos pos) {
    auto n = std::make_shared<SExpr>();
    n->k = k;
    n->pos = pos;
    return n;
  }

  // precedence: Or < And < Not < Cmp < Add < Mul
  SExprP parse_or() {
    SExprP a = parse_and();
    while (peek().t == Tok::Pipe) {
      Pos pos = peek().pos;
      next();
      SExprP b = parse_and();
      auto n = std::make_shared<SExpr>();
      n->k = SExpr::K::Or;
      n->pos = pos;
      if (a->k == SExpr::K::Or)
        n->kids = a->kids;
      else
        n->kids.push_back(a);
      n->kids.push_back(b);
      a = n;
    }
    return a;
  }

  SExprP parse_and() {
    SExprP a = parse_unary();
    while (peek().t == Tok::Amp) {
      Pos pos = peek().pos;
      next();
      SExprP b = parse_unary();
      auto n = std::make_shared<SExpr>();
      n->k = SExpr::K::And;
      n->pos = pos;
      if (a->k == SExpr::K::And)
        n->kids = a->kids;
      else
        n->kids.push_back(a);
      n->kids.push_back(b);
      a = n;
    }
    return a;
  }

  SExprP parse_unary() {
    if (peek().t == Tok::Bang) {
      Pos pos = next().pos;
      auto n = std::make_shared<SExpr>();
      n->k = SExpr::K::Not;
      n->pos = pos;
      n->kids.push_back(parse_unary());
      return n;
    }
    return parse_cmp();
  }

  SExprP parse_cmp() {
    SExprP a = parse_add();
    Tok t = peek().t;
    if (t == Tok::Eq || t == Tok::Lt || t == Tok::Le || t == Tok::Gt || t == Tok::Ge) {
      Token opTok = next();
      SExprP b = parse_add();
      if (accept(Tok::KwMod)) {
        if (opTok.t != Tok::Eq)
          fail(ErrKind::Syntax, "congruence atoms use '=' before 'mod'", opTok.pos.line,
               opTok.pos.col);
        Token m = expect(Tok::Num, "modulus");
        auto n = mk(SExpr::K::Cong, opTok.pos);
        auto nn = std::const_pointer_cast<SExpr>(n);
        nn->num = Int(m.text);
        nn->kids = {a, b};
        return n;
      }
      auto n = mk(SExpr::K::Cmp, opTok.pos);
      auto nn = std::const_pointer_cast<SExpr>(n);
      nn->op = opTok.text;
      nn->kids = {a, b};
      Tok t2 = peek().t;
      if (t2 == Tok::Eq || t2 == Tok::Lt || t2 == Tok::Le || t2 == Tok::Gt || t2 == Tok::Ge)
        fail(ErrKind::Syntax, "chained comparison", peek().pos.line, peek().pos.col);
      return n;
    }
    return a;
  }

  SExprP parse_add() {
    SExprP a = parse_mul();
    for (;;) {
      Tok t = peek().t;
      if (t != Tok::Plus && t != Tok::Minus) break;
      Token opTok = next();
      SExprP b = parse_mul();
      auto n = mk(t == Tok::Plus ? SExpr::K::Add : SExpr::K::Sub, opTok.pos);
      std::const_pointer_cast<SExpr>(n)->kids = {a, b};
      a = n;
    }
    return a;
  }

  SExprP parse_mul() {
    SExprP a = parse_prim();
    for (;;) {
      Tok t = peek().t;
      if (t != Tok::Star && t != Tok::KwDiv) break;
      Token opTok = next();
      SExprP b = parse_prim();
      auto n = mk(t == Tok::Star ? SExpr::K::Mul : SExpr::K::Div, opTok.pos);
      std::const_pointer_cast<SExpr>(n)->kids = {a, b};
      a = n;
    }
    return a;
  }

  SExprP parse_prim() {
    const Token& tk = peek();
    switch (tk.t) {
      case Tok::Num: {
        next();
        auto n = mk(SExpr::K::Num, tk.pos);
        std::const_pointer_cast<SExpr>(n)->num = Int(tk.text);
        return n;
      }
      case Tok::KwTrue: next(); return mk(SExpr::K::True, tk.pos);
      case Tok::KwFalse: next(); return mk(SExpr::K::False, tk.pos);
      case Tok::Minus: {
        next();
        auto n = mk(SExpr::K::Neg, tk.pos);
        std::const_pointer_cast<SExpr>(n)->kids.push_back(parse_prim());
        return n;
      }
      case Tok::CardOpen: {
        next();
        Token var = expect(Tok::Ident, "cardinality bound variable");
        if (var.primed)
          fail(ErrKind::Syntax, "bound variable cannot be primed", var.pos.line, var.pos.col);
        expect(Tok::Pipe, "'|'");
        SExprP body = parse_or();
        expect(Tok::RBrace, "'}'");
        auto n = mk(SExpr::K::Card, tk.pos);
        auto nn = std::const_pointer_cast<SExpr>(n);
        nn->name = var.text;
        nn->kids.push_back(body);
        return n;
      }
      case Tok::LParen: {
        next();
        SExprP inner = parse_or();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident: {
        Token id = next();
        if (accept(Tok::LParen)) {
          Token var = expect(Tok::Ident, "Proc variable");
          if (var.primed)
            fail(ErrKind::Syntax, "Proc variables cannot be primed", var.pos.line, var.pos.col);
          expect(Tok::RParen, "')'");
          auto n = mk(SExpr::K::Apply, id.pos);
          auto nn = std::const_pointer_cast<SExpr>(n);
          nn->name = id.text;
          nn->primed = id.primed;
          auto arg = mk(SExpr::K::Ident, var.pos);
          std::const_pointer_cast<SExpr>(arg)->name = var.text;
          nn->kids.push_back(arg);
          return n;
        }
        auto n = mk(SExpr::K::Ident, id.pos);
        auto nn = std::const_pointer_cast<SExpr>(n);
        nn->name = id.text;
        nn->primed = id.primed;
        return n;
      }
      default:
        fail(ErrKind::Syntax, std::string("expected expression, found ") + tok_name(tk.t),
             tk.pos.line, tk.pos.col);
    }
  }

  ParsedCase parse_case(bool requireForall) {
    ParsedCase c;
    c.pos = peek().pos;
    if (peek().t == Tok::KwForall) {
      next();
      Token var = expect(Tok::Ident, "bound variable");
      expect(Tok::Dot, "'.'");
      c.forallVar = var.text;
    } else if (requireForall) {
      fail(ErrKind::Syntax, "expected 'forall' to open a case", peek().pos.line, peek().pos.col);
    }
    c.body = parse_or();
    return c;
  }
};

std::string num_list(const std::vector<std::string>& xs, const char* sep) {
  std::string r;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) r += sep;
    r += xs[i];
  }
  return r;
}

} // namespace

ParsedSpec parse_spec(const std::string& text) {
  Parser p{lex(text)};
  ParsedSpec s;
  s.sourceText = text;

  if (p.peek().t != Tok::KwParams)
    fail(ErrKind::Syntax, "expected section 'params'", p.peek().pos.line, p.peek().pos.col);
  p.next();
  p.expect(Tok::Colon, "':'");
  for (;;) {
    Token id = p.expect(Tok::Ident, "parameter name");
    if (id.primed) fail(ErrKind::Syntax, "parameters cannot be primed", id.pos.line, id.pos.col);
    s.params.push_back(id.text);
    if (!p.accept(Tok::Comma)) break;
  }
  p.expect(Tok::Semi, "';'");

  if (p.peek().t != Tok::KwSorts)
    fail(ErrKind::Syntax, "expected section 'sorts'", p.peek().pos.line, p.peek().pos.col);
  p.next();
  p.expect(Tok::Colon, "':'");
  do {
    ParsedSpec::PSort sort;
    Token id = p.expect(Tok::Ident, "sort name");
    sort.name = id.text;
    sort.pos = id.pos;
    p.expect(Tok::Eq, "'='");
    p.expect(Tok::LBrace, "'{'");
    for (;;) {
      Token v = p.expect(Tok::Ident, "sort value");
      sort.values.push_back(v.text);
      if (!p.accept(Tok::Comma)) break;
    }
    p.expect(Tok::RBrace, "'}'");
    p.expect(Tok::Semi, "';'");
    s.sorts.push_back(std::move(sort));
  } while (p.peek().t == Tok::Ident);

  if (p.peek().t == Tok::KwIntvars) {
    p.next();
    p.expect(Tok::Colon, "':'");
    do {
      ParsedSpec::PIntVar iv;
      Token id = p.expect(Tok::Ident, "integer variable name");
      iv.name = id.text;
      iv.pos = id.pos;
      if (p.accept(Tok::Colon)) {
        Token kind = p.next();
        if (kind.t == Tok::KwBool)
          iv.boolSwitch = true;
        else if (kind.t != Tok::KwInt)
          fail(ErrKind::Syntax, "expected 'int' or 'bool'", kind.pos.line, kind.pos.col);
      }
      p.expect(Tok::Semi, "';'");
      s.intvars.push_back(std::move(iv));
    } while (p.peek().t == Tok::Ident);
  }

  if (p.peek().t != Tok::KwArrays)
    fail(ErrKind::Syntax, "expected section 'arrays'", p.peek().pos.line, p.peek().pos.col);
  p.next();
  p.expect(Tok::Colon, "':'");
  do {
    ParsedSpec::PArray arr;
    Token id = p.expect(Tok::Ident, "array name");
    arr.name = id.text;
    arr.pos = id.pos;
    p.expect(Tok::Colon, "':'");
    if (p.accept(Tok::KwInt)) {
      arr.sortName = "int";
    } else {
      Token so = p.expect(Tok::Ident, "sort name or 'int'");
      arr.sortName = so.text;
    }
    p.expect(Tok::Semi, "';'");
    s.arrays.push_back(std::move(arr));
  } while (p.peek().t == Tok::Ident);

  if (p.peek().t != Tok::KwCounters)
    fail(ErrKind::Syntax, "expected section 'counters'", p.peek().pos.line, p.peek().pos.col);
  p.next();
  p.expect(Tok::Colon, "':'");
  do {
    ParsedSpec::PCounter ctr;
    Token id = p.expect(Tok::Ident, "counter name");
    ctr.name = id.text;
    ctr.pos = id.pos;
    p.expect(Tok::Eq, "'='");
    Token open = p.expect(Tok::CardOpen, "'#{'");
    (void)open;
    Token var = p.expect(Tok::Ident, "bound variable");
    ctr.boundVar = var.text;
    p.expect(Tok::Pipe, "'|'");
    ctr.body = p.parse_or();
    p.expect(Tok::RBrace, "'}'");
    p.expect(Tok::Semi, "';'");
    s.counters.push_back(std::move(ctr));
  } while (p.peek().t == Tok::Ident);

  while (p.peek().t == Tok::KwInvariant) {
    p.next();
    p.expect(Tok::Colon, "':'");
    do {
      s.invariantCases.push_back(p.parse_case(true));
      p.expect(Tok::Semi, "';'");
    } while (p.peek().t == Tok::KwForall);
  }

  if (p.peek().t != Tok::KwInit)
    fail(ErrKind::Syntax, "expected section 'init'", p.peek().pos.line, p.peek().pos.col);
  p.next();
  p.expect(Tok::Colon, "':'");
  do {
    s.initCases.push_back(p.parse_case(true));
    p.expect(Tok::Semi, "';'");
  } while (p.peek().t == Tok::KwForall);

  if (p.peek().t != Tok::KwTrans)
    fail(ErrKind::Syntax, "expected section 'trans'", p.peek().pos.line, p.peek().pos.col);
  p.next();
  p.expect(Tok::Colon, "':'");
  while (p.peek().t == Tok::KwCase) {
    p.next();
    s.transCases.push_back(p.parse_case(false));
    p.expect(Tok::Semi, "';'");
  }

  if (p.peek().t != Tok::KwUnsafe)
    fail(ErrKind::Syntax, "expected section 'unsafe'", p.peek().pos.line, p.peek().pos.col);
  p.next();
  p.expect(Tok::Colon, "':'");
  s.unsafe = p.parse_or();
  p.expect(Tok::Semi, "';'");
  p.expect(Tok::End, "end of file");
  return s;
}

SExprP parse_expression(const std::string& text) {
  Parser p{lex(text)};
  SExprP e = p.parse_or();
  p.expect(Tok::End, "end of expression");
  return e;
}

namespace {

// precedence mirror of the parser for printing
int sprec(SExpr::K k) {
  switch (k) {
    case SExpr::K::Or: return 1;
    case SExpr::K::And: return 2;
    case SExpr::K::Not: return 3;
    case SExpr::K::Cmp:
    case SExpr::K::Cong: return 4;
    case SExpr::K::Add:
    case SExpr::K::Sub: return 5;
    case SExpr::K::Mul:
    case SExpr::K::Div: return 6;
    default: return 7;
  }
}

void print_sexpr(const SExprP& e, int parent, std::ostream& os) {
  int prec = sprec(e->k);
  bool paren = prec < parent;
  auto open = [&] {
    if (paren) os << "(";
  };
  auto close = [&] {
    if (paren) os << ")";
  };
  switch (e->k) {
    case SExpr::K::Num: os << e->num.str(); return;
    case SExpr::K::True: os << "true"; return;
    case SExpr::K::False: os << "false"; return;
    case SExpr::K::Ident: os << e->name << (e->primed ? "'" : ""); return;
    case SExpr::K::Apply:
      os << e->name << (e->primed ? "'" : "") << "(" << e->kids[0]->name << ")";
      return;
    case SExpr::K::Card:
      os << "#{" << e->name << " | ";
      print_sexpr(e->kids[0], 0, os);
      os << "}";
      return;
    case SExpr::K::Neg:
      os << "-";
      print_sexpr(e->kids[0], 7, os);
      return;
    case SExpr::K::Add:
    case SExpr::K::Sub:
      open();
      print_sexpr(e->kids[0], prec, os);
      os << (e->k == SExpr::K::Add ? " + " : " - ");
      print_sexpr(e->kids[1], prec + 1, os);
      close();
      return;
    case SExpr::K::Mul:
    case SExpr::K::Div:
      open();
      print_sexpr(e->kids[0], prec, os);
      os << (e->k == SExpr::K::Mul ? "*" : " div ");
      print_sexpr(e->kids[1], prec + 1, os);
      close();
      return;
    case SExpr::K::Cmp:
      open();
      print_sexpr(e->kids[0], prec + 1, os);
      os << " " << e->op << " ";
      print_sexpr(e->kids[1], prec + 1, os);
      close();
      return;
    case SExpr::K::Cong:
      open();
      print_sexpr(e->kids[0], prec + 1, os);
      os << " = ";
      print_sexpr(e->kids[1], prec + 1, os);
      os << " mod " << e->num.str();
      close();
      return;
    case SExpr::K::Not:
      os << "!";
      print_sexpr(e->kids[0], prec + 1, os);
      return;
    case SExpr::K::And:
    case SExpr::K::Or: {
      const char* op = e->k == SExpr::K::And ? " & " : " | ";
      open();
      for (size_t i = 0; i < e->kids.size(); ++i) {
        if (i) os << op;
        print_sexpr(e->kids[i], prec + 1, os);
      }
      close();
      return;
    }
  }
}

void print_case(const ParsedCase& c, std::ostream& os) {
  if (c.forallVar) os << "forall " << *c.forallVar << " . ";
  print_sexpr(c.body, 0, os);
}

} // namespace

std::string print_spec(const ParsedSpec& s) {
  std::ostringstream os;
  os << "params: " << num_list(s.params, ", ") << ";\n";
  os << "sorts:";
  for (const auto& so : s.sorts)
    os << " " << so.name << " = {" << num_list(so.values, ", ") << "};";
  os << "\n";
  if (!s.intvars.empty()) {
    os << "intvars:";
    for (const auto& iv : s.intvars)
      os << " " << iv.name << (iv.boolSwitch ? " : bool" : "") << ";";
    os << "\n";
  }
  os << "arrays:";
  for (const auto& a : s.arrays) os << " " << a.name << " : " << a.sortName << ";";
  os << "\n";
  os << "counters:\n";
  for (const auto& c : s.counters) {
    os << "  " << c.name << " = #{" << c.boundVar << " | ";
    print_sexpr(c.body, 0, os);
    os << "};\n";
  }
  for (const auto& c : s.invariantCases) {
    os << "invariant: ";
    print_case(c, os);
    os << ";\n";
  }
  os << "init: ";
  for (size_t i = 0; i < s.initCases.size(); ++i) {
    if (i) os << " ";
    print_case(s.initCases[i], os);
    os << ";";
  }
  os << "\n";
  os << "trans:\n";
  for (const auto& c : s.transCases) {
    os << "  case ";
    print_case(c, os);
    os << ";\n";
  }
  os << "unsafe: ";
  print_sexpr(s.unsafe, 0, os);
  os << ";\n";
  return os.str();
}

namespace {
bool sexpr_eq(const SExprP& a, const SExprP& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->k != b->k || a->num != b->num || a->name != b->name || a->primed != b->primed ||
      a->op != b->op || a->kids.size() != b->kids.size())
    return false;
  for (size_t i = 0; i < a->kids.size(); ++i)
    if (!sexpr_eq(a->kids[i], b->kids[i])) return false;
  return true;
}
bool case_eq(const ParsedCase& a, const ParsedCase& b) {
  return a.forallVar == b.forallVar && sexpr_eq(a.body, b.body);
}
} // namespace

bool spec_struct_eq(const ParsedSpec& a, const ParsedSpec& b) {
  if (a.params != b.params) return false;
  if (a.sorts.size() != b.sorts.size()) return false;
  for (size_t i = 0; i < a.sorts.size(); ++i)
    if (a.sorts[i].name != b.sorts[i].name || a.sorts[i].values != b.sorts[i].values)
      return false;
  if (a.intvars.size() != b.intvars.size()) return false;
  for (size_t i = 0; i < a.intvars.size(); ++i)
    if (a.intvars[i].name != b.intvars[i].name ||
        a.intvars[i].boolSwitch != b.intvars[i].boolSwitch)
      return false;
  if (a.arrays.size() != b.arrays.size()) return false;
  for (size_t i = 0; i < a.arrays.size(); ++i)
    if (a.arrays[i].name != b.arrays[i].name || a.arrays[i].sortName != b.arrays[i].sortName)
      return false;
  if (a.counters.size() != b.counters.size()) return false;
  for (size_t i = 0; i < a.counters.size(); ++i)
    if (a.counters[i].name != b.counters[i].name ||
        a.counters[i].boundVar != b.counters[i].boundVar ||
        !sexpr_eq(a.counters[i].body, b.counters[i].body))
      return false;
  auto cases_eq = [](const std::vector<ParsedCase>& x, const std::vector<ParsedCase>& y) {
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i)
      if (!case_eq(x[i], y[i])) return false;
    return true;
  };
  return cases_eq(a.invariantCases, b.invariantCases) && cases_eq(a.initCases, b.initCases) &&
         cases_eq(a.transCases, b.transCases) && sexpr_eq(a.unsafe, b.unsafe);
}

} // namespace ctrabs::front
