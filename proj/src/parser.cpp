#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "npt/surface.hpp"

namespace npt::surface {
namespace {

// ---- tokens -----------------------------------------------------------------

enum class Tok {
  Ident,
  Number,
  KwDef,
  KwPostulate,
  KwData,
  KwWhere,
  KwWith,
  KwMotive,
  KwU,
  KwNm,
  KwName,
  KwGelIntro,  // gel
  KwGelType,   // Gel
  KwUng,
  KwExt,
  KwIndNm,
  KwFst,
  KwSnd,
  KwSig,
  KwId,
  KwRefl,
  KwJ,
  LParen,
  RParen,
  Colon,
  ColonEq,
  Arrow,   // ->
  Lolli,   // -o
  AtI,     // @I
  Lambda,  // backslash
  Dot,
  Comma,
  Pipe,
  PragmaOpen,   // {-#
  PragmaClose,  // #-}
  End,
};

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

Tok keyword_of(const std::string& s) {
  if (s == "def") return Tok::KwDef;
  if (s == "postulate") return Tok::KwPostulate;
  if (s == "data") return Tok::KwData;
  if (s == "where") return Tok::KwWhere;
  if (s == "with") return Tok::KwWith;
  if (s == "motive") return Tok::KwMotive;
  if (s == "U") return Tok::KwU;
  if (s == "Nm") return Tok::KwNm;
  if (s == "name") return Tok::KwName;
  if (s == "gel") return Tok::KwGelIntro;
  if (s == "Gel") return Tok::KwGelType;
  if (s == "ung") return Tok::KwUng;
  if (s == "ext") return Tok::KwExt;
  if (s == "indNm") return Tok::KwIndNm;
  if (s == "fst") return Tok::KwFst;
  if (s == "snd") return Tok::KwSnd;
  if (s == "Sig") return Tok::KwSig;
  if (s == "Id") return Tok::KwId;
  if (s == "refl") return Tok::KwRefl;
  if (s == "J") return Tok::KwJ;
  return Tok::Ident;
}

bool ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool ident_cont(char c) {
  return ident_start(c) || (c >= '0' && c <= '9') || c == '\'';
}

// ---- lexer ------------------------------------------------------------------

class Lexer {
 public:
  Lexer(const std::string& text, const std::string& file) : text_(text), file_(file) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      Span sp = here();
      if (eof()) {
        out.push_back({Tok::End, "", sp});
        return out;
      }
      char c = text_[pos_];
      if (ident_start(c)) {
        std::string s = lex_ident();
        out.push_back({keyword_of(s), std::move(s), sp});
        continue;
      }
      if (c >= '0' && c <= '9') {
        std::string s;
        while (!eof() && text_[pos_] >= '0' && text_[pos_] <= '9') s += advance();
        out.push_back({Tok::Number, std::move(s), sp});
        continue;
      }
      // Unicode aliases for the ASCII spellings.
      if (match_bytes("\xE2\x8A\xB8")) { out.push_back({Tok::Lolli, "-o", sp}); continue; }
      if (match_bytes("\xF0\x9D\x95\x80")) { out.push_back({Tok::AtI, "@I", sp}); continue; }
      if (match_bytes("\xCE\xBB")) { out.push_back({Tok::Lambda, "\\", sp}); continue; }
      if (match_bytes("\xE2\x86\x92")) { out.push_back({Tok::Arrow, "->", sp}); continue; }
      if (match_bytes("\xCE\xBD")) { out.push_back({Tok::Ident, "nu", sp}); continue; }
      switch (c) {
        case '(': advance(); out.push_back({Tok::LParen, "(", sp}); continue;
        case ')': advance(); out.push_back({Tok::RParen, ")", sp}); continue;
        case '.': advance(); out.push_back({Tok::Dot, ".", sp}); continue;
        case ',': advance(); out.push_back({Tok::Comma, ",", sp}); continue;
        case '|': advance(); out.push_back({Tok::Pipe, "|", sp}); continue;
        case '\\': advance(); out.push_back({Tok::Lambda, "\\", sp}); continue;
        case ':':
          advance();
          if (!eof() && text_[pos_] == '=') { advance(); out.push_back({Tok::ColonEq, ":=", sp}); }
          else out.push_back({Tok::Colon, ":", sp});
          continue;
        case '-':
          advance();
          if (!eof() && text_[pos_] == '>') { advance(); out.push_back({Tok::Arrow, "->", sp}); continue; }
          if (!eof() && text_[pos_] == 'o') { advance(); out.push_back({Tok::Lolli, "-o", sp}); continue; }
          fail(ErrorCode::SyntaxError, "stray '-' (expected '->', '-o', or a '--' comment)", sp);
        case '@':
          advance();
          if (!eof() && text_[pos_] == 'I') { advance(); out.push_back({Tok::AtI, "@I", sp}); continue; }
          fail(ErrorCode::SyntaxError, "stray '@' (expected '@I')", sp);
        case '{':
          if (match_bytes("{-#")) { out.push_back({Tok::PragmaOpen, "{-#", sp}); continue; }
          fail(ErrorCode::SyntaxError, "stray '{' (expected '{-#')", sp);
        case '#':
          if (match_bytes("#-}")) { out.push_back({Tok::PragmaClose, "#-}", sp}); continue; }
          fail(ErrorCode::SyntaxError, "stray '#' (expected '#-}')", sp);
        default:
          fail(ErrorCode::SyntaxError,
               "unexpected character '" + std::string(1, c) + "'", sp);
      }
    }
  }

 private:
  bool eof() const { return pos_ >= text_.size(); }

  Span here() const { return Span{file_, line_, col_}; }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') { ++line_; col_ = 1; }
    else ++col_;
    return c;
  }

  bool match_bytes(const char* bytes) {
    std::size_t n = std::char_traits<char>::length(bytes);
    if (text_.compare(pos_, n, bytes) != 0) return false;
    for (std::size_t i = 0; i < n; ++i) advance();
    return true;
  }

  std::string lex_ident() {
    std::string s;
    for (;;) {
      if (!eof() && ident_cont(text_[pos_])) { s += advance(); continue; }
      // U+2032 PRIME continues an identifier, so paper-style names lex.
      if (text_.compare(pos_, 3, "\xE2\x80\xB2") == 0) {
        advance(); advance(); advance();
        s += "\xE2\x80\xB2";
        continue;
      }
      return s;
    }
  }

  void skip_trivia() {
    for (;;) {
      while (!eof() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r' ||
                        text_[pos_] == '\n'))
        advance();
      if (!eof() && text_.compare(pos_, 2, "--") == 0) {
        while (!eof() && text_[pos_] != '\n') advance();
        continue;
      }
      return;
    }
  }

  const std::string& text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---- parser -----------------------------------------------------------------

SExprPtr node(SKind k, Span sp, std::string name = {}, std::vector<SExprPtr> kids = {}) {
  auto e = std::make_shared<SExpr>();
  e->kind = k;
  e->span = std::move(sp);
  e->name = std::move(name);
  e->kids = std::move(kids);
  return e;
}

class Parser {
 public:
  Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ParsedFile file() {
    ParsedFile out;
    bool pending_golden = false;
    Span golden_span{};
    while (peek().kind != Tok::End) {
      switch (peek().kind) {
        case Tok::PragmaOpen: {
          auto [key, value, sp] = pragma();
          if (key == "budget") out.budget = value;
          else if (key == "golden") { pending_golden = true; golden_span = sp; }
          else fail(ErrorCode::SyntaxError, "unknown pragma '" + key + "'", sp);
          break;
        }
        case Tok::KwDef: {
          SurfaceDecl d = def_decl();
          d.golden = pending_golden;
          pending_golden = false;
          out.decls.push_back(std::move(d));
          break;
        }
        case Tok::KwPostulate:
        case Tok::KwData: {
          if (pending_golden)
            fail(ErrorCode::SyntaxError, "a golden marker must be followed by a def",
                 golden_span);
          out.decls.push_back(peek().kind == Tok::KwPostulate ? postulate_decl() : data_decl());
          break;
        }
        default:
          fail(ErrorCode::SyntaxError,
               "expected a declaration (def, postulate, data, or a pragma)", peek().span);
      }
    }
    if (pending_golden)
      fail(ErrorCode::SyntaxError, "a golden marker must be followed by a def", golden_span);
    return out;
  }

  SExprPtr whole_expr() {
    SExprPtr e = expr();
    expect(Tok::End, "end of input");
    return e;
  }

 private:
  const Token& peek(int ahead = 0) const {
    std::size_t i = pos_ + static_cast<std::size_t>(ahead);
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k)
      fail(ErrorCode::SyntaxError,
           std::string("expected ") + what + ", found '" +
               (peek().kind == Tok::End ? "end of input" : peek().text) + "'",
           peek().span);
    return take();
  }

  std::string expect_ident(const char* what) { return expect(Tok::Ident, what).text; }

  // ---- declarations ----

  std::tuple<std::string, long long, Span> pragma() {
    Span sp = take().span;  // {-#
    std::string key = expect_ident("a pragma name");
    long long value = 0;
    if (key == "budget") {
      const Token& n = expect(Tok::Number, "a budget value");
      value = std::stoll(n.text);
      if (value <= 0) fail(ErrorCode::SyntaxError, "budget must be positive", n.span);
    }
    expect(Tok::PragmaClose, "'#-}'");
    return {key, value, sp};
  }

  SurfaceDecl def_decl() {
    SurfaceDecl d;
    d.kind = SurfaceDecl::Kind::Def;
    d.span = take().span;  // def
    d.name = expect_ident("a definition name");
    expect(Tok::Colon, "':'");
    d.type = expr();
    expect(Tok::ColonEq, "':='");
    d.body = expr();
    return d;
  }

  SurfaceDecl postulate_decl() {
    SurfaceDecl d;
    d.kind = SurfaceDecl::Kind::Postulate;
    d.span = take().span;
    d.name = expect_ident("a postulate name");
    expect(Tok::Colon, "':'");
    d.type = expr();
    return d;
  }

  SurfaceDecl data_decl() {
    SurfaceDecl d;
    d.kind = SurfaceDecl::Kind::Data;
    d.span = take().span;
    d.name = expect_ident("a data type name");
    while (peek().kind == Tok::LParen) {
      Span sp = take().span;
      std::vector<std::string> names;
      while (peek().kind == Tok::Ident) names.push_back(take().text);
      if (names.empty()) fail(ErrorCode::SyntaxError, "expected a parameter name", peek().span);
      expect(Tok::Colon, "':'");
      SExprPtr ty = expr();
      expect(Tok::RParen, "')'");
      for (auto& n : names) d.params.push_back({std::move(n), ty, sp});
    }
    expect(Tok::Colon, "':'");
    expect(Tok::KwU, "'U' (data types land in U)");
    expect(Tok::KwWhere, "'where'");
    while (peek().kind == Tok::Pipe) {
      Span sp = take().span;
      SurfaceCtorDecl c;
      c.span = sp;
      c.name = expect_ident("a constructor name");
      expect(Tok::Colon, "':'");
      c.type = expr();
      d.ctors.push_back(std::move(c));
    }
    return d;
  }

  // ---- expressions ----

  // True when the upcoming tokens are '(' IDENT+ ':' — a binder group. No
  // other expression form matches that prefix (the grammar has no standalone
  // annotations), so one token of backtracking-free lookahead suffices.
  bool binder_group_ahead() const {
    if (peek().kind != Tok::LParen) return false;
    int i = 1;
    if (peek(i).kind != Tok::Ident) return false;
    while (peek(i).kind == Tok::Ident) ++i;
    return peek(i).kind == Tok::Colon;
  }

  SExprPtr expr() { return arrow_expr(); }

  SExprPtr arrow_expr() {
    // @I -o B
    if (peek().kind == Tok::AtI) {
      Span sp = take().span;
      expect(Tok::Lolli, "'-o' after '@I'");
      return node(SKind::BridgePi, sp, "_", {arrow_expr()});
    }
    // (x y : D) -> B   |   (x y : @I) -o B
    if (binder_group_ahead()) {
      Span sp = peek().span;
      take();  // (
      std::vector<std::string> names;
      while (peek().kind == Tok::Ident) names.push_back(take().text);
      expect(Tok::Colon, "':'");
      bool affine = false;
      SExprPtr dom;
      if (peek().kind == Tok::AtI && peek(1).kind == Tok::RParen) { take(); affine = true; }
      else dom = expr();
      expect(Tok::RParen, "')'");
      if (affine) {
        expect(Tok::Lolli, "'-o' after a name binder");
        SExprPtr body = arrow_expr();
        for (auto it = names.rbegin(); it != names.rend(); ++it)
          body = node(SKind::BridgePi, sp, *it, {body});
        return body;
      }
      expect(Tok::Arrow, "'->' after a binder group");
      SExprPtr body = arrow_expr();
      for (auto it = names.rbegin(); it != names.rend(); ++it)
        body = node(SKind::Pi, sp, *it, {dom, body});
      return body;
    }
    SExprPtr left = app_expr();
    if (peek().kind == Tok::Arrow) {
      Span sp = take().span;
      return node(SKind::Arrow, sp, "", {left, arrow_expr()});
    }
    if (peek().kind == Tok::Lolli)
      fail(ErrorCode::SyntaxError, "the left side of '-o' must be '@I' or '(x : @I)'",
           peek().span);
    return left;
  }

  bool nu_sugar_ahead() const {
    return peek().kind == Tok::Ident && peek().text == "nu" &&
           peek(1).kind == Tok::Ident && peek(2).kind == Tok::Dot;
  }

  bool atom_ahead() const {
    switch (peek().kind) {
      case Tok::Ident:
      case Tok::KwU:
      case Tok::KwNm:
      case Tok::KwRefl:
      case Tok::LParen:
        return true;
      default:
        return false;
    }
  }

  SExprPtr app_expr() {
    // Forms whose body extends maximally to the right cannot take arguments
    // here; when parenthesized they arrive through atom() and apply normally.
    if (nu_sugar_ahead()) return head_form();
    switch (peek().kind) {
      case Tok::Lambda:
      case Tok::KwSig:
      case Tok::KwIndNm:
      case Tok::KwJ:
        return head_form();
      default:
        break;
    }
    SExprPtr head = head_form();
    while (atom_ahead()) head = node(SKind::App, head->span, "", {head, atom()});
    return head;
  }

  SExprPtr head_form() {
    if (nu_sugar_ahead()) {
      Span sp = take().span;  // nu
      std::string x = take().text;
      expect(Tok::Dot, "'.'");
      return node(SKind::NuE, sp, std::move(x), {expr()});
    }
    const Token& t = peek();
    switch (t.kind) {
      case Tok::KwName: {
        Span sp = take().span;
        return node(SKind::NameOf, sp, expect_ident("a name variable after 'name'"));
      }
      case Tok::KwGelType: {
        Span sp = take().span;
        SExprPtr a = atom();
        return node(SKind::GelT, sp, expect_ident("a name variable after 'Gel A'"), {a});
      }
      case Tok::KwGelIntro: {
        Span sp = take().span;
        SExprPtr a = atom();
        return node(SKind::GelI, sp, expect_ident("a name variable after 'gel a'"), {a});
      }
      case Tok::KwUng: {
        Span sp = take().span;
        return node(SKind::UngE, sp, "", {atom()});
      }
      case Tok::KwExt: {
        Span sp = take().span;
        SExprPtr m = atom();
        std::string x = expect_ident("a name variable after the ext method");
        return node(SKind::ExtE, sp, std::move(x), {m, atom()});
      }
      case Tok::KwFst: {
        Span sp = take().span;
        return node(SKind::FstE, sp, "", {atom()});
      }
      case Tok::KwSnd: {
        Span sp = take().span;
        return node(SKind::SndE, sp, "", {atom()});
      }
      case Tok::KwId: {
        Span sp = take().span;
        SExprPtr a = atom();
        SExprPtr l = atom();
        return node(SKind::IdE, sp, "", {a, l, atom()});
      }
      case Tok::KwIndNm: {
        Span sp = take().span;
        std::string x = expect_ident("the name argument of indNm");
        SExprPtr s = atom();
        SExprPtr b0 = atom();
        SExprPtr b1 = atom();
        expect(Tok::KwWith, "'with'");
        expect(Tok::KwMotive, "'motive'");
        return node(SKind::IndNmE, sp, std::move(x), {s, b0, b1, expr()});
      }
      case Tok::KwJ: {
        Span sp = take().span;
        SExprPtr base = atom();
        SExprPtr proof = atom();
        expect(Tok::KwWith, "'with'");
        expect(Tok::KwMotive, "'motive'");
        return node(SKind::JE, sp, "", {base, proof, expr()});
      }
      case Tok::KwSig: {
        Span sp = take().span;
        expect(Tok::LParen, "'('");
        std::vector<std::string> names;
        while (peek().kind == Tok::Ident) names.push_back(take().text);
        if (names.empty()) fail(ErrorCode::SyntaxError, "expected a binder name", peek().span);
        expect(Tok::Colon, "':'");
        SExprPtr dom = expr();
        expect(Tok::RParen, "')'");
        expect(Tok::Dot, "'.'");
        SExprPtr body = expr();
        for (auto it = names.rbegin(); it != names.rend(); ++it)
          body = node(SKind::SigmaE, sp, *it, {dom, body});
        return body;
      }
      case Tok::Lambda:
        return lambda();
      default:
        return atom();
    }
  }

  SExprPtr lambda() {
    Span sp = take().span;  // backslash
    struct Binder {
      std::string name;
      SExprPtr ann;  // null when unannotated
      bool affine = false;
    };
    std::vector<Binder> binders;
    while (peek().kind == Tok::Ident || peek().kind == Tok::LParen) {
      if (peek().kind == Tok::Ident) {
        binders.push_back({take().text, nullptr, false});
        continue;
      }
      take();  // (
      std::vector<std::string> names;
      while (peek().kind == Tok::Ident) names.push_back(take().text);
      if (names.empty()) fail(ErrorCode::SyntaxError, "expected a binder name", peek().span);
      expect(Tok::Colon, "':'");
      bool affine = false;
      SExprPtr ann;
      if (peek().kind == Tok::AtI && peek(1).kind == Tok::RParen) { take(); affine = true; }
      else ann = expr();
      expect(Tok::RParen, "')'");
      for (auto& n : names) binders.push_back({std::move(n), ann, affine});
    }
    if (binders.empty())
      fail(ErrorCode::SyntaxError, "expected a binder after the lambda", peek().span);
    expect(Tok::Dot, "'.'");
    SExprPtr body = expr();
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
      std::vector<SExprPtr> kids;
      if (it->ann) kids.push_back(it->ann);
      kids.push_back(body);
      auto e = std::make_shared<SExpr>();
      e->kind = SKind::Lam;
      e->span = sp;
      e->name = it->name;
      e->kids = std::move(kids);
      e->binder_affine = it->affine;
      e->binder_annotated = it->affine || it->ann != nullptr;
      body = e;
    }
    return body;
  }

  SExprPtr atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident: {
        Span sp = t.span;
        return node(SKind::Ident, sp, take().text);
      }
      case Tok::KwU: return node(SKind::Universe, take().span);
      case Tok::KwNm: return node(SKind::NmType, take().span);
      case Tok::KwRefl: return node(SKind::ReflE, take().span);
      case Tok::LParen: {
        Span sp = take().span;
        SExprPtr first = expr();
        if (peek().kind == Tok::Comma) {
          take();
          SExprPtr second = expr();
          expect(Tok::RParen, "')'");
          return node(SKind::PairE, sp, "", {first, second});
        }
        expect(Tok::RParen, "')'");
        return first;
      }
      default:
        fail(ErrorCode::SyntaxError,
             "expected an expression, found '" +
                 (t.kind == Tok::End ? "end of input" : t.text) + "'",
             t.span);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

ParsedFile parse_file(const std::string& text, const std::string& filename) {
  return Parser(Lexer(text, filename).run()).file();
}

SExprPtr parse_expr(const std::string& text, const std::string& filename) {
  return Parser(Lexer(text, filename).run()).whole_expr();
}

}  // namespace npt::surface
