#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "npt/datatypes.hpp"
#include "npt/eval.hpp"
#include "npt/surface.hpp"
#include "npt/typecheck.hpp"
#include "support/typed_gen.hpp"

using namespace npt;
using namespace npt::testing;
namespace sf = npt::surface;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const DiagError& e) {
    return e.diag.code;
  }
  return ErrorCode::IoError;  // sentinel: "did not throw"
}

template <class F>
Diagnostic diag_of(F&& f) {
  try {
    f();
  } catch (const DiagError& e) {
    return e.diag;
  }
  return Diagnostic{ErrorCode::IoError, "did not throw", {}, {}};
}

constexpr const char* kFixtureSource = R"(
data Empty : U where
data Unit : U where | tt : Unit
data Sum (A : U) (B : U) : U where
  | inl : A -> Sum A B
  | inr : B -> Sum A B
data Nat : U where | zero : Nat | suc : Nat -> Nat
postulate A0 : U
postulate a0 : A0
postulate n0 : Nm
postulate f0 : Nm -> Nm
)";

const Signature& fixture() {
  static const Signature sig = [] {
    Signature s;
    sf::check_source(s, kFixtureSource, "fixture.npt", 1'000'000);
    return s;
  }();
  return sig;
}

// Elaborate an expression in inference mode against the fixture.
TermPtr infer_text(const std::string& text, const Telescope& gamma = {}) {
  Budget b{1'000'000};
  return sf::elab_infer(fixture(), gamma, sf::parse_expr(text, "test"), b);
}

// Elaborate an expression against an expected type.
TermPtr check_text(const std::string& text, const TermPtr& expected,
                   const Telescope& gamma = {}) {
  Budget b{1'000'000};
  return sf::elab_check(fixture(), gamma, sf::parse_expr(text, "test"), expected, b);
}

std::string pp(const TermPtr& t, const Telescope& gamma = {}) {
  return sf::pretty(fixture(), gamma, t);
}

}  // namespace

// ---- parsing ------------------------------------------------------------

TEST_CASE("empty input parses to an empty file") {
  sf::ParsedFile pf = sf::parse_file("", "empty.npt");
  CHECK(pf.decls.empty());
  CHECK(pf.budget == 0);
}

TEST_CASE("comments and whitespace are skipped") {
  sf::ParsedFile pf = sf::parse_file("-- nothing here\n\n  -- still nothing\n", "c.npt");
  CHECK(pf.decls.empty());
}

TEST_CASE("a def declaration parses with both expressions") {
  sf::ParsedFile pf =
      sf::parse_file("def tighten : Nm -> Nm := \\(n' : Nm). n'", "t.npt");
  REQUIRE(pf.decls.size() == 1);
  CHECK(pf.decls[0].kind == sf::SurfaceDecl::Kind::Def);
  CHECK(pf.decls[0].name == "tighten");
  CHECK(pf.decls[0].type != nullptr);
  CHECK(pf.decls[0].body != nullptr);
}

TEST_CASE("malformed definitions are syntax errors with spans") {
  Diagnostic d = diag_of([] { sf::parse_file("def x : := 3", "bad.npt"); });
  CHECK(d.code == ErrorCode::SyntaxError);
  CHECK(d.span.valid());
  CHECK(d.span.file == "bad.npt");

  CHECK(code_of([] { sf::parse_file("def", "bad.npt"); }) == ErrorCode::SyntaxError);
  CHECK(code_of([] { sf::parse_file("definitely not", "bad.npt"); }) ==
        ErrorCode::SyntaxError);
  CHECK(code_of([] { sf::parse_expr("(a , b", "bad.npt"); }) == ErrorCode::SyntaxError);
  CHECK(code_of([] { sf::parse_expr("A -o B", "bad.npt"); }) == ErrorCode::SyntaxError);
  CHECK(code_of([] { sf::parse_expr("(x : Nm) -o Nm", "bad.npt"); }) ==
        ErrorCode::SyntaxError);
  CHECK(code_of([] { sf::parse_expr("(x : @I) -> Nm", "bad.npt"); }) ==
        ErrorCode::SyntaxError);
}

TEST_CASE("budget pragma is recorded per file") {
  sf::ParsedFile pf = sf::parse_file("{-# budget 5000 #-}\ndef d : Nm := n0", "b.npt");
  CHECK(pf.budget == 5000);
  CHECK(code_of([] { sf::parse_file("{-# budget 0 #-}", "b.npt"); }) ==
        ErrorCode::SyntaxError);
  CHECK(code_of([] { sf::parse_file("{-# frobnicate #-}", "b.npt"); }) ==
        ErrorCode::SyntaxError);
}

TEST_CASE("golden pragma marks the next def and only a def") {
  sf::ParsedFile pf =
      sf::parse_file("{-# golden #-}\ndef d : Nm := n0\ndef e : Nm := n0", "g.npt");
  REQUIRE(pf.decls.size() == 2);
  CHECK(pf.decls[0].golden);
  CHECK_FALSE(pf.decls[1].golden);
  CHECK(code_of([] { sf::parse_file("{-# golden #-}\npostulate p : Nm", "g.npt"); }) ==
        ErrorCode::SyntaxError);
  CHECK(code_of([] { sf::parse_file("{-# golden #-}", "g.npt"); }) ==
        ErrorCode::SyntaxError);
}

TEST_CASE("unicode aliases lex to the ASCII forms") {
  const char* uni =
      "def f : (x : \xF0\x9D\x95\x80) \xE2\x8A\xB8 Nm := \xCE\xBB(x : \xF0\x9D\x95\x80). name x";
  const char* ascii = "def f : (x : @I) -o Nm := \\(x : @I). name x";
  Signature s1 = fixture();
  Signature s2 = fixture();
  sf::check_source(s1, uni, "u.npt", 10'000);
  sf::check_source(s2, ascii, "a.npt", 10'000);
  const Def* d1 = s1.find_def("f");
  const Def* d2 = s2.find_def("f");
  REQUIRE(d1 != nullptr);
  REQUIRE(d2 != nullptr);
  CHECK(alpha_eq(d1->type, d2->type));
  CHECK(alpha_eq(d1->body, d2->body));
}

TEST_CASE("spans point into the source text") {
  Diagnostic d = diag_of([] {
    sf::parse_file("def ok : Nm := n0\ndef bad : Nm := )", "sp.npt");
  });
  CHECK(d.code == ErrorCode::SyntaxError);
  CHECK(d.span.line == 2);
  CHECK(d.span.col == 17);
}

// ---- elaboration: positives ----------------------------------------------

TEST_CASE("a name abstraction elaborates to a bridge lambda over a name") {
  TermPtr t = check_text("\\(x : @I). name x",
                          mk::bridge_pi("x", mk::nm()));
  CHECK(alpha_eq(t, mk::bridge_lam("x", mk::cname(0))));
}

TEST_CASE("binder kinds resolve from the expected type without annotations") {
  TermPtr expected = mk::pi(mk::nm(), "n", mk::bridge_pi("x", mk::nm()));
  TermPtr t = check_text("\\n. \\x. n", expected);
  CHECK(alpha_eq(t, mk::lam(mk::nm(), "n", mk::bridge_lam("x", mk::var(1)))));
}

TEST_CASE("shadowed names resolve to the innermost binder") {
  TermPtr t = check_text("\\(n : Nm). \\(n : Nm). n",
                          mk::arrow(mk::nm(), mk::arrow(mk::nm(), mk::nm())));
  CHECK(alpha_eq(t, mk::lam(mk::nm(), "n", mk::lam(mk::nm(), "n", mk::var(0)))));
}

TEST_CASE("application is left-associative and arrows right-associative") {
  TermPtr t = infer_text("\\(g : Nm -> Nm -> Nm). \\(a : Nm). g a a");
  TermPtr expected_ty = mk::arrow(mk::nm(), mk::arrow(mk::nm(), mk::nm()));
  Budget b{10'000};
  TermPtr ty = infer(fixture(), {}, t, b);
  CHECK(alpha_eq(ty, mk::arrow(expected_ty, mk::arrow(mk::nm(), mk::nm()))));
}

TEST_CASE("a name argument selects bridge application") {
  Telescope g;
  g.push_affine("x");
  g.push_cartesian("b", mk::bridge_pi("y", mk::nm()));
  TermPtr t = infer_text("b x", g);
  CHECK(alpha_eq(t, mk::bridge_app(mk::var(0), 1)));
}

TEST_CASE("constructor parameters come from the expected type") {
  TermPtr sum_ty = mk::data_ref("Sum", {mk::data_ref("Unit"), mk::nm()});
  TermPtr t = check_text("inl tt", sum_ty);
  CHECK(alpha_eq(t, mk::ctor_app("inl", {mk::data_ref("Unit"), mk::nm()},
                                 {mk::ctor_app("tt", {}, {})})));
  TermPtr u = check_text("inr n0", sum_ty);
  CHECK(alpha_eq(u, mk::ctor_app("inr", {mk::data_ref("Unit"), mk::nm()}, {mk::global("n0")})));
}

TEST_CASE("bare constructors of unparameterized data eta-expand") {
  TermPtr t = infer_text("suc");
  CHECK(alpha_eq(t, mk::lam(mk::data_ref("Nat"), "n",
                            mk::ctor_app("suc", {}, {mk::var(0)}))));
  TermPtr z = infer_text("zero");
  CHECK(alpha_eq(z, mk::ctor_app("zero", {}, {})));
}

TEST_CASE("partially applied eliminators eta-expand to full application") {
  TermPtr t = infer_text("elimNat (\\(m : Nat). Nat) zero");
  Budget b{100'000};
  TermPtr ty = infer(fixture(), {}, t, b);
  // Remaining arguments: the suc method and the scrutinee.
  TermPtr w = whnf(fixture(), {}, ty, b);
  CHECK(w->kind == TermKind::Pi);
}

TEST_CASE("a partially applied data former eta-expands") {
  TermPtr t = infer_text("Sum Unit");
  CHECK(alpha_eq(t, mk::lam(mk::universe(), "B",
                            mk::data_ref("Sum", {mk::data_ref("Unit"), mk::var(0)}))));
}

TEST_CASE("eliminator applications compute") {
  Signature s = fixture();
  sf::check_source(s,
                   "def two : Nat := suc (suc zero)\n"
                   "def plus : Nat -> Nat -> Nat := \\(a : Nat). \\(b : Nat). "
                   "elimNat (\\(m : Nat). Nat) b (\\(m : Nat). \\(ih : Nat). suc ih) a\n"
                   "def four : Nat := plus two two",
                   "plus.npt", 100'000);
  Budget b{100'000};
  TermPtr four = normalize(s, {}, s.find_def("four")->body, Strategy::LeftOuter, b);
  TermPtr expect = mk::ctor_app("zero", {}, {});
  for (int i = 0; i < 4; ++i) expect = mk::ctor_app("suc", {}, {expect});
  CHECK(alpha_eq(four, expect));
}

TEST_CASE("gel and Gel elaborate with the named name") {
  Telescope g;
  g.push_affine("x");
  TermPtr ty = infer_text("Gel Nm x", g);
  CHECK(alpha_eq(ty, mk::gel_type(mk::nm(), 0)));
  TermPtr t = check_text("gel n0 x", mk::gel_type(mk::nm(), 0), g);
  CHECK(alpha_eq(t, mk::gel_intro(mk::global("n0"), 0)));
}

TEST_CASE("ung over a lambda binds directly; over a bridge it eta-expands") {
  Telescope g;
  g.push_cartesian("h", mk::bridge_pi("p", mk::gel_type(mk::nm(), 0)));
  TermPtr direct = infer_text("ung (\\(z : @I). gel n0 z)", g);
  CHECK(alpha_eq(direct, mk::ung("z", mk::gel_intro(mk::global("n0"), 0))));
  TermPtr eta = infer_text("ung h", g);
  CHECK(alpha_eq(eta, mk::ung("x", mk::bridge_app(mk::var(1), 0))));
}

TEST_CASE("nu is sugar for ung over a name binder") {
  Telescope g;
  TermPtr t = infer_text("nu x. gel n0 x", g);
  CHECK(alpha_eq(t, mk::ung("x", mk::gel_intro(mk::global("n0"), 0))));
}

TEST_CASE("ext elaborates method, name, and argument") {
  Telescope g;
  g.push_affine("x");
  g.push_cartesian("h", mk::gel_type(mk::nm(), 0));  // prefix-relative: x
  TermPtr t = infer_text(
      "ext (\\(g' : (p : @I) -o Gel Nm p). \\(y : @I). ung (\\(z : @I). g' z)) x h", g);
  Budget b{100'000};
  TermPtr ty = infer(fixture(), g, t, b);
  // The extent eliminates the bridge codomain at the supplied name.
  CHECK(alpha_eq(ty, mk::nm()));
}

TEST_CASE("indNm elaborates scrutinee, branches, and motive") {
  Telescope g;
  g.push_affine("x");
  TermPtr t = infer_text("indNm x (name x) n0 (\\g. n0) with motive \\z. Nm", g);
  CHECK(alpha_eq(t, mk::ind_nm(0, mk::cname(0), "z", mk::nm(), mk::global("n0"), "g",
                               mk::global("n0"))));
  Budget b{100'000};
  CHECK(alpha_eq(infer(fixture(), g, t, b), mk::nm()));
}

TEST_CASE("indNm accepts a non-lambda motive by eta-expansion") {
  Telescope g;
  g.push_affine("x");
  g.push_cartesian("M", mk::arrow(mk::nm(), mk::universe()));
  Budget b{200'000};
  TermPtr t = infer_text(
      "\\(base : M (name x)). \\(step : (h : Gel Nm x) -> M "
      "(ext (\\(g' : (p : @I) -o Gel Nm p). \\(y : @I). ung (\\(z : @I). g' z)) x h)). "
      "indNm x (name x) base step with motive M",
      g);
  TermPtr ty = infer(fixture(), g, t, b);
  CHECK(ty != nullptr);
}

TEST_CASE("pairs, projections, Sig, Id, refl, and J elaborate") {
  TermPtr p = check_text("(n0 , f0 n0)",
                          mk::sigma(mk::nm(), "a", mk::nm()));
  CHECK(alpha_eq(p, mk::pair(mk::global("n0"), mk::app(mk::global("f0"), mk::global("n0")))));

  TermPtr f = infer_text("fst (n0 , n0)");
  Budget b{10'000};
  CHECK(alpha_eq(normalize(fixture(), {}, f, Strategy::LeftOuter, b), mk::global("n0")));

  TermPtr r = check_text("refl", mk::id(mk::nm(), mk::global("n0"), mk::global("n0")));
  CHECK(alpha_eq(r, mk::refl()));

  TermPtr j = infer_text(
      "\\(m : Nm). \\(e : Id Nm n0 m). J refl e with motive \\b. \\q. Id Nm b b");
  TermPtr jty = infer(fixture(), {}, j, b);
  CHECK(alpha_eq(jty, mk::pi(mk::nm(), "m",
                             mk::pi(mk::id(mk::nm(), mk::global("n0"), mk::var(0)), "e",
                                    mk::id(mk::nm(), mk::var(1), mk::var(1))))));
}

TEST_CASE("dependent sigma types elaborate through Sig") {
  TermPtr t = infer_text("Sig (X : U). X");
  CHECK(alpha_eq(t, mk::sigma(mk::universe(), "X", mk::var(0))));
  TermPtr pr = check_text("(Nm , n0)", t);
  CHECK(alpha_eq(pr, mk::pair(mk::nm(), mk::global("n0"))));
}

TEST_CASE("multi-name binder groups expand to nested binders") {
  TermPtr t = infer_text("(x y : @I) -o Nm");
  CHECK(alpha_eq(t, mk::bridge_pi("x", mk::bridge_pi("y", mk::nm()))));
  TermPtr u = infer_text("\\(a b : Nm). a");
  CHECK(alpha_eq(u, mk::lam(mk::nm(), "a", mk::lam(mk::nm(), "b", mk::var(1)))));
  TermPtr v = infer_text("(A B : U) -> A -> B");
  CHECK(alpha_eq(v, mk::pi(mk::universe(), "A",
                           mk::pi(mk::universe(), "B",
                                  mk::arrow(mk::var(1), mk::var(0))))));
}

// ---- elaboration: negatives ----------------------------------------------

TEST_CASE("unbound identifiers are reported with their span") {
  Diagnostic d = diag_of([] { infer_text("nonesuch"); });
  CHECK(d.code == ErrorCode::UnboundName);
  CHECK(d.span.valid());
}

TEST_CASE("an unannotated lambda with no expected type is ambiguous") {
  CHECK(code_of([] { infer_text("\\x. x"); }) == ErrorCode::AmbiguousBinderKind);
  CHECK(code_of([] {
          check_text("\\x. x", mk::nm());
        }) == ErrorCode::AmbiguousBinderKind);
}

TEST_CASE("binder kind mismatches are rejected early") {
  CHECK(code_of([] {
          check_text("\\(x : @I). n0", mk::arrow(mk::nm(), mk::nm()));
        }) == ErrorCode::KindMismatch);
  CHECK(code_of([] {
          check_text("\\(n : Nm). n", mk::bridge_pi("x", mk::nm()));
        }) == ErrorCode::KindMismatch);
}

TEST_CASE("a name used as a term is rejected with advice") {
  Telescope g;
  g.push_affine("x");
  Diagnostic d = diag_of([&] { infer_text("f0 x", g); });
  CHECK(d.code == ErrorCode::NotAFunction);
  Diagnostic d2 = diag_of([&] { infer_text("x", g); });
  CHECK(d2.code == ErrorCode::KindMismatch);
  CHECK(d2.message.find("name x") != std::string::npos);
}

TEST_CASE("parameterized constructors in inferring positions need a type") {
  CHECK(code_of([] { infer_text("inl tt"); }) == ErrorCode::TypeMismatch);
}

TEST_CASE("constructor at the wrong expected data type is rejected") {
  CHECK(code_of([] {
          check_text("inl tt", mk::data_ref("Nat"));
        }) == ErrorCode::TypeMismatch);
}

TEST_CASE("gel at a different name than expected is rejected") {
  Telescope g;
  g.push_affine("x");
  g.push_affine("y");
  CHECK(code_of([&] {
          check_text("gel n0 y", mk::gel_type(mk::nm(), 1), g);
        }) == ErrorCode::TypeMismatch);
}

TEST_CASE("annotation mismatches surface as TypeMismatch with spans") {
  Diagnostic d = diag_of([] {
    check_text("\\(u : U). u", mk::arrow(mk::nm(), mk::nm()));
  });
  CHECK(d.code == ErrorCode::TypeMismatch);
  CHECK(d.span.valid());
}

TEST_CASE("kernel errors passing through elaboration acquire spans") {
  Diagnostic d = diag_of([] { infer_text("f0 U") ; });
  CHECK(d.code == ErrorCode::TypeMismatch);
  CHECK(d.span.valid());
}

// ---- declarations through check_source ------------------------------------

TEST_CASE("data declarations check and generate eliminators") {
  Signature s = fixture();
  sf::check_source(s,
                   "data Proc : U where\n"
                   "  | nil : Proc\n"
                   "  | nu : ((x : @I) -o Proc) -> Proc\n"
                   "  | inp : Nm -> ((x : @I) -o Proc) -> Proc",
                   "proc.npt", 100'000);
  CHECK(s.find_data("Proc") != nullptr);
  CHECK(s.find_data_of_elim("elimProc") != nullptr);
  CHECK(s.find_ctor("inp") != nullptr);
}

TEST_CASE("dependent constructor arguments elaborate in order") {
  Signature s = fixture();
  sf::check_source(s,
                   "data W : U where | mk : (n : Nat) -> (p : Id Nat n n) -> W",
                   "w.npt", 100'000);
  const DataDecl* d = s.find_data("W");
  REQUIRE(d != nullptr);
  REQUIRE(d->ctors[0].args.size() == 2);
}

TEST_CASE("constructors must end in the declared data type") {
  Signature s = fixture();
  CHECK(code_of([&] {
          sf::check_source(s, "data B : U where | b : Nat", "b.npt", 100'000);
        }) == ErrorCode::KindMismatch);
}

TEST_CASE("negative occurrences are rejected through the pipeline") {
  Signature s = fixture();
  CHECK(code_of([&] {
          sf::check_source(s, "data B : U where | b : (B -> B) -> B", "neg.npt",
                           100'000);
        }) == ErrorCode::NegativeOccurrence);
}

TEST_CASE("golden flags land on checked definitions") {
  Signature s = fixture();
  sf::check_source(s, "{-# golden #-}\ndef d : Nm := n0", "g.npt", 100'000);
  CHECK(s.find_def("d")->golden);
}

TEST_CASE("the file budget pragma overrides the default") {
  Signature s1 = fixture();
  // A definition whose checking requires reduction: revealing the type of
  // the application forces eliminator steps.
  const char* src =
      "def T : U := elimNat (\\(m : Nat). U) Nm (\\(m : Nat). \\(ih : U). ih) "
      "(suc (suc zero))\n"
      "def v : T := n0";
  sf::check_source(s1, src, "ok.npt", 1'000'000);
  CHECK(s1.find_def("v") != nullptr);

  Signature s2 = fixture();
  std::string tiny = std::string("{-# budget 3 #-}\n") + src;
  CHECK(code_of([&] { sf::check_source(s2, tiny, "tiny.npt", 1'000'000); }) ==
        ErrorCode::BudgetExceeded);
}

TEST_CASE("failed declarations keep the earlier ones") {
  Signature s = fixture();
  CHECK(code_of([&] {
          sf::check_source(s, "def good : Nm := n0\ndef bad : Nm := U", "mix.npt",
                           100'000);
        }) == ErrorCode::TypeMismatch);
  CHECK(s.find_def("good") != nullptr);
  CHECK(s.find_def("bad") == nullptr);
}

// ---- pretty-printing -------------------------------------------------------

TEST_CASE("pretty prints the frozen forms") {
  CHECK(pp(mk::lam(mk::nm(), "n", mk::var(0))) == "\\(n : Nm). n");
  CHECK(pp(mk::bridge_lam("x", mk::cname(0))) == "\\(x : @I). name x");
  CHECK(pp(mk::arrow(mk::nm(), mk::nm())) == "Nm -> Nm");
  CHECK(pp(mk::bridge_pi("x", mk::nm())) == "@I -o Nm");
  CHECK(pp(mk::bridge_pi("x", mk::gel_type(mk::nm(), 0))) == "(x : @I) -o Gel Nm x");
  CHECK(pp(mk::pi(mk::universe(), "X", mk::var(0))) == "(X : U) -> X");
  CHECK(pp(mk::ung("z", mk::gel_intro(mk::global("n0"), 0))) ==
        "ung (\\(z : @I). gel n0 z)");
  CHECK(pp(mk::pair(mk::global("n0"), mk::global("n0"))) == "(n0 , n0)");
  CHECK(pp(mk::app(mk::global("f0"), mk::app(mk::global("f0"), mk::global("n0")))) ==
        "f0 (f0 n0)");
  CHECK(pp(mk::ctor_app("suc", {}, {mk::ctor_app("zero", {}, {})})) == "suc zero");
  CHECK(pp(mk::ctor_app("inl", {mk::data_ref("Unit"), mk::nm()},
                        {mk::ctor_app("tt", {}, {})})) == "inl tt");
}

TEST_CASE("missing display names print deterministically") {
  CHECK(pp(mk::bridge_lam("", mk::cname(0))) == "\\(x0 : @I). name x0");
  CHECK(pp(mk::lam(mk::nm(), "", mk::lam(mk::nm(), "", mk::var(1)))) ==
        "\\(x0 : Nm). \\(x1 : Nm). x0");
}

TEST_CASE("colliding display names are ticked") {
  CHECK(pp(mk::lam(mk::nm(), "n", mk::lam(mk::nm(), "n", mk::var(0)))) ==
        "\\(n : Nm). \\(n' : Nm). n'");
  // Keywords and signature names are avoided.
  CHECK(pp(mk::lam(mk::nm(), "fst", mk::var(0))) == "\\(fst' : Nm). fst'");
  CHECK(pp(mk::lam(mk::nm(), "Nat", mk::var(0))) == "\\(Nat' : Nm). Nat'");
}

TEST_CASE("telescopes print with their entry kinds") {
  Telescope g;
  g.push_cartesian("a", mk::nm());
  g.push_affine("x");
  g.push_cartesian("h", mk::gel_type(mk::nm(), 0));
  CHECK(sf::pretty_telescope(fixture(), g) == "(a : Nm) (x : @I) (h : Gel Nm x)");
}

TEST_CASE("declaration printing reproduces def, postulate, and data forms") {
  Signature s = fixture();
  sf::check_source(s, "{-# golden #-}\ndef d : Nm -> Nm := \\(n : Nm). n", "d.npt",
                   100'000);
  CHECK(sf::pretty_def(s, *s.find_def("d")) ==
        "{-# golden #-}\ndef d : Nm -> Nm := \\(n : Nm). n");
  CHECK(sf::pretty_def(s, *s.find_def("n0")) == "postulate n0 : Nm");
  CHECK(sf::pretty_data(s, *s.find_data("Sum")) ==
        "data Sum (A : U) (B : U) : U where\n"
        "  | inl : A -> Sum A B\n"
        "  | inr : B -> Sum A B");
}

// ---- round-trip properties --------------------------------------------------

namespace {

// Pretty-print every declaration of a checked signature slice.
std::string render_decls(const Signature& s, std::size_t from_item) {
  std::string out;
  const auto& items = s.items();
  for (std::size_t i = from_item; i < items.size(); ++i) {
    if (items[i].kind == Signature::Item::Kind::Def)
      out += sf::pretty_def(s, *s.find_def(items[i].name)) + "\n";
    else
      out += sf::pretty_data(s, *s.find_data(items[i].name)) + "\n";
  }
  return out;
}

void roundtrip_source(const std::string& src) {
  Signature base = fixture();
  std::size_t nbase = base.items().size();
  Signature s1 = base;
  sf::check_source(s1, src, "rt1.npt", 1'000'000);
  std::string p1 = render_decls(s1, nbase);

  Signature s2 = base;
  sf::check_source(s2, p1, "rt2.npt", 1'000'000);
  std::string p2 = render_decls(s2, nbase);
  CHECK(p1 == p2);

  // And the elaborated cores agree up to alpha.
  const auto& i1 = s1.items();
  const auto& i2 = s2.items();
  REQUIRE(i1.size() == i2.size());
  for (std::size_t i = nbase; i < i1.size(); ++i) {
    CHECK(i1[i].name == i2[i].name);
    if (i1[i].kind == Signature::Item::Kind::Def) {
      const Def* d1 = s1.find_def(i1[i].name);
      const Def* d2 = s2.find_def(i2[i].name);
      CHECK(alpha_eq(d1->type, d2->type));
      if (d1->body) CHECK(alpha_eq(d1->body, d2->body));
    }
  }
}

}  // namespace

TEST_CASE("declaration round-trip: pretty of reparse equals pretty") {
  roundtrip_source(
      "data Proc : U where\n"
      "  | nil : Proc\n"
      "  | nu : ((x : @I) -o Proc) -> Proc\n"
      "  | inp : Nm -> ((x : @I) -o Proc) -> Proc\n"
      "def forgNm : (A : U) -> (x : @I) -o Gel A x -> A := \\(A : U). \\(x : @I). "
      "\\(h : Gel A x). ext (\\(g' : (p : @I) -o Gel A p). \\(y : @I). "
      "ung (\\(z : @I). g' z)) x h\n"
      "def dup : Nm -> Sum Unit Nm := \\(n : Nm). inr n\n"
      "postulate base : (n : Nat) -> Id Nat n n\n"
      "def useJ : (n : Nat) -> (m : Nat) -> (e : Id Nat n m) -> Id Nat n m := "
      "\\(n : Nat). \\(m : Nat). \\(e : Id Nat n m). "
      "J refl e with motive \\b. \\q. Id Nat n b\n"
      "def useInd : ((x : @I) -o Nm -> Nm) := \\(x : @I). \\(n : Nm). "
      "indNm x n n (\\g. n) with motive \\z. Nm\n"
      "def usePair : Sig (X : U). X := (Nm , n0)\n");
}

TEST_CASE("round-trip on random well-typed terms") {
  Rng rng(9301);
  TypedGen gen(rng, fixture());
  int done = 0;
  for (int round = 0; round < 160; ++round) {
    // Distinct, collision-free entry names keep free variables printable.
    Telescope g;
    int len = rng.below(5);
    for (int i = 0; i < len; ++i) {
      std::string nm = "q" + std::to_string(i);
      if (rng.chance(0.4))
        g.push_affine(nm);
      else
        g.push_cartesian(nm, gen.type(g, 2));
    }
    TermPtr target = gen.type(g, 2);
    TermPtr t = gen.term(g, target, 3);
    if (!t) continue;

    std::string printed = sf::pretty(fixture(), g, t);
    CAPTURE(printed);
    TermPtr back;
    try {
      Budget b{2'000'000};
      back = sf::elab_check(fixture(), g, sf::parse_expr(printed, "rt"), target, b);
    } catch (const DiagError& e) {
      CAPTURE(e.diag.message);
      CHECK(false);
      continue;
    }
    CHECK(alpha_eq(t, back));
    ++done;
  }
  CHECK(done > 100);
}

TEST_CASE("pretty output of random types reparses to alpha-identical types") {
  Rng rng(9302);
  TypedGen gen(rng, fixture());
  for (int round = 0; round < 200; ++round) {
    Telescope g;
    int len = rng.below(4);
    for (int i = 0; i < len; ++i) {
      std::string nm = "r" + std::to_string(i);
      if (rng.chance(0.5))
        g.push_affine(nm);
      else
        g.push_cartesian(nm, gen.type(g, 1));
    }
    TermPtr ty = gen.type(g, 3);
    std::string printed = sf::pretty(fixture(), g, ty);
    CAPTURE(printed);
    Budget b{2'000'000};
    TermPtr back = sf::elab_check(fixture(), g, sf::parse_expr(printed, "rt"),
                                  mk::universe(), b);
    CHECK(alpha_eq(ty, back));
  }
}
