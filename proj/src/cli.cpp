#include "npt/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "npt/diagnostics.hpp"
#include "npt/eval.hpp"
#include "npt/loader.hpp"
#include "npt/surface.hpp"
#include "npt/typecheck.hpp"

// Where the shipped library lives when NPT_LIB is not set; the build points
// this at the source tree's lib/ directory.
#ifndef NPT_DEFAULT_LIB
#define NPT_DEFAULT_LIB "lib"
#endif

namespace npt {
namespace {

namespace fs = std::filesystem;

struct CliConfig {
  long long budget = 1'000'000;
  bool trace = false;
  bool no_prelude = false;
  bool bless = false;
  std::string diag_format = "text";
  std::string strategy = "lo";
  std::vector<std::string> paths;  // check
  std::string path;                // norm
  std::string name;                // norm
  std::string dir;                 // golden
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError:
      return 2;
    case ErrorCode::BudgetExceeded:
      return 3;
    default:
      return 1;
  }
}

void report(const Diagnostic& d, const CliConfig& cfg, std::ostream& err) {
  err << (cfg.diag_format == "structured" ? d.render_structured() : d.render_text())
      << "\n";
}

std::string read_file_or_fail(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path canon(const std::string& p) {
  std::error_code ec;
  fs::path c = fs::weakly_canonical(p, ec);
  return ec ? fs::path(p) : c;
}

// Load the shipped library into `sig`. Preloading stops before the first
// manifest entry whose resolved path is among `explicit_paths`: those files
// are about to be checked explicitly and must not collide with themselves.
void preload(Signature& sig, const CliConfig& cfg,
             const std::vector<std::string>& explicit_paths, bool with_corpus) {
  const std::string dir = library_dir(NPT_DEFAULT_LIB);
  const auto manifest = read_manifest(dir);
  std::set<fs::path> skip;
  for (const auto& p : explicit_paths) skip.insert(canon(p));
  for (size_t i = 0; i < manifest.size(); ++i) {
    if (!with_corpus && i > 0) break;
    if (skip.count(canon((fs::path(dir) / manifest[i].file).string()))) break;
    load_manifest_entry(sig, dir, manifest[i], cfg.budget);
  }
}

int cmd_check(const CliConfig& cfg, std::ostream& out) {
  Signature sig;
  if (!cfg.no_prelude) preload(sig, cfg, cfg.paths, /*with_corpus=*/false);
  for (const auto& path : cfg.paths) {
    const std::string text = read_file_or_fail(path);
    surface::check_source(sig, text, path, cfg.budget);
    out << "ok " << path << "\n";
  }
  return 0;
}

int cmd_norm(const CliConfig& cfg, std::ostream& out) {
  Signature sig;
  if (!cfg.no_prelude) preload(sig, cfg, {cfg.path}, /*with_corpus=*/false);
  surface::check_source(sig, read_file_or_fail(cfg.path), cfg.path, cfg.budget);
  const Def* d = sig.find_def(cfg.name);
  if (!d) fail(ErrorCode::UnboundName, "no definition named '" + cfg.name + "'");
  if (d->is_postulate())
    fail(ErrorCode::UnboundName, "'" + cfg.name + "' is a postulate and has no body");
  Budget b{cfg.budget};
  ReductionTrace trace;
  TermPtr nf = normalize(sig, {}, d->body, strategy_of_name(cfg.strategy), b,
                         cfg.trace ? &trace : nullptr);
  out << surface::pretty(sig, nf) << "\n";
  if (cfg.trace) {
    out << "-- trace\n";
    for (const auto& step : trace.steps) out << step.rule << "\n";
  }
  return 0;
}

// One golden pair: NAME.npt checked on top of the library, every definition
// marked {-# golden #-} normalized and printed as "NAME = <normal form>".
std::string golden_output(const Signature& base, const CliConfig& cfg,
                          const fs::path& npt_path) {
  Signature sig = base;
  const size_t before = sig.items().size();
  surface::check_source(sig, read_file_or_fail(npt_path.string()), npt_path.string(),
                        cfg.budget);
  std::ostringstream got;
  for (size_t i = before; i < sig.items().size(); ++i) {
    const auto& item = sig.items()[i];
    if (item.kind != Signature::Item::Kind::Def) continue;
    const Def* d = sig.find_def(item.name);
    if (!d->golden || d->is_postulate()) continue;
    Budget b{cfg.budget};
    TermPtr nf = normalize(sig, {}, d->body, strategy_of_name(cfg.strategy), b);
    got << item.name << " = " << surface::pretty(sig, nf) << "\n";
  }
  return got.str();
}

int cmd_golden(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!fs::is_directory(cfg.dir))
    fail(ErrorCode::IoError, "'" + cfg.dir + "' is not a directory");
  std::vector<fs::path> inputs;
  for (const auto& entry : fs::directory_iterator(cfg.dir))
    if (entry.is_regular_file() && entry.path().extension() == ".npt")
      inputs.push_back(entry.path());
  std::sort(inputs.begin(), inputs.end());

  Signature base;
  if (!cfg.no_prelude) preload(base, cfg, {}, /*with_corpus=*/true);

  int failures = 0;
  for (const auto& npt_path : inputs) {
    const std::string stem = npt_path.stem().string();
    fs::path golden_path = npt_path;
    golden_path.replace_extension(".golden");
    std::string got;
    try {
      got = golden_output(base, cfg, npt_path);
    } catch (const DiagError& e) {
      report(e.diag, cfg, err);
      out << "FAIL " << stem << " (did not check)\n";
      ++failures;
      continue;
    }
    if (cfg.bless) {
      std::ofstream o(golden_path, std::ios::binary);
      if (!o) fail(ErrorCode::IoError, "cannot write '" + golden_path.string() + "'");
      o << got;
      out << "blessed " << stem << "\n";
      continue;
    }
    std::ifstream gi(golden_path, std::ios::binary);
    if (!gi) {
      out << "FAIL " << stem << " (missing " << golden_path.filename().string()
          << "; run with --bless to create it)\n";
      ++failures;
      continue;
    }
    std::ostringstream ws;
    ws << gi.rdbuf();
    const std::string want = ws.str();
    if (want == got) {
      out << "ok " << stem << "\n";
    } else {
      out << "FAIL " << stem << "\n--- expected\n"
          << want << "--- got\n"
          << got << "---\n";
      ++failures;
    }
  }
  out << inputs.size() << " cases, " << failures << " failures\n";
  return failures == 0 ? 0 : 1;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool valid_ident(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''))
      return false;
  return true;
}

// ":assume (x : @I)" extends the telescope with an affine entry;
// ":assume (a : TYPE)" with a cartesian one.
void do_assume(const Signature& sig, Telescope& gamma, const std::string& arg,
               long long budget) {
  const std::string s = trim(arg);
  if (s.size() < 2 || s.front() != '(' || s.back() != ')')
    fail(ErrorCode::SyntaxError, "expected (name : @I) or (name : TYPE)");
  const std::string inner = s.substr(1, s.size() - 2);
  const size_t colon = inner.find(':');
  if (colon == std::string::npos)
    fail(ErrorCode::SyntaxError, "expected (name : @I) or (name : TYPE)");
  const std::string name = trim(inner.substr(0, colon));
  const std::string rhs = trim(inner.substr(colon + 1));
  if (!valid_ident(name))
    fail(ErrorCode::SyntaxError, "'" + name + "' is not a valid binder name");
  if (rhs == "@I") {
    gamma.push_affine(name);
  } else {
    Budget b{budget};
    TermPtr ty = surface::elab_check(sig, gamma, surface::parse_expr(rhs, "<repl>"),
                                     mk::universe(), b);
    gamma.push_cartesian(name, ty);
  }
}

int cmd_repl(const CliConfig& cfg, std::istream& in, std::ostream& out,
             std::ostream& err) {
  Signature sig;
  if (!cfg.no_prelude) preload(sig, cfg, {}, /*with_corpus=*/false);
  Telescope gamma;
  std::string line;
  out << "npt> " << std::flush;
  while (std::getline(in, line)) {
    const std::string cmd = trim(line);
    try {
      if (cmd == ":q") break;
      if (cmd.empty()) {
        // fall through to the next prompt
      } else if (cmd == ":ctx") {
        out << (gamma.empty() ? "(empty)" : surface::pretty_telescope(sig, gamma))
            << "\n";
      } else if (cmd.rfind(":t ", 0) == 0) {
        Budget b{cfg.budget};
        TermPtr core =
            surface::elab_infer(sig, gamma, surface::parse_expr(cmd.substr(3), "<repl>"), b);
        out << surface::pretty(sig, gamma, infer(sig, gamma, core, b)) << "\n";
      } else if (cmd.rfind(":n ", 0) == 0) {
        Budget b{cfg.budget};
        TermPtr core =
            surface::elab_infer(sig, gamma, surface::parse_expr(cmd.substr(3), "<repl>"), b);
        out << surface::pretty(
                   sig, gamma,
                   normalize(sig, gamma, core, strategy_of_name(cfg.strategy), b))
            << "\n";
      } else if (cmd.rfind(":def ", 0) == 0) {
        surface::check_source(sig, cmd.substr(5), "<repl>", cfg.budget);
        out << "ok\n";
      } else if (cmd.rfind(":assume ", 0) == 0) {
        do_assume(sig, gamma, cmd.substr(8), cfg.budget);
        out << surface::pretty_telescope(sig, gamma) << "\n";
      } else {
        out << "unknown command; known: :t EXPR, :n EXPR, :def DECL, :ctx, "
               ":assume (x : T), :q\n";
      }
    } catch (const DiagError& e) {
      report(e.diag, cfg, err);
    }
    out << "npt> " << std::flush;
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"proof checker for nullary internally parametric type theory"};
  app.require_subcommand(1);
  app.add_option("--budget", cfg.budget, "reduction step budget (default 1000000)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--no-prelude", cfg.no_prelude, "start from an empty signature");
  app.add_option("--diag-format", cfg.diag_format, "diagnostic format")
      ->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--strategy", cfg.strategy, "redex selection: lo | ri")
      ->check(CLI::IsMember({"lo", "ri"}));

  CLI::App* check = app.add_subcommand("check", "typecheck files in order");
  check->add_option("paths", cfg.paths, "files to check")->required()->expected(-1);
  check->fallthrough();

  CLI::App* norm = app.add_subcommand("norm", "normalize one definition of a file");
  norm->add_option("path", cfg.path, "file to check")->required();
  norm->add_option("name", cfg.name, "definition to normalize")->required();
  norm->add_flag("--trace", cfg.trace, "print fired rule names after the result");
  norm->fallthrough();

  CLI::App* golden = app.add_subcommand("golden", "run a directory of golden tests");
  golden->add_option("dir", cfg.dir, "directory of NAME.npt / NAME.golden pairs")
      ->required();
  golden->add_flag("--bless", cfg.bless, "rewrite the .golden files");
  golden->fallthrough();

  CLI::App* repl = app.add_subcommand("repl", "interactive session");
  repl->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int cli_code = app.exit(e, out, err);
    // Usage problems are I/O-class failures; --help and --version are success.
    return cli_code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return cmd_check(cfg, out);
    if (norm->parsed()) return cmd_norm(cfg, out);
    if (golden->parsed()) return cmd_golden(cfg, out, err);
    return cmd_repl(cfg, in, out, err);
  } catch (const DiagError& e) {
    report(e.diag, cfg, err);
    return exit_code_for(e.diag.code);
  } catch (const std::exception& e) {
    err << "ERROR IoError " << e.what() << "\n";
    return 2;
  }
}

}  // namespace npt
