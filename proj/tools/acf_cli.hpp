#pragma once

// Command dispatch for the acf tool. run_cli never exits the process, so the
// tests drive it in-process.
//
// Exit codes: 0 true/success, 1 false, 2 input error, 3 resource limit,
// 4 internal inconsistency.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "acf/apps.hpp"
#include "acf/parser.hpp"
#include "acf/polyterm.hpp"
#include "acf/qe.hpp"
#include "acf/semantics.hpp"
#include "acf/structure_io.hpp"
#include "acf/syntax.hpp"

namespace acf::cli {

enum Exit : int { kTrue = 0, kFalse = 1, kInputError = 2, kResourceError = 3, kInternalError = 4 };

using Json = nlohmann::json;

inline Json term_json(const Term& t) {
  switch (t.kind()) {
  case Term::Kind::Variable: return {{"var", t.name()}};
  case Term::Kind::Constant: return {{"const", t.name()}};
  case Term::Kind::Apply: {
    Json args = Json::array();
    for (const auto& a : t.args()) args.push_back(term_json(a));
    return {{"apply", t.name()}, {"args", args}};
  }
  }
  return {};
}

inline Json formula_json(const Formula& f) {
  switch (f.kind()) {
  case Formula::Kind::Eq: return {{"eq", {term_json(f.lhs()), term_json(f.rhs())}}};
  case Formula::Kind::Rel: {
    Json args = Json::array();
    for (const auto& a : f.terms()) args.push_back(term_json(a));
    return {{"rel", f.name()}, {"args", args}};
  }
  case Formula::Kind::Not: return {{"not", formula_json(f.sub())}};
  case Formula::Kind::And: return {{"and", {formula_json(f.left()), formula_json(f.right())}}};
  case Formula::Kind::Or: return {{"or", {formula_json(f.left()), formula_json(f.right())}}};
  case Formula::Kind::Implies: return {{"implies", {formula_json(f.left()), formula_json(f.right())}}};
  case Formula::Kind::Exists: return {{"exists", f.var()}, {"body", formula_json(f.body())}};
  case Formula::Kind::Forall: return {{"forall", f.var()}, {"body", formula_json(f.body())}};
  }
  return {};
}

// S-expression rendering of the tree exactly as parsed.
inline std::string term_sexpr(const Term& t) {
  if (t.kind() != Term::Kind::Apply) return t.name();
  std::string out = "(" + t.name();
  for (const auto& a : t.args()) out += " " + term_sexpr(a);
  return out + ")";
}

inline std::string formula_sexpr(const Formula& f) {
  switch (f.kind()) {
  case Formula::Kind::Eq: return "(= " + term_sexpr(f.lhs()) + " " + term_sexpr(f.rhs()) + ")";
  case Formula::Kind::Rel: {
    std::string out = "(" + f.name();
    for (const auto& a : f.terms()) out += " " + term_sexpr(a);
    return out + ")";
  }
  case Formula::Kind::Not: return "(not " + formula_sexpr(f.sub()) + ")";
  case Formula::Kind::And: return "(and " + formula_sexpr(f.left()) + " " + formula_sexpr(f.right()) + ")";
  case Formula::Kind::Or: return "(or " + formula_sexpr(f.left()) + " " + formula_sexpr(f.right()) + ")";
  case Formula::Kind::Implies: return "(-> " + formula_sexpr(f.left()) + " " + formula_sexpr(f.right()) + ")";
  case Formula::Kind::Exists: return "(exists " + f.var() + " " + formula_sexpr(f.body()) + ")";
  case Formula::Kind::Forall: return "(forall " + f.var() + " " + formula_sexpr(f.body()) + ")";
  }
  return {};
}

inline Json form_json(const ConstructibleForm& form) {
  Json disjuncts = Json::array();
  for (const auto& conj : form.disjuncts()) {
    Json atoms = Json::array();
    for (const auto& a : conj)
      atoms.push_back({{"poly", a.poly.to_string()}, {"sign", a.sign == Sign::Zero ? "= 0" : "!= 0"}});
    disjuncts.push_back(atoms);
  }
  return {{"form", form.to_string()}, {"disjuncts", disjuncts}};
}

inline Json spectrum_json(const CharCondition& c) {
  Json listed = Json::array();
  for (const auto& p : c.listed) listed.push_back(p.get_str());
  return {{"spectrum", c.to_string()},
          {"char0", c.true_in_char0},
          {"mode", c.prime_mode == CharCondition::Mode::OnlyListed ? "only" : "all-except"},
          {"primes", listed}};
}

// One polynomial per line; blank lines and lines starting with '#' are skipped.
inline PolySystem read_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  std::vector<MultiPoly> gens;
  std::string line;
  while (std::getline(in, line)) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    gens.push_back(parse_polynomial(line));
  }
  return PolySystem(std::move(gens));
}

inline Assignment read_assignment(const FiniteStructure& s, const std::vector<std::string>& pairs) {
  Assignment a;
  for (const auto& pair : pairs) {
    const auto eq = pair.find('=');
    if (eq == std::string::npos) throw DomainError("assignment '" + pair + "' is not var=element");
    const std::string var = pair.substr(0, eq), elem = pair.substr(eq + 1);
    auto e = s.find(elem);
    if (!e) throw DomainError("'" + elem + "' is not in the universe");
    a[var] = *e;
  }
  return a;
}

inline std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + xs[i];
  return out;
}

inline std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return "parse";
  if (dynamic_cast<const SymbolError*>(&e)) return "symbol";
  if (dynamic_cast<const ResourceError*>(&e)) return "resource";
  if (dynamic_cast<const InternalError*>(&e)) return "internal";
  return "domain";
}

// args excludes the program name.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"First-order logic over finite structures and quantifier elimination for algebraically closed fields",
               "acf"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "text";
  std::size_t budget = QeOptions{}.budget;
  app.add_option("--format", format, "Output mode")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--budget", budget, "Step budget for quantifier elimination")->check(CLI::PositiveNumber);

  std::string formula_text, structure_path, other_path, signature_path, system_path, poly_text;
  std::uint64_t characteristic = 0;
  std::vector<std::uint64_t> primes{2, 3, 5, 7, 11, 13};
  std::uint64_t prime_bound = 0;
  std::size_t depth = 1;
  std::vector<std::string> assignment;

  auto* parse = app.add_subcommand("parse", "Parse a formula and report its free variables");
  parse->add_option("formula", formula_text)->required();
  parse->add_option("--signature", signature_path, "Signature file (JSON); ring language by default");

  auto* evaluate = app.add_subcommand("eval", "Evaluate a formula in a finite structure");
  evaluate->add_option("structure", structure_path)->required();
  evaluate->add_option("formula", formula_text)->required();
  evaluate->add_option("-a,--assign", assignment, "var=element for each free variable");

  auto* qe = app.add_subcommand("qe", "Eliminate quantifiers; print a constructible form");
  qe->add_option("formula", formula_text)->required();

  auto* decide_cmd = app.add_subcommand("decide", "Decide a sentence in a given characteristic");
  decide_cmd->add_option("sentence", formula_text)->required();
  decide_cmd->add_option("--char", characteristic, "0 or a prime");

  auto* spectrum = app.add_subcommand("spectrum", "Characteristics in which a sentence holds");
  spectrum->add_option("sentence", formula_text)->required();
  spectrum->add_option("--prime-bound", prime_bound, "Cross-check against finite fields up to this prime");

  auto* nss = app.add_subcommand("nss", "Does a polynomial system have a common zero?");
  nss->add_option("system", system_path, "One polynomial per line")->required();
  nss->add_option("--char", characteristic, "0 or a prime");

  auto* irreducible = app.add_subcommand("irreducible", "Absolute irreducibility across characteristics");
  irreducible->add_option("poly", poly_text)->required();
  irreducible->add_option("--primes", primes, "Primes to check")->delimiter(',');

  auto* minimal = app.add_subcommand("minimal", "Finite or cofinite verdict for a one-variable formula");
  minimal->add_option("formula", formula_text)->required();
  minimal->add_option("--char", characteristic, "0 or a prime");

  auto* equiv = app.add_subcommand("equiv", "Ehrenfeucht-Fraisse equivalence up to a depth");
  equiv->add_option("left", structure_path)->required();
  equiv->add_option("right", other_path)->required();
  equiv->add_option("--depth", depth, "Number of rounds")->check(CLI::PositiveNumber);

  const bool json = std::find(args.begin(), args.end(), "json") != args.end() ||
                    std::find(args.begin(), args.end(), "--format=json") != args.end();
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kTrue;
  } catch (const CLI::ParseError& e) {
    if (json) out << Json{{"error", {{"kind", "usage"}, {"message", e.what()}}}}.dump() << "\n";
    else err << "acf: " << e.what() << "\n";
    return kInputError;
  }

  const QeOptions options{budget};
  const bool as_json = format == "json";
  auto verdict = [&](bool v, Json doc) {
    if (as_json) {
      doc["result"] = v;
      out << doc.dump() << "\n";
    } else {
      out << (v ? "true" : "false") << "\n";
    }
    return v ? kTrue : kFalse;
  };

  try {
    if (parse->parsed()) {
      const Signature sig = signature_path.empty() ? Signature::ring() : load_signature(signature_path);
      const Formula f = parse_formula(formula_text, sig);
      const auto fv = free_vars(f);
      std::vector<std::string> free(fv.begin(), fv.end());
      if (as_json) {
        out << Json{{"ast", formula_json(f)}, {"formula", to_string(f)}, {"sentence", free.empty()}, {"free", free}}
                   .dump()
            << "\n";
      } else {
        out << "ast: " << formula_sexpr(f) << "\n"
            << "formula: " << to_string(f) << "\n"
            << "sentence: " << (free.empty() ? "true" : "false") << "\n"
            << "free: {" << join(free) << "}\n";
      }
      return kTrue;
    }
    if (evaluate->parsed()) {
      const FiniteStructure s = load_structure(structure_path);
      const Formula f = parse_formula(formula_text, s.signature());
      return verdict(eval(s, f, read_assignment(s, assignment)), Json::object());
    }
    if (qe->parsed()) {
      const ConstructibleForm form = eliminate_all(parse_formula(formula_text), options);
      if (as_json) out << form_json(form).dump() << "\n";
      else out << form.to_string() << "\n";
      return kTrue;
    }
    if (decide_cmd->parsed()) {
      check_characteristic(characteristic);
      return verdict(decide(parse_formula(formula_text), characteristic, options),
                     {{"char", characteristic}});
    }
    if (spectrum->parsed()) {
      const Formula s = parse_formula(formula_text);
      CharCondition c;
      Json checks = Json::array();
      if (prime_bound >= 2) {
        const LefschetzReport r = lefschetz_report(s, prime_bound, options);
        c = r.spectrum;
        for (const auto& pc : r.checks) {
          Json o = pc.oracle_verdict ? Json(*pc.oracle_verdict) : Json(nullptr);
          checks.push_back({{"prime", pc.prime}, {"holds", pc.spectrum_verdict}, {"finite_field_check", o}});
        }
      } else {
        c = char_spectrum(s, options);
      }
      if (as_json) {
        Json doc = spectrum_json(c);
        if (prime_bound >= 2) doc["checks"] = checks;
        out << doc.dump() << "\n";
      } else {
        out << c.to_string() << "\n";
      }
      return kTrue;
    }
    if (nss->parsed()) {
      check_characteristic(characteristic);
      const PolySystem sys = read_system(system_path);
      return verdict(nullstellensatz_decide(sys, characteristic, options),
                     {{"char", characteristic}, {"variables", sys.variables}});
    }
    if (irreducible->parsed()) {
      const NoetherOstrowskiReport r = noether_ostrowski_check(parse_polynomial(poly_text), primes, options);
      if (as_json) {
        Json per = Json::array();
        for (auto [p, irr] : r.per_prime) per.push_back({{"prime", p}, {"irreducible", irr}});
        Json doc = spectrum_json(r.spectrum);
        doc["irreducible_char0"] = r.irreducible_char0;
        doc["per_prime"] = per;
        doc["exceptions"] = r.exceptions;
        doc["consistent"] = r.consistent;
        out << doc.dump() << "\n";
      } else {
        out << "char 0: " << (r.irreducible_char0 ? "irreducible" : "reducible") << "\n";
        for (auto [p, irr] : r.per_prime) out << "char " << p << ": " << (irr ? "irreducible" : "reducible") << "\n";
        out << "spectrum: " << r.spectrum.to_string() << "\n";
      }
      if (!r.consistent) {
        err << "acf: sampled verdicts disagree with the spectrum\n";
        return kInternalError;
      }
      return r.irreducible_char0 ? kTrue : kFalse;
    }
    if (minimal->parsed()) {
      check_characteristic(characteristic);
      const MinimalityReport r = strong_minimality_analyze(eliminate_all(parse_formula(formula_text), options),
                                                           characteristic);
      if (as_json)
        out << Json{{"verdict", r.verdict == MinimalityReport::Verdict::Finite ? "finite" : "cofinite"},
                    {"bound", r.bound},
                    {"report", r.to_string()}}
                   .dump()
            << "\n";
      else
        out << r.to_string() << "\n";
      return kTrue;
    }
    if (equiv->parsed()) {
      const FiniteStructure a = load_structure(structure_path), b = load_structure(other_path);
      return verdict(elem_equiv_at_depth(a, b, depth), {{"depth", depth}});
    }
  } catch (const std::exception& e) {
    const std::string kind = error_kind(e);
    int code = kInputError;
    if (kind == "resource") code = kResourceError;
    if (kind == "internal") code = kInternalError;
    if (as_json) out << Json{{"error", {{"kind", kind}, {"message", e.what()}}}}.dump() << "\n";
    else err << "acf: " << kind << " error: " << e.what() << "\n";
    return code;
  }
  return kInputError;
}

} // namespace acf::cli
