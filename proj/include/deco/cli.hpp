// The decotool front end. `run` is the whole program; main() only forwards
// the standard streams.
//
// Exit codes: 0 when every check passes, 1 when one fails (NOTEQUAL,
// INCONSISTENT, MISMATCH, a disagreement), 2 on usage and input errors.
#pragma once

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "deco/hpc.hpp"
#include "deco/translate.hpp"

namespace deco::cli {

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;  // files, or expressions with --expr
  bool expr = false;
  std::string logic = "exc";
  std::string sig_file;
  int depth = 3;
  int slack = 2;
  int carrier_max = 3;
  std::uint64_t seed = 1;
  int count = 200;
  std::string report;
  bool dump = false;
  bool verify = false;
  bool trace = false;
};

namespace detail {

struct Input {
  Signature sig;
  std::map<std::string, Type> aliases;
  std::optional<FiniteModel> model;
  std::vector<NamedCheck> checks;
  std::vector<std::pair<std::string, Term>> terms;
};

inline Family family(const RunConfig& c) {
  auto f = family_from_name(c.logic);
  if (!f) throw Error("unknown logic '" + c.logic + "' (expected exc, excore or states)");
  return *f;
}

inline Document signature_document(const RunConfig& c) {
  if (!c.sig_file.empty()) return parse_file(c.sig_file);
  Document d;
  d.sig = builtin_signature(family(c));
  return d;
}

// files, or --expr strings over --sig / the builtin signature of --logic
inline std::vector<Input> inputs(const RunConfig& c) {
  std::vector<Input> out;
  if (!c.expr) {
    for (const auto& path : c.inputs) {
      Document d = parse_file(path);
      out.push_back({d.sig, d.aliases, d.model, d.checks, d.terms});
    }
    return out;
  }
  const Document base = signature_document(c);
  Input in{base.sig, base.aliases, base.model, {}, {}};
  int n = 0;
  for (const auto& text : c.inputs) {
    const std::string name = "expr" + std::to_string(++n);
    auto r = parse_expression(text, base.sig, base.aliases);
    if (auto* e = std::get_if<Equation>(&r)) {
      validate(*e, base.sig.family);
      in.checks.push_back({name, *e});
    } else {
      const Term& t = std::get<Term>(r);
      validate(t, base.sig.family);
      in.terms.push_back({name, t});
    }
  }
  out.push_back(std::move(in));
  return out;
}

inline std::vector<FiniteModel> models_for(const Input& in, int carrier_max) {
  if (in.model) return {*in.model};
  return enumerate_models(in.sig, ModelBounds{1, carrier_max, {}});
}

inline Emptiness emptiness_for(const Input& in) {
  return in.model ? model_emptiness(*in.model) : default_emptiness();
}

inline void print_result(std::ostream& out, const std::string& name, const PureReduction& r, Verdict v) {
  out << "RESULT " << name << " " << verdict_name(v) << "\n";
  if (r.kind == PureReduction::Kind::PureEqs)
    for (const auto& e : r.eqs) out << "  pure-eq: " << print(e.lhs) << " == " << print(e.rhs) << "\n";
}

inline void dump_sides(std::ostream& out, const Equation& e, const FiniteModel& m) {
  for (const Term* t : {&e.lhs, &e.rhs}) {
    out << "  denotation " << print(*t) << ":\n";
    std::istringstream lines(dump_denotation(eval(*t, m), m, t->dom, t->cod));
    for (std::string l; std::getline(lines, l);) out << "    " << l << "\n";
  }
}

inline bool passing(Verdict v) { return v == Verdict::Equal || v == Verdict::EmptyDom; }

}  // namespace detail

inline int cmd_check(const RunConfig& c, std::ostream& out) {
  bool ok = true;
  for (const auto& in : detail::inputs(c)) {
    const auto models = detail::models_for(in, c.carrier_max);
    for (const auto& ch : in.checks) {
      const PureReduction r = reduce_to_pure(ch.eq, in.sig, detail::emptiness_for(in));
      const Verdict v = verdict(r, models);
      detail::print_result(out, ch.name, r, v);
      if (c.trace)
        for (const auto& s : r.trace) out << "  step: " << s << "\n";
      if (c.dump && in.model) detail::dump_sides(out, ch.eq, *in.model);
      ok = ok && detail::passing(v);
    }
  }
  return ok ? 0 : 1;
}

inline int cmd_normalize(const RunConfig& c, std::ostream& out) {
  for (const auto& in : detail::inputs(c)) {
    std::vector<std::pair<std::string, Term>> terms = in.terms;
    for (const auto& ch : in.checks) {
      terms.push_back({ch.name + ".lhs", ch.eq.lhs});
      terms.push_back({ch.name + ".rhs", ch.eq.rhs});
    }
    for (const auto& [name, t] : terms) {
      Trace tr;
      out << "NORMAL " << name << " " << print(t) << "\n";
      switch (in.sig.family) {
        case Family::Exc: {
          const auto n = exc::normalize(t, in.sig.P(), &tr);
          out << "  " << (n.kind == exc::Canonical::Kind::Pure ? "pure" : "thrown") << ": "
              << print(n.reify(in.sig.P())) << "\n";
          break;
        }
        case Family::Excore: {
          const Type& p = in.sig.P();
          const auto n = excore::normalize(t, p, &tr);
          out << "  " << n.describe(p) << "\n";
          if (n.kind == excore::Canonical::Kind::Catcher)
            out << "  weak: " << print(t) << " ~~ " << print(compose(n.a, n.u)) << "\n";
          break;
        }
        case Family::States: {
          const Type& v = in.sig.V();
          const auto n = states::normalize(t, v, &tr);
          out << "  " << n.describe(v) << "\n";
          if (n.kind == states::Canonical::Kind::Modifier)
            out << "  weak: " << print(t) << " ~~ "
                << print(states::unit_simplify(compose(n.u, states::reify_accessor(n.a, n.dom, v)))) << "\n";
          break;
        }
      }
      if (c.trace)
        for (const auto& s : tr) out << "  step: " << s << "\n";
    }
  }
  return 0;
}

inline int cmd_translate(const RunConfig& c, std::ostream& out) {
  bool ok = true;
  for (const auto& in : detail::inputs(c)) {
    if (in.sig.family != Family::Exc) throw Error("translate expects a signature with 'logic exc'");
    const Type& p = in.sig.P();
    const Signature core = core_signature(in.sig);
    for (const auto& [name, t] : in.terms) out << "TERM " << name << " " << print(translate(t, p)) << "\n";
    for (const auto& ch : in.checks) {
      const Equation te = translate(ch.eq, p);
      out << "CHECK " << ch.name << " " << print(te) << "\n";
      if (!c.verify) continue;
      std::vector<FiniteModel> models;
      if (in.model) models.push_back(core_model(*in.model));
      else
        for (const auto& m : enumerate_models(in.sig, ModelBounds{1, c.carrier_max, {}}))
          models.push_back(core_model(m));
      const Emptiness empty = in.model ? model_emptiness(*in.model) : default_emptiness();
      const PureReduction r = excore::decide(te, core, empty);
      const Verdict v = verdict(r, models);
      detail::print_result(out, ch.name, r, v);
      ok = ok && detail::passing(v);
    }
  }
  return ok ? 0 : 1;
}

inline int cmd_sweep(const RunConfig& c, std::ostream& out) {
  hpc::SweepConfig sc;
  sc.family = detail::family(c);
  sc.depth = c.depth;
  sc.slack = c.slack;
  sc.carrier_max = c.carrier_max;
  if (!c.sig_file.empty()) {
    sc.sig = parse_file(c.sig_file).sig;
    if (sc.sig->family != sc.family) throw Error("--sig declares a different logic than --logic");
  }
  const hpc::SweepReport rep = hpc::sweep(sc);
  const std::string text = rep.text();
  if (c.report.empty()) {
    out << text;
  } else {
    std::ofstream f(c.report, std::ios::binary);
    if (!f) throw Error("cannot write '" + c.report + "'");
    f << text;
    out << text.substr(text.rfind("WITNESS"));
  }
  return rep.ok() ? 0 : 1;
}

// decider against evaluation: the checks of the inputs, or seeded random
// terms against their canonical forms
inline int cmd_model_check(const RunConfig& c, std::ostream& out) {
  std::size_t bad = 0;
  auto agree = [&](const std::string& name, const Equation& e, const Signature& sig,
                   const std::vector<FiniteModel>& models, bool want_semantic) {
    std::size_t n = 0, fails = 0;
    for (const auto& m : models) {
      ++n;
      const bool sem = sem_holds(e, m);
      if (check(e, sig, m) != sem || (want_semantic && !sem)) ++fails;
    }
    out << "MODELCHECK " << name << " " << (fails ? "DISAGREE" : "AGREE") << " models=" << n
        << " failures=" << fails << "\n";
    bad += fails;
  };
  if (c.inputs.empty()) {
    const Signature sig = c.sig_file.empty() ? builtin_signature(detail::family(c)) : parse_file(c.sig_file).sig;
    const auto models = enumerate_models(sig, ModelBounds{1, c.carrier_max, {}});
    RandomTerms rnd(sig, c.seed);
    for (int i = 0; i < c.count; ++i) {
      const Term t = rnd.next(c.depth);
      Term n;
      switch (sig.family) {
        case Family::Exc: n = exc::normalize(t, sig.P()).reify(sig.P()); break;
        case Family::Excore: n = excore::normalize(t, sig.P()).reify(sig.P()); break;
        case Family::States: n = states::normalize(t, sig.V()).reify(sig.V()); break;
      }
      agree("random" + std::to_string(i + 1) + " " + print(t), Equation{t, n, Strength::Strong}, sig, models, true);
    }
  } else {
    for (const auto& in : detail::inputs(c)) {
      auto models = enumerate_models(in.sig, ModelBounds{1, c.carrier_max, {}});
      if (in.model) models.insert(models.begin(), *in.model);
      for (const auto& ch : in.checks) {
        agree(ch.name, ch.eq, in.sig, models, false);
        if (c.dump && in.model) detail::dump_sides(out, ch.eq, *in.model);
      }
    }
  }
  return bad ? 1 : 0;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decorated logics for exceptions and states: deciders, models and bounded theories",
               "decotool"};
  app.require_subcommand(1);
  RunConfig c;

  auto positive = CLI::PositiveNumber;
  auto* check = app.add_subcommand("check", "decide the checks of DSL files (or --expr equations)");
  auto* normalize = app.add_subcommand("normalize", "canonical forms of terms");
  auto* translate = app.add_subcommand("translate", "translate exc terms and checks into the core language");
  auto* sweep = app.add_subcommand("sweep", "bounded relative-completeness sweep");
  auto* model_check = app.add_subcommand("model-check", "compare the decider with evaluation in finite models");

  for (auto* s : {check, normalize, translate, model_check}) {
    s->add_option("inputs", c.inputs, "DSL files, or expressions with --expr");
    s->add_flag("--expr,-e", c.expr, "inputs are terms or equations, not files");
    s->add_option("--sig", c.sig_file, "DSL file whose signature --expr inputs use")->check(CLI::ExistingFile);
    s->add_option("--carrier-max", c.carrier_max, "largest carrier of the enumerated models")->check(positive);
  }
  for (auto* s : {check, normalize, translate, model_check, sweep})
    s->add_option("--logic", c.logic, "exc, excore or states")->check(CLI::IsMember({"exc", "excore", "states"}));
  check->add_flag("--dump-denotation", c.dump, "print both sides' tables in the file's model");
  check->add_flag("--trace", c.trace, "print the reduction steps");
  normalize->add_flag("--trace", c.trace, "print the rewriting steps");
  translate->add_flag("--verify", c.verify, "decide each translated check in the core logic");
  model_check->add_flag("--dump-denotation", c.dump, "print both sides' tables in the file's model");
  model_check->add_option("--seed", c.seed, "seed of the random terms (without inputs)");
  model_check->add_option("--count", c.count, "number of random terms")->check(positive);
  model_check->add_option("--depth", c.depth, "size budget of the random terms")->check(positive);
  sweep->add_option("--depth", c.depth, "largest equation size")->check(positive);
  sweep->add_option("--slack", c.slack, "extra term size in the saturation universe")->check(CLI::NonNegativeNumber);
  sweep->add_option("--carrier-max", c.carrier_max, "largest carrier of the oracle models")->check(positive);
  sweep->add_option("--report", c.report, "write the report here instead of stdout");
  sweep->add_option("--sig", c.sig_file, "DSL file with the signature to sweep")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "decotool: " << e.what() << "\n";
    return 2;
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    if ((c.command == "check" || c.command == "normalize" || c.command == "translate") && c.inputs.empty())
      throw Error(c.command + " needs at least one input");
    if (c.command == "check") return cmd_check(c, out);
    if (c.command == "normalize") return cmd_normalize(c, out);
    if (c.command == "translate") return cmd_translate(c, out);
    if (c.command == "sweep") return cmd_sweep(c, out);
    return cmd_model_check(c, out);
  } catch (const Error& e) {
    err << "decotool: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace deco::cli
