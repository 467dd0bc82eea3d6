// csplin: exact Horn constraint solving over (Q;+), trichotomy
// classification of quantifier-free constraint languages, and verified
// pp-definability gadgets.
//
// Exit codes: 0 ok/SAT, 1 UNSAT, 2 input error, 3 non-Horn instance,
// 4 gadget verification refuted, 5 oracle disagreement.

#include "csplin/csplin.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace csplin;

constexpr int kExitSat = 0;
constexpr int kExitUnsat = 1;
constexpr int kExitInput = 2;
constexpr int kExitNonHorn = 3;
constexpr int kExitRefuted = 4;
constexpr int kExitDisagree = 5;

struct Options {
  std::optional<Mode> mode;
  std::uint64_t seed = 0;
  std::uint64_t budget = 1'000'000;
  int trials = 200;
  bool witness = false;
  bool check = false;
  bool verify = false;
  std::string format = "text";
  std::string relation;
};

bool structured(const Options& o) { return o.format == "structured"; }

SemanticsConfig sem_config(const Options& o) { return SemanticsConfig{o.budget}; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ParseResult load(const std::string& path, const Options& o) {
  auto r = parse_file(read_file(path), o.mode);
  for (const auto& n : r.notices) std::cerr << "note: " << path << ":" << n << "\n";
  return r;
}

void emit(const StructuredDoc& doc) { std::cout << write_structured(doc); }

std::string trace_line(const CnfFormula& f, const TraceEvent& ev) {
  auto lit = [&](int ci, int li) {
    return print_literal(f.clauses[ci].literals[li], f.variables);
  };
  std::string c = std::to_string(ev.clause);
  switch (ev.kind) {
    case TraceEvent::Kind::UnitPromoted:
      return "promote clause " + c + ": unit " + lit(ev.clause, ev.literal);
    case TraceEvent::Kind::LiteralDeleted:
      return "delete literal " + std::to_string(ev.literal) + " of clause " + c + ": " +
             lit(ev.clause, ev.literal) + " is entailed false";
    case TraceEvent::Kind::ClauseSatisfied:
      return "clause " + c + " satisfied: " + lit(ev.clause, ev.literal) + " is entailed";
    case TraceEvent::Kind::EmptyClause:
      return "clause " + c + " became empty";
    case TraceEvent::Kind::UnitConflict:
      return "unit conflict in clause " + c + ": " + lit(ev.clause, ev.literal) +
             " contradicts the unit system";
  }
  return "";
}

int cmd_solve(const std::string& path, const Options& o) {
  ParseResult pr = load(path, o);
  if (pr.instances.size() != 1) {
    std::cerr << "error: " << path << " must contain exactly one (instance ...)\n";
    return kExitInput;
  }
  const CnfFormula& f = pr.instances.front();
  std::optional<HornInstance> inst;
  try {
    inst.emplace(f);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNonHorn;
  }
  SolveResult res = solve(*inst);
  if (is_sat(res)) {
    const auto& sat = std::get<SatResult>(res);
    bool checked = true;
    if (o.check) checked = f.evaluate(sat.witness) && replay_trace(f, sat.trace, false);
    if (structured(o)) {
      StructuredDoc d;
      d.emplace_back("result", "SAT");
      d.emplace_back("witness_base", sat.witness_base.to_string());
      d.emplace_back("passes", std::to_string(sat.stats.passes));
      if (o.witness)
        for (const auto& v : f.variables)
          d.emplace_back("witness." + v.name, sat.witness.at(v.index).to_string());
      if (o.check) d.emplace_back("check", checked ? "ok" : "failed");
      emit(d);
    } else {
      std::cout << "SAT\n";
      if (o.witness)
        std::cout << "witness: " << print_assignment(sat.witness, f.variables)
                  << " (base " << sat.witness_base.to_string() << ")\n";
      if (o.check) std::cout << "check: " << (checked ? "ok" : "failed") << "\n";
    }
    return checked ? kExitSat : kExitDisagree;
  }
  const auto& unsat = std::get<UnsatResult>(res);
  bool replay_ok = !o.check || replay_trace(f, unsat.trace, true);
  if (structured(o)) {
    StructuredDoc d;
    d.emplace_back("result", "UNSAT");
    for (std::size_t i = 0; i < unsat.trace.size(); ++i)
      d.emplace_back("trace." + std::to_string(i), trace_line(f, unsat.trace[i]));
    if (o.check) d.emplace_back("check", replay_ok ? "ok" : "failed");
    emit(d);
  } else {
    std::cout << "UNSAT\n";
    for (const auto& ev : unsat.trace) std::cout << "  " << trace_line(f, ev) << "\n";
    if (o.check) std::cout << "check: " << (replay_ok ? "ok" : "failed") << "\n";
  }
  return replay_ok ? kExitUnsat : kExitDisagree;
}

int cmd_classify(const std::string& path, const Options& o) {
  ParseResult pr = load(path, o);
  if (pr.language.relations.empty()) {
    std::cerr << "error: " << path << " declares no relations\n";
    return kExitInput;
  }
  ClassifyConfig cfg;
  cfg.sem = sem_config(o);
  cfg.verify.seed = o.seed;
  ClassificationReport rep = classify(pr.language, cfg);
  if (structured(o))
    emit(rep.to_structured());
  else
    std::cout << rep.to_text();
  return kExitSat;
}

const Relation* pick_relation(const ParseResult& pr, const Options& o, const std::string& path) {
  if (pr.language.relations.empty()) {
    std::cerr << "error: " << path << " declares no relations\n";
    return nullptr;
  }
  if (o.relation.empty()) return &pr.language.relations.front();
  const Relation* r = pr.language.find(o.relation);
  if (!r) std::cerr << "error: no relation named '" << o.relation << "' in " << path << "\n";
  return r;
}

int report_gadget(const PpFormula& g, const Relation& target, const Language& lang,
                  const Options& o, StructuredDoc extra = {}) {
  long points = -1;
  if (o.verify) {
    SampleSpec spec;
    spec.seed = o.seed;
    VerifyResult vr = verify_gadget(g, target, lang, spec, sem_config(o));
    if (!is_verified(vr)) {
      const auto& ref = std::get<Refuted>(vr);
      std::string pt;
      for (const auto& x : ref.point) pt += (pt.empty() ? "" : " ") + x.to_string();
      std::cerr << "REFUTED at (" << pt << "): point is "
                << (ref.in_target ? "in the target but not the gadget"
                                  : "in the gadget but not the target")
                << "\n";
      return kExitRefuted;
    }
    points = std::get<Verified>(vr).points_checked;
  }
  if (structured(o)) {
    StructuredDoc d;
    d.emplace_back("gadget", print_pp(g));
    if (points >= 0) d.emplace_back("verified_points", std::to_string(points));
    for (auto& kv : extra) d.push_back(std::move(kv));
    emit(d);
  } else {
    std::cout << print_pp(g) << "\n";
    if (points >= 0) std::cout << "verified: " << points << " points\n";
    for (const auto& [k, v] : extra) std::cout << k << ": " << v << "\n";
  }
  return kExitSat;
}

int cmd_gadget_hyperplane(const std::vector<std::string>& coeff_args, const Options& o) {
  std::vector<Rational> coeffs;
  for (const auto& a : coeff_args) {
    auto r = Rational::try_parse(a);
    if (!r) {
      std::cerr << "error: malformed rational '" << a << "'\n";
      return kExitInput;
    }
    coeffs.push_back(*r);
  }
  if (coeffs.empty()) {
    std::cerr << "error: hyperplane needs at least one coefficient\n";
    return kExitInput;
  }
  PpFormula g = hyperplane_gadget(coeffs);
  return report_gadget(g, fixtures::hyperplane_relation(coeffs), Language{}, o);
}

int cmd_gadget_on_file(const std::string& kind, const std::string& path, const Options& o) {
  ParseResult pr = load(path, o);
  const Relation* r = pick_relation(pr, o, path);
  if (!r) return kExitInput;
  if (kind == "neq") {
    NeqGadget ng = neq_gadget(*r, sem_config(o));
    return report_gadget(ng.formula, fixtures::neq_relation(), pr.language, o,
                         {{"descent_arity", std::to_string(ng.descent_arity)}});
  }
  ReducedForm red = reduce_formula(r->definition, sem_config(o));
  if (kind == "sq") {
    if (pr.language.mode != Mode::Linear) {
      std::cerr << "error: sq gadgets require linear mode\n";
      return kExitInput;
    }
    SqGadget sq = sq_gadget(*r, red.reduced, sem_config(o));
    return report_gadget(sq.formula, fixtures::sd_relation(), pr.language, o,
                         {{"p", detail::tuple_to_string(sq.witness.p)},
                          {"q", detail::tuple_to_string(sq.witness.q)}});
  }
  // affine-sd
  if (pr.language.mode != Mode::Affine) {
    std::cerr << "error: affine-sd gadgets require (mode affine)\n";
    return kExitInput;
  }
  AffineSdGadget sd = affine_sd_gadget(*r, red.reduced, sem_config(o));
  return report_gadget(sd.formula, fixtures::sd_relation(), pr.language, o,
                       {{"via_indep2", sd.via_indep2 ? "1" : "0"}});
}

int cmd_check_file(const std::string& path, const Options& o) {
  ParseResult pr = load(path, o);
  if (pr.instances.size() != 1) {
    std::cerr << "error: " << path << " must contain exactly one (instance ...)\n";
    return kExitInput;
  }
  const CnfFormula& f = pr.instances.front();
  bool oracle_sat = is_sat(sat_cnf(f, sem_config(o)));
  SampleResult sample = sample_oracle(f, o.trials, o.seed);
  std::optional<bool> solver_sat;
  if (is_horn(f)) solver_sat = is_sat(solve(HornInstance(f)));
  bool agree = (!solver_sat || *solver_sat == oracle_sat) && (!sample.found || oracle_sat);
  StructuredDoc d;
  d.emplace_back("sat_cnf", oracle_sat ? "SAT" : "UNSAT");
  d.emplace_back("sample_oracle", sample.found ? "SAT" : "UNKNOWN");
  d.emplace_back("horn_solver", solver_sat ? (*solver_sat ? "SAT" : "UNSAT") : "skipped (not Horn)");
  d.emplace_back("agreement", agree ? "yes" : "NO");
  if (structured(o))
    emit(d);
  else
    for (const auto& [k, v] : d) std::cout << k << ": " << v << "\n";
  return agree ? kExitSat : kExitDisagree;
}

int cmd_check_corpus(const Options& o) {
  std::mt19937_64 rng(o.seed);
  HornGenSpec spec;
  int agreements = 0;
  for (int t = 0; t < o.trials; ++t) {
    CnfFormula f = random_horn_formula(rng, spec);
    bool solver_sat = is_sat(solve(HornInstance(f)));
    bool oracle_sat = is_sat(sat_cnf(f, sem_config(o)));
    SampleResult sample = sample_oracle(f, 50, o.seed + t);
    bool agree = solver_sat == oracle_sat && (!sample.found || oracle_sat);
    if (!agree) {
      std::cerr << "DISAGREEMENT on instance " << t << ": solver "
                << (solver_sat ? "SAT" : "UNSAT") << ", sat_cnf "
                << (oracle_sat ? "SAT" : "UNSAT") << ", sample "
                << (sample.found ? "SAT" : "UNKNOWN") << "\n"
                << print_instance(f) << "\n";
      return kExitDisagree;
    }
    ++agreements;
  }
  std::cout << "agreements: " << agreements << "/" << o.trials << "\n";
  return kExitSat;
}

int cmd_bench(const std::string& sizes_arg, double density, const Options& o) {
  std::vector<int> sizes;
  std::string token;
  std::istringstream ss(sizes_arg);
  while (std::getline(ss, token, ',')) {
    std::size_t dots = token.find("..");
    if (dots != std::string::npos) {
      int from = std::stoi(token.substr(0, dots));
      int to = std::stoi(token.substr(dots + 2));
      for (int n : doubling_sizes(from, to)) sizes.push_back(n);
    } else if (!token.empty()) {
      sizes.push_back(std::stoi(token));
    }
  }
  if (sizes.empty()) {
    std::cerr << "error: no benchmark sizes\n";
    return kExitInput;
  }
  BenchResult res = run_bench(sizes, o.seed, density);
  if (structured(o)) {
    StructuredDoc d;
    for (const auto& p : res.points) {
      std::string key = "size." + std::to_string(p.size);
      d.emplace_back(key + ".literals", std::to_string(p.literals));
      d.emplace_back(key + ".millis", std::to_string(p.millis));
      d.emplace_back(key + ".result", p.sat ? "SAT" : "UNSAT");
    }
    d.emplace_back("slope", std::to_string(res.slope));
    emit(d);
  } else {
    std::cout << "size literals vars millis result\n";
    for (const auto& p : res.points)
      std::cout << p.size << " " << p.literals << " " << p.vars << " " << p.millis << " "
                << (p.sat ? "SAT" : "UNSAT") << "\n";
    std::cout << "slope: " << res.slope << "\n";
  }
  return kExitSat;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact Horn constraint solver and CSP dichotomy classifier over (Q;+)"};
  app.require_subcommand(1);
  Options o;
  if (const char* env = std::getenv("CSPLIN_BUDGET")) o.budget = std::strtoull(env, nullptr, 10);

  std::string mode_arg;
  app.add_option("--mode", mode_arg, "override the file's mode header (linear|affine)");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--budget", o.budget, "branch budget for the complete oracle");
  app.add_option("--trials", o.trials, "sampling / corpus trials");
  app.add_option("--format", o.format, "output format: text|structured")
      ->check(CLI::IsMember({"text", "structured"}));

  std::string file;
  auto* solve_cmd = app.add_subcommand("solve", "decide a Horn instance");
  solve_cmd->fallthrough();
  solve_cmd->add_option("file", file)->required();
  solve_cmd->add_flag("--witness", o.witness, "print the satisfying assignment");
  solve_cmd->add_flag("--check", o.check, "re-verify the witness or replay the trace");

  auto* classify_cmd = app.add_subcommand("classify", "trichotomy verdict for a language");
  classify_cmd->fallthrough();
  classify_cmd->add_option("file", file)->required();

  auto* gadget_cmd = app.add_subcommand("gadget", "emit a pp-definability gadget");
  gadget_cmd->fallthrough();
  std::string kind;
  std::vector<std::string> gadget_args;
  gadget_cmd->add_option("kind", kind, "hyperplane|neq|sq|affine-sd")
      ->required()
      ->check(CLI::IsMember({"hyperplane", "neq", "sq", "affine-sd"}));
  gadget_cmd->add_option("args", gadget_args, "coefficients (hyperplane) or input file");
  gadget_cmd->add_flag("--verify", o.verify, "verify the gadget against its target");
  gadget_cmd->add_option("--relation", o.relation, "relation name within the file");

  auto* check_cmd = app.add_subcommand("check", "cross-run solver against the oracles");
  check_cmd->fallthrough();
  check_cmd->add_option("file", file);

  auto* bench_cmd = app.add_subcommand("bench", "size-vs-time table and log-log slope");
  bench_cmd->fallthrough();
  std::string sizes = "100..6400";
  std::string family = "chain";
  double density = 0.5;
  bench_cmd->add_option("--sizes", sizes, "comma list and/or FROM..TO doubling ranges");
  bench_cmd->add_option("--family", family, "instance family")->check(CLI::IsMember({"chain"}));
  bench_cmd->add_option("--density", density,
                        "fraction of the literal budget in the propagation chain");

  CLI11_PARSE(app, argc, argv);

  if (!mode_arg.empty()) {
    if (mode_arg == "linear")
      o.mode = Mode::Linear;
    else if (mode_arg == "affine")
      o.mode = Mode::Affine;
    else {
      std::cerr << "error: unknown mode '" << mode_arg << "'\n";
      return kExitInput;
    }
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(file, o);
    if (classify_cmd->parsed()) return cmd_classify(file, o);
    if (gadget_cmd->parsed()) {
      if (kind == "hyperplane") return cmd_gadget_hyperplane(gadget_args, o);
      if (gadget_args.size() != 1) {
        std::cerr << "error: gadget " << kind << " needs an input file\n";
        return kExitInput;
      }
      return cmd_gadget_on_file(kind, gadget_args.front(), o);
    }
    if (check_cmd->parsed()) return file.empty() ? cmd_check_corpus(o) : cmd_check_file(file, o);
    if (bench_cmd->parsed()) return cmd_bench(sizes, density, o);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitInput;
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
