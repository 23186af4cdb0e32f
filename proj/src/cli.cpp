#include "subprod/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "subprod/finite_field.hpp"
#include "subprod/groups.hpp"
#include "subprod/kappa.hpp"
#include "subprod/linalg.hpp"
#include "subprod/product_spaces.hpp"
#include "subprod/search.hpp"

namespace subprod::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Outcome {
  int code = kSuccess;
  json parameters = json::object();
  json results = json::object();
  std::string text;
};

struct Invocation {
  std::vector<std::string> args;
  std::optional<std::uint64_t> seed;
  bool seed_was_given = false;
  std::string format = "text";
};

std::uint64_t resolve_seed(Invocation& inv, const std::optional<std::uint64_t>& given) {
  if (given) {
    inv.seed = given;
    inv.seed_was_given = true;
    return *given;
  }
  const char* ci = std::getenv("CI");
  if (ci != nullptr && *ci != '\0') {
    throw UsageError("--seed is required when CI is set");
  }
  std::random_device rd;
  const std::uint64_t seed = (std::uint64_t{rd()} << 32) | rd();
  inv.seed = seed;
  return seed;
}

FieldPtr make_field(const std::string& spec, const std::string& modulus) {
  const FieldSpec fs = parse_field_spec(spec);
  if (modulus.empty()) return ExtensionField::create(fs.p, fs.n);
  Polynomial poly = parse_polynomial(modulus);
  if (poly.size() != fs.n + 1) {
    throw std::invalid_argument("modulus degree does not match the field " + spec);
  }
  return ExtensionField::create(fs.p, std::move(poly));
}

json coeffs_json(const FieldElement& e) {
  return json(std::vector<Residue>(e.coeffs().begin(), e.coeffs().end()));
}

json field_json(const ExtensionField& field) {
  return {{"p", field.p()},
          {"n", field.n()},
          {"order", field.order()},
          {"modulus", field.modulus()},
          {"primitive", coeffs_json(field.primitive())}};
}

json subspace_json(const Subspace& v) {
  json rows = json::array();
  for (const FieldElement& b : v.basis()) rows.push_back(coeffs_json(b));
  return rows;
}

std::string indent(const std::string& block) {
  std::string out;
  std::istringstream in(block);
  for (std::string line; std::getline(in, line);) out += "  " + line + "\n";
  return out;
}

std::string join(const std::vector<std::uint32_t>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? " " : "") + std::to_string(xs[i]);
  return out;
}

AdmissibleDegreeSet degree_set(std::optional<std::uint64_t> n,
                               const std::vector<std::uint64_t>& degrees) {
  if (degrees.empty()) {
    if (!n) throw UsageError("one of --n or --degrees is required");
    return divisors(*n);
  }
  return AdmissibleDegreeSet(n.value_or(AdmissibleDegreeSet::kInfinite), degrees);
}

void add_format(CLI::App* sub, Invocation& inv, std::vector<std::string> choices) {
  sub->add_option("--format", inv.format, "Output format")
      ->check(CLI::IsMember(std::move(choices)))
      ->capture_default_str();
}

void require_mode(bool exhaustive, const std::optional<std::uint64_t>& trials) {
  if (exhaustive == trials.has_value()) {
    throw UsageError("choose exactly one of --exhaustive or --trials");
  }
}

// kappa ---------------------------------------------------------------------

struct KappaArgs {
  std::uint64_t r = 0, s = 0;
  std::optional<std::uint64_t> n;
  std::vector<std::uint64_t> degrees;
};

Outcome cmd_kappa(const KappaArgs& a) {
  const AdmissibleDegreeSet set = degree_set(a.n, a.degrees);
  const KappaResult k = kappa(KappaQuery(a.r, a.s, set));
  Outcome o;
  o.parameters = {{"r", a.r}, {"s", a.s}, {"degrees", set.degrees()}};
  if (set.is_finite()) o.parameters["n"] = set.n();
  json breakdown = json::array();
  std::ostringstream text;
  text << "kappa(" << a.r << ", " << a.s << ") = " << k.value << "\n"
       << "h0 = " << k.h0 << " (r0 = " << k.r0 << ", s0 = " << k.s0 << ")\n"
       << "h\tf_h\n";
  for (std::uint64_t h : set.degrees()) {
    const std::uint64_t f = f_h(a.r, a.s, h);
    breakdown.push_back({{"h", h}, {"f_h", f}});
    text << h << "\t" << f << "\n";
  }
  o.results = {{"value", k.value}, {"h0", k.h0}, {"r0", k.r0}, {"s0", k.s0},
               {"breakdown", breakdown}};
  o.text = text.str();
  return o;
}

// kappa-table ---------------------------------------------------------------

struct TableArgs {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> degrees;
};

std::string render_table(const std::vector<std::vector<std::uint64_t>>& table, std::uint64_t n,
                         const std::string& format) {
  std::ostringstream out;
  const int width = static_cast<int>(std::to_string(n).size());
  for (const auto& row : table) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (format == "csv") {
        out << (j ? "," : "") << row[j];
      } else {
        out << (j ? " " : "") << std::setw(width) << row[j];
      }
    }
    out << '\n';
  }
  return out.str();
}

Outcome cmd_kappa_table(const TableArgs& a, const std::string& format) {
  if (a.n == 0) throw UsageError("--n must be positive");
  const AdmissibleDegreeSet set = degree_set(a.n, a.degrees);
  const auto table = kappa_table(a.n, set);
  Outcome o;
  o.parameters = {{"n", a.n}, {"degrees", set.degrees()}};
  o.results = {{"table", table}};
  o.text = render_table(table, a.n, format);
  return o;
}

// mu-field ------------------------------------------------------------------

struct SearchArgs {
  unsigned r = 0, s = 0;
  bool exhaustive = false;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  unsigned patience = RandomizedOptions{}.patience;
  std::uint64_t budget = SearchOptions{}.budget;
  unsigned workers = 1;
  bool no_prune = false;
  bool full = false;

  json parameters() const {
    json p = {{"r", r}, {"s", s}, {"workers", workers}, {"prune_at_floor", !no_prune}};
    if (exhaustive) {
      p["mode"] = "exhaustive";
      p["budget"] = budget;
      p["canonicalize"] = !full;
    } else {
      p["mode"] = "randomized";
      p["trials"] = *trials;
      p["patience"] = patience;
    }
    return p;
  }
};

struct FieldArgs {
  std::string field;
  std::string modulus;
};

Outcome cmd_mu_field(Invocation& inv, const FieldArgs& f, const SearchArgs& a) {
  require_mode(a.exhaustive, a.trials);
  const FieldPtr field = make_field(f.field, f.modulus);
  Outcome o;
  o.parameters = a.parameters();
  o.parameters["field"] = field_json(*field);

  FieldMuResult mu{0, Subspace(field), Subspace(field), false};
  if (a.exhaustive) {
    SearchOptions opt;
    opt.budget = a.budget;
    opt.workers = a.workers;
    opt.prune_at_floor = !a.no_prune;
    opt.canonicalize = !a.full;
    o.parameters["estimated_pairs"] = estimated_pairs(field, a.r, a.s, opt.canonicalize);
    mu = mu_exact(field, a.r, a.s, opt);
  } else {
    RandomizedOptions opt;
    opt.trials = *a.trials;
    opt.seed = resolve_seed(inv, a.seed);
    opt.patience = a.patience;
    opt.workers = a.workers;
    opt.prune_at_floor = !a.no_prune;
    mu = mu_randomized(field, a.r, a.s, opt);
  }
  const KappaResult k = kappa(a.r, a.s, divisors(field->n()));
  o.results = {{"value", mu.value},
               {"exhaustive", mu.exhaustive},
               {"kappa", k.value},
               {"witness_a", subspace_json(mu.witness_a)},
               {"witness_b", subspace_json(mu.witness_b)}};
  if (a.exhaustive && !mu.exhaustive) o.code = kBudgetExceeded;

  std::ostringstream text;
  text << (mu.exhaustive ? "mu = " : "mu <= ") << mu.value << "\n"
       << "exhaustive = " << (mu.exhaustive ? "true" : "false") << "\n"
       << "kappa = " << k.value << "\n"
       << "A:\n" << indent(mu.witness_a.to_text()) << "B:\n" << indent(mu.witness_b.to_text());
  o.text = text.str();
  return o;
}

// construct -----------------------------------------------------------------

Outcome cmd_construct(const FieldArgs& f, std::size_t r, std::size_t s) {
  const FieldPtr field = make_field(f.field, f.modulus);
  const OptimalPair pair = optimal_pair(field, r, s);
  const OptimalityCertificate cert = certify_optimal(pair);
  Outcome o;
  o.parameters = {{"field", field_json(*field)}, {"r", r}, {"s", s}};
  o.results = {{"dim_a", pair.a.dim()},
               {"dim_b", pair.b.dim()},
               {"dim_ab", cert.dim_ab},
               {"kappa", cert.kappa},
               {"h0", pair.certificate.h0},
               {"stabilizer_dim", cert.kneser.dim_h},
               {"stabilizer_bound", cert.stabilizer_bound},
               {"slack", cert.kneser.slack},
               {"enlarged_slack", cert.enlarged_kneser.slack},
               {"certified", cert.certified},
               {"witness_a", subspace_json(pair.a)},
               {"witness_b", subspace_json(pair.b)}};
  if (!cert.certified) o.code = kViolation;

  std::ostringstream text;
  text << "dim<AB> = " << cert.dim_ab << "\n"
       << "kappa = " << cert.kappa << " (h0 = " << pair.certificate.h0 << ")\n"
       << "stabilizer dim = " << cert.kneser.dim_h << ", lower bound = "
       << cert.stabilizer_bound << "\n"
       << "kneser slack = " << cert.kneser.slack << "\n"
       << "certified = " << (cert.certified ? "true" : "false") << "\n"
       << "A:\n" << indent(pair.a.to_text()) << "B:\n" << indent(pair.b.to_text());
  o.text = text.str();
  return o;
}

// stabilizer ----------------------------------------------------------------

Outcome cmd_stabilizer(const FieldArgs& f, const std::string& path) {
  const FieldPtr field = make_field(f.field, f.modulus);
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read subspace file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  Subspace v(field);
  try {
    v = Subspace::from_text(field, buffer.str());
  } catch (const std::invalid_argument& e) {
    throw UsageError(path + ": " + e.what());
  }
  if (v.is_zero()) throw UsageError(path + ": the subspace is zero");
  const StabilizerReport st = stabilizer(v);
  const bool is_subfield = field->n() % st.g == 0 &&
                           st.h == subfield_subspace(field, static_cast<unsigned>(st.g));
  Outcome o;
  o.parameters = {{"field", field_json(*field)}, {"subspace", subspace_json(v)}};
  o.results = {{"dim_v", v.dim()},
               {"g", st.g},
               {"h", subspace_json(st.h)},
               {"is_subfield_verified", st.is_subfield_verified},
               {"equals_subfield", is_subfield}};
  if (!st.is_subfield_verified || !is_subfield) o.code = kViolation;
  std::ostringstream text;
  text << "dim V = " << v.dim() << "\n"
       << "g = " << st.g << "\n"
       << "subfield verified = " << (st.is_subfield_verified && is_subfield ? "true" : "false")
       << "\nH:\n" << indent(st.h.to_text());
  o.text = text.str();
  return o;
}

// verify-kneser -------------------------------------------------------------

struct KneserArgs {
  std::optional<std::size_t> r, s;
  std::uint64_t pairs = 1000;
  std::optional<std::uint64_t> seed;
};

Outcome cmd_verify_kneser(Invocation& inv, const FieldArgs& f, const KneserArgs& a) {
  const FieldPtr field = make_field(f.field, f.modulus);
  const std::uint64_t seed = resolve_seed(inv, a.seed);
  const KneserSurvey survey = survey_kneser(field, a.pairs, seed, a.r, a.s);
  Outcome o;
  o.parameters = {{"field", field_json(*field)}, {"pairs", a.pairs}};
  o.parameters["r"] = a.r ? json(*a.r) : json("random");
  o.parameters["s"] = a.s ? json(*a.s) : json("random");
  json histogram = json::object();
  std::ostringstream text;
  text << "pairs = " << survey.pairs << "\n"
       << "violations = " << survey.violations << "\n"
       << "stabilizer failures = " << survey.stabilizer_failures << "\n"
       << "slack\tcount\n";
  for (const auto& [slack, count] : survey.slack_histogram) {
    histogram[std::to_string(slack)] = count;
    text << slack << "\t" << count << "\n";
  }
  o.results = {{"pairs", survey.pairs},
               {"violations", survey.violations},
               {"stabilizer_failures", survey.stabilizer_failures},
               {"slack_histogram", histogram}};
  if (survey.violations > 0 || survey.stabilizer_failures > 0) o.code = kViolation;
  o.text = text.str();
  return o;
}

// mu-group ------------------------------------------------------------------

GroupSpec load_group(const std::string& name, const std::string& file) {
  if (name.empty() == file.empty()) {
    throw UsageError("choose exactly one of --group or --group-file");
  }
  if (!name.empty()) return builtin_group(name);
  std::ifstream in(file);
  if (!in) throw UsageError("cannot read group file " + file);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return GroupSpec::from_json(buffer.str());
}

Outcome cmd_mu_group(Invocation& inv, const GroupSpec& group, const SearchArgs& a) {
  require_mode(a.exhaustive, a.trials);
  Outcome o;
  o.parameters = a.parameters();
  o.parameters["group"] = {{"name", group.name()},
                           {"order", group.order()},
                           {"abelian", group.is_abelian()},
                           {"subgroup_orders", group.subgroup_orders()}};
  GroupMuResult mu;
  if (a.exhaustive) {
    SearchOptions opt;
    opt.budget = a.budget;
    opt.workers = a.workers;
    opt.prune_at_floor = !a.no_prune;
    opt.canonicalize = !a.full;
    o.parameters["estimated_pairs"] = estimated_group_pairs(group, a.r, a.s, opt.canonicalize);
    mu = mu_group_exact(group, a.r, a.s, opt);
  } else {
    RandomizedOptions opt;
    opt.trials = *a.trials;
    opt.seed = resolve_seed(inv, a.seed);
    opt.patience = a.patience;
    opt.workers = a.workers;
    opt.prune_at_floor = !a.no_prune;
    mu = mu_group_randomized(group, a.r, a.s, opt);
  }
  const KappaResult k = kappa_group(a.r, a.s, group);
  o.results = {{"value", mu.value},
               {"exhaustive", mu.exhaustive},
               {"kappa", k.value},
               {"witness_a", mu.witness_a},
               {"witness_b", mu.witness_b}};
  if (a.exhaustive && !mu.exhaustive) o.code = kBudgetExceeded;
  std::ostringstream text;
  text << (mu.exhaustive ? "mu = " : "mu <= ") << mu.value << "\n"
       << "exhaustive = " << (mu.exhaustive ? "true" : "false") << "\n"
       << "kappa = " << k.value << "\n"
       << "A = {" << join(mu.witness_a) << "}\n"
       << "B = {" << join(mu.witness_b) << "}\n";
  o.text = text.str();
  return o;
}

void add_search_options(CLI::App* sub, SearchArgs& a) {
  sub->add_option("--r", a.r, "dim A (|A| for groups)")->required();
  sub->add_option("--s", a.s, "dim B (|B| for groups)")->required();
  sub->add_flag("--exhaustive", a.exhaustive, "Search every pair");
  sub->add_option("--trials", a.trials, "Number of randomized trials");
  sub->add_option("--seed", a.seed, "Seed for randomized trials");
  sub->add_option("--patience", a.patience, "Non-improving moves before a trial stops")
      ->capture_default_str();
  sub->add_option("--budget", a.budget, "Maximum pairs for --exhaustive")
      ->capture_default_str();
  sub->add_option("--workers", a.workers, "Worker threads")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
  sub->add_flag("--no-prune", a.no_prune, "Do not stop at the proven lower bound");
  sub->add_flag("--full", a.full, "Search all pairs instead of those with 1 in A and B");
}

void add_field_options(CLI::App* sub, FieldArgs& f) {
  sub->add_option("--field", f.field, "Field as p^n")->required();
  sub->add_option("--modulus", f.modulus,
                  "Monic irreducible modulus, coefficients low to high, comma separated");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Invocation inv;
  inv.args = args;

  CLI::App app{"Extremal dimensions of subspace products in finite field extensions", "subprod"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::function<Outcome()> action;

  KappaArgs kappa_args;
  auto* kappa_cmd = app.add_subcommand("kappa", "Evaluate the kappa bound");
  kappa_cmd->add_option("--r", kappa_args.r)->required();
  kappa_cmd->add_option("--s", kappa_args.s)->required();
  kappa_cmd->add_option("--n", kappa_args.n, "Degree n; degrees are its divisors");
  kappa_cmd->add_option("--degrees", kappa_args.degrees, "Admissible degrees, e.g. 1,2,4")
      ->delimiter(',');
  add_format(kappa_cmd, inv, {"text", "json"});
  kappa_cmd->callback([&] { action = [&] { return cmd_kappa(kappa_args); }; });

  TableArgs table_args;
  auto* table_cmd = app.add_subcommand("kappa-table", "Print the n x n table of kappa");
  table_cmd->add_option("--n", table_args.n)->required();
  table_cmd->add_option("--degrees", table_args.degrees)->delimiter(',');
  add_format(table_cmd, inv, {"text", "csv", "json"});
  table_cmd->callback(
      [&] { action = [&] { return cmd_kappa_table(table_args, inv.format); }; });

  FieldArgs field_args;
  SearchArgs search_args;
  auto* mu_field_cmd = app.add_subcommand("mu-field", "Search for min dim<AB> in GF(p^n)");
  add_field_options(mu_field_cmd, field_args);
  add_search_options(mu_field_cmd, search_args);
  add_format(mu_field_cmd, inv, {"text", "json"});
  mu_field_cmd->callback(
      [&] { action = [&] { return cmd_mu_field(inv, field_args, search_args); }; });

  std::size_t construct_r = 0, construct_s = 0;
  auto* construct_cmd = app.add_subcommand("construct", "Build and certify an optimal pair");
  add_field_options(construct_cmd, field_args);
  construct_cmd->add_option("--r", construct_r)->required();
  construct_cmd->add_option("--s", construct_s)->required();
  add_format(construct_cmd, inv, {"text", "json"});
  construct_cmd->callback(
      [&] { action = [&] { return cmd_construct(field_args, construct_r, construct_s); }; });

  std::string subspace_path;
  auto* stab_cmd = app.add_subcommand("stabilizer", "Stabilizer of a subspace");
  add_field_options(stab_cmd, field_args);
  stab_cmd->add_option("--subspace", subspace_path, "Subspace file, one basis row per line")
      ->required();
  add_format(stab_cmd, inv, {"text", "json"});
  stab_cmd->callback([&] { action = [&] { return cmd_stabilizer(field_args, subspace_path); }; });

  KneserArgs kneser_args;
  auto* kneser_cmd = app.add_subcommand("verify-kneser", "Check the linear Kneser bound");
  add_field_options(kneser_cmd, field_args);
  kneser_cmd->add_option("--r", kneser_args.r, "dim A (random when omitted)");
  kneser_cmd->add_option("--s", kneser_args.s, "dim B (random when omitted)");
  kneser_cmd->add_option("--pairs", kneser_args.pairs)->capture_default_str();
  kneser_cmd->add_option("--seed", kneser_args.seed);
  add_format(kneser_cmd, inv, {"text", "json"});
  kneser_cmd->callback(
      [&] { action = [&] { return cmd_verify_kneser(inv, field_args, kneser_args); }; });

  std::string group_name, group_file;
  SearchArgs group_args;
  auto* group_cmd = app.add_subcommand("mu-group", "Search for min |AB| in a finite group");
  group_cmd->add_option("--group", group_name,
                        "cyclic:n, product:n,m,... or Z7xZ3semidirect");
  group_cmd->add_option("--group-file", group_file, "Group as JSON with a Cayley table");
  add_search_options(group_cmd, group_args);
  add_format(group_cmd, inv, {"text", "json"});
  group_cmd->callback([&] {
    action = [&] {
      return cmd_mu_group(inv, load_group(group_name, group_file), group_args);
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  const auto started = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = action();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  const double elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();

  std::vector<std::string> replay = args;
  if (inv.seed && !inv.seed_was_given) {
    replay.push_back("--seed");
    replay.push_back(std::to_string(*inv.seed));
  }
  const std::string command = app.get_subcommands().front()->get_name();

  if (inv.format == "json") {
    json report = {{"command", command},
                   {"argv", args},
                   {"replay", replay},
                   {"version", kVersion},
                   {"seed", inv.seed ? json(*inv.seed) : json(nullptr)},
                   {"parameters", outcome.parameters},
                   {"results", outcome.results},
                   {"exit_code", outcome.code},
                   {"timing_ms", elapsed_ms}};
    out << report.dump(2) << "\n";
  } else {
    out << outcome.text;
    if (inv.seed && !inv.seed_was_given) err << "seed = " << *inv.seed << "\n";
  }
  if (outcome.code == kBudgetExceeded) {
    err << "budget exceeded: the search covered only part of the pairs\n";
  } else if (outcome.code == kViolation) {
    err << "invariant violation detected\n";
  }
  return outcome.code;
}

}  // namespace subprod::cli
