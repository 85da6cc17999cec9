#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "parisi/desk_oracle.hpp"
#include "parisi/errors.hpp"
#include "parisi/format.hpp"
#include "parisi/functional.hpp"
#include "parisi/mixture.hpp"
#include "parisi/optimizer.hpp"
#include "parisi/order_param.hpp"
#include "parisi/version.hpp"
#include "verify_suite.hpp"

namespace {

using nlohmann::json;
using namespace parisi;

enum Exit { kOk = 0, kVerifyFailed = 1, kConfig = 2, kEvaluation = 3, kExperiment = 4 };

// Raised when a run completed but its outcome is a negative result.
struct ExperimentFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const char* kSkJson = R"({"coeffs": {"2": 0.5}, "h": 0.0})";

struct RunConfig {
  std::string command;
  std::string mixture = kSkJson;
  std::string gamma;
  std::string alpha;
  double beta = 0.0;
  int order = kDefaultNestedOrder;
  int k = 1;
  int kmax = 4;
  int jobs = 1;
  std::uint64_t seed = 1;
  std::size_t budget = 4000;
  int restarts = 1;
  std::string betas = "2,4,8,16";
  double cut = 0.95;
  std::string preset = "default";
  double b_minus_t = 1e-5;
  std::string n_list = "8,12,16,20";
  int samples = 50;
  std::string out;
  bool as_json = false;

  json echo() const {
    json j;
    j["command"] = command;
    j["mixture"] = mixture;
    j["order"] = order;
    j["jobs"] = jobs;
    j["seed"] = seed;
    if (!gamma.empty()) j["gamma"] = gamma;
    if (!alpha.empty()) j["alpha"] = alpha;
    if (beta > 0.0) j["beta"] = beta;
    if (command == "minimize" || command == "beta-sweep") {
      j["k"] = k;
      j["budget"] = budget;
      j["restarts"] = restarts;
    }
    if (command == "escalate") {
      j["kmax"] = kmax;
      j["budget"] = budget;
      j["restarts"] = restarts;
    }
    if (command == "beta-sweep") {
      j["betas"] = betas;
      j["cut"] = cut;
    }
    if (command == "verify") {
      j["preset"] = preset;
      j["b_minus_t"] = b_minus_t;
    }
    if (command == "oracle") {
      j["N"] = n_list;
      j["samples"] = samples;
    }
    return j;
  }

  std::string header() const {
    return std::string("# parisi ") + kVersion + " seed=" + std::to_string(seed) +
           " config=" + echo().dump();
  }
};

MixtureSpec load_mixture(const std::string& arg) {
  std::string text = arg;
  if (text.find('{') == std::string::npos) {
    std::ifstream in(arg);
    if (!in) throw ConfigError("cannot read mixture file " + arg);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return MixtureSpec::from_json(text);
}

template <class Param>
Param checked(const Param& p, const char* what) {
  const auto problems = validate(p);
  if (!problems.empty()) throw ConfigError(std::string(what) + ": " + problems.front());
  return p;
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("not a number: '" + item + "'");
    }
    if (used != item.size()) throw ConfigError("not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_reals(text)) {
    if (v != static_cast<int>(v)) throw ConfigError("not an integer: " + fmt17(v));
    out.push_back(static_cast<int>(v));
  }
  return out;
}

ChainOptions chain_options(const RunConfig& c) {
  ChainOptions o = ChainOptions::with_order(c.order);
  o.jobs = c.jobs;
  return o;
}

OptimOptions optim_options(const RunConfig& c) {
  OptimOptions o;
  o.chain = ChainOptions::with_order(c.order);
  o.budget = c.budget;
  o.restarts = c.restarts;
  o.seed = c.seed;
  o.jobs = c.jobs;
  return o;
}

bool is_json_path(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

// Writes `body` to --out (after the header line) or to stdout.
void emit(const RunConfig& c, const std::string& body) {
  if (c.out.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + c.out);
  f << c.header() << '\n' << body;
}

// JSON bodies keep the header inside the document so the file stays valid JSON.
std::string json_body(const RunConfig& c, const json& result) {
  json header;
  header["version"] = kVersion;
  header["seed"] = c.seed;
  header["config"] = c.echo();
  return "{\"header\": " + header.dump() + ",\n\"result\": " + result.dump(2) + "}\n";
}

void emit_json(const RunConfig& c, const json& result) {
  if (c.out.empty()) {
    std::cout << result.dump(2) << '\n';
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + c.out);
  f << json_body(c, result);
}

int cmd_eval(const RunConfig& c) {
  const MixtureSpec spec = load_mixture(c.mixture);
  const ChainOptions opts = chain_options(c);
  json j;
  ParisiBreakdown b;
  if (!c.alpha.empty()) {
    if (!(c.beta > 0.0)) throw ConfigError("--alpha needs --beta > 0");
    const auto alpha = checked(parse_finite_param(c.alpha), "alpha");
    b = parisi_finite_breakdown(alpha, c.beta, spec, opts);
    j["alpha"] = to_string(alpha);
    j["beta"] = c.beta;
  } else {
    if (c.gamma.empty()) throw ConfigError("eval needs --gamma or --alpha");
    const auto gamma = checked(parse_step_param(c.gamma), "gamma");
    b = parisi_zero_breakdown(gamma, spec, opts);
    j["gamma"] = to_string(gamma);
  }
  j["psi"] = b.psi;
  j["correction"] = b.correction;
  j["value"] = b.value;
  if (c.as_json || is_json_path(c.out)) {
    emit_json(c, j);
  } else {
    emit(c, "value " + fmt17(b.value) + "\npsi " + fmt17(b.psi) + "\ncorrection " +
                fmt17(b.correction) + "\n");
  }
  return kOk;
}

int cmd_verify(const RunConfig& c) {
  std::vector<cli::Check> checks;
  if (c.preset == "default" || c.preset == "all") {
    checks = cli::identity_checks(c.seed);
  }
  if (c.preset == "singular" || c.preset == "all") {
    const auto s = cli::singular_checks(c.b_minus_t);
    checks.insert(checks.end(), s.begin(), s.end());
  }
  if (checks.empty()) throw ConfigError("unknown preset '" + c.preset + "'");
  bool all = true;
  json arr = json::array();
  std::string text;
  for (const auto& ch : checks) {
    all = all && ch.passed;
    arr.push_back({{"name", ch.name},
                   {"passed", ch.passed},
                   {"observed", ch.observed},
                   {"bound", ch.bound},
                   {"detail", ch.detail}});
    text += std::string(ch.passed ? "PASS " : "FAIL ") + ch.name + " observed=" +
            fmt17(ch.observed) + " bound=" + fmt17(ch.bound) +
            (ch.detail.empty() ? "" : " (" + ch.detail + ")") + "\n";
  }
  if (c.as_json || is_json_path(c.out)) {
    emit_json(c, json{{"all_passed", all}, {"checks", arr}});
  } else {
    emit(c, text);
  }
  return all ? kOk : kVerifyFailed;
}

int cmd_perturb(const RunConfig& c) {
  const MixtureSpec spec = load_mixture(c.mixture);
  if (c.gamma.empty()) throw ConfigError("perturb needs --gamma");
  const auto base = checked(parse_step_param(c.gamma), "gamma");
  SearchOptions search;
  search.jobs = c.jobs;
  const PerturbationReport report =
      theorem3_search(base, spec, ChainOptions::with_order(c.order), search);
  if (c.as_json || is_json_path(c.out)) {
    emit_json(c, json::parse(report.to_json()));
  } else {
    emit(c, report.to_csv());
  }
  std::cerr << "success=" << (report.success ? "true" : "false") << " m_next=" << fmt17(report.m_next)
            << (report.eta ? " eta=" + fmt17(*report.eta) : std::string()) << '\n';
  if (!report.success) throw ExperimentFailure("no certified m_next on the grid");
  return kOk;
}

int cmd_minimize(const RunConfig& c) {
  const MixtureSpec spec = load_mixture(c.mixture);
  const OptimOptions opts = optim_options(c);
  const OptimResult r = c.beta > 0.0 ? minimize_finite(c.k, c.beta, spec, opts)
                                     : minimize_zero(c.k, spec, opts);
  if (c.as_json || is_json_path(c.out) || !c.out.empty()) {
    emit_json(c, json::parse(r.to_json()));
  } else {
    std::cout << (r.finite() ? to_string(r.alpha()) : to_string(r.gamma())) << '\n'
              << "value " << fmt17(r.value) << "\nconverged " << (r.converged ? "true" : "false")
              << "\nevaluations " << r.evaluations << '\n';
  }
  return kOk;
}

int cmd_escalate(const RunConfig& c) {
  const MixtureSpec spec = load_mixture(c.mixture);
  SearchOptions search;
  search.jobs = c.jobs;
  const auto steps = escalate(spec, c.kmax, optim_options(c), search);
  json arr = json::array();
  bool decreasing = true;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    json s = json::parse(steps[i].result.to_json());
    if (steps[i].warm_value) s["warm_value"] = *steps[i].warm_value;
    if (steps[i].report) {
      s["search"] = {{"success", steps[i].report->success},
                     {"m_next", steps[i].report->m_next},
                     {"eta", steps[i].report->eta ? json(*steps[i].report->eta) : json()}};
    }
    if (i > 0) decreasing = decreasing && steps[i].result.value < steps[i - 1].result.value;
    arr.push_back(s);
    std::cerr << "k=" << steps[i].result.k << " value=" << fmt17(steps[i].result.value) << '\n';
  }
  emit_json(c, json{{"strictly_decreasing", decreasing}, {"steps", arr}});
  if (!decreasing) throw ExperimentFailure("escalation values are not strictly decreasing");
  return kOk;
}

int cmd_beta_sweep(const RunConfig& c) {
  const MixtureSpec spec = load_mixture(c.mixture);
  const BetaSweep sweep = beta_sweep(spec, c.k, parse_reals(c.betas), optim_options(c), c.cut);
  if (c.as_json || is_json_path(c.out)) {
    json rows = json::array();
    for (const auto& r : sweep.rows) {
      rows.push_back({{"beta", r.beta}, {"finite", json::parse(r.finite.to_json())},
                      {"gap", r.gap}, {"entropy", r.entropy}, {"l1", r.l1}});
    }
    emit_json(c, json{{"cut", sweep.cut}, {"zero", json::parse(sweep.zero.to_json())}, {"rows", rows}});
  } else {
    emit(c, sweep.to_csv());
  }
  return kOk;
}

int cmd_oracle(const RunConfig& c) {
  const MixtureSpec spec = load_mixture(c.mixture);
  const auto rows = gse_trend(spec, parse_ints(c.n_list), c.samples, c.seed, c.jobs);
  if (c.as_json || is_json_path(c.out)) {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"N", r.n_spins}, {"samples", r.samples}, {"mean_max_over_N", r.mean},
                     {"stderr", r.stderr_mean}, {"seconds", r.seconds}});
    }
    emit_json(c, arr);
  } else {
    emit(c, trend_csv(rows));
  }
  return kOk;
}

int dispatch(const RunConfig& c) {
  if (c.command == "eval") return cmd_eval(c);
  if (c.command == "verify") return cmd_verify(c);
  if (c.command == "perturb") return cmd_perturb(c);
  if (c.command == "minimize") return cmd_minimize(c);
  if (c.command == "escalate") return cmd_escalate(c);
  if (c.command == "beta-sweep") return cmd_beta_sweep(c);
  if (c.command == "oracle") return cmd_oracle(c);
  throw ConfigError("unknown command " + c.command);
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--mixture", c.mixture, "Mixture JSON file or inline JSON (default SK, h=0)");
  sub->add_option("--order", c.order, "Gauss-Hermite order per level")->check(CLI::Range(2, 400));
  sub->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::Range(1, 1024));
  sub->add_option("--seed", c.seed, "Seed for restarts, random probes and samples");
  sub->add_option("--out", c.out, "Output file (header line + body)");
  sub->add_flag("--json", c.as_json, "Machine-readable output");
}

void add_optim(CLI::App* sub, RunConfig& c) {
  sub->add_option("--budget", c.budget, "Objective evaluations per minimisation");
  sub->add_option("--restarts", c.restarts, "Randomised restarts")->check(CLI::Range(0, 1000));
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  if (const char* env = std::getenv("PARISI_DEFAULT_ORDER")) {
    try {
      c.order = std::stoi(env);
    } catch (const std::exception&) {
      std::cerr << "error: PARISI_DEFAULT_ORDER is not an integer\n";
      return kConfig;
    }
  }

  CLI::App app{"Zero-temperature Parisi functional toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  auto* eval = app.add_subcommand("eval", "Evaluate the functional with its breakdown");
  add_common(eval, c);
  eval->add_option("--gamma", c.gamma, "Zero-temperature parameter q0:m0,q1:m1,...");
  eval->add_option("--alpha", c.alpha, "Finite-temperature parameter q0:z0,...");
  eval->add_option("--beta", c.beta, "Inverse temperature for --alpha");

  auto* verify = app.add_subcommand("verify", "Run the tail-block identity suite");
  add_common(verify, c);
  verify->add_option("--preset", c.preset, "default, singular or all");
  verify->add_option("--b-minus-t", c.b_minus_t, "Gap used by the singular probes")
      ->check(CLI::PositiveNumber);

  auto* perturb = app.add_subcommand("perturb", "Search for a lowering perturbation near q = 1");
  add_common(perturb, c);
  perturb->add_option("--gamma", c.gamma, "Base parameter")->required();

  auto* minimize = app.add_subcommand("minimize", "Minimise over step parameters");
  add_common(minimize, c);
  add_optim(minimize, c);
  minimize->add_option("--k", c.k, "Number of plateau values")->check(CLI::Range(1, 16));
  minimize->add_option("--beta", c.beta, "Finite temperature when given");

  auto* esc = app.add_subcommand("escalate", "Minimise for k = 1..kmax with perturbed warm starts");
  add_common(esc, c);
  add_optim(esc, c);
  esc->add_option("--kmax", c.kmax, "Largest number of plateaus")->check(CLI::Range(1, 16));

  auto* sweep = app.add_subcommand("beta-sweep", "Finite against zero temperature optima");
  add_common(sweep, c);
  add_optim(sweep, c);
  sweep->add_option("--k", c.k, "Zero-temperature plateaus")->check(CLI::Range(1, 16));
  sweep->add_option("--betas", c.betas, "Comma-separated inverse temperatures");
  sweep->add_option("--cut", c.cut, "Upper end of the L1 window");

  auto* oracle = app.add_subcommand("oracle", "Exhaustive ground states at small N");
  add_common(oracle, c);
  oracle->add_option("--N", c.n_list, "Comma-separated system sizes");
  oracle->add_option("--samples", c.samples, "Samples per size")->check(CLI::Range(2, 1000000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    return dispatch(c);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const ExperimentFailure& e) {
    std::cerr << "experiment failed: " << e.what() << '\n';
    return kExperiment;
  } catch (const std::exception& e) {
    std::cerr << "evaluation error: " << e.what() << '\n';
    return kEvaluation;
  }
}
