// unanimity: command-line front end for the matching library.
//
// Exit codes: 0 success, 1 a property violation or failing fixture was
// found, 2 usage or input error, 3 any other failure (resource limits, I/O).

#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "examples.hpp"
#include "http.hpp"
#include "names.hpp"
#include "unanimity/aggregation.hpp"
#include "unanimity/elicit.hpp"
#include "unanimity/errors.hpp"
#include "unanimity/json_io.hpp"
#include "unanimity/oracle.hpp"
#include "unanimity/rng.hpp"
#include "unanimity/sim.hpp"

namespace {

using namespace unanimity;
using json = nlohmann::json;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;
constexpr int kRuntime = 3;

std::string slurp(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "-" reads stdin, text starting with '{' or '[' is inline JSON, anything
// else names a file.
json read_json(const std::string& arg, const char* what) {
  std::string text;
  if (arg == "-") {
    text = slurp(std::cin);
  } else if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) {
    text = arg;
  } else {
    std::ifstream in(arg);
    require(static_cast<bool>(in), ErrorCode::kInvalidArgument, std::string("cannot open ") + what + " '" + arg + "'");
    text = slurp(in);
  }
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("malformed ") + what + ": " + e.what());
  }
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

DictatorOrder parse_order(const Market& market, const std::string& text) {
  json labels = json::array();
  for (const auto& s : split(text)) labels.push_back(s);
  return json_io::order_from_json(market, labels);
}

AvailabilityFn parse_availability(const Market& market, const std::string& text) {
  AvailabilityFn avail(market.home_count(), 0);
  for (const auto& s : split(text)) {
    const auto h = market.find_home(s);
    require(h.has_value(), ErrorCode::kInvalidArgument, "unknown home '" + s + "' in --availability");
    avail[h->value] = 1;
  }
  return avail;
}

json availability_json(const Market& market, const AvailabilityFn& avail) {
  json out = json::array();
  for (const auto h : market.homes()) {
    if (avail[h.value]) out.push_back(market.home_label(h));
  }
  return out;
}

json order_json(const Market& market, const DictatorOrder& order) {
  json out = json::array();
  for (const auto c : order) out.push_back(market.child_label(c));
  return out;
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

bool ci_mode() {
  const char* ci = std::getenv("CI");
  return ci && *ci && std::string(ci) != "0" && std::string(ci) != "false";
}

json report_json(const Market& market, const oracle::ManipulationReport& r) {
  return {{"kind", oracle::to_string(r.kind)},
          {"manipulator", oracle::to_string(r.manipulator)},
          {"child", market.child_label(r.child)},
          {"truth", json_io::to_json(market, r.truth)},
          {"misreport", json_io::to_json(market, r.misreport)},
          {"truthful_outcome", json_io::to_json(market, r.truthful_outcome)},
          {"manipulated_outcome", json_io::to_json(market, r.manipulated_outcome)}};
}

// Options shared by run and search.
struct MechanismFlags {
  std::string order;
  std::string tie = "evaluation";
  std::string pointing = "evaluation";
  std::optional<std::string> availability;
  std::optional<std::uint64_t> seed;
  double availability_prob = 0.5;

  void add(CLI::App* cmd, bool with_availability) {
    cmd->add_option("--order", order, "Dictator order as comma-separated child labels");
    cmd->add_option("--tie", tie, "Tie-break inside a committed tier")
        ->check(CLI::IsMember({"evaluation", "preference", "home_id"}));
    cmd->add_option("--pointing", pointing, "Ranking UTTC points with")
        ->check(CLI::IsMember({"evaluation", "preference"}));
    if (with_availability) {
      cmd->add_option("--availability", availability, "Available homes for rsa, comma-separated");
      cmd->add_option("--availability-prob", availability_prob, "Chance a home is available when drawn")
          ->check(CLI::Range(0.0, 1.0));
    }
    cmd->add_option("--seed", seed, "Seed for a random order or availability draw");
  }

  tools::MechanismSpec spec(const std::string& name, const Market& market) const {
    tools::MechanismSpec s;
    s.name = name;
    s.tie = tools::tie_named(tie);
    s.pointing = tools::ranking_named(pointing);
    if (!order.empty()) {
      s.order = parse_order(market, order);
    } else if (seed) {
      s.order = identity_order(market);
      CounterRng rng(*seed, 0, 0);
      rng.shuffle(s.order.begin(), s.order.end());
    } else {
      s.order = identity_order(market);
    }
    if (name == "rsa") {
      if (availability) {
        s.availability = parse_availability(market, *availability);
      } else {
        require(seed.has_value(), ErrorCode::kInvalidArgument, "rsa needs --availability or --seed");
        CounterRng rng(*seed, 0, 1);
        AvailabilityFn avail(market.home_count());
        for (auto& a : avail) a = rng.bernoulli(availability_prob) ? 1 : 0;
        s.availability = std::move(avail);
      }
    }
    return s;
  }
};

int cmd_run(const std::string& mechanism, const std::string& problem_arg, const MechanismFlags& flags) {
  const Problem p = json_io::problem_from_json(read_json(problem_arg, "problem"));
  const auto spec = flags.spec(mechanism, p.market());
  const Matching m = tools::mechanism_of(spec)(p);
  json out{{"mechanism", mechanism}, {"matching", json_io::to_json(p.market(), m)}};
  if (mechanism == "rsa") {
    out["availability"] = availability_json(p.market(), *spec.availability);
  } else {
    out["order"] = order_json(p.market(), spec.order);
    if (mechanism != "sd") out["tie"] = tools::tie_name(spec.tie);
  }
  emit(out);
  return kOk;
}

int cmd_verify(const std::string& property, const std::string& problem_arg, const std::string& matching_arg,
               const std::string& ranking) {
  const Problem p = json_io::problem_from_json(read_json(problem_arg, "problem"));
  const Matching m = json_io::matching_from_json(p.market(), read_json(matching_arg, "matching"));
  m.validate(p.market());
  json out{{"property", property}, {"matching", json_io::to_json(p.market(), m)}};
  const auto which = tools::ranking_named(ranking);
  bool holds = false;
  try {
    if (property == "unanimous") {
      holds = oracle::is_unanimous(p, m);
    } else if (property == "efficient") {
      holds = oracle::is_efficient(p, m, which);
      out["ranking"] = ranking;
    } else if (property == "constrained") {
      holds = oracle::is_constrained_efficient(p, m, which);
      out["ranking"] = ranking;
    } else {
      holds = oracle::is_unimprovable(p, m);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kPreconditionViolation) throw;
    out["reason"] = e.what();
  }
  out["holds"] = holds;
  emit(out);
  return holds ? kOk : kViolation;
}

struct SearchFlags {
  std::string attack;
  std::string mechanism = "sdi";
  std::string rule = "tau-u";
  std::string seq;
  std::string child;
  std::uint64_t cap = oracle::kDefaultCap;
  bool no_truncations = false;
  bool any_order = false;
};

int cmd_search(const SearchFlags& f, const std::string& problem_arg, const MechanismFlags& mflags) {
  const Problem p = json_io::problem_from_json(read_json(problem_arg, "problem"));
  const Market& market = p.market();
  oracle::SearchOptions options;
  options.cap = f.cap;
  options.truncations = !f.no_truncations;
  std::optional<ChildId> only;
  if (!f.child.empty()) only = json_io::child_from_json(market, f.child);

  json out{{"attack", f.attack}, {"mechanism", f.mechanism}};
  json report = nullptr;
  if (f.attack == "obvious") {
    std::optional<DictatorOrder> fixed;
    std::optional<TieBreakPolicy> tie;
    if (!f.any_order) fixed = mflags.spec(f.mechanism, market).order;
    if (!f.any_order) tie = tools::tie_named(mflags.tie);
    const auto family =
        tools::family_of(f.mechanism, market.child_count(), fixed, tie, tools::ranking_named(mflags.pointing));
    out["orders"] = f.any_order ? json("all") : order_json(market, *fixed);
    for (const auto c : market.children()) {
      if (only && *only != c) continue;
      const auto r = oracle::find_obvious_manipulation(family, market, c, p.pref(c), p.eval(c), options);
      if (r) {
        report = report_json(market, *r);
        break;
      }
    }
  } else {
    const auto spec = mflags.spec(f.mechanism, market);
    const auto mech = tools::mechanism_of(spec);
    if (f.mechanism != "rsa") out["order"] = order_json(market, spec.order);
    if (f.attack == "sp") {
      if (const auto r = oracle::find_sp_violation(mech, p, only, options)) report = report_json(market, *r);
    } else if (f.attack == "group-robust") {
      const auto rule = f.rule == "scr" ? serial_choice_rule(parse_sequence(f.seq)) : rule_by_name(f.rule);
      out["rule"] = f.rule;
      if (const auto r = oracle::find_group_robustness_violation(mech, rule, p, options)) {
        report = report_json(market, *r);
      }
    } else {
      const std::vector<Problem> family{p};
      if (const auto r = oracle::check_iia(mech, family, options)) {
        report = {{"clause", r->clause},
                  {"child", r->problem.market().child_label(r->child)},
                  {"misreport", json_io::to_json(r->problem.market(), r->misreport)},
                  {"before", json_io::to_json(r->problem.market(), r->before)},
                  {"after", json_io::to_json(r->problem.market(), r->after)},
                  {"problem", json_io::to_json(r->problem)}};
      }
    }
  }
  out["found"] = !report.is_null();
  out["report"] = report;
  emit(out);
  return report.is_null() ? kOk : kViolation;
}

int cmd_aggregate(const std::string& rule_name, const std::string& seq, const std::string& problem_arg) {
  const Problem p = json_io::problem_from_json(read_json(problem_arg, "problem"));
  AggregationRule rule;
  if (rule_name == "scr") {
    require(!seq.empty(), ErrorCode::kInvalidArgument, "--rule scr needs --seq");
    rule = serial_choice_rule(parse_sequence(seq));
  } else {
    rule = rule_by_name(rule_name);
  }
  const Problem agg = aggregate_problem(p, rule);
  json rankings = json::object();
  for (const auto c : p.market().children()) {
    rankings[p.market().child_label(c)] = json_io::to_json(p.market(), agg.pref(c));
  }
  json out{{"rule", rule_name}, {"rankings", rankings}};
  if (rule_name == "scr") out["seq"] = seq;
  emit(out);
  return kOk;
}

struct SimulateFlags {
  std::string config;
  std::string out;
  std::string jsonl;
  unsigned threads = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> n_sims;
};

int cmd_simulate(const SimulateFlags& f) {
  const json doc = read_json(f.config, "simulation config");
  require(doc.is_object(), ErrorCode::kInvalidArgument, "simulation config must be a JSON object");
  if (ci_mode() && !f.seed && !doc.contains("seed")) {
    fail(ErrorCode::kInvalidArgument, "CI mode: pass --seed or set \"seed\" in the config");
  }
  auto cfg = json_io::sim_config_from_json(doc);
  if (f.seed) cfg.seed = *f.seed;
  if (f.n_sims) cfg.n_sims = *f.n_sims;
  cfg.validate();
  const auto result = sim::run_batch(cfg, f.threads);
  if (f.out == "-") {
    sim::write_csv(std::cout, result.rows);
  } else {
    std::ofstream out(f.out);
    require(static_cast<bool>(out), ErrorCode::kUnavailable, "cannot write '" + f.out + "'");
    sim::write_csv(out, result.rows);
  }
  if (!f.jsonl.empty()) {
    std::ofstream out(f.jsonl);
    require(static_cast<bool>(out), ErrorCode::kUnavailable, "cannot write '" + f.jsonl + "'");
    sim::write_jsonl(out, result.replications);
  }
  return kOk;
}

struct ServeFlags {
  std::string config;
  std::size_t synthetic = 0;
  std::optional<std::uint64_t> seed;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string events;
  std::string static_dir;
};

httplib::Server* g_server = nullptr;

void stop_server(int) {
  if (g_server) g_server->stop();
}

int cmd_serve(const ServeFlags& f) {
  elicit::ExperimentConfig cfg;
  if (!f.config.empty()) {
    cfg = elicit::config_from_json(read_json(f.config, "experiment config"));
    if (f.seed) cfg.seed = *f.seed;
  } else {
    require(f.synthetic > 0, ErrorCode::kInvalidArgument, "serve needs --config or --synthetic");
    require(f.seed.has_value(), ErrorCode::kInvalidArgument, "--synthetic needs --seed");
    cfg = elicit::synthetic_config(f.synthetic, *f.seed);
  }

  std::unique_ptr<elicit::Service> service;
  std::ofstream log;
  if (!f.events.empty()) {
    std::ifstream past(f.events);
    log.open(f.events, std::ios::app);
    require(static_cast<bool>(log), ErrorCode::kUnavailable, "cannot append to '" + f.events + "'");
    service = past ? elicit::Service::replay(cfg, past, &log) : std::make_unique<elicit::Service>(cfg, &log);
  } else {
    service = std::make_unique<elicit::Service>(cfg);
  }

  const char* token = std::getenv("UNANIMITY_ADMIN_TOKEN");
  if (!token || !*token) std::cerr << "UNANIMITY_ADMIN_TOKEN is not set; /admin endpoints are disabled\n";
  const elicit::Router router(*service, token ? token : "", [] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
        .count();
  });

  httplib::Server server;
  tools::mount(server, router, f.static_dir);
  g_server = &server;
  std::signal(SIGINT, stop_server);
  std::signal(SIGTERM, stop_server);
  const int port = f.port == 0 ? server.bind_to_any_port(f.host) : (server.bind_to_port(f.host, f.port) ? f.port : -1);
  require(port > 0, ErrorCode::kUnavailable, "cannot listen on " + f.host + ":" + std::to_string(f.port));
  std::cerr << "listening on http://" << f.host << ':' << port << " with " << cfg.markets.size() << " markets, "
            << service->session_count() << " sessions restored\n";
  server.listen_after_bind();
  g_server = nullptr;
  return kOk;
}

int cmd_examples(const std::optional<std::string>& only, const std::string& fixtures) {
  const json doc = fixtures.empty() ? json_io::parse(tools::embedded_fixtures()) : read_json(fixtures, "fixture file");
  const auto results = tools::run_examples(doc, only);
  bool ok = true;
  for (const auto& r : results) {
    std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << '\n';
    for (const auto& f : r.failures) std::cout << "  " << f << '\n';
    ok = ok && r.passed();
  }
  return ok ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matching with unanimous child and matchmaker rankings"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "unanimity 0.1.0");

  std::string problem = "-";
  const auto add_problem = [&](CLI::App* cmd) {
    cmd->add_option("-p,--problem", problem, "Problem JSON: a file, '-' for stdin, or inline text");
  };

  std::string mechanism;
  MechanismFlags mflags;
  auto* run = app.add_subcommand("run", "Run a mechanism and print the matching");
  run->add_option("mechanism", mechanism)->required()->check(CLI::IsMember({"sd", "sdi", "uttc", "asdi", "rsa"}));
  add_problem(run);
  mflags.add(run, true);

  std::string property, matching, ranking = "preference";
  auto* verify = app.add_subcommand("verify", "Check a property of a matching");
  verify->add_option("--property", property)
      ->required()
      ->check(CLI::IsMember({"unanimous", "efficient", "constrained", "unimprovable"}));
  verify->add_option("-m,--matching", matching, "Matching JSON: a file or inline text")->required();
  verify->add_option("--ranking", ranking, "Ranking for efficiency checks")
      ->check(CLI::IsMember({"preference", "evaluation"}));
  add_problem(verify);

  SearchFlags sflags;
  auto* search = app.add_subcommand("search", "Search for a manipulation or an IIA counterexample");
  search->add_option("--attack", sflags.attack)
      ->required()
      ->check(CLI::IsMember({"sp", "obvious", "group-robust", "iia"}));
  search->add_option("--mechanism", sflags.mechanism)->check(CLI::IsMember({"sd", "sdi", "uttc", "asdi", "rsa"}));
  search->add_option("--rule", sflags.rule, "Aggregation rule for group-robust")
      ->check(CLI::IsMember({"borda", "min", "max", "tau-u", "scr"}));
  search->add_option("--seq", sflags.seq, "Dictator sequence for --rule scr, e.g. C,M,C");
  search->add_option("--child", sflags.child, "Only search this child's reports");
  search->add_option("--cap", sflags.cap, "Enumeration limit before giving up");
  search->add_flag("--no-truncations", sflags.no_truncations, "Misreports must rank every home");
  search->add_flag("--any-order", sflags.any_order, "Obvious: quantify over every order and tie policy");
  add_problem(search);
  mflags.add(search, true);

  std::string rule, seq;
  auto* aggregate = app.add_subcommand("aggregate", "Combine preferences and evaluations into one ranking per child");
  aggregate->add_option("--rule", rule)->required()->check(CLI::IsMember({"borda", "min", "max", "tau-u", "scr"}));
  aggregate->add_option("--seq", seq, "Dictator sequence for scr, e.g. C,M,C");
  add_problem(aggregate);

  SimulateFlags simflags;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo comparison of the mechanisms");
  simulate->add_option("--config", simflags.config, "Simulation config JSON")->required();
  simulate->add_option("--out", simflags.out, "Metrics CSV, '-' for stdout")->required();
  simulate->add_option("--jsonl", simflags.jsonl, "Per-replication audit dump");
  simulate->add_option("--threads", simflags.threads)->check(CLI::Range(1u, 1024u));
  simulate->add_option("--seed", simflags.seed);
  simulate->add_option("--n-sims", simflags.n_sims);

  ServeFlags serveflags;
  auto* serve = app.add_subcommand("serve", "Run the preference elicitation HTTP service");
  serve->add_option("--config", serveflags.config, "Experiment config JSON");
  serve->add_option("--synthetic", serveflags.synthetic, "Use this many generated markets instead of --config");
  serve->add_option("--seed", serveflags.seed);
  serve->add_option("--host", serveflags.host);
  serve->add_option("--port", serveflags.port, "0 picks a free port")->check(CLI::Range(0, 65535));
  serve->add_option("--events", serveflags.events, "Append-only event log, replayed on start");
  serve->add_option("--static", serveflags.static_dir, "Directory served at /")->check(CLI::ExistingDirectory);

  std::optional<std::string> only;
  std::string fixtures;
  auto* examples = app.add_subcommand("examples", "Check the bundled worked examples");
  examples->add_option("--only", only, "Run one fixture by name");
  examples->add_option("--fixtures", fixtures, "Use this fixture file instead of the bundled one");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run) return cmd_run(mechanism, problem, mflags);
    if (*verify) return cmd_verify(property, problem, matching, ranking);
    if (*search) return cmd_search(sflags, problem, mflags);
    if (*aggregate) return cmd_aggregate(rule, seq, problem);
    if (*simulate) return cmd_simulate(simflags);
    if (*serve) return cmd_serve(serveflags);
    if (*examples) return cmd_examples(only, fixtures);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::kInvalidArgument || e.code() == ErrorCode::kNotFound ? kUsage : kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kUsage;
}
