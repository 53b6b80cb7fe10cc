#include "examples.hpp"

#include <algorithm>
#include <set>

#include "names.hpp"
#include "unanimity/errors.hpp"
#include "unanimity/json_io.hpp"
#include "unanimity/mechanisms.hpp"
#include "unanimity/oracle.hpp"
#include "unanimity_fixtures.hpp"

namespace unanimity::tools {
namespace {

using json = nlohmann::json;

struct Checker {
  const Market& market;
  ExampleResult& result;

  void expect(bool ok, const std::string& what) {
    if (!ok) result.failures.push_back(what);
  }

  std::set<Matching> matchings(const json& list) const {
    std::set<Matching> out;
    for (const auto& m : list) out.insert(json_io::matching_from_json(market, m));
    return out;
  }

  std::string show(const std::set<Matching>& ms) const {
    std::string s = "{";
    for (const auto& m : ms) s += (s.size() > 1 ? " " : "") + describe(market, m);
    return s + "}";
  }
};

void unanimous_set(const json& f, ExampleResult& result) {
  const Problem p = json_io::problem_from_json(f.at("problem"));
  Checker check{p.market(), result};
  const auto all = oracle::unanimous_matchings(p);
  const std::set<Matching> found(all.begin(), all.end());

  if (f.contains("unanimous")) {
    const auto want = check.matchings(f.at("unanimous"));
    check.expect(found == want, "unanimous set " + check.show(found) + ", expected " + check.show(want));
  }
  if (f.contains("full_unanimous")) {
    const auto full = std::count_if(all.begin(), all.end(),
                                    [&](const Matching& m) { return m.matched_count() == p.child_count(); });
    check.expect(full == f.at("full_unanimous").get<long>(),
                 std::to_string(full) + " full unanimous matchings, expected " + f.at("full_unanimous").dump());
  }
  if (f.contains("efficient")) {
    std::set<Matching> efficient;
    for (const auto& m : all) {
      if (oracle::is_efficient(p, m)) efficient.insert(m);
    }
    const auto want = check.matchings(f.at("efficient"));
    check.expect(efficient == want,
                 "efficient unanimous set " + check.show(efficient) + ", expected " + check.show(want));
  }
  if (f.value("constrained_efficient", false)) {
    for (const auto& m : all) {
      check.expect(oracle::is_constrained_efficient(p, m), describe(p.market(), m) + " is not constrained-efficient");
    }
  }
  if (f.value("sdi_every_order", false)) {
    auto order = identity_order(p.market());
    do {
      const auto m = sdi(p, order);
      check.expect(found.count(m) == 1, "SDI returned " + describe(p.market(), m));
    } while (std::next_permutation(order.begin(), order.end()));
  }
  if (f.contains("uttc")) {
    const auto& u = f.at("uttc");
    UttcOptions options;
    options.pointing = ranking_named(u.value("pointing", "evaluation"));
    const auto from = json_io::matching_from_json(p.market(), u.at("from"));
    const auto want = json_io::matching_from_json(p.market(), u.at("to"));
    const auto got = uttc(p, from, options);
    check.expect(got == want, "UTTC reached " + describe(p.market(), got) + ", expected " +
                                  describe(p.market(), want));
  }
  if (f.contains("sp_violation")) {
    const auto& v = f.at("sp_violation");
    const auto order = json_io::order_from_json(p.market(), v.at("order"));
    for (const auto& t : v.at("ties")) {
      const auto tie = tie_named(t.get<std::string>());
      const oracle::Mechanism mech = [&](const Problem& q) { return sdi(q, order, tie); };
      const auto report = oracle::find_sp_violation(mech, p);
      check.expect(report && report->kind == oracle::ManipulationKind::kProfitable,
                   "no profitable misreport against SDI with tie " + t.get<std::string>());
    }
  }
}

void obvious(const json& f, ExampleResult& result) {
  Market market(f.at("children").size(), f.at("homes").size());
  market.set_labels(f.at("children").get<std::vector<std::string>>(), f.at("homes").get<std::vector<std::string>>());
  Checker check{market, result};
  auto family = family_of(f.value("mechanism", "sdi"), market.child_count());
  const ChildId c = json_io::child_from_json(market, f.at("child"));
  oracle::ObviousManipulationSearch search(std::move(family), market, c);
  const auto pref = json_io::ranking_from_json(market, f.at("pref"));
  const auto eval = json_io::ranking_from_json(market, f.at("eval"));
  const auto lie = json_io::ranking_from_json(market, f.at("misreport"));
  const auto report = search.check(pref, eval, lie);
  const auto want = f.at("expect").get<std::string>();
  check.expect(report && want == oracle::to_string(report->kind),
               "misreport " + describe(market, lie) + " is not a " + want + " manipulation");
}

void asdi_set(const json& f, ExampleResult& result) {
  const Problem p = json_io::problem_from_json(f.at("problem"));
  Checker check{p.market(), result};
  const auto order = json_io::order_from_json(p.market(), f.at("order"));
  const auto set = oracle::asdi_outcome_set(p, order);
  check.expect(!set.empty(), "ASDI produced no outcome");
  for (const auto& [label, homes] : f.at("homes_for").items()) {
    const ChildId c = json_io::child_from_json(p.market(), label);
    std::set<Slot> allowed;
    for (const auto& h : homes) {
      const auto home = p.market().find_home(h.get<std::string>());
      require(home.has_value(), ErrorCode::kInvalidArgument, "unknown home " + h.dump());
      allowed.insert(*home);
    }
    for (const auto& m : set) {
      check.expect(allowed.count(m[c]) == 1, "child " + label + " gets an unexpected home in " +
                                                 describe(p.market(), m));
    }
  }
  if (f.contains("includes")) {
    const auto want = json_io::matching_from_json(p.market(), f.at("includes"));
    check.expect(std::find(set.begin(), set.end(), want) != set.end(),
                 describe(p.market(), want) + " is missing from the ASDI outcomes");
  }
  const auto realized = asdi(p, order);
  check.expect(std::find(set.begin(), set.end(), realized) != set.end(),
               "realized ASDI matching " + describe(p.market(), realized) + " is not an outcome");
}

}  // namespace

std::string_view embedded_fixtures() { return detail::kFixtures; }

std::vector<ExampleResult> run_examples(const nlohmann::json& doc, const std::optional<std::string>& only) {
  if (!doc.is_object() || !doc.contains("fixtures") || !doc.at("fixtures").is_array()) {
    fail(ErrorCode::kInvalidArgument, "fixture document must hold a 'fixtures' array");
  }
  std::vector<ExampleResult> out;
  for (const auto& f : doc.at("fixtures")) {
    if (!f.is_object() || !f.contains("name") || !f.at("name").is_string()) {
      fail(ErrorCode::kInvalidArgument, "every fixture needs a name");
    }
    ExampleResult result{f.at("name").get<std::string>(), {}};
    if (only && *only != result.name) continue;
    try {
      const auto kind = f.at("kind").get<std::string>();
      if (kind == "unanimous-set") {
        unanimous_set(f, result);
      } else if (kind == "obvious") {
        obvious(f, result);
      } else if (kind == "asdi-set") {
        asdi_set(f, result);
      } else {
        fail(ErrorCode::kInvalidArgument, "unknown kind '" + kind + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kInvalidArgument, "fixture '" + result.name + "': " + e.what());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInvalidArgument) throw;
      fail(ErrorCode::kInvalidArgument, "fixture '" + result.name + "': " + e.what());
    }
    out.push_back(std::move(result));
  }
  if (only && out.empty()) fail(ErrorCode::kInvalidArgument, "no fixture named '" + *only + "'");
  return out;
}

}  // namespace unanimity::tools
