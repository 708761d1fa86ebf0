#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "slotfair/apportion.hpp"
#include "slotfair/envyfree.hpp"
#include "slotfair/errors.hpp"
#include "slotfair/json_io.hpp"
#include "slotfair/mass.hpp"

using namespace slotfair;

namespace {

// Exit codes outside ErrorCode.
constexpr int kVerdictFail = 1;
constexpr int kVerdictUndecided = 2;
constexpr int kUsage = 3;

struct Options {
  std::string economy, allocation, method = "proportional", property = "proportional", output;
  std::string precision = "1/1000000000000000000";
  TimeSlot horizon = 300;
  bool trace = false, numeric = false;
  std::uint64_t cuts = 0, agents = 0;
};

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

Rational parse_precision(const std::string& text) {
  Rational p = Rational::parse(text);
  if (p.sign() <= 0) throw std::invalid_argument("--precision must be positive");
  return p;
}

int cmd_check(const Options& o) {
  Economy e = economy_from_json(load_json(o.economy));
  const long n = static_cast<long>(e.n());
  Rational thm1 = Rational(std::max(0L, 2 * n - 3));
  Rational sc = d_bound(5);
  bool all_thm1 = true, all_sc = e.n() == 3, all_mono = true;
  std::ostringstream out;
  Json report = {{"agents", Json::array()}};
  for (std::size_t i = 0; i < e.n(); ++i) {
    Rational k = kakeya_level(e.u(i));
    bool mono = is_monotonic(e.u(i));
    mpz_class whole = k.numerator() / k.denominator();
    out << e.agents[i].name << ": " << e.u(i).str() << "  Kakeya level " << k.str() << " (" << whole.get_str()
        << "-Kakeya), " << (mono ? "monotone" : "not monotone") << "\n";
    all_thm1 = all_thm1 && k >= thm1;
    all_sc = all_sc && k >= sc && mono;
    all_mono = all_mono && mono;
    report["agents"].push_back({{"name", e.agents[i].name},
                                {"kakeya_level", k.str()},
                                {"kakeya_integer", whole.get_str()},
                                {"monotone", mono}});
  }
  out << "proportional (Kakeya >= " << thm1.str() << "): " << (all_thm1 ? "PASS" : "FAIL") << "\n";
  out << "selfridge-conway (n = 3, monotone, Kakeya >= " << sc.str() << "): " << (all_sc ? "PASS" : "FAIL")
      << "\n";
  report["proportional"] = {{"needs", thm1.str()}, {"pass", all_thm1}};
  report["selfridge_conway"] = {{"needs", sc.str()}, {"pass", all_sc}};
  std::cout << out.str();
  if (!o.output.empty()) emit(report.dump(2) + "\n", o.output);
  return 0;
}

int cmd_allocate(const Options& o) {
  Economy e = economy_from_json(load_json(o.economy));
  Rational precision = parse_precision(o.precision);
  Allocation a = run_method(o.method, e, precision);
  Json j = allocation_to_json(a, e, precision, o.horizon);
  if (o.trace) {
    j["trace"] = trace_to_json(a, o.horizon)["stages"];
    Json queries = Json::array();
    std::istringstream lines(queries_to_jsonl(a));
    for (std::string line; std::getline(lines, line);) queries.push_back(Json::parse(line));
    j["queries"] = queries;
  }
  emit(j.dump(2) + "\n", o.output);
  return 0;
}

int cmd_verify(const Options& o) {
  Economy e = economy_from_json(load_json(o.economy));
  Rational precision = parse_precision(o.precision);
  Allocation a = allocation_from_json(load_json(o.allocation), e);
  FairnessCertificate c;
  if (o.property == "proportional") {
    c = verify_proportional(e, a, precision, o.horizon);
  } else if (o.property == "envy-free") {
    c = verify_envy_free(e, a, precision, o.horizon);
  } else {
    throw std::invalid_argument("unknown property \"" + o.property + "\"");
  }
  emit(certificate_to_json(c).dump(2) + "\n", o.output);
  switch (c.verdict) {
    case Verdict::certified_pass: return 0;
    case Verdict::certified_fail: return kVerdictFail;
    default: return kVerdictUndecided;
  }
}

int cmd_bounds(const Options& o) {
  std::ostringstream out;
  if (o.cuts > 0) {
    if (o.cuts <= 2000) {
      out << "d(" << o.cuts << ") = " << d_bound(o.cuts).str() << "\n";
    } else {
      out << "d(" << o.cuts << ") = 2·3^(" << o.cuts << "−1) − 1 (" << d_bound_digits(o.cuts) << " digits)\n";
    }
  } else if (o.agents > 0) {
    if (o.numeric) {
      out << "p(" << o.agents << ") = " << p_bound_numeric(o.agents).str() << "\n";
    } else {
      PatienceBound b = p_bound(o.agents);
      if (b.numeric) {
        out << "p(" << o.agents << ") = d(" << b.cuts << ") = " << b.numeric->str() << "\n";
      } else {
        out << "d(" << b.cuts << ") = " << b.divisibility << " (symbolic)\n";
      }
    }
  } else {
    throw std::invalid_argument("bounds needs --cuts c or --agents n (both >= 1)");
  }
  emit(out.str(), o.output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact fair division of infinite time-slot schedules"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* c) {
    c->add_option("--precision", o.precision, "Certificate precision as p/q")->capture_default_str();
    c->add_option("--horizon", o.horizon, "Audit and export horizon")->capture_default_str()->check(
        CLI::PositiveNumber);
    c->add_option("-o,--output", o.output, "Output file (default stdout)");
  };

  auto* check = app.add_subcommand("check", "Patience and monotonicity report");
  check->add_option("economy", o.economy)->required()->check(CLI::ExistingFile);
  common(check);

  auto* allocate = app.add_subcommand("allocate", "Run an allocation procedure");
  allocate->add_option("economy", o.economy)->required()->check(CLI::ExistingFile);
  allocate->add_option("--method", o.method)
      ->check(CLI::IsMember({"ica", "proportional", "divide-choose", "selfridge-conway", "round-robin"}))
      ->capture_default_str();
  allocate->add_flag("--trace", o.trace, "Include stage trace and query log");
  common(allocate);

  auto* verify = app.add_subcommand("verify", "Certify an allocation");
  verify->add_option("economy", o.economy)->required()->check(CLI::ExistingFile);
  verify->add_option("allocation", o.allocation)->required()->check(CLI::ExistingFile);
  verify->add_option("--property", o.property)
      ->check(CLI::IsMember({"proportional", "envy-free"}))
      ->capture_default_str();
  common(verify);

  auto* bounds = app.add_subcommand("bounds", "Divisibility and patience bounds");
  auto* cuts = bounds->add_option("--cuts", o.cuts, "d(c) for c cuts")->check(CLI::PositiveNumber);
  bounds->add_option("--agents", o.agents, "p(n) for n agents")->check(CLI::PositiveNumber)->excludes(cuts);
  bounds->add_flag("--numeric", o.numeric, "Demand a numeric p(n)");
  bounds->add_option("-o,--output", o.output, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }
  try {
    if (*check) return cmd_check(o);
    if (*allocate) return cmd_allocate(o);
    if (*verify) return cmd_verify(o);
    return cmd_bounds(o);
  } catch (const Error& e) {
    std::cerr << error_name(e.code()) << ": " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
