#include "slotfair/json_io.hpp"

#include <fstream>
#include <sstream>

#include "slotfair/apportion.hpp"
#include "slotfair/envyfree.hpp"
#include "slotfair/errors.hpp"
#include "slotfair/lazy_schedule.hpp"

namespace slotfair {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::parse_error, where + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(where, std::string("missing field \"") + key + "\"");
  return *it;
}

TimeSlot slot_from_json(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned()) bad(where, "expected a non-negative integer");
  return j.get<TimeSlot>();
}

// Replays an exported prefix; membership past it is unknown.
class PrefixGen : public SlotGenerator {
 public:
  explicit PrefixGen(std::vector<TimeSlot> members) : members_(std::move(members)) {}
  bool next(TimeSlot t) override {
    while (pos_ < members_.size() && members_[pos_] < t) ++pos_;
    return pos_ < members_.size() && members_[pos_] == t;
  }

 private:
  std::vector<TimeSlot> members_;
  std::size_t pos_ = 0;
};

std::string method_of(const Json& j) {
  return j.contains("method") && j["method"].is_string() ? j["method"].get<std::string>() : "";
}

Json interval_to_json(const RatInterval& r) { return Json::array({r.lo().str(), r.hi().str()}); }

}  // namespace

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::parse_error, path + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + upto, '\n'));
    throw Error(ErrorCode::parse_error, path + ":" + std::to_string(line) + ": " + e.what());
  }
}

void save_json(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

Json rational_to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) bad(where, "expected a rational string \"p/q\"");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const Error& e) {
    bad(where, e.what());
  }
}

Json epset_to_json(const EPSet& s) {
  return {{"threshold", s.threshold()},
          {"prefix", s.prefix()},
          {"period", s.period()},
          {"residues", s.residues()}};
}

EPSet epset_from_json(const Json& j, const std::string& where) {
  TimeSlot n0 = slot_from_json(field(j, "threshold", where), where + ".threshold");
  std::uint64_t period = slot_from_json(field(j, "period", where), where + ".period");
  std::vector<TimeSlot> prefix;
  std::vector<std::uint64_t> residues;
  const Json& pj = field(j, "prefix", where);
  const Json& rj = field(j, "residues", where);
  if (!pj.is_array()) bad(where + ".prefix", "expected an array");
  if (!rj.is_array()) bad(where + ".residues", "expected an array");
  for (std::size_t k = 0; k < pj.size(); ++k) prefix.push_back(slot_from_json(pj[k], where + ".prefix"));
  for (std::size_t k = 0; k < rj.size(); ++k) residues.push_back(slot_from_json(rj[k], where + ".residues"));
  try {
    return EPSet::make(n0, std::move(prefix), period, std::move(residues));
  } catch (const std::invalid_argument& e) {
    bad(where, e.what());
  }
}

Json schedule_to_json(const Schedule& s, TimeSlot horizon) {
  if (const EPSet* ep = as_epset(s)) return epset_to_json(*ep);
  LazyPtr lz = as_lazy(s);
  TimeSlot h = horizon;
  if (lz->known_limit()) h = std::min(h, *lz->known_limit());
  Json prov = {{"procedure", lz->provenance().procedure}};
  Json params = Json::object();
  for (const auto& [k, v] : lz->provenance().params) params[k] = v;
  prov["params"] = params;
  return {{"prefix_to", h},
          {"members", lz->members_upto(h)},
          {"envelope", lz->envelope() ? epset_to_json(*lz->envelope()) : Json(nullptr)},
          {"provenance", prov}};
}

Schedule schedule_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  if (!j.contains("prefix_to")) return epset_from_json(j, where);
  TimeSlot h = slot_from_json(j["prefix_to"], where + ".prefix_to");
  const Json& mj = field(j, "members", where);
  if (!mj.is_array()) bad(where + ".members", "expected an array");
  std::vector<TimeSlot> members;
  for (const auto& m : mj) {
    TimeSlot t = slot_from_json(m, where + ".members");
    if (t == 0 || t > h || (!members.empty() && t <= members.back())) {
      bad(where + ".members", "members must increase within [1, prefix_to]");
    }
    members.push_back(t);
  }
  std::optional<EPSet> env;
  if (j.contains("envelope") && !j["envelope"].is_null()) env = epset_from_json(j["envelope"], where + ".envelope");
  Provenance prov;
  prov.procedure = "imported_prefix";
  return std::make_shared<const LazySchedule>(std::make_unique<PrefixGen>(std::move(members)), env,
                                              std::move(prov), h);
}

Json utility_to_json(const UtilityFn& u) {
  if (u.is_geometric()) return {{"kind", "geometric"}, {"delta", u.delta().str()}};
  Json adj = Json::array();
  for (const auto& [t, w] : u.adjustments()) adj.push_back({{"t", t}, {"weight", w.str()}});
  return {{"kind", "perturbed_geometric"}, {"delta", u.delta().str()}, {"adjustments", adj}};
}

UtilityFn utility_from_json(const Json& j, const std::string& where) {
  const Json& kind = field(j, "kind", where);
  if (!kind.is_string()) bad(where + ".kind", "expected a string");
  Rational delta = rational_from_json(field(j, "delta", where), where + ".delta");
  if (delta.sign() <= 0 || delta >= Rational(1)) bad(where + ".delta", delta.str() + " is not in (0, 1)");
  std::string k = kind.get<std::string>();
  if (k == "geometric") return UtilityFn::geometric(delta);
  if (k != "perturbed_geometric") bad(where + ".kind", "unknown kind \"" + k + "\"");
  std::map<TimeSlot, Rational> adj;
  const Json& aj = field(j, "adjustments", where);
  if (!aj.is_array()) bad(where + ".adjustments", "expected an array");
  for (std::size_t i = 0; i < aj.size(); ++i) {
    std::string w = where + ".adjustments[" + std::to_string(i) + "]";
    TimeSlot t = slot_from_json(field(aj[i], "t", w), w + ".t");
    Rational weight = rational_from_json(field(aj[i], "weight", w), w + ".weight");
    if (t == 0) bad(w + ".t", "slots start at 1");
    if (weight.sign() < 0) bad(w + ".weight", "negative weight " + weight.str());
    if (!adj.emplace(t, weight).second) bad(w + ".t", "duplicate slot " + std::to_string(t));
  }
  return UtilityFn::perturbed(delta, std::move(adj));
}

Json economy_to_json(const Economy& e) {
  Json agents = Json::array();
  for (const auto& a : e.agents) agents.push_back({{"name", a.name}, {"utility", utility_to_json(*a.utility)}});
  return {{"agents", agents}};
}

Economy economy_from_json(const Json& j) {
  const Json& aj = field(j, "agents", "economy");
  if (!aj.is_array() || aj.empty()) bad("agents", "expected a non-empty array");
  Economy e;
  for (std::size_t i = 0; i < aj.size(); ++i) {
    std::string w = "agents[" + std::to_string(i) + "]";
    const Json& name = field(aj[i], "name", w);
    if (!name.is_string()) bad(w + ".name", "expected a string");
    UtilityFn u = utility_from_json(field(aj[i], "utility", w), w + ".utility");
    e.agents.push_back({name.get<std::string>(), std::make_shared<const UtilityFn>(std::move(u))});
  }
  try {
    e.validate();
  } catch (const std::invalid_argument& ex) {
    bad("agents", ex.what());
  }
  return e;
}

Json allocation_to_json(const Allocation& a, const Economy& e, const Rational& precision, TimeSlot horizon) {
  Json shares = Json::array();
  for (std::size_t i = 0; i < a.shares.size(); ++i) {
    shares.push_back({{"agent", e.agents.at(i).name}, {"schedule", schedule_to_json(a.shares[i], horizon)}});
  }
  Json j = {{"method", a.method},
            {"precision", precision.str()},
            {"economy", economy_to_json(e)},
            {"evidence", a.evidence == PartitionEvidence::exact ? "exact" : "structural"},
            {"cuts", a.cuts},
            {"shares", shares}};
  if (!a.ledger.empty()) {
    Json ledger = Json::array();
    for (const auto& l : a.ledger) {
      ledger.push_back({{"cut", l.cut},
                        {"piece", l.piece},
                        {"mode", l.mode},
                        {"floor_before", l.floor_before.str()},
                        {"floor_after", l.floor_after.str()}});
    }
    j["ledger"] = ledger;
  }
  if (!a.notes.empty()) j["notes"] = a.notes;
  return j;
}

Allocation allocation_from_json(const Json& j, const Economy& e) {
  const Json& sj = field(j, "shares", "allocation");
  if (!sj.is_array()) bad("allocation.shares", "expected an array");
  if (sj.size() != e.n()) {
    throw Error(ErrorCode::schema_mismatch, "allocation has " + std::to_string(sj.size()) + " shares for " +
                                                std::to_string(e.n()) + " agents");
  }
  Allocation imported;
  imported.method = method_of(j);
  for (std::size_t i = 0; i < sj.size(); ++i) {
    std::string w = "allocation.shares[" + std::to_string(i) + "]";
    const Json& name = field(sj[i], "agent", w);
    if (!name.is_string() || name.get<std::string>() != e.agents[i].name) {
      throw Error(ErrorCode::schema_mismatch, w + ": agent does not match economy agent " + e.agents[i].name);
    }
    imported.shares.push_back(schedule_from_json(field(sj[i], "schedule", w), w + ".schedule"));
  }
  if (j.contains("economy")) {
    Economy recorded = economy_from_json(j["economy"]);
    bool same = recorded.n() == e.n();
    for (std::size_t i = 0; same && i < e.n(); ++i) same = recorded.u(i).key() == e.u(i).key();
    if (!same) return imported;
  } else {
    return imported;
  }
  if (imported.method.empty() || !j.contains("precision")) return imported;
  Allocation rerun;
  try {
    rerun = run_method(imported.method, e, rational_from_json(j["precision"], "allocation.precision"));
  } catch (const std::exception&) {
    return imported;
  }
  // Keep the rebuilt shares only if they agree with the file on its prefixes.
  for (std::size_t i = 0; i < e.n(); ++i) {
    const Schedule& s = imported.shares[i];
    TimeSlot h = 0;
    if (LazyPtr lz = as_lazy(s)) h = *lz->known_limit();
    if (h == 0) {
      if (!(as_epset(rerun.shares[i]) && *as_epset(rerun.shares[i]) == *as_epset(s))) return imported;
    } else if (prefix_bitmap(s, h) != prefix_bitmap(rerun.shares[i], h)) {
      return imported;
    }
  }
  return rerun;
}

Json certificate_to_json(const FairnessCertificate& c) {
  Json j = {{"property", c.property}, {"precision", c.precision.str()}};
  if (!c.agents.empty()) {
    Json agents = Json::array();
    for (const auto& a : c.agents) {
      agents.push_back({{"agent", a.agent},
                        {"value", interval_to_json(a.value)},
                        {"threshold", a.threshold.str()},
                        {"verdict", verdict_name(a.verdict)},
                        {"strict", a.strict}});
    }
    j["agents"] = agents;
  }
  if (!c.pairs.empty() || c.property == "envy-free") {
    Json pairs = Json::array();
    for (const auto& p : c.pairs) {
      pairs.push_back({{"i", p.i},
                       {"j", p.j},
                       {"own", interval_to_json(p.own)},
                       {"other", interval_to_json(p.other)},
                       {"gap", interval_to_json(p.gap)},
                       {"verdict", verdict_name(p.verdict)},
                       {"strict", p.strict}});
    }
    j["pairs"] = pairs;
  }
  j["partition"] = {{"exact", c.partition.exact},
                    {"ok", c.partition.ok},
                    {"horizon", c.partition.horizon},
                    {"detail", c.partition.detail}};
  j["verdict"] = verdict_name(c.verdict);
  return j;
}

Json trace_to_json(const Allocation& a, TimeSlot horizon) {
  Json stages = Json::array();
  for (const auto& s : a.trace) {
    Json events = Json::array();
    for (const auto& ev : s.events) events.push_back({{"slot", ev.slot}, {"flags", ev.flags}, {"action", ev.action}});
    Json values = Json::array();
    for (const auto& v : s.values) values.push_back(interval_to_json(v));
    stages.push_back({{"stage", s.stage},
                      {"remaining", s.remaining},
                      {"recipient", s.recipient},
                      {"mode", s.mode},
                      {"scanned_to", s.scanned_to},
                      {"tie", s.tie},
                      {"values", values},
                      {"assigned", schedule_to_json(s.assigned, horizon)},
                      {"events", events}});
  }
  return {{"method", a.method}, {"stages", stages}};
}

std::string queries_to_jsonl(const Allocation& a) {
  std::string out;
  for (const auto& q : a.queries) {
    Json j = {{"query", q.query}, {"agent", q.agent}, {"piece", q.piece}, {"target", q.target}, {"result", q.result}};
    out += j.dump() + "\n";
  }
  return out;
}

Allocation run_method(const std::string& method, const Economy& e, const Rational& precision) {
  if (method == "ica") return ica_allocate(e, precision);
  if (method == "proportional") return proportional_allocate(e, precision);
  if (method == "divide-choose") return divide_and_choose(e, precision);
  if (method == "selfridge-conway") return selfridge_conway(e, precision);
  if (method == "round-robin") return round_robin(e);
  throw std::invalid_argument("unknown method \"" + method + "\"");
}

}  // namespace slotfair
