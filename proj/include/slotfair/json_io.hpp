#pragma once

#include <json.hpp>
#include <string>

#include "slotfair/allocation.hpp"
#include "slotfair/rational.hpp"
#include "slotfair/utility.hpp"

namespace slotfair {

using Json = nlohmann::ordered_json;

/// Reads and parses a JSON file. Throws Error(parse_error) naming the line.
Json load_json(const std::string& path);
void save_json(const Json& j, const std::string& path);

Json rational_to_json(const Rational& r);
/// Accepts "p/q" strings and integers. `where` names the field in errors.
Rational rational_from_json(const Json& j, const std::string& where);

Json epset_to_json(const EPSet& s);
EPSet epset_from_json(const Json& j, const std::string& where = "schedule");

/// Closed form as EPSet JSON; lazy schedules as their prefix on [1, horizon].
Json schedule_to_json(const Schedule& s, TimeSlot horizon);
/// A lazy export comes back known on its prefix only.
Schedule schedule_from_json(const Json& j, const std::string& where = "schedule");

Json utility_to_json(const UtilityFn& u);
UtilityFn utility_from_json(const Json& j, const std::string& where = "utility");

Json economy_to_json(const Economy& e);
/// Throws Error(parse_error) with a field path on bad input.
Economy economy_from_json(const Json& j);

/// Records the method and precision so a verifier can rebuild lazy shares.
Json allocation_to_json(const Allocation& a, const Economy& e, const Rational& precision,
                        TimeSlot horizon);
/// Rebuilds shares by rerunning the recorded method when its prefixes match,
/// else falls back to the exported prefixes. Throws Error(schema_mismatch).
Allocation allocation_from_json(const Json& j, const Economy& e);

Json certificate_to_json(const FairnessCertificate& c);
Json trace_to_json(const Allocation& a, TimeSlot horizon);
/// One JSON object per line.
std::string queries_to_jsonl(const Allocation& a);

/// Dispatches on method: ica, proportional, divide-choose, selfridge-conway,
/// round-robin. Throws std::invalid_argument for an unknown name.
Allocation run_method(const std::string& method, const Economy& e, const Rational& precision);

}  // namespace slotfair
