#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "hur/atlas.hpp"
#include "hur/oracle.hpp"
#include "hur/partition.hpp"
#include "hur/realize.hpp"

namespace hur {

nlohmann::json to_json(const Partition& p);        // [2,2,1]
nlohmann::json to_json(const BranchDatum& d);      // {"degree":5,"partitions":[[5],[2,2,1],...]}
nlohmann::json to_json(const Tuple& t);            // ["(1 2)","(1 3)",...]
nlohmann::json to_json(const DatumReport& r);
nlohmann::json to_json(const ReductionStep& s);
nlohmann::json to_json(const ReductionChain& c);   // alternating [datum, step, datum, ...]
nlohmann::json to_json(const RealizationCertificate& cert);
nlohmann::json to_json(const Decision& dec, const BranchDatum& datum);
nlohmann::json to_json(const ClassificationRecord& rec);

Outcome outcome_from_name(const std::string& name);

/// Accepts the object form produced by to_json or a datum string "5: 5; 2,2,1; 2,2,1";
/// partitions may be arrays of parts or partition strings.
BranchDatum datum_from_json(const nlohmann::json& j);

Tuple tuple_from_json(int degree, const nlohmann::json& j);

struct ParsedCertificate {
    BranchDatum datum;
    Tuple tuple;
    std::vector<int> index_map;
};

/// Reads a certificate document: either the realize shape (top-level datum, tuple,
/// index_map) or a decide report carrying its certificate next to the datum.
ParsedCertificate certificate_from_json(const nlohmann::json& j);

/// {"3": {"pk_value": "2,2,1"}, ...}: step index to forced choices.
std::map<int, StepOverride> overrides_from_json(const nlohmann::json& j);

}  // namespace hur
