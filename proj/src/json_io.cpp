#include "hur/json_io.hpp"

#include <stdexcept>
#include <utility>

namespace hur {

using nlohmann::json;

json to_json(const Partition& p) { return json(p.parts()); }

json to_json(const BranchDatum& d) {
    json parts = json::array();
    for (const Partition& p : d.partitions()) parts.push_back(to_json(p));
    return json{{"degree", d.degree()}, {"partitions", std::move(parts)}};
}

json to_json(const Tuple& t) {
    json out = json::array();
    for (const Permutation& p : t.perms) out.push_back(p.str());
    return out;
}

json to_json(const DatumReport& r) {
    json out{{"degree", r.degree},
             {"k", r.k},
             {"nu", r.nu},
             {"candidate_sphere", r.candidate_sphere},
             {"genus_consistent", r.genus_consistent},
             {"constructive_eligible", r.constructive_eligible}};
    out["genus"] = r.genus ? json(*r.genus) : json(nullptr);
    out["zheng"] = r.zheng ? json::array({r.zheng->first, r.zheng->second}) : json(nullptr);
    return out;
}

json to_json(const ReductionStep& s) {
    return json{{"case", s.case_tag == CaseTag::A ? "A" : "B"},
                {"pk_index", s.pk_index},
                {"first_index", s.first_index},
                {"second_index", s.second_index},
                {"decrement_first", s.decremented_entry_first},
                {"decrement_second", s.decremented_entry_second},
                {"ones_dropped", s.ones_dropped},
                {"dropped_trivial", s.dropped_trivial},
                {"child_of", s.child_of},
                {"overridden", s.overridden}};
}

json to_json(const ReductionChain& c) {
    json out = json::array();
    for (size_t i = 0; i < c.data.size(); ++i) {
        out.push_back(to_json(c.data[i]));
        if (i < c.steps.size()) out.push_back(to_json(c.steps[i]));
    }
    return out;
}

json to_json(const RealizationCertificate& cert) {
    json out{{"datum", to_json(cert.datum)},
             {"tuple", to_json(cert.tuple)},
             {"index_map", cert.index_map},
             {"method", method_name(cert.method)},
             {"verified", cert.verified}};
    if (cert.chain) out["chain"] = to_json(*cert.chain);
    return out;
}

json to_json(const Decision& dec, const BranchDatum& datum) {
    json out{{"datum", to_json(datum)},
             {"decision", outcome_name(dec.outcome)},
             {"nodes", dec.nodes},
             {"ms", dec.wall_time.count()},
             {"workers", dec.workers},
             {"deterministic", dec.deterministic}};
    out["certificate"] = dec.certificate
                             ? json{{"tuple", to_json(dec.certificate->tuple)},
                                    {"index_map", dec.certificate->index_map}}
                             : json(nullptr);
    return out;
}

json to_json(const ClassificationRecord& rec) {
    json out{{"index", rec.index},
             {"datum", to_json(rec.datum)},
             {"nu", rec.datum.nu()},
             {"decision", outcome_name(rec.decision)},
             {"method", rec.method},
             {"nodes", rec.nodes},
             {"ms", rec.ms}};
    out["certificate"] = rec.certificate ? to_json(*rec.certificate) : json(nullptr);
    return out;
}

Outcome outcome_from_name(const std::string& name) {
    if (name == "realizable") return Outcome::Realizable;
    if (name == "exceptional") return Outcome::Exceptional;
    if (name == "unknown") return Outcome::Unknown;
    throw parse_error("unknown decision: " + name);
}

BranchDatum datum_from_json(const json& j) {
    if (j.is_string()) return BranchDatum::parse(j.get<std::string>());
    if (!j.is_object() || !j.contains("degree") || !j.contains("partitions"))
        throw parse_error("datum JSON needs degree and partitions");
    const int degree = j.at("degree").get<int>();
    std::vector<Partition> parts;
    for (const json& e : j.at("partitions")) {
        if (e.is_string())
            parts.push_back(Partition::parse(e.get<std::string>()));
        else
            parts.push_back(Partition(e.get<std::vector<int>>()));
    }
    return BranchDatum(degree, std::move(parts));
}

Tuple tuple_from_json(int degree, const json& j) {
    if (!j.is_array()) throw parse_error("tuple JSON must be an array of cycle strings");
    Tuple t;
    t.degree = degree;
    for (const json& e : j) t.perms.push_back(Permutation::parse(degree, e.get<std::string>()));
    return t;
}

ParsedCertificate certificate_from_json(const json& j) {
    if (!j.is_object()) throw parse_error("certificate JSON must be an object");
    const json* body = &j;
    if (!j.contains("tuple") && j.contains("certificate") && j.at("certificate").is_object())
        body = &j.at("certificate");
    if (!j.contains("datum")) throw parse_error("certificate JSON carries no datum");
    if (!body->contains("tuple") || !body->contains("index_map"))
        throw parse_error("certificate JSON carries no tuple or index_map");
    BranchDatum datum = datum_from_json(j.at("datum"));
    Tuple tuple = tuple_from_json(datum.degree(), body->at("tuple"));
    auto index_map = body->at("index_map").get<std::vector<int>>();
    return ParsedCertificate{std::move(datum), std::move(tuple), std::move(index_map)};
}

std::map<int, StepOverride> overrides_from_json(const json& j) {
    if (!j.is_object()) throw parse_error("overrides JSON must map step indices to choices");
    std::map<int, StepOverride> out;
    for (const auto& [key, val] : j.items()) {
        int idx = -1;
        try {
            idx = std::stoi(key);
        } catch (...) {
            throw parse_error("bad step index: " + key);
        }
        if (idx < 0) throw parse_error("bad step index: " + key);
        if (!val.is_object()) throw parse_error("override for step " + key + " must be an object");
        StepOverride ov;
        if (val.contains("pk_index")) ov.pk_index = val.at("pk_index").get<int>();
        if (val.contains("pk_value")) {
            const json& pv = val.at("pk_value");
            ov.pk_value = pv.is_string() ? Partition::parse(pv.get<std::string>())
                                         : Partition(pv.get<std::vector<int>>());
        }
        if (val.contains("first_index")) ov.first_index = val.at("first_index").get<int>();
        if (val.contains("second_index")) ov.second_index = val.at("second_index").get<int>();
        if (val.contains("decrement_first"))
            ov.decrement_first = val.at("decrement_first").get<int>();
        if (val.contains("decrement_second"))
            ov.decrement_second = val.at("decrement_second").get<int>();
        out.emplace(idx, std::move(ov));
    }
    return out;
}

}  // namespace hur
