#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hur/atlas.hpp"
#include "hur/json_io.hpp"
#include "hur/oracle.hpp"
#include "hur/partition.hpp"
#include "hur/realize.hpp"

namespace {

using nlohmann::json;

int outcome_exit(hur::Outcome o) {
    switch (o) {
        case hur::Outcome::Realizable: return 0;
        case hur::Outcome::Exceptional: return 1;
        case hur::Outcome::Unknown: return 2;
    }
    return 3;
}

void emit(const json& doc) { std::cout << doc.dump(2) << "\n"; }

std::string tuple_text(const hur::Tuple& t) {
    std::ostringstream out;
    for (size_t i = 0; i < t.perms.size(); ++i) {
        if (i) out << ", ";
        out << t.perms[i].str();
    }
    return out.str();
}

std::string map_text(const std::vector<int>& m) {
    std::ostringstream out;
    for (size_t i = 0; i < m.size(); ++i) {
        if (i) out << ' ';
        out << m[i];
    }
    return out.str();
}

std::string chain_text(const hur::ReductionChain& chain) {
    std::ostringstream out;
    for (size_t i = 0; i < chain.data.size(); ++i) {
        if (i == 0)
            out << "D  = ";
        else
            out << "D" << i << (i < 10 ? " = " : "= ");
        out << chain.data[i].set_str() << "\n";
    }
    return out.str();
}

hur::SearchBudget make_budget(bool nodes_set, std::uint64_t nodes, bool ms_set, std::int64_t ms) {
    hur::SearchBudget b;
    if (nodes_set) {
        if (nodes > 0) b.max_nodes = nodes;  // explicit 0 lifts the HUR_MAX_NODES default
    } else if (const char* env = std::getenv("HUR_MAX_NODES")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) b.max_nodes = v;
    }
    if (ms_set && ms > 0) b.max_time = std::chrono::milliseconds(ms);
    return b;
}

int run_check(const std::string& text, bool json_mode) {
    const hur::BranchDatum datum = hur::BranchDatum::parse(text);
    const hur::DatumReport report = hur::validate(datum);
    if (json_mode) {
        json doc = hur::to_json(report);
        doc["datum"] = hur::to_json(datum);
        emit(doc);
    } else {
        std::cout << "datum: " << datum.str() << "\n"
                  << "degree " << report.degree << ", k " << report.k << ", nu " << report.nu
                  << "\n"
                  << "candidate sphere: " << (report.candidate_sphere ? "yes" : "no") << "\n"
                  << "genus consistent: " << (report.genus_consistent ? "yes" : "no");
        if (report.genus) std::cout << " (genus " << *report.genus << ")";
        std::cout << "\n"
                  << "constructive eligible: " << (report.constructive_eligible ? "yes" : "no")
                  << "\n";
        if (report.zheng)
            std::cout << "known exceptional family: (" << report.zheng->first << ", "
                      << report.zheng->second << ")\n";
    }
    return report.candidate_sphere ? 0 : 1;
}

int run_decide(const hur::BranchDatum& datum, const hur::DecideOptions& opt, bool json_mode) {
    const hur::Decision dec = hur::decide(datum, opt);
    if (json_mode) {
        emit(hur::to_json(dec, datum));
    } else {
        std::cout << "datum: " << datum.str() << "\n"
                  << "decision: " << hur::outcome_name(dec.outcome) << "\n";
        if (dec.certificate) {
            std::cout << "tuple: " << tuple_text(dec.certificate->tuple) << "\n"
                      << "index map: " << map_text(dec.certificate->index_map) << "\n";
        }
        std::cout << dec.nodes << " nodes, " << dec.wall_time.count() << " ms, " << dec.workers
                  << (dec.workers == 1 ? " worker" : " workers") << "\n";
    }
    return outcome_exit(dec.outcome);
}

int run_realize(const hur::BranchDatum& datum, const hur::RealizeOptions& ropt, bool with_chain,
                bool json_mode) {
    if (!hur::constructive_applies(datum) && !hur::is_base_case(datum)) {
        std::cerr << "note: the constructive method does not apply to " << datum.str()
                  << "; deciding by search instead\n";
        return run_decide(datum, ropt.fallback, json_mode);
    }
    const hur::RealizationCertificate cert = hur::realize(datum, ropt);
    if (json_mode) {
        emit(hur::to_json(cert));
    } else {
        std::cout << "datum: " << datum.str() << "\n"
                  << "method: " << hur::method_name(cert.method) << "\n"
                  << "verified: " << (cert.verified ? "yes" : "no") << "\n"
                  << "tuple: " << tuple_text(cert.tuple) << "\n"
                  << "index map: " << map_text(cert.index_map) << "\n";
        if (with_chain && cert.chain) std::cout << "chain:\n" << chain_text(*cert.chain);
    }
    return cert.verified ? 0 : 1;
}

int run_reduce(const hur::BranchDatum& datum, const std::map<int, hur::StepOverride>& overrides,
               bool json_mode) {
    const hur::ReductionChain chain = hur::reduce_chain(datum, overrides);
    if (json_mode)
        emit(json{{"datum", hur::to_json(datum)}, {"chain", hur::to_json(chain)}});
    else
        std::cout << chain_text(chain);
    return 0;
}

int run_verify(const std::string& path, bool json_mode) {
    json doc;
    if (path == "-") {
        doc = json::parse(std::cin);
    } else {
        std::ifstream in(path);
        if (!in) throw hur::validation_error("cannot read " + path);
        doc = json::parse(in);
    }
    const hur::ParsedCertificate pc = hur::certificate_from_json(doc);
    const bool ok = hur::verify(pc.tuple, pc.datum, pc.index_map);
    if (json_mode)
        emit(json{{"datum", hur::to_json(pc.datum)}, {"verified", ok}});
    else
        std::cout << "datum: " << pc.datum.str() << "\n"
                  << "verified: " << (ok ? "yes" : "no") << "\n";
    return ok ? 0 : 1;
}

int run_atlas_cmd(int degree, std::string out_path, bool resume, const hur::AtlasOptions& aopt,
                  bool json_mode) {
    if (out_path.empty()) out_path = "atlas-d" + std::to_string(degree) + ".jsonl";
    std::string csv_path = out_path;
    if (csv_path.size() > 6 && csv_path.rfind(".jsonl") == csv_path.size() - 6)
        csv_path = csv_path.substr(0, csv_path.size() - 6) + ".csv";
    else
        csv_path += ".csv";

    const hur::AtlasSummary summary =
        hur::run_atlas(degree, out_path, resume, aopt, [&](const hur::ClassificationRecord& rec) {
            if (!json_mode)
                std::cout << rec.index << ": " << rec.datum.set_str() << " -> "
                          << hur::outcome_name(rec.decision) << " (" << rec.method << ", "
                          << rec.ms << " ms)\n";
        });

    std::ofstream csv(csv_path);
    if (!csv) throw hur::validation_error("cannot open " + csv_path + " for writing");
    csv << summary.csv();
    if (!csv) throw hur::validation_error("write failed on " + csv_path);

    if (json_mode) {
        json rows = json::array();
        for (const auto& r : summary.rows)
            rows.push_back(json{{"k", r.k},
                                {"total", r.total},
                                {"realizable", r.realizable},
                                {"exceptional", r.exceptional},
                                {"unknown", r.unknown}});
        emit(json{{"degree", degree}, {"jsonl", out_path}, {"csv", csv_path}, {"rows", rows}});
    } else {
        std::cout << "records: " << out_path << "\n"
                  << "summary: " << csv_path << "\n"
                  << summary.csv();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"branch data toolkit: validate, decide, realize, reduce, verify, atlas"};
    app.require_subcommand(1);
    bool json_mode = false;

    auto* c_check = app.add_subcommand("check", "validate a datum and report its invariants");
    std::string check_text;
    c_check->add_option("datum", check_text, "datum text, e.g. \"5: 5; 2,2,1; 2,2,1\"")->required();
    c_check->add_flag("--json", json_mode, "emit one JSON document");

    auto* c_decide = app.add_subcommand("decide", "decide realizability by exhaustive search");
    std::string decide_text;
    std::uint64_t decide_nodes = 0;
    std::int64_t decide_ms = 0;
    int decide_workers = 1;
    c_decide->add_option("datum", decide_text, "datum text")->required();
    auto* decide_nodes_opt = c_decide->add_option(
        "--max-nodes", decide_nodes, "search node budget (0 = unlimited; default HUR_MAX_NODES)");
    auto* decide_ms_opt =
        c_decide->add_option("--max-ms", decide_ms, "search time budget in milliseconds");
    c_decide->add_option("--workers", decide_workers, "parallel search workers")
        ->check(CLI::PositiveNumber);
    c_decide->add_flag("--json", json_mode, "emit one JSON document");

    auto* c_realize = app.add_subcommand("realize", "construct a verified certificate");
    std::string realize_text;
    bool realize_with_chain = false;
    std::string realize_override_path;
    int realize_paper_chain = 0;
    int realize_braid_depth = 4;
    std::uint64_t realize_nodes = 0;
    std::int64_t realize_ms = 0;
    c_realize->add_option("datum", realize_text, "datum text")->required();
    c_realize->add_flag("--chain", realize_with_chain, "also print the reduction chain");
    auto* realize_override_opt = c_realize->add_option(
        "--override", realize_override_path, "JSON file forcing reduction choices per step");
    auto* realize_paper_opt =
        c_realize->add_option("--paper-chain", realize_paper_chain, "replay a recorded chain")
            ->check(CLI::Range(2, 4));
    realize_paper_opt->group("");  // hidden
    realize_paper_opt->excludes(realize_override_opt);
    c_realize->add_option("--braid-depth", realize_braid_depth, "repair search depth")
        ->check(CLI::NonNegativeNumber);
    auto* realize_nodes_opt = c_realize->add_option("--max-nodes", realize_nodes,
                                                    "fallback search node budget (0 = unlimited)");
    auto* realize_ms_opt =
        c_realize->add_option("--max-ms", realize_ms, "fallback search time budget in ms");
    c_realize->add_flag("--json", json_mode, "emit one JSON document");

    auto* c_reduce = app.add_subcommand("reduce", "print the degree-lowering chain only");
    std::string reduce_text;
    std::string reduce_override_path;
    int reduce_paper_chain = 0;
    c_reduce->add_option("datum", reduce_text, "datum text")->required();
    auto* reduce_override_opt = c_reduce->add_option(
        "--override", reduce_override_path, "JSON file forcing reduction choices per step");
    auto* reduce_paper_opt =
        c_reduce->add_option("--paper-chain", reduce_paper_chain, "replay a recorded chain")
            ->check(CLI::Range(2, 4));
    reduce_paper_opt->group("");  // hidden
    reduce_paper_opt->excludes(reduce_override_opt);
    c_reduce->add_flag("--json", json_mode, "emit one JSON document");

    auto* c_verify = app.add_subcommand("verify", "check a serialized certificate");
    std::string verify_path{"-"};
    c_verify->add_option("file", verify_path, "certificate JSON file, or - for stdin");
    c_verify->add_flag("--json", json_mode, "emit one JSON document");

    auto* c_atlas = app.add_subcommand("atlas", "classify every candidate datum of a degree");
    int atlas_degree = 0;
    std::string atlas_out;
    bool atlas_resume = false;
    hur::AtlasOptions atlas_options;
    std::uint64_t atlas_nodes = 0;
    std::int64_t atlas_ms = 0;
    c_atlas->add_option("degree", atlas_degree, "degree to enumerate")
        ->required()
        ->check(CLI::Range(2, 64));
    c_atlas->add_option("--out", atlas_out, "JSONL output path (default atlas-d<degree>.jsonl)");
    c_atlas->add_flag("--resume", atlas_resume, "keep existing records and classify the rest");
    c_atlas->add_option("--jobs", atlas_options.jobs, "parallel classification jobs")
        ->check(CLI::PositiveNumber);
    c_atlas->add_option("--k-min", atlas_options.k_min, "smallest partition count to enumerate")
        ->check(CLI::PositiveNumber);
    c_atlas->add_option("--k-max", atlas_options.k_max, "largest partition count (0 = unbounded)")
        ->check(CLI::NonNegativeNumber);
    c_atlas->add_option("--confirm-bound", atlas_options.confirm_bound,
                        "re-prove family records by search up to this degree");
    auto* atlas_nodes_opt = c_atlas->add_option("--max-nodes", atlas_nodes,
                                                "per-datum search node budget (0 = unlimited)");
    auto* atlas_ms_opt =
        c_atlas->add_option("--max-ms", atlas_ms, "per-datum search time budget in ms");
    c_atlas->add_flag("--json", json_mode, "emit one JSON document");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        if (*c_check) return run_check(check_text, json_mode);

        if (*c_decide) {
            hur::DecideOptions opt;
            opt.budget = make_budget(decide_nodes_opt->count() > 0, decide_nodes,
                                     decide_ms_opt->count() > 0, decide_ms);
            opt.workers = decide_workers;
            return run_decide(hur::BranchDatum::parse(decide_text), opt, json_mode);
        }

        if (*c_realize) {
            hur::RealizeOptions ropt;
            ropt.braid_depth = realize_braid_depth;
            ropt.fallback.budget = make_budget(realize_nodes_opt->count() > 0, realize_nodes,
                                               realize_ms_opt->count() > 0, realize_ms);
            if (realize_paper_opt->count() > 0)
                ropt.overrides = hur::recorded_chain_overrides(realize_paper_chain);
            if (realize_override_opt->count() > 0) {
                std::ifstream in(realize_override_path);
                if (!in) throw hur::validation_error("cannot read " + realize_override_path);
                ropt.overrides = hur::overrides_from_json(json::parse(in));
            }
            return run_realize(hur::BranchDatum::parse(realize_text), ropt, realize_with_chain,
                               json_mode);
        }

        if (*c_reduce) {
            std::map<int, hur::StepOverride> overrides;
            if (reduce_paper_opt->count() > 0)
                overrides = hur::recorded_chain_overrides(reduce_paper_chain);
            if (reduce_override_opt->count() > 0) {
                std::ifstream in(reduce_override_path);
                if (!in) throw hur::validation_error("cannot read " + reduce_override_path);
                overrides = hur::overrides_from_json(json::parse(in));
            }
            return run_reduce(hur::BranchDatum::parse(reduce_text), overrides, json_mode);
        }

        if (*c_verify) return run_verify(verify_path, json_mode);

        if (*c_atlas) {
            atlas_options.budget = make_budget(atlas_nodes_opt->count() > 0, atlas_nodes,
                                               atlas_ms_opt->count() > 0, atlas_ms);
            return run_atlas_cmd(atlas_degree, atlas_out, atlas_resume, atlas_options, json_mode);
        }
    } catch (const hur::budget_exhausted_error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const hur::precondition_error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const hur::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 3;
    } catch (const hur::validation_error& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 3;
}
