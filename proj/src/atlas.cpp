#include "hur/atlas.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "hur/json_io.hpp"

namespace hur {

namespace {

using clock_type = std::chrono::steady_clock;

std::int64_t ms_since(clock_type::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(clock_type::now() - t0).count();
}

}  // namespace

void enumerate_candidates(int d, const std::function<bool(const BranchDatum&)>& visit,
                          int k_min, int k_max) {
    if (d < 2) throw precondition_error("candidate enumeration needs degree >= 2");
    if (k_min < 1) k_min = 1;
    const int target = 2 * d - 2;
    const std::vector<Partition> pool = nontrivial_partitions(d);
    std::vector<Partition> pick;
    bool stop = false;
    std::function<void(size_t, int)> rec = [&](size_t from, int nu) {
        if (stop) return;
        if (nu == target) {
            const int k = static_cast<int>(pick.size());
            if (k >= k_min && (k_max == 0 || k <= k_max))
                if (!visit(BranchDatum(d, pick))) stop = true;
            return;  // every partition adds at least 1 to nu
        }
        if (k_max != 0 && static_cast<int>(pick.size()) >= k_max) return;
        for (size_t i = from; i < pool.size() && !stop; ++i) {
            if (nu + pool[i].nu() > target) continue;
            pick.push_back(pool[i]);
            rec(i, nu + pool[i].nu());
            pick.pop_back();
        }
    };
    rec(0, 0);
}

std::vector<BranchDatum> candidate_list(int d, int k_min, int k_max) {
    std::vector<BranchDatum> out;
    enumerate_candidates(d, [&](const BranchDatum& datum) {
        out.push_back(datum);
        return true;
    }, k_min, k_max);
    return out;
}

ClassificationRecord classify_one(std::int64_t index, const BranchDatum& datum,
                                  const AtlasOptions& options) {
    const auto t0 = clock_type::now();
    DecideOptions dopt;
    dopt.budget = options.budget;

    if (constructive_applies(datum)) {
        RealizeOptions ropt;
        ropt.fallback = dopt;
        try {
            RealizationCertificate cert = realize(datum, ropt);
            cert.chain.reset();
            ClassificationRecord rec{index, datum,        Outcome::Realizable, "constructive",
                                     std::move(cert), 0, 0};
            rec.ms = ms_since(t0);
            return rec;
        } catch (const budget_exhausted_error&) {
            return ClassificationRecord{index, datum, Outcome::Unknown, "constructive",
                                        std::nullopt, 0, ms_since(t0)};
        }
    }
    if (is_zheng_exceptional(datum)) {
        ClassificationRecord rec{index, datum, Outcome::Exceptional, "zheng-family",
                                 std::nullopt, 0, 0};
        if (datum.degree() <= options.confirm_bound) {
            Decision dec = decide(datum, dopt);
            if (dec.outcome == Outcome::Realizable)
                throw std::logic_error("internal: family datum realized: " + datum.str());
            rec.nodes = dec.nodes;
        }
        rec.ms = ms_since(t0);
        return rec;
    }
    Decision dec = decide(datum, dopt);
    std::optional<RealizationCertificate> cert;
    if (dec.certificate)
        cert = RealizationCertificate{datum,         dec.certificate->tuple,
                                      dec.certificate->index_map, Method::OracleFallback,
                                      std::nullopt,  true};
    return ClassificationRecord{index,     datum,     dec.outcome, "oracle",
                                std::move(cert), dec.nodes, ms_since(t0)};
}

std::string AtlasSummary::csv() const {
    std::ostringstream out;
    out << "degree,k,total,realizable,exceptional,unknown\n";
    for (const Row& r : rows)
        out << degree << ',' << r.k << ',' << r.total << ',' << r.realizable << ','
            << r.exceptional << ',' << r.unknown << '\n';
    return out.str();
}

AtlasSummary run_atlas(int d, const std::string& out_path, bool resume,
                       const AtlasOptions& options,
                       const std::function<void(const ClassificationRecord&)>& on_record) {
    const std::vector<BranchDatum> all = candidate_list(d, options.k_min, options.k_max);

    std::set<std::int64_t> done;
    std::map<int, AtlasSummary::Row> rows;
    auto count = [&](int k, Outcome decision) {
        AtlasSummary::Row& row = rows[k];
        row.k = k;
        row.total += 1;
        if (decision == Outcome::Realizable)
            row.realizable += 1;
        else if (decision == Outcome::Exceptional)
            row.exceptional += 1;
        else
            row.unknown += 1;
    };

    if (resume) {
        std::ifstream in(out_path);
        std::string line;
        std::int64_t lineno = 0;
        while (in && std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            try {
                const nlohmann::json j = nlohmann::json::parse(line);
                const auto index = j.at("index").get<std::int64_t>();
                const BranchDatum datum = datum_from_json(j.at("datum"));
                if (datum.degree() != d)
                    throw validation_error("degree " + std::to_string(datum.degree()) +
                                           " does not belong to this atlas");
                if (!done.insert(index).second) continue;
                count(datum.k(), outcome_from_name(j.at("decision").get<std::string>()));
            } catch (const std::exception& ex) {
                throw validation_error(out_path + ":" + std::to_string(lineno) +
                                       ": unreadable record: " + ex.what());
            }
        }
    }

    std::ofstream out(out_path, resume ? std::ios::app : std::ios::trunc);
    if (!out) throw validation_error("cannot open " + out_path + " for writing");

    std::mutex io_mutex;
    std::atomic<size_t> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&]() {
        for (;;) {
            const size_t i = cursor.fetch_add(1);
            if (i >= all.size()) return;
            if (done.count(static_cast<std::int64_t>(i))) continue;
            try {
                ClassificationRecord rec =
                    classify_one(static_cast<std::int64_t>(i), all[i], options);
                std::lock_guard<std::mutex> lock(io_mutex);
                out << to_json(rec).dump() << '\n';
                out.flush();
                if (!out) throw validation_error("write failed on " + out_path);
                count(all[i].k(), rec.decision);
                if (on_record) on_record(rec);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    if (options.jobs <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(options.jobs));
        for (int t = 0; t < options.jobs; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    AtlasSummary summary;
    summary.degree = d;
    for (const auto& [k, row] : rows) summary.rows.push_back(row);
    return summary;
}

}  // namespace hur
