#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hur/oracle.hpp"
#include "hur/partition.hpp"
#include "hur/realize.hpp"

namespace hur {

/// Streams every multiset of at least k_min nontrivial partitions of d whose total
/// defect is 2d-2, each exactly once, in a fixed order: partitions in descending
/// lexicographic order, multisets built by non-decreasing index. Visitor returns
/// false to stop. k_max = 0 means no upper bound.
void enumerate_candidates(int d, const std::function<bool(const BranchDatum&)>& visit,
                          int k_min = 2, int k_max = 0);

std::vector<BranchDatum> candidate_list(int d, int k_min = 2, int k_max = 0);

struct ClassificationRecord {
    std::int64_t index = -1;
    BranchDatum datum;
    Outcome decision = Outcome::Unknown;
    std::string method;  // "constructive" | "oracle" | "zheng-family"
    std::optional<RealizationCertificate> certificate;
    std::uint64_t nodes = 0;
    std::int64_t ms = 0;
};

struct AtlasOptions {
    int k_min = 2;
    int k_max = 0;          // 0: unbounded
    int jobs = 1;
    int confirm_bound = 8;  // family shortcut is re-proved by search up to this degree
    SearchBudget budget;    // per-datum search budget; default unlimited
};

/// Eligible data go through the degree-lowering construction, known-family data are
/// recorded Exceptional (re-proved by exhaustive search within confirm_bound),
/// everything else is decided by search.
ClassificationRecord classify_one(std::int64_t index, const BranchDatum& datum,
                                  const AtlasOptions& options = {});

struct AtlasSummary {
    struct Row {
        int k = 0;
        std::int64_t total = 0;
        std::int64_t realizable = 0;
        std::int64_t exceptional = 0;
        std::int64_t unknown = 0;
    };
    int degree = 0;
    std::vector<Row> rows;  // ascending k

    std::string csv() const;  // header: degree,k,total,realizable,exceptional,unknown
};

/// Classifies every candidate of degree d, appending one JSON record per line to
/// out_path. With resume, indices already present in the file are kept as they are
/// and skipped. jobs > 1 classifies data in parallel; lines land in completion
/// order and carry their index. Returns the summary over old and new records.
AtlasSummary run_atlas(int d, const std::string& out_path, bool resume,
                       const AtlasOptions& options = {},
                       const std::function<void(const ClassificationRecord&)>& on_record = {});

}  // namespace hur
