#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "hur/partition.hpp"
#include "hur/permutation.hpp"

namespace hur {

struct SearchBudget {
    std::optional<std::uint64_t> max_nodes;
    std::optional<std::chrono::milliseconds> max_time;

    bool unlimited() const { return !max_nodes && !max_time; }
};

enum class Outcome { Realizable, Exceptional, Unknown };

const char* outcome_name(Outcome o);

/// index_map[i] = tuple position whose permutation has the cycle type of datum partition i.
struct OracleCertificate {
    Tuple tuple;
    std::vector<int> index_map;
};

struct Decision {
    Outcome outcome = Outcome::Unknown;
    std::optional<OracleCertificate> certificate;
    std::uint64_t nodes = 0;
    std::chrono::milliseconds wall_time{0};
    int workers = 1;
    bool deterministic = true;   // false when several workers raced for the certificate
};

struct DecideOptions {
    SearchBudget budget;
    int workers = 1;
};

/// Exact decision by permutation search: the datum is realizable iff permutations of
/// the prescribed cycle types compose (left-to-right) to the identity and generate a
/// transitive group. Exceptional is only reported after an exhaustive search.
///
/// Search order: partitions sorted by ascending conjugacy-class size; the first
/// position is pinned to the canonical class representative (conjugating a solution
/// moves it onto the representative, so no solutions are lost); the last position is
/// forced to the inverse of the running product. Prefixes are pruned when the orbits
/// can no longer merge or the forced remainder is too far from the identity.
Decision decide(const BranchDatum& datum, const DecideOptions& options = {});

/// Certificate check: cycle types match under index_map, product is the identity,
/// and the tuple acts transitively.
bool verify(const Tuple& tuple, const BranchDatum& datum, const std::vector<int>& index_map);
/// Positional check (index_map = identity).
bool verify(const Tuple& tuple, const BranchDatum& datum);

}  // namespace hur
