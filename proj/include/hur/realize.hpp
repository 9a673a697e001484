#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "hur/oracle.hpp"
#include "hur/partition.hpp"
#include "hur/permutation.hpp"

namespace hur {

/// A: the minimal partition has no 1s, so it is decremented together with the first
/// partition. B: it has a 1, so the first and second partitions are decremented.
enum class CaseTag { A, B };

struct ReductionStep {
    CaseTag case_tag = CaseTag::A;
    int pk_index = -1;      // parent index of the partition playing the minimal role
    int first_index = -1;   // its smallest part >= 2 is decremented
    int second_index = -1;  // case A: pk_index (largest part); case B: second partition
    int decremented_entry_first = 0;   // part values before the decrement
    int decremented_entry_second = 0;
    std::vector<int> ones_dropped;     // parent indices that lose one fixed point
    std::vector<int> dropped_trivial;  // parent indices removed because they became all 1s
    std::vector<int> child_of;         // parent index -> child index, -1 if dropped
    bool overridden = false;
};

/// Forces individual choices of reduce_step; unset fields keep the default policy.
struct StepOverride {
    std::optional<int> pk_index;
    std::optional<Partition> pk_value;  // first partition equal to this value
    std::optional<int> first_index;
    std::optional<int> second_index;    // case B only; case A pins it to pk_index
    std::optional<int> decrement_first;   // part value to decrement instead of the default
    std::optional<int> decrement_second;
};

struct ReductionChain {
    std::vector<BranchDatum> data;     // data.front() = input, data.back() = terminal
    std::vector<ReductionStep> steps;  // steps[i] turns data[i] into data[i+1]
};

enum class Method { Constructive, ConstructiveWithRepair, OracleFallback };
const char* method_name(Method m);

struct RealizationCertificate {
    BranchDatum datum;
    Tuple tuple;
    std::vector<int> index_map;  // datum partition index -> tuple position
    Method method = Method::Constructive;
    std::optional<ReductionChain> chain;
    bool verified = false;
};

/// order[0..k-2] = the remaining partitions sorted by q descending, then largest part
/// descending, then lexicographically descending; order[k-1] = the minimal partition
/// (ties prefer no 1s, then the larger first part, then lexicographically larger).
struct NormalizeResult {
    std::vector<int> order;
    int pk_index = -1;
};

NormalizeResult normalize(const BranchDatum& datum);

/// {[2],[2]}, {[3],[2,1],[2,1]} or {[2,1],[2,1],[2,1],[2,1]}.
bool is_base_case(const BranchDatum& datum);

/// One degree-lowering step. Case A decrements the first partition's smallest part
/// >= 2 and the minimal partition's largest part; case B decrements the smallest
/// parts >= 2 of the first and second partitions; every other partition drops one
/// fixed point. Partitions left with only 1s are removed.
std::pair<BranchDatum, ReductionStep> reduce_step(const BranchDatum& datum,
                                                  const std::optional<StepOverride>& choice = {});

/// Repeats reduce_step down to {[2],[2]}; a base-case input yields a zero-step chain.
/// Every produced level must remain eligible for the construction, otherwise the
/// default policy itself is broken and a logic_error is thrown.
ReductionChain reduce_chain(const BranchDatum& datum,
                            const std::map<int, StepOverride>& overrides = {});

/// Fixed verified tuples for the three base cases.
RealizationCertificate base_realize(const BranchDatum& datum);

struct RealizeOptions {
    std::map<int, StepOverride> overrides;  // step index -> forced choices
    int braid_depth = 4;                    // repair search bound
    DecideOptions fallback;                 // search options if repair fails
};

/// Raised when the fallback search runs out of budget, leaving the datum undecided.
struct budget_exhausted_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Grows a verified certificate of the child datum into one of the parent datum by
/// appending the new sheet n = degree as a fixed point everywhere and splicing it
/// into the two designated cycles: with designated tuple positions p < q, the new
/// tuple multiplies a transposition (x n) on the right of position p and (y n) on
/// the left of position q, which cancels through the interleaved product exactly
/// when y is the image of x under that product. Partitions dropped as trivial
/// re-enter as identity permutations before the splice. If no x works, bounded
/// braid-move repositioning is tried, then a fresh oracle search.
RealizationCertificate extend(const RealizationCertificate& child, const ReductionStep& step,
                              const BranchDatum& parent, const RealizeOptions& options = {});

/// reduce_chain + base_realize + extend folded back up. The result is always
/// verified; method records whether repair or fallback was needed.
RealizationCertificate realize(const BranchDatum& datum, const RealizeOptions& options = {});

/// Override sets replaying the recorded reference chains 2, 3 and 4 used by the test
/// suite and the CLI's --paper-chain flag (2 and 3 need none; 4 forces one choice).
std::map<int, StepOverride> recorded_chain_overrides(int which);

}  // namespace hur
