#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hur {

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct precondition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Integer partition, parts kept non-increasing.
class Partition {
public:
    explicit Partition(std::vector<int> parts);

    /// Text form: entries separated by ',', each "v" or "v^m".
    /// Whitespace and surrounding brackets are ignored: "2,1^6", "[5]", "1, 4, 1".
    static Partition parse(const std::string& text);

    const std::vector<int>& parts() const { return parts_; }
    int degree() const { return degree_; }
    int length() const { return static_cast<int>(parts_.size()); }
    int q() const { return q_; }              // parts >= 2
    int e() const { return length() - q_; }   // parts == 1
    bool nontrivial() const { return q_ >= 1; }
    int nu() const { return degree_ - length(); }

    /// Smallest part >= 2; throws if the partition is trivial.
    int smallest_big_part() const;
    int largest_part() const { return parts_.front(); }

    /// "2,1^4" (runs of 1 of length >= 2 are exponent-compressed).
    std::string str() const;
    /// "[2,1^4]"
    std::string bracket_str() const;

    bool operator==(const Partition& other) const { return parts_ == other.parts_; }
    std::strong_ordering operator<=>(const Partition& other) const {
        return parts_ <=> other.parts_;    // lexicographic on non-increasing parts
    }

private:
    std::vector<int> parts_;
    int degree_ = 0;
    int q_ = 0;
};

/// All partitions of d, descending lexicographic: [d], [d-1,1], ..., [1^d].
std::vector<Partition> all_partitions(int d);
/// Same with the trivial partition [1^d] removed.
std::vector<Partition> nontrivial_partitions(int d);

/// Multiset of nontrivial partitions of a common degree, stored in
/// descending lexicographic order (multiset semantics, no input-order meaning).
class BranchDatum {
public:
    BranchDatum(int degree, std::vector<Partition> partitions);

    /// Grammar: [degree ":"] partition (";" partition)*.
    /// Without the prefix the degree is taken from the first partition.
    static BranchDatum parse(const std::string& text);

    int degree() const { return degree_; }
    int k() const { return static_cast<int>(partitions_.size()); }
    int nu() const { return nu_; }
    const std::vector<Partition>& partitions() const { return partitions_; }

    bool candidate_sphere() const { return nu_ == 2 * degree_ - 2; }
    bool genus_consistent() const { return nu_ % 2 == 0 && nu_ >= 2 * degree_ - 2; }
    int min_length() const;

    /// "5: 5; 2,2,1; 2,2,1" (round-trips through parse)
    std::string str() const;
    /// "{[5], [2,2,1], [2,2,1]}"
    std::string set_str() const;

    bool operator==(const BranchDatum& other) const {
        return degree_ == other.degree_ && partitions_ == other.partitions_;
    }

private:
    int degree_ = 0;
    int nu_ = 0;
    std::vector<Partition> partitions_;
};

struct DatumReport {
    int degree = 0;
    int k = 0;
    int nu = 0;
    bool candidate_sphere = false;
    bool genus_consistent = false;
    bool constructive_eligible = false;
    std::optional<int> genus;                       // (nu - 2d + 2)/2 when nu is even
    std::optional<std::pair<int, int>> zheng;       // (d', d'') when the datum is in the family
};

DatumReport validate(const BranchDatum& datum);

/// k >= 3, d >= 3, nu = 2d-2, and k >= (minimal partition length) + 2:
/// the hypotheses under which the degree-lowering construction realizes the datum.
bool constructive_applies(const BranchDatum& datum);

/// The exceptional family: d = d'·d'' with d' the minimal prime factor of d and
/// d'' > 2 gives {[d',...,d'], [d',...,d'], [d''+1, 1^(d-d''-1)], [2,1^(d-2)] x (d''-2)}.
BranchDatum zheng_family(int d_prime, int d_dblprime);

/// Matches datum against the family for its degree; (d', d'') on success.
std::optional<std::pair<int, int>> is_zheng_exceptional(const BranchDatum& datum);

}  // namespace hur
