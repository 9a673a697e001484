#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hur/partition.hpp"

namespace hur {

/// Permutation of {1..d}. Composition is apply-left-first: (a*b)(x) = b(a(x)).
class Permutation {
public:
    explicit Permutation(int degree);                 // identity
    explicit Permutation(std::vector<int> images);    // images[i-1] = image of i

    static Permutation from_cycles(int degree, const std::vector<std::vector<int>>& cycles);
    /// "(1 2 3)(4 5)"; "()" is the identity. Fixed points may be omitted.
    static Permutation parse(int degree, const std::string& text);

    int degree() const { return static_cast<int>(images_.size()); }
    int apply(int x) const { return images_[static_cast<size_t>(x - 1)]; }
    const std::vector<int>& images() const { return images_; }

    Permutation inverse() const;
    bool is_identity() const;

    /// Cycles of length >= 2, each starting at its smallest point, ordered by that point.
    std::vector<std::vector<int>> cycles() const;
    Partition cycle_type() const;
    int cycle_count() const;           // including fixed points
    int cycle_length_of(int x) const;

    std::string str() const;

    bool operator==(const Permutation& other) const { return images_ == other.images_; }

private:
    std::vector<int> images_;
};

/// (a*b)(x) = b(a(x))
Permutation compose(const Permutation& a, const Permutation& b);

/// s^{-1} * p * s: sends s(x) to s(p(x)).
Permutation conjugate(const Permutation& p, const Permutation& s);

/// p * (x n), requiring p(n) = n and x != n: the new point n is spliced into
/// the cycle of x (n maps to x), growing that cycle by exactly one.
Permutation insert_sheet(const Permutation& p, int x, int n);

/// (y n) * p, requiring p(n) = n and y != n: splices n in immediately after y.
Permutation insert_sheet_pre(const Permutation& p, int y, int n);

struct Tuple {
    int degree = 1;
    std::vector<Permutation> perms;

    Permutation product() const;
};

bool is_transitive(const Tuple& t);

/// Replaces (t_i, t_{i+1}) by (t_{i+1}, t_{i+1}^{-1} t_i t_{i+1}); i is 1-based, 1 <= i < k.
/// Preserves the product, the multiset of cycle types, and the generated group.
Tuple braid_move(const Tuple& t, int i);
/// Inverse move: (t_i, t_{i+1}) -> (t_i t_{i+1} t_i^{-1}, t_i).
Tuple braid_move_inverse(const Tuple& t, int i);

/// Number of permutations with the given cycle type: d!/z, z = prod m_j! * j^m_j.
std::uint64_t conjugacy_class_size(const Partition& type);

/// Visits every permutation of the given cycle type exactly once, in a fixed
/// canonical order: cycles placed by decreasing length, leaders (cycle minima)
/// increasing within a length, members ascending. Visitor returns false to stop.
/// Returns false if the visitor stopped the enumeration.
bool enumerate_class(const Partition& type, const std::function<bool(const Permutation&)>& visit);

std::vector<Permutation> class_elements(const Partition& type);

/// First element of enumerate_class: consecutive points, cycles in decreasing length.
Permutation class_representative(const Partition& type);

}  // namespace hur
