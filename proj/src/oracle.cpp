#include "hur/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>
#include <utility>

namespace hur {

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Realizable: return "realizable";
        case Outcome::Exceptional: return "exceptional";
        default: return "unknown";
    }
}

namespace {

struct Orbits {
    std::vector<int> parent;
    int components;

    explicit Orbits(int d) : parent(static_cast<size_t>(d)), components(d) {
        std::iota(parent.begin(), parent.end(), 0);
    }

    int find(int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    }

    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent[static_cast<size_t>(a)] = b;
            --components;
        }
    }

    void absorb(const Permutation& p) {
        for (int x = 1; x <= static_cast<int>(parent.size()); ++x) unite(x - 1, p.apply(x) - 1);
    }
};

// Slot ordering key only; every slot order searches the same space, so the
// log-domain fallback past degree 20 cannot affect correctness.
long double class_size_key(const Partition& type) {
    if (type.degree() <= 20) return static_cast<long double>(conjugacy_class_size(type));
    long double key = std::lgamma(static_cast<long double>(type.degree()) + 1);
    const auto& parts = type.parts();
    int run = 0;
    for (size_t i = 0; i < parts.size(); ++i) {
        ++run;
        key -= std::log(static_cast<long double>(parts[i]));
        if (i + 1 == parts.size() || parts[i + 1] != parts[i]) {
            key -= std::lgamma(static_cast<long double>(run) + 1);
            run = 0;
        }
    }
    return key;
}

// Generators of the centralizer of p: one rotation per cycle-length class plus
// adjacent swaps of equal-length cycles. Together they generate prod_j Z_j wr S_{m_j}.
std::vector<Permutation> centralizer_generators(const Permutation& p) {
    const int d = p.degree();
    std::map<int, std::vector<std::vector<int>>> by_length;
    std::vector<bool> moved(static_cast<size_t>(d) + 1, false);
    for (const auto& c : p.cycles()) {
        by_length[static_cast<int>(c.size())].push_back(c);
        for (int x : c) moved[static_cast<size_t>(x)] = true;
    }
    for (int x = 1; x <= d; ++x)
        if (!moved[static_cast<size_t>(x)]) by_length[1].push_back({x});

    std::vector<Permutation> gens;
    for (const auto& [len, cycles] : by_length) {
        if (len > 1) {
            std::vector<int> images(static_cast<size_t>(d));
            std::iota(images.begin(), images.end(), 1);
            for (size_t t = 0; t < cycles[0].size(); ++t)
                images[static_cast<size_t>(cycles[0][t]) - 1] = cycles[0][(t + 1) % cycles[0].size()];
            gens.push_back(Permutation(std::move(images)));
        }
        for (size_t i = 0; i + 1 < cycles.size(); ++i) {
            std::vector<int> images(static_cast<size_t>(d));
            std::iota(images.begin(), images.end(), 1);
            for (size_t t = 0; t < cycles[i].size(); ++t) {
                images[static_cast<size_t>(cycles[i][t]) - 1] = cycles[i + 1][t];
                images[static_cast<size_t>(cycles[i + 1][t]) - 1] = cycles[i][t];
            }
            gens.push_back(Permutation(std::move(images)));
        }
    }
    return gens;
}

// One representative per orbit of the centralizer action, in first-seen order.
std::vector<Permutation> orbit_representatives(const std::vector<Permutation>& pool,
                                               const std::vector<Permutation>& gens) {
    std::vector<Permutation> reps;
    std::set<std::vector<int>> seen;
    std::vector<Permutation> frontier;
    for (const auto& beta : pool) {
        if (seen.count(beta.images())) continue;
        reps.push_back(beta);
        seen.insert(beta.images());
        frontier.assign(1, beta);
        while (!frontier.empty()) {
            Permutation cur = std::move(frontier.back());
            frontier.pop_back();
            for (const auto& g : gens) {
                Permutation img = conjugate(cur, g);
                if (seen.insert(img.images()).second) frontier.push_back(std::move(img));
            }
        }
    }
    return reps;
}

struct Driver {
    int d = 0;
    int k = 0;
    int workers = 1;
    std::vector<int> slot_datum;               // datum index held by each tuple slot
    std::vector<const Partition*> slot_part;
    std::vector<long long> nu_suffix;          // sum of nu over slots j..k-1
    std::vector<std::vector<Permutation>> pool;
    std::vector<char> run_sorted;              // slot must not pick below the previous slot's index
    Permutation pinned{1};
    std::optional<std::uint64_t> max_nodes;
    std::optional<std::chrono::steady_clock::time_point> deadline;
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> stop{false};
    std::atomic<bool> starved{false};
    std::mutex winner_mutex;
    std::optional<std::vector<Permutation>> winner;

    bool bump() {
        const auto n = nodes.fetch_add(1, std::memory_order_relaxed) + 1;
        if (max_nodes && n > *max_nodes) {
            starved.store(true, std::memory_order_relaxed);
            stop.store(true, std::memory_order_relaxed);
            return false;
        }
        if (deadline && (n & 1023u) == 0 &&
            std::chrono::steady_clock::now() >= *deadline) {
            starved.store(true, std::memory_order_relaxed);
            stop.store(true, std::memory_order_relaxed);
            return false;
        }
        return !stop.load(std::memory_order_relaxed);
    }

    void record(const std::vector<Permutation>& chosen) {
        std::lock_guard<std::mutex> lock(winner_mutex);
        if (!winner) winner = chosen;
        stop.store(true, std::memory_order_relaxed);
    }

    void dfs(int slot, int worker, int min_idx, std::vector<Permutation>& chosen,
             const Permutation& prefix, const Orbits& orbits) {
        if (slot == k - 1) {
            if (!bump()) return;
            // The last factor is forced to prefix^{-1}, which shares prefix's cycles.
            if (!(prefix.cycle_type() == *slot_part[static_cast<size_t>(slot)])) return;
            Orbits closed = orbits;
            closed.absorb(prefix);
            if (closed.components != 1) return;
            chosen[static_cast<size_t>(slot)] = prefix.inverse();
            record(chosen);
            return;
        }
        const auto& candidates = pool[static_cast<size_t>(slot)];
        const size_t lo = run_sorted[static_cast<size_t>(slot)] ? static_cast<size_t>(min_idx) : 0;
        // Try candidates whose running product stays closest to the identity first;
        // any order is exhaustive, this one reaches certificates sooner.
        std::vector<std::pair<int, int>> ranked;
        ranked.reserve(candidates.size() - lo);
        for (size_t i = lo; i < candidates.size(); ++i) {
            if (slot == 1 && workers > 1 && static_cast<int>(i % static_cast<size_t>(workers)) != worker)
                continue;
            ranked.emplace_back(compose(prefix, candidates[i]).cycle_count(), static_cast<int>(i));
        }
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        for (const auto& [count, idx] : ranked) {
            if (stop.load(std::memory_order_relaxed)) return;
            if (!bump()) return;
            if (d - count > nu_suffix[static_cast<size_t>(slot) + 1]) continue;
            const Permutation& alpha = candidates[static_cast<size_t>(idx)];
            Orbits grown = orbits;
            grown.absorb(alpha);
            if (grown.components - 1 > nu_suffix[static_cast<size_t>(slot) + 1]) continue;
            chosen[static_cast<size_t>(slot)] = alpha;
            dfs(slot + 1, worker, idx, chosen, compose(prefix, alpha), grown);
            if (stop.load(std::memory_order_relaxed)) return;
        }
    }
};

}  // namespace

Decision decide(const BranchDatum& datum, const DecideOptions& options) {
    if (!datum.genus_consistent())
        throw precondition_error("decide requires a genus-consistent datum: " + datum.str());
    const auto start = std::chrono::steady_clock::now();
    const auto elapsed = [&start] {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - start);
    };

    Decision result;
    const int d = datum.degree();
    const int k = datum.k();

    if (k == 0) {
        // Only the degree-1 datum is genus-consistent with no branch points;
        // the empty tuple acts transitively on one point.
        result.outcome = Outcome::Realizable;
        result.certificate = OracleCertificate{Tuple{1, {}}, {}};
        result.wall_time = elapsed();
        return result;
    }
    if (k == 1) {
        // A single nontrivial factor cannot be the identity.
        result.outcome = Outcome::Exceptional;
        result.wall_time = elapsed();
        return result;
    }

    std::vector<int> order(static_cast<size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return class_size_key(datum.partitions()[static_cast<size_t>(a)]) <
               class_size_key(datum.partitions()[static_cast<size_t>(b)]);
    });

    Driver drv;
    drv.d = d;
    drv.k = k;
    drv.workers = (k >= 3 && options.workers > 1) ? options.workers : 1;
    drv.slot_datum = order;
    drv.slot_part.resize(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j)
        drv.slot_part[static_cast<size_t>(j)] = &datum.partitions()[static_cast<size_t>(order[static_cast<size_t>(j)])];
    drv.nu_suffix.assign(static_cast<size_t>(k) + 1, 0);
    for (int j = k - 1; j >= 0; --j)
        drv.nu_suffix[static_cast<size_t>(j)] =
            drv.nu_suffix[static_cast<size_t>(j) + 1] + drv.slot_part[static_cast<size_t>(j)]->nu();
    drv.max_nodes = options.budget.max_nodes;
    if (options.budget.max_time) drv.deadline = start + *options.budget.max_time;
    drv.pinned = class_representative(*drv.slot_part[0]);

    // Braid moves let any solution be rewritten, without changing product, classes or
    // the generated group, so that equal-class runs among the free slots carry
    // non-decreasing candidate indices: a move at a descent strictly lex-decreases the
    // tuple, so normal forms exist. Slot 1 is excluded: its centralizer reduction
    // below conjugates the deeper slots and does not preserve index order across the
    // (1,2) pair.
    drv.run_sorted.assign(static_cast<size_t>(k), 0);
    for (int j = 3; j <= k - 2; ++j)
        drv.run_sorted[static_cast<size_t>(j)] =
            *drv.slot_part[static_cast<size_t>(j)] == *drv.slot_part[static_cast<size_t>(j) - 1] ? 1 : 0;

    drv.pool.resize(static_cast<size_t>(k));
    bool pools_ok = true;
    for (int j = 1; j + 1 < k && pools_ok; ++j) {
        auto& bucket = drv.pool[static_cast<size_t>(j)];
        if (d <= 20) bucket.reserve(conjugacy_class_size(*drv.slot_part[static_cast<size_t>(j)]));
        pools_ok = enumerate_class(*drv.slot_part[static_cast<size_t>(j)], [&](const Permutation& p) {
            if (!drv.bump()) return false;
            bucket.push_back(p);
            return true;
        });
    }

    if (pools_ok && k >= 3) {
        // Conjugating a solution by anything commuting with the pinned factor yields
        // another solution with the same slot-0 entry, so slot 1 only needs one
        // candidate per centralizer orbit.
        drv.pool[1] = orbit_representatives(drv.pool[1], centralizer_generators(drv.pinned));
    }

    if (pools_ok) {
        Orbits base(d);
        base.absorb(drv.pinned);
        if (drv.workers == 1) {
            std::vector<Permutation> chosen(static_cast<size_t>(k), Permutation(d));
            chosen[0] = drv.pinned;
            drv.dfs(1, 0, 0, chosen, drv.pinned, base);
        } else {
            std::vector<std::thread> crew;
            crew.reserve(static_cast<size_t>(drv.workers));
            for (int w = 0; w < drv.workers; ++w) {
                crew.emplace_back([&drv, &base, w] {
                    std::vector<Permutation> chosen(static_cast<size_t>(drv.k), Permutation(drv.d));
                    chosen[0] = drv.pinned;
                    drv.dfs(1, w, 0, chosen, drv.pinned, base);
                });
            }
            for (auto& t : crew) t.join();
        }
    }

    result.nodes = drv.nodes.load();
    result.workers = drv.workers;
    result.deterministic = drv.workers == 1;
    if (drv.winner) {
        std::vector<int> index_map(static_cast<size_t>(k));
        for (int j = 0; j < k; ++j)
            index_map[static_cast<size_t>(drv.slot_datum[static_cast<size_t>(j)])] = j;
        OracleCertificate cert{Tuple{d, std::move(*drv.winner)}, std::move(index_map)};
        if (!verify(cert.tuple, datum, cert.index_map))
            throw std::logic_error("internal: search produced a tuple that fails verification");
        result.outcome = Outcome::Realizable;
        result.certificate = std::move(cert);
    } else if (drv.starved.load()) {
        result.outcome = Outcome::Unknown;
    } else {
        result.outcome = Outcome::Exceptional;
    }
    result.wall_time = elapsed();
    return result;
}

bool verify(const Tuple& tuple, const BranchDatum& datum, const std::vector<int>& index_map) {
    const int k = datum.k();
    if (tuple.degree != datum.degree()) return false;
    if (static_cast<int>(tuple.perms.size()) != k) return false;
    if (static_cast<int>(index_map.size()) != k) return false;
    std::vector<char> used(static_cast<size_t>(k), 0);
    for (int i = 0; i < k; ++i) {
        const int j = index_map[static_cast<size_t>(i)];
        if (j < 0 || j >= k || used[static_cast<size_t>(j)]) return false;
        used[static_cast<size_t>(j)] = 1;
        const Permutation& p = tuple.perms[static_cast<size_t>(j)];
        if (p.degree() != tuple.degree) return false;
        if (!(p.cycle_type() == datum.partitions()[static_cast<size_t>(i)])) return false;
    }
    if (!tuple.product().is_identity()) return false;
    return is_transitive(tuple);
}

bool verify(const Tuple& tuple, const BranchDatum& datum) {
    std::vector<int> identity(static_cast<size_t>(datum.k()));
    std::iota(identity.begin(), identity.end(), 0);
    return verify(tuple, datum, identity);
}

}  // namespace hur
