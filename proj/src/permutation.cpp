#include "hur/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace hur {

Permutation::Permutation(int degree) {
    if (degree < 1) throw validation_error("permutation degree must be positive");
    images_.resize(static_cast<size_t>(degree));
    std::iota(images_.begin(), images_.end(), 1);
}

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
    if (images_.empty()) throw validation_error("permutation degree must be positive");
    std::vector<bool> seen(images_.size() + 1, false);
    for (int v : images_) {
        if (v < 1 || v > static_cast<int>(images_.size()) || seen[static_cast<size_t>(v)])
            throw validation_error("image list is not a bijection on {1..d}");
        seen[static_cast<size_t>(v)] = true;
    }
}

Permutation Permutation::from_cycles(int degree, const std::vector<std::vector<int>>& cycles) {
    Permutation p(degree);
    std::vector<bool> seen(static_cast<size_t>(degree) + 1, false);
    for (const auto& cyc : cycles) {
        for (size_t i = 0; i < cyc.size(); ++i) {
            int a = cyc[i];
            int b = cyc[(i + 1) % cyc.size()];
            if (a < 1 || a > degree) throw validation_error("cycle point " + std::to_string(a) + " out of range");
            if (seen[static_cast<size_t>(a)]) throw validation_error("cycles are not disjoint");
            seen[static_cast<size_t>(a)] = true;
            p.images_[static_cast<size_t>(a - 1)] = b;
        }
    }
    return p;
}

Permutation Permutation::parse(int degree, const std::string& text) {
    std::vector<std::vector<int>> cycles;
    std::vector<int> cur;
    bool open = false;
    std::string num;
    auto flush_num = [&]() {
        if (!num.empty()) {
            cur.push_back(std::stoi(num));
            num.clear();
        }
    };
    for (char c : text) {
        if (c == '(') {
            if (open) throw parse_error("nested '(' in cycles '" + text + "'");
            open = true;
        } else if (c == ')') {
            if (!open) throw parse_error("unmatched ')' in cycles '" + text + "'");
            flush_num();
            if (!cur.empty()) cycles.push_back(cur);
            cur.clear();
            open = false;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            if (!open) throw parse_error("digit outside cycle in '" + text + "'");
            num.push_back(c);
        } else if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
            flush_num();
        } else {
            throw parse_error(std::string("unexpected character '") + c + "' in cycles '" + text + "'");
        }
    }
    if (open) throw parse_error("unterminated cycle in '" + text + "'");
    return from_cycles(degree, cycles);
}

Permutation Permutation::inverse() const {
    std::vector<int> inv(images_.size());
    for (size_t i = 0; i < images_.size(); ++i) inv[static_cast<size_t>(images_[i] - 1)] = static_cast<int>(i) + 1;
    return Permutation(std::move(inv));
}

bool Permutation::is_identity() const {
    for (size_t i = 0; i < images_.size(); ++i)
        if (images_[i] != static_cast<int>(i) + 1) return false;
    return true;
}

std::vector<std::vector<int>> Permutation::cycles() const {
    std::vector<std::vector<int>> out;
    std::vector<bool> seen(images_.size() + 1, false);
    for (int start = 1; start <= degree(); ++start) {
        if (seen[static_cast<size_t>(start)] || apply(start) == start) continue;
        std::vector<int> cyc;
        int x = start;
        do {
            seen[static_cast<size_t>(x)] = true;
            cyc.push_back(x);
            x = apply(x);
        } while (x != start);
        out.push_back(std::move(cyc));
    }
    return out;
}

Partition Permutation::cycle_type() const {
    std::vector<int> lens;
    std::vector<bool> seen(images_.size() + 1, false);
    for (int start = 1; start <= degree(); ++start) {
        if (seen[static_cast<size_t>(start)]) continue;
        int len = 0;
        int x = start;
        do {
            seen[static_cast<size_t>(x)] = true;
            ++len;
            x = apply(x);
        } while (x != start);
        lens.push_back(len);
    }
    return Partition(std::move(lens));
}

int Permutation::cycle_count() const {
    int count = 0;
    std::vector<bool> seen(images_.size() + 1, false);
    for (int start = 1; start <= degree(); ++start) {
        if (seen[static_cast<size_t>(start)]) continue;
        ++count;
        int x = start;
        do {
            seen[static_cast<size_t>(x)] = true;
            x = apply(x);
        } while (x != start);
    }
    return count;
}

int Permutation::cycle_length_of(int x) const {
    int len = 1;
    for (int y = apply(x); y != x; y = apply(y)) ++len;
    return len;
}

std::string Permutation::str() const {
    auto cycs = cycles();
    if (cycs.empty()) return "()";
    std::ostringstream out;
    for (const auto& cyc : cycs) {
        out << '(';
        for (size_t i = 0; i < cyc.size(); ++i) {
            if (i) out << ' ';
            out << cyc[i];
        }
        out << ')';
    }
    return out.str();
}

Permutation compose(const Permutation& a, const Permutation& b) {
    if (a.degree() != b.degree()) throw validation_error("degree mismatch in composition");
    std::vector<int> images(static_cast<size_t>(a.degree()));
    for (int x = 1; x <= a.degree(); ++x) images[static_cast<size_t>(x - 1)] = b.apply(a.apply(x));
    return Permutation(std::move(images));
}

Permutation conjugate(const Permutation& p, const Permutation& s) {
    if (p.degree() != s.degree()) throw validation_error("degree mismatch in conjugation");
    std::vector<int> images(static_cast<size_t>(p.degree()));
    for (int x = 1; x <= p.degree(); ++x) images[static_cast<size_t>(s.apply(x) - 1)] = s.apply(p.apply(x));
    return Permutation(std::move(images));
}

Permutation insert_sheet(const Permutation& p, int x, int n) {
    if (x == n) throw validation_error("insert point equals the new point");
    if (x < 1 || x > p.degree() || n < 1 || n > p.degree()) throw validation_error("insert point out of range");
    if (p.apply(n) != n) throw validation_error("permutation moves the new point");
    std::vector<int> images = p.images();
    for (int z = 1; z <= p.degree(); ++z) {
        int w = images[static_cast<size_t>(z - 1)];
        if (w == x)
            images[static_cast<size_t>(z - 1)] = n;
        else if (w == n)
            images[static_cast<size_t>(z - 1)] = x;
    }
    return Permutation(std::move(images));
}

Permutation insert_sheet_pre(const Permutation& p, int y, int n) {
    if (y == n) throw validation_error("insert point equals the new point");
    if (y < 1 || y > p.degree() || n < 1 || n > p.degree()) throw validation_error("insert point out of range");
    if (p.apply(n) != n) throw validation_error("permutation moves the new point");
    std::vector<int> images = p.images();
    images[static_cast<size_t>(n - 1)] = p.apply(y);
    images[static_cast<size_t>(y - 1)] = n;
    return Permutation(std::move(images));
}

Permutation Tuple::product() const {
    Permutation acc(degree);
    for (const Permutation& p : perms) acc = compose(acc, p);
    return acc;
}

bool is_transitive(const Tuple& t) {
    std::vector<int> parent(static_cast<size_t>(t.degree) + 1);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) { return parent[static_cast<size_t>(a)] == a ? a : parent[static_cast<size_t>(a)] = find(parent[static_cast<size_t>(a)]); };
    for (const Permutation& p : t.perms)
        for (int x = 1; x <= t.degree; ++x) parent[static_cast<size_t>(find(x))] = find(p.apply(x));
    int roots = 0;
    for (int x = 1; x <= t.degree; ++x)
        if (find(x) == x) ++roots;
    return roots == 1;
}

Tuple braid_move(const Tuple& t, int i) {
    if (i < 1 || i >= static_cast<int>(t.perms.size())) throw validation_error("braid index out of range");
    Tuple out = t;
    out.perms[static_cast<size_t>(i - 1)] = t.perms[static_cast<size_t>(i)];
    out.perms[static_cast<size_t>(i)] = conjugate(t.perms[static_cast<size_t>(i - 1)], t.perms[static_cast<size_t>(i)]);
    return out;
}

Tuple braid_move_inverse(const Tuple& t, int i) {
    if (i < 1 || i >= static_cast<int>(t.perms.size())) throw validation_error("braid index out of range");
    Tuple out = t;
    out.perms[static_cast<size_t>(i - 1)] =
        conjugate(t.perms[static_cast<size_t>(i)], t.perms[static_cast<size_t>(i - 1)].inverse());
    out.perms[static_cast<size_t>(i)] = t.perms[static_cast<size_t>(i - 1)];
    return out;
}

std::uint64_t conjugacy_class_size(const Partition& type) {
    int d = type.degree();
    if (d > 20) throw precondition_error("class size overflows past degree 20");
    std::uint64_t fact = 1;
    for (int i = 2; i <= d; ++i) fact *= static_cast<std::uint64_t>(i);
    std::uint64_t z = 1;
    const auto& parts = type.parts();
    size_t i = 0;
    while (i < parts.size()) {
        size_t j = i;
        std::uint64_t mult_fact = 1;
        while (j < parts.size() && parts[j] == parts[i]) {
            ++j;
            mult_fact *= (j - i);
            z *= static_cast<std::uint64_t>(parts[i]);
        }
        z *= mult_fact;
        i = j;
    }
    return fact / z;
}

namespace {

struct ClassGen {
    int d;
    std::vector<int> lens;      // non-increasing
    std::vector<int> image;     // 1-based, 0 = unset
    std::vector<bool> used;
    const std::function<bool(const Permutation&)>* visit;

    bool emit() {
        std::vector<int> images(static_cast<size_t>(d));
        for (int x = 1; x <= d; ++x) images[static_cast<size_t>(x - 1)] = image[static_cast<size_t>(x)];
        return (*visit)(Permutation(std::move(images)));
    }

    bool place(size_t slot, int min_leader_excl) {
        if (slot == lens.size()) return emit();
        // Leaders of equal-length cycles must increase.
        int lo = (slot > 0 && lens[slot] == lens[slot - 1]) ? min_leader_excl + 1 : 1;
        for (int leader = lo; leader <= d; ++leader) {
            if (used[static_cast<size_t>(leader)]) continue;
            // Leader must be the cycle minimum; members come from points above it.
            used[static_cast<size_t>(leader)] = true;
            bool cont = true;
            if (lens[slot] == 1) {
                image[static_cast<size_t>(leader)] = leader;
                cont = place(slot + 1, leader);
                image[static_cast<size_t>(leader)] = 0;
            } else {
                cont = fill_start(slot, leader);
            }
            used[static_cast<size_t>(leader)] = false;
            if (!cont) return false;
        }
        return true;
    }

    bool fill_start(size_t slot, int leader) {
        return fill(slot, leader, leader, lens[slot] - 1);
    }

    // Extend the current cycle: prev is the point whose image is still open.
    bool fill(size_t slot, int leader, int prev, int remaining) {
        if (remaining == 0) {
            image[static_cast<size_t>(prev)] = leader;
            bool cont = place(slot + 1, leader);
            image[static_cast<size_t>(prev)] = 0;
            return cont;
        }
        for (int m = leader + 1; m <= d; ++m) {
            if (used[static_cast<size_t>(m)]) continue;
            used[static_cast<size_t>(m)] = true;
            image[static_cast<size_t>(prev)] = m;
            bool cont = fill(slot, leader, m, remaining - 1);
            image[static_cast<size_t>(prev)] = 0;
            used[static_cast<size_t>(m)] = false;
            if (!cont) return false;
        }
        return true;
    }
};

}  // namespace

bool enumerate_class(const Partition& type, const std::function<bool(const Permutation&)>& visit) {
    ClassGen gen;
    gen.d = type.degree();
    gen.lens = type.parts();
    gen.image.assign(static_cast<size_t>(gen.d) + 1, 0);
    gen.used.assign(static_cast<size_t>(gen.d) + 1, false);
    gen.visit = &visit;
    return gen.place(0, 0);
}

std::vector<Permutation> class_elements(const Partition& type) {
    std::vector<Permutation> out;
    if (type.degree() <= 20) out.reserve(conjugacy_class_size(type));
    enumerate_class(type, [&](const Permutation& p) {
        out.push_back(p);
        return true;
    });
    return out;
}

Permutation class_representative(const Partition& type) {
    Permutation rep(type.degree());
    enumerate_class(type, [&](const Permutation& p) {
        rep = p;
        return false;
    });
    return rep;
}

}  // namespace hur
