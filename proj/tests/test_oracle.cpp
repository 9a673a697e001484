#include <doctest.h>

#include <chrono>
#include <random>
#include <vector>

#include "hur/oracle.hpp"
#include "hur/partition.hpp"
#include "hur/permutation.hpp"
#include "naive_oracle.hpp"

using hur::BranchDatum;
using hur::Outcome;
using hur::Permutation;

TEST_CASE("decide handles the degenerate data") {
    const hur::Decision empty = hur::decide(BranchDatum(1, {}));
    CHECK(empty.outcome == Outcome::Realizable);

    const hur::Decision two = hur::decide(BranchDatum::parse("2: 2; 2"));
    CHECK(two.outcome == Outcome::Realizable);
    REQUIRE(two.certificate.has_value());
    CHECK(two.certificate->tuple.perms[0].str() == "(1 2)");

    CHECK_THROWS_AS(hur::decide(BranchDatum::parse("4: 4; 2,1,1; 2,1,1")),
                    hur::precondition_error);
}

TEST_CASE("decide finds certificates that verify") {
    const char* realizable[] = {
        "5: 5; 2,2,1; 2,2,1",
        "6: 3,2,1; 3,2,1; 2,2,1,1; 2,1,1,1,1; 2,1,1,1,1",
        "6: 4,1,1; 3,2,1; 2,2,1,1; 2,1,1,1,1; 2,1,1,1,1",
        "4: 4; 4; 2,2",
        "4: 2,2; 2,2; 2,2",
        "3: 3; 3; 3",
    };
    for (const char* text : realizable) {
        CAPTURE(text);
        const BranchDatum datum = BranchDatum::parse(text);
        const hur::Decision dec = hur::decide(datum);
        CHECK(dec.outcome == Outcome::Realizable);
        REQUIRE(dec.certificate.has_value());
        CHECK(hur::verify(dec.certificate->tuple, datum, dec.certificate->index_map));
        CHECK(dec.deterministic);
        CHECK(dec.nodes > 0);
    }
}

TEST_CASE("decide proves the small exceptional data exhaustively") {
    const hur::Decision four = hur::decide(BranchDatum::parse("4: 3,1; 2,2; 2,2"));
    CHECK(four.outcome == Outcome::Exceptional);
    CHECK_FALSE(four.certificate.has_value());

    const hur::Decision zheng = hur::decide(hur::zheng_family(2, 3));
    CHECK(zheng.outcome == Outcome::Exceptional);

    // disconnected-only datum: every factor fixes a point, never transitive
    const hur::Decision split = hur::decide(BranchDatum::parse("2: 2; 2; 2; 2"));
    CHECK(split.outcome == Outcome::Realizable);
}

TEST_CASE("budget starvation reports unknown, never a wrong answer") {
    hur::DecideOptions opt;
    opt.budget.max_nodes = 3;
    const hur::Decision dec =
        hur::decide(BranchDatum::parse("6: 3,2,1; 3,2,1; 2,2,1,1; 2,1,1,1,1; 2,1,1,1,1"), opt);
    CHECK(dec.outcome == Outcome::Unknown);
    CHECK_FALSE(dec.certificate.has_value());

    hur::DecideOptions timed;
    timed.budget.max_time = std::chrono::milliseconds(0);
    const hur::Decision t = hur::decide(hur::zheng_family(2, 4), timed);
    CHECK(t.outcome == Outcome::Unknown);
}

TEST_CASE("verification is strict") {
    const BranchDatum datum = BranchDatum::parse("5: 5; 2,2,1; 2,2,1");
    const hur::Decision dec = hur::decide(datum);
    REQUIRE(dec.certificate.has_value());
    const hur::Tuple& tuple = dec.certificate->tuple;
    const std::vector<int>& index_map = dec.certificate->index_map;

    CHECK(hur::verify(tuple, datum, index_map));

    // the two-argument form assumes slots already sit in datum order
    hur::Tuple base;
    base.degree = 2;
    base.perms = {Permutation::parse(2, "(1 2)"), Permutation::parse(2, "(1 2)")};
    CHECK(hur::verify(base, BranchDatum::parse("2: 2; 2")));

    SUBCASE("conjugating every factor by the same permutation preserves validity") {
        std::mt19937 rng(5);
        std::vector<int> images{1, 2, 3, 4, 5};
        std::shuffle(images.begin(), images.end(), rng);
        const Permutation s{std::vector<int>(images)};
        hur::Tuple moved = tuple;
        for (auto& p : moved.perms) p = hur::conjugate(p, s);
        CHECK(hur::verify(moved, datum, index_map));
    }
    SUBCASE("breaking the product breaks verification") {
        hur::Tuple bad = tuple;
        // invert the 5-cycle: same cycle type, only the product test can fail
        const auto slot = static_cast<size_t>(index_map[0]);
        bad.perms[slot] = bad.perms[slot].inverse();
        CHECK_FALSE(hur::verify(bad, datum, index_map));
    }
    SUBCASE("wrong cycle type breaks verification") {
        hur::Tuple bad = tuple;
        bad.perms[static_cast<size_t>(index_map[0])] = Permutation(5);
        CHECK_FALSE(hur::verify(bad, datum, index_map));
    }
    SUBCASE("intransitive tuples are rejected") {
        const BranchDatum flat = BranchDatum::parse("4: 2,2; 2,2");
        hur::Tuple t;
        t.degree = 4;
        t.perms = {Permutation::parse(4, "(1 2)(3 4)"), Permutation::parse(4, "(1 2)(3 4)")};
        CHECK_FALSE(hur::verify(t, flat, {0, 1}));
    }
    SUBCASE("index map must be a bijection onto the slots") {
        CHECK_FALSE(hur::verify(tuple, datum, {0, 0, 1}));
        CHECK_FALSE(hur::verify(tuple, datum, {0, 1}));
    }
}

TEST_CASE("search agrees with the naive reference on every genus-consistent datum, d <= 5") {
    // k is capped so the reference enumeration stays tractable; nu <= 2d keeps
    // genus 0 and 1 in the corpus.
    int checked = 0;
    int realizable_count = 0;
    for (int d = 2; d <= 5; ++d) {
        const auto pool = hur::nontrivial_partitions(d);
        std::vector<size_t> stack;
        std::function<void(size_t, int)> walk = [&](size_t from, int nu) {
            if (!stack.empty()) {
                const int k = static_cast<int>(stack.size());
                BranchDatum datum = [&] {
                    std::vector<hur::Partition> parts;
                    for (size_t idx : stack) parts.push_back(pool[idx]);
                    return BranchDatum(d, std::move(parts));
                }();
                if (datum.genus_consistent() && k >= 2) {
                    const bool expected = hur_test::naive_realizable(datum);
                    const hur::Decision dec = hur::decide(datum);
                    CAPTURE(datum.str());
                    CHECK(dec.outcome == (expected ? Outcome::Realizable : Outcome::Exceptional));
                    ++checked;
                    if (expected) ++realizable_count;
                }
            }
            if (stack.size() == 5 || nu >= 2 * d) return;
            for (size_t i = from; i < pool.size(); ++i) {
                stack.push_back(i);
                walk(i, nu + pool[i].nu());
                stack.pop_back();
            }
        };
        walk(0, 0);
    }
    CHECK(checked > 100);
    CHECK(realizable_count > 0);
    CHECK(realizable_count < checked);  // the corpus contains exceptional data
}

TEST_CASE("worker sharding returns the same outcomes") {
    hur::DecideOptions two;
    two.workers = 2;
    const char* cases[] = {
        "5: 5; 2,2,1; 2,2,1",
        "4: 3,1; 2,2; 2,2",
        "6: 4,1,1; 2,2,2; 2,2,2; 2,1,1,1,1",
    };
    for (const char* text : cases) {
        CAPTURE(text);
        const BranchDatum datum = BranchDatum::parse(text);
        const hur::Decision seq = hur::decide(datum);
        const hur::Decision par = hur::decide(datum, two);
        CHECK(seq.outcome == par.outcome);
        if (par.certificate)
            CHECK(hur::verify(par.certificate->tuple, datum, par.certificate->index_map));
    }
}
