#include <doctest.h>

#include <map>
#include <vector>

#include "hur/oracle.hpp"
#include "hur/partition.hpp"
#include "hur/realize.hpp"

using hur::BranchDatum;
using hur::CaseTag;
using hur::Partition;
using hur::StepOverride;

namespace {

void check_chain(const hur::ReductionChain& chain, const std::vector<const char*>& expected) {
    REQUIRE(chain.data.size() == expected.size());
    for (size_t i = 0; i < expected.size(); ++i) {
        CAPTURE(i);
        CHECK(chain.data[i] == BranchDatum::parse(expected[i]));
    }
    CHECK(chain.steps.size() + 1 == chain.data.size());
}

}  // namespace

TEST_CASE("base cases are recognized and realized from the table") {
    const char* bases[] = {"2: 2; 2", "3: 3; 2,1; 2,1", "3: 2,1; 2,1; 2,1; 2,1"};
    for (const char* text : bases) {
        CAPTURE(text);
        const BranchDatum datum = BranchDatum::parse(text);
        CHECK(hur::is_base_case(datum));
        const hur::RealizationCertificate cert = hur::base_realize(datum);
        CHECK(cert.verified);
        CHECK(cert.method == hur::Method::Constructive);
        CHECK(hur::verify(cert.tuple, datum, cert.index_map));
    }
    CHECK_FALSE(hur::is_base_case(BranchDatum::parse("3: 3; 3; 3")));
    CHECK_FALSE(hur::is_base_case(BranchDatum::parse("4: 4; 2,2; 2,1,1")));
    CHECK_THROWS_AS(hur::base_realize(BranchDatum::parse("3: 3; 3; 3")), hur::precondition_error);
}

TEST_CASE("pk selection prefers short, then all-big, then large leading part") {
    // unique minimal length
    CHECK(hur::normalize(BranchDatum::parse("5: 5; 2,2,1; 2,2,1")).pk_index == 0);
    // length tie broken toward the partition with no 1s
    CHECK(hur::normalize(BranchDatum::parse("7: 4,2,1; 3,2,2; 2,2,1,1,1; 2,1,1,1,1,1; 2,1,1,1,1,1"))
              .pk_index == 1);
    CHECK(hur::normalize(BranchDatum::parse("6: 4,1,1; 2,2,2; 2,2,1,1; 2,1,1,1,1; 2,1,1,1,1"))
              .pk_index == 1);
    // both carry 1s: the larger leading part wins
    CHECK(hur::normalize(BranchDatum::parse("6: 4,1,1; 3,2,1; 2,2,1,1; 2,1,1,1,1; 2,1,1,1,1"))
              .pk_index == 0);
}

TEST_CASE("one step, no fixed points in pk") {
    const BranchDatum datum = BranchDatum::parse("5: 5; 2,2,1; 2,2,1");
    const auto [child, step] = hur::reduce_step(datum);
    CHECK(child == BranchDatum::parse("4: 4; 2,2; 2,1,1"));
    CHECK(step.case_tag == CaseTag::A);
    CHECK(step.pk_index == 0);
    CHECK(step.first_index == 1);
    CHECK(step.second_index == 0);
    CHECK(step.decremented_entry_first == 2);
    CHECK(step.decremented_entry_second == 5);
    CHECK(step.ones_dropped == std::vector<int>{2});
    CHECK(step.dropped_trivial.empty());
    CHECK(step.child_of == std::vector<int>{0, 2, 1});
    CHECK_FALSE(step.overridden);
}

TEST_CASE("one step, pk carries fixed points") {
    const BranchDatum datum =
        BranchDatum::parse("6: 3,2,1; 3,2,1; 2,2,1,1; 2,1,1,1,1; 2,1,1,1,1");
    const auto [child, step] = hur::reduce_step(datum);
    CHECK(child == BranchDatum::parse("5: 3,2; 3,1,1; 2,1,1,1; 2,1,1,1; 2,1,1,1"));
    CHECK(step.case_tag == CaseTag::B);
    CHECK(step.pk_index == 0);
    CHECK(step.first_index == 1);
    CHECK(step.second_index == 2);
    CHECK(step.decremented_entry_first == 2);
    CHECK(step.decremented_entry_second == 2);
    CHECK(step.ones_dropped == std::vector<int>{0, 3, 4});
    CHECK(step.dropped_trivial.empty());
}

TEST_CASE("partitions that shrink to all 1s drop out of the child") {
    const BranchDatum datum = BranchDatum::parse("3: 3; 2,1; 2,1");
    const auto [child, step] = hur::reduce_step(datum);
    CHECK(child == BranchDatum::parse("2: 2; 2"));
    CHECK(step.dropped_trivial == std::vector<int>{1});
    CHECK(step.child_of == std::vector<int>{0, -1, 1});
}

TEST_CASE("step overrides") {
    const BranchDatum d3 = BranchDatum::parse("5: 4,1; 2,2,1; 2,1,1,1; 2,1,1,1; 2,1,1,1");

    SUBCASE("pk can be forced by value") {
        StepOverride ov;
        ov.pk_value = Partition::parse("2,2,1");
        const auto [child, step] = hur::reduce_step(d3, ov);
        CHECK(step.pk_index == 1);
        CHECK(step.overridden);
        CHECK(child == BranchDatum::parse("4: 3,1; 2,2; 2,1,1; 2,1,1"));
    }
    SUBCASE("pk can be forced by index") {
        StepOverride ov;
        ov.pk_index = 1;
        const auto [child, step] = hur::reduce_step(d3, ov);
        CHECK(step.pk_index == 1);
        CHECK(child == BranchDatum::parse("4: 3,1; 2,2; 2,1,1; 2,1,1"));
    }
    SUBCASE("index and value must agree when both given") {
        StepOverride ov;
        ov.pk_index = 1;
        ov.pk_value = Partition::parse("4,1");
        CHECK_THROWS_AS(hur::reduce_step(d3, ov), hur::validation_error);
    }
    SUBCASE("absent pk value is rejected") {
        StepOverride ov;
        ov.pk_value = Partition::parse("3,2");
        CHECK_THROWS_AS(hur::reduce_step(d3, ov), hur::validation_error);
    }
    SUBCASE("forced decrement entry must be a real part") {
        StepOverride ov;
        ov.decrement_first = 4;
        CHECK_THROWS_AS(hur::reduce_step(d3, ov), hur::validation_error);
    }
    SUBCASE("forced roles must leave droppable fixed points elsewhere") {
        // forcing first onto a transposition partition leaves [2,2,1] neither
        // decremented nor able to drop... it still has a 1, so this succeeds
        StepOverride ov;
        ov.first_index = 2;
        const auto [child, step] = hur::reduce_step(d3, ov);
        CHECK(step.first_index == 2);
        CHECK(step.overridden);
        CHECK(child.candidate_sphere());
    }
    SUBCASE("default steps carry no override flag") {
        const auto [child, step] = hur::reduce_step(d3);
        CHECK_FALSE(step.overridden);
        CHECK(child == BranchDatum::parse("4: 4; 2,1,1; 2,1,1; 2,1,1"));
    }
}

TEST_CASE("recorded chains replay verbatim") {
    SUBCASE("five sheets over three points") {
        const auto chain = hur::reduce_chain(BranchDatum::parse("5: 5; 2,2,1; 2,2,1"),
                                             hur::recorded_chain_overrides(2));
        check_chain(chain, {
                               "5: 5; 2,2,1; 2,2,1",
                               "4: 4; 2,2; 2,1,1",
                               "3: 3; 2,1; 2,1",
                               "2: 2; 2",
                           });
        for (const auto& step : chain.steps) CHECK_FALSE(step.overridden);
    }
    SUBCASE("six sheets, five branch points") {
        const auto chain = hur::reduce_chain(
            BranchDatum::parse("6: 3,2,1; 3,2,1; 2,2,1,1; 2,1,1,1,1; 2,1,1,1,1"),
            hur::recorded_chain_overrides(3));
        check_chain(chain, {
                               "6: 3,2,1; 3,2,1; 2,2,1,1; 2,1,1,1,1; 2,1,1,1,1",
                               "5: 3,2; 3,1,1; 2,1,1,1; 2,1,1,1; 2,1,1,1",
                               "4: 2,2; 2,1,1; 2,1,1; 2,1,1; 2,1,1",
                               "3: 2,1; 2,1; 2,1; 2,1",
                               "2: 2; 2",
                           });
    }
    SUBCASE("six sheets with a long partition") {
        const auto chain = hur::reduce_chain(
            BranchDatum::parse("6: 4,1,1; 3,2,1; 2,2,1,1; 2,1,1,1,1; 2,1,1,1,1"));
        check_chain(chain, {
                               "6: 4,1,1; 3,2,1; 2,2,1,1; 2,1,1,1,1; 2,1,1,1,1",
                               "5: 4,1; 3,1,1; 2,1,1,1; 2,1,1,1; 2,1,1,1",
                               "4: 4; 2,1,1; 2,1,1; 2,1,1",
                               "3: 3; 2,1; 2,1",
                               "2: 2; 2",
                           });
    }
    SUBCASE("eight sheets, one recorded divergence from the default policy") {
        const BranchDatum start = BranchDatum::parse(
            "8: 4,2,2; 4,2,2; 2,2,1,1,1,1; 2,1,1,1,1,1,1; 2,1,1,1,1,1,1");
        const auto chain = hur::reduce_chain(start, hur::recorded_chain_overrides(4));
        check_chain(chain, {
                               "8: 4,2,2; 4,2,2; 2,2,1,1,1,1; 2,1,1,1,1,1,1; 2,1,1,1,1,1,1",
                               "7: 4,2,1; 3,2,2; 2,2,1,1,1; 2,1,1,1,1,1; 2,1,1,1,1,1",
                               "6: 4,1,1; 2,2,2; 2,2,1,1; 2,1,1,1,1; 2,1,1,1,1",
                               "5: 4,1; 2,2,1; 2,1,1,1; 2,1,1,1; 2,1,1,1",
                               "4: 3,1; 2,2; 2,1,1; 2,1,1",
                               "3: 2,1; 2,1; 2,1; 2,1",
                               "2: 2; 2",
                           });
        CHECK(chain.steps[3].overridden);

        // the default policy diverges exactly at that step
        const auto def = hur::reduce_chain(start);
        CHECK(def.data[4] == BranchDatum::parse("4: 4; 2,1,1; 2,1,1; 2,1,1"));
        for (const auto& step : def.steps) CHECK_FALSE(step.overridden);
    }
    SUBCASE("recorded overrides exist only for the three shipped chains") {
        CHECK(hur::recorded_chain_overrides(2).empty());
        CHECK(hur::recorded_chain_overrides(3).empty());
        CHECK(hur::recorded_chain_overrides(4).size() == 1);
        CHECK_THROWS_AS(hur::recorded_chain_overrides(1), hur::validation_error);
        CHECK_THROWS_AS(hur::recorded_chain_overrides(5), hur::validation_error);
    }
}

TEST_CASE("reduce_chain accepts exactly the eligible data") {
    CHECK_THROWS_AS(hur::reduce_chain(BranchDatum::parse("4: 3,1; 2,2; 2,2")),
                    hur::precondition_error);
    CHECK_THROWS_AS(hur::reduce_chain(hur::zheng_family(2, 3)), hur::precondition_error);
    // base cases yield a zero-step chain
    const auto base = hur::reduce_chain(BranchDatum::parse("2: 2; 2"));
    CHECK(base.data.size() == 1);
    CHECK(base.steps.empty());
}

TEST_CASE("gluing a solved child back up one level") {
    const BranchDatum parent = BranchDatum::parse("5: 5; 2,2,1; 2,2,1");
    const auto chain = hur::reduce_chain(parent);
    REQUIRE(chain.data.size() == 4);

    hur::RealizationCertificate cert = hur::base_realize(chain.data.back());
    for (size_t level = chain.steps.size(); level-- > 0;) {
        cert = hur::extend(cert, chain.steps[level], chain.data[level]);
        CAPTURE(level);
        CHECK(cert.verified);
        CHECK(cert.datum == chain.data[level]);
        CHECK(hur::verify(cert.tuple, cert.datum, cert.index_map));
        // every slot carries exactly the prescribed cycle type
        for (int i = 0; i < cert.datum.k(); ++i) {
            const auto& placed =
                cert.tuple.perms[static_cast<size_t>(cert.index_map[static_cast<size_t>(i)])];
            CHECK(placed.cycle_type() == cert.datum.partitions()[static_cast<size_t>(i)]);
        }
    }

    SUBCASE("extend rejects mismatched inputs") {
        const hur::RealizationCertificate base = hur::base_realize(chain.data.back());
        CHECK_THROWS_AS(hur::extend(base, chain.steps[0], chain.data[0]), hur::validation_error);
    }
}

TEST_CASE("end-to-end realization of the recorded inputs") {
    struct Case {
        const char* text;
        int recorded;
    };
    const Case cases[] = {
        {"5: 5; 2,2,1; 2,2,1", 2},
        {"6: 3,2,1; 3,2,1; 2,2,1,1; 2,1,1,1,1; 2,1,1,1,1", 3},
        {"6: 4,1,1; 3,2,1; 2,2,1,1; 2,1,1,1,1; 2,1,1,1,1", 0},
        {"8: 4,2,2; 4,2,2; 2,2,1,1,1,1; 2,1,1,1,1,1,1; 2,1,1,1,1,1,1", 4},
    };
    for (const auto& c : cases) {
        CAPTURE(c.text);
        const BranchDatum datum = BranchDatum::parse(c.text);

        hur::RealizeOptions opt;
        if (c.recorded) opt.overrides = hur::recorded_chain_overrides(c.recorded);
        const hur::RealizationCertificate cert = hur::realize(datum, opt);
        CHECK(cert.verified);
        CHECK(cert.datum == datum);
        CHECK(hur::verify(cert.tuple, datum, cert.index_map));
        REQUIRE(cert.chain.has_value());
        CHECK(cert.chain->data.front() == datum);
        CHECK(cert.chain->data.back() == BranchDatum::parse("2: 2; 2"));

        // default policy works on the same inputs too
        const hur::RealizationCertificate plain = hur::realize(datum);
        CHECK(plain.verified);
    }
}

TEST_CASE("realization is deterministic") {
    const BranchDatum datum =
        BranchDatum::parse("6: 3,2,1; 3,2,1; 2,2,1,1; 2,1,1,1,1; 2,1,1,1,1");
    const auto a = hur::realize(datum);
    const auto b = hur::realize(datum);
    REQUIRE(a.tuple.perms.size() == b.tuple.perms.size());
    for (size_t i = 0; i < a.tuple.perms.size(); ++i) CHECK(a.tuple.perms[i] == b.tuple.perms[i]);
    CHECK(a.index_map == b.index_map);
    CHECK(a.method == b.method);
}

TEST_CASE("realize covers a sampled slice of small eligible data with oracle agreement") {
    const char* sample[] = {
        "4: 4; 2,1,1; 2,1,1; 2,1,1",
        "4: 2,2; 2,2; 2,1,1; 2,1,1",
        "5: 3,2; 2,2,1; 2,2,1; 2,1,1,1",
        "5: 5; 2,2,1; 2,1,1,1; 2,1,1,1",
        "6: 6; 2,2,1,1; 2,2,2",
        "6: 5,1; 2,2,1,1; 2,2,1,1; 2,2,1,1",
        "6: 3,3; 2,2,1,1; 2,2,1,1; 2,2,1,1",
        "7: 4,3; 2,2,2,1; 2,2,1,1,1; 2,2,1,1,1",
    };
    for (const char* text : sample) {
        CAPTURE(text);
        const BranchDatum datum = BranchDatum::parse(text);
        REQUIRE(hur::constructive_applies(datum));
        const auto cert = hur::realize(datum);
        CHECK(cert.verified);
        const auto dec = hur::decide(datum);
        CHECK(dec.outcome == hur::Outcome::Realizable);
    }
}

TEST_CASE("realize refuses ineligible data") {
    CHECK_THROWS_AS(hur::realize(BranchDatum::parse("4: 3,1; 2,2; 2,2")),
                    hur::precondition_error);
    CHECK_THROWS_AS(hur::realize(hur::zheng_family(2, 3)), hur::precondition_error);
}
