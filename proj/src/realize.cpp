#include "hur/realize.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace hur {

namespace {

// Minimal-role choice: shortest partition; ties prefer no 1s, then the larger
// first part, then the lexicographically larger one, then the earlier index.
bool better_pk(const Partition& a, const Partition& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    if ((a.e() == 0) != (b.e() == 0)) return a.e() == 0;
    if (a.largest_part() != b.largest_part()) return a.largest_part() > b.largest_part();
    return a.parts() > b.parts();
}

int default_pk(const BranchDatum& datum) {
    const auto& ps = datum.partitions();
    int pk = 0;
    for (int i = 1; i < datum.k(); ++i)
        if (better_pk(ps[i], ps[pk])) pk = i;
    return pk;
}

std::vector<int> rest_order(const BranchDatum& datum, int pk) {
    const auto& ps = datum.partitions();
    std::vector<int> rest;
    for (int i = 0; i < datum.k(); ++i)
        if (i != pk) rest.push_back(i);
    std::stable_sort(rest.begin(), rest.end(), [&](int a, int b) {
        if (ps[a].q() != ps[b].q()) return ps[a].q() > ps[b].q();
        if (ps[a].largest_part() != ps[b].largest_part())
            return ps[a].largest_part() > ps[b].largest_part();
        return ps[a].parts() > ps[b].parts();
    });
    return rest;
}

Partition decremented(const Partition& p, int value) {
    std::vector<int> parts = p.parts();
    *std::find(parts.begin(), parts.end(), value) -= 1;
    return Partition(std::move(parts));
}

Partition dropped_one(const Partition& p) {
    std::vector<int> parts = p.parts();
    parts.pop_back();  // parts are non-increasing, the last is a 1
    return Partition(std::move(parts));
}

bool has_part(const Partition& p, int v) {
    return std::find(p.parts().begin(), p.parts().end(), v) != p.parts().end();
}

// Guarantees the default policy relies on. A violated check means the policy
// itself is broken for this input, which the induction rules out.
void check_default_step(const BranchDatum& datum, const std::vector<int>& rest,
                        const ReductionStep& step) {
    const auto& ps = datum.partitions();
    const int d = datum.degree();
    const int k = datum.k();
    auto fail = [&](const std::string& what) {
        throw std::logic_error("degree-lowering guarantees fail on " + datum.str() + ": " + what);
    };
    std::vector<int> tw{2};
    tw.insert(tw.end(), static_cast<size_t>(d - 2), 1);
    const Partition two_one(std::move(tw));

    const Partition& pk = ps[step.pk_index];
    const int first = step.first_index;
    const int second = step.second_index;
    auto dropped = [&](int i) {
        return std::find(step.dropped_trivial.begin(), step.dropped_trivial.end(), i) !=
               step.dropped_trivial.end();
    };

    // every partition after the leading one keeps a fixed point
    for (int i : rest)
        if (i != first && ps[i].e() == 0) fail(ps[i].bracket_str() + " has no 1s");

    if (step.case_tag == CaseTag::A) {
        if (!dropped(first)) {
            for (int i : rest)
                if (pk.q() > ps[i].length())
                    fail("minimal length exceeds the length of " + ps[i].bracket_str());
        } else {
            for (int i : rest)
                if (!(ps[i] == two_one))
                    fail(ps[i].bracket_str() + " should be " + two_one.bracket_str());
            if (k != d + pk.q() - 1) fail("partition count is off for the degenerate shape");
            for (int i : rest)
                if (i != first && pk.q() > ps[i].length())
                    fail("minimal length exceeds the length of " + ps[i].bracket_str());
        }
    } else {
        const int mk = pk.length() - 1;
        if (!dropped(second)) {
            if (mk > ps[first].length())
                fail("minimal length crowds out " + ps[first].bracket_str());
            for (int i : rest)
                if (i != first && mk > ps[i].length() - 1)
                    fail("minimal length crowds out " + ps[i].bracket_str());
        } else if (!dropped(first)) {
            for (int i : rest)
                if (i != first && !(ps[i] == two_one))
                    fail(ps[i].bracket_str() + " should be " + two_one.bracket_str());
            if (k != pk.length() + ps[first].length())
                fail("partition count is off for the degenerate shape");
            if (mk > ps[first].length())
                fail("minimal length crowds out " + ps[first].bracket_str());
            for (int i : rest)
                if (i != first && i != second && mk > ps[i].length())
                    fail("minimal length crowds out " + ps[i].bracket_str());
        } else {
            if (!dropped(second)) fail("the leading partition vanished but the second survived");
            for (int i : rest)
                if (!(ps[i] == two_one))
                    fail(ps[i].bracket_str() + " should be " + two_one.bracket_str());
            if (k != d + pk.length() - 1) fail("partition count is off for the degenerate shape");
            for (int i : rest)
                if (i != first && mk > ps[i].length() - 1)
                    fail("minimal length crowds out " + ps[i].bracket_str());
        }
    }
}

}  // namespace

const char* method_name(Method m) {
    switch (m) {
        case Method::Constructive: return "constructive";
        case Method::ConstructiveWithRepair: return "constructive-with-repair";
        case Method::OracleFallback: return "oracle-fallback";
    }
    return "unknown";
}

NormalizeResult normalize(const BranchDatum& datum) {
    if (!constructive_applies(datum))
        throw precondition_error("normalize needs an eligible datum, got " + datum.str());
    NormalizeResult out;
    out.pk_index = default_pk(datum);
    out.order = rest_order(datum, out.pk_index);
    out.order.push_back(out.pk_index);
    return out;
}

bool is_base_case(const BranchDatum& datum) {
    if (datum.degree() == 2) return datum == BranchDatum::parse("2: 2; 2");
    if (datum.degree() != 3) return false;
    return datum == BranchDatum::parse("3: 3; 2,1; 2,1") ||
           datum == BranchDatum::parse("3: 2,1; 2,1; 2,1; 2,1");
}

std::pair<BranchDatum, ReductionStep> reduce_step(const BranchDatum& datum,
                                                  const std::optional<StepOverride>& choice) {
    if (!constructive_applies(datum))
        throw precondition_error("reduce_step needs an eligible datum, got " + datum.str());
    const auto& ps = datum.partitions();
    const int d = datum.degree();
    const int k = datum.k();

    const StepOverride ov = choice.value_or(StepOverride{});
    const bool forced = ov.pk_index || ov.pk_value || ov.first_index || ov.second_index ||
                        ov.decrement_first || ov.decrement_second;

    ReductionStep step;
    step.overridden = forced;

    int pk = -1;
    if (ov.pk_index) {
        pk = *ov.pk_index;
        if (pk < 0 || pk >= k) throw validation_error("pk_index out of range");
        if (ov.pk_value && !(ps[pk] == *ov.pk_value))
            throw validation_error("pk_index and pk_value disagree");
    } else if (ov.pk_value) {
        for (int i = 0; i < k && pk < 0; ++i)
            if (ps[i] == *ov.pk_value) pk = i;
        if (pk < 0)
            throw validation_error("pk_value " + ov.pk_value->bracket_str() + " not in " + datum.str());
    } else {
        pk = default_pk(datum);
    }
    step.pk_index = pk;
    step.case_tag = ps[pk].e() == 0 ? CaseTag::A : CaseTag::B;

    const std::vector<int> rest = rest_order(datum, pk);

    int first = rest.front();
    if (ov.first_index) {
        first = *ov.first_index;
        if (first < 0 || first >= k || first == pk) throw validation_error("first_index invalid");
    }
    int second = -1;
    if (step.case_tag == CaseTag::A) {
        second = pk;
        if (ov.second_index && *ov.second_index != pk)
            throw validation_error("second_index must stay on the minimal partition when it has no 1s");
    } else {
        for (int i : rest)
            if (i != first && second < 0) second = i;
        if (ov.second_index) {
            second = *ov.second_index;
            if (second < 0 || second >= k || second == pk || second == first)
                throw validation_error("second_index invalid");
        }
    }
    step.first_index = first;
    step.second_index = second;

    int dec_first = ov.decrement_first ? *ov.decrement_first : ps[first].smallest_big_part();
    int dec_second = ov.decrement_second
                         ? *ov.decrement_second
                         : (step.case_tag == CaseTag::A ? ps[pk].largest_part()
                                                        : ps[second].smallest_big_part());
    if (dec_first < 2 || !has_part(ps[first], dec_first))
        throw validation_error("decrement_first is not a part >= 2 of " + ps[first].bracket_str());
    if (dec_second < 2 || !has_part(ps[second], dec_second))
        throw validation_error("decrement_second is not a part >= 2 of " + ps[second].bracket_str());
    step.decremented_entry_first = dec_first;
    step.decremented_entry_second = dec_second;

    for (int i = 0; i < k; ++i) {
        if (i == first || i == second) continue;
        if (ps[i].e() == 0) {
            const std::string msg =
                ps[i].bracket_str() + " in " + datum.str() + " has no fixed point to drop";
            if (forced) throw validation_error(msg);
            throw std::logic_error("degree-lowering policy broken: " + msg);
        }
        step.ones_dropped.push_back(i);
    }

    std::vector<std::pair<Partition, int>> kept;
    step.child_of.assign(static_cast<size_t>(k), -1);
    for (int i = 0; i < k; ++i) {
        Partition child = i == first    ? decremented(ps[i], dec_first)
                          : i == second ? decremented(ps[i], dec_second)
                                        : dropped_one(ps[i]);
        if (child.q() == 0) {
            step.dropped_trivial.push_back(i);
            continue;
        }
        kept.emplace_back(std::move(child), i);
    }
    std::stable_sort(kept.begin(), kept.end(),
                     [](const auto& a, const auto& b) { return a.first.parts() > b.first.parts(); });
    std::vector<Partition> child_parts;
    child_parts.reserve(kept.size());
    for (size_t pos = 0; pos < kept.size(); ++pos) {
        step.child_of[static_cast<size_t>(kept[pos].second)] = static_cast<int>(pos);
        child_parts.push_back(kept[pos].first);
    }
    if (child_parts.empty()) throw std::logic_error("internal: every partition became trivial");

    if (!forced) check_default_step(datum, rest, step);

    BranchDatum result(d - 1, std::move(child_parts));
    if (!result.candidate_sphere())
        throw std::logic_error("internal: reduced datum misses the sphere count: " + result.str());
    return {std::move(result), std::move(step)};
}

ReductionChain reduce_chain(const BranchDatum& datum, const std::map<int, StepOverride>& overrides) {
    if (!is_base_case(datum) && !constructive_applies(datum))
        throw precondition_error("the degree-lowering construction does not apply to " + datum.str());
    ReductionChain chain;
    chain.data.push_back(datum);
    if (is_base_case(datum)) return chain;
    const BranchDatum terminal = BranchDatum::parse("2: 2; 2");
    while (!(chain.data.back() == terminal)) {
        const int idx = static_cast<int>(chain.steps.size());
        std::optional<StepOverride> ov;
        if (auto it = overrides.find(idx); it != overrides.end()) ov = it->second;
        auto [child, step] = reduce_step(chain.data.back(), ov);
        if (!(child == terminal) && !constructive_applies(child))
            throw std::logic_error("reduction left an ineligible datum: " + child.str());
        chain.data.push_back(std::move(child));
        chain.steps.push_back(std::move(step));
    }
    return chain;
}

RealizationCertificate base_realize(const BranchDatum& datum) {
    auto make = [&](int degree, const std::vector<std::string>& perms, std::vector<int> index_map) {
        Tuple t;
        t.degree = degree;
        for (const auto& s : perms) t.perms.push_back(Permutation::parse(degree, s));
        RealizationCertificate cert{datum, std::move(t), std::move(index_map),
                                    Method::Constructive, std::nullopt, false};
        cert.verified = verify(cert.tuple, cert.datum, cert.index_map);
        if (!cert.verified) throw std::logic_error("internal: base certificate fails verification");
        return cert;
    };
    if (datum == BranchDatum::parse("2: 2; 2")) return make(2, {"(1 2)", "(1 2)"}, {0, 1});
    if (datum == BranchDatum::parse("3: 3; 2,1; 2,1"))
        return make(3, {"(1 2)", "(1 3)", "(1 3 2)"}, {2, 0, 1});
    if (datum == BranchDatum::parse("3: 2,1; 2,1; 2,1; 2,1"))
        return make(3, {"(1 2)", "(1 2)", "(1 3)", "(1 3)"}, {0, 1, 2, 3});
    throw precondition_error("not a base case: " + datum.str());
}

RealizationCertificate extend(const RealizationCertificate& child, const ReductionStep& step,
                              const BranchDatum& parent, const RealizeOptions& options) {
    const int n = parent.degree();
    const int k = parent.k();
    if (child.datum.degree() != n - 1)
        throw validation_error("extend: child certificate is not one degree below the parent");
    if (static_cast<int>(step.child_of.size()) != k)
        throw validation_error("extend: step does not match the parent datum");
    if (!child.verified || !verify(child.tuple, child.datum, child.index_map))
        throw validation_error("extend: child certificate does not verify");
    if (step.dropped_trivial.size() > 2)
        throw validation_error("extend: step drops more than two partitions");

    // new sheet n enters as a fixed point of every permutation
    std::vector<Permutation> perms;
    perms.reserve(static_cast<size_t>(k));
    for (const Permutation& p : child.tuple.perms) {
        std::vector<int> images = p.images();
        images.push_back(n);
        perms.emplace_back(std::move(images));
    }
    std::vector<int> paridx(perms.size(), -1);  // tuple position -> parent partition index
    for (int i = 0; i < k; ++i) {
        const int c = step.child_of[static_cast<size_t>(i)];
        if (c < 0) continue;
        if (c >= static_cast<int>(child.index_map.size()))
            throw validation_error("extend: step child indices do not match the certificate");
        paridx[static_cast<size_t>(child.index_map[static_cast<size_t>(c)])] = i;
    }
    for (int i : paridx)
        if (i < 0) throw validation_error("extend: step child indices do not cover the certificate");

    // removed all-1s partitions re-enter as identities: a lone one sits directly
    // before the other designated slot, a pair goes to the end, so the product
    // between the two splice points stays empty
    const Permutation id_n(n);
    if (step.dropped_trivial.size() == 1) {
        const int reborn = step.dropped_trivial.front();
        if (reborn != step.first_index && reborn != step.second_index)
            throw validation_error("extend: a partition outside the decremented pair was dropped");
        const int other = reborn == step.first_index ? step.second_index : step.first_index;
        const auto at = std::find(paridx.begin(), paridx.end(), other);
        if (at == paridx.end()) throw validation_error("extend: designated partition missing");
        const auto pos = at - paridx.begin();
        perms.insert(perms.begin() + pos, id_n);
        paridx.insert(paridx.begin() + pos, reborn);
    } else {
        for (int reborn : step.dropped_trivial) {
            if (reborn != step.first_index && reborn != step.second_index)
                throw validation_error("extend: a partition outside the decremented pair was dropped");
            perms.push_back(id_n);
            paridx.push_back(reborn);
        }
    }

    const int need_first = step.decremented_entry_first - 1;
    const int need_second = step.decremented_entry_second - 1;

    // Designated positions p < q: multiplying (x n) after position p and (y n)
    // before position q keeps the product iff y is the image of x under the
    // slots strictly between them, and grows both designated cycles by one.
    auto try_splice = [&](const std::vector<Permutation>& ps, const std::vector<int>& px)
        -> std::optional<std::vector<Permutation>> {
        int pos_f = -1, pos_s = -1;
        for (int pos = 0; pos < static_cast<int>(px.size()); ++pos) {
            if (px[static_cast<size_t>(pos)] == step.first_index) pos_f = pos;
            if (px[static_cast<size_t>(pos)] == step.second_index) pos_s = pos;
        }
        if (pos_f < 0 || pos_s < 0) return std::nullopt;
        const int p = std::min(pos_f, pos_s), q = std::max(pos_f, pos_s);
        const int need_p = p == pos_f ? need_first : need_second;
        const int need_q = p == pos_f ? need_second : need_first;
        Permutation mid(n);
        for (int i = p + 1; i < q; ++i) mid = compose(mid, ps[static_cast<size_t>(i)]);
        for (int x = 1; x < n; ++x) {
            if (ps[static_cast<size_t>(p)].cycle_length_of(x) != need_p) continue;
            const int y = mid.apply(x);
            if (y == n || ps[static_cast<size_t>(q)].cycle_length_of(y) != need_q) continue;
            auto out = ps;
            out[static_cast<size_t>(p)] = insert_sheet(ps[static_cast<size_t>(p)], x, n);
            out[static_cast<size_t>(q)] = insert_sheet_pre(ps[static_cast<size_t>(q)], y, n);
            return out;
        }
        return std::nullopt;
    };

    Method used = child.method;
    auto worsen = [&](Method m) {
        if (static_cast<int>(m) > static_cast<int>(used)) used = m;
    };

    std::optional<std::vector<Permutation>> spliced = try_splice(perms, paridx);
    std::vector<int> final_paridx = paridx;

    if (!spliced && options.braid_depth > 0) {
        // reposition slots by braid moves, bounded breadth-first
        struct Node {
            std::vector<Permutation> perms;
            std::vector<int> paridx;
            int depth;
        };
        auto key_of = [](const Node& nd) {
            std::vector<int> key = nd.paridx;
            for (const auto& p : nd.perms)
                key.insert(key.end(), p.images().begin(), p.images().end());
            return key;
        };
        std::deque<Node> queue;
        std::set<std::vector<int>> seen;
        Node root{perms, paridx, 0};
        seen.insert(key_of(root));
        queue.push_back(std::move(root));
        const int m = static_cast<int>(perms.size());
        while (!queue.empty() && !spliced) {
            Node nd = std::move(queue.front());
            queue.pop_front();
            for (int i = 1; i < m && !spliced; ++i) {
                for (int dir = 0; dir < 2 && !spliced; ++dir) {
                    Tuple t{n, nd.perms};
                    Tuple moved = dir == 0 ? braid_move(t, i) : braid_move_inverse(t, i);
                    Node next{std::move(moved.perms), nd.paridx, nd.depth + 1};
                    std::swap(next.paridx[static_cast<size_t>(i - 1)],
                              next.paridx[static_cast<size_t>(i)]);
                    if (!seen.insert(key_of(next)).second) continue;
                    spliced = try_splice(next.perms, next.paridx);
                    if (spliced) {
                        final_paridx = next.paridx;
                        worsen(Method::ConstructiveWithRepair);
                    } else if (next.depth < options.braid_depth) {
                        queue.push_back(std::move(next));
                    }
                }
            }
        }
    }

    if (!spliced) {
        Decision dec = decide(parent, options.fallback);
        if (dec.outcome == Outcome::Unknown)
            throw budget_exhausted_error("fallback search ran out of budget on " + parent.str());
        if (dec.outcome == Outcome::Exceptional)
            throw std::logic_error("internal: fallback refuted a datum produced by reduction: " +
                                   parent.str());
        RealizationCertificate cert{parent, dec.certificate->tuple, dec.certificate->index_map,
                                    Method::OracleFallback, std::nullopt, false};
        cert.verified = verify(cert.tuple, cert.datum, cert.index_map);
        if (!cert.verified)
            throw std::logic_error("internal: fallback certificate fails verification");
        return cert;
    }

    std::vector<int> index_map(static_cast<size_t>(k), -1);
    for (int pos = 0; pos < static_cast<int>(final_paridx.size()); ++pos)
        index_map[static_cast<size_t>(final_paridx[static_cast<size_t>(pos)])] = pos;
    RealizationCertificate cert{parent, Tuple{n, std::move(*spliced)}, std::move(index_map),
                                used, std::nullopt, false};
    cert.verified = verify(cert.tuple, cert.datum, cert.index_map);
    if (!cert.verified) throw std::logic_error("internal: spliced certificate fails verification");
    return cert;
}

RealizationCertificate realize(const BranchDatum& datum, const RealizeOptions& options) {
    ReductionChain chain = reduce_chain(datum, options.overrides);
    RealizationCertificate cert = base_realize(chain.data.back());
    for (int i = static_cast<int>(chain.steps.size()) - 1; i >= 0; --i)
        cert = extend(cert, chain.steps[static_cast<size_t>(i)],
                      chain.data[static_cast<size_t>(i)], options);
    cert.chain = std::move(chain);
    return cert;
}

std::map<int, StepOverride> recorded_chain_overrides(int which) {
    if (which < 2 || which > 4) throw validation_error("recorded chains are 2, 3 and 4");
    std::map<int, StepOverride> out;
    if (which == 4) {
        StepOverride ov;
        ov.pk_value = Partition::parse("2,2,1");
        out.emplace(3, ov);
    }
    return out;
}

}  // namespace hur
