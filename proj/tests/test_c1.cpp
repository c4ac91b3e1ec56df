#include "core/c1.hpp"

#include <doctest.h>

#include <random>
#include <vector>

using namespace gml;
using namespace gml::c1;

namespace {

// Exhaustive profile search up to a total population, as an independent
// oracle for decide_c1.
bool oracle_extend(CardinalityProfile& profile, unsigned type,
                   unsigned type_count, int remaining, const C1Ptr& sentence) {
    if (profile.total() >= 1 && eval_c1(profile, sentence)) return true;
    if (remaining == 0 || type >= type_count) return false;
    for (int take = remaining; take >= 1; --take) {
        profile.counts[type] = take;
        if (oracle_extend(profile, type + 1, type_count, remaining - take,
                          sentence))
            return true;
        profile.counts.erase(type);
    }
    return oracle_extend(profile, type + 1, type_count, remaining, sentence);
}

std::optional<CardinalityProfile> oracle_decide(
    const C1Ptr& sentence, const std::vector<std::string>& preds,
    int max_population) {
    CardinalityProfile profile;
    profile.predicates = preds;
    for (int pop = 1; pop <= max_population; ++pop) {
        profile.counts.clear();
        if (oracle_extend(profile, 0, 1u << preds.size(), pop, sentence))
            return profile;
    }
    return std::nullopt;
}

C1Ptr random_c1(std::mt19937_64& rng, const std::vector<std::string>& preds,
                int depth, bool quantified) {
    std::uniform_int_distribution<int> pick(0, 99);
    std::uniform_int_distribution<std::size_t> pred(0, preds.size() - 1);
    std::uniform_int_distribution<int> count(0, 2);
    int r = pick(rng);
    if (depth == 0 || r < 25) {
        if (!quantified)
            return c_geq(count(rng),
                         random_c1(rng, preds, depth > 0 ? depth - 1 : 0,
                                   true));
        return c_atom(preds[pred(rng)]);
    }
    if (r < 40) return c_not(random_c1(rng, preds, depth - 1, quantified));
    if (r < 60)
        return c_and(random_c1(rng, preds, depth - 1, quantified),
                     random_c1(rng, preds, depth - 1, quantified));
    if (r < 75)
        return c_or(random_c1(rng, preds, depth - 1, quantified),
                    random_c1(rng, preds, depth - 1, quantified));
    if (r < 88)
        return c_geq(count(rng), random_c1(rng, preds, depth - 1, true));
    return c_leq(count(rng), random_c1(rng, preds, depth - 1, true));
}

}  // namespace

TEST_CASE("alpha for a plain letter") {
    Alpha a = build_alpha(parse("p"), {});
    CHECK(render_c1(a.sentence) ==
          "E>=1 x.(p(x) & q0(x)) & E<=0 x.(~(q1(x) -> q2(x)))");
    CHECK(a.q0 == "q0");
    CHECK(a.q1 == "q1");
    CHECK(a.q2 == "q2");
}

TEST_CASE("f1 relativizes to q1, nested bodies to q2") {
    Alpha a = build_alpha(parse("dia>=2 p"), {});
    CHECK(render_c1(a.f1) == "E>=2 x.(p(x) & q1(x))");
    Alpha nested = build_alpha(parse("dia>=2 dia<=1 p"), {});
    CHECK(render_c1(nested.f1) == "E>=2 x.(E<=1 x.(p(x) & q2(x)) & q1(x))");
}

TEST_CASE("epsilon formulas per frame class") {
    FormulaPtr p = parse("p");
    std::string base = render_c1(build_alpha(p, {}).sentence);
    std::string rfl = render_c1(build_alpha(p, {FrameClass::Rfl}).sentence);
    CHECK(rfl == base + " & E<=0 x.(~(q0(x) -> q1(x)))");
    std::string ser = render_c1(build_alpha(p, {FrameClass::Ser}).sentence);
    CHECK(ser == base + " & E>=1 x.(q1(x))");
    std::string sym = render_c1(build_alpha(p, {FrameClass::Sym}).sentence);
    CHECK(sym ==
          base + " & (E<=0 x.(~(q0(x) -> q1(x))) | ~E>=1 x.(q1(x)))");
    std::string tr = render_c1(build_alpha(p, {FrameClass::Tr}).sentence);
    CHECK(tr == base + " & E<=0 x.(~(q2(x) -> q1(x)))");
    CHECK_THROWS_AS(build_alpha(p, {FrameClass::Eucl}), std::invalid_argument);
}

TEST_CASE("fresh q predicates avoid the formula's letters") {
    Alpha a = build_alpha(parse("q0 & q1"), {});
    CHECK(a.q0 != "q0");
    CHECK(a.q1 != "q1");
    CHECK(a.q2 == "q2");
}

TEST_CASE("eval_c1 counts type populations") {
    CardinalityProfile profile;
    profile.predicates = {"p"};
    profile.counts[1] = 2;  // two p-elements
    CHECK(eval_c1(profile, c_geq(2, c_atom("p"))));
    CHECK_FALSE(eval_c1(profile, c_leq(1, c_atom("p"))));
    CHECK(eval_c1(profile, c_geq(0, c_not(c_atom("p")))));
    CHECK_THROWS_AS(eval_c1(profile, c_atom("p")), std::invalid_argument);
}

TEST_CASE("decide_c1 on pinned instances") {
    CHECK_FALSE(decide_c1(c_and(c_geq(3, c_atom("p")), c_leq(2, c_atom("p")))));

    auto sat = decide_c1(c_geq(2, c_atom("p")));
    REQUIRE(sat);
    CHECK(eval_c1(*sat, c_geq(2, c_atom("p"))));

    // E>=0 is a tautology even when the domain is tiny
    auto zero = decide_c1(c_geq(0, c_atom("p")));
    CHECK(zero);
}

TEST_CASE("alpha of dia>=2 p is satisfiable with a tiny population") {
    Alpha a = build_alpha(parse("dia>=2 p"), {});
    auto profile = decide_c1(a.sentence);
    REQUIRE(profile);
    CHECK(eval_c1(*profile, a.sentence));

    // Exhaustive enumeration: the minimum population is 2: a single
    // element may satisfy q0, q1 and q2 at once and witness itself.
    auto oracle = oracle_decide(a.sentence, profile->predicates, 4);
    REQUIRE(oracle);
    CHECK(oracle->total() == 2);
    CHECK(profile->total() >= 2);
}

TEST_CASE("clamping a satisfying profile to the cap preserves truth") {
    C1Ptr sentence = c_and(c_geq(2, c_atom("p")), c_leq(2, c_not(c_atom("p"))));
    Int cap = 1 + (2 + 1) + (2 + 1);  // 1 + sum(constants + 1)
    CardinalityProfile big;
    big.predicates = {"p"};
    big.counts[1] = 50;
    REQUIRE(eval_c1(big, sentence));
    CardinalityProfile clamped = big;
    for (auto& [t, n] : clamped.counts)
        if (n > cap) n = cap;
    CHECK(eval_c1(clamped, sentence));
}

TEST_CASE("decide_c1 against the exhaustive profile oracle") {
    std::mt19937_64 rng(90210);
    std::vector<std::string> preds{"p", "q", "r"};
    int agreements = 0;
    for (int i = 0; i < 300; ++i) {
        C1Ptr sentence = random_c1(rng, preds, 3, false);
        auto fast = decide_c1(sentence);
        auto slow = oracle_decide(sentence, preds, 4);
        if (slow) {
            // completeness at the oracle's scale
            REQUIRE(fast);
            CHECK(eval_c1(*fast, sentence));
            ++agreements;
        } else if (fast) {
            // sound, but the witness needs more than 4 elements
            CHECK(eval_c1(*fast, sentence));
            CHECK(fast->total() > 4);
        } else {
            ++agreements;
        }
    }
    CHECK(agreements > 250);
}

TEST_CASE("structurally identical quantifiers share a guess") {
    C1Ptr q = c_geq(1, c_atom("p"));
    C1Ptr sentence =
        c_and(q, c_and(c_geq(1, c_atom("p")), c_leq(2, c_atom("p"))));
    auto res = decide_c1(sentence);
    REQUIRE(res);
    CHECK(eval_c1(*res, sentence));
}

TEST_CASE("model_from_profile on a propositional formula") {
    FormulaPtr f = parse("p");
    Alpha a = build_alpha(f, {});
    auto profile = decide_c1(a.sentence);
    REQUIRE(profile);
    PointedStructure m = model_from_profile(*profile, a, f, {});
    CHECK(check(m, f));
    CHECK(frame_properties(m.structure).contains(FrameClass::Eucl));
}

TEST_CASE("model_from_profile builds the two-block relation") {
    FormulaPtr f = parse("dia>=2 p");
    Alpha a = build_alpha(f, {});
    auto profile = decide_c1(a.sentence);
    REQUIRE(profile);
    PointedStructure m = model_from_profile(*profile, a, f, {});
    CHECK(check(m, f));
    CHECK(frame_properties(m.structure).contains(FrameClass::Eucl));
    // the designated world sees two p-worlds forming a total block
    Bits pset = m.structure.letter_set("p");
    Bits succ = m.structure.successors(m.world);
    CHECK((succ & pset).count() == 2);
    for (std::size_t x = pset.find_first(); x != Bits::npos;
         x = pset.find_next(x))
        CHECK(pset.is_subset_of(m.structure.successors(static_cast<int>(x))));
}

TEST_CASE("model_from_profile honours reflexive classes") {
    FormulaPtr f = parse("dia>=1 true");
    Alpha a = build_alpha(f, {FrameClass::Rfl});
    auto profile = decide_c1(a.sentence);
    REQUIRE(profile);
    PointedStructure m =
        model_from_profile(*profile, a, f, {FrameClass::Rfl});
    CHECK(check(m, f));
    FrameSet props = frame_properties(m.structure);
    CHECK(props.contains(FrameClass::Rfl));
    CHECK(props.contains(FrameClass::Eucl));
    CHECK(m.structure.has_edge(m.world, m.world));
}
