#include "core/tiling.hpp"

#include <doctest.h>

#include <random>

using namespace gml;
using namespace gml::tiling;

namespace {

TilingSystem permissive(std::vector<std::string> colours) {
    TilingSystem sys;
    sys.colours = std::move(colours);
    for (const auto& a : sys.colours)
        for (const auto& b : sys.colours) {
            sys.horizontal.emplace(a, b);
            sys.vertical.emplace(a, b);
        }
    return sys;
}

// Elements along the right-nested conjunction spine.
std::vector<FormulaPtr> spine(FormulaPtr f) {
    std::vector<FormulaPtr> out;
    while (f->op() == Op::And) {
        out.push_back(f->lhs());
        f = f->rhs();
    }
    out.push_back(f);
    return out;
}

Int max_subscript(const FormulaPtr& f) {
    switch (f->op()) {
        case Op::Not:
            return max_subscript(f->child());
        case Op::AtLeast:
        case Op::AtMost: {
            Int inner = max_subscript(f->child());
            return inner > f->count() ? inner : f->count();
        }
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff: {
            Int l = max_subscript(f->lhs());
            Int r = max_subscript(f->rhs());
            return l > r ? l : r;
        }
        default:
            return 0;
    }
}

TilingGrid grid_of(int side, std::vector<std::string> cells) {
    TilingGrid g;
    g.side = side;
    g.cells = std::move(cells);
    return g;
}

}  // namespace

TEST_CASE("check_tiling on small grids") {
    TilingSystem one = permissive({"a"});
    CHECK(check_tiling(one, grid_of(1, {"a"}), {}));

    TilingSystem sys;
    sys.colours = {"a"};
    sys.horizontal.emplace("a", "a");
    sys.vertical.emplace("a", "a");
    CHECK(check_tiling(sys, grid_of(2, {"a", "a", "a", "a"}), {}));

    TilingSystem no_h;
    no_h.colours = {"a"};
    no_h.vertical.emplace("a", "a");
    CHECK_FALSE(check_tiling(no_h, grid_of(2, {"a", "a", "a", "a"}), {}));

    // initial row prefix must match
    CHECK(check_tiling(sys, grid_of(2, {"a", "a", "a", "a"}), {"a", "a"}));
    TilingSystem two = permissive({"a", "b"});
    CHECK_FALSE(
        check_tiling(two, grid_of(2, {"a", "a", "a", "a"}), {"b"}));

    CHECK_THROWS_AS(check_tiling(one, grid_of(1, {"zz"}), {}),
                    std::invalid_argument);
}

TEST_CASE("tiling instance JSON round trip") {
    std::string text = R"({"colors":["a","b"],"H":[["a","b"],["b","a"]],
                           "V":[["a","a"]],"n":1,"initial":["a"]})";
    TilingInstance inst = instance_from_json(text);
    CHECK(inst.system.colours.size() == 2);
    CHECK(inst.system.horizontal.count({"a", "b"}));
    CHECK(inst.n == 1);
    CHECK(inst.initial == std::vector<std::string>{"a"});
    TilingInstance back = instance_from_json(instance_to_json(inst));
    CHECK(back.system.horizontal == inst.system.horizontal);
    CHECK(back.initial == inst.initial);

    CHECK_THROWS_AS(instance_from_json(R"({"colors":[]})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        instance_from_json(R"({"colors":["a"],"H":[["a","zz"]]})"),
        std::invalid_argument);
}

TEST_CASE("reduction schema tally for the one-colour instance") {
    TilingInstance inst;
    inst.system.colours = {"a"};
    inst.system.horizontal.emplace("a", "a");
    inst.system.vertical.emplace("a", "a");
    inst.n = 1;
    inst.initial = {"a"};
    FormulaPtr f = reduction(inst);

    // parses back to itself
    CHECK(equal(parse(render(f)), f));

    // hand tally: generators 1+1+4+4+2+2 = 14 conjuncts, uniqueness
    // 4+4+4 = 12, glue 3+3, colour 1+2+0+2+0 = 5, initial row 1: 38.
    CHECK(spine(f).size() == 38);

    // graded subscripts stay at most 1
    CHECK(max_subscript(f) <= 1);

    // without an initial configuration the initial-row schema is empty
    TilingInstance bare = inst;
    bare.initial.clear();
    CHECK(spine(reduction(bare)).size() == 37);

    TilingInstance clash = inst;
    clash.system.colours = {"u0"};
    CHECK_THROWS_AS(reduction(clash), std::invalid_argument);
}

TEST_CASE("reduction subscripts stay bounded on random instances") {
    std::mt19937_64 rng(55);
    std::bernoulli_distribution coin(0.5);
    for (int i = 0; i < 20; ++i) {
        TilingInstance inst;
        inst.system.colours = coin(rng) ? std::vector<std::string>{"a"}
                                        : std::vector<std::string>{"a", "b"};
        for (const auto& a : inst.system.colours)
            for (const auto& b : inst.system.colours) {
                if (coin(rng)) inst.system.horizontal.emplace(a, b);
                if (coin(rng)) inst.system.vertical.emplace(a, b);
            }
        inst.n = 1 + (i % 2);
        if (coin(rng)) inst.initial.push_back(inst.system.colours[0]);
        CHECK(max_subscript(reduction(inst)) <= 1);
    }
}

TEST_CASE("canonical model cardinalities and frame") {
    PointedStructure one = canonical_model(1);
    CHECK(one.structure.world_count() == 13);  // 9 z + 2 oh + 2 ov
    FrameSet props = frame_properties(one.structure);
    CHECK(props.contains(FrameClass::Rfl));
    CHECK(props.contains(FrameClass::Tr));
    CHECK(one.world_id() == "z_0_0_e_e");

    PointedStructure two = canonical_model(2);
    // (2^3-1)^2 z-worlds and 2 * (2^2-1) * 2^2 o-worlds
    CHECK(two.structure.world_count() == 49 + 24);
    props = frame_properties(two.structure);
    CHECK(props.contains(FrameClass::Rfl));
    CHECK(props.contains(FrameClass::Tr));

    CHECK_THROWS_AS(canonical_model(0), std::invalid_argument);
}

TEST_CASE("canonical model satisfies the grid formulas") {
    PointedStructure m = canonical_model(1);
    CHECK(check(m, grid_formula(1)));
}

TEST_CASE("analyze_grid on the canonical model") {
    PointedStructure m = canonical_model(1);
    GridAnalysis ga = analyze_grid(m, 1);
    CHECK(ga.z_worlds.size() == 9);
    CHECK(ga.g_worlds.size() == 4);
    // horizontally adjacent cells share an o-world matching the right
    // neighbour's p_1 value; vertically likewise with q_1
    for (unsigned y = 0; y < 2; ++y) {
        REQUIRE(ga.h_links.count({0, y}));
        CHECK_FALSE(ga.h_links.at({0, y}).empty());
    }
    for (unsigned x = 0; x < 2; ++x) {
        REQUIRE(ga.v_links.count({x, 0}));
        CHECK_FALSE(ga.v_links.at({x, 0}).empty());
    }
}

TEST_CASE("analyze_grid rejects a duplicated z-branch") {
    // two distinct z-worlds with index (1,0,"0",eps)
    PointedStructure m;
    KripkeStructure& s = m.structure;
    s.add_world("w0");
    s.add_world("a");
    s.add_world("b");
    s.add_edge(0, 1);
    s.add_edge(0, 2);
    for (const char* z : {"w0", "a", "b"}) s.set_letter("z", s.index_of(z));
    s.set_letter("u0", 0);
    s.set_letter("v0", 0);
    s.set_letter("u1", 1);
    s.set_letter("v0", 1);
    s.set_letter("u1", 2);
    s.set_letter("v0", 2);
    m.world = 0;
    CHECK_THROWS_AS(analyze_grid(m, 1), std::logic_error);
}

TEST_CASE("expansion of a valid tiling satisfies the reduction") {
    TilingInstance inst;
    inst.system = permissive({"a"});
    inst.n = 1;
    inst.initial = {"a"};
    PointedStructure expanded = expand_with_tiling(
        canonical_model(1), grid_of(2, {"a", "a", "a", "a"}), inst.system);
    CHECK(check(expanded, reduction(inst)));
}

TEST_CASE("expansion of an invalid tiling falsifies the reduction") {
    TilingSystem sys;
    sys.colours = {"a", "b"};
    // only a-a pairs allowed: any b breaks the colour constraints
    sys.horizontal.emplace("a", "a");
    sys.vertical.emplace("a", "a");
    TilingInstance inst;
    inst.system = sys;
    inst.n = 1;
    PointedStructure expanded = expand_with_tiling(
        canonical_model(1), grid_of(2, {"a", "b", "a", "a"}), sys);
    CHECK_FALSE(check(expanded, reduction(inst)));
}

TEST_CASE("z-worlds outside the base carry no colour") {
    TilingSystem sys = permissive({"a"});
    PointedStructure expanded = expand_with_tiling(
        canonical_model(1), grid_of(2, {"a", "a", "a", "a"}), sys);
    const KripkeStructure& s = expanded.structure;
    Bits coloured = s.letter_set("a");
    for (int w = 0; w < s.world_count(); ++w) {
        bool base = s.letter_true("u1", w) && s.letter_true("v1", w) &&
                    s.letter_true("z", w);
        bool oworld = s.letter_true("o_h", w) || s.letter_true("o_v", w);
        if (!base && !oworld) CHECK_FALSE(coloured.test(w));
    }
}

TEST_CASE("decode inverts expand on random grids") {
    std::mt19937_64 rng(808);
    TilingSystem sys = permissive({"a", "b"});
    PointedStructure base = canonical_model(1);
    for (int i = 0; i < 16; ++i) {
        TilingGrid grid;
        grid.side = 2;
        for (int c = 0; c < 4; ++c)
            grid.cells.push_back(i >> c & 1 ? "b" : "a");
        PointedStructure expanded = expand_with_tiling(base, grid, sys);
        TilingGrid back = decode_tiling(expanded, 1, sys);
        CHECK(back.cells == grid.cells);
        CHECK(check_tiling(sys, back, {}));
    }
}

TEST_CASE("decode rejects colourless and ambiguous g-worlds") {
    TilingSystem sys = permissive({"a", "b"});
    PointedStructure bare = canonical_model(1);
    CHECK_THROWS_AS(decode_tiling(bare, 1, sys), std::logic_error);

    PointedStructure doubled = expand_with_tiling(
        bare, grid_of(2, {"a", "a", "a", "a"}), sys);
    for (int w = 0; w < doubled.structure.world_count(); ++w)
        doubled.structure.set_letter("b", w);
    CHECK_THROWS_AS(decode_tiling(doubled, 1, sys), std::logic_error);
}
