#include "core/tiling.hpp"

#include <json.hpp>

#include <algorithm>

namespace gml::tiling {

using nlohmann::json;

namespace {

std::string u(int i) { return "u" + std::to_string(i); }
std::string v(int j) { return "v" + std::to_string(j); }
std::string p(int k) { return "p" + std::to_string(k); }
std::string q(int k) { return "q" + std::to_string(k); }
const char* kZ = "z";
const char* kOh = "o_h";
const char* kOv = "o_v";

bool reserved_letter(const std::string& name, int n) {
    if (name == kZ || name == kOh || name == kOv) return true;
    for (int i = 0; i <= n; ++i)
        if (name == u(i) || name == v(i)) return true;
    for (int k = 1; k <= n; ++k)
        if (name == p(k) || name == q(k)) return true;
    return false;
}

FormulaPtr lit(const std::string& name, bool positive) {
    FormulaPtr l = mk_letter(name);
    return positive ? l : mk_not(l);
}

// Conjunction of fs[0] & (fs[1] & (...)), in schema order.
FormulaPtr conj_right(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) return mk_true();
    FormulaPtr acc = fs.back();
    for (std::size_t i = fs.size() - 1; i-- > 0;) acc = mk_and(fs[i], acc);
    return acc;
}

// All sign expansions of a schema with `signs` synchronized +- markers.
template <typename Fn>
void for_signs(int signs, std::vector<FormulaPtr>& out, Fn instantiate) {
    for (unsigned mask = 0; mask < (1u << signs); ++mask) {
        std::vector<bool> sign(signs);
        for (int b = 0; b < signs; ++b) sign[b] = !(mask >> b & 1u);
        out.push_back(instantiate(sign));
    }
}

// p_i^* = ~p_i & p_{i+1} & ... & p_n ; p_i^+ = p_i & ~p_{i+1} & ... & ~p_n.
// The +-pattern reads as the *-pattern plus one.
FormulaPtr star(const std::string& base, int i, int n) {
    std::vector<FormulaPtr> fs{mk_not(mk_letter(base + std::to_string(i)))};
    for (int k = i + 1; k <= n; ++k)
        fs.push_back(mk_letter(base + std::to_string(k)));
    return mk_conj(fs);
}

FormulaPtr plus(const std::string& base, int i, int n) {
    std::vector<FormulaPtr> fs{mk_letter(base + std::to_string(i))};
    for (int k = i + 1; k <= n; ++k)
        fs.push_back(mk_not(mk_letter(base + std::to_string(k))));
    return mk_conj(fs);
}

std::string bits_of(unsigned value, int len) {
    std::string out(len, '0');
    for (int k = 0; k < len; ++k)
        if (value >> (len - 1 - k) & 1u) out[k] = '1';
    return out;
}

}  // namespace

TilingInstance instance_from_json(const std::string& text) {
    json j = json::parse(text);
    TilingInstance out;
    for (const auto& c : j.at("colors"))
        out.system.colours.push_back(c.get<std::string>());
    if (out.system.colours.empty())
        throw std::invalid_argument("tiling system needs at least one colour");
    auto read_rel = [&](const char* key,
                        std::set<std::pair<std::string, std::string>>& rel) {
        for (const auto& pair : j.value(key, json::array())) {
            if (!pair.is_array() || pair.size() != 2)
                throw std::invalid_argument("constraint entries are pairs");
            rel.emplace(pair[0].get<std::string>(), pair[1].get<std::string>());
        }
    };
    read_rel("H", out.system.horizontal);
    read_rel("V", out.system.vertical);
    out.n = j.value("n", 1);
    if (out.n < 1) throw std::invalid_argument("n must be positive");
    for (const auto& c : j.value("initial", json::array()))
        out.initial.push_back(c.get<std::string>());
    auto known = [&](const std::string& c) {
        return std::find(out.system.colours.begin(), out.system.colours.end(),
                         c) != out.system.colours.end();
    };
    for (const auto& [a, b] : out.system.horizontal)
        if (!known(a) || !known(b))
            throw std::invalid_argument("H references unknown colour");
    for (const auto& [a, b] : out.system.vertical)
        if (!known(a) || !known(b))
            throw std::invalid_argument("V references unknown colour");
    for (const auto& c : out.initial)
        if (!known(c))
            throw std::invalid_argument("initial references unknown colour");
    if (out.initial.size() > (1ull << out.n))
        throw std::invalid_argument("initial configuration longer than the grid");
    return out;
}

std::string instance_to_json(const TilingInstance& inst) {
    json j;
    j["colors"] = inst.system.colours;
    j["H"] = json::array();
    for (const auto& [a, b] : inst.system.horizontal) j["H"].push_back({a, b});
    j["V"] = json::array();
    for (const auto& [a, b] : inst.system.vertical) j["V"].push_back({a, b});
    j["n"] = inst.n;
    j["initial"] = inst.initial;
    return j.dump(2);
}

bool check_tiling(const TilingSystem& sys, const TilingGrid& grid,
                  const std::vector<std::string>& initial) {
    const int n = grid.side;
    auto known = [&](const std::string& c) {
        return std::find(sys.colours.begin(), sys.colours.end(), c) !=
               sys.colours.end();
    };
    for (const auto& c : grid.cells)
        if (!known(c))
            throw std::invalid_argument("grid colour outside the system: " + c);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x + 1 < n; ++x)
            if (!sys.horizontal.count({grid.at(x, y), grid.at(x + 1, y)}))
                return false;
    for (int y = 0; y + 1 < n; ++y)
        for (int x = 0; x < n; ++x)
            if (!sys.vertical.count({grid.at(x, y), grid.at(x, y + 1)}))
                return false;
    if (initial.size() > static_cast<std::size_t>(n)) return false;
    for (std::size_t k = 0; k < initial.size(); ++k)
        if (grid.at(static_cast<int>(k), 0) != initial[k]) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Reduction formula
// ---------------------------------------------------------------------------

namespace {

void append_grid_formulas(int n, std::vector<FormulaPtr>& fs) {
    // Generators: every z-world spawns the z-world ziggurat below it.
    fs.push_back(mk_and(mk_and(mk_letter(u(0)), mk_letter(v(0))),
                        mk_letter(kZ)));
    for (int i = 0; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            fs.push_back(mk_boxdot(
                mk_and(mk_not(mk_and(mk_letter(u(i)), mk_letter(u(j)))),
                       mk_not(mk_and(mk_letter(v(i)), mk_letter(v(j)))))));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= n; ++j)
            for_signs(1, fs, [&](const std::vector<bool>& s) {
                FormulaPtr ante = mk_conj(
                    {mk_letter(u(i)), mk_letter(v(j)), mk_letter(kZ)});
                FormulaPtr succ = mk_conj({mk_letter(u(i + 1)), mk_letter(v(j)),
                                           mk_letter(kZ),
                                           lit(p(i + 1), s[0])});
                return mk_boxdot(mk_implies(ante, mk_dia(succ)));
            });
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j < n; ++j)
            for_signs(1, fs, [&](const std::vector<bool>& s) {
                FormulaPtr ante = mk_conj(
                    {mk_letter(u(i)), mk_letter(v(j)), mk_letter(kZ)});
                FormulaPtr succ = mk_conj({mk_letter(u(i)), mk_letter(v(j + 1)),
                                           mk_letter(kZ),
                                           lit(q(j + 1), s[0])});
                return mk_boxdot(mk_implies(ante, mk_dia(succ)));
            });
    for (int k = 1; k <= n; ++k)
        for (int i = k; i <= n; ++i)
            for_signs(1, fs, [&](const std::vector<bool>& s) {
                return mk_box(mk_implies(
                    mk_and(mk_letter(u(i)), lit(p(k), s[0])),
                    mk_box(mk_implies(mk_letter(kZ), lit(p(k), s[0])))));
            });
    for (int k = 1; k <= n; ++k)
        for (int j = k; j <= n; ++j)
            for_signs(1, fs, [&](const std::vector<bool>& s) {
                return mk_box(mk_implies(
                    mk_and(mk_letter(v(j)), lit(q(k), s[0])),
                    mk_box(mk_implies(mk_letter(kZ), lit(q(k), s[0])))));
            });

    // Uniqueness: at most one z-successor per index step.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= n; ++j)
            for_signs(1, fs, [&](const std::vector<bool>& s) {
                FormulaPtr ante = mk_and(mk_letter(u(i)), mk_letter(v(j)));
                FormulaPtr succ = mk_conj({mk_letter(u(i + 1)), mk_letter(v(j)),
                                           lit(p(i + 1), s[0])});
                return mk_boxdot(mk_implies(ante, mk_at_most(1, succ)));
            });
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j < n; ++j)
            for_signs(1, fs, [&](const std::vector<bool>& s) {
                FormulaPtr ante = mk_and(mk_letter(u(i)), mk_letter(v(j)));
                FormulaPtr succ = mk_conj({mk_letter(u(i)), mk_letter(v(j + 1)),
                                           lit(q(j + 1), s[0])});
                return mk_boxdot(mk_implies(ante, mk_at_most(1, succ)));
            });
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for_signs(2, fs, [&](const std::vector<bool>& s) {
                FormulaPtr ante = mk_and(mk_letter(u(i)), mk_letter(v(j)));
                FormulaPtr succ = mk_conj(
                    {mk_letter(u(i + 1)), mk_letter(v(j + 1)),
                     lit(p(i + 1), s[0]), lit(q(j + 1), s[1])});
                return mk_boxdot(mk_implies(ante, mk_at_most(1, succ)));
            });

    // Glue: o-worlds shared by grid row and column neighbours.
    auto glue = [&](const std::string& base, const char* o,
                      bool horizontal) {
        for (int i = 1; i <= n; ++i)
            fs.push_back(mk_box(mk_implies(
                mk_conj({mk_letter(u(n)), mk_letter(v(n)), star(base, i, n)}),
                mk_dia(mk_and(mk_letter(o), plus(base, i, n))))));
        for (int i = 1; i <= n; ++i)
            fs.push_back(mk_box(mk_implies(
                mk_conj({mk_letter(u(n)), mk_letter(v(n)), plus(base, i, n)}),
                mk_dia(mk_and(mk_letter(o), plus(base, i, n))))));
        for (int i = 1; i <= n; ++i) {
            FormulaPtr ante =
                horizontal ? mk_and(mk_letter(u(i - 1)), mk_letter(v(n)))
                           : mk_and(mk_letter(u(n)), mk_letter(v(i - 1)));
            fs.push_back(mk_box(mk_implies(
                ante,
                mk_at_most(1, mk_and(mk_letter(o), plus(base, i, n))))));
        }
    };
    glue("p", kOh, true);
    glue("q", kOv, false);
}

}  // namespace

FormulaPtr grid_formula(int n) {
    if (n < 1) throw std::invalid_argument("n must be positive");
    std::vector<FormulaPtr> fs;
    append_grid_formulas(n, fs);
    return conj_right(fs);
}

FormulaPtr reduction(const TilingInstance& inst) {
    const int n = inst.n;
    const auto& C = inst.system.colours;
    for (const auto& c : C)
        if (reserved_letter(c, n))
            throw std::invalid_argument("colour collides with a grid letter: " +
                                        c);
    std::vector<FormulaPtr> fs;
    append_grid_formulas(n, fs);

    // Colours tile the grid.
    {
        std::vector<FormulaPtr> colour_fs;
        for (const auto& c : C) colour_fs.push_back(mk_letter(c));
        FormulaPtr some = mk_disj(colour_fs);
        std::vector<FormulaPtr> excl{some};
        for (std::size_t a = 0; a < C.size(); ++a)
            for (std::size_t b = a + 1; b < C.size(); ++b)
                excl.push_back(mk_or(mk_not(mk_letter(C[a])),
                                     mk_not(mk_letter(C[b]))));
        fs.push_back(mk_box(mk_implies(
            mk_and(mk_letter(u(n)), mk_letter(v(n))), mk_conj(excl))));
    }
    auto delta_pair = [&](const std::string& coord, const char* o,
                          const std::set<std::pair<std::string, std::string>>&
                              rel) {
        for (const auto& c : C)
            for_signs(1, fs, [&](const std::vector<bool>& s) {
                FormulaPtr ante = mk_conj({mk_letter(u(n)), mk_letter(v(n)),
                                           lit(coord, s[0]), mk_letter(c)});
                FormulaPtr inner = mk_implies(
                    mk_and(mk_letter(o), lit(coord, s[0])), mk_letter(c));
                return mk_box(mk_implies(ante, mk_box(inner)));
            });
        for (const auto& c : C)
            for (const auto& d : C) {
                if (rel.count({c, d})) continue;
                for_signs(1, fs, [&](const std::vector<bool>& s) {
                    FormulaPtr ante =
                        mk_conj({mk_letter(u(n)), mk_letter(v(n)),
                                 lit(coord, s[0]), mk_letter(c)});
                    FormulaPtr inner = mk_implies(
                        mk_and(mk_letter(o), mk_not(lit(coord, s[0]))),
                        mk_not(mk_letter(d)));
                    return mk_box(mk_implies(ante, mk_box(inner)));
                });
            }
    };
    delta_pair(p(n), kOh, inst.system.horizontal);
    delta_pair(q(n), kOv, inst.system.vertical);

    // Initial row: colours forced along the bottom row. The u_n & v_n
    // pin restricts the antecedent to the g-world with those coordinates;
    // without it the apex and its relatives would need colours too.
    for (std::size_t k = 0; k < inst.initial.size(); ++k) {
        std::vector<FormulaPtr> ante{mk_letter(kZ), mk_letter(u(n)),
                                     mk_letter(v(n))};
        for (int i = 1; i <= n; ++i)
            ante.push_back(lit(p(i), (k >> (n - i)) & 1u));
        for (int i = 1; i <= n; ++i) ante.push_back(mk_not(mk_letter(q(i))));
        fs.push_back(mk_box(
            mk_implies(mk_conj(ante), mk_letter(inst.initial[k]))));
    }

    return conj_right(fs);
}

// ---------------------------------------------------------------------------
// Canonical model
// ---------------------------------------------------------------------------

PointedStructure canonical_model(int n) {
    if (n < 1) throw std::invalid_argument("n must be positive");
    if (n > 5) throw std::invalid_argument("canonical model too large for n > 5");
    const unsigned side = 1u << n;
    PointedStructure out;
    KripkeStructure& s = out.structure;

    struct ZWorld {
        int i, j;
        unsigned sv, tv;
        int world;
    };
    std::vector<ZWorld> zs;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            for (unsigned sv = 0; sv < (1u << i); ++sv)
                for (unsigned tv = 0; tv < (1u << j); ++tv) {
                    std::string ss = i ? bits_of(sv, i) : "e";
                    std::string ts = j ? bits_of(tv, j) : "e";
                    int w = s.add_world("z_" + std::to_string(i) + "_" +
                                        std::to_string(j) + "_" + ss + "_" + ts);
                    zs.push_back({i, j, sv, tv, w});
                }
    std::vector<std::vector<int>> oh(side, std::vector<int>(side, -1));
    std::vector<std::vector<int>> ov(side, std::vector<int>(side, -1));
    for (unsigned sv = 1; sv < side; ++sv)
        for (unsigned tv = 0; tv < side; ++tv)
            oh[sv][tv] = s.add_world("oh_" + bits_of(sv, n) + "_" +
                                     bits_of(tv, n));
    for (unsigned sv = 0; sv < side; ++sv)
        for (unsigned tv = 1; tv < side; ++tv)
            ov[sv][tv] = s.add_world("ov_" + bits_of(sv, n) + "_" +
                                     bits_of(tv, n));

    auto is_prefix = [](unsigned a, int alen, unsigned b, int blen) {
        return alen <= blen && (b >> (blen - alen)) == a;
    };
    for (const ZWorld& a : zs)
        for (const ZWorld& b : zs)
            if (is_prefix(a.sv, a.i, b.sv, b.i) &&
                is_prefix(a.tv, a.j, b.tv, b.j))
                s.add_edge(a.world, b.world);
    for (const ZWorld& g : zs) {
        if (g.i != n || g.j != n) continue;
        // A z-world reaches an o-world exactly when it reaches the g-world
        // below it, so composing here keeps the closure transitive.
        std::vector<int> glued;
        if (g.sv >= 1 && oh[g.sv][g.tv] >= 0) glued.push_back(oh[g.sv][g.tv]);
        if (g.sv + 1 < side) glued.push_back(oh[g.sv + 1][g.tv]);
        if (g.tv >= 1 && ov[g.sv][g.tv] >= 0) glued.push_back(ov[g.sv][g.tv]);
        if (g.tv + 1 < side) glued.push_back(ov[g.sv][g.tv + 1]);
        for (int o : glued)
            for (const ZWorld& a : zs)
                if (is_prefix(a.sv, a.i, g.sv, n) &&
                    is_prefix(a.tv, a.j, g.tv, n))
                    s.add_edge(a.world, o);
    }
    for (int w = 0; w < s.world_count(); ++w) s.add_edge(w, w);

    for (const ZWorld& z : zs) {
        s.set_letter(kZ, z.world);
        s.set_letter(u(z.i), z.world);
        s.set_letter(v(z.j), z.world);
        for (int k = 1; k <= z.i; ++k)
            if (z.sv >> (z.i - k) & 1u) s.set_letter(p(k), z.world);
        for (int k = 1; k <= z.j; ++k)
            if (z.tv >> (z.j - k) & 1u) s.set_letter(q(k), z.world);
    }
    for (unsigned sv = 0; sv < side; ++sv)
        for (unsigned tv = 0; tv < side; ++tv)
            for (int o : {sv ? oh[sv][tv] : -1, tv ? ov[sv][tv] : -1}) {
                if (o < 0) continue;
                s.set_letter(o == oh[sv][tv] && sv ? kOh : kOv, o);
                for (int k = 1; k <= n; ++k) {
                    if (sv >> (n - k) & 1u) s.set_letter(p(k), o);
                    if (tv >> (n - k) & 1u) s.set_letter(q(k), o);
                }
            }

    out.world = s.index_of("z_0_0_e_e");
    return out;
}

// ---------------------------------------------------------------------------
// Expansion and decoding
// ---------------------------------------------------------------------------

namespace {

// x/y coordinates of a world, read off the p/q letters.
std::pair<unsigned, unsigned> coordinates(const KripkeStructure& s, int w,
                                          int n) {
    unsigned x = 0, y = 0;
    for (int k = 1; k <= n; ++k) {
        if (s.letter_true(p(k), w)) x |= 1u << (n - k);
        if (s.letter_true(q(k), w)) y |= 1u << (n - k);
    }
    return {x, y};
}

int side_to_n(int side) {
    int n = 0;
    while ((1 << n) < side) ++n;
    if ((1 << n) != side || n < 1)
        throw std::invalid_argument("grid side must be a power of two, >= 2");
    return n;
}

}  // namespace

PointedStructure expand_with_tiling(const PointedStructure& sp,
                                    const TilingGrid& grid,
                                    const TilingSystem& sys) {
    const int n = side_to_n(grid.side);
    PointedStructure out = sp;
    KripkeStructure& s = out.structure;
    if (!s.valuation().count(u(n)))
        throw std::invalid_argument(
            "model does not match the grid dimensions");
    if (static_cast<int>(grid.cells.size()) != grid.side * grid.side)
        throw std::invalid_argument("grid is not total");
    for (const auto& c : grid.cells)
        if (std::find(sys.colours.begin(), sys.colours.end(), c) ==
            sys.colours.end())
            throw std::invalid_argument("grid colour outside the system");
    for (int w = 0; w < s.world_count(); ++w) {
        bool gw = s.letter_true(kZ, w) && s.letter_true(u(n), w) &&
                  s.letter_true(v(n), w);
        bool ow = s.letter_true(kOh, w) || s.letter_true(kOv, w);
        if (!gw && !ow) continue;
        auto [x, y] = coordinates(s, w, n);
        s.set_letter(grid.at(static_cast<int>(x), static_cast<int>(y)), w);
    }
    return out;
}

GridAnalysis analyze_grid(const PointedStructure& a, int n) {
    const KripkeStructure& s = a.structure;
    if (!is_transitive(s))
        throw std::invalid_argument("analyze_grid needs a transitive model");
    GridAnalysis out;
    out.n = n;
    std::vector<int> rep = clique_representatives(s);
    Bits zset = s.letter_set(kZ);

    auto is_direct = [&](int w1, int w2) {
        if (!s.has_edge(w1, w2) || s.has_edge(w2, w1)) return false;
        const Bits& row = s.successors(w1);
        for (std::size_t m = row.find_first(); m != Bits::npos;
             m = row.find_next(m))
            if (s.has_edge(static_cast<int>(m), w2) && rep[m] != rep[w1] &&
                rep[m] != rep[w2])
                return false;
        return true;
    };

    // Smallest set containing the designated world and closed under direct
    // z-successors.
    std::vector<int> frontier{a.world};
    Bits in_z(s.world_count());
    in_z.set(a.world);
    std::vector<int> zs{a.world};
    while (!frontier.empty()) {
        int w = frontier.back();
        frontier.pop_back();
        const Bits& row = s.successors(w);
        for (std::size_t v2 = row.find_first(); v2 != Bits::npos;
             v2 = row.find_next(v2)) {
            int t = static_cast<int>(v2);
            if (in_z.test(t) || !zset.test(t) || !is_direct(w, t)) continue;
            in_z.set(t);
            zs.push_back(t);
            frontier.push_back(t);
        }
    }

    for (int w : zs) {
        int ci = -1, cj = -1;
        for (int i = 0; i <= n; ++i) {
            if (!s.letter_true(u(i), w)) continue;
            if (ci >= 0)
                throw std::logic_error("z-world with two u-characters");
            ci = i;
        }
        for (int j = 0; j <= n; ++j) {
            if (!s.letter_true(v(j), w)) continue;
            if (cj >= 0)
                throw std::logic_error("z-world with two v-characters");
            cj = j;
        }
        if (ci < 0 || cj < 0)
            throw std::logic_error("z-world without a character");
        unsigned sv = 0, tv = 0;
        for (int k = 1; k <= ci; ++k)
            if (s.letter_true(p(k), w)) sv |= 1u << (ci - k);
        for (int k = 1; k <= cj; ++k)
            if (s.letter_true(q(k), w)) tv |= 1u << (cj - k);
        std::array<unsigned, 4> key{static_cast<unsigned>(ci),
                                    static_cast<unsigned>(cj), sv, tv};
        auto [it, fresh] = out.z_worlds.emplace(key, w);
        if (!fresh)
            throw std::logic_error("two z-worlds share an index");
        if (ci == n && cj == n) out.g_worlds[{sv, tv}] = w;
    }
    // Totality of the index map.
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            for (unsigned sv = 0; sv < (1u << i); ++sv)
                for (unsigned tv = 0; tv < (1u << j); ++tv)
                    if (!out.z_worlds.count({static_cast<unsigned>(i),
                                             static_cast<unsigned>(j), sv, tv}))
                        throw std::logic_error("missing z-world index");

    const unsigned side = 1u << n;
    Bits ohset = s.letter_set(kOh);
    Bits ovset = s.letter_set(kOv);
    Bits pnset = s.letter_set(p(n));
    Bits qnset = s.letter_set(q(n));
    for (unsigned y = 0; y < side; ++y)
        for (unsigned x = 0; x + 1 < side; ++x) {
            int g1 = out.g_worlds.at({x, y}), g2 = out.g_worlds.at({x + 1, y});
            Bits common = s.successors(g1) & s.successors(g2) & ohset;
            std::vector<int>& links = out.h_links[{x, y}];
            for (std::size_t o = common.find_first(); o != Bits::npos;
                 o = common.find_next(o))
                if (pnset.test(o) == pnset.test(g2))
                    links.push_back(static_cast<int>(o));
        }
    for (unsigned y = 0; y + 1 < side; ++y)
        for (unsigned x = 0; x < side; ++x) {
            int g1 = out.g_worlds.at({x, y}), g2 = out.g_worlds.at({x, y + 1});
            Bits common = s.successors(g1) & s.successors(g2) & ovset;
            std::vector<int>& links = out.v_links[{x, y}];
            for (std::size_t o = common.find_first(); o != Bits::npos;
                 o = common.find_next(o))
                if (qnset.test(o) == qnset.test(g2))
                    links.push_back(static_cast<int>(o));
        }
    return out;
}

TilingGrid decode_tiling(const PointedStructure& a, int n,
                         const TilingSystem& sys) {
    GridAnalysis ga = analyze_grid(a, n);
    const int side = 1 << n;
    TilingGrid grid;
    grid.side = side;
    grid.cells.resize(static_cast<std::size_t>(side) * side);
    for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x) {
            int w = ga.g_worlds.at({static_cast<unsigned>(x),
                                    static_cast<unsigned>(y)});
            const std::string* colour = nullptr;
            for (const auto& c : sys.colours) {
                if (!a.structure.letter_true(c, w)) continue;
                if (colour)
                    throw std::logic_error("ambiguous colour at a g-world");
                colour = &c;
            }
            if (!colour)
                throw std::logic_error("missing colour at a g-world");
            grid.at(x, y) = *colour;
        }
    if (!check_tiling(sys, grid, {}))
        throw std::logic_error("decoded grid violates the tiling constraints");
    return grid;
}

}  // namespace gml::tiling
