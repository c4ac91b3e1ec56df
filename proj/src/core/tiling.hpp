#pragma once

#include "core/formula.hpp"
#include "core/kripke.hpp"

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace gml::tiling {

struct TilingSystem {
    std::vector<std::string> colours;
    std::set<std::pair<std::string, std::string>> horizontal;  // H
    std::set<std::pair<std::string, std::string>> vertical;    // V
};

/// Grid side is 2^n; `initial` is a row of colours for the cells
/// (0,0) .. (m-1,0), m <= 2^n.
struct TilingInstance {
    TilingSystem system;
    int n = 1;
    std::vector<std::string> initial;
};

struct TilingGrid {
    int side = 1;
    std::vector<std::string> cells;  // cells[x + side * y]

    const std::string& at(int x, int y) const { return cells[x + side * y]; }
    std::string& at(int x, int y) { return cells[x + side * y]; }
};

/// {"colors":["a",...], "H":[["a","b"],...], "V":[...], "n":1,
///  "initial":["a",...]}
TilingInstance instance_from_json(const std::string& text);
std::string instance_to_json(const TilingInstance& inst);

/// All horizontal and vertical constraints hold and the bottom row starts
/// with `initial`. Throws on colours outside the system.
bool check_tiling(const TilingSystem& sys, const TilingGrid& grid,
                  const std::vector<std::string>& initial);

/// Conjunction of the generator, uniqueness and glue formulas alone -
/// the part every canonical model satisfies with no colours.
FormulaPtr grid_formula(int n);

/// The reduction formula: generator, uniqueness, horizontal glue, vertical
/// glue, colour and initial-row schemas, conjoined right-nested in that
/// order. Every graded subscript is 0 or 1.
FormulaPtr reduction(const TilingInstance& inst);

/// The reflexive transitive ziggurat over the z/g/o worlds that satisfies
/// the grid formulas; designated world has index (0,0,eps,eps).
PointedStructure canonical_model(int n);

/// Adds colour letters to a canonical model: colour c holds exactly at the
/// g-worlds and o-worlds whose coordinates (s,t) have f(s,t) = c.
PointedStructure expand_with_tiling(const PointedStructure& s,
                                    const TilingGrid& grid,
                                    const TilingSystem& sys);

struct GridAnalysis {
    int n = 1;
    /// z-worlds keyed by index (i, j, value of s, value of t).
    std::map<std::array<unsigned, 4>, int> z_worlds;
    /// g-worlds keyed by coordinates.
    std::map<std::pair<unsigned, unsigned>, int> g_worlds;
    /// Shared o-worlds linking (s,t)-(s+1,t), keyed by the left cell.
    std::map<std::pair<unsigned, unsigned>, std::vector<int>> h_links;
    /// Shared o-worlds linking (s,t)-(s,t+1).
    std::map<std::pair<unsigned, unsigned>, std::vector<int>> v_links;
};

/// Requires a transitive model of the generator and uniqueness formulas at
/// the designated world.
/// Locates the z-worlds and their indices, asserting that every index is
/// realized and that no two z-worlds share one.
GridAnalysis analyze_grid(const PointedStructure& a, int n);

/// Reads the unique colour at each g-world; requires a model of the grid
/// and colour formulas. The result satisfies the tiling constraints.
TilingGrid decode_tiling(const PointedStructure& a, int n,
                         const TilingSystem& sys);

}  // namespace gml::tiling
