#pragma once

#include "core/kripke.hpp"
#include "core/normal_form.hpp"

#include <vector>

namespace gml::minimize {

/// d^j(w) = min(D_j + 1, |R*(w, chi_j)|) with R* the reflexive closure of
/// R; indexed [world][upper entry].
std::vector<std::vector<Int>> d_values(const KripkeStructure& a,
                                       const nf::NormalForm& nf);

/// I(w)  = { i : |R(w, pi_i)| >= C_i },
/// Is(w) = { i : |R(w, pi_i) \ Q(w)| >= C_i }, as bitmasks over the lower
/// entries.
struct IndexSets {
    std::vector<unsigned> I;
    std::vector<unsigned> Is;
};
IndexSets index_sets(const KripkeStructure& a, const nf::NormalForm& nf);

/// Stage 1: enlarge R to (R u Rd^-)^+ so that strict chains are bounded by
/// sum(D_j) + m; d^j values are preserved world by world.
PointedStructure stage1_finite_depth(const PointedStructure& a,
                                     const nf::NormalForm& nf);

/// Stage 2: remove direct edges (w1,w2) with Is(w2) = I(w1) until the depth
/// is at most 2*l.
PointedStructure stage2_bound_depth(const PointedStructure& a,
                                    const nf::NormalForm& nf);

/// Stage 3: keep only intra-clique edges and edges to selected strict
/// pi_i-witnesses, transitively closed; breadth drops to at most sum(C_i).
PointedStructure stage3_bound_breadth(const PointedStructure& a,
                                      const nf::NormalForm& nf);

/// Stage 4: restrict every clique to its selected equivalent witnesses plus
/// one representative (preferring one that satisfies the whole formula);
/// width drops to at most sum(C_i) + 1.
PointedStructure stage4_bound_width(const PointedStructure& a,
                                    const nf::NormalForm& nf);

/// Stages 1-4 followed by restriction to the part generated from the
/// designated world. The result satisfies the formula, stays transitive
/// (and reflexive when the input is), and has at most
/// solver::model_size_bound(nf) worlds.
PointedStructure minimize(const PointedStructure& a, const nf::NormalForm& nf);

}  // namespace gml::minimize
