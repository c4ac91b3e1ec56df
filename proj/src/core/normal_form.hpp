#pragma once

#include "core/formula.hpp"
#include "core/kripke.hpp"

#include <vector>

namespace gml::nf {

struct LowerEntry {
    PropLetter guard;  // p_i
    Int count;         // C_i >= 1
    FormulaPtr body;   // propositional pi_i
};

struct UpperEntry {
    PropLetter guard;  // q_j
    Int count;         // D_j >= 0
    FormulaPtr body;   // propositional chi_j
};

/// eta & boxdot(theta & /\ (p_i -> dia>=C_i pi_i) & /\ (q_j -> dia<=D_j chi_j))
/// with eta, theta and all bodies propositional, and guards fresh letters
/// disjoint from the input formula's letters.
struct NormalForm {
    FormulaPtr eta;
    FormulaPtr theta;
    std::vector<LowerEntry> lowers;
    std::vector<UpperEntry> uppers;
    std::vector<PropLetter> fresh;
};

/// Renaming transformation. Repeatedly replaces an innermost graded
/// subformula rho (leftmost first) with a fresh guard p, adding
/// boxdot(p|q) & boxdot(p -> rho) & boxdot(q -> complement(rho)) to the
/// accumulating guard entries; dia>=0 subformulas are first replaced by
/// `true`. Structurally identical graded subformulas share one guard pair,
/// and so does a subformula and its complement. lowers[r] and uppers[r] are
/// the r-th replacement's pair.
NormalForm normalize(const FormulaPtr& f);

FormulaPtr to_formula(const NormalForm& nf);

/// Expands a model of the source formula into a model of to_formula(nf) by
/// valuating each guard with the truth of its defining graded formula
/// (lower guards positively, their paired upper guards complementarily).
/// Only the valuation changes, so any frame works.
PointedStructure expand_guards(const PointedStructure& a, const NormalForm& nf);

}  // namespace gml::nf
