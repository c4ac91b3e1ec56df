#pragma once

#include "core/formula.hpp"
#include "core/kripke.hpp"

#include <map>
#include <memory>
#include <optional>

namespace gml::c1 {

enum class C1Op {
    True,
    False,
    Atom,   // unary predicate applied to the single variable
    Not,
    And,
    Or,
    Implies,
    Iff,
    CountGeq,  // E>=C x. body
    CountLeq,  // E<=C x. body
};

class C1Formula;
using C1Ptr = std::shared_ptr<const C1Formula>;

/// One-variable counting formula. Every quantified subformula is a sentence;
/// plain exists/forall are stored as >=1 and <=0-of-negation.
class C1Formula {
public:
    C1Op op() const { return op_; }
    const std::string& pred() const { return pred_; }
    const Int& count() const { return count_; }
    const C1Ptr& lhs() const { return lhs_; }
    const C1Ptr& rhs() const { return rhs_; }
    const C1Ptr& child() const { return lhs_; }

    static C1Ptr make(C1Op op, std::string pred, Int count, C1Ptr lhs,
                      C1Ptr rhs);

private:
    C1Formula() = default;
    C1Op op_ = C1Op::True;
    std::string pred_;
    Int count_;
    C1Ptr lhs_;
    C1Ptr rhs_;
};

C1Ptr c_true();
C1Ptr c_false();
C1Ptr c_atom(std::string pred);
C1Ptr c_not(C1Ptr a);
C1Ptr c_and(C1Ptr a, C1Ptr b);
C1Ptr c_or(C1Ptr a, C1Ptr b);
C1Ptr c_implies(C1Ptr a, C1Ptr b);
C1Ptr c_iff(C1Ptr a, C1Ptr b);
C1Ptr c_geq(Int count, C1Ptr body);
C1Ptr c_leq(Int count, C1Ptr body);
/// exists x. body == E>=1
C1Ptr c_exists(C1Ptr body);
/// forall x. body == E<=0 x. ~body
C1Ptr c_forall(C1Ptr body);

std::string render_c1(const C1Ptr& f);

/// A model of a C1 sentence: a multiset of one-types over a fixed predicate
/// list. Types are bitmasks over `predicates`; only positive counts are
/// stored, and the total population is at least 1.
struct CardinalityProfile {
    std::vector<std::string> predicates;
    std::map<unsigned, Int> counts;

    Int total() const {
        Int t = 0;
        for (const auto& [type, n] : counts) t += n;
        return t;
    }
};

/// Translation bookkeeping: the fresh predicates and the translated f1(phi)
/// needed to locate a designated world in a reconstructed model.
struct Alpha {
    C1Ptr sentence;
    C1Ptr f1;  // f1 translation of the source formula
    std::string q0, q1, q2;
};

/// Counting translation: alpha = exists x.(f1(phi) & q0(x))
/// & forall x.(q1(x) -> q2(x)) & /\_{K in F} epsilon_K, with graded
/// operators relativized to q1 by f1 and to q2 by f2.
/// F may contain only Rfl, Ser, Sym, Tr.
Alpha build_alpha(const FormulaPtr& phi, FrameSet frames);

/// Semantic oracle over the multiset model. The sentence must be closed and
/// use only predicates from the profile.
bool eval_c1(const CardinalityProfile& profile, const C1Ptr& sentence);

/// Satisfiability of a closed C1 sentence. Enumerates truth-value guesses
/// for the quantified subsentences (fewest true first) and solves the
/// induced integer-feasibility system by depth-first assignment with
/// interval propagation. Returns a witness profile or nothing (unsat).
std::optional<CardinalityProfile> decide_c1(const C1Ptr& sentence);

/// Materializes a Kripke model from a satisfying profile of
/// build_alpha(phi, frames): one world per counted type member, relation
/// (q0-set x q1-set) u (q2-set x q2-set), designated world a q0-world
/// satisfying f1(phi). Model-checks phi and the required frame classes
/// before returning; a failure signals a solver bug.
PointedStructure model_from_profile(const CardinalityProfile& profile,
                                    const Alpha& alpha, const FormulaPtr& phi,
                                    FrameSet required);

}  // namespace gml::c1
