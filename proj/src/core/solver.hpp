#pragma once

#include "core/brute.hpp"
#include "core/formula.hpp"
#include "core/kripke.hpp"
#include "core/normal_form.hpp"

#include <optional>
#include <string>

namespace gml::solver {

struct SolverOptions {
    /// Maximum model size for bounded searches.
    int cap = 12;
    /// Shuffles type exploration order in the transitive search when
    /// nonzero; verdicts stay deterministic for a fixed seed.
    unsigned long long seed = 0;
    /// Decision-node budget for the transitive search; exceeding it yields
    /// Unknown, never a wrong verdict.
    unsigned long long node_budget = 400000;
};

struct Verdict {
    enum class Kind { Sat, Unsat, Unknown };
    Kind kind = Kind::Unknown;
    std::optional<PointedStructure> model;  // present iff Sat; verified
    std::string reason;                     // non-empty iff Unknown

    bool sat() const { return kind == Kind::Sat; }
    bool unsat() const { return kind == Kind::Unsat; }
    bool unknown() const { return kind == Kind::Unknown; }

    static Verdict mk_sat(PointedStructure m) {
        return {Kind::Sat, std::move(m), ""};
    }
    static Verdict mk_unsat() { return {Kind::Unsat, std::nullopt, ""}; }
    static Verdict mk_unknown(std::string why) {
        return {Kind::Unknown, std::nullopt, std::move(why)};
    }
};

/// Frame-class dispatcher. Euclidean-type classes (Eucl in F, or Sym and Tr
/// both in F) go through the C1 translation and never return Unknown;
/// transitive classes run the bounded model search; the remaining classes
/// fall back to a small brute-force search and answer Sat or Unknown only.
Verdict decide(const FormulaPtr& f, FrameSet frames,
               const SolverOptions& opts = {});

/// Requires Eucl in F or {Sym,Tr} subset of F.
Verdict decide_euclidean(const FormulaPtr& f, FrameSet frames);

/// Requires Tr in F and F subset of {Rfl,Ser,Tr}. Searches pointed
/// transitive (and reflexive, when requested) structures up to
/// min(model_size_bound, cap) worlds. Unsat only after exhausting the full
/// bound; Unknown when stopped by the cap or the node budget.
Verdict decide_transitive(const FormulaPtr& f, FrameSet frames,
                          const SolverOptions& opts = {});

/// Size bound for satisfiable normal forms over transitive frames:
/// (b+1)*(b^(2l+1)-1)/(b-1) with l the number of lower entries and
/// b = max(2, sum of the lower counts).
Int model_size_bound(const nf::NormalForm& nf);

}  // namespace gml::solver
