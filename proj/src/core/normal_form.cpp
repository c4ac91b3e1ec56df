#include "core/normal_form.hpp"

#include <unordered_map>

namespace gml::nf {

namespace {

// dia>=0 subformulas are tautologies; remove them before renaming.
FormulaPtr drop_zero_lower(const FormulaPtr& f) {
    switch (f->op()) {
        case Op::Not:
            return mk_not(drop_zero_lower(f->child()));
        case Op::And:
            return mk_and(drop_zero_lower(f->lhs()), drop_zero_lower(f->rhs()));
        case Op::Or:
            return mk_or(drop_zero_lower(f->lhs()), drop_zero_lower(f->rhs()));
        case Op::Implies:
            return mk_implies(drop_zero_lower(f->lhs()),
                              drop_zero_lower(f->rhs()));
        case Op::Iff:
            return mk_iff(drop_zero_lower(f->lhs()), drop_zero_lower(f->rhs()));
        case Op::AtLeast:
            if (f->count() == 0) return mk_true();
            return mk_at_least(f->count(), drop_zero_lower(f->child()));
        case Op::AtMost:
            return mk_at_most(f->count(), drop_zero_lower(f->child()));
        default:
            return f;
    }
}

// First innermost graded subformula in left-to-right order. Innermost
// subformulas have propositional bodies by definition.
FormulaPtr find_innermost_graded(const FormulaPtr& f) {
    switch (f->op()) {
        case Op::Not:
            return find_innermost_graded(f->child());
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff: {
            FormulaPtr left = find_innermost_graded(f->lhs());
            if (left) return left;
            return find_innermost_graded(f->rhs());
        }
        case Op::AtLeast:
        case Op::AtMost: {
            FormulaPtr inner = find_innermost_graded(f->child());
            if (inner) return inner;
            return f;
        }
        default:
            return nullptr;
    }
}

FormulaPtr substitute(const FormulaPtr& f, const FormulaPtr& target,
                      const FormulaPtr& replacement) {
    if (equal(f, target)) return replacement;
    switch (f->op()) {
        case Op::Not:
            return mk_not(substitute(f->child(), target, replacement));
        case Op::And:
            return mk_and(substitute(f->lhs(), target, replacement),
                          substitute(f->rhs(), target, replacement));
        case Op::Or:
            return mk_or(substitute(f->lhs(), target, replacement),
                         substitute(f->rhs(), target, replacement));
        case Op::Implies:
            return mk_implies(substitute(f->lhs(), target, replacement),
                              substitute(f->rhs(), target, replacement));
        case Op::Iff:
            return mk_iff(substitute(f->lhs(), target, replacement),
                          substitute(f->rhs(), target, replacement));
        case Op::AtLeast:
            return mk_at_least(f->count(),
                               substitute(f->child(), target, replacement));
        case Op::AtMost:
            return mk_at_most(f->count(),
                              substitute(f->child(), target, replacement));
        default:
            return f;
    }
}

// dia<=C p  <->  ~dia>=C+1 p; dia>=C p (C>0)  <->  ~dia<=C-1 p.
FormulaPtr complement_of(const FormulaPtr& rho) {
    if (rho->op() == Op::AtMost)
        return mk_at_least(rho->count() + 1, rho->child());
    return mk_at_most(rho->count() - 1, rho->child());
}

}  // namespace

NormalForm normalize(const FormulaPtr& f) {
    NormalForm out;
    std::set<PropLetter> used = letters(f);

    FormulaPtr matrix = drop_zero_lower(f);
    std::vector<FormulaPtr> theta_clauses;
    std::unordered_map<FormulaPtr, PropLetter, FormulaHash, FormulaEq> guard_of;

    for (;;) {
        FormulaPtr rho = find_innermost_graded(matrix);
        if (!rho) break;
        auto hit = guard_of.find(rho);
        if (hit != guard_of.end()) {
            matrix = substitute(matrix, rho, mk_letter(hit->second));
            continue;
        }
        FormulaPtr rho_bar = complement_of(rho);
        auto pair = fresh_letters(2, used);
        const PropLetter& p = pair[0];
        const PropLetter& q = pair[1];
        used.insert(p);
        used.insert(q);
        out.fresh.push_back(p);
        out.fresh.push_back(q);
        guard_of.emplace(rho, p);
        guard_of.emplace(rho_bar, q);
        theta_clauses.push_back(mk_or(mk_letter(p), mk_letter(q)));
        if (rho->op() == Op::AtLeast) {
            out.lowers.push_back({p, rho->count(), rho->child()});
            out.uppers.push_back({q, rho->count() - 1, rho->child()});
        } else {
            out.uppers.push_back({p, rho->count(), rho->child()});
            out.lowers.push_back({q, rho->count() + 1, rho->child()});
        }
        matrix = substitute(matrix, rho, mk_letter(p));
    }

    out.eta = matrix;
    out.theta = mk_conj(theta_clauses);
    return out;
}

FormulaPtr to_formula(const NormalForm& nf) {
    std::vector<FormulaPtr> inner{nf.theta};
    for (const auto& e : nf.lowers)
        inner.push_back(mk_implies(mk_letter(e.guard),
                                   mk_at_least(e.count, e.body)));
    for (const auto& e : nf.uppers)
        inner.push_back(mk_implies(mk_letter(e.guard),
                                   mk_at_most(e.count, e.body)));
    return mk_and(nf.eta, mk_boxdot(mk_conj(inner)));
}

PointedStructure expand_guards(const PointedStructure& a, const NormalForm& nf) {
    if (nf.lowers.size() != nf.uppers.size())
        throw std::invalid_argument("normal form is not pair-aligned");
    PointedStructure out = a;
    // Replacement order: each body only mentions guards of earlier pairs.
    for (std::size_t r = 0; r < nf.lowers.size(); ++r) {
        Bits truth = truth_set(out.structure,
                               mk_at_least(nf.lowers[r].count,
                                           nf.lowers[r].body));
        for (int w = 0; w < out.structure.world_count(); ++w) {
            if (truth.test(w))
                out.structure.set_letter(nf.lowers[r].guard, w);
            else
                out.structure.set_letter(nf.uppers[r].guard, w);
        }
    }
    return out;
}

}  // namespace gml::nf
