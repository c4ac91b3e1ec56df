#include "core/c1.hpp"

#include <algorithm>
#include <unordered_map>

namespace gml::c1 {

C1Ptr C1Formula::make(C1Op op, std::string pred, Int count, C1Ptr lhs,
                      C1Ptr rhs) {
    auto f = std::shared_ptr<C1Formula>(new C1Formula());
    f->op_ = op;
    f->pred_ = std::move(pred);
    f->count_ = std::move(count);
    f->lhs_ = std::move(lhs);
    f->rhs_ = std::move(rhs);
    return f;
}

C1Ptr c_true() {
    static const C1Ptr t = C1Formula::make(C1Op::True, "", 0, nullptr, nullptr);
    return t;
}
C1Ptr c_false() {
    static const C1Ptr f =
        C1Formula::make(C1Op::False, "", 0, nullptr, nullptr);
    return f;
}
C1Ptr c_atom(std::string pred) {
    return C1Formula::make(C1Op::Atom, std::move(pred), 0, nullptr, nullptr);
}
C1Ptr c_not(C1Ptr a) {
    return C1Formula::make(C1Op::Not, "", 0, std::move(a), nullptr);
}
C1Ptr c_and(C1Ptr a, C1Ptr b) {
    return C1Formula::make(C1Op::And, "", 0, std::move(a), std::move(b));
}
C1Ptr c_or(C1Ptr a, C1Ptr b) {
    return C1Formula::make(C1Op::Or, "", 0, std::move(a), std::move(b));
}
C1Ptr c_implies(C1Ptr a, C1Ptr b) {
    return C1Formula::make(C1Op::Implies, "", 0, std::move(a), std::move(b));
}
C1Ptr c_iff(C1Ptr a, C1Ptr b) {
    return C1Formula::make(C1Op::Iff, "", 0, std::move(a), std::move(b));
}
C1Ptr c_geq(Int count, C1Ptr body) {
    if (count < 0) throw std::invalid_argument("negative count");
    return C1Formula::make(C1Op::CountGeq, "", std::move(count),
                           std::move(body), nullptr);
}
C1Ptr c_leq(Int count, C1Ptr body) {
    if (count < 0) throw std::invalid_argument("negative count");
    return C1Formula::make(C1Op::CountLeq, "", std::move(count),
                           std::move(body), nullptr);
}
C1Ptr c_exists(C1Ptr body) { return c_geq(1, std::move(body)); }
C1Ptr c_forall(C1Ptr body) { return c_leq(0, c_not(std::move(body))); }

namespace {

bool c1_equal(const C1Ptr& a, const C1Ptr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b || a->op() != b->op()) return false;
    switch (a->op()) {
        case C1Op::True:
        case C1Op::False:
            return true;
        case C1Op::Atom:
            return a->pred() == b->pred();
        case C1Op::Not:
            return c1_equal(a->child(), b->child());
        case C1Op::CountGeq:
        case C1Op::CountLeq:
            return a->count() == b->count() && c1_equal(a->child(), b->child());
        default:
            return c1_equal(a->lhs(), b->lhs()) && c1_equal(a->rhs(), b->rhs());
    }
}

std::size_t c1_hash(const C1Ptr& f) {
    if (!f) return 0;
    std::size_t h = static_cast<std::size_t>(f->op()) * 0x9e3779b97f4a7c15ull;
    auto mix = [&h](std::size_t v) {
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    switch (f->op()) {
        case C1Op::Atom:
            mix(std::hash<std::string>{}(f->pred()));
            break;
        case C1Op::CountGeq:
        case C1Op::CountLeq:
            mix(std::hash<std::string>{}(f->count().str()));
            mix(c1_hash(f->child()));
            break;
        case C1Op::Not:
            mix(c1_hash(f->child()));
            break;
        case C1Op::True:
        case C1Op::False:
            break;
        default:
            mix(c1_hash(f->lhs()));
            mix(c1_hash(f->rhs()));
            break;
    }
    return h;
}

struct C1Hash {
    std::size_t operator()(const C1Ptr& f) const { return c1_hash(f); }
};
struct C1Eq {
    bool operator()(const C1Ptr& a, const C1Ptr& b) const {
        return c1_equal(a, b);
    }
};

int c1_precedence(C1Op op) {
    switch (op) {
        case C1Op::Iff:
            return 1;
        case C1Op::Implies:
            return 2;
        case C1Op::Or:
            return 3;
        case C1Op::And:
            return 4;
        case C1Op::Not:
            return 5;
        default:
            return 6;
    }
}

void render_c1_into(const C1Ptr& f, int min_prec, std::string& out) {
    int prec = c1_precedence(f->op());
    bool parens = prec < min_prec;
    if (parens) out.push_back('(');
    switch (f->op()) {
        case C1Op::True:
            out += "true";
            break;
        case C1Op::False:
            out += "false";
            break;
        case C1Op::Atom:
            out += f->pred() + "(x)";
            break;
        case C1Op::Not:
            out.push_back('~');
            render_c1_into(f->child(), 5, out);
            break;
        case C1Op::CountGeq:
        case C1Op::CountLeq:
            out += f->op() == C1Op::CountGeq ? "E>=" : "E<=";
            out += f->count().str();
            out += " x.(";
            render_c1_into(f->child(), 0, out);
            out.push_back(')');
            break;
        case C1Op::And:
            render_c1_into(f->lhs(), 4, out);
            out += " & ";
            render_c1_into(f->rhs(), 5, out);
            break;
        case C1Op::Or:
            render_c1_into(f->lhs(), 3, out);
            out += " | ";
            render_c1_into(f->rhs(), 4, out);
            break;
        case C1Op::Implies:
            render_c1_into(f->lhs(), 3, out);
            out += " -> ";
            render_c1_into(f->rhs(), 2, out);
            break;
        case C1Op::Iff:
            render_c1_into(f->lhs(), 2, out);
            out += " <-> ";
            render_c1_into(f->rhs(), 1, out);
            break;
    }
    if (parens) out.push_back(')');
}

}  // namespace

std::string render_c1(const C1Ptr& f) {
    std::string out;
    render_c1_into(f, 0, out);
    return out;
}

// ---------------------------------------------------------------------------
// Translation
// ---------------------------------------------------------------------------

namespace {

PropLetter fresh_named(const std::string& base,
                       const std::set<PropLetter>& avoid) {
    PropLetter cand = base;
    while (avoid.count(cand)) cand += "_";
    return cand;
}

// f2 relativizes every graded operator to q2; f1 does the same with q1 at
// the top level but delegates bodies to f2.
C1Ptr translate(const FormulaPtr& f, const std::string& q1,
                const std::string& q2, bool top) {
    switch (f->op()) {
        case Op::True:
            return c_true();
        case Op::False:
            return c_false();
        case Op::Letter:
            return c_atom(f->name());
        case Op::Not:
            return c_not(translate(f->child(), q1, q2, top));
        case Op::And:
            return c_and(translate(f->lhs(), q1, q2, top),
                         translate(f->rhs(), q1, q2, top));
        case Op::Or:
            return c_or(translate(f->lhs(), q1, q2, top),
                        translate(f->rhs(), q1, q2, top));
        case Op::Implies:
            return c_implies(translate(f->lhs(), q1, q2, top),
                             translate(f->rhs(), q1, q2, top));
        case Op::Iff:
            return c_iff(translate(f->lhs(), q1, q2, top),
                         translate(f->rhs(), q1, q2, top));
        case Op::AtLeast:
        case Op::AtMost: {
            C1Ptr body = c_and(translate(f->child(), q1, q2, false),
                               c_atom(top ? q1 : q2));
            return f->op() == Op::AtLeast ? c_geq(f->count(), body)
                                          : c_leq(f->count(), body);
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

Alpha build_alpha(const FormulaPtr& phi, FrameSet frames) {
    if (frames.contains(FrameClass::Eucl))
        throw std::invalid_argument(
            "build_alpha handles Rfl/Ser/Sym/Tr only; Eucl is implicit");
    std::set<PropLetter> avoid = letters(phi);
    Alpha out;
    out.q0 = fresh_named("q0", avoid);
    avoid.insert(out.q0);
    out.q1 = fresh_named("q1", avoid);
    avoid.insert(out.q1);
    out.q2 = fresh_named("q2", avoid);

    out.f1 = translate(phi, out.q1, out.q2, true);
    C1Ptr alpha = c_and(c_exists(c_and(out.f1, c_atom(out.q0))),
                        c_forall(c_implies(c_atom(out.q1), c_atom(out.q2))));
    if (frames.contains(FrameClass::Rfl))
        alpha = c_and(alpha, c_forall(c_implies(c_atom(out.q0), c_atom(out.q1))));
    if (frames.contains(FrameClass::Ser))
        alpha = c_and(alpha, c_exists(c_atom(out.q1)));
    if (frames.contains(FrameClass::Sym))
        alpha = c_and(alpha,
                      c_or(c_forall(c_implies(c_atom(out.q0), c_atom(out.q1))),
                           c_not(c_exists(c_atom(out.q1)))));
    if (frames.contains(FrameClass::Tr))
        alpha = c_and(alpha, c_forall(c_implies(c_atom(out.q2), c_atom(out.q1))));
    out.sentence = alpha;
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation over profiles
// ---------------------------------------------------------------------------

namespace {

void collect_preds(const C1Ptr& f, std::set<std::string>& out) {
    switch (f->op()) {
        case C1Op::Atom:
            out.insert(f->pred());
            break;
        case C1Op::Not:
        case C1Op::CountGeq:
        case C1Op::CountLeq:
            collect_preds(f->child(), out);
            break;
        case C1Op::And:
        case C1Op::Or:
        case C1Op::Implies:
        case C1Op::Iff:
            collect_preds(f->lhs(), out);
            collect_preds(f->rhs(), out);
            break;
        default:
            break;
    }
}

struct ProfileEval {
    const CardinalityProfile& profile;
    std::unordered_map<const C1Formula*, bool> quantifier_memo;
    std::unordered_map<std::string, int> pred_index;

    explicit ProfileEval(const CardinalityProfile& p) : profile(p) {
        for (std::size_t i = 0; i < p.predicates.size(); ++i)
            pred_index[p.predicates[i]] = static_cast<int>(i);
    }

    bool sentence(const C1Ptr& f) {
        switch (f->op()) {
            case C1Op::True:
                return true;
            case C1Op::False:
                return false;
            case C1Op::Atom:
                throw std::invalid_argument(
                    "open formula: free atom outside a quantifier");
            case C1Op::Not:
                return !sentence(f->child());
            case C1Op::And:
                return sentence(f->lhs()) && sentence(f->rhs());
            case C1Op::Or:
                return sentence(f->lhs()) || sentence(f->rhs());
            case C1Op::Implies:
                return !sentence(f->lhs()) || sentence(f->rhs());
            case C1Op::Iff:
                return sentence(f->lhs()) == sentence(f->rhs());
            case C1Op::CountGeq:
            case C1Op::CountLeq:
                return quantifier(f);
        }
        throw std::logic_error("unreachable");
    }

    bool quantifier(const C1Ptr& f) {
        auto it = quantifier_memo.find(f.get());
        if (it != quantifier_memo.end()) return it->second;
        Int matching = 0;
        for (const auto& [type, n] : profile.counts)
            if (at_type(type, f->child())) matching += n;
        bool truth = f->op() == C1Op::CountGeq ? matching >= f->count()
                                               : matching <= f->count();
        quantifier_memo.emplace(f.get(), truth);
        return truth;
    }

    bool at_type(unsigned type, const C1Ptr& f) {
        switch (f->op()) {
            case C1Op::True:
                return true;
            case C1Op::False:
                return false;
            case C1Op::Atom: {
                auto it = pred_index.find(f->pred());
                if (it == pred_index.end())
                    throw std::invalid_argument(
                        "profile does not cover predicate " + f->pred());
                return (type >> it->second) & 1u;
            }
            case C1Op::Not:
                return !at_type(type, f->child());
            case C1Op::And:
                return at_type(type, f->lhs()) && at_type(type, f->rhs());
            case C1Op::Or:
                return at_type(type, f->lhs()) || at_type(type, f->rhs());
            case C1Op::Implies:
                return !at_type(type, f->lhs()) || at_type(type, f->rhs());
            case C1Op::Iff:
                return at_type(type, f->lhs()) == at_type(type, f->rhs());
            case C1Op::CountGeq:
            case C1Op::CountLeq:
                return quantifier(f);
        }
        throw std::logic_error("unreachable");
    }
};

}  // namespace

bool eval_c1(const CardinalityProfile& profile, const C1Ptr& sentence) {
    ProfileEval ev(profile);
    return ev.sentence(sentence);
}

// ---------------------------------------------------------------------------
// Decision procedure
// ---------------------------------------------------------------------------

namespace {

void collect_subsentences(const C1Ptr& f, std::vector<C1Ptr>& order,
                          std::unordered_map<C1Ptr, int, C1Hash, C1Eq>& index) {
    switch (f->op()) {
        case C1Op::Not:
            collect_subsentences(f->child(), order, index);
            break;
        case C1Op::And:
        case C1Op::Or:
        case C1Op::Implies:
        case C1Op::Iff:
            collect_subsentences(f->lhs(), order, index);
            collect_subsentences(f->rhs(), order, index);
            break;
        case C1Op::CountGeq:
        case C1Op::CountLeq:
            collect_subsentences(f->child(), order, index);
            if (!index.count(f)) {
                index.emplace(f, static_cast<int>(order.size()));
                order.push_back(f);
            }
            break;
        default:
            break;
    }
}

// Truth of a subformula with atoms read from a one-type and quantified
// subsentences read from the guess.
bool eval_under_guess(const C1Ptr& f, unsigned type,
                      const std::vector<std::string>& preds,
                      const std::unordered_map<C1Ptr, int, C1Hash, C1Eq>& index,
                      unsigned long long guess, bool allow_atoms) {
    switch (f->op()) {
        case C1Op::True:
            return true;
        case C1Op::False:
            return false;
        case C1Op::Atom: {
            if (!allow_atoms)
                throw std::invalid_argument(
                    "open formula: free atom outside a quantifier");
            auto it = std::lower_bound(preds.begin(), preds.end(), f->pred());
            return (type >> (it - preds.begin())) & 1u;
        }
        case C1Op::Not:
            return !eval_under_guess(f->child(), type, preds, index, guess,
                                     allow_atoms);
        case C1Op::And:
            return eval_under_guess(f->lhs(), type, preds, index, guess,
                                    allow_atoms) &&
                   eval_under_guess(f->rhs(), type, preds, index, guess,
                                    allow_atoms);
        case C1Op::Or:
            return eval_under_guess(f->lhs(), type, preds, index, guess,
                                    allow_atoms) ||
                   eval_under_guess(f->rhs(), type, preds, index, guess,
                                    allow_atoms);
        case C1Op::Implies:
            return !eval_under_guess(f->lhs(), type, preds, index, guess,
                                     allow_atoms) ||
                   eval_under_guess(f->rhs(), type, preds, index, guess,
                                    allow_atoms);
        case C1Op::Iff:
            return eval_under_guess(f->lhs(), type, preds, index, guess,
                                    allow_atoms) ==
                   eval_under_guess(f->rhs(), type, preds, index, guess,
                                    allow_atoms);
        case C1Op::CountGeq:
        case C1Op::CountLeq:
            return (guess >> index.at(f)) & 1ull;
    }
    throw std::logic_error("unreachable");
}

struct LinearConstraint {
    bool geq;   // sum >= bound; otherwise sum <= bound
    Int bound;
    int sub;    // owning subsentence index, -1 for the population constraint
};

// One variable per constraint-membership signature; members of a signature
// are interchangeable, so only their aggregate count matters.
struct AggVar {
    unsigned long long memberships = 0;  // bit i: occurs in constraint i
    Int multiplicity = 0;                // number of one-types aggregated
    std::vector<unsigned> types;
};

struct Feasibility {
    std::vector<LinearConstraint> constraints;
    std::vector<AggVar> vars;
    Int cap_per_type;  // B

    std::vector<Int> solution;

    bool solve() {
        sums_.assign(constraints.size(), 0);
        potential_.assign(constraints.size(), 0);
        for (std::size_t i = 0; i < constraints.size(); ++i)
            for (const auto& v : vars)
                if (v.memberships >> i & 1ull)
                    potential_[i] += v.multiplicity * cap_per_type;
        solution.assign(vars.size(), 0);
        return assign(0);
    }

private:
    bool assign(std::size_t idx) {
        // Prune: a lower bound no remaining variable can reach.
        for (std::size_t i = 0; i < constraints.size(); ++i)
            if (constraints[i].geq && sums_[i] + potential_[i] < constraints[i].bound)
                return false;
        if (idx == vars.size()) {
            for (std::size_t i = 0; i < constraints.size(); ++i)
                if (constraints[i].geq && sums_[i] < constraints[i].bound)
                    return false;
            return true;
        }
        const AggVar& v = vars[idx];
        Int cap = v.multiplicity * cap_per_type;
        Int lo = 0, hi = cap, max_need = 0;
        for (std::size_t i = 0; i < constraints.size(); ++i) {
            if (!(v.memberships >> i & 1ull)) continue;
            if (constraints[i].geq) {
                Int need = constraints[i].bound - sums_[i];
                if (need > max_need) max_need = need;
                Int others = potential_[i] - cap;
                if (need - others > lo) lo = need - others;
            } else {
                Int room = constraints[i].bound - sums_[i];
                if (room < hi) hi = room;
            }
        }
        if (lo > hi) return false;
        Int top = max_need > lo ? max_need : lo;
        if (top > hi) top = hi;
        for (std::size_t i = 0; i < constraints.size(); ++i)
            if (v.memberships >> i & 1ull) potential_[i] -= cap;
        for (Int val = lo; val <= top; ++val) {
            for (std::size_t i = 0; i < constraints.size(); ++i)
                if (v.memberships >> i & 1ull) sums_[i] += val;
            solution[idx] = val;
            if (assign(idx + 1)) return true;
            for (std::size_t i = 0; i < constraints.size(); ++i)
                if (v.memberships >> i & 1ull) sums_[i] -= val;
        }
        for (std::size_t i = 0; i < constraints.size(); ++i)
            if (v.memberships >> i & 1ull) potential_[i] += cap;
        return false;
    }

    std::vector<Int> sums_;
    std::vector<Int> potential_;
};

Int cap_from_constants(const C1Ptr& f) {
    switch (f->op()) {
        case C1Op::Not:
            return cap_from_constants(f->child());
        case C1Op::And:
        case C1Op::Or:
        case C1Op::Implies:
        case C1Op::Iff:
            return cap_from_constants(f->lhs()) + cap_from_constants(f->rhs());
        case C1Op::CountGeq:
        case C1Op::CountLeq:
            return f->count() + 1 + cap_from_constants(f->child());
        default:
            return 0;
    }
}

}  // namespace

std::optional<CardinalityProfile> decide_c1(const C1Ptr& sentence) {
    std::set<std::string> pred_set;
    collect_preds(sentence, pred_set);
    std::vector<std::string> preds(pred_set.begin(), pred_set.end());
    if (preds.size() > 20)
        throw std::invalid_argument("too many predicates for the C1 solver");

    std::vector<C1Ptr> subs;
    std::unordered_map<C1Ptr, int, C1Hash, C1Eq> sub_index;
    collect_subsentences(sentence, subs, sub_index);
    if (subs.size() > 30)
        throw std::invalid_argument("too many quantified subsentences");

    const unsigned type_count = 1u << preds.size();
    // Any solution can be clamped to B per variable: a clamped variable
    // alone already meets every lower bound it occurs in, and upper bounds
    // only relax.
    const Int cap = 1 + cap_from_constants(sentence);

    // Guesses ordered with fewer true subsentences first.
    std::vector<unsigned long long> guesses;
    for (unsigned long long g = 0; g < (1ull << subs.size()); ++g)
        guesses.push_back(g);
    std::stable_sort(guesses.begin(), guesses.end(),
                     [](unsigned long long a, unsigned long long b) {
                         return __builtin_popcountll(a) < __builtin_popcountll(b);
                     });

    for (unsigned long long guess : guesses) {
        if (!eval_under_guess(sentence, 0, preds, sub_index, guess, false))
            continue;

        Feasibility fs;
        fs.cap_per_type = cap;
        bool guess_possible = true;
        for (std::size_t i = 0; i < subs.size(); ++i) {
            const C1Ptr& q = subs[i];
            bool truth = guess >> i & 1ull;
            bool geq = q->op() == C1Op::CountGeq;
            LinearConstraint c;
            c.sub = static_cast<int>(i);
            if (truth) {
                c.geq = geq;
                c.bound = q->count();
            } else if (geq) {
                if (q->count() == 0) {
                    guess_possible = false;  // E>=0 is never false
                    break;
                }
                c.geq = false;
                c.bound = q->count() - 1;
            } else {
                c.geq = true;
                c.bound = q->count() + 1;
            }
            fs.constraints.push_back(std::move(c));
        }
        if (!guess_possible) continue;
        // Non-empty domain.
        fs.constraints.push_back({true, 1, -1});

        // Group one-types by constraint membership.
        std::map<unsigned long long, std::size_t> sig_index;
        for (unsigned type = 0; type < type_count; ++type) {
            unsigned long long sig = 0;
            for (std::size_t i = 0; i < fs.constraints.size(); ++i) {
                const auto& c = fs.constraints[i];
                bool in = c.sub < 0 ||
                          eval_under_guess(subs[c.sub]->child(), type, preds,
                                           sub_index, guess, true);
                if (in) sig |= 1ull << i;
            }
            auto [it, fresh] = sig_index.emplace(sig, fs.vars.size());
            if (fresh) {
                fs.vars.push_back({});
                fs.vars.back().memberships = sig;
            }
            fs.vars[it->second].multiplicity += 1;
            fs.vars[it->second].types.push_back(type);
        }

        if (!fs.solve()) continue;

        CardinalityProfile profile;
        profile.predicates = preds;
        for (std::size_t v = 0; v < fs.vars.size(); ++v) {
            Int remaining = fs.solution[v];
            for (unsigned type : fs.vars[v].types) {
                if (remaining == 0) break;
                Int take = remaining < cap ? remaining : cap;
                profile.counts[type] = take;
                remaining -= take;
            }
        }
        if (!eval_c1(profile, sentence))
            throw std::logic_error("C1 solver produced a non-model profile");
        return profile;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Model reconstruction
// ---------------------------------------------------------------------------

PointedStructure model_from_profile(const CardinalityProfile& profile,
                                    const Alpha& alpha, const FormulaPtr& phi,
                                    FrameSet required) {
    ProfileEval ev(profile);
    int iq0 = -1, iq1 = -1, iq2 = -1;
    for (std::size_t i = 0; i < profile.predicates.size(); ++i) {
        if (profile.predicates[i] == alpha.q0) iq0 = static_cast<int>(i);
        if (profile.predicates[i] == alpha.q1) iq1 = static_cast<int>(i);
        if (profile.predicates[i] == alpha.q2) iq2 = static_cast<int>(i);
    }
    if (iq0 < 0 || iq1 < 0 || iq2 < 0)
        throw std::invalid_argument("profile does not cover q0/q1/q2");

    const std::set<PropLetter> phi_letters = letters(phi);
    const C1Ptr designated_cond = c_and(alpha.f1, c_atom(alpha.q0));

    unsigned witness_type = 0;
    bool witness_found = false;
    bool q_sets_agree = true;  // q1 and q2 coincide on the populated types
    for (const auto& [type, n] : profile.counts) {
        (void)n;
        if (!witness_found && ev.at_type(type, designated_cond)) {
            witness_type = type;
            witness_found = true;
        }
        if (((type >> iq1) & 1u) != ((type >> iq2) & 1u)) q_sets_agree = false;
    }
    if (!witness_found)
        throw std::logic_error("no type satisfies f1(phi) & q0");

    // Only q1/q2 elements are counted by the relativized quantifiers. The
    // designated world's successor set must be exactly the q1-set; when the
    // witness type itself sits in q1 u q2 and the sets differ, a fresh
    // uncounted copy of it plays the q0 role instead.
    const bool witness_counted =
        ((witness_type >> iq1) | (witness_type >> iq2)) & 1u;
    const bool designated_inline = !witness_counted || q_sets_agree;

    Int population = 0;
    for (const auto& [type, n] : profile.counts)
        if (((type >> iq1) | (type >> iq2)) & 1u) population += n;
    if (population > 2000000)
        throw std::runtime_error("profile too large to materialize");

    PointedStructure out;
    KripkeStructure& s = out.structure;
    std::vector<unsigned> world_type;
    auto materialize = [&](unsigned type) {
        int w = s.add_world("w" + std::to_string(world_type.size()));
        world_type.push_back(type);
        for (std::size_t i = 0; i < profile.predicates.size(); ++i)
            if ((type >> i & 1u) && phi_letters.count(profile.predicates[i]))
                s.set_letter(profile.predicates[i], w);
        return w;
    };
    out.world = -1;
    for (const auto& [type, n] : profile.counts) {
        if (!(((type >> iq1) | (type >> iq2)) & 1u)) continue;
        for (Int k = 0; k < n; ++k) {
            int w = materialize(type);
            if (out.world < 0 && designated_inline && type == witness_type)
                out.world = w;
        }
    }
    if (out.world < 0) out.world = materialize(witness_type);

    const int n_worlds = s.world_count();
    Bits q1set(n_worlds), q2set(n_worlds);
    for (int w = 0; w < n_worlds; ++w) {
        if (w == out.world && !designated_inline) continue;  // the q0 copy
        if (world_type[w] >> iq1 & 1u) q1set.set(w);
        if (world_type[w] >> iq2 & 1u) q2set.set(w);
    }
    // r = (q0-set x q1-set) u (q2-set x q2-set), with q0 = {designated}
    for (std::size_t v = q1set.find_first(); v != Bits::npos;
         v = q1set.find_next(v))
        s.add_edge(out.world, static_cast<int>(v));
    for (std::size_t w = q2set.find_first(); w != Bits::npos;
         w = q2set.find_next(w))
        for (std::size_t v = q2set.find_first(); v != Bits::npos;
             v = q2set.find_next(v))
            s.add_edge(static_cast<int>(w), static_cast<int>(v));

    required.insert(FrameClass::Eucl);
    if (!frame_properties(s).contains_all(required))
        throw std::logic_error("reconstructed model misses a frame property");
    if (!check(s, out.world, phi))
        throw std::logic_error("reconstructed model fails the model check");
    return out;
}

}  // namespace gml::c1
