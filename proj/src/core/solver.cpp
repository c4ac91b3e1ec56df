#include "core/solver.hpp"

#include "core/c1.hpp"

#include <algorithm>
#include <bitset>
#include <numeric>
#include <random>

namespace gml::solver {

Int model_size_bound(const nf::NormalForm& nf) {
    Int sum = 0;
    for (const auto& e : nf.lowers) sum += e.count;
    Int b = sum < 2 ? Int(2) : sum;
    unsigned ell = static_cast<unsigned>(nf.lowers.size());
    return (b + 1) * (boost::multiprecision::pow(b, 2 * ell + 1) - 1) / (b - 1);
}

// ---------------------------------------------------------------------------
// Transitive search: incremental witness-driven construction.
//
// Completeness rests on a thinning argument: any transitive model of the
// normal form shrinks to one whose relation is the transitive closure of
// chosen lower-witness edges (plus self loops in the reflexive case),
// restricted to the part generated from the designated world. The search
// enumerates exactly those structures up to the size limit.
// ---------------------------------------------------------------------------

namespace {

// World sets of the bounded search; caps beyond this width fall back to
// Unknown rather than silently truncating the search.
constexpr int kMaxSearchWorlds = 120;
using WorldSet = std::bitset<128>;

struct TypeInfo {
    unsigned bits = 0;
    unsigned lower_guards = 0;
    unsigned upper_guards = 0;
    unsigned pi_truth = 0;
    unsigned chi_truth = 0;
};

bool eval_prop(const FormulaPtr& f, unsigned assignment,
               const std::vector<PropLetter>& letter_list) {
    switch (f->op()) {
        case Op::True:
            return true;
        case Op::False:
            return false;
        case Op::Letter: {
            auto it = std::lower_bound(letter_list.begin(), letter_list.end(),
                                       f->name());
            if (it == letter_list.end() || *it != f->name()) return false;
            return assignment >> (it - letter_list.begin()) & 1u;
        }
        case Op::Not:
            return !eval_prop(f->child(), assignment, letter_list);
        case Op::And:
            return eval_prop(f->lhs(), assignment, letter_list) &&
                   eval_prop(f->rhs(), assignment, letter_list);
        case Op::Or:
            return eval_prop(f->lhs(), assignment, letter_list) ||
                   eval_prop(f->rhs(), assignment, letter_list);
        case Op::Implies:
            return !eval_prop(f->lhs(), assignment, letter_list) ||
                   eval_prop(f->rhs(), assignment, letter_list);
        case Op::Iff:
            return eval_prop(f->lhs(), assignment, letter_list) ==
                   eval_prop(f->rhs(), assignment, letter_list);
        default:
            throw std::invalid_argument("graded operator in propositional part");
    }
}

struct SearchState {
    std::vector<int> type_of;
    std::vector<WorldSet> succ;
    std::vector<WorldSet> pred;
    std::vector<WorldSet> pi_worlds;   // per lower entry
    std::vector<WorldSet> chi_worlds;  // per upper entry
    std::vector<std::pair<int, int>> obligations;
    std::size_t cursor = 0;
};

class TransitiveSearch {
public:
    TransitiveSearch(const nf::NormalForm& normal, bool reflexive,
                     int max_worlds, unsigned long long budget,
                     unsigned long long seed)
        : nf_(normal),
          reflexive_(reflexive),
          max_worlds_(max_worlds),
          budget_(budget) {
        std::set<PropLetter> ls = letters(nf::to_formula(nf_));
        letter_list_.assign(ls.begin(), ls.end());
        if (letter_list_.size() > 16)
            throw std::length_error("too many letters for the bounded search");
        if (max_worlds_ > kMaxSearchWorlds)
            throw std::length_error("size cap exceeds the search width");
        lower_count_.reserve(nf_.lowers.size());
        for (const auto& e : nf_.lowers)
            lower_count_.push_back(e.count > max_worlds_
                                       ? max_worlds_ + 1
                                       : static_cast<int>(e.count));
        upper_count_.reserve(nf_.uppers.size());
        for (const auto& e : nf_.uppers)
            upper_count_.push_back(e.count >= max_worlds_
                                       ? max_worlds_
                                       : static_cast<int>(e.count));
        enumerate_types(seed);
    }

    // The exploration was exhaustive iff budget_hit() stays false.
    std::optional<SearchState> run() {
        SearchState st;
        st.pi_worlds.assign(nf_.lowers.size(), 0);
        st.chi_worlds.assign(nf_.uppers.size(), 0);
        for (int t : initial_types_) {
            SearchState root = st;
            if (!add_world(root, t)) continue;
            if (dfs(root)) return found_;
            if (budget_hit_) return std::nullopt;
        }
        return std::nullopt;
    }

    bool budget_hit() const { return budget_hit_; }
    const std::vector<PropLetter>& letter_list() const { return letter_list_; }
    const std::vector<TypeInfo>& types() const { return types_; }

private:
    void enumerate_types(unsigned long long seed) {
        const unsigned l = static_cast<unsigned>(letter_list_.size());
        for (unsigned bits = 0; bits < (1u << l); ++bits) {
            if (!eval_prop(nf_.theta, bits, letter_list_)) continue;
            TypeInfo t;
            t.bits = bits;
            bool dead = false;
            for (std::size_t i = 0; i < nf_.lowers.size(); ++i) {
                if (eval_prop(mk_letter(nf_.lowers[i].guard), bits,
                              letter_list_)) {
                    t.lower_guards |= 1u << i;
                    if (lower_count_[i] > max_worlds_) dead = true;
                }
                if (eval_prop(nf_.lowers[i].body, bits, letter_list_))
                    t.pi_truth |= 1u << i;
            }
            for (std::size_t j = 0; j < nf_.uppers.size(); ++j) {
                if (eval_prop(mk_letter(nf_.uppers[j].guard), bits,
                              letter_list_))
                    t.upper_guards |= 1u << j;
                if (eval_prop(nf_.uppers[j].body, bits, letter_list_))
                    t.chi_truth |= 1u << j;
            }
            // A guard pair demanding >=C and <=D of the same body with
            // C > D can never be discharged.
            for (std::size_t i = 0; i < nf_.lowers.size() && !dead; ++i) {
                if (!(t.lower_guards >> i & 1u)) continue;
                for (std::size_t j = 0; j < nf_.uppers.size(); ++j)
                    if ((t.upper_guards >> j & 1u) &&
                        nf_.lowers[i].count > nf_.uppers[j].count &&
                        equal(nf_.lowers[i].body, nf_.uppers[j].body)) {
                        dead = true;
                        break;
                    }
            }
            if (dead) continue;
            types_.push_back(t);
        }
        // Types spawning fewer witness obligations first.
        std::stable_sort(types_.begin(), types_.end(),
                         [](const TypeInfo& a, const TypeInfo& b) {
                             int pa = __builtin_popcount(a.lower_guards);
                             int pb = __builtin_popcount(b.lower_guards);
                             return pa != pb ? pa < pb : a.bits < b.bits;
                         });
        for (std::size_t t = 0; t < types_.size(); ++t)
            if (eval_prop(nf_.eta, types_[t].bits, letter_list_))
                initial_types_.push_back(static_cast<int>(t));
        if (seed != 0) {
            std::mt19937_64 rng(seed);
            std::vector<int> order(types_.size());
            std::iota(order.begin(), order.end(), 0);
            std::shuffle(order.begin(), order.end(), rng);
            std::vector<TypeInfo> shuffled;
            std::vector<int> remap(types_.size());
            for (std::size_t i = 0; i < order.size(); ++i) {
                remap[order[i]] = static_cast<int>(i);
                shuffled.push_back(types_[order[i]]);
            }
            types_ = std::move(shuffled);
            for (int& t : initial_types_) t = remap[t];
            std::sort(initial_types_.begin(), initial_types_.end());
        }
        for (std::size_t i = 0; i < nf_.lowers.size(); ++i) {
            witness_types_.emplace_back();
            for (std::size_t t = 0; t < types_.size(); ++t)
                if (types_[t].pi_truth >> i & 1u)
                    witness_types_.back().push_back(static_cast<int>(t));
        }
    }

    bool uppers_ok(const SearchState& st, int w) const {
        const TypeInfo& t = types_[st.type_of[w]];
        unsigned guards = t.upper_guards;
        while (guards) {
            int j = __builtin_ctz(guards);
            guards &= guards - 1;
            if (static_cast<int>((st.succ[w] & st.chi_worlds[j]).count()) >
                upper_count_[j])
                return false;
        }
        return true;
    }

    bool add_world(SearchState& st, int type) {
        if (static_cast<int>(st.type_of.size()) >= max_worlds_) return false;
        int w = static_cast<int>(st.type_of.size());
        st.type_of.push_back(type);
        st.succ.emplace_back();
        st.pred.emplace_back();
        const TypeInfo& t = types_[type];
        for (std::size_t i = 0; i < nf_.lowers.size(); ++i)
            if (t.pi_truth >> i & 1u) st.pi_worlds[i].set(w);
        for (std::size_t j = 0; j < nf_.uppers.size(); ++j)
            if (t.chi_truth >> j & 1u) st.chi_worlds[j].set(w);
        unsigned guards = t.lower_guards;
        while (guards) {
            int i = __builtin_ctz(guards);
            guards &= guards - 1;
            st.obligations.emplace_back(w, i);
        }
        if (reflexive_ && !add_edge(st, w, w)) return false;
        // A new world may close chi counts of its predecessors only via
        // add_edge; its own row starts empty (or a self loop).
        return uppers_ok(st, w);
    }

    // Adds an edge and keeps the relation transitively closed. Fails when a
    // <=D_j tally is exceeded.
    bool add_edge(SearchState& st, int a, int b) {
        WorldSet sources = st.pred[a];
        sources.set(a);
        WorldSet targets = st.succ[b];
        targets.set(b);
        WorldSet touched;
        for (std::size_t s = sources._Find_first(); s < sources.size();
             s = sources._Find_next(s)) {
            WorldSet fresh = targets & ~st.succ[s];
            if (fresh.none()) continue;
            st.succ[s] |= fresh;
            touched.set(s);
            for (std::size_t t = fresh._Find_first(); t < fresh.size();
                 t = fresh._Find_next(t))
                st.pred[t].set(s);
        }
        for (std::size_t s = touched._Find_first(); s < touched.size();
             s = touched._Find_next(s))
            if (!uppers_ok(st, static_cast<int>(s))) return false;
        return true;
    }

    bool dfs(SearchState st) {
        if (budget_ == 0) {
            budget_hit_ = true;
            return false;
        }
        --budget_;
        while (st.cursor < st.obligations.size()) {
            auto [w, i] = st.obligations[st.cursor];
            int have =
                static_cast<int>((st.succ[w] & st.pi_worlds[i]).count());
            if (have >= lower_count_[i]) {
                ++st.cursor;
                continue;
            }
            return branch_witnesses(st, w, i, lower_count_[i] - have);
        }
        found_ = std::move(st);
        return true;
    }

    // Chooses `need` further pi_i-successors for w: subsets of existing
    // candidate worlds first, then mixes with newly created worlds.
    bool branch_witnesses(const SearchState& st, int w, int i, int need) {
        WorldSet candidates = st.pi_worlds[i] & ~st.succ[w];
        std::vector<int> existing;
        for (std::size_t v = candidates._Find_first(); v < candidates.size();
             v = candidates._Find_next(v))
            existing.push_back(static_cast<int>(v));
        const int room = max_worlds_ - static_cast<int>(st.type_of.size());
        for (int fresh = 0; fresh <= need; ++fresh) {
            if (fresh > room) break;
            int reuse = need - fresh;
            if (reuse > static_cast<int>(existing.size())) continue;
            std::vector<int> picked(reuse);
            if (enumerate_subsets(st, w, i, existing, reuse, 0, picked, fresh))
                return true;
            if (budget_hit_) return false;
        }
        return false;
    }

    bool enumerate_subsets(const SearchState& st, int w, int i,
                           const std::vector<int>& pool, int reuse, int from,
                           std::vector<int>& picked, int fresh) {
        if (reuse == 0)
            return branch_fresh_types(st, w, i, picked, fresh, 0);
        for (int p = from; p + reuse <= static_cast<int>(pool.size()); ++p) {
            picked[picked.size() - reuse] = pool[p];
            if (enumerate_subsets(st, w, i, pool, reuse - 1, p + 1, picked,
                                  fresh))
                return true;
            if (budget_hit_) return false;
        }
        return false;
    }

    // Types for new witnesses, as a non-decreasing sequence: fresh worlds
    // are interchangeable until typed.
    bool branch_fresh_types(const SearchState& st, int w, int i,
                            const std::vector<int>& reused, int fresh,
                            std::size_t min_type_pos) {
        if (fresh == 0) return apply_choice(st, w, i, reused, {});
        return branch_fresh_rec(st, w, i, reused, fresh, min_type_pos, {});
    }

    bool branch_fresh_rec(const SearchState& st, int w, int i,
                          const std::vector<int>& reused, int fresh,
                          std::size_t min_pos, std::vector<int> chosen) {
        if (fresh == 0) return apply_choice(st, w, i, reused, chosen);
        const auto& cands = witness_types_[i];
        for (std::size_t p = min_pos; p < cands.size(); ++p) {
            chosen.push_back(cands[p]);
            if (branch_fresh_rec(st, w, i, reused, fresh - 1, p, chosen))
                return true;
            chosen.pop_back();
            if (budget_hit_) return false;
        }
        return false;
    }

    bool apply_choice(const SearchState& st, int w, int i,
                      const std::vector<int>& reused,
                      const std::vector<int>& fresh_types) {
        if (budget_ == 0) {
            budget_hit_ = true;
            return false;
        }
        --budget_;
        SearchState next = st;
        for (int v : reused)
            if (!add_edge(next, w, v)) return false;
        for (int t : fresh_types) {
            int v = static_cast<int>(next.type_of.size());
            if (!add_world(next, t)) return false;
            if (!add_edge(next, w, v)) return false;
        }
        int have =
            static_cast<int>((next.succ[w] & next.pi_worlds[i]).count());
        if (have < lower_count_[i]) return false;
        ++next.cursor;
        return dfs(std::move(next));
    }

    const nf::NormalForm& nf_;
    bool reflexive_;
    int max_worlds_;
    unsigned long long budget_;
    bool budget_hit_ = false;
    std::vector<PropLetter> letter_list_;
    std::vector<int> lower_count_;
    std::vector<int> upper_count_;
    std::vector<TypeInfo> types_;
    std::vector<int> initial_types_;
    std::vector<std::vector<int>> witness_types_;
    std::optional<SearchState> found_;
};

PointedStructure build_model(const TransitiveSearch& search,
                             const SearchState& st) {
    PointedStructure out;
    const auto& letter_list = search.letter_list();
    const int n = static_cast<int>(st.type_of.size());
    for (int w = 0; w < n; ++w)
        out.structure.add_world("w" + std::to_string(w));
    for (int w = 0; w < n; ++w)
        for (int v = 0; v < n; ++v)
            if (st.succ[w].test(v)) out.structure.add_edge(w, v);
    for (int w = 0; w < n; ++w) {
        unsigned bits = search.types()[st.type_of[w]].bits;
        for (std::size_t l = 0; l < letter_list.size(); ++l)
            if (bits >> l & 1u) out.structure.set_letter(letter_list[l], w);
    }
    out.world = 0;
    return out;
}

}  // namespace

Verdict decide_transitive(const FormulaPtr& f, FrameSet frames,
                          const SolverOptions& opts) {
    if (!frames.contains(FrameClass::Tr) ||
        frames.contains(FrameClass::Sym) || frames.contains(FrameClass::Eucl))
        throw std::invalid_argument(
            "decide_transitive handles subsets of {rfl,ser,tr} containing tr");
    const bool reflexive = frames.contains(FrameClass::Rfl);
    FormulaPtr work = f;
    if (frames.contains(FrameClass::Ser) && !reflexive)
        work = mk_and(f, mk_boxdot(mk_dia(mk_true())));

    nf::NormalForm normal = nf::normalize(work);
    const Int bound = model_size_bound(normal);
    const int effective_cap = std::min(opts.cap, kMaxSearchWorlds);
    const bool complete_bound = bound <= effective_cap;
    const int limit =
        complete_bound ? static_cast<int>(bound) : effective_cap;

    std::optional<SearchState> hit;
    bool budget_hit = false;
    try {
        TransitiveSearch search(normal, reflexive, limit, opts.node_budget,
                                opts.seed);
        hit = search.run();
        budget_hit = search.budget_hit();
        if (hit) {
            PointedStructure model = build_model(search, *hit);
            if (!check(model, f) ||
                !frame_properties(model.structure).contains_all(frames))
                throw std::logic_error(
                    "transitive search produced a bad model");
            return Verdict::mk_sat(std::move(model));
        }
    } catch (const std::length_error& e) {
        return Verdict::mk_unknown(e.what());
    }
    if (budget_hit)
        return Verdict::mk_unknown("node budget exhausted at size cap " +
                                   std::to_string(limit));
    if (!complete_bound)
        return Verdict::mk_unknown(
            "cap " + std::to_string(limit) +
            " reached below the completeness bound " + bound.str());
    return Verdict::mk_unsat();
}

Verdict decide_euclidean(const FormulaPtr& f, FrameSet frames) {
    const bool sym_tr = frames.contains(FrameClass::Sym) &&
                        frames.contains(FrameClass::Tr);
    if (!frames.contains(FrameClass::Eucl) && !sym_tr)
        throw std::invalid_argument(
            "decide_euclidean needs Eucl in F or {Sym,Tr} subset of F");
    FrameSet base = frames;
    base.erase(FrameClass::Eucl);
    // Over Euclidean frames, reflexivity or symmetry each force
    // transitivity, so the translation may assume it; this also pins
    // q1 = q2, which the model reconstruction needs in those classes.
    if (base.contains(FrameClass::Rfl) || base.contains(FrameClass::Sym))
        base.insert(FrameClass::Tr);
    c1::Alpha alpha = c1::build_alpha(f, base);
    auto profile = c1::decide_c1(alpha.sentence);
    if (!profile) return Verdict::mk_unsat();
    return Verdict::mk_sat(
        c1::model_from_profile(*profile, alpha, f, frames));
}

Verdict decide(const FormulaPtr& f, FrameSet frames,
               const SolverOptions& opts) {
    if (frames.contains(FrameClass::Eucl) ||
        (frames.contains(FrameClass::Sym) && frames.contains(FrameClass::Tr)))
        return decide_euclidean(f, frames);
    if (frames.contains(FrameClass::Tr))
        return decide_transitive(f, frames, opts);
    // F subset of {Rfl,Ser,Sym}: no complete in-scope procedure; bounded
    // fallback only.
    try {
        BruteResult res = brute_force(f, frames, std::min(opts.cap, 4));
        if (res.model) return Verdict::mk_sat(std::move(*res.model));
    } catch (const std::length_error& e) {
        return Verdict::mk_unknown(e.what());
    }
    return Verdict::mk_unknown(
        "cap reached; class lacks in-scope complete procedure");
}

}  // namespace gml::solver
