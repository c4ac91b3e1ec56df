#include "core/kripke.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace gml {

FrameSet FrameSet::parse(const std::string& text) {
    FrameSet out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string item = text.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (item == "rfl")
            out.insert(FrameClass::Rfl);
        else if (item == "ser")
            out.insert(FrameClass::Ser);
        else if (item == "sym")
            out.insert(FrameClass::Sym);
        else if (item == "tr")
            out.insert(FrameClass::Tr);
        else if (item == "eucl")
            out.insert(FrameClass::Eucl);
        else if (!item.empty())
            throw std::invalid_argument("unknown frame class: " + item);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::string FrameSet::to_string() const {
    static const char* names[] = {"rfl", "ser", "sym", "tr", "eucl"};
    std::string out;
    for (int i = 0; i < 5; ++i) {
        if (!(mask_ & (1u << i))) continue;
        if (!out.empty()) out.push_back(',');
        out += names[i];
    }
    return out;
}

int KripkeStructure::add_world(const std::string& id) {
    if (index_.count(id))
        throw std::invalid_argument("duplicate world id: " + id);
    int w = static_cast<int>(ids_.size());
    ids_.push_back(id);
    index_[id] = w;
    for (auto& row : adj_) row.resize(ids_.size());
    adj_.emplace_back(ids_.size());
    for (auto& [p, set] : val_) set.resize(ids_.size());
    return w;
}

int KripkeStructure::index_of(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? -1 : it->second;
}

void KripkeStructure::add_edge(int from, int to) {
    adj_[from].set(to);
}

void KripkeStructure::set_letter(const PropLetter& p, int w, bool value) {
    auto it = val_.find(p);
    if (it == val_.end())
        it = val_.emplace(p, Bits(ids_.size())).first;
    it->second.set(w, value);
}

bool KripkeStructure::letter_true(const PropLetter& p, int w) const {
    auto it = val_.find(p);
    return it != val_.end() && it->second.test(w);
}

Bits KripkeStructure::letter_set(const PropLetter& p) const {
    auto it = val_.find(p);
    if (it != val_.end()) return it->second;
    return Bits(ids_.size());
}

// ---------------------------------------------------------------------------
// Model checking
// ---------------------------------------------------------------------------

namespace {

Bits label(const KripkeStructure& a, const FormulaPtr& f,
           std::unordered_map<const Formula*, Bits>& memo) {
    auto it = memo.find(f.get());
    if (it != memo.end()) return it->second;
    const std::size_t n = a.world_count();
    Bits out(n);
    switch (f->op()) {
        case Op::True:
            out.set();
            break;
        case Op::False:
            break;
        case Op::Letter:
            out = a.letter_set(f->name());
            break;
        case Op::Not:
            out = ~label(a, f->child(), memo);
            break;
        case Op::And:
            out = label(a, f->lhs(), memo) & label(a, f->rhs(), memo);
            break;
        case Op::Or:
            out = label(a, f->lhs(), memo) | label(a, f->rhs(), memo);
            break;
        case Op::Implies:
            out = ~label(a, f->lhs(), memo) | label(a, f->rhs(), memo);
            break;
        case Op::Iff:
            out = ~(label(a, f->lhs(), memo) ^ label(a, f->rhs(), memo));
            break;
        case Op::AtLeast:
        case Op::AtMost: {
            Bits body = label(a, f->child(), memo);
            const Int& c = f->count();
            for (std::size_t w = 0; w < n; ++w) {
                Int count = (a.successors(static_cast<int>(w)) & body).count();
                bool truth = f->op() == Op::AtLeast ? count >= c : count <= c;
                out.set(w, truth);
            }
            break;
        }
    }
    memo.emplace(f.get(), out);
    return out;
}

}  // namespace

Bits truth_set(const KripkeStructure& a, const FormulaPtr& f) {
    std::unordered_map<const Formula*, Bits> memo;
    return label(a, f, memo);
}

bool check(const KripkeStructure& a, int world, const FormulaPtr& f) {
    if (world < 0 || world >= a.world_count())
        throw std::invalid_argument("unknown world index");
    return truth_set(a, f).test(world);
}

bool check(const KripkeStructure& a, const std::string& world,
           const FormulaPtr& f) {
    int w = a.index_of(world);
    if (w < 0) throw std::invalid_argument("unknown world identifier: " + world);
    return check(a, w, f);
}

bool check(const PointedStructure& a, const FormulaPtr& f) {
    return check(a.structure, a.world, f);
}

// ---------------------------------------------------------------------------
// Frame predicates: exhaustive quantification over worlds, with bitset rows
// standing in for the inner quantifier.
// ---------------------------------------------------------------------------

bool is_transitive(const KripkeStructure& a) {
    const int n = a.world_count();
    for (int w = 0; w < n; ++w) {
        const Bits& row = a.successors(w);
        for (std::size_t v = row.find_first(); v != Bits::npos;
             v = row.find_next(v))
            if (!a.successors(static_cast<int>(v)).is_subset_of(row))
                return false;
    }
    return true;
}

bool is_reflexive(const KripkeStructure& a) {
    for (int w = 0; w < a.world_count(); ++w)
        if (!a.has_edge(w, w)) return false;
    return true;
}

KripkeStructure transitive_closure(const KripkeStructure& a) {
    const int n = a.world_count();
    std::vector<Bits> rows;
    rows.reserve(n);
    for (int w = 0; w < n; ++w) rows.push_back(a.successors(w));
    for (int k = 0; k < n; ++k)
        for (int w = 0; w < n; ++w)
            if (rows[w].test(k)) rows[w] |= rows[k];
    KripkeStructure out;
    for (int w = 0; w < n; ++w) out.add_world(a.id_of(w));
    for (int w = 0; w < n; ++w)
        for (std::size_t v = rows[w].find_first(); v != Bits::npos;
             v = rows[w].find_next(v))
            out.add_edge(w, static_cast<int>(v));
    for (const auto& [p, set] : a.valuation())
        for (std::size_t w = set.find_first(); w != Bits::npos;
             w = set.find_next(w))
            out.set_letter(p, static_cast<int>(w));
    return out;
}

FrameSet frame_properties(const KripkeStructure& a) {
    const int n = a.world_count();
    FrameSet out;
    if (is_reflexive(a)) out.insert(FrameClass::Rfl);
    bool ser = true, sym = true, eucl = true;
    for (int w = 0; w < n && ser; ++w) ser = a.successors(w).any();
    if (ser) out.insert(FrameClass::Ser);
    for (int w = 0; w < n && sym; ++w) {
        const Bits& row = a.successors(w);
        for (std::size_t v = row.find_first(); v != Bits::npos;
             v = row.find_next(v))
            if (!a.has_edge(static_cast<int>(v), w)) {
                sym = false;
                break;
            }
    }
    if (sym) out.insert(FrameClass::Sym);
    if (is_transitive(a)) out.insert(FrameClass::Tr);
    for (int w = 0; w < n && eucl; ++w) {
        const Bits& row = a.successors(w);
        for (std::size_t v = row.find_first(); v != Bits::npos;
             v = row.find_next(v))
            if (!row.is_subset_of(a.successors(static_cast<int>(v)))) {
                eucl = false;
                break;
            }
    }
    if (eucl) out.insert(FrameClass::Eucl);
    return out;
}

// ---------------------------------------------------------------------------
// Generated substructures
// ---------------------------------------------------------------------------

KripkeStructure generated(const KripkeStructure& a,
                          const std::vector<int>& seeds) {
    const int n = a.world_count();
    if (seeds.empty()) throw std::invalid_argument("empty seed set");
    Bits reach(n);
    for (int s : seeds) {
        if (s < 0 || s >= n) throw std::invalid_argument("unknown world index");
        reach.set(s);
    }
    for (;;) {
        Bits next = reach;
        for (std::size_t w = reach.find_first(); w != Bits::npos;
             w = reach.find_next(w))
            next |= a.successors(static_cast<int>(w));
        if (next == reach) break;
        reach = next;
    }
    KripkeStructure out;
    std::vector<int> remap(n, -1);
    for (std::size_t w = reach.find_first(); w != Bits::npos;
         w = reach.find_next(w))
        remap[w] = out.add_world(a.id_of(static_cast<int>(w)));
    for (std::size_t w = reach.find_first(); w != Bits::npos;
         w = reach.find_next(w)) {
        Bits row = a.successors(static_cast<int>(w)) & reach;
        for (std::size_t v = row.find_first(); v != Bits::npos;
             v = row.find_next(v))
            out.add_edge(remap[w], remap[v]);
    }
    for (const auto& [p, set] : a.valuation()) {
        Bits kept = set & reach;
        for (std::size_t w = kept.find_first(); w != Bits::npos;
             w = kept.find_next(w))
            out.set_letter(p, remap[w]);
    }
    return out;
}

PointedStructure generated_from(const PointedStructure& a) {
    KripkeStructure s = generated(a.structure, {a.world});
    int w = s.index_of(a.structure.id_of(a.world));
    return PointedStructure{std::move(s), w};
}

// ---------------------------------------------------------------------------
// Cliques and metrics (transitive structures)
// ---------------------------------------------------------------------------

Bits clique_of(const KripkeStructure& a, int w) {
    const int n = a.world_count();
    Bits q(n);
    q.set(w);
    const Bits& row = a.successors(w);
    for (std::size_t v = row.find_first(); v != Bits::npos;
         v = row.find_next(v))
        if (a.has_edge(static_cast<int>(v), w)) q.set(v);
    return q;
}

std::vector<int> clique_representatives(const KripkeStructure& a) {
    const int n = a.world_count();
    std::vector<int> rep(n, -1);
    for (int w = 0; w < n; ++w) {
        if (rep[w] >= 0) continue;
        Bits q = clique_of(a, w);
        for (std::size_t v = q.find_first(); v != Bits::npos;
             v = q.find_next(v))
            rep[v] = w;
    }
    return rep;
}

namespace {

bool strict_edge(const KripkeStructure& a, int w1, int w2) {
    return a.has_edge(w1, w2) && !a.has_edge(w2, w1);
}

// Direct successor: strict, with no strictly intermediate clique.
bool direct_edge(const KripkeStructure& a, const std::vector<int>& rep, int w1,
                 int w2) {
    if (!strict_edge(a, w1, w2)) return false;
    const Bits& row = a.successors(w1);
    for (std::size_t u = row.find_first(); u != Bits::npos;
         u = row.find_next(u)) {
        if (!a.has_edge(static_cast<int>(u), w2)) continue;
        if (rep[u] != rep[w1] && rep[u] != rep[w2]) return false;
    }
    return true;
}

unsigned depth_from(const KripkeStructure& a, int w,
                    std::vector<int>& memo) {
    if (memo[w] >= 0) return static_cast<unsigned>(memo[w]);
    unsigned best = 0;
    const Bits& row = a.successors(w);
    for (std::size_t v = row.find_first(); v != Bits::npos;
         v = row.find_next(v))
        if (strict_edge(a, w, static_cast<int>(v)))
            best = std::max(best, 1 + depth_from(a, static_cast<int>(v), memo));
    memo[w] = static_cast<int>(best);
    return best;
}

}  // namespace

FrameMetrics metrics(const KripkeStructure& a) {
    if (!is_transitive(a))
        throw std::invalid_argument("metrics requires a transitive structure");
    const int n = a.world_count();
    FrameMetrics m;
    std::vector<int> rep = clique_representatives(a);

    std::vector<int> memo(n, -1);
    for (int w = 0; w < n; ++w)
        m.depth = std::max(m.depth, depth_from(a, w, memo));

    for (int w = 0; w < n; ++w) {
        Bits cliques(n);
        const Bits& row = a.successors(w);
        for (std::size_t v = row.find_first(); v != Bits::npos;
             v = row.find_next(v))
            if (direct_edge(a, rep, w, static_cast<int>(v)))
                cliques.set(rep[v]);
        m.breadth = std::max(m.breadth, static_cast<unsigned>(cliques.count()));
    }

    for (int w = 0; w < n; ++w)
        m.width =
            std::max(m.width, static_cast<unsigned>(clique_of(a, w).count()));
    return m;
}

Int generated_size_bound(unsigned breadth, unsigned width, unsigned depth) {
    Int b = breadth, c = width, d = depth;
    if (breadth == 0) return c;
    if (breadth == 1) return c * (d + 1);
    return c * (boost::multiprecision::pow(b, depth + 1) - 1) / (b - 1);
}

KripkeStructure restrict_letters(const KripkeStructure& a,
                                 const std::set<PropLetter>& keep) {
    KripkeStructure out;
    for (int w = 0; w < a.world_count(); ++w) out.add_world(a.id_of(w));
    for (int w = 0; w < a.world_count(); ++w) {
        const Bits& row = a.successors(w);
        for (std::size_t v = row.find_first(); v != Bits::npos;
             v = row.find_next(v))
            out.add_edge(w, static_cast<int>(v));
    }
    for (const auto& [p, set] : a.valuation()) {
        if (!keep.count(p)) continue;
        for (std::size_t w = set.find_first(); w != Bits::npos;
             w = set.find_next(w))
            out.set_letter(p, static_cast<int>(w));
    }
    return out;
}

}  // namespace gml
