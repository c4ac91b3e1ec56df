#pragma once

#include "core/formula.hpp"

#include <boost/dynamic_bitset.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gml {

using Bits = boost::dynamic_bitset<unsigned long long>;

enum class FrameClass { Rfl, Ser, Sym, Tr, Eucl };

/// Subset of {Rfl, Ser, Sym, Tr, Eucl} as a small value type. The empty set
/// denotes the class of all frames.
class FrameSet {
public:
    FrameSet() = default;
    FrameSet(std::initializer_list<FrameClass> cs) {
        for (auto c : cs) insert(c);
    }

    static FrameSet all() { return FrameSet{FrameClass::Rfl, FrameClass::Ser, FrameClass::Sym, FrameClass::Tr, FrameClass::Eucl}; }
    static FrameSet from_mask(unsigned m) {
        FrameSet s;
        s.mask_ = m & 31u;
        return s;
    }

    void insert(FrameClass c) { mask_ |= bit(c); }
    void erase(FrameClass c) { mask_ &= ~bit(c); }
    bool contains(FrameClass c) const { return mask_ & bit(c); }
    bool contains_all(FrameSet o) const { return (mask_ & o.mask_) == o.mask_; }
    bool empty() const { return mask_ == 0; }
    unsigned mask() const { return mask_; }

    bool operator==(const FrameSet&) const = default;

    /// Parses a comma-separated subset of rfl,ser,sym,tr,eucl; "" is the
    /// empty set.
    static FrameSet parse(const std::string& text);
    std::string to_string() const;

private:
    static unsigned bit(FrameClass c) { return 1u << static_cast<int>(c); }
    unsigned mask_ = 0;
};

/// Finite Kripke structure: ordered worlds, accessibility edges, valuation.
/// World order is the stable total order used for all tie-breaking.
class KripkeStructure {
public:
    int add_world(const std::string& id);
    int world_count() const { return static_cast<int>(ids_.size()); }
    const std::string& id_of(int w) const { return ids_[w]; }
    /// -1 when absent.
    int index_of(const std::string& id) const;

    void add_edge(int from, int to);
    bool has_edge(int from, int to) const { return adj_[from].test(to); }
    const Bits& successors(int w) const { return adj_[w]; }

    void set_letter(const PropLetter& p, int w, bool value = true);
    /// Letters absent from the valuation are false everywhere.
    bool letter_true(const PropLetter& p, int w) const;
    Bits letter_set(const PropLetter& p) const;
    const std::map<PropLetter, Bits>& valuation() const { return val_; }

    Bits all_worlds() const {
        Bits b(ids_.size());
        b.set();
        return b;
    }

private:
    std::vector<std::string> ids_;
    std::map<std::string, int> index_;
    std::vector<Bits> adj_;
    std::map<PropLetter, Bits> val_;
};

struct PointedStructure {
    KripkeStructure structure;
    int world = 0;

    const std::string& world_id() const { return structure.id_of(world); }
};

/// Frame metrics of a transitive structure: longest strict-successor chain,
/// maximum number of disjoint direct-successor cliques, maximum clique size.
struct FrameMetrics {
    unsigned depth = 0;
    unsigned breadth = 0;
    unsigned width = 1;
};

/// Graded-modal satisfaction at a world. Letters outside the valuation are
/// false everywhere.
bool check(const KripkeStructure& a, int world, const FormulaPtr& f);
bool check(const KripkeStructure& a, const std::string& world,
           const FormulaPtr& f);
bool check(const PointedStructure& a, const FormulaPtr& f);

/// Truth set of f: one bit per world.
Bits truth_set(const KripkeStructure& a, const FormulaPtr& f);

FrameSet frame_properties(const KripkeStructure& a);

/// Substructure on R*(X). Preserves world order and all five frame
/// properties; idempotent.
KripkeStructure generated(const KripkeStructure& a, const std::vector<int>& seeds);
PointedStructure generated_from(const PointedStructure& a);

/// Clique representative per world: the least member of Q(w). Requires a
/// transitive structure.
std::vector<int> clique_representatives(const KripkeStructure& a);
Bits clique_of(const KripkeStructure& a, int w);

bool is_transitive(const KripkeStructure& a);
bool is_reflexive(const KripkeStructure& a);

KripkeStructure transitive_closure(const KripkeStructure& a);

/// Rejects non-transitive input.
FrameMetrics metrics(const KripkeStructure& a);

/// Size bound for a generated substructure in terms of breadth b, width c,
/// depth d: c when b = 0, c*(d+1) when b = 1, c*(b^{d+1}-1)/(b-1) otherwise.
Int generated_size_bound(unsigned breadth, unsigned width, unsigned depth);

/// Copy with the valuation restricted to the given letters.
KripkeStructure restrict_letters(const KripkeStructure& a,
                                 const std::set<PropLetter>& keep);

}  // namespace gml
