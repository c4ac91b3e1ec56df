#include "core/brute.hpp"

#include <algorithm>
#include <array>
#include <vector>

namespace gml::solver {

namespace {

constexpr int kMaxBruteSize = 5;

// Valuation index bit j across a block of 64 consecutive valuations.
constexpr std::array<unsigned long long, 6> kBitPattern = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
};

unsigned long long pattern_word(unsigned long long base, int bit) {
    if (bit < 6) return kBitPattern[bit];
    return (base >> bit) & 1ull ? ~0ull : 0ull;
}

unsigned row_of(unsigned long long rel, int w, int k) {
    return static_cast<unsigned>(rel >> (w * k)) & ((1u << k) - 1u);
}

unsigned relation_props(unsigned long long rel, int k) {
    unsigned rows[kMaxBruteSize];
    for (int w = 0; w < k; ++w) rows[w] = row_of(rel, w, k);
    bool rfl = true, ser = true, sym = true, tr = true, eucl = true;
    for (int w = 0; w < k; ++w) {
        if (!(rows[w] >> w & 1u)) rfl = false;
        if (rows[w] == 0) ser = false;
        for (int v = 0; v < k; ++v) {
            if (!(rows[w] >> v & 1u)) continue;
            if (!(rows[v] >> w & 1u)) sym = false;
            if (rows[v] & ~rows[w]) tr = false;
            if (rows[w] & ~rows[v]) eucl = false;
        }
    }
    return (rfl ? 1u : 0) | (ser ? 2u : 0) | (sym ? 4u : 0) | (tr ? 8u : 0) |
           (eucl ? 16u : 0);
}

bool reaches_all(unsigned long long rel, int k) {
    unsigned reach = 1u;
    for (;;) {
        unsigned next = reach;
        for (int w = 0; w < k; ++w)
            if (reach >> w & 1u) next |= row_of(rel, w, k);
        if (next == reach) break;
        reach = next;
    }
    return reach == (1u << k) - 1u;
}

// props in the low 5 bits, reach flag in bit 5. Cached for k <= 4.
const std::vector<unsigned char>& relation_table(int k) {
    static std::vector<unsigned char> tables[5];
    std::vector<unsigned char>& t = tables[k];
    if (t.empty()) {
        t.resize(1ull << (k * k));
        for (unsigned long long rel = 0; rel < t.size(); ++rel)
            t[rel] = static_cast<unsigned char>(
                relation_props(rel, k) | (reaches_all(rel, k) ? 32u : 0));
    }
    return t;
}

// For each property mask, the 32-bit set of class subsets it belongs to.
const std::array<unsigned, 32>& subset_table() {
    static std::array<unsigned, 32> t = [] {
        std::array<unsigned, 32> out{};
        for (unsigned props = 0; props < 32; ++props)
            for (unsigned f = 0; f < 32; ++f)
                if ((f & props) == f) out[props] |= 1u << f;
        return out;
    }();
    return t;
}

struct Node {
    Op op;
    int a = -1, b = -1;
    int letter = -1;
    int threshold = 0;   // AtLeast threshold after clamping
    bool negate = false; // AtMost c == not AtLeast c+1
    bool const_true = false;
};

struct Compiled {
    std::vector<Node> nodes;  // post-order; root last
    int k;
    std::vector<PropLetter> letters;
};

int compile_node(const FormulaPtr& f, int k,
                 const std::vector<PropLetter>& letters,
                 std::vector<Node>& out) {
    Node n;
    n.op = f->op();
    switch (f->op()) {
        case Op::True:
        case Op::False:
            break;
        case Op::Letter: {
            auto it = std::lower_bound(letters.begin(), letters.end(),
                                       f->name());
            n.letter = static_cast<int>(it - letters.begin());
            break;
        }
        case Op::Not:
            n.a = compile_node(f->child(), k, letters, out);
            break;
        case Op::AtLeast:
        case Op::AtMost: {
            n.a = compile_node(f->child(), k, letters, out);
            Int c = f->count();
            if (f->op() == Op::AtMost) {
                n.negate = true;
                c += 1;  // <=c is ~( >=c+1 )
            }
            if (c > k) {
                n.op = n.negate ? Op::True : Op::False;
                n.a = -1;
            } else {
                n.op = Op::AtLeast;
                n.threshold = static_cast<int>(c);
            }
            break;
        }
        default:
            n.a = compile_node(f->lhs(), k, letters, out);
            n.b = compile_node(f->rhs(), k, letters, out);
            break;
    }
    out.push_back(n);
    return static_cast<int>(out.size() - 1);
}

Compiled compile(const FormulaPtr& f, int k) {
    Compiled c;
    c.k = k;
    auto ls = letters(f);
    c.letters.assign(ls.begin(), ls.end());
    compile_node(f, k, c.letters, c.nodes);
    return c;
}

// Lane-parallel count comparison: sum of <=5 one-bit inputs against a
// threshold, in three bit-sliced accumulator words.
unsigned long long geq_word(unsigned long long s0, unsigned long long s1,
                            unsigned long long s2, int c) {
    switch (c) {
        case 0:
            return ~0ull;
        case 1:
            return s0 | s1 | s2;
        case 2:
            return s1 | s2;
        case 3:
            return s2 | (s1 & s0);
        case 4:
            return s2;
        default:
            return s2 & (s0 | s1);
    }
}

// Evaluates the root at world 0 for 64 consecutive valuations.
unsigned long long eval_block(const Compiled& c, const unsigned* rows,
                              unsigned long long base,
                              std::vector<unsigned long long>& buf) {
    const int k = c.k;
    for (std::size_t i = 0; i < c.nodes.size(); ++i) {
        const Node& n = c.nodes[i];
        unsigned long long* out = &buf[i * kMaxBruteSize];
        switch (n.op) {
            case Op::True:
                for (int w = 0; w < k; ++w) out[w] = ~0ull;
                break;
            case Op::False:
                for (int w = 0; w < k; ++w) out[w] = 0;
                break;
            case Op::Letter:
                for (int w = 0; w < k; ++w)
                    out[w] = pattern_word(base, n.letter * k + w);
                break;
            case Op::Not: {
                const unsigned long long* a = &buf[n.a * kMaxBruteSize];
                for (int w = 0; w < k; ++w) out[w] = ~a[w];
                break;
            }
            case Op::And: {
                const unsigned long long* a = &buf[n.a * kMaxBruteSize];
                const unsigned long long* b = &buf[n.b * kMaxBruteSize];
                for (int w = 0; w < k; ++w) out[w] = a[w] & b[w];
                break;
            }
            case Op::Or: {
                const unsigned long long* a = &buf[n.a * kMaxBruteSize];
                const unsigned long long* b = &buf[n.b * kMaxBruteSize];
                for (int w = 0; w < k; ++w) out[w] = a[w] | b[w];
                break;
            }
            case Op::Implies: {
                const unsigned long long* a = &buf[n.a * kMaxBruteSize];
                const unsigned long long* b = &buf[n.b * kMaxBruteSize];
                for (int w = 0; w < k; ++w) out[w] = ~a[w] | b[w];
                break;
            }
            case Op::Iff: {
                const unsigned long long* a = &buf[n.a * kMaxBruteSize];
                const unsigned long long* b = &buf[n.b * kMaxBruteSize];
                for (int w = 0; w < k; ++w) out[w] = ~(a[w] ^ b[w]);
                break;
            }
            case Op::AtLeast: {
                const unsigned long long* a = &buf[n.a * kMaxBruteSize];
                for (int w = 0; w < k; ++w) {
                    unsigned long long s0 = 0, s1 = 0, s2 = 0;
                    unsigned row = rows[w];
                    while (row) {
                        int v = __builtin_ctz(row);
                        row &= row - 1;
                        unsigned long long x = a[v];
                        unsigned long long c0 = s0 & x;
                        s0 ^= x;
                        unsigned long long c1 = s1 & c0;
                        s1 ^= c0;
                        s2 |= c1;
                    }
                    unsigned long long r = geq_word(s0, s1, s2, n.threshold);
                    out[w] = n.negate ? ~r : r;
                }
                break;
            }
            default:
                break;
        }
    }
    return buf[(c.nodes.size() - 1) * kMaxBruteSize];
}

PointedStructure materialize(const Compiled& c, unsigned long long rel,
                             unsigned long long val) {
    PointedStructure out;
    const int k = c.k;
    for (int w = 0; w < k; ++w)
        out.structure.add_world("w" + std::to_string(w));
    for (int w = 0; w < k; ++w) {
        unsigned row = row_of(rel, w, k);
        for (int v = 0; v < k; ++v)
            if (row >> v & 1u) out.structure.add_edge(w, v);
    }
    for (std::size_t l = 0; l < c.letters.size(); ++l)
        for (int w = 0; w < k; ++w)
            if (val >> (l * k + w) & 1ull)
                out.structure.set_letter(c.letters[l], w);
    out.world = 0;
    return out;
}

// Shared sweep. Visits generated pointed structures in a fixed order and
// hands each satisfying (relation, valuation) pair to the sink, which can
// stop the sweep by returning false.
template <typename RelFilter, typename Sink>
void sweep(const FormulaPtr& f, int max_size, RelFilter rel_filter,
           Sink sink) {
    if (max_size < 1) throw std::invalid_argument("max_size must be >= 1");
    if (max_size > kMaxBruteSize)
        throw std::invalid_argument("brute force supports at most 5 worlds");
    for (int k = 1; k <= max_size; ++k) {
        Compiled c = compile(f, k);
        const int val_bits = static_cast<int>(c.letters.size()) * k;
        if (val_bits > 26)
            throw std::length_error(
                "valuation space too large for brute force");
        const unsigned long long val_count = 1ull << val_bits;
        const unsigned long long lane_mask =
            val_count >= 64 ? ~0ull : (1ull << val_count) - 1;
        const unsigned long long rel_count = 1ull << (k * k);
        const std::vector<unsigned char>* table =
            k <= 4 ? &relation_table(k) : nullptr;
        std::vector<unsigned long long> buf(c.nodes.size() * kMaxBruteSize);
        unsigned rows[kMaxBruteSize];
        for (unsigned long long rel = 0; rel < rel_count; ++rel) {
            unsigned props;
            if (table) {
                unsigned char info = (*table)[rel];
                if (!(info & 32u)) continue;
                props = info & 31u;
            } else {
                if (!reaches_all(rel, k)) continue;
                props = relation_props(rel, k);
            }
            if (!rel_filter(props)) continue;
            for (int w = 0; w < k; ++w) rows[w] = row_of(rel, w, k);
            for (unsigned long long base = 0; base < val_count; base += 64) {
                unsigned long long word =
                    eval_block(c, rows, base, buf) & lane_mask;
                if (!word) continue;
                unsigned long long val = base + __builtin_ctzll(word);
                if (!sink(c, rel, val, props)) return;
                if (!rel_filter(props)) break;  // this relation is spent
            }
        }
    }
}

}  // namespace

BruteResult brute_force(const FormulaPtr& f, FrameSet frames, int max_size) {
    BruteResult result{std::nullopt, max_size};
    const unsigned want = frames.mask();
    sweep(
        f, max_size, [&](unsigned props) { return (props & want) == want; },
        [&](const Compiled& c, unsigned long long rel, unsigned long long val,
            unsigned) {
            PointedStructure m = materialize(c, rel, val);
            if (!check(m, f) || !frame_properties(m.structure).contains_all(frames))
                throw std::logic_error("brute force produced a bad model");
            result.model = std::move(m);
            return false;
        });
    return result;
}

unsigned brute_class_mask(const FormulaPtr& f, int max_size) {
    unsigned decided = 0;
    const auto& subsets = subset_table();
    sweep(
        f, max_size,
        [&](unsigned props) { return (subsets[props] & ~decided) != 0; },
        [&](const Compiled&, unsigned long long, unsigned long long,
            unsigned props) {
            decided |= subsets[props];
            return decided != 0xFFFFFFFFu;
        });
    return decided;
}

}  // namespace gml::solver
