#include "core/minimize.hpp"

#include "core/solver.hpp"

#include <algorithm>

namespace gml::minimize {

namespace {

void require_pre(const PointedStructure& a, const nf::NormalForm& nf,
                 const char* stage) {
    if (!is_transitive(a.structure))
        throw std::invalid_argument(std::string(stage) +
                                    ": input must be transitive");
    if (!check(a.structure, a.world, nf::to_formula(nf)))
        throw std::invalid_argument(
            std::string(stage) + ": input must satisfy the normal form");
}

KripkeStructure with_edges(const KripkeStructure& a,
                           const std::vector<Bits>& rows) {
    KripkeStructure out;
    for (int w = 0; w < a.world_count(); ++w) out.add_world(a.id_of(w));
    for (int w = 0; w < a.world_count(); ++w)
        for (std::size_t v = rows[w].find_first(); v != Bits::npos;
             v = rows[w].find_next(v))
            out.add_edge(w, static_cast<int>(v));
    for (const auto& [p, set] : a.valuation())
        for (std::size_t w = set.find_first(); w != Bits::npos;
             w = set.find_next(w))
            out.set_letter(p, static_cast<int>(w));
    return out;
}

void close_transitively(std::vector<Bits>& rows) {
    const std::size_t n = rows.size();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t w = 0; w < n; ++w)
            if (rows[w].test(k)) rows[w] |= rows[k];
}

std::vector<Bits> body_truths(const KripkeStructure& a,
                              const std::vector<nf::LowerEntry>& entries) {
    std::vector<Bits> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(truth_set(a, e.body));
    return out;
}

std::vector<Bits> body_truths(const KripkeStructure& a,
                              const std::vector<nf::UpperEntry>& entries) {
    std::vector<Bits> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(truth_set(a, e.body));
    return out;
}

// Lowest min(limit, |set|) members, shared by all clique members through
// the representative.
std::vector<int> select_lowest(const Bits& set, const Int& limit) {
    std::vector<int> out;
    Int n = 0;
    for (std::size_t w = set.find_first(); w != Bits::npos;
         w = set.find_next(w)) {
        if (n >= limit) break;
        out.push_back(static_cast<int>(w));
        n += 1;
    }
    return out;
}

}  // namespace

std::vector<std::vector<Int>> d_values(const KripkeStructure& a,
                                       const nf::NormalForm& nf) {
    std::vector<Bits> chi = body_truths(a, nf.uppers);
    std::vector<std::vector<Int>> out(a.world_count());
    for (int w = 0; w < a.world_count(); ++w) {
        Bits refl_row = a.successors(w);
        refl_row.set(w);
        out[w].reserve(nf.uppers.size());
        for (std::size_t j = 0; j < nf.uppers.size(); ++j) {
            Int reach = (refl_row & chi[j]).count();
            Int cap = nf.uppers[j].count + 1;
            out[w].push_back(reach < cap ? reach : cap);
        }
    }
    return out;
}

IndexSets index_sets(const KripkeStructure& a, const nf::NormalForm& nf) {
    if (nf.lowers.size() > 32)
        throw std::invalid_argument("too many lower entries for index sets");
    std::vector<Bits> pi = body_truths(a, nf.lowers);
    IndexSets out;
    out.I.assign(a.world_count(), 0);
    out.Is.assign(a.world_count(), 0);
    for (int w = 0; w < a.world_count(); ++w) {
        Bits q = clique_of(a, w);
        for (std::size_t i = 0; i < nf.lowers.size(); ++i) {
            Bits wit = a.successors(w) & pi[i];
            if (Int(wit.count()) >= nf.lowers[i].count)
                out.I[w] |= 1u << i;
            if (Int((wit & ~q).count()) >= nf.lowers[i].count)
                out.Is[w] |= 1u << i;
        }
    }
    return out;
}

PointedStructure stage1_finite_depth(const PointedStructure& a,
                                     const nf::NormalForm& nf) {
    require_pre(a, nf, "stage1");
    const KripkeStructure& s = a.structure;
    auto d = d_values(s, nf);
    // Raw capped counts, without the reflexive closure. Merging on the
    // closed counts alone can hand a world at the D_j boundary a self loop
    // that its own chi_j-hood turns into one successor too many; requiring
    // the raw counts to agree as well rules that out while keeping the
    // depth finite.
    std::vector<Bits> chi = body_truths(s, nf.uppers);
    std::vector<std::vector<Int>> raw(s.world_count());
    for (int w = 0; w < s.world_count(); ++w) {
        raw[w].reserve(nf.uppers.size());
        for (std::size_t j = 0; j < nf.uppers.size(); ++j) {
            Int count = (s.successors(w) & chi[j]).count();
            Int cap = nf.uppers[j].count + 1;
            raw[w].push_back(count < cap ? count : cap);
        }
    }
    std::vector<Bits> rows;
    rows.reserve(s.world_count());
    for (int w = 0; w < s.world_count(); ++w) rows.push_back(s.successors(w));
    for (int w1 = 0; w1 < s.world_count(); ++w1) {
        const Bits& row = s.successors(w1);
        for (std::size_t w2 = row.find_first(); w2 != Bits::npos;
             w2 = row.find_next(w2))
            if (d[w1] == d[w2] && raw[w1] == raw[w2])
                rows[w2].set(w1);  // inverse of R_d
    }
    close_transitively(rows);
    return {with_edges(s, rows), a.world};
}

PointedStructure stage2_bound_depth(const PointedStructure& a,
                                    const nf::NormalForm& nf) {
    require_pre(a, nf, "stage2");
    PointedStructure cur = a;
    const unsigned target = 2 * static_cast<unsigned>(nf.lowers.size());
    unsigned initial_depth = metrics(cur.structure).depth;
    for (unsigned pass = 0;; ++pass) {
        FrameMetrics m = metrics(cur.structure);
        if (m.depth <= target) return cur;
        if (pass > initial_depth)
            throw std::logic_error("stage2 failed to reduce depth");
        const KripkeStructure& s = cur.structure;
        IndexSets idx = index_sets(s, nf);
        std::vector<int> rep = clique_representatives(s);
        std::vector<Bits> rows;
        rows.reserve(s.world_count());
        for (int w = 0; w < s.world_count(); ++w)
            rows.push_back(s.successors(w));
        for (int w1 = 0; w1 < s.world_count(); ++w1) {
            const Bits& row = s.successors(w1);
            for (std::size_t w2 = row.find_first(); w2 != Bits::npos;
                 w2 = row.find_next(w2)) {
                if (idx.Is[w2] != idx.I[w1]) continue;
                // direct successor test
                if (!s.has_edge(w1, static_cast<int>(w2)) ||
                    s.has_edge(static_cast<int>(w2), w1))
                    continue;
                bool direct = true;
                for (std::size_t u = row.find_first();
                     direct && u != Bits::npos; u = row.find_next(u))
                    if (s.has_edge(static_cast<int>(u), static_cast<int>(w2)) &&
                        rep[u] != rep[w1] && rep[u] != rep[w2])
                        direct = false;
                if (direct) rows[w1].reset(w2);
            }
        }
        cur = {with_edges(s, rows), cur.world};
    }
}

PointedStructure stage3_bound_breadth(const PointedStructure& a,
                                      const nf::NormalForm& nf) {
    require_pre(a, nf, "stage3");
    const KripkeStructure& s = a.structure;
    const int n = s.world_count();
    std::vector<Bits> pi = body_truths(s, nf.lowers);
    std::vector<int> rep = clique_representatives(s);

    // Selected strict pi_i-witnesses, one selection per clique.
    std::vector<std::vector<std::vector<int>>> selected(n);
    for (int w = 0; w < n; ++w) {
        if (rep[w] != w) continue;
        Bits q = clique_of(s, w);
        selected[w].resize(nf.lowers.size());
        for (std::size_t i = 0; i < nf.lowers.size(); ++i) {
            Bits strict(n);
            const Bits& row = s.successors(w);
            for (std::size_t v = row.find_first(); v != Bits::npos;
                 v = row.find_next(v))
                if (!q.test(v) && pi[i].test(v)) strict.set(v);
            selected[w][i] = select_lowest(strict, nf.lowers[i].count);
        }
    }

    std::vector<Bits> rows(n, Bits(n));
    for (int w = 0; w < n; ++w) {
        const Bits& row = s.successors(w);
        Bits q = clique_of(s, w);
        for (std::size_t v = row.find_first(); v != Bits::npos;
             v = row.find_next(v))
            if (q.test(v)) rows[w].set(v);  // R_q
        for (const auto& wits : selected[rep[w]])
            for (int v : wits) rows[w].set(v);  // R_i'
    }
    close_transitively(rows);
    return {with_edges(s, rows), a.world};
}

PointedStructure stage4_bound_width(const PointedStructure& a,
                                    const nf::NormalForm& nf) {
    require_pre(a, nf, "stage4");
    const KripkeStructure& s = a.structure;
    const int n = s.world_count();
    std::vector<Bits> pi = body_truths(s, nf.lowers);
    std::vector<int> rep = clique_representatives(s);
    Bits phi_set = truth_set(s, nf::to_formula(nf));

    Bits keep(n);
    std::vector<int> clique_pick(n, -1);  // Q_0'(w) per representative
    for (int w = 0; w < n; ++w) {
        if (rep[w] != w) continue;
        Bits q = clique_of(s, w);
        Bits sat = q & phi_set;
        int pick = static_cast<int>(sat.any() ? sat.find_first()
                                              : q.find_first());
        clique_pick[w] = pick;
        keep.set(pick);
        for (std::size_t i = 0; i < nf.lowers.size(); ++i)
            for (int v : select_lowest(q & pi[i], nf.lowers[i].count))
                keep.set(v);
    }

    KripkeStructure out;
    std::vector<int> remap(n, -1);
    for (std::size_t w = keep.find_first(); w != Bits::npos;
         w = keep.find_next(w))
        remap[w] = out.add_world(s.id_of(static_cast<int>(w)));
    for (std::size_t w = keep.find_first(); w != Bits::npos;
         w = keep.find_next(w)) {
        Bits row = s.successors(static_cast<int>(w)) & keep;
        for (std::size_t v = row.find_first(); v != Bits::npos;
             v = row.find_next(v))
            out.add_edge(remap[w], remap[v]);
    }
    for (const auto& [p, set] : s.valuation()) {
        Bits kept = set & keep;
        for (std::size_t w = kept.find_first(); w != Bits::npos;
             w = kept.find_next(w))
            out.set_letter(p, remap[w]);
    }
    int designated = keep.test(a.world) ? remap[a.world]
                                        : remap[clique_pick[rep[a.world]]];
    return {std::move(out), designated};
}

PointedStructure minimize(const PointedStructure& a, const nf::NormalForm& nf) {
    require_pre(a, nf, "minimize");
    FormulaPtr phi = nf::to_formula(nf);
    PointedStructure cur = stage1_finite_depth(a, nf);
    cur = stage2_bound_depth(cur, nf);
    cur = stage3_bound_breadth(cur, nf);
    cur = stage4_bound_width(cur, nf);
    cur = generated_from(cur);
    if (!check(cur.structure, cur.world, phi))
        throw std::logic_error("minimize lost the formula");
    if (Int(cur.structure.world_count()) > solver::model_size_bound(nf))
        throw std::logic_error("minimize exceeded the size bound");
    return cur;
}

}  // namespace gml::minimize
