#include "core/model_io.hpp"

#include <json.hpp>

#include <sstream>

namespace gml {

using nlohmann::json;

PointedStructure model_from_json(const std::string& text) {
    json j = json::parse(text);
    PointedStructure out;
    if (!j.contains("worlds") || !j["worlds"].is_array() ||
        j["worlds"].empty())
        throw std::invalid_argument("model JSON needs a non-empty worlds array");
    for (const auto& w : j["worlds"])
        out.structure.add_world(w.get<std::string>());
    for (const auto& e : j.value("edges", json::array())) {
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("edge entries must be world pairs");
        int from = out.structure.index_of(e[0].get<std::string>());
        int to = out.structure.index_of(e[1].get<std::string>());
        if (from < 0 || to < 0)
            throw std::invalid_argument("edge references unknown world");
        out.structure.add_edge(from, to);
    }
    const json valuation = j.value("valuation", json::object());
    for (const auto& [letter, set] : valuation.items()) {
        for (const auto& w : set) {
            int idx = out.structure.index_of(w.get<std::string>());
            if (idx < 0)
                throw std::invalid_argument("valuation references unknown world");
            out.structure.set_letter(letter, idx);
        }
    }
    std::string designated = j.value("designated", j["worlds"][0].get<std::string>());
    out.world = out.structure.index_of(designated);
    if (out.world < 0)
        throw std::invalid_argument("designated world is unknown: " + designated);
    return out;
}

std::string model_to_json(const PointedStructure& m) {
    const KripkeStructure& s = m.structure;
    json j;
    j["worlds"] = json::array();
    for (int w = 0; w < s.world_count(); ++w) j["worlds"].push_back(s.id_of(w));
    j["edges"] = json::array();
    for (int w = 0; w < s.world_count(); ++w) {
        const Bits& row = s.successors(w);
        for (std::size_t v = row.find_first(); v != Bits::npos;
             v = row.find_next(v))
            j["edges"].push_back({s.id_of(w), s.id_of(static_cast<int>(v))});
    }
    j["valuation"] = json::object();
    for (const auto& [p, set] : s.valuation()) {
        if (!set.any()) continue;
        json worlds = json::array();
        for (std::size_t w = set.find_first(); w != Bits::npos;
             w = set.find_next(w))
            worlds.push_back(s.id_of(static_cast<int>(w)));
        j["valuation"][p] = worlds;
    }
    j["designated"] = s.id_of(m.world);
    return j.dump(2);
}

std::string model_to_dot(const PointedStructure& m) {
    const KripkeStructure& s = m.structure;
    std::ostringstream out;
    out << "digraph model {\n";
    for (int w = 0; w < s.world_count(); ++w) {
        std::string label = s.id_of(w);
        std::string sep = "\\n";
        for (const auto& [p, set] : s.valuation())
            if (set.test(w)) {
                label += sep + p;
                sep = " ";
            }
        out << "  \"" << s.id_of(w) << "\" [label=\"" << label << "\"";
        if (w == m.world) out << ", peripheries=2";
        out << "];\n";
    }
    for (int w = 0; w < s.world_count(); ++w) {
        const Bits& row = s.successors(w);
        for (std::size_t v = row.find_first(); v != Bits::npos;
             v = row.find_next(v))
            out << "  \"" << s.id_of(w) << "\" -> \""
                << s.id_of(static_cast<int>(v)) << "\";\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace gml
