#pragma once

#include "core/kripke.hpp"

#include <string>

namespace gml {

/// Model JSON:
/// {"worlds": ["w0",...], "edges": [["w0","w1"],...],
///  "valuation": {"p": ["w0",...]}, "designated": "w0"}
PointedStructure model_from_json(const std::string& text);
std::string model_to_json(const PointedStructure& m);

/// DOT export: worlds as nodes labelled with their true letters; the
/// designated world is drawn with a double border.
std::string model_to_dot(const PointedStructure& m);

}  // namespace gml
