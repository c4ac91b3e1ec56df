#pragma once

#include "core/formula.hpp"
#include "core/kripke.hpp"

#include <optional>

namespace gml::solver {

/// Outcome of exhaustive search: a verified model, or none up to max_size.
struct BruteResult {
    std::optional<PointedStructure> model;
    int max_size;
};

/// Exhaustive satisfiability over all pointed structures with at most
/// max_size worlds over letters(f), restricted to frames in the given
/// class. Deterministic order; only generated structures are enumerated
/// (sound by restriction to generated substructures). max_size <= 5.
BruteResult brute_force(const FormulaPtr& f, FrameSet frames, int max_size);

/// Bit f (as a 5-bit frame-class subset mask) is set iff the formula has a
/// model of size <= max_size whose frame lies in that class intersection.
/// One sweep answers all 32 classes.
unsigned brute_class_mask(const FormulaPtr& f, int max_size);

}  // namespace gml::solver
