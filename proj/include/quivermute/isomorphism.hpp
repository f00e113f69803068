#pragma once

#include "quivermute/quiver.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qm {

struct IsoOptions {
    // Permit arrow rescalings a -> x_a a (x_a nonzero rational) when matching relation spans.
    // Strict mode demands RREF equality after a pure relabeling.
    bool allow_rescaling = true;
};

struct QuiverIso {
    std::vector<int> vertex_map;       // index in a -> index in b
    std::vector<int> arrow_map;        // index in a -> index in b
    std::vector<Rational> arrow_scale; // per arrow of a; all 1 in strict mode

    std::map<std::string, std::string> vertex_labels(const BoundQuiver& a, const BoundQuiver& b) const;
    std::map<std::string, std::string> arrow_labels(const BoundQuiver& a, const BoundQuiver& b) const;
};

// First isomorphism in canonical backtracking order, or nullopt.
std::optional<QuiverIso> quiver_isomorphism(const BoundQuiver& a, const BoundQuiver& b, IsoOptions opts = {});

// Relations of `a` carried along `iso` (scales applied), canonical in b's indexing.
std::vector<LinComb> transport_relations(const BoundQuiver& a, const BoundQuiver& b, const QuiverIso& iso);

// Stable color refinement classes; equal histograms are necessary for isomorphism.
std::vector<std::size_t> refined_colors(const BoundQuiver& q);
std::string invariant_key(const BoundQuiver& q);

}  // namespace qm
