#pragma once

#include "quivermute/quiver.hpp"

namespace qm {

// <p, q> with basis paths self-dual. BLOCK_MISMATCH unless every path shares one block.
Rational pairing(const LinComb& p, const LinComb& q);

// Same quiver, relations replaced blockwise by the orthogonal complement inside length-2 paths.
// NOT_QUADRATIC if some relation has degree != 2. The name records the link: "X" <-> "X!".
BoundQuiver quadratic_dual(const BoundQuiver& q);

std::string dual_name(const std::string& name);

}  // namespace qm
