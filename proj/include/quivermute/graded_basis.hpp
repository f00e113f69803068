#pragma once

#include "quivermute/quiver.hpp"

#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace qm {

// QUIVERMUTE_DEGREE_CAP or 32.
int default_degree_cap();

// Homogeneous element of the quotient algebra: coordinates over GradedBasis::basis(degree).
struct Element {
    int degree = 0;
    SparseVec coeffs;
    bool is_zero() const { return coeffs.empty(); }
};

// Degreewise basis of kQ/(rho) by standard monomials (non-pivot paths under the canonical order),
// with right multiplication tables by arrows. Everything else is derived from those tables.
class GradedBasis {
public:
    // Degrees 0..t_max; stops early once a degree vanishes.
    static GradedBasis compute(const BoundQuiver& q, int t_max);
    // Runs until some degree vanishes; DEGREE_OVERFLOW past the degree cap.
    static GradedBasis full(const BoundQuiver& q, std::optional<int> cap = std::nullopt);

    const BoundQuiver& quiver() const { return *quiver_; }
    std::shared_ptr<const BoundQuiver> quiver_ptr() const { return quiver_; }

    // Highest degree computed; basis(t) is defined for 0 <= t <= computed_degree().
    int computed_degree() const { return static_cast<int>(basis_.size()) - 1; }
    // True when a vanishing degree was reached, so every degree beyond is zero.
    bool complete() const { return complete_; }
    // Highest nonzero degree (meaningful when complete()).
    int top_degree() const;

    const std::vector<Path>& basis(int t) const;
    // Indices into basis(t) for the block e_j Lambda_t e_i (paths i -> j).
    const std::vector<int>& block(int i, int j, int t) const;
    int dim(int i, int j, int t) const { return static_cast<int>(block(i, j, t).size()); }
    std::size_t dim_degree(int t) const { return t <= computed_degree() ? basis(t).size() : 0; }
    std::size_t total_dim() const;
    std::optional<int> index_of(const Path& p) const;

    Element unit(int v) const;
    Element basis_element(int t, int idx) const;
    Element mul_arrow(const Element& x, int arrow) const;
    Element mul_path(const Element& x, const Path& p) const;
    Element mul(const Element& x, const Element& y) const;
    Element normal_form(const Path& p) const;
    Element normal_form(const LinComb& l) const;
    LinComb to_lincomb(const Element& e) const;

private:
    void ensure_degree(int t) const;
    void build(int t_max, bool stop_at_zero, bool overflow_if_unfinished);

    std::shared_ptr<const BoundQuiver> quiver_;
    std::vector<std::vector<Path>> basis_;
    std::vector<std::map<Path, int>> index_;
    // blocks_[t][i * V + j]
    std::vector<std::vector<std::vector<int>>> blocks_;
    // rmul_[t][b] maps arrow -> coordinates in degree t, for b in basis(t - 1).
    std::vector<std::vector<std::map<int, SparseVec>>> rmul_;
    bool complete_ = false;
};

// Nonzero paths (bound paths) up to `max_len`, canonical order.
std::vector<Path> bound_paths(const GradedBasis& gb, int max_len);

// Bound paths that become zero after any arrow on either side. Stationary paths included only
// when the vertex is isolated.
std::vector<Path> maximal_bound_paths(const GradedBasis& gb, bool include_stationary = true);

struct ProperGrading {
    bool proper = false;
    int n = 0;                      // common length when proper
    std::vector<Path> witness;      // two maximal bound paths of different length otherwise
};

// CYCLIC_QUIVER when the quiver has an oriented cycle.
ProperGrading is_properly_graded(const BoundQuiver& q);

struct MaxPath {
    Path path;
    int source = -1;
    int target = -1;
};

// Canonical basis of Lambda_n (standard monomials), tagged with endpoints.
std::vector<MaxPath> max_bound_paths(const BoundQuiver& q);

}  // namespace qm
