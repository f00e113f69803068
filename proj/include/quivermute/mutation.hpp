#pragma once

#include "quivermute/extension.hpp"
#include "quivermute/translation.hpp"

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace qm {

// A vertex of the ambient as (base vertex, level).
struct Cell {
    int base = 0;
    int level = 0;
    auto operator<=>(const Cell&) const = default;
};

// A finite vertex subset of a Z|_{n-1}Q ambient, stored as cells so that it survives rewindowing.
class SliceEmbedding {
public:
    SliceEmbedding() = default;  // no ambient; only for assignment
    // The ambient is widened when the cells do not fit with a margin of n+1 levels.
    SliceEmbedding(std::shared_ptr<const WindowedZQ> ambient, std::set<Cell> cells);
    // Labels "v@L"; UNKNOWN_REFERENCE for labels outside the ambient.
    static SliceEmbedding from_labels(std::shared_ptr<const WindowedZQ> ambient, const std::vector<std::string>& labels);
    // Every base vertex at one level; WINDOW_TOO_SMALL outside the window.
    static SliceEmbedding base_copy(std::shared_ptr<const WindowedZQ> ambient, int level);

    const WindowedZQ& ambient() const { return *ambient_; }
    std::shared_ptr<const WindowedZQ> ambient_ptr() const { return ambient_; }
    const std::set<Cell>& cells() const { return cells_; }
    std::set<int> subset() const;  // vertex indices in ambient()
    std::vector<std::string> labels() const;  // natural order
    std::string label(const Cell& c) const;
    std::optional<Cell> cell_of(const std::string& label) const;
    int min_level() const;
    int max_level() const;

    bool convex() const { return convex_; }
    // Each tau-orbit met exactly once.
    bool transversal() const { return transversal_; }

    SliceEmbedding shifted(int k) const;
    SliceEmbedding normalized() const { return shifted(-min_level()); }
    bool operator==(const SliceEmbedding& o) const { return cells_ == o.cells_; }

private:
    std::shared_ptr<const WindowedZQ> ambient_;
    std::set<Cell> cells_;
    bool convex_ = false;
    bool transversal_ = false;
};

// An ambient whose window contains the slice with n+1 spare levels on each side.
std::shared_ptr<const WindowedZQ> working_ambient(const SliceEmbedding& s);

struct ConvexityResult {
    bool convex = true;
    std::optional<Path> witness;  // a path leaving the subset between two of its vertices
};

ConvexityResult is_convex(const BoundQuiver& q, const std::set<int>& subset);
ConvexityResult is_convex(const SliceEmbedding& s);

// Full subquiver on the slice with the ambient relations between its vertices. CONVEXITY_REQUIRED
// if the slice is not convex.
BoundQuiver truncation(const SliceEmbedding& s);
// Quadratic dual of the truncation.
BoundQuiver dual_truncation(const SliceEmbedding& s);

struct TruncationReport {
    bool dims_agree = false;
    bool products_agree = false;
    std::size_t dim = 0;
    std::string witness;
    bool agree() const { return dims_agree && products_agree; }
};

// e Lambda e computed inside the ambient against the algebra of the truncation.
TruncationReport truncation_algebras_agree(const SliceEmbedding& s);

enum class MutationDir { Minus, Plus };
const char* dir_name(MutationDir d);

struct MovableVertex {
    Cell cell;
    bool extremal = false;  // sink (forward) or source (backward) of the slice
};

struct MovableReport {
    std::vector<MovableVertex> forward;
    std::vector<MovableVertex> backward;
};

MovableReport movable_vertices(const SliceEmbedding& s);
bool is_sink(const SliceEmbedding& s, const Cell& c);
bool is_source(const SliceEmbedding& s, const Cell& c);

// Minus replaces a forward movable sink i by tau(i), one level down; plus replaces a backward
// movable source by tau^-1(i). NOT_MOVABLE lists the hammock vertices leaking out of the slice.
// With `extremal_only` false any movable vertex is accepted and convexity of the result checked.
SliceEmbedding mutate(const SliceEmbedding& s, const Cell& at, MutationDir dir, bool extremal_only = true);
SliceEmbedding mutate(const SliceEmbedding& s, const std::string& label, MutationDir dir);

struct CompletenessReport {
    bool complete = false;
    ConvexityResult convexity;
    std::vector<int> missing_orbits;   // base vertices not met
    std::vector<int> repeated_orbits;  // base vertices met more than once
};

// WINDOW_TOO_SMALL unless the ambient window extends past the slice on both sides.
CompletenessReport is_complete_slice(const SliceEmbedding& s);

struct SliceNode {
    SliceEmbedding slice;  // normalized: lowest level 0
    int cls = -1;
};

struct SliceEdge {
    int from = -1;
    int to = -1;
    Cell at;  // the sink mutated, in from's cells
};

struct SliceClass {
    int representative = -1;  // first node found
    std::vector<int> members;
    BoundQuiver dual;         // dual of the representative's truncation
};

struct Enumeration {
    std::vector<SliceNode> nodes;
    std::vector<SliceEdge> edges;
    std::vector<SliceClass> classes;
    std::set<std::pair<int, int>> class_edges;
};

// Closure of a complete slice under sink mutations, up to shift, classes by isomorphism of the
// dual truncations. Sequential BFS; node order is deterministic.
Enumeration enumerate_slices(const SliceEmbedding& start);

// Independent count: every convex orbit transversal with lowest level 0 inside `width` levels,
// by backtracking with convex-hull propagation. Returned normalized, sorted by cells.
std::vector<SliceEmbedding> brute_force_slices(std::shared_ptr<const WindowedZQ> ambient, int width);

// Groups slices by isomorphism of their dual truncations; returns class index per slice.
std::vector<int> classify_slices(const std::vector<SliceEmbedding>& slices, std::vector<BoundQuiver>* reps = nullptr);

struct MutationStep {
    Cell at;
    MutationDir dir;
};

// Shortest sequence of sink/source mutations from a to b, searched within the levels spanned
// by both plus one on each side. NOT_REACHABLE when none exists.
std::vector<MutationStep> mutation_path(const SliceEmbedding& a, const SliceEmbedding& b);

struct TiltReport {
    MutationDir dir = MutationDir::Minus;
    Cell pivot;
    Cell replacement;                          // tau(i) for minus, tau^-1(i) for plus
    std::vector<Cell> kept;
    // Koszul terms in degrees 1 and 2 of the hammock ending at the later of pivot and replacement.
    std::vector<std::pair<Cell, int>> presentation_1, presentation_2;
    // dim of paths replacement -> j (minus) or j -> replacement (plus) in the new dual algebra.
    std::vector<std::pair<Cell, int>> dimension_vector;
    SliceEmbedding result;
    BoundQuiver result_dual;
    bool is_n_apr = false;
};

TiltReport tau_tilt(const SliceEmbedding& s, const Cell& at, MutationDir dir);

}  // namespace qm
