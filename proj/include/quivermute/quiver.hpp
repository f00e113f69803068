#pragma once

#include "quivermute/error.hpp"
#include "quivermute/linalg.hpp"

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace qm {

// Orders strings with digit runs compared numerically ("2" < "10"); used for every canonical order.
bool natural_less(const std::string& a, const std::string& b);

struct Arrow {
    std::string id;
    std::string source;
    std::string target;
    bool operator==(const Arrow&) const = default;
};

// Arrow indices listed first-traversed to last-traversed. A stationary path has no arrows
// and source == target.
struct Path {
    int source = -1;
    int target = -1;
    std::vector<int> arrows;

    std::size_t length() const { return arrows.size(); }
    static Path stationary(int v) { return Path{v, v, {}}; }

    // Canonical order: length, then arrow index sequence, then endpoints.
    friend bool operator<(const Path& a, const Path& b) {
        if (a.arrows.size() != b.arrows.size()) return a.arrows.size() < b.arrows.size();
        return std::tie(a.arrows, a.source, a.target) < std::tie(b.arrows, b.source, b.target);
    }
    bool operator==(const Path&) const = default;
};

struct Term {
    Rational coeff;
    Path path;
    bool operator==(const Term&) const = default;
};
using LinComb = std::vector<Term>;

struct TranslationSpec {
    int n = 0;
    std::map<std::string, std::string> tau;
    bool operator==(const TranslationSpec&) const = default;
};

struct Window {
    int from = 0;
    int to = 0;
    bool operator==(const Window&) const = default;
};

// Unvalidated, label-based description; what files parse into.
struct RawTerm {
    Rational coeff;
    std::vector<std::string> path;
};

struct QuiverData {
    std::string name;
    std::vector<std::string> vertices;
    std::vector<Arrow> arrows;
    std::vector<std::vector<RawTerm>> relations;
    std::optional<TranslationSpec> translation;
    std::optional<Window> window;
};

struct Issue {
    ErrorCode code;
    std::string message;
    std::vector<std::string> witness;
};

struct ValidationReport;
ValidationReport validate(const QuiverData& data);

class BoundQuiver {
public:
    BoundQuiver() = default;
    // Throws the first validation issue.
    static BoundQuiver from_data(const QuiverData& data);
    QuiverData to_data() const;

    const std::string& name() const { return name_; }
    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::vector<Arrow>& arrows() const { return arrows_; }
    const std::vector<LinComb>& relations() const { return relations_; }
    const std::optional<TranslationSpec>& translation() const { return translation_; }
    const std::optional<Window>& window() const { return window_; }

    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_arrows() const { return arrows_.size(); }

    std::optional<int> find_vertex(const std::string& label) const;
    std::optional<int> find_arrow(const std::string& id) const;
    int vertex_index(const std::string& label) const;  // UNKNOWN_REFERENCE if absent
    int arrow_index(const std::string& id) const;
    int src(int arrow) const { return arrow_src_[arrow]; }
    int tgt(int arrow) const { return arrow_tgt_[arrow]; }
    const std::vector<int>& out_arrows(int v) const { return out_[v]; }
    const std::vector<int>& in_arrows(int v) const { return in_[v]; }

    Path make_path(const std::vector<std::string>& arrow_ids) const;
    std::string path_str(const Path& p) const;
    std::string lincomb_str(const LinComb& l) const;

    bool is_acyclic() const;
    // Relation degrees present, e.g. {2} for a quadratic quiver.
    std::vector<int> relation_degrees() const;

    BoundQuiver with_name(std::string name) const;
    BoundQuiver with_translation(std::optional<TranslationSpec> t) const;
    BoundQuiver with_window(std::optional<Window> w) const;

    bool operator==(const BoundQuiver& o) const;
    // Vertices, arrows and relations only.
    bool same_structure(const BoundQuiver& o) const;

private:
    friend ValidationReport validate(const QuiverData& data);
    void index();

    std::string name_;
    std::vector<std::string> vertices_;
    std::vector<Arrow> arrows_;
    std::vector<LinComb> relations_;
    std::optional<TranslationSpec> translation_;
    std::optional<Window> window_;

    std::map<std::string, int> vindex_;
    std::map<std::string, int> aindex_;
    std::vector<int> arrow_src_, arrow_tgt_;
    std::vector<std::vector<int>> out_, in_;
};

struct ValidationReport {
    std::vector<Issue> issues;
    std::optional<BoundQuiver> normalized;
    bool ok() const { return issues.empty(); }
};

// Block key of a homogeneous relation: (source, target, degree).
using BlockKey = std::tuple<int, int, int>;
BlockKey block_of(const LinComb& l);

// All paths of exactly `length` from `s` to `t`, canonical order.
std::vector<Path> paths_between(const BoundQuiver& q, int s, int t, int length);

// RREF-canonical relations for one block: columns are the sorted union of paths, rows become
// LinCombs with terms in canonical order.
std::vector<LinComb> canonicalize_block(const std::vector<LinComb>& rels);

}  // namespace qm
