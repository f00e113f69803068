#pragma once

#include "quivermute/graded_basis.hpp"
#include "quivermute/quiver.hpp"
#include "quivermute/translation.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace qm {

struct ReturningArrowQuiver {
    BoundQuiver quiver;                  // Q plus one returning arrow per maximal path, no relations
    int n = 0;                           // length of the maximal bound paths of the base
    std::vector<MaxPath> maximal;        // canonical basis of Lambda_n
    std::vector<std::string> return_ids; // return_ids[k] runs t(maximal[k]) -> s(maximal[k])
};

ReturningArrowQuiver returning_arrow_quiver(const BoundQuiver& lambda);

// Lambda x D(Lambda). Basis: the standard monomials b of Lambda (degree |b|), then their duals b*
// (degree n+1-|b|). b* behaves like a path t(b) -> s(b). Products are in traversal order.
class TrivialExtension {
public:
    struct BasisElem {
        bool dual = false;
        int lambda_degree = 0;  // degree of b in Lambda
        int lambda_index = 0;   // index in GradedBasis::basis(lambda_degree)
        int source = -1;
        int target = -1;
        int degree = 0;
    };

    explicit TrivialExtension(const BoundQuiver& lambda);

    int n() const { return n_; }
    const GradedBasis& base() const { return *gb_; }
    const BoundQuiver& base_quiver() const { return gb_->quiver(); }
    std::size_t dim() const { return elems_.size(); }
    std::size_t base_dim() const { return elems_.size() / 2; }
    const std::vector<BasisElem>& basis() const { return elems_; }
    std::string elem_str(int x) const;
    int index_of_lambda(int degree, int idx) const { return offset_[degree] + idx; }
    int dual_of(int lambda_global) const { return lambda_global + static_cast<int>(base_dim()); }
    std::vector<int> of_degree(int d) const;

    SparseVec mul(int x, int y) const;
    SparseVec mul(const SparseVec& x, const SparseVec& y) const;

    // Exhaustive checks; on failure the witness names the offending basis elements.
    bool check_unit(std::string* witness = nullptr) const;
    bool check_associativity(std::string* witness = nullptr) const;
    bool check_grading(std::string* witness = nullptr) const;
    // Socle dimension of each indecomposable projective (elements starting at v).
    std::vector<int> socle_dims() const;

private:
    std::shared_ptr<GradedBasis> gb_;
    int n_ = 0;
    std::vector<int> offset_;
    std::vector<BasisElem> elems_;
};

struct TildeRelations {
    ReturningArrowQuiver qtilde;
    std::vector<LinComb> base;    // no returning arrow (rho)
    std::vector<LinComb> mixed;   // exactly one returning arrow (rho_0)
    std::vector<LinComb> top;     // two returning arrows (rho_M)
    bool quadratic = false;
    // dim (kQ~/(degree-2 kernel))_d - dim Lambda~_d for d = 0..n+2; all zero iff quadratic.
    std::vector<long> excess;
    BoundQuiver bound_quiver() const;  // Q~ with all degree-2 relations
};

TildeRelations tilde_relations(const TrivialExtension& te);

// Finite window [from, to] of Z|_{n-1}Q: vertices "v@L", arrows "a@L" within level L and returning
// arrows "r@L" from t(p)@L to s(p)@(L+1).
class WindowedZQ : public std::enable_shared_from_this<WindowedZQ> {
public:
    // NOT_QUADRATIC_TILDE when the trivial extension is not quadratic.
    static std::shared_ptr<const WindowedZQ> build(const BoundQuiver& lambda, Window window);

    const BoundQuiver& base() const { return base_; }
    const BoundQuiver& quiver() const { return quiver_; }
    const GradedBasis& algebra() const { return *gb_; }
    const TildeRelations& tilde() const { return *tilde_; }
    int n() const { return n_; }
    Window window() const { return window_; }
    int num_levels() const { return window_.to - window_.from + 1; }

    int vertex(int base_vertex, int level) const;  // -1 outside the window
    int base_vertex(int v) const { return base_of_[v]; }
    int level(int v) const { return level_of_[v]; }
    bool in_window(int level) const { return level >= window_.from && level <= window_.to; }
    static std::string label(const std::string& base_label, int level);

    // Detected once per window.
    const TranslationData& translation() const;

    // The same ambient over a different window; windows of one family are built once and shared.
    std::shared_ptr<const WindowedZQ> rewindow(Window w) const;

private:
    struct Family {
        std::mutex mu;
        std::map<std::pair<int, int>, std::weak_ptr<const WindowedZQ>> windows;
    };
    static std::shared_ptr<WindowedZQ> assemble(const BoundQuiver& lambda, std::shared_ptr<TildeRelations> tilde,
                                                Window window);

    BoundQuiver base_;
    BoundQuiver quiver_;
    std::shared_ptr<GradedBasis> gb_;
    std::shared_ptr<TildeRelations> tilde_;
    int n_ = 0;
    Window window_;
    std::vector<int> base_of_, level_of_;
    std::shared_ptr<Family> family_;
    mutable std::once_flag td_once_;
    mutable std::unique_ptr<TranslationData> td_;
};

// Base algebra recovered from an ambient file: the full subquiver at one interior level.
BoundQuiver base_from_ambient(const BoundQuiver& ambient, int level);
// Loads an ambient file: rebuilds it from its base and checks equality. UNKNOWN_REFERENCE-free
// files that are not a Z|_{n-1}Q window raise NOT_TRANSLATION_QUIVER.
std::shared_ptr<const WindowedZQ> ambient_from_quiver(const BoundQuiver& ambient);

}  // namespace qm
