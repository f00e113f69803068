#pragma once

#include "quivermute/graded_basis.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qm {

// Graded representation: a space per (vertex, degree) and, for each arrow a: u -> v, a matrix
// from (u, d) to (v, d + 1). Arrows act in traversal order, so the projective at i is spanned by
// the paths starting at i.
struct ModuleRep {
    std::map<std::pair<int, int>, int> dims;          // (vertex, degree) -> dimension
    std::map<std::pair<int, int>, Matrix> maps;       // (arrow, source degree) -> matrix; absent = 0

    int dim(int v, int d) const;
    std::vector<int> degrees_at(int v) const;
    std::vector<int> dim_vector(std::size_t num_vertices) const;
    std::size_t total_dim() const;
    bool is_zero() const { return total_dim() == 0; }
};

// INFINITE_DIMENSIONAL when the algebra does not vanish within the degree cap.
GradedBasis finite_algebra(const BoundQuiver& q);
void require_finite(const GradedBasis& gb);

ModuleRep simple_module(const GradedBasis& gb, int i);
ModuleRep projective_module(const GradedBasis& gb, int i);
// Dual of the paths ending at i; degrees are minus path lengths.
ModuleRep injective_module(const GradedBasis& gb, int i);
ModuleRep dual_of_algebra(const GradedBasis& gb);

// Every relation acts as zero and every matrix has the declared shape.
bool satisfies_relations(const GradedBasis& gb, const ModuleRep& m, std::string* witness = nullptr);

// Same vertices, arrows reversed, relation paths reversed.
BoundQuiver opposite_quiver(const BoundQuiver& q);

struct ResolutionTerm {
    int vertex = -1;
    int degree = 0;
    int multiplicity = 0;
    bool operator==(const ResolutionTerm&) const = default;
};

struct Resolution {
    struct Summand {
        int vertex = -1;
        int degree = 0;
    };
    // Step t of the minimal resolution, aggregated by (vertex, degree).
    std::vector<std::vector<ResolutionTerm>> profile;
    bool complete = false;  // the last syzygy vanished
    // summands[t][s]; image[t][s] is the generator's image in step t-1 (module coordinates for t = 0)
    std::vector<std::vector<Summand>> summands;
    std::vector<std::vector<Vec>> image;

    // Projective dimension when complete.
    int length() const { return static_cast<int>(profile.size()) - 1; }
    int multiplicity(int t, int vertex) const;
};

// Steps 0..max_len. When the syzygy after max_len is nonzero: LENGTH_EXCEEDED if `strict`,
// otherwise the partial resolution is returned with complete = false.
Resolution minimal_projective_resolution(const GradedBasis& gb, const ModuleRep& m, int max_len, bool strict = true);

// dim Ext^t(M, N) from the Hom complex of the minimal resolution of M.
int ext_dim(const GradedBasis& gb, const ModuleRep& m, const ModuleRep& n, int t);

// Projective dimension of the simple over the opposite algebra.
int injective_dimension(const GradedBasis& gb, int i, int max_len = 32);
// sup { t : Ext^t(S_j, S_i) != 0 for some j } from the resolutions of all simples.
int injective_dimension_via_ext(const GradedBasis& gb, int i, int max_len = 32);

struct LinearityEntry {
    int vertex = -1;
    bool linear = true;
    int first_nonlinear_step = -1;
    int steps = 0;           // steps computed
    bool complete = false;   // resolution ended within the bound
};

struct LinearityReport {
    int bound = 0;
    std::vector<LinearityEntry> entries;
    bool linear_up_to_bound() const;
};

// Step t of each simple's resolution generated purely in degree t, for t <= bound. All vertices when
// `vertices` is empty.
LinearityReport check_linear_resolution(const GradedBasis& gb, int bound, const std::vector<int>& vertices = {});

struct NAprReport {
    int vertex = -1;
    int n = 0;
    int injective_dimension = -1;
    int injective_dimension_ext = -1;
    std::vector<int> ext_dims;  // dim Ext^t(D Gamma, Gamma e_i) for t = 0..n-1
    bool injective_ok() const { return injective_dimension == n && injective_dimension_ext == n; }
    bool ext_ok() const;
    bool pass() const { return injective_ok() && ext_ok(); }
};

// NOT_SIMPLE_PROJECTIVE unless the projective at i is simple.
NAprReport verify_n_apr_conditions(const GradedBasis& gb, int i, int n);

}  // namespace qm
