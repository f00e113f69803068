#pragma once

#include "quivermute/graded_basis.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace qm {

// tau(v) is the start of the maximal bound paths ending at v. In a Z|_{n-1}Q window this is
// the same vertex one level down: tau(i@L) = i@(L-1).
struct TranslationData {
    int n = 0;
    std::map<int, int> tau;
    std::set<int> projective;  // tau undefined
    std::set<int> injective;   // tau^-1 undefined
    std::set<int> clipped;     // window boundary effects; neither decided nor failed

    std::optional<int> tau_of(int v) const;
    std::optional<int> tau_inv(int v) const;
    TranslationSpec to_spec(const BoundQuiver& q) const;
};

// NOT_TRANSLATION_QUIVER with a witness when maximal paths disagree in length, when paths ending
// at a vertex start at different vertices, or when the top block is not one-dimensional.
TranslationData detect_translation(const GradedBasis& gb);
TranslationData detect_translation(const BoundQuiver& q);

enum class CheckStatus { Pass, Fail, Indeterminate };
const char* status_name(CheckStatus s);

struct ConditionItem {
    int condition = 0;  // 1, 2 or 3
    int vertex = -1;
    CheckStatus status = CheckStatus::Pass;
    std::string detail;
};

struct ConditionReport {
    std::vector<ConditionItem> items;
    // No failures for that condition (indeterminate items allowed).
    bool holds(int condition) const;
    bool all_hold() const { return holds(1) && holds(2) && holds(3); }
    std::size_t count(int condition, CheckStatus s) const;
};

ConditionReport verify_n_translation(const GradedBasis& gb, const TranslationData& td);

enum class HammockDir { Ending, Starting };

struct HammockEntry {
    int vertex = -1;
    int distance = 0;
    int mu = 0;
};

struct HammockArrow {
    int arrow = -1;
    int distance = 0;  // distance of the endpoint nearer the center
};

struct Hammock {
    int center = -1;
    HammockDir dir = HammockDir::Ending;
    std::vector<HammockEntry> entries;
    std::vector<HammockArrow> arrows;
    std::set<int> vertex_set() const;
    int mu(int vertex, int distance) const;
};

// Ending at i: mu(j, t) = dim e_i Lambda_t e_j, needs tau(i). Starting at i: dim e_j Lambda_t e_i,
// needs tau^-1(i). UNDEFINED_TRANSLATE / WINDOW_CLIPPED otherwise.
Hammock hammock(const GradedBasis& gb, const TranslationData& td, int center, HammockDir dir);

struct KoszulProfile {
    int center = -1;
    // terms[t] for t = 0..n+1: (vertex, multiplicity); terms[n+1] = {(i,1)}, terms[0] = {(tau i,1)}.
    std::vector<std::vector<std::pair<int, int>>> terms;
};

KoszulProfile koszul_profile(const GradedBasis& gb, const TranslationData& td, int i);

}  // namespace qm
