#pragma once

#include "quivermute/dual.hpp"
#include "quivermute/io.hpp"
#include "quivermute/quiver.hpp"

#include <random>
#include <string>
#include <utility>
#include <vector>

namespace qmt {

inline std::string fixture(const std::string& name) { return std::string(QM_FIXTURES) + "/" + name; }

inline qm::BoundQuiver a3_fixture() { return qm::load_quiver(fixture("a3-auslander.json")); }
inline qm::BoundQuiver d4_fixture() { return qm::load_quiver(fixture("d4-mckay.json")); }

struct A {
    std::string id, from, to;
};
using Rel = std::vector<std::pair<std::string, std::vector<std::string>>>;

inline qm::QuiverData data(std::string name, std::vector<std::string> vertices, std::vector<A> arrows,
                           std::vector<Rel> relations = {}) {
    qm::QuiverData d;
    d.name = std::move(name);
    d.vertices = std::move(vertices);
    for (auto& a : arrows) d.arrows.push_back({a.id, a.from, a.to});
    for (auto& r : relations) {
        std::vector<qm::RawTerm> terms;
        for (auto& [c, p] : r) terms.push_back({qm::parse_rational(c), p});
        d.relations.push_back(terms);
    }
    return d;
}

inline qm::BoundQuiver quiver(std::string name, std::vector<std::string> vertices, std::vector<A> arrows,
                              std::vector<Rel> relations = {}) {
    return qm::BoundQuiver::from_data(data(std::move(name), std::move(vertices), std::move(arrows), std::move(relations)));
}

inline qm::BoundQuiver a2() { return quiver("A2", {"1", "2"}, {{"a", "1", "2"}}); }
inline qm::BoundQuiver a3_free() { return quiver("A3", {"1", "2", "3"}, {{"a", "1", "2"}, {"b", "2", "3"}}); }
inline qm::BoundQuiver a3_zero() {
    return quiver("A3-ba", {"1", "2", "3"}, {{"a", "1", "2"}, {"b", "2", "3"}}, {{{"1", {"a", "b"}}}});
}

// Relation span per block, as canonical relation lists; equal iff the ideals' quadratic parts agree.
inline bool same_relations(const qm::BoundQuiver& a, const qm::BoundQuiver& b) { return a.same_structure(b); }

// Acyclic quiver on at most 6 vertices with at most 10 arrows (parallel arrows allowed) and a
// random subspace of each block of length-2 paths as relations.
inline qm::BoundQuiver random_quadratic(std::mt19937& rng, int index) {
    std::uniform_int_distribution<int> nv(2, 6), coin(0, 1), coef(-3, 3);
    int v = nv(rng);
    std::vector<std::string> vs;
    for (int k = 1; k <= v; ++k) vs.push_back(std::to_string(k));
    int m = std::uniform_int_distribution<int>(1, 10)(rng);
    std::vector<A> arrows;
    std::uniform_int_distribution<int> pick(0, v - 1);
    for (int k = 0; k < m; ++k) {
        int s = pick(rng), t = pick(rng);
        if (s == t) continue;
        if (s > t) std::swap(s, t);
        arrows.push_back({"x" + std::to_string(k), vs[s], vs[t]});
    }
    qm::BoundQuiver bare = quiver("rand" + std::to_string(index), vs, arrows);
    std::vector<Rel> rels;
    for (int s = 0; s < v; ++s)
        for (int t = 0; t < v; ++t) {
            auto paths = qm::paths_between(bare, s, t, 2);
            if (paths.empty()) continue;
            int k = std::uniform_int_distribution<int>(0, static_cast<int>(paths.size()))(rng);
            for (int r = 0; r < k; ++r) {
                Rel rel;
                for (const auto& p : paths) {
                    int c = coin(rng) ? coef(rng) : 0;
                    if (c == 0) continue;
                    std::vector<std::string> ids;
                    for (int a : p.arrows) ids.push_back(bare.arrows()[a].id);
                    rel.push_back({std::to_string(c), ids});
                }
                if (!rel.empty()) rels.push_back(rel);
            }
        }
    return quiver("rand" + std::to_string(index), vs, arrows, rels);
}

// Lambda for the D4 fixture written out by hand: the orthogonal complement of the printed
// relations, block by block (28 relations).
inline qm::BoundQuiver d4_lambda_by_hand() {
    qm::QuiverData d = d4_fixture().to_data();
    d.name = "d4-mckay!";
    d.relations.clear();
    auto rel = [&](Rel r) {
        std::vector<qm::RawTerm> terms;
        for (auto& [c, p] : r) terms.push_back({qm::parse_rational(c), p});
        d.relations.push_back(terms);
    };
    auto s = [](const char* a, int i, int t) { return std::string(a) + std::to_string(i) + "_" + std::to_string(t); };
    // (1,0) -> (1,2): all differences of the four a_i b_i, and the gamma square.
    for (int i = 3; i <= 5; ++i) rel({{"1", {s("a", 2, 0), s("b", 2, 1)}}, {"-1", {s("a", i, 0), s("b", i, 1)}}});
    rel({{"1", {"g1_0", "g1_1"}}});
    for (int i = 2; i <= 5; ++i) {
        // (1,0) -> (i,2) and (i,0) -> (1,2): anticommutativity turned into commutativity.
        rel({{"1", {s("a", i, 0), s("g", i, 1)}}, {"-1", {"g1_0", s("a", i, 1)}}});
        rel({{"1", {s("g", i, 0), s("b", i, 1)}}, {"-1", {s("b", i, 0), "g1_1"}}});
        // (i,0) -> (i,2): gamma square.
        rel({{"1", {s("g", i, 0), s("g", i, 1)}}});
        // (i,0) -> (j,2): through (1,1) only.
        for (int j = 2; j <= 5; ++j)
            if (j != i) rel({{"1", {s("b", i, 0), s("a", j, 1)}}});
    }
    return qm::BoundQuiver::from_data(d);
}

}  // namespace qmt
