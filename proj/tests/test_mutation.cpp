#include "quivermute/isomorphism.hpp"
#include "quivermute/mutation.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace qm;

namespace {

std::shared_ptr<const WindowedZQ> zq(const BoundQuiver& g) { return WindowedZQ::build(quadratic_dual(g), {-2, 4}); }

std::set<std::string> label_set(const SliceEmbedding& s) {
    auto l = s.labels();
    return {l.begin(), l.end()};
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::Usage;
}

}  // namespace

TEST_CASE("convexity") {
    BoundQuiver g = qmt::a3_fixture();
    CHECK(is_convex(g, {g.vertex_index("3")}).convex);
    auto r = is_convex(g, {g.vertex_index("2"), g.vertex_index("3"), g.vertex_index("5")});
    CHECK_FALSE(r.convex);
    REQUIRE(r.witness);
    bool through4 = false;
    for (int a : r.witness->arrows) through4 |= g.tgt(a) == g.vertex_index("4");
    CHECK(through4);

    auto z = zq(g);
    CHECK(is_convex(SliceEmbedding::base_copy(z, 0)).convex);
    auto bad = SliceEmbedding::from_labels(z, {"2@0", "3@0", "5@0"});
    CHECK_FALSE(bad.convex());
    CHECK(code_of([&] { truncation(bad); }) == ErrorCode::ConvexityRequired);
    CHECK(code_of([&] { truncation_algebras_agree(bad); }) == ErrorCode::ConvexityRequired);
    CHECK(code_of([&] { SliceEmbedding::from_labels(z, {"9@0"}); }) == ErrorCode::UnknownReference);
}

TEST_CASE("level-0 copy of the A3 ambient") {
    auto z = zq(qmt::a3_fixture());
    auto s = SliceEmbedding::base_copy(z, 0);
    CHECK(quiver_isomorphism(dual_truncation(s), qmt::a3_fixture()));
    auto rep = truncation_algebras_agree(s);
    CHECK_MESSAGE(rep.agree(), rep.witness);
    CHECK(rep.dim == 15);
    MovableReport mv = movable_vertices(s);
    REQUIRE(mv.forward.size() == 1);
    CHECK(s.label(mv.forward[0].cell) == "6@0");
    CHECK(mv.forward[0].extremal);
    REQUIRE(mv.backward.size() == 1);
    CHECK(s.label(mv.backward[0].cell) == "1@0");
    CHECK(code_of([&] { mutate(s, "3@0", MutationDir::Minus); }) == ErrorCode::NotMovable);
    CHECK(code_of([&] { mutate(s, "6@0", MutationDir::Plus); }) == ErrorCode::NotMovable);
}

TEST_CASE("completeness") {
    auto z = zq(qmt::a3_fixture());
    auto missing = SliceEmbedding::from_labels(z, {"1@0", "2@0", "3@0", "4@0", "5@0"});
    auto rep = is_complete_slice(missing);
    CHECK_FALSE(rep.complete);
    CHECK(rep.missing_orbits == std::vector<int>{5});
    auto twice = SliceEmbedding::from_labels(z, {"1@0", "2@0", "3@0", "4@0", "5@0", "6@0", "6@-1"});
    CHECK_FALSE(is_complete_slice(twice).complete);
}

TEST_CASE("the mutation chain of the A3 example") {
    BoundQuiver g = qmt::a3_fixture();
    auto s = SliceEmbedding::base_copy(zq(g), 0);
    auto g1 = mutate(s, "1@0", MutationDir::Plus);
    auto g2 = mutate(g1, "2@0", MutationDir::Plus);
    auto g3 = mutate(g2, "3@0", MutationDir::Plus);
    auto g4 = mutate(g2, "4@0", MutationDir::Plus);
    auto g5 = mutate(g4, "1@1", MutationDir::Plus);
    CHECK(label_set(g1) == std::set<std::string>{"1@1", "2@0", "3@0", "4@0", "5@0", "6@0"});
    CHECK(label_set(g2) == std::set<std::string>{"1@1", "2@1", "3@0", "4@0", "5@0", "6@0"});
    CHECK(label_set(g3) == std::set<std::string>{"1@1", "2@1", "3@1", "4@0", "5@0", "6@0"});
    CHECK(label_set(g4) == std::set<std::string>{"1@1", "2@1", "4@1", "3@0", "5@0", "6@0"});
    CHECK(label_set(g5) == std::set<std::string>{"1@2", "2@1", "4@1", "3@0", "5@0", "6@0"});
    CHECK(quiver_isomorphism(dual_truncation(g3), dual_truncation(g1)));
    CHECK(quiver_isomorphism(dual_truncation(g5), g));
    CHECK_FALSE(quiver_isomorphism(dual_truncation(g1), g));
    CHECK_FALSE(quiver_isomorphism(dual_truncation(g2), dual_truncation(g4)));
}

TEST_CASE("enumerated A3 slices: round trips, completeness, movability, truncations") {
    auto start = SliceEmbedding::base_copy(zq(qmt::a3_fixture()), 0);
    Enumeration e = enumerate_slices(start);
    CHECK(e.nodes.size() == 12);
    CHECK(e.classes.size() == 4);
    std::size_t general = 0;
    for (const auto& node : e.nodes) {
        const SliceEmbedding& s = node.slice;
        CHECK(is_complete_slice(s).complete);
        auto tr = truncation_algebras_agree(s);
        CHECK_MESSAGE(tr.agree(), tr.witness);
        MovableReport mv = movable_vertices(s);
        std::set<Cell> fwd, bwd;
        for (const auto& m : mv.forward) {
            fwd.insert(m.cell);
            general += !m.extremal;
        }
        for (const auto& m : mv.backward) bwd.insert(m.cell);
        for (const auto& c : s.cells()) {
            if (is_sink(s, c)) {
                CHECK(fwd.count(c));
                auto m = mutate(s, c, MutationDir::Minus);
                CHECK(m.convex());
                CHECK(is_complete_slice(m).complete);
                CHECK(mutate(m, Cell{c.base, c.level - 1}, MutationDir::Plus) == s);
            }
            if (is_source(s, c)) {
                CHECK(bwd.count(c));
                auto m = mutate(s, c, MutationDir::Plus);
                CHECK(is_complete_slice(m).complete);
                CHECK(mutate(m, Cell{c.base, c.level + 1}, MutationDir::Minus) == s);
            }
        }
    }
    MESSAGE("forward movable vertices that are not sinks: " << general);

    // Independent count.
    auto oracle = brute_force_slices(start.ambient_ptr(), 9);
    CHECK(oracle.size() == 12);
    auto cls = classify_slices(oracle);
    CHECK(std::set<int>(cls.begin(), cls.end()).size() == 4);

    // The closure does not depend on the start slice.
    Enumeration again = enumerate_slices(mutate(start, "6@0", MutationDir::Minus));
    CHECK(again.nodes.size() == 12);
    CHECK(again.classes.size() == 4);
    std::set<std::set<Cell>> a, b;
    for (const auto& n : e.nodes) a.insert(n.slice.cells());
    for (const auto& n : again.nodes) b.insert(n.slice.cells());
    CHECK(a == b);
}

TEST_CASE("tilt reports") {
    auto s = SliceEmbedding::base_copy(zq(qmt::a3_fixture()), 0);
    TiltReport t = tau_tilt(s, *s.cell_of("6@0"), MutationDir::Minus);
    CHECK(t.is_n_apr);
    CHECK(t.result.label(t.replacement) == "6@-1");
    CHECK(t.kept.size() == 5);
    CHECK(t.result_dual.same_structure(quadratic_dual(truncation(t.result))));
    CHECK(t.result == mutate(s, "6@0", MutationDir::Minus));
    // dimension vector = paths out of the new vertex in the new dual algebra
    GradedBasis gb = GradedBasis::full(t.result_dual);
    int r = t.result_dual.vertex_index(t.result.label(t.replacement));
    for (const auto& [c, d] : t.dimension_vector) {
        int j = t.result_dual.vertex_index(t.result.label(c));
        int total = 0;
        for (int k = 0; k <= gb.top_degree(); ++k) total += gb.dim(r, j, k);
        CHECK(d == total);
    }
    REQUIRE(t.presentation_1.size() == 1);
    CHECK(t.result.label(t.presentation_1[0].first) == "4@0");

    TiltReport p = tau_tilt(s, *s.cell_of("1@0"), MutationDir::Plus);
    CHECK(p.is_n_apr);
    CHECK(label_set(p.result) == std::set<std::string>{"1@1", "2@0", "3@0", "4@0", "5@0", "6@0"});
    CHECK(code_of([&] { tau_tilt(s, *s.cell_of("3@0"), MutationDir::Minus); }) == ErrorCode::NotMovable);
}

TEST_CASE("mutation paths") {
    auto z = zq(qmt::a3_fixture());
    auto s = SliceEmbedding::base_copy(z, 0);
    CHECK(mutation_path(s, s).empty());
    auto g2 = mutate(mutate(s, "1@0", MutationDir::Plus), "2@0", MutationDir::Plus);
    auto path = mutation_path(s, g2);
    CHECK(path.size() == 2);
    SliceEmbedding walk = s;
    for (const auto& step : path) walk = mutate(walk, step.at, step.dir);
    CHECK(walk == g2);
    auto other = SliceEmbedding::base_copy(zq(qmt::d4_fixture()), 0);
    CHECK(code_of([&] { mutation_path(s, other); }) == ErrorCode::NotReachable);
}
