#include "quivermute/extension.hpp"
#include "quivermute/mutation.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace qm;

namespace {

BoundQuiver a3_lambda() { return quadratic_dual(qmt::a3_fixture()); }
BoundQuiver d4_lambda() { return quadratic_dual(qmt::d4_fixture()); }

}  // namespace

TEST_CASE("returning arrow quivers") {
    auto r2 = returning_arrow_quiver(qmt::a2());
    CHECK(r2.n == 1);
    REQUIRE(r2.quiver.num_arrows() == 2);
    REQUIRE(r2.return_ids.size() == 1);
    int beta = r2.quiver.arrow_index(r2.return_ids[0]);
    CHECK(r2.quiver.vertices()[r2.quiver.src(beta)] == "2");
    CHECK(r2.quiver.vertices()[r2.quiver.tgt(beta)] == "1");

    auto r3 = returning_arrow_quiver(qmt::a3_free());
    CHECK(r3.n == 2);
    REQUIRE(r3.return_ids.size() == 1);
    int b3 = r3.quiver.arrow_index(r3.return_ids[0]);
    CHECK(r3.quiver.vertices()[r3.quiver.src(b3)] == "3");
    CHECK(r3.quiver.vertices()[r3.quiver.tgt(b3)] == "1");

    auto rd = returning_arrow_quiver(d4_lambda());
    GradedBasis gb = GradedBasis::full(d4_lambda());
    CHECK(rd.return_ids.size() == gb.dim_degree(2));
    CHECK(rd.return_ids.size() == 13);  // 54 - 15 - 26
}

TEST_CASE("trivial extensions have twice the dimension and a valid multiplication") {
    TrivialExtension te2(qmt::a2());
    CHECK(te2.dim() == 6);
    for (const auto& lambda : {a3_lambda(), d4_lambda()}) {
        TrivialExtension te(lambda);
        CHECK(te.dim() == 2 * GradedBasis::full(lambda).total_dim());
        std::string w;
        CHECK_MESSAGE(te.check_unit(&w), w);
        CHECK_MESSAGE(te.check_associativity(&w), w);
        CHECK_MESSAGE(te.check_grading(&w), w);
        for (int s : te.socle_dims()) CHECK(s == 1);
    }
}

TEST_CASE("A2: the trivial extension is not quadratic and no ambient is built") {
    TrivialExtension te(qmt::a2());
    TildeRelations tr = tilde_relations(te);
    CHECK_FALSE(tr.quadratic);
    CHECK(tr.base.empty());
    CHECK(tr.mixed.empty());
    CHECK(tr.top.empty());
    REQUIRE(tr.excess.size() > 3);
    CHECK(tr.excess[3] > 0);
    try {
        WindowedZQ::build(qmt::a2(), {0, 3});
        FAIL("expected NOT_QUADRATIC_TILDE");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotQuadraticTilde);
    }
}

TEST_CASE("relation families of the fixtures") {
    for (const auto& lambda : {a3_lambda(), d4_lambda()}) {
        TildeRelations tr = tilde_relations(TrivialExtension(lambda));
        CHECK(tr.quadratic);
        for (long e : tr.excess) CHECK(e == 0);
        // The family without returning arrows is rho itself.
        CHECK(tr.base == lambda.relations());
        // D(Lambda) squares to zero: every path through two returning arrows is a relation.
        const BoundQuiver& qt = tr.qtilde.quiver;
        std::set<std::string> ret(tr.qtilde.return_ids.begin(), tr.qtilde.return_ids.end());
        std::size_t double_returns = 0;
        for (std::size_t a = 0; a < qt.num_arrows(); ++a)
            for (int b : qt.out_arrows(qt.tgt(a)))
                if (ret.count(qt.arrows()[a].id) && ret.count(qt.arrows()[b].id)) ++double_returns;
        CHECK(tr.top.size() == double_returns);
        for (const auto& r : tr.top) CHECK(r.size() == 1);
    }
    TildeRelations a3 = tilde_relations(TrivialExtension(a3_lambda()));
    CHECK(a3.base.size() == 3);
    TildeRelations d4 = tilde_relations(TrivialExtension(d4_lambda()));
    CHECK(d4.base.size() == 28);
    CHECK(d4.mixed.size() == 56);
    CHECK(d4.top.size() == 0);
}

TEST_CASE("windowed ambient layout") {
    auto z = WindowedZQ::build(a3_lambda(), {-2, 4});
    CHECK(z->n() == 2);
    CHECK(z->num_levels() == 7);
    CHECK(z->quiver().num_vertices() == 42);
    // six arrows per level, three returning arrows between consecutive levels
    CHECK(z->quiver().num_arrows() == 7 * 6 + 6 * 3);
    CHECK(z->vertex(0, 5) == -1);
    int v = z->vertex(2, 1);
    CHECK(z->base_vertex(v) == 2);
    CHECK(z->level(v) == 1);
    CHECK(z->quiver().vertices()[v] == "3@1");
    CHECK(z->rewindow({-2, 4}) == z);
    auto wide = z->rewindow({-4, 6});
    CHECK(wide->num_levels() == 11);
    CHECK(z->rewindow({-4, 6}) == wide);
}

TEST_CASE("ambient files round-trip through their base") {
    auto z = WindowedZQ::build(a3_lambda(), {-1, 3});
    BoundQuiver file = parse_quiver(serialize_quiver(z->quiver()));
    auto back = ambient_from_quiver(file);
    CHECK(back->quiver() == z->quiver());
    CHECK(base_from_ambient(file, 0).same_structure(a3_lambda()));
    CHECK_THROWS_AS(ambient_from_quiver(a3_lambda()), Error);
}

TEST_CASE("base copies") {
    auto z = WindowedZQ::build(a3_lambda(), {-2, 4});
    auto s = SliceEmbedding::base_copy(z, 0);
    CHECK(s.convex());
    CHECK(s.transversal());
    CHECK(is_complete_slice(s).complete);
    CHECK(truncation(s).num_vertices() == 6);
    try {
        SliceEmbedding::base_copy(z, 9);
        FAIL("expected WINDOW_TOO_SMALL");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::WindowTooSmall);
    }
}
