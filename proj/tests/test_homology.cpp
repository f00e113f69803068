#include "quivermute/homology.hpp"
#include "quivermute/mutation.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace qm;

namespace {

std::vector<std::pair<int, int>> profile_of(const Resolution& r) {
    std::vector<std::pair<int, int>> out;  // (vertex, degree) per summand, step by step
    for (const auto& step : r.profile)
        for (const auto& t : step)
            for (int k = 0; k < t.multiplicity; ++k) out.push_back({t.vertex, t.degree});
    return out;
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

// Forward-movable sinks of the level-0 slice, as vertices of the fixture itself.
std::vector<int> movable_sinks(const BoundQuiver& g) {
    auto z = WindowedZQ::build(quadratic_dual(g), {-2, 4});
    auto s = SliceEmbedding::base_copy(z, 0);
    std::vector<int> out;
    for (const auto& m : movable_vertices(s).forward)
        if (m.extremal) out.push_back(m.cell.base);
    return out;
}

}  // namespace

TEST_CASE("resolution examples") {
    GradedBasis a2 = finite_algebra(qmt::a2());
    Resolution r = minimal_projective_resolution(a2, simple_module(a2, 0), 8);
    CHECK(r.complete);
    CHECK(r.length() == 1);
    CHECK(profile_of(r) == std::vector<std::pair<int, int>>{{0, 0}, {1, 1}});

    GradedBasis a3 = finite_algebra(qmt::a3_zero());
    Resolution s1 = minimal_projective_resolution(a3, simple_module(a3, 0), 8);
    CHECK(profile_of(s1) == std::vector<std::pair<int, int>>{{0, 0}, {1, 1}, {2, 2}});
    CHECK(ext_dim(a3, simple_module(a3, 0), simple_module(a3, 2), 2) == 1);
    CHECK(minimal_projective_resolution(a3, simple_module(a3, 2), 8).length() == 0);

    CHECK(code_of([&] { minimal_projective_resolution(a2, simple_module(a2, 0), 0); }) == ErrorCode::LengthExceeded);
    Resolution partial = minimal_projective_resolution(a2, simple_module(a2, 0), 0, false);
    CHECK_FALSE(partial.complete);
}

TEST_CASE("standard modules") {
    for (const auto& g : {qmt::a3_fixture(), qmt::d4_fixture()}) {
        GradedBasis gb = finite_algebra(g);
        std::string w;
        for (std::size_t i = 0; i < g.num_vertices(); ++i) {
            int v = static_cast<int>(i);
            CHECK_MESSAGE(satisfies_relations(gb, projective_module(gb, v), &w), w);
            CHECK_MESSAGE(satisfies_relations(gb, injective_module(gb, v), &w), w);
            CHECK(satisfies_relations(gb, simple_module(gb, v)));
            if (g.out_arrows(v).empty()) CHECK(projective_module(gb, v).total_dim() == 1);
        }
        ModuleRep d = dual_of_algebra(gb);
        CHECK(satisfies_relations(gb, d, &w));
        CHECK(d.total_dim() == gb.total_dim());
    }
    BoundQuiver d4 = qmt::d4_fixture();
    GradedBasis gb = finite_algebra(d4);
    auto dv = projective_module(gb, d4.vertex_index("(1,0)")).dim_vector(d4.num_vertices());
    CHECK(dv == std::vector<int>{1, 1, 4, 0, 1, 1, 0, 1, 1, 0, 1, 1, 0, 1, 1});
}

TEST_CASE("cyclic quivers without relations are refused") {
    auto cyc = qmt::quiver("cyc", {"1", "2"}, {{"a", "1", "2"}, {"b", "2", "1"}});
    CHECK(code_of([&] { finite_algebra(cyc); }) == ErrorCode::InfiniteDimensional);
}

TEST_CASE("injective dimension and Ext vanishing at the movable sinks of both fixtures") {
    for (const auto& g : {qmt::a3_fixture(), qmt::d4_fixture()}) {
        GradedBasis gb = finite_algebra(g);
        auto sinks = movable_sinks(g);
        REQUIRE_FALSE(sinks.empty());
        ModuleRep d = dual_of_algebra(gb);
        for (int i : sinks) {
            CHECK(injective_dimension(gb, i) == 2);
            CHECK(injective_dimension_via_ext(gb, i) == 2);
            for (int t = 0; t < 2; ++t) CHECK(ext_dim(gb, d, projective_module(gb, i), t) == 0);
            NAprReport rep = verify_n_apr_conditions(gb, i, 2);
            CHECK(rep.pass());
        }
        for (std::size_t v = 0; v < g.num_vertices(); ++v)
            CHECK(injective_dimension(gb, v) == injective_dimension_via_ext(gb, v));
    }
    BoundQuiver g = qmt::a3_fixture();
    GradedBasis gb = finite_algebra(g);
    CHECK(injective_dimension(gb, g.vertex_index("6")) == 2);
    CHECK(code_of([&] { verify_n_apr_conditions(gb, g.vertex_index("1"), 2); }) == ErrorCode::NotSimpleProjective);
}

TEST_CASE("property: Euler characteristic, Ext^0 and Ext^1 of simples") {
    std::mt19937 rng(17);
    std::vector<BoundQuiver> algebras{qmt::a3_fixture(), qmt::d4_fixture(), qmt::a3_zero()};
    for (int k = 0; k < 30; ++k) algebras.push_back(qmt::random_quadratic(rng, k));
    for (const auto& q : algebras) {
        GradedBasis gb = finite_algebra(q);
        std::size_t nv = q.num_vertices();
        std::vector<ModuleRep> modules;
        for (std::size_t i = 0; i < nv; ++i) modules.push_back(simple_module(gb, i));
        modules.push_back(dual_of_algebra(gb));
        for (const auto& m : modules) {
            Resolution r = minimal_projective_resolution(gb, m, 32);
            REQUIRE(r.complete);
            std::vector<long> chi(nv, 0);
            for (int t = 0; t <= r.length(); ++t)
                for (const auto& term : r.profile[t]) {
                    auto dv = projective_module(gb, term.vertex).dim_vector(nv);
                    for (std::size_t j = 0; j < nv; ++j) chi[j] += (t % 2 ? -1 : 1) * term.multiplicity * dv[j];
                }
            auto want = m.dim_vector(nv);
            for (std::size_t j = 0; j < nv; ++j) CHECK(chi[j] == want[j]);
        }
        for (std::size_t i = 0; i < nv; ++i)
            for (std::size_t j = 0; j < nv; ++j) {
                int arrows = 0;
                for (int a : q.out_arrows(i)) arrows += q.tgt(a) == static_cast<int>(j);
                CHECK(ext_dim(gb, modules[i], modules[j], 1) == arrows);
                CHECK(ext_dim(gb, modules[i], modules[j], 0) == (i == j ? 1 : 0));
                // multiplicities of the resolution are Ext dimensions
                Resolution r = minimal_projective_resolution(gb, modules[i], 32);
                for (int t = 0; t <= r.length(); ++t)
                    CHECK(r.multiplicity(t, j) == ext_dim(gb, modules[i], modules[j], t));
            }
    }
}

TEST_CASE("linearity") {
    GradedBasis a3 = finite_algebra(qmt::a3_free());
    CHECK(check_linear_resolution(a3, 6).linear_up_to_bound());

    auto cubic = qmt::quiver("cubic", {"1", "2", "3", "4"}, {{"a", "1", "2"}, {"b", "2", "3"}, {"c", "3", "4"}},
                             {{{"1", {"a", "b", "c"}}}});
    LinearityReport rep = check_linear_resolution(finite_algebra(cubic), 4);
    CHECK_FALSE(rep.linear_up_to_bound());
    CHECK_FALSE(rep.entries[0].linear);
    CHECK(rep.entries[0].first_nonlinear_step == 2);
    CHECK(rep.entries[1].linear);

    auto low_simples = [](const WindowedZQ& z) {
        // Resolutions climb one level per step; simples near the top edge see truncated projectives.
        std::vector<int> low;
        for (int v = 0; v < static_cast<int>(z.quiver().num_vertices()); ++v)
            if (z.level(v) < 0) low.push_back(v);
        return low;
    };
    auto d4 = WindowedZQ::build(quadratic_dual(qmt::d4_fixture()), {-2, 4});
    CHECK(check_linear_resolution(d4->algebra(), 4, low_simples(*d4)).linear_up_to_bound());

    // The A3 ambient is linear for three steps, then jumps by the period n+1 = 3.
    auto a3w = WindowedZQ::build(quadratic_dual(qmt::a3_fixture()), {-2, 4});
    CHECK(check_linear_resolution(a3w->algebra(), 2, low_simples(*a3w)).linear_up_to_bound());
    for (int v : low_simples(*a3w)) {
        Resolution r = minimal_projective_resolution(a3w->algebra(), simple_module(a3w->algebra(), v), 4, false);
        REQUIRE(r.profile.size() >= 4);
        for (const auto& term : r.profile[3]) CHECK(term.degree == 5);
    }
    for (const auto& g : {qmt::a3_fixture(), qmt::d4_fixture()})
        CHECK(check_linear_resolution(finite_algebra(quadratic_dual(g)), 4).linear_up_to_bound());
}
