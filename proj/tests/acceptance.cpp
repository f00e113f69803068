// One line per primary acceptance criterion; exit status 1 if any fails.
#include "quivermute/extension.hpp"
#include "quivermute/homology.hpp"
#include "quivermute/isomorphism.hpp"
#include "quivermute/session.hpp"
#include "support.hpp"

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <regex>
#include <sstream>

using namespace qm;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail = what;
        pass = pass && ok;
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::shared_ptr<const WindowedZQ> ambient_of(const BoundQuiver& gamma) {
    return WindowedZQ::build(quadratic_dual(gamma), {-2, 4});
}

std::set<std::string> dot_vertices(const std::string& dot) {
    std::set<std::string> out;
    static const std::regex rank(R"(\{ rank=same;([^}]*)\})"), name(R"re("([^"]+)")re");
    for (std::sregex_iterator r(dot.begin(), dot.end(), rank), end; r != end; ++r) {
        std::string body = (*r)[1];
        for (std::sregex_iterator m(body.begin(), body.end(), name); m != end; ++m) out.insert((*m)[1]);
    }
    return out;
}

// Full subquiver of q on `labels`, keeping the relations whose terms stay inside.
BoundQuiver restrict_to(const BoundQuiver& q, const std::vector<std::string>& labels) {
    std::set<std::string> keep(labels.begin(), labels.end());
    QuiverData d;
    d.name = "restricted";
    d.vertices = labels;
    std::set<int> arrows;
    for (std::size_t a = 0; a < q.num_arrows(); ++a)
        if (keep.count(q.arrows()[a].source) && keep.count(q.arrows()[a].target)) {
            arrows.insert(static_cast<int>(a));
            d.arrows.push_back(q.arrows()[a]);
        }
    for (const auto& r : q.relations()) {
        bool inside = true;
        for (const auto& t : r)
            for (int a : t.path.arrows) inside = inside && arrows.count(a);
        if (!inside) continue;
        std::vector<RawTerm> raw;
        for (const auto& t : r) {
            RawTerm rt{t.coeff, {}};
            for (int a : t.path.arrows) rt.path.push_back(q.arrows()[a].id);
            raw.push_back(std::move(rt));
        }
        d.relations.push_back(std::move(raw));
    }
    return BoundQuiver::from_data(d);
}

Outcome criterion_1() {
    Outcome o;
    auto t0 = Clock::now();
    std::mt19937 rng(20240601);
    for (int k = 0; k < 200; ++k) {
        BoundQuiver q = qmt::random_quadratic(rng, k);
        o.require(quadratic_dual(quadratic_dual(q)).same_structure(q), "involution fails on random quiver " + std::to_string(k));
    }
    double s = seconds_since(t0);
    o.require(s < 10.0, "took longer than 10 s");
    o.detail = o.pass ? "200 random quadratic quivers in " + std::to_string(s).substr(0, 5) + " s" : o.detail;
    return o;
}

Outcome criterion_2() {
    Outcome o;
    BoundQuiver printed = qmt::d4_fixture();
    BoundQuiver lambda = qmt::d4_lambda_by_hand();
    o.require(quadratic_dual(lambda).same_structure(printed), "dual of the hand-derived Lambda differs from the printed relations");
    o.require(quadratic_dual(printed).same_structure(lambda), "dual of the printed relations differs from the hand-derived Lambda");
    if (o.pass)
        o.detail = std::to_string(lambda.relations().size()) + " relations dualize to the " +
                   std::to_string(printed.relations().size()) + " printed ones";
    return o;
}

Outcome criterion_3() {
    Outcome o;
    auto t0 = Clock::now();
    BoundQuiver g = qmt::a3_fixture();
    auto z = ambient_of(g);
    std::vector<SliceEmbedding> chain{SliceEmbedding::base_copy(z, 0)};
    chain.push_back(mutate(chain[0], "1@0", MutationDir::Plus));
    chain.push_back(mutate(chain[1], "2@0", MutationDir::Plus));
    chain.push_back(mutate(chain[2], "3@0", MutationDir::Plus));
    chain.push_back(mutate(chain[2], "4@0", MutationDir::Plus));
    chain.push_back(mutate(chain[4], "1@1", MutationDir::Plus));
    o.require(static_cast<bool>(quiver_isomorphism(dual_truncation(chain[3]), dual_truncation(chain[1]))),
              "third slice not isomorphic to the first");
    o.require(static_cast<bool>(quiver_isomorphism(dual_truncation(chain[5]), g)), "fifth slice not isomorphic to the start");
    const std::vector<std::set<std::string>> figures{
        {"1@0", "2@0", "3@0", "4@0", "5@0", "6@0"}, {"1@1", "2@0", "3@0", "4@0", "5@0", "6@0"},
        {"1@1", "2@1", "3@0", "4@0", "5@0", "6@0"}, {"1@1", "2@1", "3@1", "4@0", "5@0", "6@0"},
        {"1@1", "2@1", "4@1", "3@0", "5@0", "6@0"}, {"1@2", "2@1", "4@1", "3@0", "5@0", "6@0"}};
    for (std::size_t k = 0; k < chain.size(); ++k) {
        DotOptions opts;
        opts.graph_name = "gamma-" + std::to_string(k);
        o.require(dot_vertices(export_dot(chain[k], opts)) == figures[k], "DOT vertices of slice " + std::to_string(k) + " differ");
    }
    double s = seconds_since(t0);
    o.require(s < 1.0, "took longer than 1 s");
    if (o.pass) o.detail = "both isomorphisms hold, six DOT slices match, " + std::to_string(s).substr(0, 5) + " s";
    return o;
}

std::map<std::string, Enumeration> enumerations() {
    std::map<std::string, Enumeration> out;
    out["a3"] = enumerate_slices(SliceEmbedding::base_copy(ambient_of(qmt::a3_fixture()), 0));
    out["d4"] = enumerate_slices(SliceEmbedding::base_copy(ambient_of(qmt::d4_fixture()), 0));
    return out;
}

Outcome criterion_4(const std::map<std::string, Enumeration>& all) {
    Outcome o;
    std::size_t trips = 0;
    for (const auto& [name, e] : all)
        for (const auto& node : e.nodes) {
            const SliceEmbedding& s = node.slice;
            for (const auto& c : s.cells()) {
                std::optional<std::pair<SliceEmbedding, SliceEmbedding>> there_back;
                if (is_sink(s, c)) {
                    auto m = mutate(s, c, MutationDir::Minus);
                    there_back.emplace(m, mutate(m, Cell{c.base, c.level - 1}, MutationDir::Plus));
                }
                if (is_source(s, c)) {
                    auto m = mutate(s, c, MutationDir::Plus);
                    o.require(m.convex() && is_convex(m).convex && is_complete_slice(m).complete, name + ": source mutation not a complete slice");
                    o.require(mutate(m, Cell{c.base, c.level + 1}, MutationDir::Minus) == s, name + ": source round trip fails");
                    ++trips;
                }
                if (there_back) {
                    const auto& [m, back] = *there_back;
                    o.require(is_convex(m).convex && is_complete_slice(m).complete, name + ": sink mutation not a complete slice");
                    o.require(back == s, name + ": sink round trip fails");
                    ++trips;
                }
            }
        }
    if (o.pass) o.detail = std::to_string(trips) + " round trips over both fixtures";
    return o;
}

Outcome criterion_5(const std::map<std::string, Enumeration>& all) {
    Outcome o;
    const std::map<std::string, std::pair<std::size_t, std::size_t>> frozen{{"a3", {12, 4}}, {"d4", {243, 15}}};
    std::ostringstream detail;
    for (const auto& [name, e] : all) {
        auto oracle = brute_force_slices(e.nodes[0].slice.ambient_ptr(), 9);
        auto cls = classify_slices(oracle);
        std::size_t oracle_classes = std::set<int>(cls.begin(), cls.end()).size();
        std::set<std::set<Cell>> bfs, brute;
        for (const auto& n : e.nodes) bfs.insert(n.slice.cells());
        for (const auto& s : oracle) brute.insert(s.cells());
        o.require(bfs == brute, name + ": enumerated slices differ from the oracle");
        o.require(oracle_classes == e.classes.size(), name + ": class count differs from the oracle");
        o.require(frozen.at(name) == std::make_pair(e.nodes.size(), e.classes.size()), name + ": counts differ from the frozen values");
        detail << name << " " << e.nodes.size() << " slices/" << e.classes.size() << " classes ";
    }
    if (o.pass) o.detail = detail.str() + "(oracle agrees)";
    return o;
}

Outcome criterion_6() {
    Outcome o;
    for (const auto& g : {qmt::a3_fixture(), qmt::d4_fixture()}) {
        auto z = ambient_of(g);
        const TranslationData& td = z->translation();
        o.require(td.n == 2, g.name() + ": n is not 2");
        ConditionReport rep = verify_n_translation(z->algebra(), td);
        o.require(rep.all_hold(), g.name() + ": a condition fails");
        std::size_t interior = 0;
        for (int v = 0; v < static_cast<int>(z->quiver().num_vertices()); ++v) {
            if (td.clipped.count(v)) continue;
            ++interior;
            o.require(!td.projective.count(v) && !td.injective.count(v), g.name() + ": interior projective or injective");
        }
        for (int c = 1; c <= 3; ++c)
            o.require(rep.count(c, CheckStatus::Pass) == interior, g.name() + ": interior vertex not decided");
        for (const auto& p : maximal_bound_paths(z->algebra(), false)) {
            if (z->level(p.source) == z->window().from || z->level(p.target) == z->window().to) continue;
            o.require(p.length() == 3, g.name() + ": interior maximal path of length " + std::to_string(p.length()));
        }
    }
    if (o.pass) o.detail = "conditions 1-3 hold on both interiors with n = 2";
    return o;
}

Outcome criterion_7(const std::map<std::string, Enumeration>& all) {
    Outcome o;
    std::size_t checked = 0;
    for (const auto& [name, e] : all)
        for (const auto& node : e.nodes) {
            const SliceEmbedding& s = node.slice;
            BoundQuiver gamma = dual_truncation(s);
            GradedBasis gb = finite_algebra(gamma);
            for (const auto& m : movable_vertices(s).forward) {
                if (!m.extremal) continue;
                NAprReport r = verify_n_apr_conditions(gb, gamma.vertex_index(s.label(m.cell)), 2);
                o.require(r.injective_dimension == 2 && r.injective_dimension_ext == 2, name + ": injective dimension is not 2 at " + s.label(m.cell));
                o.require(r.ext_ok(), name + ": Ext does not vanish at " + s.label(m.cell));
                ++checked;
            }
        }
    if (o.pass) o.detail = std::to_string(checked) + " movable sinks over all enumerated slices";
    return o;
}

Outcome criterion_8(const std::map<std::string, Enumeration>& all) {
    Outcome o;
    std::size_t squares = 0;
    std::map<const WindowedZQ*, BoundQuiver> dual_ambient;
    for (const auto& [name, e] : all)
        for (const auto& node : e.nodes) {
            const SliceEmbedding& s = node.slice;
            for (const auto& c : s.cells()) {
                if (!is_sink(s, c)) continue;
                SliceEmbedding m = mutate(s, c, MutationDir::Minus);
                // Dualize the whole ambient first, then cut out the mutated slice.
                const WindowedZQ* key = &m.ambient();
                if (!dual_ambient.count(key)) dual_ambient[key] = quadratic_dual(m.ambient().quiver());
                BoundQuiver other = restrict_to(dual_ambient[key], m.labels());
                BoundQuiver direct = dual_truncation(m);
                o.require(direct.same_structure(other), name + ": square fails at " + s.label(c));
                TiltReport t = tau_tilt(s, c, MutationDir::Minus);
                o.require(t.result_dual.same_structure(direct), name + ": tilt report dual differs at " + s.label(c));
                ++squares;
            }
        }
    if (o.pass) o.detail = std::to_string(squares) + " sink mutations";
    return o;
}

Outcome criterion_9() {
    Outcome o;
    std::vector<BoundQuiver> inputs;
    for (const auto& g : {qmt::a3_fixture(), qmt::d4_fixture()}) {
        inputs.push_back(quadratic_dual(g));
        inputs.push_back(g);
    }
    for (const auto& lambda : inputs) {
        TrivialExtension te(lambda);
        std::size_t base = finite_algebra(lambda).total_dim();
        o.require(te.dim() == 2 * base, lambda.name() + ": trivial extension dimension is not doubled");
        TildeRelations tr = tilde_relations(te);
        if (tr.quadratic)
            o.require(finite_algebra(tr.bound_quiver()).total_dim() == 2 * base,
                      lambda.name() + ": the bound quiver of the trivial extension has the wrong dimension");
    }
    o.require(!tilde_relations(TrivialExtension(qmt::a2())).quadratic, "A2 reported quadratic");
    try {
        WindowedZQ::build(qmt::a2(), {0, 3});
        o.require(false, "A2 ambient was built");
    } catch (const Error& e) {
        o.require(e.code() == ErrorCode::NotQuadraticTilde, std::string("A2 refused with ") + e.code_str());
    }
    if (o.pass) o.detail = "dimension doubles on both fixtures and their duals; A2 refused";
    return o;
}

}  // namespace

int main() {
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria;
    std::map<std::string, Enumeration> all;
    auto enumerated = [&]() -> const std::map<std::string, Enumeration>& {
        if (all.empty()) all = enumerations();
        return all;
    };
    criteria.push_back({"quadratic dual is an involution", criterion_1});
    criteria.push_back({"D4 dualization matches the printed relations", criterion_2});
    criteria.push_back({"A3 mutation chain and DOT slices", criterion_3});
    criteria.push_back({"mutation round trips", [&] { return criterion_4(enumerated()); }});
    criteria.push_back({"slice counts agree with the oracle", [&] { return criterion_5(enumerated()); }});
    criteria.push_back({"ambient is a 2-translation quiver", criterion_6});
    criteria.push_back({"simple projectives at movable sinks", [&] { return criterion_7(enumerated()); }});
    criteria.push_back({"duality commutes with sink mutation", [&] { return criterion_8(enumerated()); }});
    criteria.push_back({"trivial extension dimension and A2 refusal", criterion_9});

    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        auto t0 = Clock::now();
        try {
            o = criteria[k].second();
        } catch (const Error& e) {
            o.pass = false;
            o.detail = std::string(e.code_str()) + ": " + e.what();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = e.what();
        }
        failures += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k + 1 << ": " << criteria[k].first << " (" << o.detail
                  << "; " << std::fixed << std::setprecision(2) << seconds_since(t0) << " s)" << std::endl;
    }
    return failures ? 1 : 0;
}
