#include "quivermute/translation.hpp"

#include "quivermute/io.hpp"

#include <algorithm>
#include <sstream>

namespace qm {

std::optional<int> TranslationData::tau_of(int v) const {
    auto it = tau.find(v);
    if (it == tau.end()) return std::nullopt;
    return it->second;
}

std::optional<int> TranslationData::tau_inv(int v) const {
    for (const auto& [a, b] : tau)
        if (b == v) return a;
    return std::nullopt;
}

TranslationSpec TranslationData::to_spec(const BoundQuiver& q) const {
    TranslationSpec s;
    s.n = n;
    for (const auto& [a, b] : tau) s.tau[q.vertices()[a]] = q.vertices()[b];
    return s;
}

namespace {

struct MaxInfo {
    std::vector<Path> used;
    std::set<int> clipped_in, clipped_out;
};

// Window-maximal paths that start on the lowest level or end on the highest one may be
// truncations of longer paths outside the window; they are set aside and their endpoints clipped.
MaxInfo collect_maximal(const GradedBasis& gb) {
    const BoundQuiver& q = gb.quiver();
    MaxInfo info;
    std::optional<Window> w = q.window();
    std::vector<std::optional<int>> lvl(q.num_vertices());
    if (w)
        for (std::size_t v = 0; v < q.num_vertices(); ++v) lvl[v] = label_level(q.vertices()[v]);
    auto at = [&](int v, int L) { return w && lvl[v] && *lvl[v] == L; };
    if (w)
        for (std::size_t v = 0; v < q.num_vertices(); ++v) {
            if (at(v, w->from)) info.clipped_in.insert(v);
            if (at(v, w->to)) info.clipped_out.insert(v);
        }
    for (Path& p : maximal_bound_paths(gb, false)) {
        if (w && (at(p.source, w->from) || at(p.target, w->to))) {
            info.clipped_in.insert(p.target);
            info.clipped_out.insert(p.source);
            continue;
        }
        info.used.push_back(std::move(p));
    }
    return info;
}

[[noreturn]] void not_ntq(const std::string& msg, std::vector<std::string> witness) {
    throw Error(ErrorCode::NotTranslationQuiver, msg, std::move(witness));
}

}  // namespace

TranslationData detect_translation(const GradedBasis& gb) {
    const BoundQuiver& q = gb.quiver();
    if (!q.is_acyclic()) throw Error(ErrorCode::CyclicQuiver, "quiver has an oriented cycle");
    MaxInfo info = collect_maximal(gb);
    TranslationData td;
    td.clipped.insert(info.clipped_in.begin(), info.clipped_in.end());
    td.clipped.insert(info.clipped_out.begin(), info.clipped_out.end());

    const Path* first = nullptr;
    for (const Path& p : info.used) {
        if (!first) {
            first = &p;
        } else if (p.length() != first->length()) {
            not_ntq("maximal bound paths of different lengths", {q.path_str(*first), q.path_str(p)});
        }
    }
    td.n = first ? static_cast<int>(first->length()) - 1 : 0;

    std::map<int, const Path*> into;
    std::set<int> has_out;
    for (const Path& p : info.used) {
        has_out.insert(p.source);
        auto [it, fresh] = into.emplace(p.target, &p);
        if (!fresh && it->second->source != p.source)
            not_ntq("maximal bound paths ending at " + q.vertices()[p.target] + " start at different vertices",
                    {q.path_str(*it->second), q.path_str(p)});
    }
    for (const auto& [v, p] : into) {
        if (info.clipped_in.count(v)) continue;
        if (gb.dim(p->source, v, td.n + 1) > 1) {
            std::vector<std::string> wit;
            for (int idx : gb.block(p->source, v, td.n + 1)) wit.push_back(q.path_str(gb.basis(td.n + 1)[idx]));
            not_ntq("linearly independent maximal bound paths " + q.vertices()[p->source] + " -> " + q.vertices()[v],
                    wit);
        }
        td.tau[v] = p->source;
    }
    for (std::size_t v = 0; v < q.num_vertices(); ++v) {
        int iv = static_cast<int>(v);
        if (!info.clipped_in.count(iv) && !into.count(iv)) td.projective.insert(iv);
        if (!info.clipped_out.count(iv) && !has_out.count(iv)) td.injective.insert(iv);
    }
    return td;
}

TranslationData detect_translation(const BoundQuiver& q) {
    if (!q.is_acyclic()) throw Error(ErrorCode::CyclicQuiver, "quiver has an oriented cycle");
    return detect_translation(GradedBasis::full(q));
}

const char* status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::Indeterminate: return "indeterminate";
    }
    return "?";
}

bool ConditionReport::holds(int condition) const {
    return count(condition, CheckStatus::Fail) == 0;
}

std::size_t ConditionReport::count(int condition, CheckStatus s) const {
    return static_cast<std::size_t>(std::count_if(items.begin(), items.end(), [&](const ConditionItem& it) {
        return it.condition == condition && it.status == s;
    }));
}

ConditionReport verify_n_translation(const GradedBasis& gb, const TranslationData& td) {
    const BoundQuiver& q = gb.quiver();
    const auto& V = q.vertices();
    MaxInfo info = collect_maximal(gb);
    std::map<int, std::vector<const Path*>> into;
    for (const Path& p : info.used) into[p.target].push_back(&p);
    const int top = td.n + 1;
    if (!gb.complete() && gb.computed_degree() < top)
        throw Error(ErrorCode::DegreeOverflow, "algebra not computed up to degree " + std::to_string(top));

    ConditionReport rep;
    for (std::size_t vi = 0; vi < q.num_vertices(); ++vi) {
        int v = static_cast<int>(vi);
        if (info.clipped_in.count(v) || td.clipped.count(v)) {
            for (int c = 1; c <= 3; ++c)
                rep.items.push_back({c, v, CheckStatus::Indeterminate, "window-clipped"});
            continue;
        }
        std::optional<int> tv = td.tau_of(v);

        ConditionItem c1{1, v, CheckStatus::Pass, ""};
        for (const Path* p : into[v]) {
            if (static_cast<int>(p->length()) != top) {
                c1 = {1, v, CheckStatus::Fail, "maximal path " + q.path_str(*p) + " has length " +
                                                   std::to_string(p->length())};
                break;
            }
            if (!tv || *tv != p->source) {
                c1 = {1, v, CheckStatus::Fail, "maximal path " + q.path_str(*p) + " does not start at tau(" + V[v] + ")"};
                break;
            }
        }
        if (c1.status == CheckStatus::Pass && tv && into[v].empty())
            c1 = {1, v, CheckStatus::Fail, "no maximal path from tau(" + V[v] + ")"};
        rep.items.push_back(c1);

        if (!tv) {
            rep.items.push_back({2, v, CheckStatus::Pass, "projective"});
            rep.items.push_back({3, v, CheckStatus::Pass, "projective"});
            continue;
        }
        int d = top <= gb.computed_degree() ? gb.dim(*tv, v, top) : 0;
        if (d != 1) {
            rep.items.push_back({2, v, CheckStatus::Fail,
                                 "dim e_" + V[v] + " L_" + std::to_string(top) + " e_" + V[*tv] + " = " + std::to_string(d)});
            rep.items.push_back({3, v, CheckStatus::Indeterminate, "condition 2 failed"});
            continue;
        }
        rep.items.push_back({2, v, CheckStatus::Pass, ""});
        int top_idx = gb.block(*tv, v, top)[0];

        ConditionItem c3{3, v, CheckStatus::Pass, ""};
        for (int t = 0; t <= top && c3.status == CheckStatus::Pass; ++t) {
            for (std::size_t ji = 0; ji < q.num_vertices(); ++ji) {
                int j = static_cast<int>(ji);
                const auto& left = gb.block(j, v, t);           // paths j -> v
                const auto& right = gb.block(*tv, j, top - t);  // paths tau v -> j
                if (left.empty() && right.empty()) continue;
                Matrix m(left.size(), right.size());
                for (std::size_t a = 0; a < left.size(); ++a) {
                    Element x = gb.basis_element(t, left[a]);
                    for (std::size_t b = 0; b < right.size(); ++b) {
                        Element y = gb.basis_element(top - t, right[b]);
                        Element prod = gb.mul(y, x);
                        auto it = prod.coeffs.find(top_idx);
                        if (it != prod.coeffs.end()) m.at(a, b) = it->second;
                    }
                }
                std::size_t r = left.empty() || right.empty() ? 0 : rref(m).rank;
                if (left.size() != right.size() || r != left.size()) {
                    std::ostringstream os;
                    os << "pairing at (" << V[j] << ", " << t << ") is " << left.size() << "x" << right.size()
                       << " of rank " << r;
                    c3 = {3, v, CheckStatus::Fail, os.str()};
                    break;
                }
            }
        }
        rep.items.push_back(c3);
    }
    return rep;
}

std::set<int> Hammock::vertex_set() const {
    std::set<int> s;
    for (const auto& e : entries) s.insert(e.vertex);
    return s;
}

int Hammock::mu(int vertex, int distance) const {
    for (const auto& e : entries)
        if (e.vertex == vertex && e.distance == distance) return e.mu;
    return 0;
}

Hammock hammock(const GradedBasis& gb, const TranslationData& td, int center, HammockDir dir) {
    const BoundQuiver& q = gb.quiver();
    const std::string& c = q.vertices().at(center);
    bool ending = dir == HammockDir::Ending;
    if (td.clipped.count(center))
        throw Error(ErrorCode::WindowClipped, "hammock at " + c + " leaves the window", {c});
    if (ending ? !td.tau_of(center) : !td.tau_inv(center))
        throw Error(ErrorCode::UndefinedTranslate,
                    std::string(ending ? "tau" : "tau^-1") + " is undefined at " + c, {c});
    const int top = td.n + 1;
    if (!gb.complete() && gb.computed_degree() < top)
        throw Error(ErrorCode::DegreeOverflow, "algebra not computed up to degree " + std::to_string(top));

    Hammock h;
    h.center = center;
    h.dir = dir;
    std::vector<std::vector<int>> at(top + 1);
    for (int t = 0; t <= top && t <= gb.computed_degree(); ++t)
        for (std::size_t j = 0; j < q.num_vertices(); ++j) {
            int jj = static_cast<int>(j);
            int mu = ending ? gb.dim(jj, center, t) : gb.dim(center, jj, t);
            if (mu > 0) {
                h.entries.push_back({jj, t, mu});
                at[t].push_back(jj);
            }
        }
    for (int t = 0; t < top; ++t) {
        for (int k : at[t]) {
            // ending: arrows j -> k with k at distance t; starting: arrows k -> j.
            const auto& arrows = ending ? q.in_arrows(k) : q.out_arrows(k);
            for (int a : arrows) {
                bool nonzero = false;
                const auto& blk = ending ? gb.block(k, center, t) : gb.block(center, k, t);
                for (int idx : blk) {
                    Element x = gb.basis_element(t, idx);
                    Element y = ending ? gb.mul(gb.normal_form(Path{q.src(a), k, {a}}), x) : gb.mul_arrow(x, a);
                    if (!y.is_zero()) {
                        nonzero = true;
                        break;
                    }
                }
                if (nonzero) h.arrows.push_back({a, t});
            }
        }
    }
    std::sort(h.arrows.begin(), h.arrows.end(),
              [](const HammockArrow& x, const HammockArrow& y) { return std::tie(x.distance, x.arrow) < std::tie(y.distance, y.arrow); });
    return h;
}

KoszulProfile koszul_profile(const GradedBasis& gb, const TranslationData& td, int i) {
    Hammock h = hammock(gb, td, i, HammockDir::Ending);
    KoszulProfile k;
    k.center = i;
    const int top = td.n + 1;
    k.terms.resize(top + 1);
    for (const auto& e : h.entries) k.terms[top - e.distance].push_back({e.vertex, e.mu});
    return k;
}

}  // namespace qm
