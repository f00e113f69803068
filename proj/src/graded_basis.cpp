#include "quivermute/graded_basis.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>

namespace qm {

namespace {
constexpr std::size_t kCandidateCap = 2'000'000;
}

int default_degree_cap() {
    if (const char* env = std::getenv("QUIVERMUTE_DEGREE_CAP")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v > 0 && v < 100000) return static_cast<int>(v);
    }
    return 32;
}

GradedBasis GradedBasis::compute(const BoundQuiver& q, int t_max) {
    GradedBasis gb;
    gb.quiver_ = std::make_shared<const BoundQuiver>(q);
    gb.build(t_max, true, false);
    return gb;
}

GradedBasis GradedBasis::full(const BoundQuiver& q, std::optional<int> cap) {
    GradedBasis gb;
    gb.quiver_ = std::make_shared<const BoundQuiver>(q);
    gb.build(cap.value_or(default_degree_cap()), true, true);
    return gb;
}

void GradedBasis::build(int t_max, bool stop_at_zero, bool overflow_if_unfinished) {
    const BoundQuiver& q = *quiver_;
    const int V = static_cast<int>(q.num_vertices());
    basis_.clear();
    index_.clear();
    blocks_.clear();
    rmul_.clear();
    complete_ = false;

    basis_.push_back({});
    blocks_.push_back(std::vector<std::vector<int>>(static_cast<std::size_t>(V) * V));
    for (int v = 0; v < V; ++v) {
        basis_[0].push_back(Path::stationary(v));
        blocks_[0][v * V + v].push_back(v);
    }
    index_.push_back({});
    for (int v = 0; v < V; ++v) index_[0][basis_[0][v]] = v;
    rmul_.push_back({});
    if (V == 0) {
        complete_ = true;
        return;
    }

    std::map<int, std::vector<const LinComb*>> rel_by_target;
    for (const auto& r : q.relations()) rel_by_target[r.front().path.target].push_back(&r);

    for (int t = 1; t <= t_max; ++t) {
        const auto& prev = basis_[t - 1];
        struct Cand {
            Path path;
            int b;
            int arrow;
        };
        std::map<std::pair<int, int>, std::vector<Cand>> cands;
        std::size_t count = 0;
        for (int b = 0; b < static_cast<int>(prev.size()); ++b) {
            for (int a : q.out_arrows(prev[b].target)) {
                Path p = prev[b];
                p.arrows.push_back(a);
                p.target = q.tgt(a);
                cands[{p.source, p.target}].push_back({std::move(p), b, a});
                if (++count > kCandidateCap)
                    throw Error(ErrorCode::DegreeOverflow,
                                "more than " + std::to_string(kCandidateCap) + " candidate paths in degree " +
                                    std::to_string(t));
            }
        }

        std::vector<std::tuple<int, int, Path>> chosen;
        // Per candidate column: either basis (index into chosen) or reduction row.
        struct ColInfo {
            int chosen = -1;
            SparseVec reduce_to;  // in chosen indices, for pivots
        };
        std::vector<std::pair<std::vector<Cand>*, std::vector<ColInfo>>> results;
        std::vector<std::pair<std::pair<int, int>, std::size_t>> result_keys;

        for (auto& [key, list] : cands) {
            std::sort(list.begin(), list.end(), [](const Cand& x, const Cand& y) { return x.path < y.path; });
            std::map<std::pair<int, int>, int> col;
            for (int c = 0; c < static_cast<int>(list.size()); ++c) col[{list[c].b, list[c].arrow}] = c;
            const int i = key.first, j = key.second;
            std::vector<Vec> gens;
            auto it = rel_by_target.find(j);
            if (it != rel_by_target.end()) {
                for (const LinComb* r : it->second) {
                    const int s = static_cast<int>(r->front().path.length());
                    if (s > t) continue;
                    const int k = r->front().path.source;
                    for (int u : block(i, k, t - s)) {
                        Element ue = basis_element(t - s, u);
                        Vec g(list.size());
                        bool nz = false;
                        for (const auto& term : *r) {
                            Path head{term.path.source, term.path.source, {}};
                            head.arrows.assign(term.path.arrows.begin(), term.path.arrows.end() - 1);
                            if (!head.arrows.empty()) head.target = q.tgt(head.arrows.back());
                            Element x = mul_path(ue, head);
                            for (const auto& [bidx, val] : x.coeffs) {
                                g[col.at({bidx, term.path.arrows.back()})] += term.coeff * val;
                                nz = true;
                            }
                        }
                        if (nz) gens.push_back(std::move(g));
                    }
                }
            }
            std::vector<ColInfo> info(list.size());
            if (gens.empty()) {
                for (std::size_t c = 0; c < list.size(); ++c) {
                    info[c].chosen = static_cast<int>(chosen.size());
                    chosen.emplace_back(i, j, list[c].path);
                }
            } else {
                Rref rr = rref(Matrix::from_rows(gens, list.size()));
                std::vector<int> pivot_row(list.size(), -1);
                for (std::size_t k = 0; k < rr.rank; ++k) pivot_row[rr.pivots[k]] = static_cast<int>(k);
                for (std::size_t c = 0; c < list.size(); ++c) {
                    if (pivot_row[c] >= 0) continue;
                    info[c].chosen = static_cast<int>(chosen.size());
                    chosen.emplace_back(i, j, list[c].path);
                }
                for (std::size_t c = 0; c < list.size(); ++c) {
                    if (pivot_row[c] < 0) continue;
                    for (std::size_t c2 = c + 1; c2 < list.size(); ++c2) {
                        if (pivot_row[c2] >= 0) continue;
                        const Rational& v = rr.reduced.at(pivot_row[c], c2);
                        if (v != 0) info[c].reduce_to[info[c2].chosen] = -v;
                    }
                }
            }
            results.push_back({&list, std::move(info)});
        }

        // Global order: (source, target, path); chosen is already grouped by block in map order.
        std::vector<int> order(chosen.size());
        for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
        std::sort(order.begin(), order.end(), [&](int x, int y) { return chosen[x] < chosen[y]; });
        std::vector<int> remap(chosen.size());
        for (std::size_t k = 0; k < order.size(); ++k) remap[order[k]] = static_cast<int>(k);

        std::vector<Path> level;
        for (int k : order) level.push_back(std::get<2>(chosen[k]));
        std::vector<std::vector<int>> blk(static_cast<std::size_t>(V) * V);
        std::map<Path, int> idx;
        for (int k = 0; k < static_cast<int>(level.size()); ++k) {
            blk[level[k].source * V + level[k].target].push_back(k);
            idx[level[k]] = k;
        }
        std::vector<std::map<int, SparseVec>> rm(prev.size());
        for (auto& [list, info] : results) {
            for (std::size_t c = 0; c < list->size(); ++c) {
                SparseVec v;
                if (info[c].chosen >= 0) {
                    v[remap[info[c].chosen]] = 1;
                } else {
                    for (const auto& [k, val] : info[c].reduce_to) v[remap[k]] = val;
                }
                rm[(*list)[c].b][(*list)[c].arrow] = std::move(v);
            }
        }

        basis_.push_back(std::move(level));
        index_.push_back(std::move(idx));
        blocks_.push_back(std::move(blk));
        rmul_.push_back(std::move(rm));
        if (basis_.back().empty() && stop_at_zero) {
            complete_ = true;
            return;
        }
    }
    if (overflow_if_unfinished)
        throw Error(ErrorCode::DegreeOverflow,
                    "algebra has nonzero degree " + std::to_string(t_max) + " (degree cap reached)");
}

int GradedBasis::top_degree() const {
    for (int t = computed_degree(); t >= 0; --t)
        if (!basis_[t].empty()) return t;
    return -1;
}

void GradedBasis::ensure_degree(int t) const {
    if (t > computed_degree() && !complete_)
        throw Error(ErrorCode::DegreeOverflow, "degree " + std::to_string(t) + " was not computed");
}

const std::vector<Path>& GradedBasis::basis(int t) const {
    static const std::vector<Path> empty;
    ensure_degree(t);
    if (t < 0 || t > computed_degree()) return empty;
    return basis_[t];
}

const std::vector<int>& GradedBasis::block(int i, int j, int t) const {
    static const std::vector<int> empty;
    ensure_degree(t);
    if (t < 0 || t > computed_degree()) return empty;
    const int V = static_cast<int>(quiver_->num_vertices());
    return blocks_[t][i * V + j];
}

std::size_t GradedBasis::total_dim() const {
    std::size_t s = 0;
    for (const auto& b : basis_) s += b.size();
    return s;
}

std::optional<int> GradedBasis::index_of(const Path& p) const {
    int t = static_cast<int>(p.length());
    if (t > computed_degree()) return std::nullopt;
    auto it = index_[t].find(p);
    if (it == index_[t].end()) return std::nullopt;
    return it->second;
}

Element GradedBasis::unit(int v) const { return Element{0, {{v, Rational(1)}}}; }

Element GradedBasis::basis_element(int t, int idx) const { return Element{t, {{idx, Rational(1)}}}; }

Element GradedBasis::mul_arrow(const Element& x, int arrow) const {
    Element out{x.degree + 1, {}};
    if (x.is_zero()) return out;
    ensure_degree(out.degree);
    if (out.degree > computed_degree()) return out;
    const auto& table = rmul_[out.degree];
    for (const auto& [b, c] : x.coeffs) {
        auto it = table[b].find(arrow);
        if (it != table[b].end()) axpy(out.coeffs, c, it->second);
    }
    return out;
}

Element GradedBasis::mul_path(const Element& x, const Path& p) const {
    if (p.arrows.empty()) {
        Element out{x.degree, {}};
        const auto& b = basis(x.degree);
        for (const auto& [k, c] : x.coeffs)
            if (b[k].target == p.source) out.coeffs[k] = c;
        return out;
    }
    Element cur = x;
    for (int a : p.arrows) {
        cur = mul_arrow(cur, a);
        if (cur.is_zero()) {
            cur.degree = x.degree + static_cast<int>(p.length());
            return cur;
        }
    }
    return cur;
}

Element GradedBasis::mul(const Element& x, const Element& y) const {
    Element out{x.degree + y.degree, {}};
    const auto& by = basis(y.degree);
    for (const auto& [k, c] : y.coeffs) {
        Element z = mul_path(x, by[k]);
        axpy(out.coeffs, c, z.coeffs);
    }
    return out;
}

Element GradedBasis::normal_form(const Path& p) const { return mul_path(unit(p.source), p); }

Element GradedBasis::normal_form(const LinComb& l) const {
    Element out{l.empty() ? 0 : static_cast<int>(l.front().path.length()), {}};
    for (const auto& t : l) axpy(out.coeffs, t.coeff, normal_form(t.path).coeffs);
    return out;
}

LinComb GradedBasis::to_lincomb(const Element& e) const {
    LinComb l;
    const auto& b = basis(e.degree);
    for (const auto& [k, c] : e.coeffs) l.push_back({c, b[k]});
    std::sort(l.begin(), l.end(), [](const Term& x, const Term& y) { return x.path < y.path; });
    return l;
}

std::vector<Path> bound_paths(const GradedBasis& gb, int max_len) {
    const BoundQuiver& q = gb.quiver();
    std::vector<Path> out;
    std::function<void(const Path&, const Element&)> rec = [&](const Path& p, const Element& e) {
        out.push_back(p);
        if (static_cast<int>(p.length()) >= max_len) return;
        for (int a : q.out_arrows(p.target)) {
            Element f = gb.mul_arrow(e, a);
            if (f.is_zero()) continue;
            Path np = p;
            np.arrows.push_back(a);
            np.target = q.tgt(a);
            rec(np, f);
        }
    };
    for (int v = 0; v < static_cast<int>(q.num_vertices()); ++v) rec(Path::stationary(v), gb.unit(v));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Path> maximal_bound_paths(const GradedBasis& gb, bool include_stationary) {
    const BoundQuiver& q = gb.quiver();
    std::vector<Path> out;
    int limit = gb.complete() ? gb.top_degree() : gb.computed_degree() - 1;
    for (const Path& p : bound_paths(gb, limit)) {
        if (p.arrows.empty()) {
            if (include_stationary && q.out_arrows(p.source).empty() && q.in_arrows(p.source).empty())
                out.push_back(p);
            continue;
        }
        Element e = gb.normal_form(p);
        bool maximal = true;
        for (int a : q.out_arrows(p.target))
            if (!gb.mul_arrow(e, a).is_zero()) maximal = false;
        for (int a : q.in_arrows(p.source)) {
            if (!maximal) break;
            Path ap{q.src(a), p.target, {a}};
            ap.arrows.insert(ap.arrows.end(), p.arrows.begin(), p.arrows.end());
            if (!gb.normal_form(ap).is_zero()) maximal = false;
        }
        if (maximal) out.push_back(p);
    }
    return out;
}

ProperGrading is_properly_graded(const BoundQuiver& q) {
    if (!q.is_acyclic()) throw Error(ErrorCode::CyclicQuiver, "quiver " + q.name() + " has an oriented cycle");
    GradedBasis gb = GradedBasis::full(q);
    auto maxp = maximal_bound_paths(gb);
    ProperGrading pg;
    if (maxp.empty()) {
        pg.proper = true;
        return pg;
    }
    auto [lo, hi] = std::minmax_element(maxp.begin(), maxp.end(),
                                        [](const Path& a, const Path& b) { return a.length() < b.length(); });
    if (lo->length() == hi->length()) {
        pg.proper = true;
        pg.n = static_cast<int>(lo->length());
    } else {
        pg.witness = {*lo, *hi};
    }
    return pg;
}

std::vector<MaxPath> max_bound_paths(const BoundQuiver& q) {
    ProperGrading pg = is_properly_graded(q);
    if (!pg.proper) {
        std::vector<std::string> w;
        for (const auto& p : pg.witness) w.push_back(q.path_str(p));
        throw Error(ErrorCode::NotTranslationQuiver, "quiver " + q.name() + " is not properly graded", w);
    }
    GradedBasis gb = GradedBasis::compute(q, pg.n);
    std::vector<MaxPath> out;
    for (const Path& p : gb.basis(pg.n)) out.push_back({p, p.source, p.target});
    return out;
}

}  // namespace qm
