#include "quivermute/mutation.hpp"

#include "quivermute/dual.hpp"
#include "quivermute/io.hpp"
#include "quivermute/isomorphism.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

namespace qm {

namespace {

int margin(const WindowedZQ& z) { return z.n() + 1; }

std::pair<int, int> level_range(const std::set<Cell>& cells) {
    int lo = cells.begin()->level, hi = lo;
    for (const Cell& c : cells) {
        lo = std::min(lo, c.level);
        hi = std::max(hi, c.level);
    }
    return {lo, hi};
}

int vertex_of(const WindowedZQ& z, const Cell& c) {
    int v = z.vertex(c.base, c.level);
    if (v < 0)
        throw Error(ErrorCode::WindowTooSmall,
                    "level " + std::to_string(c.level) + " lies outside the window of " + z.quiver().name());
    return v;
}

Cell cell_at(const WindowedZQ& z, int v) { return Cell{z.base_vertex(v), z.level(v)}; }

std::set<int> vertices_of(const WindowedZQ& z, const std::set<Cell>& cells) {
    std::set<int> out;
    for (const Cell& c : cells) out.insert(vertex_of(z, c));
    return out;
}

// Shortest path by BFS over arrows from any vertex in `from` to `to`, arrows tried in index order.
std::optional<Path> shortest_path(const BoundQuiver& q, const std::set<int>& from, int to) {
    std::vector<int> parent(q.num_vertices(), -2);
    std::deque<int> queue;
    for (int s : from) {
        parent[s] = -1;
        queue.push_back(s);
    }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        if (v == to) {
            Path p;
            p.target = to;
            int x = to;
            while (parent[x] != -1) {
                int a = parent[x];
                p.arrows.push_back(a);
                x = q.src(a);
            }
            p.source = x;
            std::reverse(p.arrows.begin(), p.arrows.end());
            return p;
        }
        for (int a : q.out_arrows(v))
            if (parent[q.tgt(a)] == -2) {
                parent[q.tgt(a)] = a;
                queue.push_back(q.tgt(a));
            }
    }
    return std::nullopt;
}

std::vector<char> reach_from(const BoundQuiver& q, const std::set<int>& sources, bool forward) {
    std::vector<char> seen(q.num_vertices(), 0);
    std::vector<int> stack;
    auto push_next = [&](int v) {
        const auto& arrows = forward ? q.out_arrows(v) : q.in_arrows(v);
        for (int a : arrows) {
            int w = forward ? q.tgt(a) : q.src(a);
            if (!seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
        }
    };
    for (int s : sources) push_next(s);
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        push_next(v);
    }
    return seen;
}

}  // namespace

SliceEmbedding::SliceEmbedding(std::shared_ptr<const WindowedZQ> ambient, std::set<Cell> cells)
    : ambient_(std::move(ambient)), cells_(std::move(cells)) {
    if (cells_.empty()) throw Error(ErrorCode::Usage, "empty slice");
    for (const Cell& c : cells_)
        if (c.base < 0 || c.base >= static_cast<int>(ambient_->base().num_vertices()))
            throw Error(ErrorCode::UnknownReference, "base vertex index out of range");
    auto [lo, hi] = level_range(cells_);
    int m = margin(*ambient_);
    Window w = ambient_->window();
    if (w.from > lo - m || w.to < hi + m)
        ambient_ = ambient_->rewindow({std::min(w.from, lo - m), std::max(w.to, hi + m)});
    convex_ = is_convex(ambient_->quiver(), subset()).convex;
    std::map<int, int> count;
    for (const Cell& c : cells_) ++count[c.base];
    transversal_ = count.size() == ambient_->base().num_vertices();
    for (const auto& [b, k] : count) transversal_ = transversal_ && k == 1;
}

SliceEmbedding SliceEmbedding::from_labels(std::shared_ptr<const WindowedZQ> ambient,
                                           const std::vector<std::string>& labels) {
    std::set<Cell> cells;
    for (const auto& l : labels) {
        std::optional<int> lvl = label_level(l);
        std::optional<int> b = ambient->base().find_vertex(label_base(l));
        if (!lvl || !b) throw Error(ErrorCode::UnknownReference, "no ambient vertex " + l, {l});
        cells.insert(Cell{*b, *lvl});
    }
    return SliceEmbedding(std::move(ambient), std::move(cells));
}

SliceEmbedding SliceEmbedding::base_copy(std::shared_ptr<const WindowedZQ> ambient, int level) {
    if (!ambient->in_window(level))
        throw Error(ErrorCode::WindowTooSmall, "level " + std::to_string(level) + " is outside the window");
    std::set<Cell> cells;
    for (std::size_t b = 0; b < ambient->base().num_vertices(); ++b) cells.insert(Cell{static_cast<int>(b), level});
    return SliceEmbedding(std::move(ambient), std::move(cells));
}

std::set<int> SliceEmbedding::subset() const { return vertices_of(*ambient_, cells_); }

std::string SliceEmbedding::label(const Cell& c) const {
    return WindowedZQ::label(ambient_->base().vertices()[c.base], c.level);
}

std::vector<std::string> SliceEmbedding::labels() const {
    std::vector<std::string> out;
    for (const Cell& c : cells_) out.push_back(label(c));
    std::sort(out.begin(), out.end(), natural_less);
    return out;
}

std::optional<Cell> SliceEmbedding::cell_of(const std::string& l) const {
    std::optional<int> lvl = label_level(l);
    std::optional<int> b = ambient_->base().find_vertex(label_base(l));
    if (!lvl || !b) return std::nullopt;
    return Cell{*b, *lvl};
}

int SliceEmbedding::min_level() const { return level_range(cells_).first; }
int SliceEmbedding::max_level() const { return level_range(cells_).second; }

SliceEmbedding SliceEmbedding::shifted(int k) const {
    if (k == 0) return *this;
    std::set<Cell> moved;
    for (const Cell& c : cells_) moved.insert(Cell{c.base, c.level + k});
    return SliceEmbedding(ambient_, std::move(moved));
}

std::shared_ptr<const WindowedZQ> working_ambient(const SliceEmbedding& s) {
    int m = margin(s.ambient());
    return s.ambient().rewindow({s.min_level() - m, s.max_level() + m});
}

ConvexityResult is_convex(const BoundQuiver& q, const std::set<int>& subset) {
    if (subset.empty()) throw Error(ErrorCode::Usage, "empty subset");
    std::vector<char> after = reach_from(q, subset, true);
    std::vector<char> before = reach_from(q, subset, false);
    for (std::size_t z = 0; z < q.num_vertices(); ++z) {
        int zi = static_cast<int>(z);
        if (subset.count(zi) || !after[z] || !before[z]) continue;
        ConvexityResult r;
        r.convex = false;
        Path head = *shortest_path(q, subset, zi);
        std::optional<Path> tail;
        for (int y : subset) {
            std::optional<Path> p = shortest_path(q, {zi}, y);
            if (p && (!tail || p->length() < tail->length())) tail = p;
        }
        head.target = tail->target;
        head.arrows.insert(head.arrows.end(), tail->arrows.begin(), tail->arrows.end());
        r.witness = head;
        return r;
    }
    return {};
}

ConvexityResult is_convex(const SliceEmbedding& s) { return is_convex(s.ambient().quiver(), s.subset()); }

BoundQuiver truncation(const SliceEmbedding& s) {
    const WindowedZQ& z = s.ambient();
    const BoundQuiver& q = z.quiver();
    ConvexityResult cr = is_convex(s);
    if (!cr.convex)
        throw Error(ErrorCode::ConvexityRequired, "slice is not convex", {q.path_str(*cr.witness)});
    std::set<int> sub = s.subset();
    QuiverData d;
    d.name = z.base().name() + "-slice";
    for (int v : sub) d.vertices.push_back(q.vertices()[v]);
    std::set<int> arrows;
    for (std::size_t a = 0; a < q.num_arrows(); ++a)
        if (sub.count(q.src(a)) && sub.count(q.tgt(a))) {
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

BoundQuiver dual_truncation(const SliceEmbedding& s) { return quadratic_dual(truncation(s)); }

TruncationReport truncation_algebras_agree(const SliceEmbedding& s) {
    BoundQuiver t = truncation(s);
    const WindowedZQ& z = s.ambient();
    const BoundQuiver& q = z.quiver();
    const GradedBasis& ga = z.algebra();
    GradedBasis gt = GradedBasis::full(t);
    std::vector<int> vmap(t.num_vertices()), amap(t.num_arrows());
    for (std::size_t v = 0; v < t.num_vertices(); ++v) vmap[v] = q.vertex_index(t.vertices()[v]);
    for (std::size_t a = 0; a < t.num_arrows(); ++a) amap[a] = q.arrow_index(t.arrows()[a].id);
    auto carry = [&](const Path& p) {
        Path r{vmap[p.source], vmap[p.target], {}};
        for (int a : p.arrows) r.arrows.push_back(amap[a]);
        return r;
    };
    // Ambient coordinates of a truncation element of degree d.
    auto image = [&](const Element& e) {
        SparseVec out;
        for (const auto& [idx, c] : e.coeffs) axpy(out, c, ga.normal_form(carry(gt.basis(e.degree)[idx])).coeffs);
        return out;
    };

    TruncationReport rep;
    rep.dims_agree = true;
    rep.products_agree = true;
    rep.dim = gt.total_dim();
    int top = std::max(gt.top_degree(), ga.top_degree());
    for (int d = 0; d <= top && rep.dims_agree; ++d)
        for (std::size_t i = 0; i < t.num_vertices() && rep.dims_agree; ++i)
            for (std::size_t j = 0; j < t.num_vertices(); ++j) {
                int dt = d <= gt.computed_degree() ? gt.dim(i, j, d) : 0;
                int da = d <= ga.computed_degree() ? ga.dim(vmap[i], vmap[j], d) : 0;
                std::size_t rank = 0;
                if (dt > 0) {
                    std::vector<Vec> rows;
                    for (int idx : gt.block(i, j, d)) {
                        Vec row(ga.dim_degree(d));
                        for (const auto& [k, c] : ga.normal_form(carry(gt.basis(d)[idx])).coeffs) row[k] = c;
                        rows.push_back(row);
                    }
                    rank = rank_of(rows, ga.dim_degree(d));
                }
                if (dt != da || static_cast<int>(rank) != dt) {
                    rep.dims_agree = false;
                    rep.witness = "block " + t.vertices()[i] + " -> " + t.vertices()[j] + " degree " + std::to_string(d) +
                                  ": " + std::to_string(dt) + " in the truncation, " + std::to_string(da) + " in the ambient";
                    break;
                }
            }
    for (int d = 0; d < gt.top_degree() + 1 && rep.products_agree; ++d)
        for (std::size_t idx = 0; idx < gt.basis(d).size() && rep.products_agree; ++idx) {
            const Path& p = gt.basis(d)[idx];
            for (int a : t.out_arrows(p.target)) {
                Element here = gt.mul_arrow(gt.basis_element(d, static_cast<int>(idx)), a);
                SparseVec lhs = here.is_zero() ? SparseVec{} : image(here);
                Path ext = carry(p);
                ext.arrows.push_back(amap[a]);
                ext.target = vmap[t.tgt(a)];
                SparseVec rhs = ga.normal_form(ext).coeffs;
                if (lhs != rhs) {
                    rep.products_agree = false;
                    rep.witness = "product " + t.path_str(p) + " * " + t.arrows()[a].id;
                    break;
                }
            }
        }
    return rep;
}

const char* dir_name(MutationDir d) { return d == MutationDir::Minus ? "minus" : "plus"; }

bool is_sink(const SliceEmbedding& s, const Cell& c) {
    const WindowedZQ& z = s.ambient();
    std::set<int> sub = s.subset();
    for (int a : z.quiver().out_arrows(vertex_of(z, c)))
        if (sub.count(z.quiver().tgt(a))) return false;
    return true;
}

bool is_source(const SliceEmbedding& s, const Cell& c) {
    const WindowedZQ& z = s.ambient();
    std::set<int> sub = s.subset();
    for (int a : z.quiver().in_arrows(vertex_of(z, c)))
        if (sub.count(z.quiver().src(a))) return false;
    return true;
}

namespace {

// Hammock vertices other than the expected replacement that lie outside the slice. Empty means
// movable, provided the replacement itself is outside.
struct Leak {
    std::vector<Cell> cells;
    bool replacement_inside = false;
    bool movable() const { return cells.empty() && !replacement_inside; }
};

Leak leakage(const WindowedZQ& z, const std::set<Cell>& cells, const Cell& c, MutationDir dir) {
    HammockDir hd = dir == MutationDir::Minus ? HammockDir::Ending : HammockDir::Starting;
    Cell repl{c.base, c.level + (dir == MutationDir::Minus ? -1 : 1)};
    Hammock h = hammock(z.algebra(), z.translation(), vertex_of(z, c), hd);
    Leak l;
    l.replacement_inside = cells.count(repl) > 0;
    for (int v : h.vertex_set()) {
        Cell x = cell_at(z, v);
        if (!cells.count(x) && !(x == repl)) l.cells.push_back(x);
    }
    return l;
}

}  // namespace

MovableReport movable_vertices(const SliceEmbedding& s) {
    auto z = working_ambient(s);
    MovableReport rep;
    for (const Cell& c : s.cells()) {
        if (leakage(*z, s.cells(), c, MutationDir::Minus).movable()) rep.forward.push_back({c, is_sink(s, c)});
        if (leakage(*z, s.cells(), c, MutationDir::Plus).movable()) rep.backward.push_back({c, is_source(s, c)});
    }
    return rep;
}

SliceEmbedding mutate(const SliceEmbedding& s, const Cell& at, MutationDir dir, bool extremal_only) {
    std::string l = s.label(at);
    if (!s.cells().count(at)) throw Error(ErrorCode::UnknownReference, l + " is not in the slice", {l});
    bool extremal = dir == MutationDir::Minus ? is_sink(s, at) : is_source(s, at);
    if (extremal_only && !extremal)
        throw Error(ErrorCode::NotMovable,
                    l + " is not a " + (dir == MutationDir::Minus ? "sink" : "source") + " of the slice", {l});
    auto z = working_ambient(s);
    Leak leak = leakage(*z, s.cells(), at, dir);
    if (!leak.movable()) {
        std::vector<std::string> w;
        for (const Cell& c : leak.cells) w.push_back(s.label(c));
        std::string why = leak.replacement_inside ? "its translate is already in the slice"
                                                  : "hammock leaves the slice at " + std::to_string(w.size()) + " vertices";
        throw Error(ErrorCode::NotMovable, l + " is not " + (dir == MutationDir::Minus ? "forward" : "backward") +
                                               " movable: " + why, w);
    }
    std::set<Cell> cells = s.cells();
    cells.erase(at);
    cells.insert(Cell{at.base, at.level + (dir == MutationDir::Minus ? -1 : 1)});
    SliceEmbedding out(s.ambient_ptr(), std::move(cells));
    if (!extremal_only && !out.convex()) {
        ConvexityResult cr = is_convex(out);
        throw Error(ErrorCode::ConvexityRequired, "mutation at " + l + " leaves a non-convex subset",
                    {out.ambient().quiver().path_str(*cr.witness)});
    }
    return out;
}

SliceEmbedding mutate(const SliceEmbedding& s, const std::string& label, MutationDir dir) {
    std::optional<Cell> c = s.cell_of(label);
    if (!c) throw Error(ErrorCode::UnknownReference, "no ambient vertex " + label, {label});
    return mutate(s, *c, dir);
}

CompletenessReport is_complete_slice(const SliceEmbedding& s) {
    Window w = s.ambient().window();
    if (w.from >= s.min_level() || w.to <= s.max_level())
        throw Error(ErrorCode::WindowTooSmall, "window does not extend past the slice");
    CompletenessReport rep;
    rep.convexity = is_convex(s);
    std::map<int, int> count;
    for (const Cell& c : s.cells()) ++count[c.base];
    for (std::size_t b = 0; b < s.ambient().base().num_vertices(); ++b) {
        int k = count.count(static_cast<int>(b)) ? count[static_cast<int>(b)] : 0;
        if (k == 0) rep.missing_orbits.push_back(static_cast<int>(b));
        if (k > 1) rep.repeated_orbits.push_back(static_cast<int>(b));
    }
    rep.complete = rep.convexity.convex && rep.missing_orbits.empty() && rep.repeated_orbits.empty();
    return rep;
}

std::vector<int> classify_slices(const std::vector<SliceEmbedding>& slices, std::vector<BoundQuiver>* reps) {
    std::vector<BoundQuiver> local;
    std::vector<BoundQuiver>& classes = reps ? *reps : local;
    classes.clear();
    std::vector<std::string> keys;
    std::vector<int> out;
    for (const auto& s : slices) {
        BoundQuiver g = dual_truncation(s);
        std::string key = invariant_key(g);
        int found = -1;
        for (std::size_t c = 0; c < classes.size() && found < 0; ++c)
            if (keys[c] == key && quiver_isomorphism(g, classes[c])) found = static_cast<int>(c);
        if (found < 0) {
            found = static_cast<int>(classes.size());
            classes.push_back(std::move(g));
            keys.push_back(key);
        }
        out.push_back(found);
    }
    return out;
}

Enumeration enumerate_slices(const SliceEmbedding& start) {
    CompletenessReport cr = is_complete_slice(start);
    if (!cr.complete) throw Error(ErrorCode::ConvexityRequired, "start is not a complete slice");
    Enumeration en;
    std::map<std::set<Cell>, int> seen;
    auto add = [&](const SliceEmbedding& s) {
        SliceEmbedding norm = s.normalized();
        auto [it, fresh] = seen.emplace(norm.cells(), static_cast<int>(en.nodes.size()));
        if (fresh) en.nodes.push_back({norm, -1});
        return it->second;
    };
    add(start);
    for (std::size_t i = 0; i < en.nodes.size(); ++i) {
        SliceEmbedding cur = en.nodes[i].slice;
        for (const Cell& c : cur.cells()) {
            if (!is_sink(cur, c)) continue;
            std::optional<SliceEmbedding> next;
            try {
                next = mutate(cur, c, MutationDir::Minus);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::NotMovable) throw;
                continue;
            }
            int j = add(*next);
            en.edges.push_back({static_cast<int>(i), j, c});
        }
    }
    std::vector<SliceEmbedding> slices;
    for (const auto& n : en.nodes) slices.push_back(n.slice);
    std::vector<BoundQuiver> reps;
    std::vector<int> cls = classify_slices(slices, &reps);
    for (std::size_t c = 0; c < reps.size(); ++c) en.classes.push_back({-1, {}, reps[c]});
    for (std::size_t i = 0; i < cls.size(); ++i) {
        en.nodes[i].cls = cls[i];
        SliceClass& k = en.classes[cls[i]];
        if (k.representative < 0) k.representative = static_cast<int>(i);
        k.members.push_back(static_cast<int>(i));
    }
    for (const auto& e : en.edges) en.class_edges.insert({en.nodes[e.from].cls, en.nodes[e.to].cls});
    return en;
}

std::vector<SliceEmbedding> brute_force_slices(std::shared_ptr<const WindowedZQ> ambient, int width) {
    if (width < 1) throw Error(ErrorCode::WindowTooSmall, "width must be positive");
    auto z = ambient->rewindow({0, width - 1});
    const BoundQuiver& q = z->quiver();
    const int nv = static_cast<int>(q.num_vertices());
    const int nb = static_cast<int>(z->base().num_vertices());
    std::vector<std::vector<char>> fwd(nv), bwd(nv);
    for (int v = 0; v < nv; ++v) {
        fwd[v] = reach_from(q, {v}, true);
        bwd[v] = reach_from(q, {v}, false);
    }
    std::vector<std::set<Cell>> found;
    std::vector<int> lvl(nb, -1);

    // Adds every vertex between two chosen ones; false on a clash with an orbit already placed.
    auto close = [&](std::vector<int>& L) {
        for (bool changed = true; changed;) {
            changed = false;
            std::vector<char> after(nv, 0), before(nv, 0);
            for (int b = 0; b < nb; ++b) {
                if (L[b] < 0) continue;
                int v = z->vertex(b, L[b]);
                for (int w = 0; w < nv; ++w) {
                    after[w] |= fwd[v][w];
                    before[w] |= bwd[v][w];
                }
            }
            for (int w = 0; w < nv; ++w) {
                if (!after[w] || !before[w]) continue;
                int b = z->base_vertex(w), l = z->level(w);
                if (L[b] == l) continue;
                if (L[b] >= 0) return false;
                L[b] = l;
                changed = true;
            }
        }
        return true;
    };
    std::function<void(std::vector<int>&)> search = [&](std::vector<int>& L) {
        int b = static_cast<int>(std::find(L.begin(), L.end(), -1) - L.begin());
        if (b == nb) {
            if (*std::min_element(L.begin(), L.end()) != 0) return;
            std::set<Cell> cells;
            for (int x = 0; x < nb; ++x) cells.insert(Cell{x, L[x]});
            found.push_back(std::move(cells));
            return;
        }
        for (int l = 0; l < width; ++l) {
            std::vector<int> next = L;
            next[b] = l;
            if (close(next)) search(next);
        }
    };
    search(lvl);
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    std::vector<SliceEmbedding> out;
    for (auto& cells : found) {
        SliceEmbedding s(ambient, std::move(cells));
        if (is_complete_slice(s).complete) out.push_back(std::move(s));
    }
    return out;
}

std::vector<MutationStep> mutation_path(const SliceEmbedding& a, const SliceEmbedding& b) {
    if (!a.ambient().base().same_structure(b.ambient().base()))
        throw Error(ErrorCode::NotReachable, "slices live in different ambients");
    if (!is_complete_slice(a).complete || !is_complete_slice(b).complete)
        throw Error(ErrorCode::NotReachable, "both slices must be complete");
    int lo = std::min(a.min_level(), b.min_level()) - 1;
    int hi = std::max(a.max_level(), b.max_level()) + 1;
    int m = margin(a.ambient());
    auto z = a.ambient().rewindow({lo - m, hi + m});
    std::map<std::set<Cell>, std::pair<std::set<Cell>, MutationStep>> parent;
    std::deque<std::set<Cell>> queue{a.cells()};
    parent.emplace(a.cells(), std::make_pair(std::set<Cell>{}, MutationStep{}));
    while (!queue.empty()) {
        std::set<Cell> cur = queue.front();
        queue.pop_front();
        if (cur == b.cells()) {
            std::vector<MutationStep> steps;
            for (std::set<Cell> x = cur; x != a.cells(); x = parent.at(x).first) steps.push_back(parent.at(x).second);
            std::reverse(steps.begin(), steps.end());
            return steps;
        }
        SliceEmbedding s(z, cur);
        for (const Cell& c : cur)
            for (MutationDir d : {MutationDir::Minus, MutationDir::Plus}) {
                int nl = c.level + (d == MutationDir::Minus ? -1 : 1);
                if (nl < lo || nl > hi) continue;
                if (d == MutationDir::Minus ? !is_sink(s, c) : !is_source(s, c)) continue;
                std::optional<SliceEmbedding> next;
                try {
                    next = mutate(s, c, d);
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::NotMovable) throw;
                    continue;
                }
                if (parent.emplace(next->cells(), std::make_pair(cur, MutationStep{c, d})).second)
                    queue.push_back(next->cells());
            }
    }
    throw Error(ErrorCode::NotReachable, "no mutation sequence between the slices");
}

TiltReport tau_tilt(const SliceEmbedding& s, const Cell& at, MutationDir dir) {
    TiltReport rep;
    rep.dir = dir;
    rep.pivot = at;
    rep.replacement = Cell{at.base, at.level + (dir == MutationDir::Minus ? -1 : 1)};
    rep.result = mutate(s, at, dir, false);
    rep.is_n_apr = dir == MutationDir::Minus ? is_sink(s, at) : is_source(s, at);
    for (const Cell& c : s.cells())
        if (!(c == at)) rep.kept.push_back(c);

    auto z = working_ambient(rep.result);
    const Cell& later = dir == MutationDir::Minus ? at : rep.replacement;
    KoszulProfile kp = koszul_profile(z->algebra(), z->translation(), vertex_of(*z, later));
    auto cells_of = [&](const std::vector<std::pair<int, int>>& terms) {
        std::vector<std::pair<Cell, int>> out;
        for (const auto& [v, mu] : terms) out.push_back({cell_at(*z, v), mu});
        return out;
    };
    rep.presentation_1 = cells_of(kp.terms.at(1));
    rep.presentation_2 = cells_of(kp.terms.at(2));

    rep.result_dual = dual_truncation(rep.result);
    GradedBasis g = GradedBasis::full(rep.result_dual);
    int r = rep.result_dual.vertex_index(rep.result.label(rep.replacement));
    for (const Cell& c : rep.result.cells()) {
        int j = rep.result_dual.vertex_index(rep.result.label(c));
        int d = 0;
        for (int t = 0; t <= g.top_degree(); ++t) d += dir == MutationDir::Minus ? g.dim(r, j, t) : g.dim(j, r, t);
        rep.dimension_vector.push_back({c, d});
    }
    return rep;
}

}  // namespace qm
