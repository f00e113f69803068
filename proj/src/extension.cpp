#include "quivermute/extension.hpp"

#include "quivermute/io.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace qm {

ReturningArrowQuiver returning_arrow_quiver(const BoundQuiver& lambda) {
    ReturningArrowQuiver out;
    ProperGrading pg = is_properly_graded(lambda);
    if (!pg.proper) {
        std::vector<std::string> w;
        for (const auto& p : pg.witness) w.push_back(lambda.path_str(p));
        throw Error(ErrorCode::NotTranslationQuiver, lambda.name() + " is not properly graded", w);
    }
    out.n = pg.n;
    out.maximal = max_bound_paths(lambda);
    std::string prefix = "ret";
    auto collides = [&](const std::string& p) {
        for (std::size_t k = 1; k <= out.maximal.size(); ++k)
            if (lambda.find_arrow(p + std::to_string(k))) return true;
        return false;
    };
    while (collides(prefix)) prefix += "_";
    QuiverData d = lambda.to_data();
    d.relations.clear();
    d.translation.reset();
    d.name = lambda.name() + "~";
    for (std::size_t k = 0; k < out.maximal.size(); ++k) {
        std::string id = prefix + std::to_string(k + 1);
        out.return_ids.push_back(id);
        d.arrows.push_back({id, lambda.vertices()[out.maximal[k].target], lambda.vertices()[out.maximal[k].source]});
    }
    out.quiver = BoundQuiver::from_data(d);
    return out;
}

TrivialExtension::TrivialExtension(const BoundQuiver& lambda) {
    ProperGrading pg = is_properly_graded(lambda);
    if (!pg.proper) throw Error(ErrorCode::NotTranslationQuiver, lambda.name() + " is not properly graded");
    n_ = pg.n;
    gb_ = std::make_shared<GradedBasis>(GradedBasis::full(lambda));
    for (int t = 0; t <= n_; ++t) {
        offset_.push_back(static_cast<int>(elems_.size()));
        const auto& b = gb_->basis(t);
        for (int k = 0; k < static_cast<int>(b.size()); ++k)
            elems_.push_back({false, t, k, b[k].source, b[k].target, t});
    }
    std::size_t base = elems_.size();
    for (std::size_t k = 0; k < base; ++k) {
        BasisElem d = elems_[k];
        d.dual = true;
        std::swap(d.source, d.target);
        d.degree = n_ + 1 - d.lambda_degree;
        elems_.push_back(d);
    }
}

std::string TrivialExtension::elem_str(int x) const {
    const auto& e = elems_[x];
    std::string s = base_quiver().path_str(gb_->basis(e.lambda_degree)[e.lambda_index]);
    return e.dual ? "(" + s + ")*" : s;
}

std::vector<int> TrivialExtension::of_degree(int d) const {
    std::vector<int> out;
    for (int x = 0; x < static_cast<int>(elems_.size()); ++x)
        if (elems_[x].degree == d) out.push_back(x);
    return out;
}

SparseVec TrivialExtension::mul(int x, int y) const {
    const BasisElem& ex = elems_[x];
    const BasisElem& ey = elems_[y];
    SparseVec out;
    if (ex.target != ey.source || (ex.dual && ey.dual)) return out;
    const GradedBasis& gb = *gb_;
    auto coeff_of = [](const Element& e, const BasisElem& b) -> Rational {
        if (e.degree != b.lambda_degree) return 0;
        auto it = e.coeffs.find(b.lambda_index);
        return it == e.coeffs.end() ? Rational(0) : it->second;
    };
    if (!ex.dual && !ey.dual) {
        Element p = gb.mul(gb.basis_element(ex.lambda_degree, ex.lambda_index),
                           gb.basis_element(ey.lambda_degree, ey.lambda_index));
        if (p.degree > n_) return out;
        for (const auto& [k, c] : p.coeffs) out[offset_[p.degree] + k] = c;
        return out;
    }
    if (!ex.dual) {
        // u . b* = sum_c coeff_b(c u) c*
        const BasisElem& u = ex;
        const BasisElem& b = ey;
        int d = b.lambda_degree - u.lambda_degree;
        if (d < 0) return out;
        Element ue = gb.basis_element(u.lambda_degree, u.lambda_index);
        // b* starts at t(b) = u.target; b runs s(b) -> t(b) and s(b) = ey.target.
        for (int c : gb.block(ey.target, u.source, d)) {
            Rational v = coeff_of(gb.mul(gb.basis_element(d, c), ue), b);
            if (v != 0) out[dual_of(offset_[d] + c)] = v;
        }
        return out;
    }
    // b* . u = sum_c coeff_b(u c) c*
    const BasisElem& b = ex;
    const BasisElem& u = ey;
    int d = b.lambda_degree - u.lambda_degree;
    if (d < 0) return out;
    Element ue = gb.basis_element(u.lambda_degree, u.lambda_index);
    // b* runs t(b) -> s(b), so t(b) = ex.source.
    for (int c : gb.block(u.target, ex.source, d)) {
        Rational v = coeff_of(gb.mul(ue, gb.basis_element(d, c)), b);
        if (v != 0) out[dual_of(offset_[d] + c)] = v;
    }
    return out;
}

SparseVec TrivialExtension::mul(const SparseVec& x, const SparseVec& y) const {
    SparseVec out;
    for (const auto& [i, a] : x)
        for (const auto& [j, b] : y) axpy(out, a * b, mul(i, j));
    return out;
}

bool TrivialExtension::check_unit(std::string* witness) const {
    for (int x = 0; x < static_cast<int>(dim()); ++x) {
        SparseVec ex{{x, Rational(1)}};
        SparseVec l = mul(index_of_lambda(0, elems_[x].source), x);
        SparseVec r = mul(x, index_of_lambda(0, elems_[x].target));
        if (l != ex || r != ex) {
            if (witness) *witness = "unit fails on " + elem_str(x);
            return false;
        }
    }
    return true;
}

bool TrivialExtension::check_associativity(std::string* witness) const {
    const int D = static_cast<int>(dim());
    std::vector<std::vector<int>> starting(base_quiver().num_vertices());
    for (int x = 0; x < D; ++x) starting[elems_[x].source].push_back(x);
    for (int x = 0; x < D; ++x)
        for (int y : starting[elems_[x].target]) {
            SparseVec xy = mul(x, y);
            for (int z : starting[elems_[y].target]) {
                SparseVec left;
                for (const auto& [k, c] : xy) axpy(left, c, mul(k, z));
                SparseVec yz = mul(y, z), right;
                for (const auto& [k, c] : yz) axpy(right, c, mul(x, k));
                if (left != right) {
                    if (witness) *witness = "(xy)z != x(yz) for " + elem_str(x) + ", " + elem_str(y) + ", " + elem_str(z);
                    return false;
                }
            }
        }
    return true;
}

bool TrivialExtension::check_grading(std::string* witness) const {
    const int D = static_cast<int>(dim());
    for (int x = 0; x < D; ++x)
        for (int y = 0; y < D; ++y)
            for (const auto& [k, c] : mul(x, y))
                if (elems_[k].degree != elems_[x].degree + elems_[y].degree) {
                    if (witness) *witness = "degree jump in " + elem_str(x) + " * " + elem_str(y);
                    return false;
                }
    return true;
}

std::vector<int> TrivialExtension::socle_dims() const {
    const int D = static_cast<int>(dim());
    std::vector<int> out;
    for (int v = 0; v < static_cast<int>(base_quiver().num_vertices()); ++v) {
        std::vector<int> cols;
        for (int x = 0; x < D; ++x)
            if (elems_[x].source == v) cols.push_back(x);
        std::vector<Vec> rows;
        for (int y = 0; y < D; ++y) {
            if (elems_[y].degree == 0) continue;
            std::map<int, Vec> block;
            for (std::size_t c = 0; c < cols.size(); ++c)
                for (const auto& [k, val] : mul(cols[c], y)) {
                    auto& row = block[k];
                    if (row.empty()) row.assign(cols.size(), Rational(0));
                    row[c] = val;
                }
            for (auto& [k, row] : block) rows.push_back(std::move(row));
        }
        out.push_back(static_cast<int>(cols.size() - rank_of(rows, cols.size())));
    }
    return out;
}

BoundQuiver TildeRelations::bound_quiver() const {
    QuiverData d = qtilde.quiver.to_data();
    auto add = [&](const std::vector<LinComb>& rels) {
        for (const auto& r : rels) {
            std::vector<RawTerm> raw;
            for (const auto& t : r) {
                RawTerm rt{t.coeff, {}};
                for (int a : t.path.arrows) rt.path.push_back(qtilde.quiver.arrows()[a].id);
                raw.push_back(std::move(rt));
            }
            d.relations.push_back(std::move(raw));
        }
    };
    add(base);
    add(mixed);
    add(top);
    return BoundQuiver::from_data(d);
}

TildeRelations tilde_relations(const TrivialExtension& te) {
    TildeRelations out;
    out.qtilde = returning_arrow_quiver(te.base_quiver());
    const BoundQuiver& qt = out.qtilde.quiver;
    const GradedBasis& gb = te.base();
    std::set<std::string> ret(out.qtilde.return_ids.begin(), out.qtilde.return_ids.end());

    std::vector<int> eval(qt.num_arrows(), -1);
    std::vector<int> is_ret(qt.num_arrows(), 0);
    for (std::size_t a = 0; a < qt.num_arrows(); ++a) {
        const Arrow& arr = qt.arrows()[a];
        if (ret.count(arr.id)) {
            is_ret[a] = 1;
            std::size_t k = std::find(out.qtilde.return_ids.begin(), out.qtilde.return_ids.end(), arr.id) -
                            out.qtilde.return_ids.begin();
            const Path& p = out.qtilde.maximal[k].path;
            eval[a] = te.dual_of(te.index_of_lambda(static_cast<int>(p.length()), *gb.index_of(p)));
        } else {
            const BoundQuiver& base = te.base_quiver();
            int ba = base.arrow_index(arr.id);
            Path p{base.src(ba), base.tgt(ba), {ba}};
            eval[a] = te.index_of_lambda(1, *gb.index_of(p));
        }
    }

    std::map<std::tuple<int, int, int>, std::vector<Path>> groups;
    for (std::size_t a = 0; a < qt.num_arrows(); ++a)
        for (int b : qt.out_arrows(qt.tgt(a))) {
            Path p{qt.src(a), qt.tgt(b), {static_cast<int>(a), b}};
            groups[{p.source, p.target, is_ret[a] + is_ret[b]}].push_back(p);
        }
    for (auto& [key, paths] : groups) {
        std::sort(paths.begin(), paths.end());
        std::map<int, Vec> rows;
        for (std::size_t c = 0; c < paths.size(); ++c)
            for (const auto& [k, v] : te.mul(eval[paths[c].arrows[0]], eval[paths[c].arrows[1]])) {
                auto& row = rows[k];
                if (row.empty()) row.assign(paths.size(), Rational(0));
                row[c] = v;
            }
        Matrix m(rows.size(), paths.size());
        std::size_t r = 0;
        for (auto& [k, row] : rows) {
            for (std::size_t c = 0; c < paths.size(); ++c) m.at(r, c) = row[c];
            ++r;
        }
        std::vector<LinComb> rels;
        for (const auto& v : kernel_basis(m)) {
            LinComb l;
            for (std::size_t c = 0; c < paths.size(); ++c)
                if (v[c] != 0) l.push_back({v[c], paths[c]});
            rels.push_back(std::move(l));
        }
        auto& family = std::get<2>(key) == 0 ? out.base : std::get<2>(key) == 1 ? out.mixed : out.top;
        for (auto& l : canonicalize_block(rels)) family.push_back(std::move(l));
    }

    BoundQuiver bq = out.bound_quiver();
    const int n = te.n();
    GradedBasis quotient = GradedBasis::compute(bq, n + 2);
    out.quadratic = true;
    for (int d = 0; d <= n + 2; ++d) {
        long a = static_cast<long>(quotient.dim_degree(d));
        long b = static_cast<long>(te.of_degree(d).size());
        out.excess.push_back(a - b);
        if (a != b) out.quadratic = false;
    }
    return out;
}

std::string WindowedZQ::label(const std::string& base_label, int level) {
    return base_label + "@" + std::to_string(level);
}

int WindowedZQ::vertex(int base_vertex, int level) const {
    if (!in_window(level)) return -1;
    return quiver_.vertex_index(label(base_.vertices()[base_vertex], level));
}

std::shared_ptr<const WindowedZQ> WindowedZQ::build(const BoundQuiver& lambda, Window window) {
    if (window.from > window.to) throw Error(ErrorCode::WindowTooSmall, "empty window");
    TrivialExtension te(lambda);
    auto tilde = std::make_shared<TildeRelations>(tilde_relations(te));
    const TildeRelations& tr = *tilde;
    if (!tr.quadratic) {
        std::vector<std::string> w;
        for (std::size_t d = 0; d < tr.excess.size(); ++d)
            if (tr.excess[d] != 0) w.push_back("degree " + std::to_string(d) + ": excess " + std::to_string(tr.excess[d]));
        throw Error(ErrorCode::NotQuadraticTilde,
                    "relations of the trivial extension of " + lambda.name() + " are not generated in degree 2", w);
    }
    auto z = assemble(lambda, tilde, window);
    z->family_ = std::make_shared<Family>();
    z->family_->windows[{window.from, window.to}] = z;
    return z;
}

std::shared_ptr<WindowedZQ> WindowedZQ::assemble(const BoundQuiver& lambda, std::shared_ptr<TildeRelations> tilde,
                                                 Window window) {
    auto z = std::make_shared<WindowedZQ>();
    z->base_ = lambda;
    z->window_ = window;
    z->tilde_ = std::move(tilde);
    const TildeRelations& tr = *z->tilde_;
    z->n_ = tr.qtilde.n;
    const BoundQuiver& qt = tr.qtilde.quiver;
    std::set<std::string> ret(tr.qtilde.return_ids.begin(), tr.qtilde.return_ids.end());

    QuiverData d;
    d.name = lambda.name() + "-zq";
    for (int L = window.from; L <= window.to; ++L)
        for (const auto& v : lambda.vertices()) d.vertices.push_back(label(v, L));
    for (int L = window.from; L <= window.to; ++L)
        for (const auto& a : qt.arrows()) {
            if (ret.count(a.id)) {
                if (L + 1 <= window.to) d.arrows.push_back({label(a.id, L), label(a.source, L), label(a.target, L + 1)});
            } else {
                d.arrows.push_back({label(a.id, L), label(a.source, L), label(a.target, L)});
            }
        }
    auto lift = [&](const std::vector<LinComb>& family, int span) {
        for (const auto& r : family)
            for (int L = window.from; L + span <= window.to; ++L) {
                std::vector<RawTerm> raw;
                for (const auto& t : r) {
                    RawTerm rt{t.coeff, {}};
                    int lev = L;
                    for (int a : t.path.arrows) {
                        rt.path.push_back(label(qt.arrows()[a].id, lev));
                        if (ret.count(qt.arrows()[a].id)) ++lev;
                    }
                    raw.push_back(std::move(rt));
                }
                d.relations.push_back(std::move(raw));
            }
    };
    lift(tr.base, 0);
    lift(tr.mixed, 1);
    lift(tr.top, 2);
    TranslationSpec ts;
    ts.n = z->n_;
    for (int L = window.from + 1; L <= window.to; ++L)
        for (const auto& v : lambda.vertices()) ts.tau[label(v, L)] = label(v, L - 1);
    d.translation = ts;
    d.window = window;
    z->quiver_ = BoundQuiver::from_data(d);
    z->gb_ = std::make_shared<GradedBasis>(GradedBasis::full(z->quiver_));
    z->base_of_.assign(z->quiver_.num_vertices(), -1);
    z->level_of_.assign(z->quiver_.num_vertices(), 0);
    for (int L = window.from; L <= window.to; ++L)
        for (std::size_t v = 0; v < lambda.num_vertices(); ++v) {
            int x = z->quiver_.vertex_index(label(lambda.vertices()[v], L));
            z->base_of_[x] = static_cast<int>(v);
            z->level_of_[x] = L;
        }
    return z;
}

const TranslationData& WindowedZQ::translation() const {
    std::call_once(td_once_, [&] { td_ = std::make_unique<TranslationData>(detect_translation(*gb_)); });
    return *td_;
}

std::shared_ptr<const WindowedZQ> WindowedZQ::rewindow(Window w) const {
    if (w.from > w.to) throw Error(ErrorCode::WindowTooSmall, "empty window");
    if (w == window_) return shared_from_this();
    std::lock_guard<std::mutex> lock(family_->mu);
    auto& slot = family_->windows[{w.from, w.to}];
    if (auto z = slot.lock()) return z;
    auto z = assemble(base_, tilde_, w);
    z->family_ = family_;
    slot = z;
    return z;
}

BoundQuiver base_from_ambient(const BoundQuiver& ambient, int level) {
    QuiverData d;
    std::string name = ambient.name();
    if (name.size() > 3 && name.substr(name.size() - 3) == "-zq") name = name.substr(0, name.size() - 3);
    d.name = name;
    std::set<std::string> keep;
    for (const auto& v : ambient.vertices())
        if (label_level(v) == level) {
            keep.insert(v);
            d.vertices.push_back(label_base(v));
        }
    if (keep.empty())
        throw Error(ErrorCode::WindowTooSmall, "ambient has no vertices at level " + std::to_string(level));
    std::set<int> arrows;
    for (std::size_t a = 0; a < ambient.num_arrows(); ++a) {
        const Arrow& arr = ambient.arrows()[a];
        if (keep.count(arr.source) && keep.count(arr.target)) {
            arrows.insert(static_cast<int>(a));
            d.arrows.push_back({label_base(arr.id), label_base(arr.source), label_base(arr.target)});
        }
    }
    for (const auto& r : ambient.relations()) {
        bool inside = true;
        for (const auto& t : r)
            for (int a : t.path.arrows) inside = inside && arrows.count(a);
        if (!inside) continue;
        std::vector<RawTerm> raw;
        for (const auto& t : r) {
            RawTerm rt{t.coeff, {}};
            for (int a : t.path.arrows) rt.path.push_back(label_base(ambient.arrows()[a].id));
            raw.push_back(std::move(rt));
        }
        d.relations.push_back(std::move(raw));
    }
    return BoundQuiver::from_data(d);
}

std::shared_ptr<const WindowedZQ> ambient_from_quiver(const BoundQuiver& ambient) {
    if (!ambient.window())
        throw Error(ErrorCode::NotTranslationQuiver, ambient.name() + " carries no window; not an ambient file");
    Window w = *ambient.window();
    BoundQuiver base = base_from_ambient(ambient, w.from);
    auto z = WindowedZQ::build(base, w);
    if (!z->quiver().same_structure(ambient) || z->quiver().translation() != ambient.translation())
        throw Error(ErrorCode::NotTranslationQuiver,
                    ambient.name() + " differs from the window rebuilt from its level-" + std::to_string(w.from) + " base");
    return z;
}

}  // namespace qm
