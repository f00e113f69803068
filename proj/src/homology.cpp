#include "quivermute/homology.hpp"

#include <algorithm>
#include <set>

namespace qm {

int ModuleRep::dim(int v, int d) const {
    auto it = dims.find({v, d});
    return it == dims.end() ? 0 : it->second;
}

std::vector<int> ModuleRep::degrees_at(int v) const {
    std::vector<int> out;
    for (const auto& [k, n] : dims)
        if (k.first == v && n > 0) out.push_back(k.second);
    return out;
}

std::vector<int> ModuleRep::dim_vector(std::size_t num_vertices) const {
    std::vector<int> out(num_vertices, 0);
    for (const auto& [k, n] : dims) out.at(k.first) += n;
    return out;
}

std::size_t ModuleRep::total_dim() const {
    std::size_t s = 0;
    for (const auto& [k, n] : dims) s += n;
    return s;
}

GradedBasis finite_algebra(const BoundQuiver& q) {
    try {
        return GradedBasis::full(q);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::DegreeOverflow) throw;
        throw Error(ErrorCode::InfiniteDimensional, q.name() + " does not vanish within the degree cap", e.witness());
    }
}

void require_finite(const GradedBasis& gb) {
    if (!gb.complete())
        throw Error(ErrorCode::InfiniteDimensional, gb.quiver().name() + " is not known to be finite-dimensional");
}

namespace {

std::map<int, int> positions(const std::vector<int>& block) {
    std::map<int, int> pos;
    for (std::size_t k = 0; k < block.size(); ++k) pos[block[k]] = static_cast<int>(k);
    return pos;
}

int top_of(const GradedBasis& gb) { return gb.top_degree(); }

void set_piece(ModuleRep& m, int v, int d, int n) {
    if (n > 0) m.dims[{v, d}] = n;
}

void set_map(ModuleRep& m, int a, int d, Matrix mat) {
    for (std::size_t r = 0; r < mat.rows(); ++r)
        for (std::size_t c = 0; c < mat.cols(); ++c)
            if (mat.at(r, c) != 0) {
                m.maps[{a, d}] = std::move(mat);
                return;
            }
}

Vec act_arrow(const BoundQuiver& q, const ModuleRep& m, int a, int d, const Vec& x) {
    int rows = m.dim(q.tgt(a), d + 1);
    auto it = m.maps.find({a, d});
    if (it == m.maps.end()) return Vec(rows);
    return it->second.apply(x);
}

Vec act_path(const BoundQuiver& q, const ModuleRep& m, const Path& p, int d, Vec x) {
    for (int a : p.arrows) {
        x = act_arrow(q, m, a, d, x);
        ++d;
    }
    return x;
}

Matrix path_matrix(const BoundQuiver& q, const ModuleRep& m, const Path& p, int d) {
    int cols = m.dim(p.source, d);
    int rows = m.dim(p.target, d + static_cast<int>(p.length()));
    Matrix out(rows, cols);
    for (int c = 0; c < cols; ++c) {
        Vec e(cols);
        e[c] = 1;
        Vec y = act_path(q, m, p, d, e);
        for (int r = 0; r < rows; ++r) out.at(r, c) = y[r];
    }
    return out;
}

}  // namespace

ModuleRep simple_module(const GradedBasis& gb, int i) {
    ModuleRep m;
    if (i < 0 || i >= static_cast<int>(gb.quiver().num_vertices()))
        throw Error(ErrorCode::UnknownReference, "vertex index out of range");
    m.dims[{i, 0}] = 1;
    return m;
}

ModuleRep projective_module(const GradedBasis& gb, int i) {
    require_finite(gb);
    const BoundQuiver& q = gb.quiver();
    ModuleRep m;
    int top = top_of(gb);
    for (int t = 0; t <= top; ++t)
        for (std::size_t k = 0; k < q.num_vertices(); ++k) set_piece(m, static_cast<int>(k), t, gb.dim(i, k, t));
    for (int t = 0; t < top; ++t)
        for (std::size_t a = 0; a < q.num_arrows(); ++a) {
            int k = q.src(a), l = q.tgt(a);
            const auto& from = gb.block(i, k, t);
            const auto& to = gb.block(i, l, t + 1);
            if (from.empty() || to.empty()) continue;
            auto pos = positions(to);
            Matrix mat(to.size(), from.size());
            for (std::size_t c = 0; c < from.size(); ++c) {
                Element y = gb.mul_arrow(gb.basis_element(t, from[c]), static_cast<int>(a));
                for (const auto& [idx, coef] : y.coeffs) mat.at(pos.at(idx), c) = coef;
            }
            set_map(m, static_cast<int>(a), t, std::move(mat));
        }
    return m;
}

ModuleRep injective_module(const GradedBasis& gb, int i) {
    require_finite(gb);
    const BoundQuiver& q = gb.quiver();
    ModuleRep m;
    int top = top_of(gb);
    for (int t = 0; t <= top; ++t)
        for (std::size_t j = 0; j < q.num_vertices(); ++j) set_piece(m, static_cast<int>(j), -t, gb.dim(j, i, t));
    for (int t = 1; t <= top; ++t)
        for (std::size_t a = 0; a < q.num_arrows(); ++a) {
            int j = q.src(a), k = q.tgt(a);
            const auto& from = gb.block(j, i, t);      // q: j -> i
            const auto& to = gb.block(k, i, t - 1);    // p: k -> i
            if (from.empty() || to.empty()) continue;
            auto pos = positions(from);
            Element arrow = gb.normal_form(Path{j, k, {static_cast<int>(a)}});
            Matrix mat(to.size(), from.size());
            for (std::size_t r = 0; r < to.size(); ++r) {
                Element y = gb.mul(arrow, gb.basis_element(t - 1, to[r]));
                for (const auto& [idx, coef] : y.coeffs) mat.at(r, pos.at(idx)) = coef;
            }
            set_map(m, static_cast<int>(a), -t, std::move(mat));
        }
    return m;
}

ModuleRep dual_of_algebra(const GradedBasis& gb) {
    const BoundQuiver& q = gb.quiver();
    ModuleRep out;
    std::vector<ModuleRep> parts;
    for (std::size_t i = 0; i < q.num_vertices(); ++i) parts.push_back(injective_module(gb, static_cast<int>(i)));
    std::map<std::pair<int, int>, int> total;
    std::vector<std::map<std::pair<int, int>, int>> offs(parts.size());
    for (std::size_t k = 0; k < parts.size(); ++k)
        for (const auto& [piece, n] : parts[k].dims) {
            offs[k][piece] = total[piece];
            total[piece] += n;
        }
    out.dims = total;
    for (std::size_t a = 0; a < q.num_arrows(); ++a) {
        int u = q.src(a), v = q.tgt(a);
        std::set<int> degrees;
        for (const auto& [piece, n] : total)
            if (piece.first == u) degrees.insert(piece.second);
        for (int d : degrees) {
            int cols = out.dim(u, d), rows = out.dim(v, d + 1);
            if (rows == 0 || cols == 0) continue;
            Matrix mat(rows, cols);
            for (std::size_t k = 0; k < parts.size(); ++k) {
                auto it = parts[k].maps.find({static_cast<int>(a), d});
                if (it == parts[k].maps.end()) continue;
                int r0 = offs[k].at({v, d + 1}), c0 = offs[k].at({u, d});
                for (std::size_t r = 0; r < it->second.rows(); ++r)
                    for (std::size_t c = 0; c < it->second.cols(); ++c) mat.at(r0 + r, c0 + c) = it->second.at(r, c);
            }
            set_map(out, static_cast<int>(a), d, std::move(mat));
        }
    }
    return out;
}

bool satisfies_relations(const GradedBasis& gb, const ModuleRep& m, std::string* witness) {
    const BoundQuiver& q = gb.quiver();
    for (const auto& [key, mat] : m.maps) {
        auto [a, d] = key;
        if (static_cast<int>(mat.cols()) != m.dim(q.src(a), d) || static_cast<int>(mat.rows()) != m.dim(q.tgt(a), d + 1)) {
            if (witness) *witness = "matrix of " + q.arrows()[a].id + " has the wrong shape";
            return false;
        }
    }
    for (const auto& r : q.relations()) {
        int s = r.front().path.source;
        for (int d : m.degrees_at(s)) {
            Matrix sum = path_matrix(q, m, r.front().path, d);
            for (std::size_t x = 0; x < sum.rows(); ++x)
                for (std::size_t y = 0; y < sum.cols(); ++y) sum.at(x, y) = 0;
            for (const auto& t : r) {
                Matrix pm = path_matrix(q, m, t.path, d);
                for (std::size_t x = 0; x < sum.rows(); ++x)
                    for (std::size_t y = 0; y < sum.cols(); ++y) sum.at(x, y) += t.coeff * pm.at(x, y);
            }
            for (std::size_t x = 0; x < sum.rows(); ++x)
                for (std::size_t y = 0; y < sum.cols(); ++y)
                    if (sum.at(x, y) != 0) {
                        if (witness) *witness = "relation " + q.lincomb_str(r) + " acts nontrivially in degree " + std::to_string(d);
                        return false;
                    }
        }
    }
    return true;
}

BoundQuiver opposite_quiver(const BoundQuiver& q) {
    QuiverData d = q.to_data();
    d.name = q.name() + "-op";
    for (auto& a : d.arrows) std::swap(a.source, a.target);
    for (auto& r : d.relations)
        for (auto& t : r) std::reverse(t.path.begin(), t.path.end());
    d.translation.reset();
    return BoundQuiver::from_data(d);
}

int Resolution::multiplicity(int t, int vertex) const {
    if (t < 0 || t >= static_cast<int>(profile.size())) return 0;
    int m = 0;
    for (const auto& term : profile[t])
        if (term.vertex == vertex) m += term.multiplicity;
    return m;
}

namespace {

using Piece = std::pair<int, int>;

// Columns of a projective sum at one piece: (summand, index into basis(t)).
struct Layout {
    std::vector<std::pair<int, int>> cols;
    std::map<std::pair<int, int>, int> index;
};

Layout layout_at(const GradedBasis& gb, const std::vector<Resolution::Summand>& sums, int k, int e) {
    Layout l;
    for (std::size_t s = 0; s < sums.size(); ++s) {
        int t = e - sums[s].degree;
        if (t < 0 || t > gb.top_degree()) continue;
        for (int idx : gb.block(sums[s].vertex, k, t)) {
            l.index[{static_cast<int>(s), idx}] = static_cast<int>(l.cols.size());
            l.cols.push_back({static_cast<int>(s), idx});
        }
    }
    return l;
}

std::set<Piece> pieces_of(const GradedBasis& gb, const std::vector<Resolution::Summand>& sums) {
    std::set<Piece> out;
    const BoundQuiver& q = gb.quiver();
    for (const auto& s : sums)
        for (int t = 0; t <= gb.top_degree(); ++t)
            for (std::size_t k = 0; k < q.num_vertices(); ++k)
                if (gb.dim(s.vertex, k, t) > 0) out.insert({static_cast<int>(k), s.degree + t});
    return out;
}

struct Kernel {
    std::vector<Vec> basis;       // in layout coordinates
    std::vector<std::size_t> free_cols;
};

Kernel kernel_of(const Matrix& m) {
    Kernel k;
    Rref r = rref(m);
    std::set<std::size_t> piv(r.pivots.begin(), r.pivots.end());
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (!piv.count(c)) k.free_cols.push_back(c);
    k.basis = kernel_basis(m);
    return k;
}

}  // namespace

Resolution minimal_projective_resolution(const GradedBasis& gb, const ModuleRep& m, int max_len, bool strict) {
    require_finite(gb);
    const BoundQuiver& q = gb.quiver();
    Resolution res;
    ModuleRep cur = m;
    // Basis of each piece of `cur` inside the previous projective (empty at step 0).
    std::map<Piece, std::vector<Vec>> emb;
    for (int t = 0;; ++t) {
        if (cur.is_zero()) {
            res.complete = true;
            break;
        }
        if (t > max_len) {
            if (!strict) break;
            std::vector<std::string> w;
            for (std::size_t s = 0; s < res.profile.size(); ++s) {
                std::string line = "step " + std::to_string(s) + ":";
                for (const auto& term : res.profile[s])
                    line += " P" + q.vertices()[term.vertex] + "(" + std::to_string(-term.degree) + ")^" +
                            std::to_string(term.multiplicity);
                w.push_back(line);
            }
            throw Error(ErrorCode::LengthExceeded, "resolution longer than " + std::to_string(max_len), w);
        }
        // Generators: a complement of the radical in each piece.
        std::vector<Resolution::Summand> sums;
        std::vector<Vec> gens;
        for (const auto& [piece, n] : cur.dims) {
            auto [v, d] = piece;
            std::vector<Vec> rad;
            for (int a : q.in_arrows(v)) {
                auto it = cur.maps.find({a, d - 1});
                if (it == cur.maps.end()) continue;
                for (std::size_t c = 0; c < it->second.cols(); ++c) {
                    Vec col(n);
                    for (int r = 0; r < n; ++r) col[r] = it->second.at(r, c);
                    rad.push_back(col);
                }
            }
            std::vector<Vec> span = canonical_span(rad, n);
            std::set<std::size_t> piv;
            for (const auto& row : span)
                for (int c = 0; c < n; ++c)
                    if (row[c] != 0) {
                        piv.insert(c);
                        break;
                    }
            for (int c = 0; c < n; ++c) {
                if (piv.count(c)) continue;
                Vec g(n);
                g[c] = 1;
                sums.push_back({v, d});
                gens.push_back(g);
            }
        }
        std::vector<Vec> images;
        for (std::size_t s = 0; s < sums.size(); ++s) {
            if (t == 0) {
                images.push_back(gens[s]);
            } else {
                const auto& basis = emb.at({sums[s].vertex, sums[s].degree});
                Vec y(basis.front().size());
                for (std::size_t j = 0; j < basis.size(); ++j)
                    if (gens[s][j] != 0)
                        for (std::size_t c = 0; c < y.size(); ++c) y[c] += gens[s][j] * basis[j][c];
                images.push_back(y);
            }
        }
        std::map<Piece, int> agg;
        for (const auto& s : sums) ++agg[{s.degree, s.vertex}];
        std::vector<ResolutionTerm> prof;
        for (const auto& [k, n] : agg) prof.push_back({k.second, k.first, n});
        res.profile.push_back(prof);
        res.summands.push_back(sums);
        res.image.push_back(images);

        // Syzygy: kernel of the cover, piece by piece.
        std::map<Piece, Layout> layouts;
        std::map<Piece, Kernel> kernels;
        for (const Piece& pc : pieces_of(gb, sums)) {
            auto [k, e] = pc;
            Layout l = layout_at(gb, sums, k, e);
            int rows = cur.dim(k, e);
            Matrix phi(rows, l.cols.size());
            for (std::size_t c = 0; c < l.cols.size(); ++c) {
                auto [s, idx] = l.cols[c];
                int len = e - sums[s].degree;
                Vec y = act_path(q, cur, gb.basis(len)[idx], sums[s].degree, gens[s]);
                for (int r = 0; r < rows; ++r) phi.at(r, c) = y[r];
            }
            Kernel ker = kernel_of(phi);
            if (!ker.basis.empty()) kernels[pc] = std::move(ker);
            layouts[pc] = std::move(l);
        }
        ModuleRep next;
        for (const auto& [pc, ker] : kernels) next.dims[pc] = static_cast<int>(ker.basis.size());
        for (const auto& [pc, ker] : kernels) {
            auto [k, e] = pc;
            for (int a : q.out_arrows(k)) {
                int l = q.tgt(a);
                auto kt = kernels.find({l, e + 1});
                if (kt == kernels.end()) continue;
                const Layout& to = layouts.at({l, e + 1});
                const Layout& from = layouts.at(pc);
                Matrix mat(kt->second.basis.size(), ker.basis.size());
                for (std::size_t j = 0; j < ker.basis.size(); ++j) {
                    Vec moved(to.cols.size());
                    for (std::size_t c = 0; c < from.cols.size(); ++c) {
                        const Rational& coef = ker.basis[j][c];
                        if (coef == 0) continue;
                        auto [s, idx] = from.cols[c];
                        int len = e - sums[s].degree;
                        Element y = gb.mul_arrow(gb.basis_element(len, idx), a);
                        for (const auto& [idx2, c2] : y.coeffs) moved[to.index.at({s, idx2})] += coef * c2;
                    }
                    for (std::size_t r = 0; r < kt->second.free_cols.size(); ++r)
                        mat.at(r, j) = moved[kt->second.free_cols[r]];
                }
                set_map(next, a, e, std::move(mat));
            }
        }
        emb.clear();
        for (auto& [pc, ker] : kernels) emb[pc] = std::move(ker.basis);
        cur = std::move(next);
    }
    return res;
}

int ext_dim(const GradedBasis& gb, const ModuleRep& m, const ModuleRep& n, int t) {
    if (t < 0) return 0;
    const BoundQuiver& q = gb.quiver();
    Resolution res = minimal_projective_resolution(gb, m, t + 1, false);
    int steps = static_cast<int>(res.summands.size());
    if (t >= steps) return 0;
    // Hom(P_s, N): one copy of N at the summand's vertex, all degrees.
    auto offsets = [&](int s, std::map<std::pair<int, int>, int>& off) {
        int total = 0;
        for (std::size_t k = 0; k < res.summands[s].size(); ++k)
            for (int d : n.degrees_at(res.summands[s][k].vertex)) {
                off[{static_cast<int>(k), d}] = total;
                total += n.dim(res.summands[s][k].vertex, d);
            }
        return total;
    };
    // delta^s : Hom(P_s, N) -> Hom(P_{s+1}, N), f -> f o d_{s+1}.
    auto delta_rank = [&](int s) -> std::size_t {
        if (s < 0 || s + 1 >= steps) return 0;
        std::map<std::pair<int, int>, int> off0, off1;
        int c0 = offsets(s, off0), c1 = offsets(s + 1, off1);
        if (c0 == 0 || c1 == 0) return 0;
        Matrix delta(c1, c0);
        for (std::size_t k1 = 0; k1 < res.summands[s + 1].size(); ++k1) {
            const auto& sum1 = res.summands[s + 1][k1];
            Layout l = layout_at(gb, res.summands[s], sum1.vertex, sum1.degree);
            const Vec& img = res.image[s + 1][k1];
            for (std::size_t c = 0; c < l.cols.size(); ++c) {
                if (img[c] == 0) continue;
                auto [k0, idx] = l.cols[c];
                const auto& sum0 = res.summands[s][k0];
                const Path& x = gb.basis(sum1.degree - sum0.degree)[idx];
                for (int d : n.degrees_at(sum0.vertex)) {
                    int d1 = d + static_cast<int>(x.length());
                    if (n.dim(sum1.vertex, d1) == 0) continue;
                    Matrix nx = path_matrix(q, n, x, d);
                    int r0 = off1.at({static_cast<int>(k1), d1}), col0 = off0.at({k0, d});
                    for (std::size_t r = 0; r < nx.rows(); ++r)
                        for (std::size_t cc = 0; cc < nx.cols(); ++cc)
                            delta.at(r0 + r, col0 + cc) += img[c] * nx.at(r, cc);
                }
            }
        }
        return rref(delta).rank;
    };
    std::map<std::pair<int, int>, int> off;
    int dim_t = offsets(t, off);
    return dim_t - static_cast<int>(delta_rank(t)) - static_cast<int>(delta_rank(t - 1));
}

int injective_dimension(const GradedBasis& gb, int i, int max_len) {
    require_finite(gb);
    GradedBasis op = finite_algebra(opposite_quiver(gb.quiver()));
    return minimal_projective_resolution(op, simple_module(op, i), max_len).length();
}

int injective_dimension_via_ext(const GradedBasis& gb, int i, int max_len) {
    int best = 0;
    for (std::size_t j = 0; j < gb.quiver().num_vertices(); ++j) {
        Resolution r = minimal_projective_resolution(gb, simple_module(gb, static_cast<int>(j)), max_len);
        for (int t = 0; t <= r.length(); ++t)
            if (r.multiplicity(t, i) > 0) best = std::max(best, t);
    }
    return best;
}

bool LinearityReport::linear_up_to_bound() const {
    return std::all_of(entries.begin(), entries.end(), [](const LinearityEntry& e) { return e.linear; });
}

LinearityReport check_linear_resolution(const GradedBasis& gb, int bound, const std::vector<int>& vertices) {
    LinearityReport rep;
    rep.bound = bound;
    std::vector<int> vs = vertices;
    if (vs.empty())
        for (std::size_t v = 0; v < gb.quiver().num_vertices(); ++v) vs.push_back(static_cast<int>(v));
    for (int v : vs) {
        Resolution r = minimal_projective_resolution(gb, simple_module(gb, v), bound, false);
        LinearityEntry e;
        e.vertex = v;
        e.steps = static_cast<int>(r.profile.size());
        e.complete = r.complete;
        for (int t = 0; t < e.steps && e.linear; ++t)
            for (const auto& term : r.profile[t])
                if (term.degree != t) {
                    e.linear = false;
                    e.first_nonlinear_step = t;
                    break;
                }
        rep.entries.push_back(e);
    }
    return rep;
}

bool NAprReport::ext_ok() const {
    return std::all_of(ext_dims.begin(), ext_dims.end(), [](int d) { return d == 0; });
}

NAprReport verify_n_apr_conditions(const GradedBasis& gb, int i, int n) {
    require_finite(gb);
    ModuleRep p = projective_module(gb, i);
    if (p.total_dim() != 1)
        throw Error(ErrorCode::NotSimpleProjective,
                    "projective at " + gb.quiver().vertices()[i] + " has dimension " + std::to_string(p.total_dim()),
                    {gb.quiver().vertices()[i]});
    NAprReport rep;
    rep.vertex = i;
    rep.n = n;
    rep.injective_dimension = injective_dimension(gb, i);
    rep.injective_dimension_ext = injective_dimension_via_ext(gb, i);
    ModuleRep dg = dual_of_algebra(gb);
    for (int t = 0; t < n; ++t) rep.ext_dims.push_back(ext_dim(gb, dg, p, t));
    return rep;
}

}  // namespace qm
