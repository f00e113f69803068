#include "quivermute/isomorphism.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <set>

namespace qm {

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

std::vector<std::size_t> initial_colors(const BoundQuiver& q) {
    std::vector<std::size_t> c(q.num_vertices());
    std::vector<int> rel_out(q.num_vertices()), rel_in(q.num_vertices());
    for (const auto& r : q.relations()) {
        ++rel_out[r.front().path.source];
        ++rel_in[r.front().path.target];
    }
    for (std::size_t v = 0; v < c.size(); ++v) {
        std::size_t h = 17;
        h = mix(h, q.out_arrows(v).size());
        h = mix(h, q.in_arrows(v).size());
        h = mix(h, rel_out[v]);
        h = mix(h, rel_in[v]);
        c[v] = h;
    }
    return c;
}

std::vector<std::size_t> refine_once(const BoundQuiver& q, const std::vector<std::size_t>& c) {
    std::vector<std::size_t> out(c.size());
    for (std::size_t v = 0; v < c.size(); ++v) {
        std::vector<std::size_t> o, i;
        for (int a : q.out_arrows(v)) o.push_back(c[q.tgt(a)]);
        for (int a : q.in_arrows(v)) i.push_back(c[q.src(a)]);
        std::sort(o.begin(), o.end());
        std::sort(i.begin(), i.end());
        std::size_t h = mix(c[v], 0xabc);
        for (auto x : o) h = mix(h, x);
        h = mix(h, 0xdef);
        for (auto x : i) h = mix(h, x);
        out[v] = h;
    }
    return out;
}

std::size_t class_count(const std::vector<std::size_t>& c) { return std::set<std::size_t>(c.begin(), c.end()).size(); }

void joint_refine(const BoundQuiver& a, const BoundQuiver& b, std::vector<std::size_t>& ca,
                  std::vector<std::size_t>& cb) {
    ca = initial_colors(a);
    cb = initial_colors(b);
    for (std::size_t round = 0; round <= a.num_vertices() + b.num_vertices(); ++round) {
        auto na = refine_once(a, ca), nb = refine_once(b, cb);
        bool stable = class_count(na) == class_count(ca) && class_count(nb) == class_count(cb);
        ca = std::move(na);
        cb = std::move(nb);
        if (stable) break;
    }
}

std::map<BlockKey, std::vector<LinComb>> group_blocks(const std::vector<LinComb>& rels) {
    std::map<BlockKey, std::vector<LinComb>> m;
    for (const auto& r : rels) m[block_of(r)].push_back(r);
    return m;
}

std::vector<LinComb> transport_raw(const BoundQuiver& a, const QuiverIso& iso, bool with_scale) {
    std::map<BlockKey, std::vector<LinComb>> blocks;
    for (const auto& r : a.relations()) {
        LinComb l;
        for (const auto& t : r) {
            Path p{iso.vertex_map[t.path.source], iso.vertex_map[t.path.target], {}};
            Rational c = t.coeff;
            for (int x : t.path.arrows) {
                p.arrows.push_back(iso.arrow_map[x]);
                if (with_scale) c *= iso.arrow_scale[x];
            }
            l.push_back({c, p});
        }
        blocks[block_of(l)].push_back(std::move(l));
    }
    std::vector<LinComb> out;
    for (auto& [k, rels] : blocks)
        for (auto& l : canonicalize_block(rels)) out.push_back(std::move(l));
    return out;
}

// Factor |q| over small primes; the cofactor (if any) is kept as one opaque atom.
void factor_into(mpz_class n, int sign, std::map<mpz_class, int>& exps) {
    for (mpz_class p = 2; p * p <= n && p < 100000; ++p) {
        while (n % p == 0) {
            exps[p] += sign;
            n /= p;
        }
    }
    if (n > 1) exps[n] += sign;
}

struct Constraint {
    std::map<int, int> exps;  // b-arrow -> exponent
    Rational q;
};

// Solves prod x_a^{e_a} = q for every constraint with x_a nonzero rationals.
std::optional<std::map<int, Rational>> solve_scalings(const std::vector<Constraint>& cons, int narrows) {
    if (cons.empty()) return std::map<int, Rational>{};
    // Signs over GF(2).
    std::vector<std::vector<int>> rows;
    std::vector<int> rhs;
    for (const auto& c : cons) {
        std::vector<int> r(narrows, 0);
        for (auto [a, e] : c.exps) r[a] = ((e % 2) + 2) % 2;
        rows.push_back(r);
        rhs.push_back(c.q < 0 ? 1 : 0);
    }
    std::vector<int> sign_sol(narrows, 0);
    {
        std::size_t rr = 0;
        std::vector<int> piv_col;
        for (int col = 0; col < narrows && rr < rows.size(); ++col) {
            std::size_t p = rr;
            while (p < rows.size() && rows[p][col] == 0) ++p;
            if (p == rows.size()) continue;
            std::swap(rows[p], rows[rr]);
            std::swap(rhs[p], rhs[rr]);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (i == rr || rows[i][col] == 0) continue;
                for (int j = 0; j < narrows; ++j) rows[i][j] ^= rows[rr][j];
                rhs[i] ^= rhs[rr];
            }
            piv_col.push_back(col);
            ++rr;
        }
        for (std::size_t i = rr; i < rows.size(); ++i)
            if (rhs[i]) return std::nullopt;
        for (std::size_t i = 0; i < rr; ++i) sign_sol[piv_col[i]] = rhs[i];
    }
    // Magnitudes: one integer linear system per prime.
    std::vector<std::map<mpz_class, int>> fac(cons.size());
    std::set<mpz_class> primes;
    for (std::size_t k = 0; k < cons.size(); ++k) {
        Rational q = abs(cons[k].q);
        factor_into(q.get_num(), 1, fac[k]);
        factor_into(q.get_den(), -1, fac[k]);
        for (auto& [p, e] : fac[k]) primes.insert(p);
    }
    std::map<int, Rational> sol;
    for (int a = 0; a < narrows; ++a) sol[a] = sign_sol[a] ? -1 : 1;
    for (const auto& p : primes) {
        std::vector<Vec> aug;
        for (std::size_t k = 0; k < cons.size(); ++k) {
            Vec r(narrows + 1);
            for (auto [a, e] : cons[k].exps) r[a] = e;
            auto it = fac[k].find(p);
            r[narrows] = it == fac[k].end() ? 0 : it->second;
            aug.push_back(r);
        }
        Rref rr = rref(Matrix::from_rows(aug, narrows + 1));
        if (!rr.pivots.empty() && rr.pivots.back() == static_cast<std::size_t>(narrows)) return std::nullopt;
        for (std::size_t k = 0; k < rr.rank; ++k) {
            Rational y = rr.reduced.at(k, narrows);
            if (y.get_den() != 1) return std::nullopt;
            mpz_class e = y.get_num();
            mpz_class pw;
            mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), mpz_class(abs(e)).get_ui());
            Rational f = e >= 0 ? Rational(pw) : Rational(1) / Rational(pw);
            sol[static_cast<int>(rr.pivots[k])] *= f;
        }
    }
    return sol;
}

class Matcher {
public:
    Matcher(const BoundQuiver& a, const BoundQuiver& b, IsoOptions opts) : a_(a), b_(b), opts_(opts) {}

    std::optional<QuiverIso> run() {
        const std::size_t V = a_.num_vertices();
        if (V != b_.num_vertices() || a_.num_arrows() != b_.num_arrows() ||
            a_.relations().size() != b_.relations().size())
            return std::nullopt;
        joint_refine(a_, b_, ca_, cb_);
        auto ha = ca_, hb = cb_;
        std::sort(ha.begin(), ha.end());
        std::sort(hb.begin(), hb.end());
        if (ha != hb) return std::nullopt;
        adj_a_ = adjacency(a_);
        adj_b_ = adjacency(b_);
        f_.assign(V, -1);
        used_.assign(V, false);
        b_blocks_ = group_blocks(b_.relations());
        if (search(0)) return result_;
        return std::nullopt;
    }

private:
    static std::vector<std::vector<int>> adjacency(const BoundQuiver& q) {
        std::vector<std::vector<int>> m(q.num_vertices(), std::vector<int>(q.num_vertices(), 0));
        for (std::size_t x = 0; x < q.num_arrows(); ++x) ++m[q.src(x)][q.tgt(x)];
        return m;
    }

    int pick_next() const {
        int best = -1;
        long best_score = std::numeric_limits<long>::min();
        for (std::size_t v = 0; v < a_.num_vertices(); ++v) {
            if (f_[v] >= 0) continue;
            long mapped_nbrs = 0;
            for (std::size_t u = 0; u < a_.num_vertices(); ++u)
                if (f_[u] >= 0 && (adj_a_[v][u] || adj_a_[u][v])) ++mapped_nbrs;
            long score = mapped_nbrs * 1000 - static_cast<long>(std::count(ca_.begin(), ca_.end(), ca_[v]));
            if (score > best_score) {
                best_score = score;
                best = static_cast<int>(v);
            }
        }
        return best;
    }

    bool consistent(int v, int w) const {
        if (ca_[v] != cb_[w]) return false;
        if (adj_a_[v][v] != adj_b_[w][w]) return false;
        for (std::size_t u = 0; u < a_.num_vertices(); ++u) {
            if (f_[u] < 0) continue;
            if (adj_a_[v][u] != adj_b_[w][f_[u]] || adj_a_[u][v] != adj_b_[f_[u]][w]) return false;
        }
        return true;
    }

    bool search(std::size_t depth) {
        if (depth == a_.num_vertices()) return match_arrows();
        int v = pick_next();
        for (std::size_t w = 0; w < b_.num_vertices(); ++w) {
            if (used_[w] || !consistent(v, static_cast<int>(w))) continue;
            f_[v] = static_cast<int>(w);
            used_[w] = true;
            if (search(depth + 1)) return true;
            f_[v] = -1;
            used_[w] = false;
        }
        return false;
    }

    bool match_arrows() {
        std::map<std::pair<int, int>, std::vector<int>> ga, gb;
        for (std::size_t x = 0; x < a_.num_arrows(); ++x) ga[{a_.src(x), a_.tgt(x)}].push_back(static_cast<int>(x));
        for (std::size_t x = 0; x < b_.num_arrows(); ++x) gb[{b_.src(x), b_.tgt(x)}].push_back(static_cast<int>(x));
        std::vector<std::pair<std::vector<int>, std::vector<int>>> groups;
        for (auto& [key, arrows] : ga) groups.push_back({arrows, gb.at({f_[key.first], f_[key.second]})});
        std::vector<int> g(a_.num_arrows(), -1);
        std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
            if (k == groups.size()) return check_relations(g);
            auto perm = groups[k].second;
            std::sort(perm.begin(), perm.end());
            do {
                for (std::size_t i = 0; i < perm.size(); ++i) g[groups[k].first[i]] = perm[i];
                if (rec(k + 1)) return true;
            } while (std::next_permutation(perm.begin(), perm.end()));
            return false;
        };
        return rec(0);
    }

    bool check_relations(const std::vector<int>& g) {
        QuiverIso iso{f_, g, std::vector<Rational>(a_.num_arrows(), Rational(1))};
        auto moved = group_blocks(transport_raw(a_, iso, false));
        if (moved.size() != b_blocks_.size()) return false;
        std::vector<Constraint> cons;
        for (const auto& [key, rels] : moved) {
            auto it = b_blocks_.find(key);
            if (it == b_blocks_.end() || it->second.size() != rels.size()) return false;
            for (std::size_t k = 0; k < rels.size(); ++k) {
                const LinComb& x = rels[k];
                const LinComb& y = it->second[k];
                if (x.size() != y.size()) return false;
                for (std::size_t t = 0; t < x.size(); ++t)
                    if (!(x[t].path == y[t].path)) return false;
                if (!opts_.allow_rescaling) {
                    if (!(x == y)) return false;
                    continue;
                }
                for (std::size_t t = 1; t < x.size(); ++t) {
                    Constraint c;
                    for (int arr : x[t].path.arrows) ++c.exps[arr];
                    for (int arr : x[0].path.arrows) --c.exps[arr];
                    for (auto e = c.exps.begin(); e != c.exps.end();)
                        e = e->second == 0 ? c.exps.erase(e) : std::next(e);
                    c.q = y[t].coeff / x[t].coeff;
                    if (c.exps.empty()) {
                        if (c.q != 1) return false;
                        continue;
                    }
                    cons.push_back(std::move(c));
                }
            }
        }
        if (opts_.allow_rescaling) {
            auto sol = solve_scalings(cons, static_cast<int>(b_.num_arrows()));
            if (!sol) return false;
            for (std::size_t x = 0; x < a_.num_arrows(); ++x) {
                auto it = sol->find(g[x]);
                if (it != sol->end()) iso.arrow_scale[x] = it->second;
            }
            // Scales were solved from the RREF pattern; confirm by a full transport.
            if (transport_raw(a_, iso, true) != b_.relations()) return false;
        }
        result_ = iso;
        return true;
    }

    const BoundQuiver& a_;
    const BoundQuiver& b_;
    IsoOptions opts_;
    std::vector<std::size_t> ca_, cb_;
    std::vector<std::vector<int>> adj_a_, adj_b_;
    std::vector<int> f_;
    std::vector<bool> used_;
    std::map<BlockKey, std::vector<LinComb>> b_blocks_;
    QuiverIso result_;
};

}  // namespace

std::map<std::string, std::string> QuiverIso::vertex_labels(const BoundQuiver& a, const BoundQuiver& b) const {
    std::map<std::string, std::string> m;
    for (std::size_t v = 0; v < vertex_map.size(); ++v) m[a.vertices()[v]] = b.vertices()[vertex_map[v]];
    return m;
}

std::map<std::string, std::string> QuiverIso::arrow_labels(const BoundQuiver& a, const BoundQuiver& b) const {
    std::map<std::string, std::string> m;
    for (std::size_t x = 0; x < arrow_map.size(); ++x) m[a.arrows()[x].id] = b.arrows()[arrow_map[x]].id;
    return m;
}

std::optional<QuiverIso> quiver_isomorphism(const BoundQuiver& a, const BoundQuiver& b, IsoOptions opts) {
    return Matcher(a, b, opts).run();
}

std::vector<LinComb> transport_relations(const BoundQuiver& a, const BoundQuiver&, const QuiverIso& iso) {
    return transport_raw(a, iso, true);
}

std::vector<std::size_t> refined_colors(const BoundQuiver& q) {
    std::vector<std::size_t> c, unused;
    joint_refine(q, q, c, unused);
    return c;
}

std::string invariant_key(const BoundQuiver& q) {
    auto c = refined_colors(q);
    std::sort(c.begin(), c.end());
    std::string key = std::to_string(q.num_vertices()) + "/" + std::to_string(q.num_arrows()) + "/" +
                      std::to_string(q.relations().size());
    for (auto x : c) key += ":" + std::to_string(x);
    return key;
}

}  // namespace qm
