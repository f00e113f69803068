#include "quivermute/quiver.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace qm {

bool natural_less(const std::string& a, const std::string& b) {
    std::size_t i = 0, j = 0;
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    while (i < a.size() && j < b.size()) {
        if (digit(a[i]) && digit(b[j])) {
            std::size_t i2 = i, j2 = j;
            while (i2 < a.size() && digit(a[i2])) ++i2;
            while (j2 < b.size() && digit(b[j2])) ++j2;
            std::string x = a.substr(i, i2 - i), y = b.substr(j, j2 - j);
            std::size_t zx = x.find_first_not_of('0'), zy = y.find_first_not_of('0');
            std::string tx = zx == std::string::npos ? "" : x.substr(zx);
            std::string ty = zy == std::string::npos ? "" : y.substr(zy);
            if (tx.size() != ty.size()) return tx.size() < ty.size();
            if (tx != ty) return tx < ty;
            if (x.size() != y.size()) return x.size() < y.size();
            i = i2;
            j = j2;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    if ((a.size() - i) != (b.size() - j)) return (a.size() - i) < (b.size() - j);
    return a < b;
}

BlockKey block_of(const LinComb& l) {
    const Path& p = l.front().path;
    return {p.source, p.target, static_cast<int>(p.length())};
}

std::vector<LinComb> canonicalize_block(const std::vector<LinComb>& rels) {
    std::vector<Path> cols;
    for (const auto& r : rels)
        for (const auto& t : r) cols.push_back(t.path);
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    std::vector<Vec> rows;
    for (const auto& r : rels) {
        Vec v(cols.size());
        for (const auto& t : r) {
            auto k = std::lower_bound(cols.begin(), cols.end(), t.path) - cols.begin();
            v[k] += t.coeff;
        }
        rows.push_back(std::move(v));
    }
    std::vector<LinComb> out;
    for (const auto& row : canonical_span(rows, cols.size())) {
        LinComb l;
        for (std::size_t c = 0; c < cols.size(); ++c)
            if (row[c] != 0) l.push_back({row[c], cols[c]});
        out.push_back(std::move(l));
    }
    return out;
}

ValidationReport validate(const QuiverData& data) {
    ValidationReport rep;
    auto issue = [&](ErrorCode c, std::string msg, std::vector<std::string> w = {}) {
        rep.issues.push_back({c, std::move(msg), std::move(w)});
    };

    BoundQuiver q;
    q.name_ = data.name;
    q.vertices_ = data.vertices;
    std::sort(q.vertices_.begin(), q.vertices_.end(), natural_less);
    for (std::size_t i = 0; i < q.vertices_.size(); ++i) {
        if (q.vertices_[i].empty()) issue(ErrorCode::UnknownReference, "empty vertex label");
        if (i > 0 && q.vertices_[i] == q.vertices_[i - 1])
            issue(ErrorCode::DuplicateId, "duplicate vertex " + q.vertices_[i], {q.vertices_[i]});
    }
    q.vertices_.erase(std::unique(q.vertices_.begin(), q.vertices_.end()), q.vertices_.end());
    std::set<std::string> vset(q.vertices_.begin(), q.vertices_.end());

    q.arrows_ = data.arrows;
    std::sort(q.arrows_.begin(), q.arrows_.end(),
              [](const Arrow& a, const Arrow& b) { return natural_less(a.id, b.id); });
    for (std::size_t i = 0; i < q.arrows_.size(); ++i) {
        const Arrow& a = q.arrows_[i];
        if (a.id.empty()) issue(ErrorCode::UnknownReference, "empty arrow id");
        if (i > 0 && a.id == q.arrows_[i - 1].id) issue(ErrorCode::DuplicateId, "duplicate arrow " + a.id, {a.id});
        if (!vset.count(a.source))
            issue(ErrorCode::UnknownReference, "arrow " + a.id + " has unknown source " + a.source, {a.id});
        if (!vset.count(a.target))
            issue(ErrorCode::UnknownReference, "arrow " + a.id + " has unknown target " + a.target, {a.id});
    }
    if (!rep.ok()) return rep;
    q.index();

    std::map<BlockKey, std::vector<LinComb>> blocks;
    for (std::size_t r = 0; r < data.relations.size(); ++r) {
        const auto& raw = data.relations[r];
        std::string rname = "relation #" + std::to_string(r);
        if (raw.empty()) {
            issue(ErrorCode::InvalidRelation, rname + " has no terms", {rname});
            continue;
        }
        LinComb l;
        bool bad = false;
        for (const auto& t : raw) {
            std::string shown;
            for (const auto& id : t.path) shown += (shown.empty() ? "" : ".") + id;
            Path p;
            for (const auto& id : t.path) {
                auto a = q.find_arrow(id);
                if (!a) {
                    issue(ErrorCode::UnknownReference, rname + " uses unknown arrow " + id, {rname, id});
                    bad = true;
                    break;
                }
                if (!p.arrows.empty() && q.tgt(p.arrows.back()) != q.src(*a)) {
                    issue(ErrorCode::CompositionError, rname + ": path " + shown + " is not composable", {rname, shown});
                    bad = true;
                    break;
                }
                if (p.arrows.empty()) p.source = q.src(*a);
                p.arrows.push_back(*a);
                p.target = q.tgt(*a);
            }
            if (bad) break;
            if (p.length() < 2) {
                issue(ErrorCode::InvalidRelation, rname + ": term " + (shown.empty() ? "<empty>" : shown) +
                                                      " has length < 2",
                      {rname, shown});
                bad = true;
                break;
            }
            l.push_back({t.coeff, p});
        }
        if (bad) continue;
        const Path& p0 = l.front().path;
        for (const auto& t : l) {
            if (t.path.source != p0.source || t.path.target != p0.target) {
                issue(ErrorCode::NormalizationError,
                      rname + " mixes paths " + q.path_str(p0) + " and " + q.path_str(t.path) +
                          " with different endpoints",
                      {rname, q.path_str(p0), q.path_str(t.path)});
                bad = true;
                break;
            }
            if (t.path.length() != p0.length()) {
                issue(ErrorCode::HomogeneityError,
                      rname + " mixes lengths " + std::to_string(p0.length()) + " and " +
                          std::to_string(t.path.length()),
                      {rname, q.path_str(p0), q.path_str(t.path)});
                bad = true;
                break;
            }
        }
        if (bad) continue;
        blocks[block_of(l)].push_back(std::move(l));
    }

    if (data.translation) {
        const auto& tr = *data.translation;
        if (tr.n < 1) issue(ErrorCode::InvalidRelation, "translation n must be >= 1");
        std::set<std::string> images;
        for (const auto& [k, v] : tr.tau) {
            if (!vset.count(k)) issue(ErrorCode::UnknownReference, "tau maps unknown vertex " + k, {k});
            if (!vset.count(v)) issue(ErrorCode::UnknownReference, "tau image unknown vertex " + v, {v});
            if (!images.insert(v).second) issue(ErrorCode::DuplicateId, "tau is not injective at " + v, {v});
        }
    }
    if (data.window && data.window->from > data.window->to)
        issue(ErrorCode::InvalidRelation, "window from > to");
    if (!rep.ok()) return rep;

    for (auto& [key, rels] : blocks)
        for (auto& l : canonicalize_block(rels)) q.relations_.push_back(std::move(l));
    q.translation_ = data.translation;
    q.window_ = data.window;
    rep.normalized = std::move(q);
    return rep;
}

BoundQuiver BoundQuiver::from_data(const QuiverData& data) {
    ValidationReport rep = validate(data);
    if (!rep.ok()) {
        const Issue& i = rep.issues.front();
        throw Error(i.code, i.message, i.witness);
    }
    return std::move(*rep.normalized);
}

void BoundQuiver::index() {
    vindex_.clear();
    aindex_.clear();
    for (std::size_t i = 0; i < vertices_.size(); ++i) vindex_[vertices_[i]] = static_cast<int>(i);
    arrow_src_.assign(arrows_.size(), -1);
    arrow_tgt_.assign(arrows_.size(), -1);
    out_.assign(vertices_.size(), {});
    in_.assign(vertices_.size(), {});
    for (std::size_t a = 0; a < arrows_.size(); ++a) {
        aindex_[arrows_[a].id] = static_cast<int>(a);
        arrow_src_[a] = vindex_.at(arrows_[a].source);
        arrow_tgt_[a] = vindex_.at(arrows_[a].target);
        out_[arrow_src_[a]].push_back(static_cast<int>(a));
        in_[arrow_tgt_[a]].push_back(static_cast<int>(a));
    }
}

QuiverData BoundQuiver::to_data() const {
    QuiverData d;
    d.name = name_;
    d.vertices = vertices_;
    d.arrows = arrows_;
    for (const auto& l : relations_) {
        std::vector<RawTerm> r;
        for (const auto& t : l) {
            RawTerm rt{t.coeff, {}};
            for (int a : t.path.arrows) rt.path.push_back(arrows_[a].id);
            r.push_back(std::move(rt));
        }
        d.relations.push_back(std::move(r));
    }
    d.translation = translation_;
    d.window = window_;
    return d;
}

std::optional<int> BoundQuiver::find_vertex(const std::string& label) const {
    auto it = vindex_.find(label);
    if (it == vindex_.end()) return std::nullopt;
    return it->second;
}

std::optional<int> BoundQuiver::find_arrow(const std::string& id) const {
    auto it = aindex_.find(id);
    if (it == aindex_.end()) return std::nullopt;
    return it->second;
}

int BoundQuiver::vertex_index(const std::string& label) const {
    auto v = find_vertex(label);
    if (!v) throw Error(ErrorCode::UnknownReference, "unknown vertex " + label, {label});
    return *v;
}

int BoundQuiver::arrow_index(const std::string& id) const {
    auto a = find_arrow(id);
    if (!a) throw Error(ErrorCode::UnknownReference, "unknown arrow " + id, {id});
    return *a;
}

Path BoundQuiver::make_path(const std::vector<std::string>& ids) const {
    if (ids.empty()) throw Error(ErrorCode::CompositionError, "empty path needs a vertex");
    Path p;
    for (const auto& id : ids) {
        int a = arrow_index(id);
        if (!p.arrows.empty() && tgt(p.arrows.back()) != src(a))
            throw Error(ErrorCode::CompositionError, "arrows not composable at " + id, {id});
        if (p.arrows.empty()) p.source = src(a);
        p.arrows.push_back(a);
        p.target = tgt(a);
    }
    return p;
}

std::string BoundQuiver::path_str(const Path& p) const {
    if (p.arrows.empty()) return "e_" + vertices_.at(p.source);
    std::string s;
    for (int a : p.arrows) s += (s.empty() ? "" : ".") + arrows_[a].id;
    return s;
}

std::string BoundQuiver::lincomb_str(const LinComb& l) const {
    std::ostringstream os;
    bool first = true;
    for (const auto& t : l) {
        if (!first) os << (t.coeff < 0 ? " - " : " + ");
        else if (t.coeff < 0) os << "-";
        Rational a = abs(t.coeff);
        if (a != 1) os << a.get_str() << "*";
        os << path_str(t.path);
        first = false;
    }
    return os.str();
}

bool BoundQuiver::is_acyclic() const {
    std::vector<int> indeg(vertices_.size(), 0);
    for (std::size_t a = 0; a < arrows_.size(); ++a) ++indeg[arrow_tgt_[a]];
    std::vector<int> stack;
    for (std::size_t v = 0; v < vertices_.size(); ++v)
        if (indeg[v] == 0) stack.push_back(static_cast<int>(v));
    std::size_t seen = 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        ++seen;
        for (int a : out_[v])
            if (--indeg[arrow_tgt_[a]] == 0) stack.push_back(arrow_tgt_[a]);
    }
    return seen == vertices_.size();
}

std::vector<int> BoundQuiver::relation_degrees() const {
    std::set<int> d;
    for (const auto& l : relations_) d.insert(static_cast<int>(l.front().path.length()));
    return {d.begin(), d.end()};
}

BoundQuiver BoundQuiver::with_name(std::string name) const {
    BoundQuiver q = *this;
    q.name_ = std::move(name);
    return q;
}

BoundQuiver BoundQuiver::with_translation(std::optional<TranslationSpec> t) const {
    QuiverData d = to_data();
    d.translation = std::move(t);
    return from_data(d);
}

BoundQuiver BoundQuiver::with_window(std::optional<Window> w) const {
    QuiverData d = to_data();
    d.window = w;
    return from_data(d);
}

bool BoundQuiver::same_structure(const BoundQuiver& o) const {
    return vertices_ == o.vertices_ && arrows_ == o.arrows_ && relations_ == o.relations_;
}

bool BoundQuiver::operator==(const BoundQuiver& o) const {
    return name_ == o.name_ && same_structure(o) && translation_ == o.translation_ && window_ == o.window_;
}

std::vector<Path> paths_between(const BoundQuiver& q, int s, int t, int length) {
    std::vector<Path> out;
    Path cur = Path::stationary(s);
    std::function<void(int)> rec = [&](int v) {
        if (static_cast<int>(cur.arrows.size()) == length) {
            if (v == t) {
                cur.target = v;
                out.push_back(cur);
            }
            return;
        }
        for (int a : q.out_arrows(v)) {
            cur.arrows.push_back(a);
            rec(q.tgt(a));
            cur.arrows.pop_back();
        }
    };
    rec(s);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace qm
