#include "quivermute/dual.hpp"

#include <algorithm>
#include <map>

namespace qm {

Rational pairing(const LinComb& p, const LinComb& q) {
    if (p.empty() || q.empty()) return 0;
    BlockKey key = block_of(p);
    for (const auto* l : {&p, &q})
        for (const auto& t : *l)
            if (BlockKey{t.path.source, t.path.target, static_cast<int>(t.path.length())} != key)
                throw Error(ErrorCode::BlockMismatch, "pairing of elements from different blocks");
    Rational s = 0;
    for (const auto& x : p)
        for (const auto& y : q)
            if (x.path == y.path) s += x.coeff * y.coeff;
    return s;
}

std::string dual_name(const std::string& name) {
    if (!name.empty() && name.back() == '!') return name.substr(0, name.size() - 1);
    return name + "!";
}

BoundQuiver quadratic_dual(const BoundQuiver& q) {
    for (const auto& r : q.relations())
        if (r.front().path.length() != 2)
            throw Error(ErrorCode::NotQuadratic,
                        "relation " + q.lincomb_str(r) + " has degree " + std::to_string(r.front().path.length()),
                        {q.lincomb_str(r)});
    std::map<std::pair<int, int>, std::vector<const LinComb*>> by_block;
    for (const auto& r : q.relations()) by_block[{r.front().path.source, r.front().path.target}].push_back(&r);

    QuiverData d = q.to_data();
    d.name = dual_name(q.name());
    d.translation.reset();
    d.relations.clear();
    const int V = static_cast<int>(q.num_vertices());
    for (int i = 0; i < V; ++i) {
        for (int j = 0; j < V; ++j) {
            auto paths = paths_between(q, i, j, 2);
            if (paths.empty()) continue;
            std::vector<Vec> rows;
            auto it = by_block.find({i, j});
            if (it != by_block.end()) {
                for (const LinComb* r : it->second) {
                    Vec v(paths.size());
                    for (const auto& t : *r) {
                        auto k = std::lower_bound(paths.begin(), paths.end(), t.path) - paths.begin();
                        v[k] = t.coeff;
                    }
                    rows.push_back(std::move(v));
                }
            }
            for (const auto& w : orthogonal_complement(rows, paths.size())) {
                std::vector<RawTerm> rel;
                for (std::size_t k = 0; k < paths.size(); ++k) {
                    if (w[k] == 0) continue;
                    RawTerm t{w[k], {}};
                    for (int a : paths[k].arrows) t.path.push_back(q.arrows()[a].id);
                    rel.push_back(std::move(t));
                }
                d.relations.push_back(std::move(rel));
            }
        }
    }
    return BoundQuiver::from_data(d);
}

}  // namespace qm
