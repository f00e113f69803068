#include "quivermute/session.hpp"

#include <httplib.h>

#include <mutex>
#include <sstream>

namespace qm {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

ojson labels_json(const std::vector<std::string>& labels) {
    ojson a = ojson::array();
    for (const auto& l : labels) a.push_back(l);
    return a;
}

}  // namespace

SliceEmbedding parse_slice(std::shared_ptr<const WindowedZQ> ambient, const std::string& spec) {
    std::string s = trim(spec);
    if (s.empty()) throw Error(ErrorCode::Usage, "empty slice");
    if (s[0] == '@') {
        int level = 0;
        try {
            std::size_t used = 0;
            level = std::stoi(s.substr(1), &used);
            if (used + 1 != s.size()) throw std::invalid_argument(s);
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::Usage, "slice level must be an integer: " + s);
        }
        return SliceEmbedding::base_copy(ambient, level);
    }
    std::vector<std::string> labels;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) labels.push_back(item);
    }
    return SliceEmbedding::from_labels(ambient, labels);
}

MutationDir parse_dir(const std::string& s) {
    if (s == "minus" || s == "-") return MutationDir::Minus;
    if (s == "plus" || s == "+") return MutationDir::Plus;
    throw Error(ErrorCode::Usage, "direction must be minus or plus, got \"" + s + "\"");
}

ojson error_to_json(const Error& e) {
    ojson j;
    j["code"] = e.code_str();
    j["message"] = e.what();
    j["witness"] = labels_json(e.witness());
    return ojson{{"error", j}};
}

ojson cells_to_json(const SliceEmbedding& s, const std::vector<Cell>& cells) {
    std::vector<std::string> labels;
    for (const auto& c : cells) labels.push_back(s.label(c));
    return labels_json(labels);
}

ojson slice_state_json(const SliceEmbedding& s) {
    ojson j;
    j["labels"] = labels_json(s.labels());
    ojson cells = ojson::array();
    for (const auto& c : s.cells())
        cells.push_back(ojson{{"vertex", s.ambient().base().vertices()[c.base]}, {"level", c.level}});
    j["cells"] = cells;
    j["convex"] = s.convex();
    j["transversal"] = s.transversal();
    j["complete"] = s.convex() && s.transversal() && is_complete_slice(s).complete;
    if (s.convex()) {
        j["truncation"] = quiver_to_json(truncation(s));
        j["dual"] = quiver_to_json(dual_truncation(s));
        MovableReport mv = movable_vertices(s);
        ojson fwd = ojson::array(), bwd = ojson::array();
        for (const auto& m : mv.forward) fwd.push_back(ojson{{"vertex", s.label(m.cell)}, {"sink", m.extremal}});
        for (const auto& m : mv.backward) bwd.push_back(ojson{{"vertex", s.label(m.cell)}, {"source", m.extremal}});
        j["movable"] = ojson{{"forward", fwd}, {"backward", bwd}};
    }
    return j;
}

ojson layout_json(const SliceEmbedding& s) {
    ojson vs = ojson::array();
    for (const auto& c : s.cells())
        vs.push_back(ojson{{"vertex", s.label(c)}, {"x", c.level}, {"y", c.base}});
    ojson as = ojson::array();
    if (s.convex()) {
        BoundQuiver t = truncation(s);
        for (const auto& a : t.arrows()) as.push_back(ojson{{"id", a.id}, {"from", a.source}, {"to", a.target}});
    }
    return ojson{{"vertices", vs}, {"arrows", as}};
}

ojson enumeration_json(const Enumeration& e) {
    ojson nodes = ojson::array();
    for (std::size_t k = 0; k < e.nodes.size(); ++k)
        nodes.push_back(ojson{{"id", k}, {"labels", labels_json(e.nodes[k].slice.labels())}, {"class", e.nodes[k].cls}});
    ojson edges = ojson::array();
    for (const auto& ed : e.edges)
        edges.push_back(ojson{{"from", ed.from}, {"to", ed.to}, {"at", e.nodes[ed.from].slice.label(ed.at)}});
    ojson classes = ojson::array();
    for (std::size_t c = 0; c < e.classes.size(); ++c) {
        ojson members = ojson::array();
        for (int m : e.classes[c].members) members.push_back(m);
        classes.push_back(ojson{{"id", c},
                                {"representative", e.classes[c].representative},
                                {"members", members},
                                {"dual", quiver_to_json(e.classes[c].dual)}});
    }
    ojson cedges = ojson::array();
    for (const auto& [a, b] : e.class_edges) cedges.push_back(ojson::array({a, b}));
    ojson j;
    j["node_count"] = e.nodes.size();
    j["class_count"] = e.classes.size();
    j["nodes"] = nodes;
    j["edges"] = edges;
    j["classes"] = classes;
    j["class_edges"] = cedges;
    return j;
}

ojson tilt_json(const TiltReport& r) {
    const SliceEmbedding& s = r.result;
    auto terms = [&](const std::vector<std::pair<Cell, int>>& v, const char* key) {
        ojson a = ojson::array();
        for (const auto& [c, m] : v) a.push_back(ojson{{"vertex", s.label(c)}, {key, m}});
        return a;
    };
    ojson j;
    j["direction"] = dir_name(r.dir);
    j["pivot"] = s.label(r.pivot);
    j["replacement"] = s.label(r.replacement);
    j["kept"] = cells_to_json(s, r.kept);
    j["presentation"] = ojson{{"degree_1", terms(r.presentation_1, "multiplicity")},
                              {"degree_2", terms(r.presentation_2, "multiplicity")}};
    j["dimension_vector"] = terms(r.dimension_vector, "dim");
    j["is_n_apr"] = r.is_n_apr;
    j["result"] = slice_state_json(r.result);
    j["result_dual"] = quiver_to_json(r.result_dual);
    return j;
}

std::string export_dot(const SliceEmbedding& s, const DotOptions& opts) {
    DotOptions o = opts;
    if (o.graph_name.empty()) o.graph_name = s.ambient().base().name() + "-slice";
    return export_dot(truncation(s), o);
}

std::string enumeration_dot(const Enumeration& e) {
    std::ostringstream os;
    os << "digraph \"classes\" {\n";
    os << "  node [shape=box];\n";
    for (std::size_t c = 0; c < e.classes.size(); ++c)
        os << "  \"c" << c << "\" [label=\"class " << c << " (" << e.classes[c].members.size() << ")\"];\n";
    for (const auto& [a, b] : e.class_edges) os << "  \"c" << a << "\" -> \"c" << b << "\";\n";
    os << "}\n";
    return os.str();
}

Session::Session(std::shared_ptr<const WindowedZQ> ambient, SliceEmbedding start)
    : ambient_(std::move(ambient)), start_(std::move(start)), current_(start_) {
    CompletenessReport rep = is_complete_slice(start_);
    if (!rep.complete) throw Error(ErrorCode::ConvexityRequired, "session start is not a complete slice", start_.labels());
    cached_state_ = std::make_shared<const ojson>(slice_state_json(current_));
}

long Session::version() const {
    std::shared_lock lock(mu_);
    return version_;
}

std::vector<HistoryEntry> Session::history() const {
    std::shared_lock lock(mu_);
    return history_;
}

SliceEmbedding Session::current() const {
    std::shared_lock lock(mu_);
    return current_;
}

SliceEmbedding Session::replay(std::size_t k) const {
    std::vector<HistoryEntry> h = history();
    if (k > h.size()) throw Error(ErrorCode::Usage, "replay beyond the history");
    SliceEmbedding s = start_;
    for (std::size_t i = 0; i < k; ++i) s = qm::mutate(s, h[i].at, h[i].dir);
    return s;
}

void Session::check_version(std::optional<long> expect) const {
    if (expect && *expect != version_)
        throw Error(ErrorCode::VersionConflict,
                    "expected version " + std::to_string(*expect) + ", session is at " + std::to_string(version_));
}

ojson Session::state_locked() const {
    ojson j = *cached_state_;
    ojson h = ojson::array();
    for (const auto& e : history_) h.push_back(ojson{{"vertex", e.at}, {"direction", dir_name(e.dir)}});
    j["session"] = ojson{{"version", version_}, {"history", h}};
    return j;
}

ojson Session::state() const {
    std::shared_lock lock(mu_);
    return state_locked();
}

ojson Session::layout() const {
    std::shared_lock lock(mu_);
    return layout_json(current_);
}

ojson Session::mutate(const std::string& vertex, std::optional<MutationDir> dir, std::optional<long> expect_version) {
    std::unique_lock lock(mu_);
    check_version(expect_version);
    auto cell = current_.cell_of(vertex);
    if (!cell || !current_.cells().count(*cell))
        throw Error(ErrorCode::UnknownReference, "vertex " + vertex + " is not in the current slice", {vertex});
    if (!dir) {
        bool sink = is_sink(current_, *cell), source = is_source(current_, *cell);
        if (sink && source) throw Error(ErrorCode::Usage, vertex + " is both a sink and a source; give a direction", {vertex});
        if (!sink && !source) throw Error(ErrorCode::NotMovable, vertex + " is neither a sink nor a source", {vertex});
        dir = sink ? MutationDir::Minus : MutationDir::Plus;
    }
    SliceEmbedding next = qm::mutate(current_, *cell, *dir);
    auto state = std::make_shared<const ojson>(slice_state_json(next));
    current_ = std::move(next);
    history_.push_back({vertex, *dir});
    ++version_;
    cached_state_ = std::move(state);
    return state_locked();
}

ojson Session::undo(std::optional<long> expect_version) {
    std::unique_lock lock(mu_);
    check_version(expect_version);
    if (history_.empty()) throw Error(ErrorCode::Usage, "nothing to undo");
    SliceEmbedding s = start_;
    for (std::size_t i = 0; i + 1 < history_.size(); ++i) s = qm::mutate(s, history_[i].at, history_[i].dir);
    auto state = std::make_shared<const ojson>(slice_state_json(s));
    current_ = std::move(s);
    history_.pop_back();
    ++version_;
    cached_state_ = std::move(state);
    return state_locked();
}

ojson Session::enumeration() const {
    std::shared_ptr<const Enumeration> e;
    {
        std::lock_guard g(enum_mu_);
        if (!enumeration_) enumeration_ = std::make_shared<const Enumeration>(enumerate_slices(start_));
        e = enumeration_;
    }
    ojson j = enumeration_json(*e);
    SliceEmbedding cur = current().normalized();
    ojson mark = nullptr;
    for (std::size_t k = 0; k < e->nodes.size(); ++k)
        if (e->nodes[k].slice.cells() == cur.cells()) {
            mark = ojson{{"node", k}, {"class", e->nodes[k].cls}};
            break;
        }
    j["current"] = mark;
    return j;
}

namespace {

void reply(httplib::Response& res, const ojson& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(2) + "\n", "application/json");
}

template <class F>
void guarded(httplib::Response& res, F&& f) {
    try {
        reply(res, f());
    } catch (const Error& e) {
        reply(res, error_to_json(e), e.code() == ErrorCode::VersionConflict ? 409 : 400);
    } catch (const nlohmann::json::exception& e) {
        reply(res, error_to_json(Error(ErrorCode::ParseError, e.what())), 400);
    }
}

std::optional<long> expected(const nlohmann::json& body) {
    if (body.contains("expect_version")) return body.at("expect_version").get<long>();
    return std::nullopt;
}

nlohmann::json body_of(const httplib::Request& req) {
    if (req.body.empty()) return nlohmann::json::object();
    auto j = nlohmann::json::parse(req.body);
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "request body must be a JSON object");
    return j;
}

}  // namespace

void install_routes(httplib::Server& server, Session& session) {
    server.Get("/api/slice", [&](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] { return session.state(); });
    });
    server.Get("/api/layout", [&](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] { return session.layout(); });
    });
    server.Get("/api/enumeration", [&](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] { return session.enumeration(); });
    });
    server.Post("/api/mutate", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto body = body_of(req);
            if (!body.contains("vertex") || !body.at("vertex").is_string())
                throw Error(ErrorCode::Usage, "mutate needs a string field \"vertex\"");
            std::optional<MutationDir> dir;
            if (body.contains("direction")) dir = parse_dir(body.at("direction").get<std::string>());
            return session.mutate(body.at("vertex").get<std::string>(), dir, expected(body));
        });
    });
    server.Post("/api/undo", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { return session.undo(expected(body_of(req))); });
    });
}

}  // namespace qm
