#include "quivermute/io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace qm {

namespace {

struct LineCol {
    std::size_t line = 1, col = 1;
};

LineCol locate(const std::string& text, std::size_t offset) {
    LineCol lc;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++lc.line;
            lc.col = 1;
        } else {
            ++lc.col;
        }
    }
    return lc;
}

// Maps JSON pointers to the byte offset where each value starts. Only run on text that
// nlohmann already accepted, so the scanner can assume well-formed input.
class PointerScanner {
public:
    explicit PointerScanner(const std::string& t) : t_(t) {}
    std::map<std::string, std::size_t> scan() {
        skip_ws();
        value("");
        return out_;
    }

private:
    void skip_ws() {
        while (i_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[i_]))) ++i_;
    }
    std::string string_token() {
        std::string s;
        ++i_;
        while (i_ < t_.size() && t_[i_] != '"') {
            if (t_[i_] == '\\') ++i_;
            if (i_ < t_.size()) s += t_[i_++];
        }
        ++i_;
        return s;
    }
    static std::string escape(const std::string& k) {
        std::string e;
        for (char c : k) {
            if (c == '~') e += "~0";
            else if (c == '/') e += "~1";
            else e += c;
        }
        return e;
    }
    void value(const std::string& ptr) {
        skip_ws();
        out_[ptr] = i_;
        if (i_ >= t_.size()) return;
        char c = t_[i_];
        if (c == '{') {
            ++i_;
            skip_ws();
            if (t_[i_] == '}') {
                ++i_;
                return;
            }
            while (i_ < t_.size()) {
                skip_ws();
                std::size_t key_at = i_;
                std::string key = string_token();
                out_[ptr + "/" + escape(key) + "#key"] = key_at;
                skip_ws();
                ++i_;  // ':'
                value(ptr + "/" + escape(key));
                skip_ws();
                if (t_[i_] == ',') {
                    ++i_;
                    continue;
                }
                ++i_;  // '}'
                return;
            }
        } else if (c == '[') {
            ++i_;
            skip_ws();
            if (t_[i_] == ']') {
                ++i_;
                return;
            }
            for (int k = 0; i_ < t_.size(); ++k) {
                value(ptr + "/" + std::to_string(k));
                skip_ws();
                if (t_[i_] == ',') {
                    ++i_;
                    continue;
                }
                ++i_;
                return;
            }
        } else if (c == '"') {
            string_token();
        } else {
            while (i_ < t_.size() && !std::strchr(",]} \t\r\n", t_[i_])) ++i_;
        }
    }

    const std::string& t_;
    std::size_t i_ = 0;
    std::map<std::string, std::size_t> out_;
};

class SchemaError : public std::exception {
public:
    SchemaError(std::string ptr, std::string msg, bool key = false)
        : ptr_(std::move(ptr)), msg_(std::move(msg)), key_(key) {}
    const std::string& ptr() const { return ptr_; }
    const std::string& msg() const { return msg_; }
    bool key() const { return key_; }
    const char* what() const noexcept override { return msg_.c_str(); }

private:
    std::string ptr_, msg_;
    bool key_;
};

void only_keys(const nlohmann::json& j, const std::string& ptr, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw SchemaError(ptr, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw SchemaError(ptr + "/" + it.key(), "unknown field \"" + it.key() + "\"", true);
    }
}

const nlohmann::json& need(const nlohmann::json& j, const std::string& ptr, const char* key) {
    if (!j.contains(key)) throw SchemaError(ptr, std::string("missing field \"") + key + "\"");
    return j.at(key);
}

std::string need_string(const nlohmann::json& j, const std::string& ptr) {
    if (!j.is_string()) throw SchemaError(ptr, "expected a string");
    return j.get<std::string>();
}

int need_int(const nlohmann::json& j, const std::string& ptr) {
    if (!j.is_number_integer()) throw SchemaError(ptr, "expected an integer");
    return j.get<int>();
}

QuiverData data_from_json(const nlohmann::json& j) {
    QuiverData d;
    only_keys(j, "", {"name", "vertices", "arrows", "relations", "translation", "window"});
    d.name = need_string(need(j, "", "name"), "/name");
    const auto& vs = need(j, "", "vertices");
    if (!vs.is_array()) throw SchemaError("/vertices", "expected an array");
    for (std::size_t k = 0; k < vs.size(); ++k) d.vertices.push_back(need_string(vs[k], "/vertices/" + std::to_string(k)));
    const auto& as = need(j, "", "arrows");
    if (!as.is_array()) throw SchemaError("/arrows", "expected an array");
    for (std::size_t k = 0; k < as.size(); ++k) {
        std::string p = "/arrows/" + std::to_string(k);
        only_keys(as[k], p, {"id", "from", "to"});
        d.arrows.push_back({need_string(need(as[k], p, "id"), p + "/id"), need_string(need(as[k], p, "from"), p + "/from"),
                            need_string(need(as[k], p, "to"), p + "/to")});
    }
    const auto& rs = need(j, "", "relations");
    if (!rs.is_array()) throw SchemaError("/relations", "expected an array");
    for (std::size_t k = 0; k < rs.size(); ++k) {
        std::string p = "/relations/" + std::to_string(k);
        if (!rs[k].is_array()) throw SchemaError(p, "expected an array of terms");
        std::vector<RawTerm> rel;
        for (std::size_t m = 0; m < rs[k].size(); ++m) {
            std::string tp = p + "/" + std::to_string(m);
            only_keys(rs[k][m], tp, {"coeff", "path"});
            RawTerm t;
            std::string c = need_string(need(rs[k][m], tp, "coeff"), tp + "/coeff");
            try {
                t.coeff = parse_rational(c);
            } catch (const Error& e) {
                throw SchemaError(tp + "/coeff", e.what());
            }
            const auto& path = need(rs[k][m], tp, "path");
            if (!path.is_array()) throw SchemaError(tp + "/path", "expected an array of arrow ids");
            for (std::size_t x = 0; x < path.size(); ++x)
                t.path.push_back(need_string(path[x], tp + "/path/" + std::to_string(x)));
            rel.push_back(std::move(t));
        }
        d.relations.push_back(std::move(rel));
    }
    if (j.contains("translation")) {
        const auto& tj = j.at("translation");
        only_keys(tj, "/translation", {"n", "tau"});
        TranslationSpec ts;
        ts.n = need_int(need(tj, "/translation", "n"), "/translation/n");
        const auto& tau = need(tj, "/translation", "tau");
        if (!tau.is_object()) throw SchemaError("/translation/tau", "expected an object");
        for (auto it = tau.begin(); it != tau.end(); ++it)
            ts.tau[it.key()] = need_string(it.value(), "/translation/tau/" + it.key());
        d.translation = ts;
    }
    if (j.contains("window")) {
        const auto& wj = j.at("window");
        only_keys(wj, "/window", {"from", "to"});
        d.window = Window{need_int(need(wj, "/window", "from"), "/window/from"), need_int(need(wj, "/window", "to"), "/window/to")};
    }
    return d;
}

}  // namespace

BoundQuiver quiver_from_json(const nlohmann::json& j, const std::string& where) {
    try {
        return BoundQuiver::from_data(data_from_json(j));
    } catch (const SchemaError& e) {
        throw Error(ErrorCode::ParseError, where + ": " + (e.ptr().empty() ? "/" : e.ptr()) + ": " + e.msg(),
                    {e.ptr()});
    }
}

BoundQuiver parse_quiver(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        LineCol lc = locate(text, e.byte > 0 ? e.byte - 1 : 0);
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(lc.line) + ", column " + std::to_string(lc.col) + ": malformed JSON",
                    {std::to_string(lc.line) + ":" + std::to_string(lc.col)});
    }
    try {
        return BoundQuiver::from_data(data_from_json(j));
    } catch (const SchemaError& e) {
        auto pos = PointerScanner(text).scan();
        auto it = pos.find(e.key() ? e.ptr() + "#key" : e.ptr());
        std::string where = e.ptr().empty() ? "/" : e.ptr();
        std::vector<std::string> w{where};
        if (it != pos.end()) {
            LineCol lc = locate(text, it->second);
            where = "line " + std::to_string(lc.line) + ", column " + std::to_string(lc.col) + " (" + where + ")";
            w.push_back(std::to_string(lc.line) + ":" + std::to_string(lc.col));
        }
        throw Error(ErrorCode::ParseError, where + ": " + e.msg(), w);
    }
}

ojson quiver_to_json(const BoundQuiver& q) {
    ojson j;
    j["name"] = q.name();
    j["vertices"] = q.vertices();
    ojson arrows = ojson::array();
    for (const auto& a : q.arrows()) {
        ojson x;
        x["id"] = a.id;
        x["from"] = a.source;
        x["to"] = a.target;
        arrows.push_back(x);
    }
    j["arrows"] = arrows;
    ojson rels = ojson::array();
    for (const auto& r : q.relations()) {
        ojson rel = ojson::array();
        for (const auto& t : r) {
            ojson term;
            term["coeff"] = to_string(t.coeff);
            ojson path = ojson::array();
            for (int a : t.path.arrows) path.push_back(q.arrows()[a].id);
            term["path"] = path;
            rel.push_back(term);
        }
        rels.push_back(rel);
    }
    j["relations"] = rels;
    if (q.translation()) {
        ojson t;
        t["n"] = q.translation()->n;
        std::vector<std::pair<std::string, std::string>> entries(q.translation()->tau.begin(),
                                                                 q.translation()->tau.end());
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return natural_less(a.first, b.first); });
        ojson tau = ojson::object();
        for (const auto& [k, v] : entries) tau[k] = v;
        t["tau"] = tau;
        j["translation"] = t;
    }
    if (q.window()) {
        ojson w;
        w["from"] = q.window()->from;
        w["to"] = q.window()->to;
        j["window"] = w;
    }
    return j;
}

std::string serialize_quiver(const BoundQuiver& q) { return quiver_to_json(q).dump(2) + "\n"; }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Usage, "cannot read " + path, {path});
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Usage, "cannot write " + path, {path});
    out << text;
}

BoundQuiver load_quiver(const std::string& path) {
    std::string text = read_file(path);
    try {
        return parse_quiver(text);
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.what(), e.witness());
    }
}

void save_quiver(const BoundQuiver& q, const std::string& path) { write_file(path, serialize_quiver(q)); }

std::optional<int> label_level(const std::string& label) {
    auto at = label.rfind('@');
    if (at == std::string::npos || at + 1 >= label.size()) return std::nullopt;
    std::string rest = label.substr(at + 1);
    std::size_t k = rest[0] == '-' ? 1 : 0;
    if (k >= rest.size()) return std::nullopt;
    for (std::size_t i = k; i < rest.size(); ++i)
        if (rest[i] < '0' || rest[i] > '9') return std::nullopt;
    return std::stoi(rest);
}

std::string label_base(const std::string& label) {
    if (!label_level(label)) return label;
    return label.substr(0, label.rfind('@'));
}

namespace {
std::string quote(const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') q += '\\';
        q += c;
    }
    return q + "\"";
}
}  // namespace

std::string export_dot(const BoundQuiver& q, const DotOptions& opts) {
    std::ostringstream os;
    os << "digraph " << quote(opts.graph_name.empty() ? q.name() : opts.graph_name) << " {\n";
    os << "  rankdir=LR;\n";
    os << "  node [shape=circle];\n";
    if (opts.relations_as_comments)
        for (const auto& r : q.relations()) os << "  // relation: " << q.lincomb_str(r) << "\n";
    std::map<int, std::vector<std::string>> levels;
    std::vector<std::string> loose;
    for (const auto& v : q.vertices()) {
        if (auto l = label_level(v)) levels[*l].push_back(v);
        else loose.push_back(v);
    }
    for (const auto& [l, vs] : levels) {
        os << "  { rank=same;";
        for (const auto& v : vs) os << " " << quote(v) << ";";
        os << " }  // level " << l << "\n";
    }
    for (const auto& v : loose) os << "  " << quote(v) << ";\n";
    for (const auto& a : q.arrows()) os << "  " << quote(a.source) << " -> " << quote(a.target) << " [label=" << quote(a.id) << "];\n";
    os << "}\n";
    return os.str();
}

}  // namespace qm
