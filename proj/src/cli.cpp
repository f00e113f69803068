#include "quivermute/cli.hpp"

#include "quivermute/dual.hpp"
#include "quivermute/homology.hpp"
#include "quivermute/session.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <filesystem>
#include <iostream>

namespace qm {

namespace {

Window parse_window(const std::string& s) {
    auto dots = s.find("..");
    if (dots == std::string::npos) throw Error(ErrorCode::Usage, "window must look like A..B, got " + s);
    try {
        std::size_t u1 = 0, u2 = 0;
        std::string a = s.substr(0, dots), b = s.substr(dots + 2);
        Window w{std::stoi(a, &u1), std::stoi(b, &u2)};
        if (u1 != a.size() || u2 != b.size()) throw std::invalid_argument(s);
        if (w.from > w.to) throw Error(ErrorCode::Usage, "window " + s + " is empty");
        return w;
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::Usage, "window must look like A..B, got " + s);
    }
}

void emit(std::ostream& out, const ojson& j) { out << j.dump(2) << "\n"; }

void write_or_print(std::ostream& out, const std::string& path, const std::string& text) {
    if (path.empty()) out << text;
    else write_file(path, text);
}

ojson vertex_list(const BoundQuiver& q, const std::set<int>& vs) {
    ojson a = ojson::array();
    for (int v : vs) a.push_back(q.vertices()[v]);
    return a;
}

ojson translation_json(const BoundQuiver& q, const TranslationData& td) {
    ojson tau = ojson::object();
    for (const auto& [v, t] : td.tau) tau[q.vertices()[v]] = q.vertices()[t];
    return ojson{{"n", td.n},
                 {"tau", tau},
                 {"projective", vertex_list(q, td.projective)},
                 {"injective", vertex_list(q, td.injective)},
                 {"clipped", vertex_list(q, td.clipped)}};
}

ojson check_ntq(const BoundQuiver& q) {
    GradedBasis gb = finite_algebra(q);
    TranslationData td = detect_translation(gb);
    ConditionReport rep = verify_n_translation(gb, td);
    ojson conds = ojson::object();
    for (int c = 1; c <= 3; ++c) {
        ojson failures = ojson::array();
        for (const auto& it : rep.items)
            if (it.condition == c && it.status == CheckStatus::Fail)
                failures.push_back(ojson{{"vertex", q.vertices()[it.vertex]}, {"detail", it.detail}});
        conds[std::to_string(c)] = ojson{{"holds", rep.holds(c)},
                                         {"pass", rep.count(c, CheckStatus::Pass)},
                                         {"fail", rep.count(c, CheckStatus::Fail)},
                                         {"indeterminate", rep.count(c, CheckStatus::Indeterminate)},
                                         {"failures", failures}};
    }
    ojson j = translation_json(q, td);
    j["conditions"] = conds;
    j["holds"] = rep.all_hold();
    return j;
}

ojson hammock_json(const BoundQuiver& q, const std::string& vertex, const std::string& dir) {
    GradedBasis gb = finite_algebra(q);
    TranslationData td = detect_translation(gb);
    int v = q.vertex_index(vertex);
    HammockDir hd;
    if (dir == "down") hd = HammockDir::Ending;
    else if (dir == "up") hd = HammockDir::Starting;
    else throw Error(ErrorCode::Usage, "direction must be up or down, got \"" + dir + "\"");
    Hammock h = hammock(gb, td, v, hd);
    ojson entries = ojson::array();
    for (const auto& e : h.entries)
        entries.push_back(ojson{{"vertex", q.vertices()[e.vertex]}, {"distance", e.distance}, {"mu", e.mu}});
    ojson arrows = ojson::array();
    for (const auto& a : h.arrows) arrows.push_back(ojson{{"arrow", q.arrows()[a.arrow].id}, {"distance", a.distance}});
    ojson j{{"center", vertex}, {"direction", hd == HammockDir::Ending ? "ending" : "starting"}, {"entries", entries},
            {"arrows", arrows}};
    if (hd == HammockDir::Ending) {
        KoszulProfile kp = koszul_profile(gb, td, v);
        ojson terms = ojson::array();
        for (const auto& deg : kp.terms) {
            ojson t = ojson::array();
            for (const auto& [u, m] : deg) t.push_back(ojson{{"vertex", q.vertices()[u]}, {"multiplicity", m}});
            terms.push_back(t);
        }
        j["koszul_profile"] = terms;
    }
    return j;
}

ojson resolution_json(const BoundQuiver& q, const Resolution& r) {
    ojson steps = ojson::array();
    for (const auto& step : r.profile) {
        ojson s = ojson::array();
        for (const auto& t : step)
            s.push_back(ojson{{"vertex", q.vertices()[t.vertex]}, {"degree", t.degree}, {"multiplicity", t.multiplicity}});
        steps.push_back(s);
    }
    return ojson{{"complete", r.complete}, {"length", r.length()}, {"steps", steps}};
}

std::shared_ptr<const WindowedZQ> load_ambient(const std::string& path) { return ambient_from_quiver(load_quiver(path)); }

Cell slice_cell(const SliceEmbedding& s, const std::string& label) {
    auto c = s.cell_of(label);
    if (!c) throw Error(ErrorCode::UnknownReference, "no ambient vertex " + label, {label});
    return *c;
}

struct Args {
    std::string in, out, vertex, dir, window, slice, at, start, ambient, emit_dot, simple, host = "127.0.0.1";
    int max_len = 16, n = 0, port = 8080, bound = -1;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"quivermute: bound quivers, quadratic duals and slice mutations"};
    app.name("quivermute");
    app.require_subcommand(1);
    Args a;

    auto* dualize = app.add_subcommand("dualize", "quadratic dual of a quadratic bound quiver");
    dualize->add_option("IN", a.in)->required();
    dualize->add_option("-o,--output", a.out);

    auto* ntq = app.add_subcommand("check-ntq", "detect tau and check the n-translation conditions");
    ntq->add_option("IN", a.in)->required();

    auto* ham = app.add_subcommand("hammock", "tau-hammock at a vertex");
    ham->add_option("IN", a.in)->required();
    ham->add_option("--vertex", a.vertex)->required();
    ham->add_option("--dir", a.dir, "down: paths ending at the vertex; up: paths starting there")->required();

    auto* zq = app.add_subcommand("zq", "windowed Z|_{n-1}Q ambient of a properly graded quiver");
    zq->add_option("IN", a.in)->required();
    zq->add_option("--window", a.window, "levels A..B")->required();
    zq->add_option("-o,--output", a.out);

    auto* mut = app.add_subcommand("mutate", "tau-mutation of a slice");
    mut->add_option("AMB", a.in)->required();
    mut->add_option("--slice", a.slice, "\"@L\" or comma-separated labels")->required();
    mut->add_option("--at", a.at)->required();
    mut->add_option("--dir", a.dir, "minus or plus")->required();

    auto* sl = app.add_subcommand("slices", "enumerate complete slices up to shift");
    sl->add_option("AMB", a.in)->required();
    sl->add_option("--start", a.start)->required();
    sl->add_option("--emit-dot", a.emit_dot, "directory for one DOT file per class");

    auto* tilt = app.add_subcommand("tilt", "tilt report for a mutation");
    tilt->add_option("AMB", a.in)->required();
    tilt->add_option("--slice", a.slice)->required();
    tilt->add_option("--at", a.at)->required();
    tilt->add_option("--dir", a.dir)->required();

    auto* res = app.add_subcommand("resolve", "minimal projective resolution of a simple");
    res->add_option("IN", a.in)->required();
    res->add_option("--simple", a.simple)->required();
    res->add_option("--max-len", a.max_len);

    auto* napr = app.add_subcommand("verify-napr", "injective dimension and Ext vanishing at a simple projective");
    napr->add_option("IN", a.in)->required();
    napr->add_option("--vertex", a.vertex)->required();
    napr->add_option("--n", a.n)->required();

    auto* lin = app.add_subcommand("linearity", "bounded linearity of the resolutions of all simples");
    lin->add_option("IN", a.in)->required();
    lin->add_option("--bound", a.bound, "default 2(n+1)");

    auto* srv = app.add_subcommand("serve", "explorer session over HTTP");
    srv->add_option("--port", a.port);
    srv->add_option("--host", a.host);
    srv->add_option("--ambient", a.ambient)->required();
    srv->add_option("--start", a.start)->required();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << error_to_json(Error(ErrorCode::Usage, e.what())).dump() << "\n";
        return 2;
    }

    try {
        if (dualize->parsed()) {
            write_or_print(out, a.out, serialize_quiver(quadratic_dual(load_quiver(a.in))));
        } else if (ntq->parsed()) {
            emit(out, check_ntq(load_quiver(a.in)));
        } else if (ham->parsed()) {
            emit(out, hammock_json(load_quiver(a.in), a.vertex, a.dir));
        } else if (zq->parsed()) {
            auto z = WindowedZQ::build(load_quiver(a.in), parse_window(a.window));
            write_or_print(out, a.out, serialize_quiver(z->quiver()));
        } else if (mut->parsed()) {
            auto amb = load_ambient(a.in);
            SliceEmbedding s = parse_slice(amb, a.slice);
            emit(out, slice_state_json(mutate(s, slice_cell(s, a.at), parse_dir(a.dir))));
        } else if (sl->parsed()) {
            auto amb = load_ambient(a.in);
            Enumeration e = enumerate_slices(parse_slice(amb, a.start));
            if (!a.emit_dot.empty()) {
                std::filesystem::create_directories(a.emit_dot);
                for (std::size_t c = 0; c < e.classes.size(); ++c) {
                    const auto& rep = e.nodes[e.classes[c].representative].slice;
                    DotOptions o;
                    o.graph_name = "class-" + std::to_string(c);
                    write_file(a.emit_dot + "/class-" + std::to_string(c) + ".dot", export_dot(rep, o));
                }
                write_file(a.emit_dot + "/classes.dot", enumeration_dot(e));
            }
            emit(out, enumeration_json(e));
        } else if (tilt->parsed()) {
            auto amb = load_ambient(a.in);
            SliceEmbedding s = parse_slice(amb, a.slice);
            emit(out, tilt_json(tau_tilt(s, slice_cell(s, a.at), parse_dir(a.dir))));
        } else if (res->parsed()) {
            BoundQuiver q = load_quiver(a.in);
            GradedBasis gb = finite_algebra(q);
            int v = q.vertex_index(a.simple);
            emit(out, resolution_json(q, minimal_projective_resolution(gb, simple_module(gb, v), a.max_len)));
        } else if (napr->parsed()) {
            BoundQuiver q = load_quiver(a.in);
            GradedBasis gb = finite_algebra(q);
            NAprReport r = verify_n_apr_conditions(gb, q.vertex_index(a.vertex), a.n);
            ojson ext = ojson::array();
            for (int d : r.ext_dims) ext.push_back(d);
            emit(out, ojson{{"vertex", a.vertex},
                            {"n", r.n},
                            {"injective_dimension", r.injective_dimension},
                            {"injective_dimension_via_ext", r.injective_dimension_ext},
                            {"ext_dims", ext},
                            {"injective_ok", r.injective_ok()},
                            {"ext_ok", r.ext_ok()},
                            {"pass", r.pass()}});
        } else if (lin->parsed()) {
            BoundQuiver q = load_quiver(a.in);
            GradedBasis gb = finite_algebra(q);
            int bound = a.bound;
            if (bound < 0) {
                ProperGrading pg = is_properly_graded(q);
                bound = 2 * ((pg.proper ? pg.n : 1) + 1);
            }
            LinearityReport r = check_linear_resolution(gb, bound);
            ojson entries = ojson::array();
            for (const auto& e : r.entries) {
                ojson x{{"vertex", q.vertices()[e.vertex]}, {"linear", e.linear}, {"steps", e.steps}, {"complete", e.complete}};
                if (!e.linear) x["first_nonlinear_step"] = e.first_nonlinear_step;
                entries.push_back(x);
            }
            emit(out, ojson{{"bound", bound}, {"linear_up_to_bound", r.linear_up_to_bound()}, {"simples", entries}});
        } else if (srv->parsed()) {
            auto amb = load_ambient(a.ambient);
            Session session(amb, parse_slice(amb, a.start));
            httplib::Server server;
            install_routes(server, session);
            err << "listening on " << a.host << ":" << a.port << "\n";
            if (!server.listen(a.host, a.port)) throw Error(ErrorCode::Usage, "cannot listen on port " + std::to_string(a.port));
        }
    } catch (const Error& e) {
        err << error_to_json(e).dump() << "\n";
        return e.code() == ErrorCode::Usage ? 2 : 1;
    } catch (const std::filesystem::filesystem_error& e) {
        err << error_to_json(Error(ErrorCode::Usage, e.what())).dump() << "\n";
        return 2;
    }
    return 0;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace qm
