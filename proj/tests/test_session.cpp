#include "quivermute/cli.hpp"
#include "quivermute/isomorphism.hpp"
#include "quivermute/session.hpp"
#include "support.hpp"

#include <doctest.h>
#include <httplib.h>

#include <filesystem>
#include <sstream>
#include <thread>

using namespace qm;

namespace {

std::shared_ptr<const WindowedZQ> a3_ambient() {
    return WindowedZQ::build(quadratic_dual(qmt::a3_fixture()), {-2, 4});
}

// Serves one session on an ephemeral port for the lifetime of the object.
struct Served {
    Session session;
    httplib::Server server;
    std::thread thread;
    int port = 0;

    explicit Served(std::shared_ptr<const WindowedZQ> amb) : session(amb, SliceEmbedding::base_copy(amb, 0)) {
        install_routes(server, session);
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~Served() {
        server.stop();
        thread.join();
    }
    httplib::Client client() const { return httplib::Client("127.0.0.1", port); }
};

ojson post(httplib::Client& c, const std::string& path, const ojson& body, int expect_status) {
    auto r = c.Post(path, body.dump(), "application/json");
    REQUIRE(r);
    CHECK(r->status == expect_status);
    return ojson::parse(r->body);
}

ojson get(httplib::Client& c, const std::string& path) {
    auto r = c.Get(path);
    REQUIRE(r);
    CHECK(r->status == 200);
    return ojson::parse(r->body);
}

}  // namespace

TEST_CASE("session history, undo and replay") {
    auto amb = a3_ambient();
    auto start = SliceEmbedding::base_copy(amb, 0);
    Session s(amb, start);
    CHECK(s.version() == 0);
    s.mutate("1@0", std::nullopt);
    s.mutate("2@0", MutationDir::Plus);
    s.mutate("3@0", std::nullopt);
    CHECK(s.history().size() == 3);
    CHECK(s.current() == s.replay(3));
    s.undo();
    CHECK(s.current() == s.replay(2));
    CHECK(s.history().size() == 2);
    s.mutate("4@0", std::nullopt);
    s.mutate("1@1", std::nullopt);
    CHECK(quiver_isomorphism(dual_truncation(s.current()), qmt::a3_fixture()));
    CHECK(s.version() == 6);
    CHECK(s.state()["session"]["version"] == 6);

    long v = s.version();
    CHECK_THROWS_AS(s.mutate("6@0", std::nullopt, v - 1), Error);
    try {
        s.undo(v - 1);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::VersionConflict);
    }
    CHECK(s.version() == v);

    try {
        s.mutate("2@1", std::nullopt);  // neither sink nor source
        FAIL("accepted a non-movable vertex");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotMovable);
    }
}

TEST_CASE("undo after k mutations equals replay of k-1") {
    auto amb = a3_ambient();
    Session s(amb, SliceEmbedding::base_copy(amb, 0));
    std::mt19937 rng(3);
    for (int k = 0; k < 12; ++k) {
        auto state = s.state();
        std::vector<std::pair<std::string, std::string>> moves;
        for (const auto& m : state["movable"]["forward"])
            if (m["sink"].get<bool>()) moves.push_back({m["vertex"].get<std::string>(), "minus"});
        for (const auto& m : state["movable"]["backward"])
            if (m["source"].get<bool>()) moves.push_back({m["vertex"].get<std::string>(), "plus"});
        REQUIRE_FALSE(moves.empty());
        auto [at, dir] = moves[rng() % moves.size()];
        s.mutate(at, parse_dir(dir));
        CHECK(is_complete_slice(s.current()).complete);
    }
    for (std::size_t k = 12; k > 0; --k) {
        s.undo();
        CHECK(s.current() == s.replay(k - 1));
    }
    CHECK(s.current() == SliceEmbedding::base_copy(amb, 0));
    try {
        s.undo();
        FAIL("undo past the start");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Usage);
    }
}

TEST_CASE("HTTP endpoints") {
    Served srv(a3_ambient());
    auto c = srv.client();

    ojson slice = get(c, "/api/slice");
    CHECK(slice["complete"] == true);
    CHECK(slice["session"]["version"] == 0);
    CHECK(slice.contains("dual"));
    CHECK(get(c, "/api/layout")["vertices"].size() == 6);
    ojson en = get(c, "/api/enumeration");
    CHECK(en["node_count"] == 12);
    CHECK(en["class_count"] == 4);

    // The five mutations of the example chain, with the branch taken through an undo.
    for (const char* v : {"1@0", "2@0", "3@0"}) post(c, "/api/mutate", {{"vertex", v}}, 200);
    post(c, "/api/undo", ojson::object(), 200);
    post(c, "/api/mutate", {{"vertex", "4@0"}, {"direction", "plus"}}, 200);
    ojson last = post(c, "/api/mutate", {{"vertex", "1@1"}}, 200);
    CHECK(quiver_isomorphism(quiver_from_json(last["dual"]), qmt::a3_fixture()));
    CHECK(get(c, "/api/enumeration")["current"]["class"] == en["current"]["class"]);

    ojson bad = post(c, "/api/mutate", {{"vertex", "2@1"}}, 400);
    CHECK(bad["error"]["code"] == "NOT_MOVABLE");
    CHECK(post(c, "/api/mutate", {{"vertex", "nowhere"}}, 400)["error"]["code"] == "UNKNOWN_REFERENCE");
    CHECK(post(c, "/api/mutate", {{"vertex", "6@0"}, {"direction", "sideways"}}, 400)["error"]["code"] == "USAGE");
    auto raw = c.Post("/api/mutate", "{not json", "application/json");
    REQUIRE(raw);
    CHECK(raw->status == 400);
    CHECK(ojson::parse(raw->body)["error"]["code"] == "PARSE_ERROR");

    ojson now = get(c, "/api/slice");
    long version = now["session"]["version"];
    std::string sink = now["movable"]["forward"][0]["vertex"];
    REQUIRE(now["movable"]["forward"][0]["sink"] == true);
    ojson conflict = post(c, "/api/mutate", {{"vertex", sink}, {"expect_version", version - 1}}, 409);
    CHECK(conflict["error"]["code"] == "VERSION_CONFLICT");
    post(c, "/api/mutate", {{"vertex", sink}, {"expect_version", version}}, 200);
    post(c, "/api/undo", {{"expect_version", version}}, 409);
    post(c, "/api/undo", {{"expect_version", version + 1}}, 200);
}

TEST_CASE("concurrent mutations are serialized") {
    Served srv(a3_ambient());
    std::vector<std::thread> ts;
    std::atomic<int> ok{0}, conflict{0};
    for (int k = 0; k < 8; ++k)
        ts.emplace_back([&] {
            auto c = srv.client();
            auto r = c.Post("/api/mutate", ojson{{"vertex", "1@0"}, {"expect_version", 0}}.dump(), "application/json");
            if (r && r->status == 200) ++ok;
            if (r && r->status == 409) ++conflict;
        });
    for (auto& t : ts) t.join();
    CHECK(ok == 1);
    CHECK(conflict == 7);
    CHECK(srv.session.version() == 1);
    CHECK(srv.session.current() == srv.session.replay(1));
}

TEST_CASE("CLI and service agree") {
    auto amb = a3_ambient();
    std::string path = (std::filesystem::temp_directory_path() / "quivermute-test-amb.json").string();
    save_quiver(amb->quiver(), path);

    Served srv(amb);
    auto c = srv.client();
    ojson served = post(c, "/api/mutate", {{"vertex", "6@0"}, {"direction", "minus"}}, 200);
    served.erase("session");

    std::ostringstream out, err;
    int code = run({"mutate", path, "--slice", "@0", "--at", "6@0", "--dir", "minus"}, out, err);
    CHECK(code == 0);
    CHECK(ojson::parse(out.str()) == served);
    CHECK(out.str() == served.dump(2) + "\n");

    std::ostringstream out2, err2;
    CHECK(run({"slices", path, "--start", "@0"}, out2, err2) == 0);
    ojson en = get(c, "/api/enumeration");
    en.erase("current");
    CHECK(ojson::parse(out2.str()) == en);
    std::filesystem::remove(path);
}
