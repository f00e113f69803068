#pragma once

#include "quivermute/io.hpp"
#include "quivermute/mutation.hpp"

#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

namespace httplib {
class Server;
}

namespace qm {

// "@L" for the base copy at level L, otherwise comma-separated ambient labels.
SliceEmbedding parse_slice(std::shared_ptr<const WindowedZQ> ambient, const std::string& spec);
MutationDir parse_dir(const std::string& s);  // "minus"/"plus"; USAGE otherwise

// JSON views shared by the CLI and the service, so the two agree byte for byte.
ojson error_to_json(const Error& e);
ojson cells_to_json(const SliceEmbedding& s, const std::vector<Cell>& cells);
// Labels, window, flags, truncation and dual as QuiverFile objects, movable vertices.
ojson slice_state_json(const SliceEmbedding& s);
// x = level, y = row of the tau-orbit in the base.
ojson layout_json(const SliceEmbedding& s);
ojson enumeration_json(const Enumeration& e);
ojson tilt_json(const TiltReport& r);

// The truncation drawn with levels as ranks.
std::string export_dot(const SliceEmbedding& s, const DotOptions& opts = {});
// Class graph of an enumeration.
std::string enumeration_dot(const Enumeration& e);

struct HistoryEntry {
    std::string at;  // label in the slice before the step
    MutationDir dir;
};

// One explorer session: a start slice, an undo stack, and the state replayed from it.
// Reads share a lock; mutations and undo are serialized. A stale expect_version is refused
// with VERSION_CONFLICT.
class Session {
public:
    Session(std::shared_ptr<const WindowedZQ> ambient, SliceEmbedding start);

    long version() const;
    std::vector<HistoryEntry> history() const;
    SliceEmbedding current() const;
    // Replays the first k history entries from the start slice.
    SliceEmbedding replay(std::size_t k) const;

    // Direction is inferred when absent: sinks go minus, sources plus.
    ojson mutate(const std::string& vertex, std::optional<MutationDir> dir, std::optional<long> expect_version = {});
    ojson undo(std::optional<long> expect_version = {});
    ojson state() const;
    ojson layout() const;
    // Computed on first use from the start slice; marks the class of the current slice.
    ojson enumeration() const;

private:
    ojson state_locked() const;
    void check_version(std::optional<long> expect) const;

    std::shared_ptr<const WindowedZQ> ambient_;
    SliceEmbedding start_;
    SliceEmbedding current_;
    std::vector<HistoryEntry> history_;
    long version_ = 0;
    mutable std::shared_ptr<const ojson> cached_state_;
    mutable std::shared_ptr<const Enumeration> enumeration_;
    mutable std::mutex enum_mu_;
    mutable std::shared_mutex mu_;
};

// Registers the /api routes on `server`.
void install_routes(httplib::Server& server, Session& session);

}  // namespace qm
