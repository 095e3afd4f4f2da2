#pragma once

#include <filesystem>
#include <stdexcept>

#include "hksim/graph.hpp"

namespace hksim {

class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text input; the message carries "path:line: reason".
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& where, std::size_t line, const std::string& what)
        : std::runtime_error(where + ":" + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct EdgeListOptions {
    /// Accept each undirected edge listed in both directions (as the reference
    /// LFR tool writes it) provided both copies carry the same weight.
    bool merge_reverse_duplicates = false;
};

/// Reads `u v w` records separated by whitespace or commas. Blank lines and
/// lines starting with '#' or '%' are skipped; a first record whose leading
/// token is not an integer is treated as a header. Node ids are compacted to
/// 0..N-1 in order of first appearance and kept as labels.
WeightedGraph load_edge_list(const std::filesystem::path& path, EdgeListOptions options = {});
WeightedGraph parse_edge_list(std::istream& in, const std::string& source_name,
                              EdgeListOptions options = {});

/// Reads `node community` records keyed by the graph's labels. Every node must
/// appear exactly once.
WeightedGraph load_communities(const std::filesystem::path& path, const WeightedGraph& g);
WeightedGraph parse_communities(std::istream& in, const std::string& source_name, const WeightedGraph& g);

/// Writes one `u v w` line per edge with label(u) < label(v), sorted, weights
/// in shortest round-trip form.
void save_edge_list(const WeightedGraph& g, const std::filesystem::path& path);
void write_edge_list(const WeightedGraph& g, std::ostream& out);

/// Writes `node community` lines by label. Throws if g has no communities.
void save_communities(const WeightedGraph& g, const std::filesystem::path& path);
void write_communities(const WeightedGraph& g, std::ostream& out);

}  // namespace hksim
