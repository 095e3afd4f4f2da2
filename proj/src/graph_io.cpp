#include "hksim/graph_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "hksim/format.hpp"

namespace hksim {

namespace {

bool is_comment_or_blank(std::string_view line) {
    auto pos = line.find_first_not_of(" \t\r");
    return pos == std::string_view::npos || line[pos] == '#' || line[pos] == '%';
}

std::ifstream open_for_read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path.string() + " for reading");
    return in;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open " + path.string() + " for writing");
    return out;
}

void check_written(const std::ofstream& out, const std::filesystem::path& path) {
    if (!out) throw io_error("write to " + path.string() + " failed");
}

}  // namespace

WeightedGraph parse_edge_list(std::istream& in, const std::string& source_name, EdgeListOptions options) {
    std::unordered_map<long long, node_id> index_of;
    std::vector<std::int64_t> labels;
    std::vector<Edge> edges;
    std::unordered_map<std::uint64_t, std::pair<std::size_t, std::size_t>> seen;  // key -> (edge, line)

    auto intern = [&](long long label) {
        auto [it, inserted] = index_of.try_emplace(label, static_cast<node_id>(labels.size()));
        if (inserted) labels.push_back(label);
        return it->second;
    };

    std::string line;
    std::size_t line_no = 0;
    bool first_record = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_comment_or_blank(line)) continue;
        auto fields = split_fields(line);
        const bool header_candidate = first_record;
        first_record = false;
        if (header_candidate && !fields.empty() && !parse_integer(fields[0])) continue;
        if (fields.size() != 3) {
            throw parse_error(source_name, line_no,
                              "expected 3 fields `u v w`, found " + std::to_string(fields.size()));
        }
        auto u = parse_integer(fields[0]);
        auto v = parse_integer(fields[1]);
        auto w = parse_double(fields[2]);
        if (!u || !v) throw parse_error(source_name, line_no, "node ids must be integers");
        if (!w) throw parse_error(source_name, line_no, "weight is not a number");
        if (*u == *v) throw graph_error(source_name + ":" + std::to_string(line_no) + ": self-loop on node " + std::to_string(*u));
        if (!(*w > 0.0) || !std::isfinite(*w)) {
            throw graph_error(source_name + ":" + std::to_string(line_no) + ": non-positive weight " +
                              std::string(fields[2]));
        }
        node_id a = intern(*u);
        node_id b = intern(*v);
        std::uint64_t key = a < b ? (std::uint64_t{a} << 32 | b) : (std::uint64_t{b} << 32 | a);
        auto [it, fresh] = seen.try_emplace(key, edges.size(), line_no);
        if (!fresh) {
            const auto& prior = edges[it->second.first];
            bool reversed = prior.u == b && prior.v == a;
            if (options.merge_reverse_duplicates && reversed && prior.w == *w) continue;
            throw graph_error(source_name + ":" + std::to_string(line_no) + ": duplicate edge (" +
                              std::to_string(*u) + "," + std::to_string(*v) + "), first seen on line " +
                              std::to_string(it->second.second));
        }
        edges.push_back({a, b, *w});
    }
    WeightedGraph g(labels.size(), std::move(edges));
    if (labels.empty()) return g;
    return g.with_labels(std::move(labels));
}

WeightedGraph load_edge_list(const std::filesystem::path& path, EdgeListOptions options) {
    auto in = open_for_read(path);
    return parse_edge_list(in, path.string(), options);
}

WeightedGraph parse_communities(std::istream& in, const std::string& source_name, const WeightedGraph& g) {
    std::unordered_map<std::int64_t, node_id> index_of;
    for (node_id i = 0; i < g.node_count(); ++i) index_of.emplace(g.label(i), i);

    std::vector<std::int64_t> community(g.node_count(), 0);
    std::vector<bool> assigned(g.node_count(), false);
    std::string line;
    std::size_t line_no = 0;
    bool first_record = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_comment_or_blank(line)) continue;
        auto fields = split_fields(line);
        const bool header_candidate = first_record;
        first_record = false;
        if (header_candidate && !fields.empty() && !parse_integer(fields[0])) continue;
        if (fields.size() != 2) {
            throw parse_error(source_name, line_no,
                              "expected 2 fields `node community`, found " + std::to_string(fields.size()));
        }
        auto node = parse_integer(fields[0]);
        auto comm = parse_integer(fields[1]);
        if (!node || !comm) throw parse_error(source_name, line_no, "node and community ids must be integers");
        auto it = index_of.find(*node);
        if (it == index_of.end()) {
            throw graph_error(source_name + ":" + std::to_string(line_no) + ": unknown node " + std::to_string(*node));
        }
        if (assigned[it->second]) {
            throw graph_error(source_name + ":" + std::to_string(line_no) + ": node " + std::to_string(*node) +
                              " listed twice");
        }
        assigned[it->second] = true;
        community[it->second] = *comm;
    }
    std::vector<std::int64_t> missing;
    for (node_id i = 0; i < g.node_count(); ++i) {
        if (!assigned[i]) missing.push_back(g.label(i));
    }
    if (!missing.empty()) {
        std::sort(missing.begin(), missing.end());
        std::string msg = source_name + ": ";
        if (missing.size() == 1) {
            msg += "node " + std::to_string(missing[0]) + " has no community";
        } else {
            msg += std::to_string(missing.size()) + " nodes have no community:";
            for (std::size_t k = 0; k < missing.size() && k < 20; ++k) msg += " " + std::to_string(missing[k]);
            if (missing.size() > 20) msg += " ...";
        }
        throw graph_error(msg);
    }
    return g.with_communities(std::move(community));
}

WeightedGraph load_communities(const std::filesystem::path& path, const WeightedGraph& g) {
    auto in = open_for_read(path);
    return parse_communities(in, path.string(), g);
}

void write_edge_list(const WeightedGraph& g, std::ostream& out) {
    struct Row {
        std::int64_t a, b;
        double w;
    };
    std::vector<Row> rows;
    rows.reserve(g.edge_count());
    for (const auto& e : g.edges()) {
        auto a = g.label(e.u);
        auto b = g.label(e.v);
        if (a > b) std::swap(a, b);
        rows.push_back({a, b, e.w});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    });
    for (const auto& r : rows) out << r.a << ' ' << r.b << ' ' << format_double(r.w) << '\n';
}

void save_edge_list(const WeightedGraph& g, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    write_edge_list(g, out);
    out.flush();
    check_written(out, path);
}

void write_communities(const WeightedGraph& g, std::ostream& out) {
    if (!g.has_communities()) throw graph_error("graph has no communities to write");
    std::vector<node_id> order(g.node_count());
    std::iota(order.begin(), order.end(), node_id{0});
    std::sort(order.begin(), order.end(), [&](node_id a, node_id b) { return g.label(a) < g.label(b); });
    for (auto i : order) out << g.label(i) << ' ' << g.communities()[i] << '\n';
}

void save_communities(const WeightedGraph& g, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    write_communities(g, out);
    out.flush();
    check_written(out, path);
}

}  // namespace hksim
