#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <fstream>
#include <istream>
#include <filesystem>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rls {

using Vertex = int;

struct Edge {
    Vertex u;
    Vertex v;
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Malformed DIMACS input. `line()` is 1-based, 0 when the error is not tied
/// to a particular line (e.g. a missing problem line).
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& detail, const std::string& source = {})
        : std::runtime_error(format(line, detail, source)), line_(line), detail_(detail) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    static std::string format(std::size_t line, const std::string& detail, const std::string& source) {
        std::string out = source.empty() ? "" : source + ":";
        if (line) out += std::to_string(line) + ":";
        return out + (out.empty() ? "" : " ") + detail;
    }

    std::size_t line_;
    std::string detail_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Undirected simple graph with 0-based vertex ids. Adjacency is stored in
/// compressed rows sorted by neighbor id; immutable after construction.
class Graph {
public:
    Graph() = default;

    /// Builds from an edge list. Duplicate edges (either orientation) are
    /// collapsed and counted; self-loops and out-of-range ids throw.
    Graph(std::size_t n, std::span<const Edge> edges) : n_(n) {
        edges_.reserve(edges.size());
        for (Edge e : edges) {
            if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= n ||
                static_cast<std::size_t>(e.v) >= n)
                throw std::invalid_argument("edge endpoint out of range");
            if (e.u == e.v) throw std::invalid_argument("self-loop");
            edges_.push_back(e.u < e.v ? e : Edge{e.v, e.u});
        }
        std::sort(edges_.begin(), edges_.end());
        auto last = std::unique(edges_.begin(), edges_.end());
        duplicates_ = static_cast<std::size_t>(edges_.end() - last);
        edges_.erase(last, edges_.end());

        offsets_.assign(n_ + 1, 0);
        for (Edge e : edges_) {
            ++offsets_[e.u + 1];
            ++offsets_[e.v + 1];
        }
        for (std::size_t i = 0; i < n_; ++i) offsets_[i + 1] += offsets_[i];
        targets_.resize(offsets_[n_]);
        std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
        // edges_ is sorted with u < v: lower neighbors first, then higher,
        // leaves every row sorted
        for (Edge e : edges_) targets_[fill[e.v]++] = e.u;
        for (Edge e : edges_) targets_[fill[e.u]++] = e.v;
    }

    std::size_t vertex_count() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    std::span<const Edge> edges() const noexcept { return edges_; }

    /// Number of input edges dropped as duplicates.
    std::size_t duplicate_edges() const noexcept { return duplicates_; }

    std::span<const Vertex> neighbors(Vertex v) const noexcept {
        return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
    }

    std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

    std::size_t max_degree() const noexcept {
        std::size_t best = 0;
        for (std::size_t v = 0; v < n_; ++v) best = std::max(best, degree(static_cast<Vertex>(v)));
        return best;
    }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Vertex> targets_;
    std::size_t duplicates_ = 0;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

inline long long parse_int(std::string_view tok, std::size_t line_no) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError(line_no, "malformed integer '" + std::string(tok) + "'");
    return value;
}

}  // namespace detail

/// Reads a DIMACS `.col` instance. Accepts `p edge` and `p col` headers,
/// LF or CRLF line endings, and either orientation of duplicate edges.
inline Graph parse_dimacs(std::istream& in) {
    std::string raw;
    std::size_t line_no = 0;
    bool have_header = false;
    long long n = 0, declared_m = 0;
    std::vector<Edge> edges;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line(raw);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        auto tok = detail::split_ws(line);
        if (tok.empty() || tok[0] == "c") continue;

        if (tok[0] == "p") {
            if (have_header) throw ParseError(line_no, "duplicate problem line");
            if (tok.size() != 4 || (tok[1] != "edge" && tok[1] != "col"))
                throw ParseError(line_no, "expected 'p edge <n> <m>'");
            n = detail::parse_int(tok[2], line_no);
            declared_m = detail::parse_int(tok[3], line_no);
            if (n < 1) throw ParseError(line_no, "vertex count must be positive");
            if (declared_m < 0) throw ParseError(line_no, "edge count must be non-negative");
            have_header = true;
        } else if (tok[0] == "e") {
            if (!have_header) throw ParseError(line_no, "edge line before problem line");
            if (tok.size() != 3) throw ParseError(line_no, "expected 'e <u> <v>'");
            long long u = detail::parse_int(tok[1], line_no);
            long long v = detail::parse_int(tok[2], line_no);
            if (u < 1 || u > n || v < 1 || v > n)
                throw ParseError(line_no, "vertex id out of range 1.." + std::to_string(n));
            if (u == v) throw ParseError(line_no, "self-loop on vertex " + std::to_string(u));
            edges.push_back({static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1)});
        } else {
            throw ParseError(line_no, "unknown line type '" + std::string(tok[0]) + "'");
        }
    }
    if (!have_header) throw ParseError(0, "missing problem line");

    Graph g(static_cast<std::size_t>(n), edges);
    if (static_cast<long long>(g.edge_count()) > declared_m)
        throw ParseError(0, "problem line declares " + std::to_string(declared_m) + " edges, found " +
                                std::to_string(g.edge_count()) + " distinct");
    return g;
}

inline Graph parse_dimacs(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_dimacs(in);
}

inline Graph load_dimacs(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return parse_dimacs(in);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.detail(), path.string());
    }
}

/// Writes `g` in canonical form: one `e` line per distinct edge, smaller id
/// first, 1-based.
inline void write_dimacs(std::ostream& out, const Graph& g) {
    out << "p edge " << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (Edge e : g.edges()) out << "e " << e.u + 1 << ' ' << e.v + 1 << '\n';
}

}  // namespace rls
