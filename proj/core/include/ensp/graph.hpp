#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ensp/pair_bits.hpp"

namespace ensp {

// Simple undirected graph on vertices 0..n-1, no loops or parallel edges.
// Immutable once built; adjacency lives in a triangular bitset.
class Graph {
public:
    Graph() = default;
    explicit Graph(PairBits bits);

    static Graph empty(int n) { return Graph(PairBits(n)); }
    static Graph complete(int n);
    static Graph from_edge_list(int n, const std::vector<std::pair<int, int>>& edges);
    // Interprets the low bits of `mask` as pair bits in row-major order.
    // Valid for n <= 11 (at most 55 pairs).
    static Graph from_pair_mask(int n, std::uint64_t mask);

    int n() const { return n_; }
    std::int64_t edge_count() const { return edge_count_; }
    bool has_edge(int i, int j) const { return bits_.test(i, j); }
    const PairBits& bits() const { return bits_; }
    std::uint64_t pair_mask() const { return bits_.low_mask(); }

    std::vector<int> degrees() const;
    Graph complement() const;

    template <class F>
    void for_each_edge(F&& f) const {
        bits_.for_each_set(std::forward<F>(f));
    }

    // y = A x
    void adjacency_matvec(const std::vector<double>& x, std::vector<double>& y) const;

    bool operator==(const Graph&) const = default;

private:
    int n_ = 0;
    std::int64_t edge_count_ = 0;
    PairBits bits_;
};

// Text edge-list format: first line "n m", then m lines "i j" with
// 0 <= i < j < n.  Loops, duplicates and out-of-range vertices are rejected.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);
void write_edge_list_file(const std::string& path, const Graph& g);

}  // namespace ensp
