#include "ensp/graph.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ensp/errors.hpp"

namespace ensp {

Graph::Graph(PairBits bits)
    : n_(bits.n()), edge_count_(bits.count()), bits_(std::move(bits)) {}

Graph Graph::complete(int n) {
    PairBits b(n);
    b.flip_all();
    return Graph(std::move(b));
}

Graph Graph::from_edge_list(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n < 0) throw config_error("vertex count must be nonnegative");
    PairBits b(n);
    for (auto [i, j] : edges) {
        if (i == j) throw config_error("loop edge (" + std::to_string(i) + "," + std::to_string(j) + ")");
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw config_error("edge (" + std::to_string(i) + "," + std::to_string(j) +
                               ") out of range for n=" + std::to_string(n));
        if (b.test(i, j))
            throw config_error("duplicate edge (" + std::to_string(i) + "," + std::to_string(j) + ")");
        b.set(i, j);
    }
    return Graph(std::move(b));
}

Graph Graph::from_pair_mask(int n, std::uint64_t mask) {
    PairBits b(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if ((mask >> pair_index(i, j, n)) & 1ull) b.set(i, j);
    return Graph(std::move(b));
}

std::vector<int> Graph::degrees() const {
    std::vector<int> deg(n_, 0);
    bits_.for_each_set([&](int i, int j) {
        ++deg[i];
        ++deg[j];
    });
    return deg;
}

Graph Graph::complement() const {
    PairBits b = bits_;
    b.flip_all();
    return Graph(std::move(b));
}

void Graph::adjacency_matvec(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(n_, 0.0);
    bits_.for_each_set([&](int i, int j) {
        y[i] += x[j];
        y[j] += x[i];
    });
}

Graph read_edge_list(std::istream& in) {
    long long n = -1, m = -1;
    if (!(in >> n >> m)) throw io_error("edge list: missing header \"n m\"");
    if (n < 0 || n > 1000000) throw io_error("edge list: bad vertex count " + std::to_string(n));
    if (m < 0 || m > pair_count(static_cast<int>(n)))
        throw io_error("edge list: bad edge count " + std::to_string(m));
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long long e = 0; e < m; ++e) {
        long long i, j;
        if (!(in >> i >> j)) throw io_error("edge list: expected " + std::to_string(m) + " edges, got " + std::to_string(e));
        if (i >= j) throw io_error("edge list: edges must satisfy i < j, got " +
                                   std::to_string(i) + " " + std::to_string(j));
        edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
    try {
        return Graph::from_edge_list(static_cast<int>(n), edges);
    } catch (const config_error& e) {
        throw io_error(std::string("edge list: ") + e.what());
    }
}

Graph read_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
    out << g.n() << ' ' << g.edge_count() << '\n';
    g.for_each_edge([&](int i, int j) { out << i << ' ' << j << '\n'; });
}

void write_edge_list_file(const std::string& path, const Graph& g) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open " + path + " for writing");
    write_edge_list(out, g);
    if (!out) throw io_error("write failed: " + path);
}

}  // namespace ensp
