#include <doctest.h>

#include <sstream>
#include <vector>

#include "ensp/errors.hpp"
#include "ensp/graph.hpp"
#include "ensp/pair_bits.hpp"

using namespace ensp;

TEST_CASE("pair index is a row-major bijection") {
    int n = 7;
    std::int64_t expect = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) CHECK(pair_index(i, j, n) == expect++);
    CHECK(expect == pair_count(n));
}

TEST_CASE("pair bits set, clear, count and iteration") {
    PairBits bits(9);
    bits.set(2, 5);
    bits.set(5, 2);  // same slot either orientation
    bits.set(0, 8);
    bits.set(3, 4);
    CHECK(bits.count() == 3);
    CHECK(bits.test(5, 2));
    bits.clear(3, 4);
    CHECK(bits.count() == 2);

    std::vector<std::pair<int, int>> seen;
    bits.for_each_set([&](int i, int j) { seen.emplace_back(i, j); });
    CHECK(seen == std::vector<std::pair<int, int>>{{0, 8}, {2, 5}});
}

TEST_CASE("flip_all complements exactly the pair slots") {
    for (int n : {1, 2, 5, 12, 17}) {
        PairBits bits(n);
        if (n >= 3) bits.set(0, 2);
        PairBits flipped = bits;
        flipped.flip_all();
        CHECK(flipped.count() == pair_count(n) - bits.count());
        flipped.flip_all();
        CHECK(flipped == bits);
    }
}

TEST_CASE("low mask round trip") {
    PairBits bits(5);
    bits.set(0, 1);
    bits.set(3, 4);
    std::uint64_t mask = bits.low_mask();
    CHECK(mask == ((1ull << pair_index(0, 1, 5)) | (1ull << pair_index(3, 4, 5))));
    PairBits back(5);
    back.assign_low_mask(mask);
    CHECK(back == bits);
}

TEST_CASE("graph construction and degrees") {
    Graph k4 = Graph::complete(4);
    CHECK(k4.edge_count() == 6);
    CHECK(k4.degrees() == std::vector<int>{3, 3, 3, 3});

    Graph star = Graph::from_edge_list(4, {{0, 1}, {0, 2}, {0, 3}});
    CHECK(star.degrees() == std::vector<int>{3, 1, 1, 1});
    CHECK(star.has_edge(0, 2));
    CHECK_FALSE(star.has_edge(1, 2));
}

TEST_CASE("edge list validation rejects bad input") {
    CHECK_THROWS_AS(Graph::from_edge_list(4, {{0, 0}}), config_error);
    CHECK_THROWS_AS(Graph::from_edge_list(4, {{0, 4}}), config_error);
    CHECK_THROWS_AS(Graph::from_edge_list(4, {{1, 2}, {2, 1}}), config_error);
    CHECK_THROWS_AS(Graph::from_edge_list(4, {{-1, 2}}), config_error);
}

TEST_CASE("complement swaps degrees against n-1") {
    Graph g = Graph::from_edge_list(5, {{0, 1}, {0, 2}, {3, 4}});
    Graph c = g.complement();
    std::vector<int> dg = g.degrees(), dc = c.degrees();
    for (int i = 0; i < 5; ++i) CHECK(dg[i] + dc[i] == 4);
    CHECK(c.complement() == g);
}

TEST_CASE("pair mask round trip matches explicit edges") {
    Graph g = Graph::from_edge_list(4, {{0, 1}, {2, 3}});
    Graph back = Graph::from_pair_mask(4, g.pair_mask());
    CHECK(back == g);
}

TEST_CASE("edge list text round trip") {
    Graph g = Graph::from_edge_list(6, {{0, 5}, {1, 2}, {2, 4}});
    std::ostringstream out;
    write_edge_list(out, g);
    std::istringstream in(out.str());
    Graph back = read_edge_list(in);
    CHECK(back == g);
}

TEST_CASE("edge list reader rejects malformed text") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_edge_list(in);
    };
    CHECK_THROWS_AS(parse(""), io_error);
    CHECK_THROWS_AS(parse("3"), io_error);
    CHECK_THROWS_AS(parse("3 1\n"), io_error);          // missing edge line
    CHECK_THROWS_AS(parse("3 1\n1 0\n"), io_error);     // needs i < j
    CHECK_THROWS_AS(parse("3 1\n0 0\n"), io_error);     // loop
    CHECK_THROWS_AS(parse("3 2\n0 1\n0 1\n"), io_error);  // duplicate
    CHECK_THROWS_AS(parse("3 1\n0 3\n"), io_error);     // out of range
    CHECK(parse("3 1\n0 2\n").edge_count() == 1);
}

TEST_CASE("adjacency matvec on a path") {
    Graph path = Graph::from_edge_list(4, {{0, 1}, {1, 2}, {2, 3}});
    std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
    std::vector<double> y;
    path.adjacency_matvec(x, y);
    CHECK(y == std::vector<double>{2.0, 4.0, 6.0, 3.0});
}
