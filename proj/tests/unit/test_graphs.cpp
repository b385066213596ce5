#include <doctest.h>

#include <algorithm>
#include <random>

#include "bswalk/errors.hpp"
#include "bswalk/graphs.hpp"
#include "oracles.hpp"

using namespace bswalk;

namespace {
  Params const bs23(2, 3);
  Params const bs22(2, 2);

  MnGraph one_edge(Params const& p, Label a, Label b) {
    MnGraph g(p);
    g.add_vertex(a);
    g.add_vertex(b);
    g.add_edge(0, 1);
    g.set_root(0);
    return g;
  }

  MnGraph infinite_loop() {
    MnGraph g(bs23);
    g.add_vertex(Label::infinity());
    g.add_edge(0, 0);
    g.set_root(0);
    return g;
  }
}  // namespace

TEST_CASE("validate") {
  CHECK(validate(one_edge(bs23, Label(3), Label(2))).valid());
  auto bad = validate(one_edge(bs23, Label(3), Label(3)));
  CHECK_FALSE(bad.valid());
  CHECK(bad.transfer_violations.size() == 1);

  MnGraph lone(bs23);
  lone.add_vertex(Label::infinity());
  auto r = validate(lone);
  CHECK(r.valid());
  CHECK_FALSE(r.saturated);
  CHECK(r.connected);

  MnGraph unit(bs23);
  unit.add_vertex(Label(1));
  unit.add_edge(0, 0);
  CHECK(validate(unit).saturated);

  // a vertex labeled 1 has one outgoing slot in BS(2,3)
  MnGraph crowded(bs23);
  crowded.add_vertex(Label(1));
  crowded.add_edge(0, 0);
  crowded.add_edge(0, 0);
  CHECK(validate(crowded).degree_violations.size() == 2);

  MnGraph apart(bs23);
  apart.add_vertex(Label(1));
  apart.add_vertex(Label(1));
  CHECK_FALSE(validate(apart).connected);
}

TEST_CASE("phenotype") {
  CHECK(phenotype(bs23, Label::infinity()).is_infinite());
  CHECK(phenotype(bs23, Label(12)) == Label(1));
  CHECK(phenotype(bs23, Label(35)) == Label(35));
  CHECK(phenotype(bs22, Label(4)) == Label(4));
  CHECK(phenotype(bs22, Label(2)) == Label(1));
  for (Params const& p : {bs23, bs22, Params(4, 2), Params(6, 10), Params(12, 18)}) {
    for (std::int64_t N = 1; N <= 3000; ++N) {
      REQUIRE(phenotype(p, Label(N)) == oracle::phenotype_by_factoring(p, Label(N)));
    }
  }
}

TEST_CASE("graph phenotype") {
  MnGraph g(bs23);
  g.add_vertex(Label(35));
  CHECK(graph_phenotype(g) == Label(35));
  CHECK(graph_phenotype(infinite_loop()).is_infinite());
  MnGraph apart(bs23);
  apart.add_vertex(Label(1));
  apart.add_vertex(Label(1));
  CHECK_THROWS_AS(graph_phenotype(apart), NotConnected);
  CHECK_THROWS_AS(graph_phenotype(one_edge(bs23, Label(5), Label(7))), PhenotypeMismatch);
}

TEST_CASE("phenotype is constant on random valid graphs") {
  std::mt19937_64 rng(21);
  for (Params const& p : {bs23, bs22, Params(4, 6), Params(3, -3)}) {
    for (int i = 0; i < 200; ++i) {
      auto g = oracle::random_graph(p, rng, 8);
      REQUIRE(validate(g).valid());
      REQUIRE(g.is_connected());
      auto ph = phenotype(p, g.label(0));
      for (auto const& l : g.labels()) {
        CHECK(phenotype(p, l) == ph);
      }
      CHECK(graph_phenotype(g) == ph);
    }
  }
}

TEST_CASE("forest labels") {
  CHECK(forest_label(bs22, Label(1), Direction::outgoing) == Label(2));
  CHECK(forest_label(bs23, Label::infinity(), Direction::outgoing).is_infinite());
  CHECK(forest_label(bs23, Label::infinity(), Direction::incoming).is_infinite());
  CHECK(forest_label(bs23, Label(3), Direction::outgoing) == Label(2));
  CHECK(forest_label(bs23, Label(2), Direction::incoming) == Label(3));

  // the new edge satisfies the transfer equation in both directions
  for (Params const& p : {bs23, bs22, Params(4, 6), Params(-9, 6)}) {
    for (std::int64_t N = 1; N <= 200; ++N) {
      Label out = forest_label(p, Label(N), Direction::outgoing);
      Label in  = forest_label(p, Label(N), Direction::incoming);
      CHECK(validate(one_edge(p, Label(N), out)).valid());
      CHECK(validate(one_edge(p, in, Label(N))).valid());
    }
  }
}

TEST_CASE("unimodular forest label closed form") {
  for (Params const& p : {bs22, Params(6, 6), Params(4, -4), Params(12, 12)}) {
    for (std::int64_t N = 1; N <= 500; ++N) {
      Label ph = phenotype(p, Label(N));
      // N n / (N ^ n)
      Int closed = Int(N) * p.abs_n() / wedge(Label(N), p.n());
      CHECK(forest_label(p, Label(N), Direction::outgoing) == Label(closed));
      Label c = unimodular_forest_label(p, ph);
      // iterating the forest label from N reaches the constant after one step
      CHECK(forest_label(p, forest_label(p, Label(N), Direction::outgoing),
                         Direction::outgoing)
            == c);
      CHECK(forest_label(p, c, Direction::outgoing) == c);
      CHECK(forest_label(p, c, Direction::incoming) == c);
    }
  }
  CHECK(unimodular_forest_label(bs22, Label(1)) == Label(2));
  CHECK_THROWS_AS(unimodular_forest_label(bs23, Label(1)), BadParams);
}

TEST_CASE("rooted balls") {
  auto loop = infinite_loop();
  auto b0   = rooted_ball(loop, 0, 0);
  CHECK(b0.vertex_count() == 1);
  CHECK(b0.edge_count() == 1);
  CHECK(rooted_isomorphic(rooted_ball(loop, 0, 1), loop));

  std::mt19937_64 rng(4);
  for (int i = 0; i < 300; ++i) {
    auto g = oracle::random_graph(bs23, rng, 12);
    std::uniform_int_distribution<std::size_t> any(0, g.vertex_count() - 1);
    VertexId v    = any(rng);
    auto     ball = rooted_ball(g, v, 3);
    auto     ids  = oracle::ball_vertices(g, v, 3);
    REQUIRE(ball.vertex_count() == ids.size());
    CHECK(ball.root() == std::optional<VertexId>(0));
    CHECK(ball.label(0) == g.label(v));
    std::size_t induced = 0;
    for (auto const& e : g.edges()) {
      induced += std::binary_search(ids.begin(), ids.end(), e.src)
                 && std::binary_search(ids.begin(), ids.end(), e.trg);
    }
    CHECK(ball.edge_count() == induced);
    std::vector<Label> got = ball.labels(), want;
    for (auto id : ids) {
      want.push_back(g.label(id));
    }
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    CHECK(got == want);
  }
}

TEST_CASE("rooted isomorphism") {
  auto loop = infinite_loop();
  CHECK(rooted_isomorphic(loop, loop));
  MnGraph two(bs23), three(bs23);
  two.add_vertex(Label(2));
  two.set_root(0);
  three.add_vertex(Label(3));
  three.set_root(0);
  CHECK_FALSE(rooted_isomorphic(two, three));
  MnGraph unrooted(bs23);
  unrooted.add_vertex(Label(2));
  CHECK_THROWS_AS(rooted_isomorphic(two, unrooted), MissingRoot);

  // orientation matters
  CHECK_FALSE(rooted_isomorphic(one_edge(bs23, Label(3), Label(2)),
                                [] {
                                  MnGraph g(bs23);
                                  g.add_vertex(Label(3));
                                  g.add_vertex(Label(2));
                                  g.add_edge(1, 0);
                                  g.set_root(0);
                                  return g;
                                }()));

  std::mt19937_64 rng(8);
  for (int i = 0; i < 300; ++i) {
    auto g = oracle::random_graph(bs23, rng, 10);
    auto h = oracle::permuted(g, rng);
    auto k = oracle::permuted(h, rng);
    CHECK(rooted_isomorphic(g, h));
    CHECK(rooted_isomorphic(h, g));
    CHECK(rooted_isomorphic(g, k));
    // moving the root to a vertex with a different label breaks it
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      if (g.label(v) != g.label(*g.root())) {
        auto moved = g;
        moved.set_root(v);
        CHECK_FALSE(rooted_isomorphic(g, moved));
        break;
      }
    }
  }
}

TEST_CASE("enumerate phenotypes") {
  std::set<Label> expected{Label(1), Label(5), Label(7), Label::infinity()};
  CHECK(enumerate_phenotypes(bs23, 10) == expected);
  CHECK(enumerate_phenotypes(bs22, 1) == std::set<Label>{Label(1), Label::infinity()});
  std::size_t last = 0;
  for (std::int64_t bound = 1; bound <= 60; ++bound) {
    auto s = enumerate_phenotypes(bs23, bound);
    CHECK(s.size() >= last);
    last = s.size();
  }
}

TEST_CASE("graph serialization round-trip") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 200; ++i) {
    auto g    = oracle::random_graph(Params(4, -6), rng, 9);
    auto text = serialize(g);
    auto back = parse_graph(text);
    CHECK(back == g);
    CHECK(serialize(back) == text);
  }
  CHECK(serialize(infinite_loop()) == "mn-graph 2 3\nv 0 inf\ne 0 0\nroot 0\n");
  CHECK_THROWS_AS(parse_graph("mn-graph 2 3\nv 1 inf\n"), ParseError);
  CHECK_THROWS_AS(parse_graph("graph 2 3\n"), ParseError);
}
