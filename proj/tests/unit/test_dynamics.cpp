#include <doctest.h>

#include <numeric>
#include <random>

#include "bswalk/dynamics.hpp"
#include "bswalk/errors.hpp"
#include "oracles.hpp"

using namespace bswalk;

namespace {
  Params const bs23(2, 3);
  Params const bs22(2, 2);

  MnGraph single(Params const& p, Label N) {
    MnGraph g(p);
    g.add_vertex(N);
    g.set_root(0);
    return g;
  }

  MnGraph infinite_loop() {
    auto g = single(bs23, Label::infinity());
    g.add_edge(0, 0);
    return g;
  }

  StepMeasure letters() {
    return StepMeasure::uniform({parse_word("b"), parse_word("B"), parse_word("t"), parse_word("T")});
  }

  std::vector<OrbitId> range(std::size_t from, std::size_t count) {
    std::vector<OrbitId> out(count);
    std::iota(out.begin(), out.end(), from);
    return out;
  }
}  // namespace

TEST_CASE("perfect kernel membership") {
  CHECK(perfect_kernel_member(single(bs23, Label::infinity())));
  CHECK(perfect_kernel_member(infinite_loop()));
  auto unit = single(bs23, Label(1));
  CHECK(perfect_kernel_member(unit));
  unit.add_edge(0, 0);
  CHECK_FALSE(perfect_kernel_member(unit));
  auto bad = single(bs23, Label(3));
  bad.add_vertex(Label(3));
  bad.add_edge(0, 1);
  CHECK_THROWS_AS(perfect_kernel_member(bad), InvalidGraph);

  // saturated iff the lazy saturation stops growing
  std::mt19937_64 rng(3);
  for (Params const& p : {bs23, bs22, Params(3, 3)}) {
    for (int i = 0; i < 200; ++i) {
      auto g = oracle::random_graph(p, rng, 4);
      LazyAction lazy(realize(g));
      lazy.expand_to_depth(2);
      CHECK(perfect_kernel_member(g) == (lazy.orbit_count() > g.vertex_count()));
    }
  }
}

TEST_CASE("escape experiment") {
  ExperimentConfig cfg;
  cfg.trials  = 500;
  cfg.horizon = 200;
  auto r      = escape_experiment(cfg, infinite_loop());
  REQUIRE(r.occupancy.size() == 201);
  CHECK(r.occupancy[0] == 1.0);
  CHECK(r.last_visit_median <= r.last_visit_q90);
  CHECK(r.last_visit_q90 <= r.last_visit_q99);
  CHECK(r.occupancy[200] < 0.2);
  CHECK(r.envelope_theta > 0);
  for (std::size_t k = 0; k < r.occupancy.size(); ++k) {
    CHECK(r.occupancy[k] <= r.envelope_scale * std::pow(1 - r.envelope_theta, k) + 1e-12);
  }

  cfg.workers = 3;
  auto again  = escape_experiment(cfg, infinite_loop());
  CHECK(again.occupancy == r.occupancy);

  auto full = single(bs23, Label(1));
  full.add_edge(0, 0);
  CHECK_THROWS_AS(escape_experiment(cfg, full), BadParams);
  cfg.measure = StepMeasure::uniform({parse_word("b"), parse_word("t")});
  CHECK_THROWS_AS(escape_experiment(cfg, infinite_loop()), BadParams);
}

TEST_CASE("nonmixing preconditions and certificate") {
  ExperimentConfig cfg;
  cfg.params      = Params(4, 2);
  cfg.prime       = 2;
  cfg.start_label = 8;
  cfg.target_label = 8;
  cfg.trials      = 2000;
  cfg.horizon     = 1000;
  cfg.measure = StepMeasure::from_config("atom t 0.35\natom T 0.15\natom b 0.25\natom B 0.25\n");
  auto r      = nonmixing_experiment(cfg);
  CHECK(r.closed_form_mismatches == 0);
  CHECK(r.closed_form_checks > 0);
  CHECK(r.certificates_fired == r.trials_exceeding);
  CHECK(std::abs(r.never_return_hat - 0.2) < 4 * r.sigma);
  CHECK(r.predicted_drift == doctest::Approx(0.2));

  // orientation flips when |m|_q < |n|_q, and the bias must follow it
  auto flipped   = cfg;
  flipped.params = Params(2, 4);
  CHECK_THROWS_AS(nonmixing_experiment(flipped), BadParams);
  flipped.measure = StepMeasure::from_config("atom t 0.15\natom T 0.35\natom b 0.25\natom B 0.25\n");
  auto f          = nonmixing_experiment(flipped);
  CHECK(f.orientation == -1);
  CHECK(f.certificates_fired == f.trials_exceeding);

  auto flat    = cfg;
  flat.measure = letters();
  try {
    nonmixing_experiment(flat);
    FAIL("expected BadParams");
  } catch (BadParams const& e) {
    CHECK(std::string(e.what()) == "bias required");
  }
  auto square   = cfg;
  square.params = Params(3, -3);
  CHECK_THROWS_AS(nonmixing_experiment(square), BadParams);
  auto low        = cfg;
  low.start_label = 4;
  CHECK_THROWS_AS(nonmixing_experiment(low), BadParams);
}

TEST_CASE("merge hypotheses") {
  auto pre = ball_preaction(single(bs22, Label(1)), 1);
  CHECK(pre.orbit_count() == 3);
  auto in = oracle::split_walk(bs22, pre, pre, letters(), 400, 60, 5);
  auto no_middle = in;
  no_middle.s2   = NormalForm{};
  auto c         = check_merge_hypotheses(bs22, no_middle);
  CHECK_FALSE(c.cond3);
  CHECK(c.distance == 0);

  auto stay = in;
  stay.s1   = NormalForm{};
  CHECK_FALSE(check_merge_hypotheses(bs22, stay).cond1);
  CHECK_THROWS_AS(paste(bs22, stay), HypothesesNotMet);
}

TEST_CASE("pasting") {
  for (auto [p, core, bridge] :
       {std::tuple{bs22, single(bs22, Label(1)), Label(2)},
        std::tuple{bs23, infinite_loop(), Label::infinity()},
        std::tuple{Params(3, 3), single(Params(3, 3), Label(4)), Label(12)}}) {
    auto        pre  = ball_preaction(core, 1);
    auto        mu   = letters();
    std::size_t done = 0;
    for (std::uint64_t seed = 0; seed < 400 && done < 40; ++seed) {
      auto in = oracle::split_walk(p, pre, pre, mu, 400, 60, seed);
      if (!check_merge_hypotheses(p, in).all()) {
        continue;
      }
      ++done;
      auto r = paste(p, in);
      auto const& a = r.preaction;
      CHECK(oracle::apply_in_turn(a, a.basepoint(), {&in.s1, &in.s2, &in.s3}) == r.x2);
      CHECK(validate_preaction(a).valid());
      auto g = mn_graph_of(a);
      CHECK(graph_phenotype(g) == graph_phenotype(core));
      CHECK(perfect_kernel_member(g));
      CHECK(r.bridge_label == bridge);
      CHECK_FALSE(r.bridge.empty());
      for (auto o : r.bridge) {
        CHECK(a.cardinality(o) == bridge);
      }
      CHECK(serialize(restrict_to(a, range(0, pre.orbit_count()))) == serialize(pre));
      CHECK(serialize(restrict_to(a, range(r.pre2_offset, pre.orbit_count()), r.x2))
            == serialize(pre));
    }
    CHECK(done >= 10);
  }
}

TEST_CASE("pasting rejects mismatched phenotypes") {
  auto one   = ball_preaction(single(bs22, Label(1)), 1);
  auto four  = ball_preaction(single(bs22, Label(4)), 1);
  auto in    = oracle::split_walk(bs22, one, four, letters(), 200, 40, 1);
  CHECK_THROWS_AS(paste(bs22, in), HypothesesNotMet);
}

TEST_CASE("mixing witness") {
  ExperimentConfig cfg;
  cfg.params      = bs22;
  cfg.trials      = 100;
  cfg.calibration = 50;
  cfg.ks          = {20, 400};
  auto r = mixing_witness_experiment(cfg, single(bs22, Label(1)), single(bs22, Label(1)), 1);
  CHECK(r.phenotype == Label(1));
  CHECK(r.max_height == 1);
  REQUIRE(r.success_by_k.size() == 2);
  CHECK(r.success_by_k[0].successes == 0);
  CHECK(r.success_by_k[1].frequency > r.success_by_k[0].frequency);
  for (auto const& mp : r.success_by_k) {
    CHECK(mp.successes + mp.cond1_failures + mp.cond2_failures + mp.cond3_failures
              + mp.paste_failures
          == mp.trials);
    CHECK(mp.paste_failures == 0);
  }

  CHECK_THROWS_AS(mixing_witness_experiment(cfg, single(bs22, Label(1)), single(bs22, Label(4)), 1),
                  BadParams);
  auto odd   = cfg;
  odd.params = bs23;
  CHECK_THROWS_AS(mixing_witness_experiment(odd, single(bs23, Label(5)), single(bs23, Label(5)), 1),
                  BadParams);
  auto skew    = cfg;
  skew.measure = StepMeasure::from_config("atom t 0.35\natom T 0.15\natom b 0.25\natom B 0.25\n");
  CHECK_THROWS_AS(mixing_witness_experiment(skew, single(bs22, Label(1)), single(bs22, Label(1)), 1),
                  BadParams);
}

TEST_CASE("conjugate balls") {
  auto pre = realize(infinite_loop());
  LazyAction lazy(pre);
  CHECK(rooted_isomorphic(conjugate_ball(pre, Word{}, 2), lazy.ball(0, 2)));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    Word w   = oracle::random_word(rng, 8);
    Word v   = oracle::random_word(rng, 8);
    auto moved = conjugate_ball(pre, w, 2);
    // the moved ball is the ball around p(x w) in the saturation
    LazyAction copy(pre);
    Point      y = copy.apply(pre.basepoint(), w);
    CHECK(rooted_isomorphic(moved, copy.ball(y.orbit, 2)));
    CHECK(rooted_isomorphic(conjugate_ball(pre, w + inverse(w), 2), conjugate_ball(pre, Word{}, 2)));
    // composite moves
    Point z = copy.apply(y, v);
    CHECK(rooted_isomorphic(conjugate_ball(pre, w + v, 2), copy.ball(z.orbit, 2)));
  }
  for (auto const* text : {"t", "tbbTBBB", "bbbtBB"}) {
    Word w = parse_word(text);
    REQUIRE(stabilizer_contains(pre, w));
    CHECK(rooted_isomorphic(conjugate_ball(pre, w, 3), conjugate_ball(pre, Word{}, 3)));
  }
}
