#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "bswalk/errors.hpp"
#include "bswalk/walks.hpp"
#include "oracles.hpp"

using namespace bswalk;

namespace {
  Params const bs23(2, 3);
  Params const bs42(4, 2);

  StepMeasure letters() {
    return StepMeasure::uniform({parse_word("b"), parse_word("B"), parse_word("t"), parse_word("T")});
  }

  StepMeasure biased() {
    return StepMeasure::from_config("atom t 7/20\natom T 3/20\natom b 1/4\natom B 1/4\n");
  }

  int val2(Int x) {
    int v = 0;
    while (x % 2 == 0) {
      x /= 2;
      ++v;
    }
    return v;
  }

  WalkTrace trace_of(char const* letters_text) {
    WalkTrace t;
    for (auto x : parse_word(letters_text)) {
      t.increments.push_back(Word{x});
    }
    return t;
  }
}  // namespace

TEST_CASE("rationals") {
  CHECK(parse_rational("7/20") == Rational(7, 20));
  CHECK(parse_rational("0.35") == Rational(7, 20));
  CHECK(parse_rational("1") == Rational(1));
  CHECK(parse_rational("-0.5") == Rational(-1, 2));
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
}

TEST_CASE("step measures") {
  auto mu = biased();
  CHECK(mu.atoms().size() == 4);
  CHECK(mu.weight_of(parse_word("t")) == Rational(7, 20));
  CHECK(mu.weight_of(parse_word("tt")) == 0);
  CHECK_THROWS_AS(StepMeasure({{parse_word("t"), Rational(1, 2)}}), BadParams);
  CHECK_THROWS_AS(StepMeasure({{parse_word("t"), Rational(1, 2)}, {parse_word("t"), Rational(1, 2)}}),
                  BadParams);
  CHECK_THROWS_AS(StepMeasure({{parse_word("t"), Rational(3, 2)}, {parse_word("T"), Rational(-1, 2)}}),
                  BadParams);
}

TEST_CASE("check_support") {
  auto r = check_support(bs23, letters());
  CHECK(r.symmetric);
  CHECK(r.max_height == 1);
  CHECK(r.generating == Generation::yes);
  auto s = check_support(bs23, biased());
  CHECK(s.symmetric);
  CHECK(s.generating == Generation::yes);
  auto only_b = check_support(bs23, StepMeasure::uniform({parse_word("b")}));
  CHECK_FALSE(only_b.symmetric);
  CHECK(only_b.generating == Generation::unknown);
  // tbT has height 2; its inverse tBT is present under another spelling
  auto long_words = check_support(bs23, StepMeasure::uniform({parse_word("tbT"), parse_word("tBT"),
                                                              parse_word("bbbbb")}));
  CHECK(long_words.max_height == 2);
  CHECK_FALSE(long_words.symmetric);
  auto spelled = check_support(bs23, StepMeasure::uniform({parse_word("tbbT"), parse_word("BBB")}));
  CHECK(spelled.symmetric);
  CHECK(spelled.max_height == 0);
}

TEST_CASE("sampling is deterministic and unbiased") {
  auto mu = biased();
  CHECK(sample_walk(mu, 0, 5).increments.empty());
  CHECK(sample_walk(mu, 200, 5).increments == sample_walk(mu, 200, 5).increments);
  CHECK(sample_walk(mu, 200, 5).increments != sample_walk(mu, 200, 6).increments);

  std::size_t const         n = 100000;
  auto                      t = sample_walk(mu, n, 99);
  std::map<Word, std::size_t> count;
  for (auto const& w : t.increments) {
    ++count[w];
  }
  for (auto const& a : mu.atoms()) {
    double p     = static_cast<double>(a.weight);
    double sigma = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(static_cast<double>(count[a.word]) / n - p) < 3 * sigma);
  }
}

TEST_CASE("partial products and reversal") {
  auto mu = letters();
  auto t  = sample_walk(mu, 50, 3);
  auto s  = partial_products(bs23, t);
  REQUIRE(s.size() == 51);
  CHECK(s.front().is_identity());
  for (std::size_t i = 1; i < s.size(); ++i) {
    CHECK(s[i] == multiply(bs23, s[i - 1], reduce(bs23, t.increments[i - 1])));
  }
  auto r  = reversed(t);
  auto rs = partial_products(bs23, r);
  CHECK(rs.back() == invert(bs23, s.back()));
  CHECK(reversed(r).increments == t.increments);
}

TEST_CASE("reversed walk has the inverted step law") {
  auto mu   = biased();
  auto t    = reversed(sample_walk(mu, 100000, 77));
  double nt = 0, nT = 0;
  for (auto const& w : t.increments) {
    nt += w == parse_word("t");
    nT += w == parse_word("T");
  }
  double n = static_cast<double>(t.increments.size());
  CHECK(std::abs(nt / n - 0.15) < 3 * std::sqrt(0.15 * 0.85 / n));
  CHECK(std::abs(nT / n - 0.35) < 3 * std::sqrt(0.35 * 0.65 / n));
}

TEST_CASE("valuation trace examples") {
  auto v = valuation_trace(bs42, 2, 8, trace_of("ttbtTB"));
  CHECK(v.start == 3);
  CHECK(v.values == std::vector<std::int64_t>{3, 4, 5, 5, 6, 5, 5});
  CHECK(v.values[2] == 2 * (2 - 1) + 3);
  CHECK_FALSE(v.violated_at);
  CHECK(valuation_trace(bs42, 2, 8, WalkTrace{}).values == std::vector<std::int64_t>{3});

  auto cut = valuation_trace(bs42, 2, 8, trace_of("tTTtt"));
  CHECK(cut.violated_at == std::optional<std::size_t>(3));
  CHECK(cut.values.size() == 4);
  CHECK(cut.values.back() == 2);
  CHECK_THROWS_AS(valuation_trace(bs42, 2, 8, trace_of("tTTtt"), true), HypothesisViolated);

  CHECK_THROWS_AS(valuation_trace(bs23, 3, 27, WalkTrace{}), BadParams);
  CHECK_THROWS_AS(valuation_trace(bs42, 2, 4, WalkTrace{}), BadParams);
  CHECK_THROWS_AS(valuation_trace(bs42, 4, 64, WalkTrace{}), BadParams);
  CHECK_THROWS_AS(valuation_trace(bs42, 2, 8, WalkTrace{0, {parse_word("tt")}}), BadParams);
}

TEST_CASE("valuation trace against recursion and orbit labels") {
  auto mu = biased();
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    auto t = sample_walk(mu, 200, seed);
    for (Params const& p : {bs42, Params(8, 2), Params(-12, 6)}) {
      std::int64_t vm = 0, vn = 0;
      for (Int x = p.abs_m(); x % 2 == 0; x /= 2) {
        ++vm;
      }
      for (Int x = p.abs_n(); x % 2 == 0; x /= 2) {
        ++vn;
      }
      Int  N0 = Int(1) << (vm + 1);
      auto v  = valuation_trace(p, 2, N0, t);
      // recursion on valuations, letter by letter
      std::int64_t rec = vm + 1;
      for (std::size_t i = 0; i + 1 < v.values.size(); ++i) {
        rec = oracle::valuation_step(rec, t.increments[i][0], vm, vn);
        REQUIRE(rec == v.values[i + 1]);
      }
      // the orbit of the base point carries exactly that label
      Preaction core(p);
      core.add_orbit(Label(N0));
      LazyAction lazy(core);
      Point      x = core.basepoint();
      for (std::size_t i = 0; i + 1 < v.values.size(); ++i) {
        x = lazy.step(x, t.increments[i][0]);
        CHECK(val2(lazy.preaction().cardinality(x.orbit).value()) == v.values[i + 1]);
      }
    }
  }
}

TEST_CASE("lazy walk statistics") {
  auto s = lazy_walk_stats(0.5, 0.25, 20000, 2000, 1);
  CHECK(std::abs(s.never_return_hat - 0.25) < 3 * s.sigma + 1e-3);
  CHECK(std::abs(s.drift_hat - 0.25) < 3 * s.drift_sigma + 1e-3);
  CHECK(s.ci_low <= s.never_return_hat);
  CHECK(s.never_return_hat <= s.ci_high);
  CHECK(s.truncation_bound < 1e-6);

  auto up = lazy_walk_stats(0.3, 0.0, 20000, 500, 2);
  CHECK(std::abs(up.never_return_hat - 0.3) < 3 * up.sigma + 1e-3);

  auto a = lazy_walk_stats(0.4, 0.2, 5000, 1000, 9, 1);
  auto b = lazy_walk_stats(0.4, 0.2, 5000, 1000, 9, 4);
  CHECK(a.never_return_hat == b.never_return_hat);
  CHECK(a.drift_hat == b.drift_hat);

  CHECK_THROWS_AS(lazy_walk_stats(0.2, 0.2, 10, 10, 1), BadParams);
  CHECK_THROWS_AS(lazy_walk_stats(0.7, 0.4, 10, 10, 1), BadParams);
  CHECK_THROWS_AS(lazy_walk_stats(0.4, 0.2, 0, 10, 1), BadParams);
}

TEST_CASE("lazy walk jump matches step-by-step simulation in law") {
  // final position after the binomial jump has the same mean and variance
  std::mt19937_64 rng(5);
  double const    pp = 0.4, pm = 0.2;
  std::size_t const n = 400, trials = 20000;
  double sum = 0, sq = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    auto s = advance_lazy_walk(rng, pp, pm, 0, n, LazyWalkState{});
    sum += static_cast<double>(s.z);
    sq += static_cast<double>(s.z) * static_cast<double>(s.z);
  }
  double mean = sum / trials, var = sq / trials - mean * mean;
  double want_mean = n * (pp - pm);
  double want_var  = n * (pp + pm - (pp - pm) * (pp - pm));
  CHECK(std::abs(mean - want_mean) < 4 * std::sqrt(want_var / trials));
  CHECK(std::abs(var / want_var - 1) < 0.05);
  CHECK(safe_level(pp, pm) >= 40);
}

TEST_CASE("project_trace") {
  Preaction loop(bs23);
  loop.add_orbit(Label::infinity());
  loop.add_tau_edge({0, 0, 0, 0, 0});
  LazyAction lazy(loop);
  auto only_b = project_trace(lazy, {0, 0}, WalkTrace{0, {parse_word("b"), parse_word("B"), parse_word("bb")}});
  CHECK(only_b == std::vector<OrbitId>(4, 0));

  auto mu = StepMeasure::uniform({parse_word("tb"), parse_word("BT"), parse_word("b"), parse_word("B"),
                                  parse_word("tbT"), parse_word("tBT")});
  auto h  = check_support(bs23, mu).max_height;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto t    = sample_walk(mu, 100, seed);
    auto path = project_trace(lazy, {0, 0}, t);
    REQUIRE(path.size() == 101);
    for (std::size_t i = 1; i < path.size(); ++i) {
      CHECK(lazy.distance(path[i - 1], path[i]) <= h);
    }
  }

  // against the edge path in a saturated copy
  auto t    = sample_walk(letters(), 30, 4);
  auto path = project_trace(lazy, {0, 0}, t);
  Word all;
  for (auto const& w : t.increments) {
    all = all + w;
  }
  auto edges = derive_edge_path(lazy.preaction(), {0, 0}, all);
  OrbitId at = 0;
  std::size_t e = 0;
  for (std::size_t i = 0; i < t.increments.size(); ++i) {
    if (is_t(t.increments[i][0])) {
      auto [id, s] = edges.steps[e++];
      at           = s > 0 ? lazy.preaction().tau_edge(id).trg : lazy.preaction().tau_edge(id).src;
    }
    CHECK(path[i + 1] == at);
  }
}
