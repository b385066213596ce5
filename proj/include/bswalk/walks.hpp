#ifndef BSWALK_WALKS_HPP_
#define BSWALK_WALKS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bswalk/preactions.hpp"
#include "bswalk/words.hpp"

namespace bswalk {

  using Rational = boost::multiprecision::cpp_rational;

  // "7/20", "0.35", "1" -> exact rational.  Throws ParseError.
  Rational parse_rational(std::string_view text);

  struct Atom {
    Word     word;
    Rational weight;
  };

  // Finite-support probability measure on words; weights are exact.
  class StepMeasure {
   public:
    // Throws BadParams unless weights are positive, words distinct and the
    // total is exactly 1.
    explicit StepMeasure(std::vector<Atom> atoms);

    static StepMeasure uniform(std::vector<Word> const& words);
    // Lines "atom <word> <weight>"; other lines are ignored.
    static StepMeasure from_config(std::string_view text);

    std::vector<Atom> const& atoms() const noexcept {
      return _atoms;
    }
    // Total weight of atoms whose spelling is exactly w.
    Rational weight_of(Word const& w) const;

   private:
    std::vector<Atom> _atoms;
  };

  enum class Generation { yes, unknown };

  struct SupportReport {
    bool        symmetric  = false;
    std::size_t max_height = 0;
    Generation  generating = Generation::unknown;
  };

  SupportReport check_support(Params const& p, StepMeasure const& mu);

  // Draws atom indices; weights are converted to doubles once.
  class Sampler {
   public:
    explicit Sampler(StepMeasure const& mu);

    template <class Rng>
    std::size_t draw(Rng& rng) {
      return _dist(rng);
    }
    Word const& word(std::size_t atom) const {
      return _words[atom];
    }

   private:
    std::vector<Word>                          _words;
    std::discrete_distribution<std::size_t>    _dist;
  };

  // Seed of trial `index` under master seed `master` (splitmix64 of both).
  std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

  // Runs fn(i) for i in [0, count) on `workers` threads.  Callers store
  // results by index, so aggregation order never depends on scheduling.
  void parallel_for(std::size_t count, std::size_t workers,
                    std::function<void(std::size_t)> const& fn);

  struct WalkTrace {
    std::uint64_t     seed = 0;
    std::vector<Word> increments;
  };

  WalkTrace sample_walk(StepMeasure const& mu, std::size_t k, std::uint64_t seed);

  // S_0 = identity, S_i = S_{i-1} g_i.
  std::vector<NormalForm> partial_products(Params const& p, WalkTrace const& trace);

  // The trace read backwards with inverted increments.
  WalkTrace reversed(WalkTrace const& trace);

  struct ValuationTrace {
    std::int64_t               prime = 0;
    std::int64_t               start = 0;
    std::vector<std::int64_t>  h_plus;   // t-letters among the first i
    std::vector<std::int64_t>  h_minus;  // t^-1-letters among the first i
    std::vector<std::int64_t>  values;   // |N_i|_q
    // First index where h_plus < h_minus; the trace stops there.
    std::optional<std::size_t> violated_at;
  };

  // |N_i|_q = (h+_i - h-_i)(|m|_q - |n|_q) + |N0|_q along a trace of single
  // letters, for |m|_q > |n|_q and |N0|_q > |m|_q (BadParams otherwise).  The
  // value at the first index with h+ < h- is still exact; the trace is cut
  // after it, or HypothesisViolated is thrown when `strict`.
  ValuationTrace valuation_trace(Params const& p, std::int64_t q, Int const& n0,
                                 WalkTrace const& trace, bool strict = false);

  // One trial of the lazy walk Z with P(+1) = p_plus, P(-1) = p_minus.
  struct LazyWalkState {
    std::int64_t z        = 0;
    bool         returned = false;  // Z_n <= 0 for some n >= 1
  };

  // Advances `state` from step `from` to `horizon`.  Once Z reaches a level
  // from which a return has probability below 1e-12, or once the walk has
  // returned, the remaining steps are drawn in one binomial jump.
  template <class Rng>
  LazyWalkState advance_lazy_walk(Rng& rng, double p_plus, double p_minus, std::size_t from,
                                  std::size_t horizon, LazyWalkState state);

  // Level above which a return has probability < 1e-12.
  std::int64_t safe_level(double p_plus, double p_minus);

  struct LazyWalkStats {
    std::size_t trials  = 0;
    std::size_t horizon = 0;
    double      never_return_hat = 0;
    double      sigma            = 0;
    double      ci_low           = 0;
    double      ci_high          = 0;
    double      drift_hat        = 0;
    double      drift_sigma      = 0;
    // Walks positive at the horizon but below drift * horizon / 2; they are
    // not counted as never-returning.
    std::size_t undecided = 0;
    // Upper bound on the expected number of counted walks that would return
    // after the horizon, divided by `trials`.
    double truncation_bound = 0;
  };

  // Throws BadParams unless p_plus > p_minus >= 0, p_plus + p_minus <= 1 and
  // trials, horizon >= 1.
  LazyWalkStats lazy_walk_stats(double p_plus, double p_minus, std::size_t trials,
                                std::size_t horizon, std::uint64_t seed,
                                std::size_t workers = 1);

  // Orbits p(x S_0), ..., p(x S_k) in the lazily saturated action.
  std::vector<OrbitId> project_trace(LazyAction& a, Point const& x, WalkTrace const& trace);

  ////////////////////////////////////////////////////////////////////////

  template <class Rng>
  LazyWalkState advance_lazy_walk(Rng& rng, double p_plus, double p_minus, std::size_t from,
                                  std::size_t horizon, LazyWalkState state) {
    std::int64_t const                     level = safe_level(p_plus, p_minus);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t                            step = from;
    while (step < horizon && !state.returned && state.z < level) {
      double u = unit(rng);
      if (u < p_plus) {
        ++state.z;
      } else if (u < p_plus + p_minus) {
        --state.z;
      }
      ++step;
      state.returned = state.z <= 0;
    }
    if (step < horizon) {
      auto   rest = static_cast<std::int64_t>(horizon - step);
      double move = p_plus + p_minus;
      std::int64_t moving = move >= 1.0 ? rest
                                        : std::binomial_distribution<std::int64_t>(rest, move)(rng);
      std::int64_t ups    = moving == 0 ? 0
                                        : std::binomial_distribution<std::int64_t>(
                                           moving, p_plus / move)(rng);
      state.z += 2 * ups - moving;
    }
    return state;
  }

}  // namespace bswalk

#endif  // BSWALK_WALKS_HPP_
