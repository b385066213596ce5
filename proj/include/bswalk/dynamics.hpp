#ifndef BSWALK_DYNAMICS_HPP_
#define BSWALK_DYNAMICS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "bswalk/graphs.hpp"
#include "bswalk/preactions.hpp"
#include "bswalk/walks.hpp"

namespace bswalk {

  struct ExperimentConfig {
    Params        params{2, 3};
    StepMeasure   measure = StepMeasure::uniform(
        {Word{Letter::b}, Word{Letter::B}, Word{Letter::t}, Word{Letter::T}});
    std::size_t   trials  = 1000;
    std::size_t   horizon = 1000;
    std::uint64_t seed    = 1;
    std::size_t   workers = 1;

    // nonmixing
    std::int64_t prime        = 0;
    Int          start_label  = 0;  // N
    Int          target_label = 0;  // M
    std::size_t  window       = 100;

    // mixing witness
    std::size_t              radius      = 1;
    double                   epsilon     = 0.02;
    std::size_t              calibration = 200;
    std::vector<std::size_t> ks;
  };

  // True iff the maximal forest saturation of g is infinite, i.e. iff some
  // vertex misses a degree cap.  Throws InvalidGraph.
  bool perfect_kernel_member(MnGraph const& g);

  struct EscapeReport {
    std::vector<double> occupancy;  // fraction of trials inside K at step k
    // Last step spent inside K, per trial; equal to the horizon when the walk
    // is still inside at the end.
    double      last_visit_median = 0;
    double      last_visit_q90    = 0;
    double      last_visit_q99    = 0;
    bool        q99_finite        = false;  // q99 < horizon
    std::size_t block             = 50;
    std::vector<double> block_means;
    bool        monotone = false;  // block means nonincreasing
    // Log-linear fit occupancy ~ scale * (1 - theta)^k over the steps with
    // positive occupancy; the scale is raised until the curve dominates.
    double      envelope_theta = 0;
    double      envelope_scale = 0;
  };

  // Throws BadParams if g has no exits or the measure is not symmetric and
  // generating.
  EscapeReport escape_experiment(ExperimentConfig const& cfg, MnGraph const& g);

  struct NonmixingReport {
    std::int64_t prime            = 0;
    int          orientation      = 1;  // +1 when |m|_q > |n|_q
    std::int64_t start_valuation  = 0;
    std::int64_t target_valuation = 0;
    double       p_plus           = 0;
    double       p_minus          = 0;
    double       predicted_never_return = 0;  // p_plus - p_minus
    double       predicted_drift        = 0;  // (p_plus - p_minus) ||m|_q - |n|_q|
    double       never_return_hat       = 0;
    double       sigma                  = 0;
    double       ci_low                 = 0;
    double       ci_high                = 0;
    double       drift_hat              = 0;
    double       drift_sigma            = 0;
    bool         bound_check            = false;
    std::size_t  undecided              = 0;
    double       truncation_bound       = 0;
    // Exact certificate over the first `window` steps.
    std::size_t window                  = 0;
    std::size_t closed_form_checks      = 0;
    std::size_t closed_form_mismatches  = 0;
    std::size_t trials_exceeding        = 0;  // valuation above |M|_q at some step
    std::size_t certificates_fired      = 0;  // ... and label != M at all such steps
    double      threshold_step          = 0;  // 2 |M|_q / (p_plus - p_minus)
  };

  // Throws BadParams on violated preconditions ("bias required" when
  // mu(t) = mu(t^-1)).
  NonmixingReport nonmixing_experiment(ExperimentConfig const& cfg);

  struct MergeInput {
    Preaction  pre1;
    Preaction  pre2;
    NormalForm s1;
    NormalForm s2;
    NormalForm s3;
  };

  struct MergeConditions {
    bool        cond1 = false;
    bool        cond2 = false;
    bool        cond3 = false;
    std::size_t distance      = 0;  // d(p1(x1 s1), p1(x1 s1 s2))
    std::size_t depth1        = 0;  // d(K1, p1(x1 s1))
    std::size_t depth2        = 0;  // d(K2, p2(x2 s3^-1))

    bool all() const noexcept {
      return cond1 && cond2 && cond3;
    }
  };

  MergeConditions check_merge_hypotheses(Params const& p, MergeInput const& in);

  struct PasteResult {
    Preaction            preaction;
    Point                x2;              // image of pre2's basepoint
    std::size_t          pre2_offset = 0; // first orbit id of pre2's copy
    std::vector<OrbitId> bridge;          // fresh orbits on the bridge
    Label                bridge_label;
  };

  // A preaction containing pre1 and pre2 in which x1 s1 s2 s3 = x2.  Throws
  // HypothesesNotMet.
  PasteResult paste(Params const& p, MergeInput const& in);

  struct MixingPoint {
    std::size_t k           = 0;
    std::size_t k0          = 0;
    std::size_t trials      = 0;
    std::size_t successes   = 0;
    std::size_t cond1_failures = 0;
    std::size_t cond2_failures = 0;
    std::size_t cond3_failures = 0;
    std::size_t paste_failures = 0;
    double      frequency   = 0;
    double      sigma       = 0;
  };

  struct MixingReport {
    Label                    phenotype;
    std::size_t              max_height = 0;
    std::vector<MixingPoint> success_by_k;
    bool                     increasing = false;
  };

  // Throws BadParams (phenotype mismatch, finite phenotype with |m| != |n|,
  // saturated cores, or a measure that is not weight-symmetric and
  // generating).
  MixingReport mixing_witness_experiment(ExperimentConfig const& cfg, MnGraph const& core1,
                                         MnGraph const& core2, std::size_t radius);

  // Restriction of the saturation of realize(core) to the ball of radius R
  // around the root.
  Preaction ball_preaction(MnGraph const& core, std::size_t radius);

  // Rooted R-ball at p(x w) in the saturation of a.
  MnGraph conjugate_ball(Preaction const& a, Word const& w, std::size_t radius);

}  // namespace bswalk

#endif  // BSWALK_DYNAMICS_HPP_
