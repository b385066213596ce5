#include "bswalk/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bswalk/errors.hpp"

namespace bswalk {

  namespace {

    // A normal form read as b-runs and t-letters.
    struct Syllable {
      bool is_t;
      int  sign;
      Int  exponent;
    };

    std::vector<Syllable> syllables(NormalForm const& g) {
      std::vector<Syllable> out;
      if (g.leading() != 0) {
        out.push_back({false, 0, g.leading()});
      }
      for (auto const& blk : g.blocks()) {
        out.push_back({true, blk.sign, 0});
        if (blk.exponent != 0) {
          out.push_back({false, 0, blk.exponent});
        }
      }
      return out;
    }

    // The letters of spell(g) in reverse order, each inverted.
    std::vector<Syllable> inverse_syllables(NormalForm const& g) {
      auto out = syllables(g);
      std::reverse(out.begin(), out.end());
      for (auto& s : out) {
        s.sign     = -s.sign;
        s.exponent = -s.exponent;
      }
      return out;
    }

    // Walks the syllables through the lazy saturation, calling visit(point)
    // after every t-letter.
    template <class Visit>
    Point walk(LazyAction& a, Point x, std::vector<Syllable> const& word, Visit&& visit) {
      for (auto const& s : word) {
        if (s.is_t) {
          x = a.shift_t(x, s.sign);
          visit(x);
        } else {
          x = a.shift_b(x, s.exponent);
        }
      }
      return x;
    }

    Point walk(LazyAction& a, Point x, std::vector<Syllable> const& word) {
      return walk(a, std::move(x), word, [](Point const&) {});
    }

    std::vector<Syllable> concat(std::vector<Syllable> u, std::vector<Syllable> const& v) {
      u.insert(u.end(), v.begin(), v.end());
      return u;
    }

    double quantile(std::vector<std::size_t> const& sorted, double q) {
      auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
      return static_cast<double>(sorted[std::max<std::size_t>(rank, 1) - 1]);
    }

    void require_symmetric_generating(Params const& p, StepMeasure const& mu) {
      auto support = check_support(p, mu);
      if (!support.symmetric || support.generating != Generation::yes) {
        throw BadParams("the measure must have symmetric support containing b^+-1 and t^+-1");
      }
    }

    bool weight_symmetric(Params const& p, StepMeasure const& mu) {
      for (auto const& a : mu.atoms()) {
        auto     inv = invert(p, reduce(p, a.word));
        Rational w   = 0;
        for (auto const& other : mu.atoms()) {
          if (reduce(p, other.word) == inv) {
            w += other.weight;
          }
        }
        Rational own = 0;
        auto     g   = reduce(p, a.word);
        for (auto const& other : mu.atoms()) {
          if (reduce(p, other.word) == g) {
            own += other.weight;
          }
        }
        if (w != own) {
          return false;
        }
      }
      return true;
    }

  }  // namespace

  bool perfect_kernel_member(MnGraph const& g) {
    auto report = validate(g);
    if (g.vertex_count() == 0 || !report.valid() || !report.connected) {
      throw InvalidGraph("expected a nonempty, valid, connected (m,n)-graph");
    }
    return !report.saturated;
  }

  ////////////////////////////////////////////////////////////////////////
  // Escape from a finite core
  ////////////////////////////////////////////////////////////////////////

  EscapeReport escape_experiment(ExperimentConfig const& cfg, MnGraph const& g) {
    if (!perfect_kernel_member(g)) {
      throw BadParams("the core is saturated, so there is nothing to escape to");
    }
    require_symmetric_generating(g.params(), cfg.measure);
    if (cfg.trials == 0 || cfg.horizon == 0) {
      throw BadParams("trials and horizon must be >= 1");
    }
    LazyAction const prototype(realize(g));
    Sampler const    sampler(cfg.measure);
    std::size_t const horizon = cfg.horizon;

    std::vector<std::vector<std::uint32_t>> visits(cfg.trials);
    parallel_for(cfg.trials, cfg.workers, [&](std::size_t i) {
      LazyAction      a = prototype;
      Sampler         s = sampler;
      std::mt19937_64 rng(derive_seed(cfg.seed, i));
      Point           x = a.preaction().basepoint();
      for (std::size_t k = 1; k <= horizon; ++k) {
        x = a.apply(std::move(x), s.word(s.draw(rng)));
        if (a.is_core(x.orbit)) {
          visits[i].push_back(static_cast<std::uint32_t>(k));
        }
      }
    });

    EscapeReport report;
    std::vector<std::size_t> counts(horizon + 1, 0);
    std::vector<std::size_t> last(cfg.trials, 0);
    counts[0] = cfg.trials;
    for (std::size_t i = 0; i < cfg.trials; ++i) {
      for (auto k : visits[i]) {
        ++counts[k];
      }
      last[i] = visits[i].empty() ? 0 : visits[i].back();
    }
    auto n = static_cast<double>(cfg.trials);
    for (auto c : counts) {
      report.occupancy.push_back(static_cast<double>(c) / n);
    }
    std::sort(last.begin(), last.end());
    report.last_visit_median = quantile(last, 0.5);
    report.last_visit_q90    = quantile(last, 0.9);
    report.last_visit_q99    = quantile(last, 0.99);
    report.q99_finite        = report.last_visit_q99 < static_cast<double>(horizon);

    for (std::size_t start = 0; start + report.block <= horizon + 1; start += report.block) {
      double sum = 0;
      for (std::size_t k = start; k < start + report.block; ++k) {
        sum += report.occupancy[k];
      }
      report.block_means.push_back(sum / static_cast<double>(report.block));
    }
    report.monotone = std::is_sorted(report.block_means.rbegin(), report.block_means.rend());

    double sx = 0, sy = 0, sxx = 0, sxy = 0, count = 0;
    for (std::size_t k = 1; k <= horizon; ++k) {
      if (report.occupancy[k] > 0) {
        double x = static_cast<double>(k), y = std::log(report.occupancy[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        count += 1;
      }
    }
    if (count >= 2 && count * sxx - sx * sx > 0) {
      double slope          = (count * sxy - sx * sy) / (count * sxx - sx * sx);
      report.envelope_theta = 1 - std::exp(slope);
      double scale          = 0;
      for (std::size_t k = 1; k <= horizon; ++k) {
        scale = std::max(scale, report.occupancy[k] / std::exp(slope * static_cast<double>(k)));
      }
      report.envelope_scale = scale;
    }
    return report;
  }

  ////////////////////////////////////////////////////////////////////////
  // Non-mixing certificate
  ////////////////////////////////////////////////////////////////////////

  NonmixingReport nonmixing_experiment(ExperimentConfig const& cfg) {
    Params const& p = cfg.params;
    if (p.abs_m() == p.abs_n()) {
      throw BadParams("non-mixing needs |m| != |n|");
    }
    if (cfg.trials == 0 || cfg.horizon == 0) {
      throw BadParams("trials and horizon must be >= 1");
    }
    std::set<Word> support;
    for (auto const& a : cfg.measure.atoms()) {
      support.insert(a.word);
    }
    std::set<Word> const letters{{Letter::b}, {Letter::B}, {Letter::t}, {Letter::T}};
    if (support != letters) {
      throw BadParams("non-mixing needs the support to be exactly {b, B, t, T}");
    }
    Rational mu_t = cfg.measure.weight_of({Letter::t});
    Rational mu_T = cfg.measure.weight_of({Letter::T});
    if (mu_t == mu_T) {
      throw BadParams("bias required");
    }
    std::int64_t q = cfg.prime;
    if (q < 2 || prime_factors(q) != std::vector<std::int64_t>{q}) {
      throw BadParams("a prime q is required");
    }
    std::int64_t vm = valuation(p.m(), q), vn = valuation(p.n(), q);
    if (vm == vn) {
      throw BadParams("the prime must satisfy |m|_q != |n|_q");
    }
    NonmixingReport report;
    report.prime       = q;
    report.orientation = vm > vn ? 1 : -1;
    // Up to exchanging m and n: the letter that raises the valuation.
    Letter const up   = report.orientation > 0 ? Letter::t : Letter::T;
    Rational     r_up = report.orientation > 0 ? mu_t : mu_T;
    Rational     r_dn = report.orientation > 0 ? mu_T : mu_t;
    if (r_up <= r_dn) {
      throw BadParams(report.orientation > 0 ? "bias must favour t when |m|_q > |n|_q"
                                             : "bias must favour t^-1 when |m|_q < |n|_q");
    }
    if (cfg.start_label <= 0) {
      throw BadParams("a start label N >= 1 is required");
    }
    std::int64_t const gap = std::abs(vm - vn);
    report.start_valuation = valuation(cfg.start_label, q);
    if (report.start_valuation <= std::max(vm, vn)) {
      throw BadParams("the start label needs |N|_q > max(|m|_q, |n|_q)");
    }
    Int const target       = cfg.target_label > 0 ? cfg.target_label : cfg.start_label;
    report.target_valuation = valuation(target, q);
    report.p_plus           = static_cast<double>(r_up);
    report.p_minus          = static_cast<double>(r_dn);
    report.predicted_never_return = static_cast<double>(r_up - r_dn);
    report.predicted_drift        = report.predicted_never_return * static_cast<double>(gap);
    report.threshold_step = 2.0 * static_cast<double>(report.target_valuation)
                            / report.predicted_never_return;
    report.window = std::min(cfg.window, cfg.horizon);

    Preaction single(p);
    single.add_orbit(Label(cfg.start_label));
    single.set_basepoint(Point{0, 0});
    LazyAction const prototype(single);
    Sampler const    sampler(cfg.measure);
    Label const      target_label(target);

    struct Trial {
      LazyWalkState state;
      std::size_t   checks = 0, mismatches = 0;
      bool          exceeded = false, fired = true;
    };
    std::vector<Trial> trials(cfg.trials);
    std::size_t const  window  = report.window;
    std::size_t const  horizon = cfg.horizon;
    parallel_for(cfg.trials, cfg.workers, [&](std::size_t i) {
      Trial&          t = trials[i];
      std::mt19937_64 rng(derive_seed(cfg.seed, i));
      if (window > 0) {
        LazyAction  a = prototype;
        Sampler     s = sampler;
        Point       x = a.preaction().basepoint();
        bool        positive = true;  // Z_j >= 0 for every j before the current step
        for (std::size_t k = 1; k <= window; ++k) {
          Letter l = s.word(s.draw(rng))[0];
          x        = a.step(x, l);
          if (is_t(l)) {
            t.state.z += l == up ? 1 : -1;
          }
          t.state.returned = t.state.returned || t.state.z <= 0;
          Label const& label = a.preaction().cardinality(x.orbit);
          std::int64_t exact = valuation(label.value(), q);
          if (positive) {
            ++t.checks;
            if (exact != t.state.z * gap + report.start_valuation) {
              ++t.mismatches;
            }
          }
          positive = positive && t.state.z >= 0;
          if (exact > report.target_valuation) {
            t.exceeded = true;
            t.fired    = t.fired && !(label == target_label);
          }
        }
      }
      t.state = advance_lazy_walk(rng, report.p_plus, report.p_minus, window, horizon, t.state);
    });

    double const drift   = report.predicted_never_return;
    double const ratio   = report.p_minus / report.p_plus;
    std::size_t  escaped = 0;
    double       sum = 0, sum_sq = 0, bound = 0;
    for (auto const& t : trials) {
      double rate = static_cast<double>(t.state.z * gap) / static_cast<double>(horizon);
      sum += rate;
      sum_sq += rate * rate;
      report.closed_form_checks += t.checks;
      report.closed_form_mismatches += t.mismatches;
      if (t.exceeded) {
        ++report.trials_exceeding;
        report.certificates_fired += t.fired ? 1 : 0;
      }
      if (t.state.returned || t.state.z <= 0) {
        continue;
      }
      if (static_cast<double>(t.state.z) > drift * static_cast<double>(horizon) / 2) {
        ++escaped;
        bound += std::pow(ratio, static_cast<double>(
                                     std::min(t.state.z, safe_level(report.p_plus, report.p_minus))));
      } else {
        ++report.undecided;
      }
    }
    auto n                  = static_cast<double>(cfg.trials);
    report.never_return_hat = static_cast<double>(escaped) / n;
    report.sigma            = std::sqrt(report.never_return_hat * (1 - report.never_return_hat) / n);
    report.ci_low           = report.never_return_hat - 3 * report.sigma;
    report.ci_high          = report.never_return_hat + 3 * report.sigma;
    report.drift_hat        = sum / n;
    report.drift_sigma = std::sqrt(std::max(0.0, sum_sq / n - report.drift_hat * report.drift_hat) / n);
    report.bound_check      = report.never_return_hat >= report.predicted_never_return - 3 * report.sigma;
    report.truncation_bound = bound / n;
    return report;
  }

  ////////////////////////////////////////////////////////////////////////
  // Merging two preactions
  ////////////////////////////////////////////////////////////////////////

  MergeConditions check_merge_hypotheses(Params const&, MergeInput const& in) {
    MergeConditions c;

    LazyAction a1(in.pre1);
    Point      y1 = walk(a1, in.pre1.basepoint(), syllables(in.s1));
    OrbitId    o1 = y1.orbit;
    c.cond1       = !a1.is_core(y1.orbit);
    Point y1s2    = walk(a1, y1, syllables(in.s2), [&](Point const& x) {
      c.cond1 = c.cond1 && !a1.is_core(x.orbit);
    });
    walk(a1, y1s2, syllables(in.s3), [&](Point const& x) {
      c.cond1 = c.cond1 && !a1.is_core(x.orbit);
    });

    LazyAction a2(in.pre2);
    Point      z = walk(a2, in.pre2.basepoint(), inverse_syllables(in.s3));
    c.cond2      = !a2.is_core(z.orbit);
    walk(a2, z, concat(inverse_syllables(in.s2), inverse_syllables(in.s1)), [&](Point const& x) {
      c.cond2 = c.cond2 && !a2.is_core(x.orbit);
    });

    c.distance = a1.distance(o1, y1s2.orbit);
    c.depth1   = a1.depth(o1);
    c.depth2   = a2.depth(z.orbit);
    c.cond3    = c.distance >= c.depth1 + c.depth2 + 2;
    return c;
  }

  namespace {

    // Core orbits followed by the forest orbits met along `word`, and the
    // endpoint.
    std::pair<std::vector<OrbitId>, Point> trail(LazyAction& a, Point const& x,
                                                 std::vector<Syllable> const& word) {
      std::vector<OrbitId> orbits;
      for (OrbitId o = 0; o < a.core_size(); ++o) {
        orbits.push_back(o);
      }
      std::set<OrbitId> seen(orbits.begin(), orbits.end());
      auto              note = [&](Point const& y) {
        if (seen.insert(y.orbit).second) {
          orbits.push_back(y.orbit);
        }
      };
      note(x);
      Point end = walk(a, x, word, note);
      return {orbits, end};
    }

    // Appends b's orbits and edges to a; returns the orbit offset.
    std::size_t append_disjoint(Preaction& a, Preaction const& b) {
      std::size_t offset = a.orbit_count();
      for (OrbitId o = 0; o < b.orbit_count(); ++o) {
        a.add_orbit(b.cardinality(o));
      }
      for (EdgeId id = 0; id < b.edge_count(); ++id) {
        TauEdge e = b.tau_edge(id);
        e.src += offset;
        e.trg += offset;
        a.add_tau_edge(std::move(e));
      }
      return offset;
    }

  }  // namespace

  PasteResult paste(Params const& p, MergeInput const& in) {
    Label ph1 = graph_phenotype(mn_graph_of(in.pre1));
    Label ph2 = graph_phenotype(mn_graph_of(in.pre2));
    if (ph1 != ph2) {
      throw HypothesesNotMet("the two preactions have different phenotypes");
    }
    if (ph1.is_finite() && p.abs_m() != p.abs_n()) {
      throw HypothesesNotMet("finite phenotype requires |m| = |n|");
    }
    auto conditions = check_merge_hypotheses(p, in);
    if (!conditions.all()) {
      throw HypothesesNotMet(std::string("merge conditions fail:") + (conditions.cond1 ? "" : " 1")
                             + (conditions.cond2 ? "" : " 2") + (conditions.cond3 ? "" : " 3"));
    }
    Label const c = ph1.is_infinite() ? Label::infinity() : unimodular_forest_label(p, ph1);

    // The finite pieces actually crossed by s1 from x1 and by s3^-1 from x2.
    LazyAction a1(in.pre1);
    auto [orbits1, y1] = trail(a1, in.pre1.basepoint(), syllables(in.s1));
    LazyAction a2(in.pre2);
    auto [orbits2, z] = trail(a2, in.pre2.basepoint(), inverse_syllables(in.s3));
    Preaction r1 = restrict_to(a1.preaction(), orbits1);
    Preaction r2 = restrict_to(a2.preaction(), orbits2);

    PasteResult out{Preaction(p), {}, 0, {}, c};
    Preaction&  result = out.preaction;
    append_disjoint(result, r1);
    out.pre2_offset = append_disjoint(result, r2);
    result.set_basepoint(r1.basepoint());
    auto index_in = [](std::vector<OrbitId> const& orbits, OrbitId o) {
      return static_cast<OrbitId>(std::find(orbits.begin(), orbits.end(), o) - orbits.begin());
    };
    Point y{index_in(orbits1, y1.orbit), y1.offset};
    Point w{index_in(orbits2, z.orbit) + out.pre2_offset, z.offset};
    out.x2 = Point{out.pre2_offset + r2.basepoint().orbit, r2.basepoint().offset};

    // Longest prefix of s2 defined from y, longest suffix whose inverse is
    // defined from w; the rest is bridged by fresh orbits labeled c.
    auto const  middle = syllables(in.s2);
    std::size_t i      = 0;
    for (; i < middle.size(); ++i) {
      auto const& s = middle[i];
      if (!s.is_t) {
        y = result.shift_b(y, s.exponent);
      } else if (auto next = result.shift_t(y, s.sign)) {
        y = std::move(*next);
      } else {
        break;
      }
    }
    std::size_t j = middle.size();
    for (; j > i; --j) {
      auto const& s = middle[j - 1];
      if (!s.is_t) {
        w = result.shift_b(w, -s.exponent);
      } else if (auto prev = result.shift_t(w, -s.sign)) {
        w = std::move(*prev);
      } else {
        break;
      }
    }
    if (i == middle.size() || j <= i) {
      throw HypothesesNotMet("s2 does not leave the explored pieces");
    }
    // middle[i] and middle[j - 1] are t-letters whose slots are free.
    auto link = [&result](Point const& from, Point const& to, int s) {
      try {
        if (s > 0) {
          result.connect(from, to);
        } else {
          result.connect(to, from);
        }
      } catch (InvalidGraph const& e) {
        throw HypothesesNotMet(std::string("cannot bridge: ") + e.what());
      }
    };
    auto fresh = [&]() {
      OrbitId o = result.add_orbit(c);
      out.bridge.push_back(o);
      return Point{o, 0};
    };
    for (std::size_t k = i; k + 1 < j; ++k) {
      auto const& s = middle[k];
      if (!s.is_t) {
        y = result.shift_b(y, s.exponent);
      } else if (auto next = result.shift_t(y, s.sign)) {
        y = std::move(*next);
      } else {
        Point f = fresh();
        link(y, f, s.sign);
        y = f;
      }
    }
    link(y, w, middle[j - 1].sign);

    if (!validate_preaction(result).valid()) {
      throw HypothesesNotMet("the pasted preaction is not valid");
    }
    Point x = result.basepoint();
    for (auto const* g : {&in.s1, &in.s2, &in.s3}) {
      auto r = try_apply(result, x, *g);
      if (!r.point) {
        throw HypothesesNotMet("x1 s1 s2 s3 is undefined in the pasted preaction");
      }
      x = std::move(*r.point);
    }
    if (!(x == out.x2)) {
      throw HypothesesNotMet("pasting does not send x1 s1 s2 s3 to x2");
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Mixing witness
  ////////////////////////////////////////////////////////////////////////

  Preaction ball_preaction(MnGraph const& core, std::size_t radius) {
    LazyAction a(realize(core));
    auto       orbits = a.ball_orbits(a.preaction().basepoint().orbit, radius);
    return restrict_to(a.preaction(), orbits);
  }

  MixingReport mixing_witness_experiment(ExperimentConfig const& cfg, MnGraph const& core1,
                                         MnGraph const& core2, std::size_t radius) {
    Params const& p = cfg.params;
    if (!perfect_kernel_member(core1) || !perfect_kernel_member(core2)) {
      throw BadParams("cores must be non-saturated");
    }
    Label ph = graph_phenotype(core1);
    if (ph != graph_phenotype(core2)) {
      throw BadParams("the cores have different phenotypes");
    }
    if (ph.is_finite() && p.abs_m() != p.abs_n()) {
      throw BadParams("finite phenotype requires |m| = |n|");
    }
    require_symmetric_generating(p, cfg.measure);
    if (!weight_symmetric(p, cfg.measure)) {
      throw BadParams("the measure must give g and g^-1 the same weight");
    }
    if (cfg.trials == 0 || cfg.calibration == 0 || cfg.ks.empty()) {
      throw BadParams("trials, calibration and the list of k must be nonempty");
    }
    if (!(cfg.epsilon > 0 && cfg.epsilon < 1)) {
      throw BadParams("epsilon must lie in (0, 1)");
    }

    MixingReport report;
    report.phenotype  = ph;
    report.max_height = check_support(p, cfg.measure).max_height;
    Preaction const pre1 = ball_preaction(core1, radius);
    Preaction const pre2 = ball_preaction(core2, radius);
    LazyAction const lazy1(pre1);
    LazyAction const lazy2(pre2);
    std::size_t const reach = report.max_height;

    // Last step at which the forward walk from x1 (resp. the reversed walk
    // from x2) is within `reach` of its core.
    auto last_near = [&](LazyAction const& proto, Point const& x, WalkTrace const& trace) {
      LazyAction  a    = proto;
      auto        path = project_trace(a, x, trace);
      std::size_t last = 0;
      for (std::size_t k = 0; k < path.size(); ++k) {
        if (a.depth(path[k]) <= reach) {
          last = k;
        }
      }
      return last;
    };

    for (std::size_t point = 0; point < cfg.ks.size(); ++point) {
      std::size_t const   k         = cfg.ks[point];
      std::uint64_t const k_seed    = derive_seed(cfg.seed, k);
      std::uint64_t const calib_seed = derive_seed(k_seed, 0xca11b);

      std::vector<std::size_t> fwd(cfg.calibration), rev(cfg.calibration);
      parallel_for(cfg.calibration, cfg.workers, [&](std::size_t i) {
        auto trace = sample_walk(cfg.measure, k, derive_seed(calib_seed, i));
        fwd[i]     = last_near(lazy1, pre1.basepoint(), trace);
        rev[i]     = last_near(lazy2, pre2.basepoint(), reversed(trace));
      });
      std::sort(fwd.begin(), fwd.end());
      std::sort(rev.begin(), rev.end());
      // Smallest k0 with last visit < k0 in at least (1 - eps) of the batch.
      auto need = static_cast<std::size_t>(
          std::ceil((1 - cfg.epsilon) * static_cast<double>(cfg.calibration)));
      need = std::clamp<std::size_t>(need, 1, cfg.calibration);
      std::size_t const k0 = std::max(fwd[need - 1], rev[need - 1]) + 1;

      MixingPoint mp;
      mp.k      = k;
      mp.k0     = k0;
      mp.trials = cfg.trials;
      std::vector<int> outcome(cfg.trials, 0);
      parallel_for(cfg.trials, cfg.workers, [&](std::size_t i) {
        if (k <= 2 * k0) {
          outcome[i] = 3;
          return;
        }
        auto       trace = sample_walk(cfg.measure, k, derive_seed(k_seed, i));
        NormalForm s1, s2, s3;
        for (std::size_t j = 0; j < k; ++j) {
          NormalForm& target = j < k0 ? s1 : (j < k - k0 ? s2 : s3);
          target.append(p, trace.increments[j]);
        }
        MergeInput in{pre1, pre2, std::move(s1), std::move(s2), std::move(s3)};
        auto       c = check_merge_hypotheses(p, in);
        if (!c.cond1) {
          outcome[i] = 1;
        } else if (!c.cond2) {
          outcome[i] = 2;
        } else if (!c.cond3) {
          outcome[i] = 3;
        } else {
          try {
            paste(p, in);
            outcome[i] = 0;
          } catch (HypothesesNotMet const&) {
            outcome[i] = 4;
          }
        }
      });
      for (int o : outcome) {
        switch (o) {
          case 0:
            ++mp.successes;
            break;
          case 1:
            ++mp.cond1_failures;
            break;
          case 2:
            ++mp.cond2_failures;
            break;
          case 3:
            ++mp.cond3_failures;
            break;
          default:
            ++mp.paste_failures;
        }
      }
      auto n       = static_cast<double>(mp.trials);
      mp.frequency = static_cast<double>(mp.successes) / n;
      mp.sigma     = std::sqrt(mp.frequency * (1 - mp.frequency) / n);
      report.success_by_k.push_back(mp);
    }
    report.increasing = true;
    for (std::size_t i = 1; i < report.success_by_k.size(); ++i) {
      report.increasing = report.increasing
                          && report.success_by_k[i].frequency > report.success_by_k[i - 1].frequency;
    }
    return report;
  }

  MnGraph conjugate_ball(Preaction const& a, Word const& w, std::size_t radius) {
    LazyAction lazy(a);
    Point      y = lazy.apply(a.basepoint(), w);
    return lazy.ball(y.orbit, radius);
  }

}  // namespace bswalk
