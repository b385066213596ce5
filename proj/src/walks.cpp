#include "bswalk/walks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "bswalk/detail/text.hpp"
#include "bswalk/errors.hpp"

namespace bswalk {

  Rational parse_rational(std::string_view text) {
    auto fail = [&text]() {
      return ParseError("expected a rational like 7/20 or 0.35, got '" + std::string(text) + "'");
    };
    if (text.empty()) {
      throw fail();
    }
    try {
      if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Int den = parse_int(text.substr(slash + 1));
        if (den == 0) {
          throw fail();
        }
        return Rational(parse_int(text.substr(0, slash)), den);
      }
      if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view whole = text.substr(0, dot);
        std::string_view frac  = text.substr(dot + 1);
        bool negative = !whole.empty() && whole[0] == '-';
        if (frac.empty() || frac[0] == '-' || frac[0] == '+') {
          throw fail();
        }
        Int scale = boost::multiprecision::pow(Int(10), static_cast<unsigned>(frac.size()));
        Int w     = (whole.empty() || whole == "-" || whole == "+") ? Int(0) : parse_int(whole);
        Int f     = parse_int(frac);
        Rational r(abs(w) * scale + f, scale);
        return negative ? Rational(-r) : r;
      }
      return Rational(parse_int(text));
    } catch (ParseError const&) {
      throw fail();
    }
  }

  ////////////////////////////////////////////////////////////////////////
  // Measures
  ////////////////////////////////////////////////////////////////////////

  StepMeasure::StepMeasure(std::vector<Atom> atoms) : _atoms(std::move(atoms)) {
    if (_atoms.empty()) {
      throw BadParams("a step measure needs at least one atom");
    }
    Rational total = 0;
    for (std::size_t i = 0; i < _atoms.size(); ++i) {
      if (_atoms[i].weight <= 0) {
        throw BadParams("atom '" + to_string(_atoms[i].word) + "' has nonpositive weight");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (_atoms[j].word == _atoms[i].word) {
          throw BadParams("atom '" + to_string(_atoms[i].word) + "' listed twice");
        }
      }
      total += _atoms[i].weight;
    }
    if (total != 1) {
      throw BadParams("atom weights sum to " + total.str() + ", not 1");
    }
  }

  StepMeasure StepMeasure::uniform(std::vector<Word> const& words) {
    std::vector<Atom> atoms;
    for (auto const& w : words) {
      atoms.push_back(Atom{w, Rational(1, static_cast<long long>(words.size()))});
    }
    return StepMeasure(std::move(atoms));
  }

  StepMeasure StepMeasure::from_config(std::string_view text) {
    std::vector<Atom> atoms;
    for (auto const& line : detail::content_lines(text)) {
      auto tok = detail::tokens(line);
      if (tok[0] != "atom") {
        continue;
      }
      if (tok.size() != 3) {
        throw ParseError("expected 'atom <word> <weight>', got '" + line + "'");
      }
      atoms.push_back(Atom{parse_word(tok[1]), parse_rational(tok[2])});
    }
    return StepMeasure(std::move(atoms));
  }

  Rational StepMeasure::weight_of(Word const& w) const {
    Rational total = 0;
    for (auto const& a : _atoms) {
      if (a.word == w) {
        total += a.weight;
      }
    }
    return total;
  }

  SupportReport check_support(Params const& p, StepMeasure const& mu) {
    std::vector<NormalForm> forms;
    for (auto const& a : mu.atoms()) {
      forms.push_back(reduce(p, a.word));
    }
    SupportReport report;
    report.symmetric = true;
    for (auto const& f : forms) {
      report.max_height = std::max(report.max_height, height(f));
      auto inv          = invert(p, f);
      if (std::find(forms.begin(), forms.end(), inv) == forms.end()) {
        report.symmetric = false;
      }
    }
    auto has = [&](Letter x) {
      auto g = reduce(p, Word{x});
      return std::find(forms.begin(), forms.end(), g) != forms.end();
    };
    bool has_b = has(Letter::b) || has(Letter::B);
    bool has_t = has(Letter::t) || has(Letter::T);
    report.generating = report.symmetric && has_b && has_t ? Generation::yes : Generation::unknown;
    return report;
  }

  Sampler::Sampler(StepMeasure const& mu) {
    std::vector<double> weights;
    for (auto const& a : mu.atoms()) {
      _words.push_back(a.word);
      weights.push_back(static_cast<double>(a.weight));
    }
    _dist = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
  }

  ////////////////////////////////////////////////////////////////////////
  // Seeds and fan-out
  ////////////////////////////////////////////////////////////////////////

  namespace {
    std::uint64_t splitmix64(std::uint64_t x) {
      x += 0x9e3779b97f4a7c15ULL;
      x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
      x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
      return x ^ (x >> 31);
    }
  }  // namespace

  std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  }

  void parallel_for(std::size_t count, std::size_t workers,
                    std::function<void(std::size_t)> const& fn) {
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
    if (workers == 1) {
      for (std::size_t i = 0; i < count; ++i) {
        fn(i);
      }
      return;
    }
    std::vector<std::thread>        threads;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&, w]() {
        try {
          for (std::size_t i = w; i < count; i += workers) {
            fn(i);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) {
      t.join();
    }
    for (auto const& e : errors) {
      if (e) {
        std::rethrow_exception(e);
      }
    }
  }

  ////////////////////////////////////////////////////////////////////////
  // Traces
  ////////////////////////////////////////////////////////////////////////

  WalkTrace sample_walk(StepMeasure const& mu, std::size_t k, std::uint64_t seed) {
    Sampler         sampler(mu);
    std::mt19937_64 rng(seed);
    WalkTrace       trace{seed, {}};
    trace.increments.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
      trace.increments.push_back(sampler.word(sampler.draw(rng)));
    }
    return trace;
  }

  std::vector<NormalForm> partial_products(Params const& p, WalkTrace const& trace) {
    std::vector<NormalForm> out{NormalForm()};
    out.reserve(trace.increments.size() + 1);
    NormalForm s;
    for (auto const& g : trace.increments) {
      s.append(p, g);
      out.push_back(s);
    }
    return out;
  }

  WalkTrace reversed(WalkTrace const& trace) {
    WalkTrace out{trace.seed, {}};
    for (auto it = trace.increments.rbegin(); it != trace.increments.rend(); ++it) {
      out.increments.push_back(inverse(*it));
    }
    return out;
  }

  ValuationTrace valuation_trace(Params const& p, std::int64_t q, Int const& n0,
                                 WalkTrace const& trace, bool strict) {
    std::int64_t vm = valuation(p.m(), q);
    std::int64_t vn = valuation(p.n(), q);
    if (q < 2 || prime_factors(q) != std::vector<std::int64_t>{q}) {
      throw BadParams(std::to_string(q) + " is not a prime");
    }
    if (vm <= vn) {
      throw BadParams("valuation tracking needs |m|_q > |n|_q");
    }
    if (n0 == 0) {
      throw BadParams("start label must be nonzero");
    }
    std::int64_t start = valuation(n0, q);
    if (start <= vm) {
      throw BadParams("start label needs |N|_q > |m|_q");
    }

    ValuationTrace out;
    out.prime = q;
    out.start = start;
    out.h_plus.push_back(0);
    out.h_minus.push_back(0);
    out.values.push_back(start);
    // The recursion N_i / (N_i ^ n) = N_{i+1} / (N_{i+1} ^ m) read on
    // valuations, carried alongside the closed form as a self-check.
    std::int64_t recursive = start;
    for (std::size_t i = 0; i < trace.increments.size(); ++i) {
      auto const& g = trace.increments[i];
      if (g.size() != 1) {
        throw BadParams("valuation tracking needs single-letter increments");
      }
      std::int64_t hp = out.h_plus.back() + (g[0] == Letter::t ? 1 : 0);
      std::int64_t hm = out.h_minus.back() + (g[0] == Letter::T ? 1 : 0);
      if (g[0] == Letter::t) {
        recursive = recursive - std::min(recursive, vn) + vm;
      } else if (g[0] == Letter::T) {
        recursive = recursive - std::min(recursive, vm) + vn;
      }
      std::int64_t closed = (hp - hm) * (vm - vn) + start;
      if (closed != recursive) {
        throw std::logic_error("valuation closed form disagrees with the transfer recursion");
      }
      out.h_plus.push_back(hp);
      out.h_minus.push_back(hm);
      out.values.push_back(closed);
      if (hp < hm) {
        out.violated_at = i + 1;
        if (strict) {
          throw HypothesisViolated(i + 1, "more t^-1 than t letters");
        }
        break;
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // One-dimensional lazy walk
  ////////////////////////////////////////////////////////////////////////

  std::int64_t safe_level(double p_plus, double p_minus) {
    if (p_minus <= 0) {
      return 1;
    }
    double ratio = p_minus / p_plus;
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(std::log(1e-12) / std::log(ratio))));
  }

  LazyWalkStats lazy_walk_stats(double p_plus, double p_minus, std::size_t trials,
                                std::size_t horizon, std::uint64_t seed, std::size_t workers) {
    if (!(p_plus > p_minus) || p_minus < 0 || p_plus + p_minus > 1 + 1e-12) {
      throw BadParams("lazy walk needs p+ > p- >= 0 and p+ + p- <= 1");
    }
    if (trials == 0 || horizon == 0) {
      throw BadParams("trials and horizon must be >= 1");
    }
    std::vector<LazyWalkState> finals(trials);
    parallel_for(trials, workers, [&](std::size_t i) {
      std::mt19937_64 rng(derive_seed(seed, i));
      finals[i] = advance_lazy_walk(rng, p_plus, p_minus, 0, horizon, LazyWalkState{});
    });

    double const drift   = p_plus - p_minus;
    double const ratio   = p_minus / p_plus;
    std::size_t  escaped = 0;
    LazyWalkStats s;
    s.trials  = trials;
    s.horizon = horizon;
    double sum = 0, sum_sq = 0, bound = 0;
    for (auto const& f : finals) {
      double rate = static_cast<double>(f.z) / static_cast<double>(horizon);
      sum += rate;
      sum_sq += rate * rate;
      if (f.returned || f.z <= 0) {
        continue;
      }
      if (static_cast<double>(f.z) > drift * static_cast<double>(horizon) / 2) {
        ++escaped;
        bound += std::pow(ratio, static_cast<double>(std::min(f.z, safe_level(p_plus, p_minus))));
      } else {
        ++s.undecided;
      }
    }
    auto n             = static_cast<double>(trials);
    s.never_return_hat = static_cast<double>(escaped) / n;
    s.sigma            = std::sqrt(s.never_return_hat * (1 - s.never_return_hat) / n);
    s.ci_low           = s.never_return_hat - 3 * s.sigma;
    s.ci_high          = s.never_return_hat + 3 * s.sigma;
    s.drift_hat        = sum / n;
    s.drift_sigma      = std::sqrt(std::max(0.0, sum_sq / n - s.drift_hat * s.drift_hat) / n);
    s.truncation_bound = bound / n;
    return s;
  }

  std::vector<OrbitId> project_trace(LazyAction& a, Point const& x, WalkTrace const& trace) {
    std::vector<OrbitId> path{x.orbit};
    path.reserve(trace.increments.size() + 1);
    Point y = x;
    for (auto const& g : trace.increments) {
      y = a.apply(std::move(y), g);
      path.push_back(y.orbit);
    }
    return path;
  }

}  // namespace bswalk
