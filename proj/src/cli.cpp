#include "bswalk/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "bswalk/detail/text.hpp"
#include "bswalk/dynamics.hpp"
#include "bswalk/errors.hpp"

namespace bswalk {

  namespace {

    using json = nlohmann::ordered_json;

    // Keys accepted both as --flags and as config-file lines.
    std::vector<std::string> const setting_keys = {
        "m",       "n",     "seed",  "trials", "horizon",     "workers", "word",
        "N",       "p",     "M",     "window", "k",           "steps",   "R",
        "epsilon", "calibration", "graph", "core1", "core2", "pre1",    "pre2",
        "s1",      "s2",    "s3"};

    std::map<std::string, std::vector<std::string>> const scenario_keys = {
        {"reduce", {"m", "n", "word"}},
        {"phenotype", {"m", "n", "N"}},
        {"validate-graph", {"graph"}},
        {"walk", {"m", "n", "seed", "steps", "p", "N"}},
        {"escape", {"m", "n", "seed", "trials", "horizon", "workers", "graph"}},
        {"nonmixing", {"m", "n", "seed", "trials", "horizon", "workers", "p", "N", "M", "window"}},
        {"mixing-witness",
         {"m", "n", "seed", "trials", "workers", "k", "R", "epsilon", "calibration", "core1",
          "core2"}},
        {"paste", {"pre1", "pre2", "s1", "s2", "s3"}},
    };

    std::map<std::string, std::map<std::string, std::string>> const scenario_defaults = {
        {"walk", {{"steps", "100"}}},
        {"escape", {{"trials", "10000"}, {"horizon", "1000"}}},
        {"nonmixing", {{"trials", "100000"}, {"horizon", "10000"}, {"window", "100"}}},
        {"mixing-witness",
         {{"trials", "1000"}, {"k", "50,200,800"}, {"R", "1"}, {"epsilon", "0.02"},
          {"calibration", "200"}}},
    };

    struct Settings {
      std::string                        scenario;
      std::map<std::string, std::string> values;
      std::vector<Atom>                  atoms;
      std::vector<std::string>           atom_text;
      std::string                        out_dir;

      bool has(std::string const& key) const {
        return values.count(key) > 0;
      }
      std::string const& text(std::string const& key) const {
        auto it = values.find(key);
        if (it == values.end()) {
          throw BadParams("missing setting '" + key + "'");
        }
        return it->second;
      }
      Int integer(std::string const& key) const {
        return parse_int(text(key));
      }
      std::int64_t int64(std::string const& key) const {
        Int v = integer(key);
        if (abs(v) > Int(std::numeric_limits<std::int64_t>::max() / 2)) {
          throw ParseError("setting '" + key + "' is out of range");
        }
        return static_cast<std::int64_t>(v);
      }
      std::size_t count(std::string const& key) const {
        std::int64_t v = int64(key);
        if (v < 0) {
          throw BadParams("setting '" + key + "' must be nonnegative");
        }
        return static_cast<std::size_t>(v);
      }
      double real(std::string const& key) const {
        return static_cast<double>(parse_rational(text(key)));
      }
      Params params() const {
        return Params(int64("m"), int64("n"));
      }
    };

    std::string read_file(std::string const& path) {
      std::ifstream in(path, std::ios::binary);
      if (!in) {
        throw IoError("cannot read '" + path + "'");
      }
      std::ostringstream buffer;
      buffer << in.rdbuf();
      return buffer.str();
    }

    void write_file(std::filesystem::path const& path, std::string const& content) {
      std::ofstream out(path, std::ios::binary);
      if (!out || !(out << content)) {
        throw IoError("cannot write '" + path.string() + "'");
      }
    }

    void apply_config(Settings& s, std::string const& text) {
      for (auto const& line : detail::content_lines(text)) {
        auto tok = detail::tokens(line);
        if (tok[0] == "atom") {
          if (tok.size() != 3) {
            throw ParseError("expected 'atom <word> <weight>', got '" + line + "'");
          }
          s.atoms.push_back(Atom{parse_word(tok[1]), parse_rational(tok[2])});
          s.atom_text.push_back(tok[1] + " " + tok[2]);
          continue;
        }
        std::string key = tok[0] == "prime" ? "p" : tok[0];
        if (std::find(setting_keys.begin(), setting_keys.end(), key) == setting_keys.end()) {
          throw ParseError("unknown config key '" + tok[0] + "'");
        }
        if (tok.size() != 2) {
          throw ParseError("expected '<key> <value>', got '" + line + "'");
        }
        s.values[key] = tok[1];
      }
    }

    StepMeasure measure_of(Settings const& s) {
      if (s.atoms.empty()) {
        return StepMeasure::uniform(
            {Word{Letter::b}, Word{Letter::B}, Word{Letter::t}, Word{Letter::T}});
      }
      return StepMeasure(s.atoms);
    }

    json resolved_config(Settings const& s) {
      json cfg;
      cfg["scenario"] = s.scenario;
      for (auto const& key : scenario_keys.at(s.scenario)) {
        if (s.has(key)) {
          cfg[key] = s.text(key);
        }
      }
      if (s.scenario == "walk" || s.scenario == "escape" || s.scenario == "nonmixing"
          || s.scenario == "mixing-witness") {
        json atoms = json::array();
        if (s.atom_text.empty()) {
          for (auto const* w : {"b", "B", "t", "T"}) {
            atoms.push_back(std::string(w) + " 1/4");
          }
        } else {
          for (auto const& a : s.atom_text) {
            atoms.push_back(a);
          }
        }
        cfg["atoms"] = atoms;
      }
      return cfg;
    }

    std::string number(double x) {
      char buffer[40];
      std::snprintf(buffer, sizeof buffer, "%.10g", x);
      return buffer;
    }

    ExperimentConfig experiment_of(Settings const& s) {
      ExperimentConfig c;
      c.params  = s.params();
      c.measure = measure_of(s);
      if (s.has("trials")) {
        c.trials = s.count("trials");
      }
      if (s.has("horizon")) {
        c.horizon = s.count("horizon");
      }
      c.seed    = static_cast<std::uint64_t>(s.int64("seed"));
      c.workers = s.has("workers") ? s.count("workers") : 1;
      return c;
    }

    MnGraph graph_setting(Settings const& s, std::string const& key, MnGraph fallback) {
      if (!s.has(key)) {
        return fallback;
      }
      MnGraph g = parse_graph(read_file(s.text(key)));
      if (!(g.params() == s.params())) {
        throw BadParams("graph '" + s.text(key) + "' is for different (m, n)");
      }
      return g;
    }

    struct Output {
      json        summary;
      std::string csv;
      std::string csv_name;
      std::string extra;
      std::string extra_name;
    };

    ////////////////////////////////////////////////////////////////////
    // Scenarios
    ////////////////////////////////////////////////////////////////////

    Output run_walk(Settings const& s) {
      Params      p     = s.params();
      StepMeasure mu    = measure_of(s);
      auto        trace = sample_walk(mu, s.count("steps"), static_cast<std::uint64_t>(s.int64("seed")));
      auto        products = partial_products(p, trace);
      std::optional<ValuationTrace> val;
      if (s.has("p") && s.has("N")) {
        val = valuation_trace(p, s.int64("p"), s.integer("N"), trace);
      }
      std::ostringstream csv;
      csv << "step,increment,height,valuation\n";
      for (std::size_t i = 0; i < products.size(); ++i) {
        csv << i << ',' << (i == 0 ? "" : to_string(trace.increments[i - 1])) << ','
            << height(products[i]) << ',';
        if (val && i < val->values.size()) {
          csv << val->values[i];
        }
        csv << '\n';
      }
      auto support = check_support(p, mu);
      json r;
      r["steps"]       = trace.increments.size();
      r["product"]     = to_string(products.back());
      r["height"]      = height(products.back());
      r["symmetric"]   = support.symmetric;
      r["max_height"]  = support.max_height;
      r["generating"]  = support.generating == Generation::yes ? "yes" : "unknown";
      if (val) {
        r["valuation_final"] = val->values.back();
        r["valuation_violated_at"] =
            val->violated_at ? json(*val->violated_at) : json(nullptr);
      }
      return {r, csv.str(), "walk.csv", "", ""};
    }

    Output run_escape(Settings const& s) {
      Params  p = s.params();
      MnGraph loop(p);
      loop.add_vertex(Label::infinity());
      loop.add_edge(0, 0);
      loop.set_root(0);
      MnGraph g = graph_setting(s, "graph", loop);
      auto    r = escape_experiment(experiment_of(s), g);
      std::ostringstream csv;
      csv << "k,occupancy\n";
      for (std::size_t k = 0; k < r.occupancy.size(); ++k) {
        csv << k << ',' << number(r.occupancy[k]) << '\n';
      }
      json j;
      j["occupancy_at_horizon"] = r.occupancy.back();
      if (r.occupancy.size() > 500) {
        j["occupancy_at_500"] = r.occupancy[500];
      }
      j["last_visit_median"] = r.last_visit_median;
      j["last_visit_q90"]    = r.last_visit_q90;
      j["last_visit_q99"]    = r.last_visit_q99;
      j["q99_finite"]        = r.q99_finite;
      j["block"]             = r.block;
      j["block_means"]       = r.block_means;
      j["monotone"]          = r.monotone;
      j["envelope_theta"]    = r.envelope_theta;
      j["envelope_scale"]    = r.envelope_scale;
      return {j, csv.str(), "escape.csv", "", ""};
    }

    Output run_nonmixing(Settings const& s) {
      ExperimentConfig c = experiment_of(s);
      if (!s.has("p") || !s.has("N")) {
        throw BadParams("nonmixing needs --p and --N");
      }
      c.prime        = s.int64("p");
      c.start_label  = s.integer("N");
      c.target_label = s.has("M") ? s.integer("M") : c.start_label;
      c.window       = s.count("window");
      auto r         = nonmixing_experiment(c);
      json j;
      j["prime"]                  = r.prime;
      j["orientation"]            = r.orientation;
      j["start_valuation"]        = r.start_valuation;
      j["target_valuation"]       = r.target_valuation;
      j["p_plus"]                 = r.p_plus;
      j["p_minus"]                = r.p_minus;
      j["predicted_never_return"] = r.predicted_never_return;
      j["predicted_drift"]        = r.predicted_drift;
      j["never_return_hat"]       = r.never_return_hat;
      j["sigma"]                  = r.sigma;
      j["ci"]                     = {r.ci_low, r.ci_high};
      j["drift_hat"]              = r.drift_hat;
      j["drift_sigma"]            = r.drift_sigma;
      j["bound_check"]            = r.bound_check;
      j["undecided"]              = r.undecided;
      j["truncation_bound"]       = r.truncation_bound;
      j["window"]                 = r.window;
      j["closed_form_checks"]     = r.closed_form_checks;
      j["closed_form_mismatches"] = r.closed_form_mismatches;
      j["trials_exceeding"]       = r.trials_exceeding;
      j["certificates_fired"]     = r.certificates_fired;
      j["threshold_step"]         = r.threshold_step;
      std::ostringstream csv;
      csv << "statistic,value\n";
      for (auto const& [key, value] : j.items()) {
        if (value.is_number()) {
          csv << key << ',' << value.dump() << '\n';
        }
      }
      return {j, csv.str(), "nonmixing.csv", "", ""};
    }

    Output run_mixing(Settings const& s) {
      ExperimentConfig c = experiment_of(s);
      c.radius           = s.count("R");
      c.epsilon          = s.real("epsilon");
      c.calibration      = s.count("calibration");
      for (auto const& part : [&]() {
             std::string        list = s.text("k");
             std::vector<std::string> parts;
             std::stringstream  ss(list);
             std::string        item;
             while (std::getline(ss, item, ',')) {
               parts.push_back(item);
             }
             return parts;
           }()) {
        Int k = parse_int(part);
        if (k < 1) {
          throw BadParams("walk lengths must be >= 1");
        }
        c.ks.push_back(static_cast<std::size_t>(k));
      }
      MnGraph unit(c.params);
      unit.add_vertex(Label(1));
      unit.set_root(0);
      MnGraph core1 = graph_setting(s, "core1", unit);
      MnGraph core2 = graph_setting(s, "core2", unit);
      auto    r     = mixing_witness_experiment(c, core1, core2, c.radius);
      std::ostringstream csv;
      csv << "k,k0,trials,successes,frequency,sigma,cond1_failures,cond2_failures,"
             "cond3_failures,paste_failures\n";
      json series = json::array();
      for (auto const& mp : r.success_by_k) {
        csv << mp.k << ',' << mp.k0 << ',' << mp.trials << ',' << mp.successes << ','
            << number(mp.frequency) << ',' << number(mp.sigma) << ',' << mp.cond1_failures << ','
            << mp.cond2_failures << ',' << mp.cond3_failures << ',' << mp.paste_failures << '\n';
        series.push_back({{"k", mp.k},
                          {"k0", mp.k0},
                          {"successes", mp.successes},
                          {"frequency", mp.frequency},
                          {"sigma", mp.sigma}});
      }
      json j;
      j["phenotype"]    = to_string(r.phenotype);
      j["max_height"]   = r.max_height;
      j["success_by_k"] = series;
      j["increasing"]   = r.increasing;
      return {j, csv.str(), "mixing-witness.csv", "", ""};
    }

    Output run_paste(Settings const& s) {
      Preaction  pre1 = parse_preaction(read_file(s.text("pre1")));
      Preaction  pre2 = parse_preaction(read_file(s.text("pre2")));
      Params     p    = pre1.params();
      if (!(pre2.params() == p)) {
        throw BadParams("the two preactions are for different (m, n)");
      }
      MergeInput in{pre1, pre2, reduce(p, parse_word(s.text("s1"))),
                    reduce(p, parse_word(s.text("s2"))), reduce(p, parse_word(s.text("s3")))};
      auto c = check_merge_hypotheses(p, in);
      json j;
      j["cond1"] = c.cond1;
      j["cond2"] = c.cond2;
      j["cond3"] = c.cond3;
      auto r     = paste(p, in);
      j["orbits"]       = r.preaction.orbit_count();
      j["bridge"]       = r.bridge.size();
      j["bridge_label"] = to_string(r.bridge_label);
      j["x2"]           = {{"orbit", r.x2.orbit}, {"offset", to_string(r.x2.offset)}};
      j["phenotype"]    = to_string(graph_phenotype(mn_graph_of(r.preaction)));
      j["perfect_kernel_member"] = perfect_kernel_member(mn_graph_of(r.preaction));
      return {j, "", "", serialize(r.preaction), "paste.preaction"};
    }

    json validation_json(ValidationReport const& r) {
      json degrees = json::array();
      for (auto const& d : r.degree_violations) {
        degrees.push_back({{"vertex", d.vertex},
                           {"direction", d.direction == Direction::outgoing ? "out" : "in"},
                           {"degree", d.degree},
                           {"cap", d.cap}});
      }
      json transfers = json::array();
      for (auto const& t : r.transfer_violations) {
        transfers.push_back({{"edge", t.edge},
                             {"source_ratio", t.source_ratio ? to_string(*t.source_ratio) : "inf"},
                             {"target_ratio", t.target_ratio ? to_string(*t.target_ratio) : "inf"}});
      }
      return {{"valid", r.valid()},
              {"saturated", r.saturated},
              {"connected", r.connected},
              {"degree_violations", degrees},
              {"transfer_violations", transfers},
              {"other_violations", r.other_violations}};
    }

    int dispatch(Settings& s, std::ostream& out) {
      if (s.scenario == "reduce") {
        out << to_string(reduce(s.params(), parse_word(s.text("word")))) << '\n';
        return 0;
      }
      if (s.scenario == "phenotype") {
        out << to_string(phenotype(s.params(), parse_label(s.text("N")))) << '\n';
        return 0;
      }
      if (s.scenario == "validate-graph") {
        auto report = validate(parse_graph(read_file(s.text("graph"))));
        out << validation_json(report).dump(2) << '\n';
        return report.valid() ? 0 : 1;
      }
      Output o;
      if (s.scenario == "walk") {
        o = run_walk(s);
      } else if (s.scenario == "escape") {
        o = run_escape(s);
      } else if (s.scenario == "nonmixing") {
        o = run_nonmixing(s);
      } else if (s.scenario == "mixing-witness") {
        o = run_mixing(s);
      } else {
        o = run_paste(s);
      }
      json report;
      report["config"]  = resolved_config(s);
      report["results"] = o.summary;
      std::string text  = report.dump(2) + "\n";
      if (!s.out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(s.out_dir, ec);
        if (ec) {
          throw IoError("cannot create '" + s.out_dir + "'");
        }
        std::filesystem::path dir(s.out_dir);
        write_file(dir / (s.scenario + ".json"), text);
        if (!o.csv_name.empty()) {
          write_file(dir / o.csv_name, o.csv);
        }
        if (!o.extra_name.empty()) {
          write_file(dir / o.extra_name, o.extra);
        }
      }
      out << text;
      return 0;
    }

  }  // namespace

  int run_cli(std::vector<std::string> const& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random walks by conjugation on subgroups of Baumslag-Solitar groups"};
    app.require_subcommand(1);
    std::map<std::string, std::string> flags;
    std::string                        out_dir, config_path;

    std::map<std::string, CLI::App*> commands;
    for (auto const& [name, keys] : scenario_keys) {
      auto* cmd = app.add_subcommand(name);
      for (auto const& key : keys) {
        cmd->add_option("--" + key, flags[name + "/" + key]);
      }
      cmd->add_option("--config", config_path, "key-value file; its entries override flags");
      cmd->add_option("--out", out_dir, "directory for the CSV and JSON reports");
      commands[name] = cmd;
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (CLI::CallForHelp const& e) {
      out << app.help();
      return 0;
    } catch (CLI::ParseError const& e) {
      err << "ParseError: " << e.what() << '\n';
      return 2;
    }

    try {
      Settings s;
      for (auto const& [name, cmd] : commands) {
        if (cmd->parsed()) {
          s.scenario = name;
        }
      }
      auto const& keys = scenario_keys.at(s.scenario);
      if (auto it = scenario_defaults.find(s.scenario); it != scenario_defaults.end()) {
        s.values = it->second;
      }
      if (std::find(keys.begin(), keys.end(), "seed") != keys.end()) {
        s.values["seed"] = "1";
      }
      for (auto const& key : keys) {
        auto* opt = commands[s.scenario]->get_option("--" + key);
        if (opt->count() > 0) {
          s.values[key] = flags[s.scenario + "/" + key];
        }
      }
      if (!config_path.empty()) {
        apply_config(s, read_file(config_path));
      }
      s.out_dir = out_dir;
      return dispatch(s, out);
    } catch (IoError const& e) {
      err << e.kind() << ": " << e.what() << '\n';
      return 3;
    } catch (Error const& e) {
      err << e.kind() << ": " << e.what() << '\n';
      return 2;
    }
  }

}  // namespace bswalk
