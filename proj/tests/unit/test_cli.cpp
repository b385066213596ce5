#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "bswalk/cli.hpp"
#include "bswalk/dynamics.hpp"
#include "oracles.hpp"

using namespace bswalk;
namespace fs = std::filesystem;

namespace {
  struct Run {
    int         status;
    std::string out;
    std::string err;
  };

  Run run(std::vector<std::string> const& args) {
    std::ostringstream out, err;
    int                status = run_cli(args, out, err);
    return {status, out.str(), err.str()};
  }

  fs::path scratch(std::string const& name) {
    auto dir = fs::temp_directory_path() / ("bswalk-cli-test-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
  }

  void write(fs::path const& path, std::string const& text) {
    std::ofstream(path) << text;
  }

  std::string slurp(fs::path const& path) {
    std::ifstream      in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }
}  // namespace

TEST_CASE("reduce and phenotype") {
  CHECK(run({"reduce", "--m", "2", "--n", "3", "--word", "tbbTBBB"}).out == "identity\n");
  CHECK(run({"reduce", "--m", "2", "--n", "3", "--word", "tb^5"}).out == "b^6 t b\n");
  CHECK(run({"phenotype", "--m", "2", "--n", "3", "--N", "12"}).out == "1\n");
  CHECK(run({"phenotype", "--m", "2", "--n", "3", "--N", "inf"}).out == "inf\n");
}

TEST_CASE("errors and exit codes") {
  auto bias = run({"nonmixing", "--m", "4", "--n", "2", "--p", "2", "--N", "8"});
  CHECK(bias.status == 2);
  CHECK(bias.err == "BadParams: bias required\n");
  auto parse = run({"reduce", "--m", "2", "--n", "3", "--word", "xyz"});
  CHECK(parse.status == 2);
  CHECK(parse.err.rfind("ParseError: ", 0) == 0);
  auto params = run({"reduce", "--m", "1", "--n", "3", "--word", "t"});
  CHECK(params.status == 2);
  CHECK(params.err.rfind("BadParams: ", 0) == 0);
  auto missing = run({"validate-graph", "--graph", "/nonexistent/graph.txt"});
  CHECK(missing.status == 3);
  CHECK(missing.err.rfind("IoError: ", 0) == 0);
  CHECK(run({"no-such-scenario"}).status == 2);
}

TEST_CASE("validate-graph") {
  auto dir = scratch("validate");
  write(dir / "bad.g", "mn-graph 2 3\nv 0 3\nv 1 3\ne 0 1\n");
  write(dir / "good.g", "mn-graph 2 3\nv 0 3\nv 1 2\ne 0 1\nroot 0\n");
  auto bad = run({"validate-graph", "--graph", (dir / "bad.g").string()});
  CHECK(bad.status == 1);
  auto j = nlohmann::json::parse(bad.out);
  CHECK(j["valid"] == false);
  CHECK(j["transfer_violations"].size() == 1);
  CHECK(run({"validate-graph", "--graph", (dir / "good.g").string()}).status == 0);
}

TEST_CASE("config file overrides flags") {
  auto dir = scratch("config");
  write(dir / "cfg", "# comment\nword tbbT\n");
  auto r = run({"reduce", "--m", "2", "--n", "3", "--word", "t", "--config", (dir / "cfg").string()});
  CHECK(r.out == "b^3\n");

  write(dir / "biased", "m 4\nn 2\nprime 2\nN 8\nM 8\ntrials 200\nhorizon 200\n"
                        "atom t 7/20\natom T 3/20\natom b 1/4\natom B 1/4\n");
  auto nm = run({"nonmixing", "--m", "2", "--n", "3", "--config", (dir / "biased").string()});
  REQUIRE(nm.status == 0);
  auto j = nlohmann::json::parse(nm.out);
  CHECK(j["config"]["m"] == "4");
  CHECK(j["config"]["trials"] == "200");
  CHECK(j["config"]["atoms"].size() == 4);
  CHECK(j["results"].contains("never_return_hat"));
}

TEST_CASE("reports are byte-identical for a fixed seed") {
  auto a = scratch("det-a"), b = scratch("det-b");
  for (auto const& dir : {a, b}) {
    std::vector<std::string> args{"escape", "--m", "2", "--n", "3", "--trials", "300",
                                  "--horizon", "120", "--seed", "5", "--out", dir.string()};
    if (dir == b) {
      args.insert(args.end(), {"--workers", "3"});
    }
    REQUIRE(run(args).status == 0);
  }
  CHECK(slurp(a / "escape.csv") == slurp(b / "escape.csv"));
  auto ja = nlohmann::json::parse(slurp(a / "escape.json"));
  auto jb = nlohmann::json::parse(slurp(b / "escape.json"));
  CHECK(ja["results"] == jb["results"]);
  CHECK(!slurp(a / "escape.csv").empty());

  std::vector<std::string> walk{"walk", "--m", "2", "--n", "3", "--steps", "50", "--seed", "9"};
  CHECK(run(walk).out == run(walk).out);
  walk.back() = "10";
  CHECK(run(walk).out != run({"walk", "--m", "2", "--n", "3", "--steps", "50", "--seed", "9"}).out);
}

TEST_CASE("paste from files") {
  Params p(2, 2);
  MnGraph core(p);
  core.add_vertex(Label(1));
  core.set_root(0);
  auto pre = ball_preaction(core, 1);
  auto mu  = StepMeasure::uniform({parse_word("b"), parse_word("B"), parse_word("t"), parse_word("T")});
  auto dir = scratch("paste");
  write(dir / "pre", serialize(pre));
  for (std::uint64_t seed = 0;; ++seed) {
    REQUIRE(seed < 100);
    auto in = oracle::split_walk(p, pre, pre, mu, 400, 60, seed);
    if (!check_merge_hypotheses(p, in).all()) {
      continue;
    }
    auto r = run({"paste", "--pre1", (dir / "pre").string(), "--pre2", (dir / "pre").string(),
                  "--s1", to_string(spell(in.s1)), "--s2", to_string(spell(in.s2)),
                  "--s3", to_string(spell(in.s3)), "--out", dir.string()});
    REQUIRE(r.status == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["results"]["bridge_label"] == "2");
    CHECK(j["results"]["perfect_kernel_member"] == true);
    auto pasted = parse_preaction(slurp(dir / "paste.preaction"));
    CHECK(pasted.orbit_count() == j["results"]["orbits"].get<std::size_t>());
    break;
  }
}
