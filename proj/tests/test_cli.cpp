#include <doctest.h>

#include "oracles.hpp"

#include <mipfolio/configspace.hpp>
#include <mipfolio/generators.hpp>
#include <mipfolio/simulator.hpp>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace mipfolio;
namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "mipfolio_cli_test";

int run(const std::string& args)
{
  const std::string cmd = "cd '" + kWork.string() + "' && '" MIPFOLIO_CLI "' " + args + " >/dev/null 2>&1";
  const int status      = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text)
{
  std::ofstream out(p, std::ios::binary);
  out << text;
}

struct Workspace {
  Workspace()
  {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
    spit(kWork / "ks.mps", write_mps(gen::knapsack(12, 4)));
  }
  ~Workspace() { fs::remove_all(kWork); }
};

}  // namespace

TEST_CASE("gen-configs")
{
  Workspace ws;
  CHECK(run("gen-configs --size 180 --seed 7 --out pool.json") == 0);
  const auto pool = read_pool_file((kWork / "pool.json").string());
  CHECK(pool.size() == 180);
  const std::string first = slurp(kWork / "pool.json");
  CHECK(run("gen-configs --size 180 --seed 7 --out pool.json") == 0);
  CHECK(slurp(kWork / "pool.json") == first);
  CHECK(run("gen-configs --size 0 --out p0.json") == 2);
  CHECK(run("gen-configs --size 3") == 2);
}

TEST_CASE("solve")
{
  Workspace ws;
  const double opt = *oracle::mip_by_enumeration(gen::knapsack(12, 4));
  CHECK(run("solve --instance ks.mps --seconds 5 --seed 1 --out-dir s") == 0);
  const auto summary = nlohmann::json::parse(slurp(kWork / "s" / "summary.json"));
  CHECK(summary.at("objective").get<double>() == opt);
  CHECK(summary.at("status") == "Completed");
  CHECK(fs::exists(kWork / "s" / "trace.csv"));

  CHECK(run("solve --instance missing.mps") == 3);
  CHECK(run("solve --instance ks.mps --seconds 0") == 2);
  CHECK(run("solve --instance ks.mps --config cfg_000") == 2);

  spit(kWork / "bad.mps", "NAME bad\nROWS\n N obj\n L c\nCOLUMNS\n x obj 1 c 1\nRHS\n rhs c -1\nENDATA\n");
  CHECK(run("solve --instance bad.mps --seconds 1 --out-dir b") == 4);
}

TEST_CASE("portfolio")
{
  Workspace ws;
  REQUIRE(run("gen-configs --size 6 --seed 3 --out pool.json") == 0);
  spit(kWork / "m.json",
       R"({"instance":"ks.mps","pool":"pool.json","threads_per_worker":1,"core_cap":4,"wall_seconds":5,"master_seed":9})");
  CHECK(run("portfolio --manifest m.json --out-dir a") == 0);
  std::size_t csvs = 0;
  for (const auto& e : fs::directory_iterator(kWork / "a" / "workers")) { csvs += e.path().extension() == ".csv"; }
  CHECK(csvs == 4);
  CHECK(fs::exists(kWork / "a" / "aggregate.csv"));
  CHECK(run("portfolio --manifest m.json --out-dir b") == 0);
  CHECK(slurp(kWork / "a" / "aggregate.csv") == slurp(kWork / "b" / "aggregate.csv"));

  spit(kWork / "over.json",
       R"({"instance":"ks.mps","pool":"pool.json","n":4,"threads_per_worker":2,"core_cap":4,"wall_seconds":5})");
  CHECK(run("portfolio --manifest over.json --out-dir c") == 3);
  spit(kWork / "extra.json", R"({"instance":"ks.mps","pool":"pool.json","wall_seconds":5,"cores":4})");
  CHECK(run("portfolio --manifest extra.json --out-dir c") == 3);

  spit(kWork / "env.json", R"({"instance":"ks.mps","pool":"pool.json","wall_seconds":2})");
  setenv("MIPFOLIO_CORE_CAP", "2", 1);
  CHECK(run("portfolio --manifest env.json --out-dir e") == 0);
  unsetenv("MIPFOLIO_CORE_CAP");
  const auto summary = nlohmann::json::parse(slurp(kWork / "e" / "summary.json"));
  CHECK(summary.at("n") == 2);
}

TEST_CASE("simulate")
{
  Workspace ws;
  Rng rng(6);
  TraceDb db;
  for (int c = 0; c < 6; ++c) {
    for (int i = 0; i < 3; ++i) {
      db.add("k" + std::to_string(c), "i" + std::to_string(i), oracle::random_gap_trace(rng, 60.0));
    }
  }
  db.save((kWork / "traces").string());

  CHECK(run("simulate --traces traces --n 2 --runs 15 --exhaustive --out ex.json") == 0);
  CHECK(slurp(kWork / "ex.json") == report_to_json(exhaustive(db, 2)));

  CHECK(run("simulate --traces traces --n 2 --seed 4 --out sim.json --csv sim.csv") == 0);
  const auto rep = nlohmann::json::parse(slurp(kWork / "sim.json"));
  CHECK(rep.at("runs") == 1000);
  CHECK(slurp(kWork / "sim.json") == report_to_json(simulate(db, 2, 1000, 4)));
  CHECK(slurp(kWork / "sim.csv").rfind("n,runs,pg_mean_pct", 0) == 0);

  CHECK(run("simulate --traces traces --n 7") == 2);
  CHECK(run("simulate --traces nowhere --n 2") == 3);
}

TEST_CASE("repro preset")
{
  Workspace ws;
  CHECK(run("repro --scale 0.01 --steps 200 --out-dir r") == 0);
  for (const char* f : {"pool.json", "ranking.json", "simulation.csv", "plan_splits.csv", "traces/horizons.json"}) {
    CAPTURE(f);
    CHECK(fs::exists(kWork / "r" / f));
  }
  CHECK(slurp(kWork / "r" / "plan_splits.csv") == "threads,n_division,n_ranked\n1,180,180\n4,45,45\n8,22,20\n16,11,10\n");
  CHECK(run("repro --scale 0") == 2);
}
