#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "pam/problem.hpp"
#include "pam/relation_vectors.hpp"
#include "support.hpp"

using namespace pam;
namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path dir = fs::temp_directory_path() / ("pam_cli_test_" + std::to_string(::getpid()));
  Scratch() { fs::create_directories(dir); }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args) {
  const std::string cmd = std::string(PAM_BINARY) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Vectors for every word of the solar system / atom problem, written as text.
void write_embeddings(const std::string& path) {
  const auto table = testutil::random_table({"solar", "system", "sun", "planet", "mass", "attracts", "revolves",
                                             "gravity", "atom", "nucleus", "electron", "charge", "electromagnetism"},
                                            8, 21);
  std::ofstream out(path);
  table.write(out);
}

}  // namespace

TEST_CASE("exit codes") {
  Scratch s;
  CHECK(run("--help") == 0);
  CHECK(run("map --help") == 0);
  CHECK(run("") != 0);
  CHECK(run("map " + s / "missing.json") == 1);
  write_embeddings(s / "emb.txt");
  const std::string common = " --variant w2v-diff --embeddings " + s / "emb.txt" + " --dimension 8";
  CHECK(run("map data/scenarios/solar_atom_nvn.json --alpha -1" + common) == 1);
  CHECK(run("map data/scenarios/solar_atom_nvn.json --dimension 9 --variant w2v-diff --embeddings " + s / "emb.txt") ==
        1);
  CHECK(run("map data/scenarios/solar_atom_nvn.json --models " + s / "none.json" + " --embeddings " + s / "emb.txt" +
            " --dimension 8") == 1);
}

TEST_CASE("dumped soft matrix equals the library result") {
  Scratch s;
  write_embeddings(s / "emb.txt");
  REQUIRE(run("map data/scenarios/solar_atom_nvn.json --variant w2v-diff --iterations 80 --alpha 2 --embeddings " +
              s / "emb.txt" + " --dimension 8 --dump-soft " + s / "soft.csv" + " --out " + s / "map.json") == 0);

  LoadOptions lo;
  lo.expected_dimension = 8;
  const auto table = load_embeddings_file(s / "emb.txt", lo);
  std::ifstream in("data/scenarios/solar_atom_nvn.json");
  const auto problem = read_problem(in);
  const DiffProvider p(table);
  const auto src = build_analog(problem.source, table, p);
  const auto tgt = build_analog(problem.target, table, p);
  PamOptions opts = problem.params.pam();
  opts.iterations = 80;
  opts.alpha = 2.0;
  const auto r = run_pam(src, tgt, opts);
  std::ostringstream csv;
  write_soft_csv(csv, r.soft, src, tgt);
  CHECK(slurp(s / "soft.csv") == csv.str());
  CHECK_FALSE(slurp(s / "map.json").empty());
}
