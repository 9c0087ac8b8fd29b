#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include "dine/manifest.hpp"
#include "dine/version.hpp"
#include "helpers.hpp"

namespace {

std::string cli() {
  const char* env = std::getenv("DINE_CLI");
  REQUIRE_MESSAGE(env != nullptr, "DINE_CLI must point at the dine binary");
  return env;
}

int run(const std::string& args) {
  const std::string cmd = cli() + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

int count_lines(const std::string& body) {
  int lines = 0;
  for (char c : body)
    if (c == '\n') ++lines;
  return lines;
}

}  // namespace

TEST_CASE("usage and validation exit codes") {
  TempDir tmp;
  CHECK(run("") == 2);                       // missing subcommand
  CHECK(run("no-such-command") == 2);        // unknown subcommand
  CHECK(run("generate-sbm --intra 1.5 --out-edges " + tmp.path("x") +
            " --out-communities " + tmp.path("y")) == 2);
  CHECK(run("perturb --embedding missing.emb --delta -1 --out " +
            tmp.path("p.emb")) == 2);
  CHECK(run("retrofit --embedding missing.emb --hidden-dim 1 --out " +
            tmp.path("h.emb")) == 2);
  CHECK(run("embed --edges /nonexistent.edges --out " + tmp.path("e.emb")) ==
        1);  // runtime failure
  CHECK(run("--help") == 0);
}

TEST_CASE("generate-sbm writes the fixture and its manifest") {
  TempDir tmp;
  const std::string edges = tmp.path("sbm.edges");
  const std::string comms = tmp.path("sbm.comms");
  REQUIRE(run("generate-sbm --blocks 8 --block-size 10 --intra 1.0 "
              "--inter 0.0 --seed 3 --out-edges " + edges +
              " --out-communities " + comms) == 0);
  CHECK(count_lines(read_file(edges)) == 360);
  CHECK(count_lines(read_file(comms)) == 80);

  const dine::RunManifest manifest =
      dine::read_manifest(dine::manifest_path_for(edges));
  CHECK(manifest.command == "generate-sbm");
  CHECK(manifest.seed == 3);
  CHECK(manifest.tool_version == dine::kToolVersion);

  SUBCASE("refuses to overwrite without --force") {
    CHECK(run("generate-sbm --seed 3 --out-edges " + edges +
              " --out-communities " + comms) == 1);
    CHECK(run("generate-sbm --seed 3 --out-edges " + edges +
              " --out-communities " + comms + " --force") == 0);
  }
}

TEST_CASE("pipeline artifacts have the documented shapes") {
  TempDir tmp;
  const std::string edges = tmp.path("g.edges");
  const std::string comms = tmp.path("g.comms");
  REQUIRE(run("generate-sbm --blocks 3 --block-size 6 --intra 0.9 "
              "--inter 0.05 --seed 1 --out-edges " + edges +
              " --out-communities " + comms) == 0);
  const std::string emb = tmp.path("e.emb");
  REQUIRE(run("embed --edges " + edges + " --dim 4 --epochs 2 --seed 1 "
              "--out " + emb) == 0);

  SUBCASE("embed header matches the graph") {
    std::istringstream in(read_file(emb));
    int nodes, dim;
    in >> nodes >> dim;
    CHECK(nodes == 18);
    CHECK(dim == 4);
  }
  SUBCASE("retrofit trace has iters+1 data rows") {
    const std::string out = tmp.path("h.emb");
    const std::string trace = tmp.path("t.csv");
    REQUIRE(run("retrofit --embedding " + emb + " --hidden-dim 4 --iters 25 "
                "--seed 1 --out " + out + " --trace " + trace) == 0);
    CHECK(count_lines(read_file(trace)) == 27);  // header + 26 rows
  }
  SUBCASE("explain row count is D*|E| and shapley guard trips") {
    const std::string sal = tmp.path("s.tsv");
    const std::string sg = tmp.path("sg.json");
    REQUIRE(run("explain --edges " + edges + " --embedding " + emb +
                " --kind marginal --out-saliency " + sal +
                " --out-subgraphs " + sg) == 0);
    std::istringstream in(read_file(edges));
    const int num_edges = count_lines(read_file(edges));
    CHECK(count_lines(read_file(sal)) == 4 * num_edges + 1);

    const std::string big = tmp.path("big.emb");
    {
      std::ostringstream body;
      body << "2 24\n";
      for (int v = 0; v < 2; ++v) {
        body << "n" << v;
        for (int d = 0; d < 24; ++d) body << " 0.5";
        body << "\n";
      }
      write_file(big, body.str());
    }
    write_file(tmp.path("tiny.edges"), "n0 n1\n");
    CHECK(run("explain --edges " + tmp.path("tiny.edges") + " --embedding " +
              big + " --kind shapley --out-saliency " + tmp.path("s2.tsv") +
              " --out-subgraphs " + tmp.path("sg2.json")) == 2);
  }
  SUBCASE("metrics wants exactly one community source") {
    CHECK(run("metrics --edges " + edges + " --embedding " + emb + " --out " +
              tmp.path("m.json")) == 2);
    CHECK(run("metrics --edges " + edges + " --embedding " + emb +
              " --communities " + comms + " --louvain --out " +
              tmp.path("m.json")) == 2);
    CHECK(run("metrics --edges " + edges + " --embedding " + emb +
              " --louvain --out " + tmp.path("m.json")) == 0);
  }
}

TEST_CASE("rerun reproduces a command from its manifest") {
  TempDir tmp;
  const std::string edges = tmp.path("r.edges");
  const std::string comms = tmp.path("r.comms");
  REQUIRE(run("generate-sbm --blocks 2 --block-size 5 --intra 0.8 "
              "--inter 0.1 --seed 9 --out-edges " + edges +
              " --out-communities " + comms) == 0);
  const std::string first = read_file(edges);
  REQUIRE(run("rerun --manifest " + dine::manifest_path_for(edges)) == 1);
  REQUIRE(run("rerun --manifest " + dine::manifest_path_for(edges) +
              " --force") == 0);
  CHECK(read_file(edges) == first);
}
