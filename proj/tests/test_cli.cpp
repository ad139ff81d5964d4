#include "cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = c1p::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string fixture(const std::string& name) { return std::string(C1P_FIXTURE_DIR) + "/" + name; }

std::string golden(const std::string& name) {
  std::ifstream in(std::string(C1P_GOLDEN_DIR) + "/" + name);
  REQUIRE(in);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string temp_model(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("c1p_cli_" + name + ".c1p");
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("check on the worked examples") {
  auto cover = cli({"check", "cover", "-k", "1", fixture("example-4.2.c1p")});
  CHECK(cover.code == 0);
  CHECK(cover.out == "YES\n");
  auto reach = cli({"check", "reach", "-k", "1", fixture("example-4.2.c1p")});
  CHECK(reach.code == 1);
  CHECK(reach.out == "NO\n");

  CHECK(cli({"check", "cover", "-k", "0", fixture("single.c1p")}).out == "YES\n");
  CHECK(cli({"check", "reach", "-k", "0", fixture("single.c1p")}).code == 1);
  CHECK(cli({"check", "reach", "-k", "1/2", fixture("single.c1p")}).code == 0);
  CHECK(cli({"check", "reach", "-k", "1", fixture("single.c1p"), "--force-guarded"}).code == 0);
  for (int k = 0; k <= 4; ++k) {
    CHECK(cli({"check", "cover", "-k", std::to_string(k), fixture("fig1.c1p")}).code == 1);
    CHECK(cli({"check", "reach", "-k", std::to_string(k), fixture("fig1.c1p")}).code == 1);
  }
}

TEST_CASE("bound and interval") {
  auto fig1 = cli({"check", "bound", fixture("fig1.c1p")});
  CHECK(fig1.code == 0);
  CHECK(fig1.out == "BOUNDED\n");
  auto chain = cli({"check", "bound", fixture("chain.c1p")});
  CHECK(chain.code == 0);
  CHECK(chain.out == "BOUNDED b=1 right=open\n");
  CHECK(cli({"check", "bound", fixture("chain2.c1p")}).out == "BOUNDED b=2 right=closed\n");

  auto loop = temp_model("loop",
                         "c1pvass v1\nstate s0 initial\nstate f final\n"
                         "trans s0 f add=0 stack=none\ntrans f f add=1 stack=none\n");
  auto unbounded = cli({"check", "bound", loop});
  CHECK(unbounded.code == 1);
  CHECK(unbounded.out == "UNBOUNDED\n");
  CHECK(cli({"check", "bound", loop, "--force-guarded"}).out == "UNBOUNDED\n");

  CHECK(cli({"interval", fixture("chain2.c1p")}).out == "INTERVAL (0,2]\n");
  CHECK(cli({"interval", fixture("chain.c1p")}).out == "INTERVAL [0,1)\n");
  CHECK(cli({"interval", fixture("single.c1p")}).out == "INTERVAL (0,1]\n");
  CHECK(cli({"interval", loop}).out == "INTERVAL [0,inf)\n");
  auto dead = temp_model("dead", "c1pvass v1\nstate s0 initial\nstate f final\n");
  auto empty = cli({"interval", dead});
  CHECK(empty.code == 0);
  CHECK(empty.out == "EMPTY\n");
  auto guarded = cli({"interval", fixture("fig1.c1p")});
  CHECK(guarded.code == 2);
  CHECK(guarded.err.find("guards") != std::string::npos);
}

TEST_CASE("json envelope") {
  auto r = cli({"check", "cover", "-k", "4", fixture("fig1.c1p"), "--json"});
  CHECK(r.code == 1);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["verdict"] == "NO");
  CHECK(j["payload"]["pipeline"] == "guarded");
  CHECK(j["payload"]["k"] == "4");
  CHECK(j["micros"].is_number_integer());

  auto i = nlohmann::json::parse(cli({"interval", fixture("chain.c1p"), "--json"}).out);
  CHECK(i["verdict"] == "INTERVAL");
  CHECK(i["payload"]["interval"]["lo"] == "0");
  CHECK(i["payload"]["interval"]["hi"] == "1");
  CHECK(i["payload"]["interval"]["lo_closed"] == true);
  CHECK(i["payload"]["interval"]["hi_closed"] == false);

  auto o = nlohmann::json::parse(cli({"oracle", "--mode", "cover", "-k", "1", fixture("example-4.2.c1p"), "--json"}).out);
  CHECK(o["verdict"] == "WITNESS");
  REQUIRE(o["payload"]["path"].size() == 3);
  CHECK(o["payload"]["path"][2]["interval"]["lo"] == "1");
  CHECK(o["payload"]["path"][2]["interval"]["lo_closed"] == false);
  CHECK(o["payload"]["path"][2]["interval"]["hi"] == "2");
}

TEST_CASE("oracle") {
  auto w = cli({"oracle", "--mode", "cover", "-k", "1", fixture("example-4.2.c1p")});
  CHECK(w.code == 0);
  CHECK(w.out == "WITNESS steps=2\ns0 [] [0,0]\ns1 [] [1,1]\nf [] (1,2]\n");
  auto none = cli({"oracle", "--mode", "reach", "-k", "0", fixture("single.c1p"), "--max-steps", "20"});
  CHECK(none.code == 1);
  CHECK(none.out == "NO-WITNESS-WITHIN-BUDGET\n");
  CHECK(cli({"oracle", "--mode", "sideways", fixture("single.c1p")}).code == 2);
}

TEST_CASE("emit outputs are stable") {
  CHECK(cli({"emit", "pda", "--mode", "cover", fixture("example-4.2.c1p")}).out == golden("example-4.2.cover.pda"));
  CHECK(cli({"emit", "pda", "--mode", "reach", "--force-guarded", fixture("single.c1p")}).out ==
        golden("single.reach.pda"));
  CHECK(cli({"emit", "cnf", "--mode", "cover", fixture("example-4.2.c1p")}).out == golden("example-4.2.cover.cnf"));
  CHECK(cli({"emit", "parikh", "--mode", "cover", "-k", "1", fixture("single.c1p")}).out ==
        golden("single.cover1.smt2"));
  auto a = cli({"emit", "pda", "--mode", "reach", fixture("fig1.c1p")});
  auto b = cli({"emit", "pda", "--mode", "reach", fixture("fig1.c1p")});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("state s3@") != std::string::npos);
  CHECK(cli({"emit", "pda", "--mode", "sideways", fixture("fig1.c1p")}).code == 2);
}

TEST_CASE("validate and errors") {
  auto ok = cli({"validate", fixture("fig1.c1p")});
  CHECK(ok.code == 0);
  CHECK(ok.out == "VALID\n");

  auto broken = temp_model("broken", "c1pvass v1\nstate s0 initial\nstate f final\ntrans s0 g add=1 stack=none\n");
  auto v = cli({"validate", broken});
  CHECK(v.code == 2);
  CHECK(v.out.starts_with("INVALID\n"));
  CHECK(v.out.find("4") != std::string::npos);
  auto c = cli({"check", "cover", "-k", "1", broken});
  CHECK(c.code == 2);
  CHECK(c.err.find("line 4") != std::string::npos);

  CHECK(cli({"check", "cover", fixture("single.c1p")}).code == 2);
  CHECK(cli({"check", "cover", "-k", "-1", fixture("single.c1p")}).code == 2);
  CHECK(cli({"check", "cover", "-k", "1/2", fixture("example-4.2.c1p")}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"check", "cover", "-k", "1", "/nonexistent/model.c1p"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("resource exhaustion") {
  auto r = cli({"check", "cover", "-k", "1", fixture("example-4.2.c1p"), "--node-budget", "0"});
  CHECK(r.code == 3);
  CHECK(r.out == "RESOURCE-EXCEEDED\n");
}
