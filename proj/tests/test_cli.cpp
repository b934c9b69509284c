#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "polarkit/certificate.hpp"
#include "polarkit/cli.hpp"

using namespace polarkit;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "polarkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path tmpdir() {
  static const fs::path d = [] {
    auto p = fs::temp_directory_path() / ("polarkit_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return d;
}

std::string path(const std::string& name) { return (tmpdir() / name).string(); }

Json read(const std::string& p) {
  std::ifstream in(p);
  return Json::parse(in);
}

void write(const std::string& p, const Json& j) { std::ofstream(p) << j.dump(); }

std::string without_time(const std::string& p) {
  auto j = read(p);
  j["provenance"].erase("wall_time_ms");
  return j.dump();
}

}  // namespace

TEST_CASE("construct, verify and tamper") {
  const auto cert = path("c22.json");
  const auto r = run({"construct", "--q", "2", "--n", "2", "--out", cert});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("|O1| = 120") != std::string::npos);
  const auto j = read(cert);
  CHECK(j["schema"] == "polarcert/1");
  CHECK(j["claim"] == "relative_hemisystem");
  CHECK(j["data"]["m"] == 4);
  CHECK(j["data"]["o1"].size() == 120);
  CHECK(j["data"]["generators_checked"] == 22950);
  CHECK(j["data"]["sampled"] == false);
  CHECK_FALSE(j["provenance"]["parameters"].contains("threads"));

  CHECK(run({"verify", "--cert", cert}).code == kExitOk);

  SUBCASE("one point moved") {
    auto t = j;
    // Replace an O1 point by an off-Sigma quadric point of O2.
    auto& p = t["data"]["o1"][5];
    const auto ps = ProjectiveSpace(9, FieldTable::make(2, 1));
    const auto sp = space_from_frame(t["frame"], FieldTable::make(2, 1));
    const auto o1 = points_from_json(ps, j["data"]["o1"]);
    for (PointIndex x : sp.off_points())
      if (!o1.contains(x)) {
        p = ps.decode(ps.point(x));
        break;
      }
    write(path("tampered.json"), t);
    const auto v = run({"verify", "--cert", path("tampered.json")});
    CHECK(v.code == kExitFailed);
    CHECK(v.out.find("witness") != std::string::npos);
  }

  SUBCASE("generator entry flipped") {
    auto t = j;
    auto& e = t["data"]["generators"][0][1][2];
    e = 1 - e.get<int>();
    write(path("tampered_gen.json"), t);
    CHECK(run({"verify", "--cert", path("tampered_gen.json")}).code == kExitFailed);
  }

  SUBCASE("m misreported") {
    auto t = j;
    t["data"]["m"] = 3;
    write(path("tampered_m.json"), t);
    CHECK(run({"verify", "--cert", path("tampered_m.json")}).code == kExitFailed);
  }

  SUBCASE("audit and srg from the certificate") {
    const auto a = run({"audit", "--q", "2", "--rank", "4", "--cert", cert, "--out", path("audit.json")});
    CHECK(a.code == kExitOk);
    CHECK(a.out.find("part d: expected 52, observed 52") != std::string::npos);
    CHECK(run({"verify", "--cert", path("audit.json")}).code == kExitOk);
    CHECK(run({"audit", "--q", "2", "--rank", "3", "--cert", cert}).code == kExitUsage);

    const auto s = run({"srg", "--from", cert, "--out", path("srg.json"), "--dimacs", path("g.dimacs")});
    CHECK(s.code == kExitOk);
    CHECK(s.out.find("(120, 51, 18, 24)") != std::string::npos);
    std::ifstream d(path("g.dimacs"));
    std::string head;
    std::getline(d, head);
    CHECK(head == "p edge 120 3060");
    CHECK(run({"verify", "--cert", path("srg.json")}).code == kExitOk);
  }
}

TEST_CASE("thread count does not change certificates") {
  CHECK(run({"--threads", "1", "construct", "--q", "2", "--n", "2", "--out", path("t1.json")}).code == kExitOk);
  CHECK(run({"--threads", "3", "construct", "--q", "2", "--n", "2", "--out", path("t3.json")}).code == kExitOk);
  CHECK(without_time(path("t1.json")) == without_time(path("t3.json")));

  CHECK(run({"--threads", "1", "search", "--space", "Qminus-7-2", "--prove-nonexistence", "--out", path("s1.json")})
            .code == kExitOk);
  CHECK(run({"--threads", "4", "search", "--space", "Qminus-7-2", "--prove-nonexistence", "--out", path("s4.json")})
            .code == kExitOk);
  CHECK(without_time(path("s1.json")) == without_time(path("s4.json")));

  CHECK(run({"--threads", "1", "ovoid", "--q", "4", "--n", "2", "--variant", "0,0,1,1", "--out", path("o1.json")})
            .code == kExitOk);
  CHECK(run({"--threads", "2", "ovoid", "--q", "4", "--n", "2", "--variant", "0,0,1,1", "--out", path("o2.json")})
            .code == kExitOk);
  CHECK(without_time(path("o1.json")) == without_time(path("o2.json")));
}

TEST_CASE("search, scan, demo and census") {
  const auto s = run({"search", "--space", "Qminus-7-2", "--prove-nonexistence", "--out", path("ne.json")});
  CHECK(s.code == kExitOk);
  const auto j = read(path("ne.json"));
  CHECK(j["claim"] == "nonexistence");
  CHECK(j["data"]["solutions"] == 0);
  CHECK(j["data"]["exhausted"] == true);
  CHECK(j["data"]["nodes_visited"].get<int>() > 0);
  CHECK(run({"verify", "--cert", path("ne.json")}).code == kExitOk);

  // A nonexistence claim where examples exist fails.
  CHECK(run({"search", "--space", "Qminus-5-2", "--prove-nonexistence"}).code == kExitFailed);
  CHECK(run({"search", "--space", "Qminus-5-2", "--out", path("found.json")}).code == kExitOk);
  CHECK(read(path("found.json"))["data"]["found"].size() == 2);
  CHECK(run({"verify", "--cert", path("found.json")}).code == kExitOk);

  const auto sc = run({"scan", "--space", "Qminus-5-2", "--out", path("scan.json")});
  CHECK(sc.code == kExitOk);
  CHECK(sc.out.find("m = 1: 2") != std::string::npos);
  CHECK(run({"verify", "--cert", path("scan.json")}).code == kExitOk);

  for (const char* q : {"2", "4"}) {
    CHECK(run({"demo", "hyperbolic", "--q", q, "--out", path("demo.json")}).code == kExitOk);
    CHECK(run({"verify", "--cert", path("demo.json")}).code == kExitOk);
  }

  const auto c = run({"census", "--space", "Qminus-9-2"});
  CHECK(c.code == kExitOk);
  CHECK(c.out.find("lines off Sigma: 14280") != std::string::npos);
  CHECK(run({"census", "--space", "W-5-4"}).code == kExitOk);
  CHECK(run({"census", "--space", "Qplus-5-2"}).code == kExitOk);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({"construct", "--q", "3", "--n", "1"}).code == kExitUsage);
  CHECK(run({"construct", "--q", "16", "--n", "2"}).code == kExitResource);
  CHECK(run({"search", "--space", "Qminus-9-2", "--budget", "10"}).code == kExitResource);
  CHECK(run({"search", "--space", "Qminus-9-2"}).code == kExitResource);
  CHECK(run({"scan", "--space", "Qminus-7-2"}).code == kExitResource);
  CHECK(run({"scan", "--space", "Q-7-2"}).code == kExitUsage);
  CHECK(run({"ovoid", "--q", "2", "--n", "2", "--variant", "0,0,1,0"}).code == kExitUsage);
  CHECK(run({"ovoid", "--q", "4", "--n", "2", "--variant", "1,0,1,0"}).code == kExitUsage);
  CHECK(run({"ovoid", "--q", "4", "--n", "2", "--variant", "0,2,1,0"}).code == kExitUsage);
  CHECK(run({"verify", "--cert", path("missing.json")}).code == kExitUsage);
  std::ofstream(path("junk.json")) << "{\"schema\": \"other\"}";
  CHECK(run({"verify", "--cert", path("junk.json")}).code == kExitUsage);
}
