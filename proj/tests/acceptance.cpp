// Acceptance run: one PASS/FAIL line per criterion. Exits nonzero when a
// criterion fails, except for failures listed as known-unattainable (these
// still print FAIL with the reason).

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "polarkit/certificate.hpp"
#include "polarkit/cli.hpp"
#include "polarkit/error.hpp"

using namespace polarkit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  bool unattainable = false;  // fails for a documented mathematical reason
};

fs::path workdir() {
  static const fs::path d = [] {
    auto p = fs::temp_directory_path() / ("polarkit_accept_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return d;
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "polarkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

Json read(const fs::path& p) {
  std::ifstream in(p);
  return Json::parse(in);
}

FieldTable gf(unsigned e) { return FieldTable::make(2, e); }

std::string str(std::uint64_t v) { return std::to_string(v); }

Outcome c1() {
  const auto file = (workdir() / "c1.json").string();
  const int code = cli({"construct", "--q", "2", "--n", "2", "--out", file});
  const auto j = read(file);
  const auto& d = j["data"];
  const auto r = construct_relative_hemisystem(2, gf(1));
  const bool ok = code == 0 && d["o1_size"] == 120 && d["o2_size"] == 120 && d["m"] == 4 &&
                  d["generators_checked"] == 22950 && d["sampled"] == false && r.partition_ok &&
                  r.o1.size() == 120 && r.o2.size() == 120 && r.report_o1.generators_checked == 22950 &&
                  r.report_o1.m == 4 && r.report_o1.pass && r.report_o2.m == 4 &&
                  cli({"verify", "--cert", file}) == 0;
  return {ok, "|O1| = |O2| = " + str(r.o1.size()) + ", tau(O1) = O2, m = " + std::to_string(r.report_o1.m.value_or(-1)) +
                  " over " + str(r.report_o1.generators_checked) + " generators"};
}

Outcome c2() {
  const auto file = (workdir() / "c2.json").string();
  const int code = cli({"construct", "--q", "4", "--n", "1", "--out", file});
  const auto d = read(file)["data"];
  const bool ok = code == 0 && d["o1_size"] == 120 && d["m"] == 2 && d["generators_checked"] == 1020 &&
                  d["sampled"] == false;
  return {ok, "|O1| = " + d["o1_size"].dump() + ", m = " + d["m"].dump() + " over " +
                  d["generators_checked"].dump() + " generators of Q-(5,4)"};
}

Outcome c3() {
  const auto file = (workdir() / "c3.json").string();
  const int code = cli({"search", "--space", "Qminus-7-2", "--prove-nonexistence", "--out", file});
  const auto j = read(file);
  const auto& d = j["data"];
  const bool ok = code == 0 && j["claim"] == "nonexistence" && d["variables"] == 28 && d["exhausted"] == true &&
                  d["solutions"] == 0 && d["found"].empty() && d["nodes_visited"].get<std::uint64_t>() > 0 &&
                  cli({"verify", "--cert", file}) == 0;
  return {ok, "28 secant lines, exhausted, 0 relative hemisystems, " + d["nodes_visited"].dump() + " nodes"};
}

Outcome c4() {
  const auto file = (workdir() / "c4.json").string();
  const int code = cli({"scan", "--space", "Qminus-5-2", "--out", file});
  const auto d = read(file)["data"];
  const auto p = frame_space(gf(1), 2, 1);
  const auto s = exhaustive_movoid_scan(p, enumerate_generators(p));
  bool proper_only_m1 = true;
  for (auto [m, n] : s.census)
    if (m != 0 && m != 2) proper_only_m1 = proper_only_m1 && m == 1;
  const bool ok = code == 0 && s.subsets == 4096 && proper_only_m1 && s.proper_m_ok && s.proper_disjoint_ok &&
                  s.census.count(1) && d["subsets"] == 4096;
  return {ok, "4096 subsets; census " + d["census"].dump() + "; proper examples have m = 1 and meet R^tau trivially"};
}

Outcome c5() {
  const auto r = construct_relative_hemisystem(2, gf(1));
  const auto a = lemma_pre_audit(*r.space, r.generators, r.o1, 4);
  const std::array<long, 6> want{68, 60, 64, 52, 68, 56};
  std::string obs;
  bool all = true, rest = a.m_confirmed;
  for (int i = 0; i < 6; ++i) {
    obs += std::string(i ? ", " : "") + (a.observed[i] ? std::to_string(*a.observed[i]) : "none");
    const bool hit = a.observed[i] && *a.observed[i] == want[i] && a.expected[i] == want[i];
    all = all && hit;
    if (i > 0) rest = rest && hit;
  }
  Outcome o{all, "observed (" + obs + ")"};
  if (!all && rest && a.cases[0] == 0) {
    o.unattainable = true;
    o.detail += "; part a is unattainable: over GF(2) every nonsingular X off Sigma spans an anisotropic line "
                "with N, so X^perp cap Sigma is never elliptic (0 of " + str(a.cases[1]) +
                " hyperplanes); parts b-f match exactly";
  }
  return o;
}

Outcome c6() {
  const auto r = construct_relative_hemisystem(2, gf(1));
  const auto c = line_census(*r.space, r.o1, r.o2);
  const bool ok = c.ok && c.total == 14280 && c.l1 == 3060 && c.l2 == 3060 && c.l3 == 8160;
  return {ok, "(" + str(c.l1) + ", " + str(c.l2) + ", " + str(c.l3) + ") of " + str(c.total) + " lines, " +
                  (c.unexpected.empty() ? "no other profile" : "unexpected profiles present")};
}

Outcome c7() {
  const auto base = construct_relative_hemisystem(1, gf(2));
  const auto w = PolarSpace::symplectic(base.space->ps(), base.space->bilinear());
  const auto wg = enumerate_generators(w);
  bool ok = wg.size() == 5525;
  std::string spectrum_text;
  for (int si = 0; si < 2; ++si)
    for (int sj = 0; sj < 2; ++sj) {
      const auto x = build_mixed_ovoid(base, {0, si == 1, 1, sj == 1});
      const auto rep = verify_symplectic_ovoid(x, wg);
      const auto t = two_character_check(w.ps(), x.x);
      std::size_t total = 0;
      for (auto [k, v] : t.spectrum) total += v;
      ok = ok && x.x.size() == 325 && rep.pass && rep.m == 5 && rep.generators_checked == 5525 && t.pass &&
           t.h1 == 85 && t.h2 == 69 && total == 1365;
      if (spectrum_text.empty())
        for (auto [k, v] : t.spectrum) spectrum_text += (spectrum_text.empty() ? "" : ", ") + str(k) + " x" + str(v);
    }
  return {ok, "4 variants: |X| = 325, m = 5 on all 5525 generators of W(5,4), spectrum {" + spectrum_text + "}"};
}

Outcome c8() {
  const auto r = construct_relative_hemisystem(2, gf(1));
  const auto g = srg_build_verify(*r.space, r.o1);
  const bool ok = g.pass && g.v == 120 && g.k == 51 && g.lambda == 18 && g.mu == 24 &&
                  *g.k * (*g.k - *g.lambda - 1) == 1632 && (*g.v - *g.k - 1) * *g.mu == 1632;
  return {ok, "(v,k,lambda,mu) = (" + str(g.v.value_or(0)) + ", " + str(g.k.value_or(0)) + ", " +
                  str(g.lambda.value_or(0)) + ", " + str(g.mu.value_or(0)) + "), k(k-lambda-1) = (v-k-1)mu = 1632"};
}

Outcome c9() {
  bool ok = true;
  std::string d;
  for (unsigned e : {1u, 2u}) {
    const auto h = hyperbolic_demo(gf(e));
    const int q = 1 << e;
    bool each = h.pass && static_cast<int>(h.sets.size()) == q;
    for (const auto& s : h.sets) each = each && s.report.m == q;
    ok = ok && each;
    d += (d.empty() ? "" : "; ") + std::string("q=") + std::to_string(q) + ": " + str(h.sets.size()) +
         " sets, m = q on all " + str(h.planes) + " planes";
  }
  return {ok, d};
}

Outcome c10() {
  std::string d;
  bool ok = true;
  auto part = [&](const std::string& name, bool good) {
    ok = ok && good;
    d += (d.empty() ? "" : ", ") + name + (good ? "" : " FAILED");
  };

  bool fields = true;
  for (unsigned e = 1; e <= 4; ++e) {
    const auto f = gf(e);
    const Elem q = f.order();
    for (Elem a = 0; a < q; ++a) {
      if (a && f.mul(a, f.inv(a)) != 1) fields = false;
      if (f.mul(f.sqrt(a), f.sqrt(a)) != a) fields = false;
      for (Elem b = 0; b < q; ++b) {
        if (f.add(a, b) != f.add(b, a) || f.mul(a, b) != f.mul(b, a)) fields = false;
        for (Elem c = 0; c < q; ++c) {
          if (f.mul(f.mul(a, b), c) != f.mul(a, f.mul(b, c))) fields = false;
          if (f.mul(a, f.add(b, c)) != f.add(f.mul(a, b), f.mul(a, c))) fields = false;
          if (f.add(f.add(a, b), c) != f.add(a, f.add(b, c))) fields = false;
        }
      }
    }
  }
  part("field axioms q <= 16", fields);

  bool spreads = true;
  for (auto [q, n] : {std::pair{1u, 1}, std::pair{1u, 2}, std::pair{2u, 1}}) {
    const BlowupContext ctx(n, gf(q));
    const auto s = spread_build(ctx);
    std::vector<int> cover(ctx.red_space().num_points(), 0);
    for (const auto& l : s)
      for (PointIndex x : subspace_points(ctx.red_space(), l)) ++cover[x];
    for (int c : cover) spreads = spreads && c == 1;
    spreads = spreads && s.size() == ctx.ext_space().num_points();
  }
  part("spread disjoint cover", spreads);

  const BlowupContext ctx(2, gf(1));
  const auto& fr = ctx.frame_space();
  const auto p = PolarSpace::quadric(fr, ctx.frame_form(), coordinate_hyperplane(fr, 9));
  const auto gens = lifted_generators(ctx);
  bool preserve = true, commute = true;
  for (const auto& g : gens) {
    for (Code v = 1; v <= fr.num_vectors(); ++v)
      if (ctx.frame_form().eval(fr, apply(fr, g.m, v)) != ctx.frame_form().eval(fr, v)) preserve = false;
    for (PointIndex x : p.off_points())
      if (apply_point(fr, g.m, p.tau_point(x)) != p.tau_point(apply_point(fr, g.m, x))) commute = false;
  }
  part("lifted generators preserve F on all vectors", preserve);
  part("tau commutes with lifted generators", commute);

  bool dperp = true;
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    std::vector<Code> vs;
    const int k = 1 + static_cast<int>(rng() % 9);
    for (int i = 0; i < k; ++i) vs.push_back(1 + rng() % fr.num_vectors());
    const auto s = Subspace::from_vectors(fr, vs);
    dperp = dperp && perp_of(fr, perp_of(fr, s, p.bilinear()), p.bilinear()) == s;
  }
  part("double perp", dperp);

  bool counts = true;
  const auto f4 = gf(2);
  const auto w54 = frame_space(f4, 2, find_delta(f4));
  const auto w92 = frame_space(gf(1), 4, 1);
  const std::vector<std::pair<PolarSpace, std::uint64_t>> spaces{
      {frame_space(gf(1), 2, 1), 45},
      {frame_space(gf(1), 3, 1), 765},
      {frame_space(gf(1), 4, 1), 25245},
      {frame_space(f4, 2, find_delta(f4)), 1105},
      {PolarSpace::symplectic(w54.ps(), w54.bilinear()), 5525},
      {PolarSpace::symplectic(w92.ps(), w92.bilinear()), 75735}};
  for (const auto& [sp, want] : spaces)
    counts = counts && expected_generator_count(sp) == want && enumerate_generators(sp).size() == want;
  part("generator counts of six spaces", counts);
  return {ok, d};
}

Outcome c11() {
  const auto file = (workdir() / "c11.json").string();
  const int code = cli({"construct", "--q", "4", "--n", "2", "--out", file});
  const auto d = read(file)["data"];
  bool refused = false;
  try {
    enumerate_generators(space_by_name("Qminus-9-4"));
  } catch (const Error& e) {
    refused = e.kind() == ErrorKind::resource;
  }
  const bool ok = code == 0 && d["o1_size"] == 32640 && d["o2_size"] == 32640 && d["sampled"] == true &&
                  d["sample_count"] == 100000 && d["m"] == 32 && refused;
  return {ok, "Q-(9,4): orbits of size 32640; m = 32 on a flagged sample of 10^5 generators; full list of " +
                  str(expected_off_sigma_count(space_by_name("Qminus-9-4"))) +
                  " generators refused as over the cap; automorphism group of the graph not computed"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"construction q=2 n=2", c1},   {"construction q=4 n=1", c2}, {"nonexistence on Q-(7,2)", c3},
      {"scan of Q-(5,2)", c4},        {"intersection audit", c5},   {"line census", c6},
      {"mixed ovoids of W(5,4)", c7}, {"strongly regular graph", c8}, {"hyperbolic pencil sets", c9},
      {"property suites", c10},       {"scale disclosure", c11}};
  int hard_failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.1fs", s);
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL")
              << (o.unattainable ? " (unattainable)" : "") << " [" << criteria[i].first << ", " << secs << "] "
              << o.detail << std::endl;
    if (!o.pass && !o.unattainable) ++hard_failures;
  }
  fs::remove_all(workdir());
  return hard_failures == 0 ? 0 : 1;
}
