#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <random>

#include "polarkit/error.hpp"
#include "polarkit/hemisystems.hpp"
#include "polarkit/parallel.hpp"

using namespace polarkit;

namespace {

FieldTable gf(unsigned e) { return FieldTable::make(2, e); }

// Independent orbit: repeatedly apply every generator (no inverses) until
// nothing new appears. For a finite group this reaches the same set.
PointSet naive_orbit(const PolarSpace& p, const std::vector<LiftedIsometry>& gens, PointIndex seed) {
  std::vector<std::uint8_t> in(p.ps().num_points(), 0);
  in[seed] = 1;
  std::vector<PointIndex> cur{seed};
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<PointIndex> add;
    for (PointIndex x : cur)
      for (const auto& g : gens) {
        const PointIndex y = apply_point(p.ps(), g.m, x);
        if (!in[y]) in[y] = 1, add.push_back(y), grew = true;
      }
    cur.insert(cur.end(), add.begin(), add.end());
  }
  return PointSet::from(cur);
}

// Brute-force count of generators meeting R in c points, straight from the
// list of points on each generator.
std::map<int, std::size_t> count_profile(const PolarSpace& p, const GeneratorList& g, const PointSet& r) {
  std::map<int, std::size_t> prof;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.in_sigma[i]) continue;
    int c = 0;
    for (PointIndex x : subspace_points(p.ps(), g.gens[i])) c += r.contains(x);
    ++prof[c];
  }
  return prof;
}

// Plain one-point-per-secant DFS with counter pruning only, variables in
// index order. Returns the number of solutions.
std::uint64_t plain_search(const PolarSpace& p, const GeneratorList& g, int m) {
  const auto sec = nucleus_secants(p);
  const int nv = static_cast<int>(sec.pairs.size());
  std::vector<std::vector<std::pair<int, int>>> occ(nv);  // var -> (generator, side)
  std::vector<int> chosen, undec;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.in_sigma[i]) continue;
    const int k = static_cast<int>(chosen.size());
    int cnt = 0;
    for (PointIndex x : subspace_points(p.ps(), g.gens[i])) {
      if (p.on_sigma(x)) continue;
      const auto v = sec.line_of[x];
      occ[v].push_back({k, sec.pairs[v][0] == x ? 0 : 1});
      ++cnt;
    }
    chosen.push_back(0);
    undec.push_back(cnt);
  }
  std::uint64_t sols = 0;
  std::function<void(int)> dfs = [&](int v) {
    if (v == nv) {
      ++sols;
      return;
    }
    for (int s = 0; s < 2; ++s) {
      bool ok = true;
      for (auto [k, side] : occ[v]) {
        --undec[k];
        if (side == s) ++chosen[k];
        if (chosen[k] > m || chosen[k] + undec[k] < m) ok = false;
      }
      if (ok) dfs(v + 1);
      for (auto [k, side] : occ[v]) {
        ++undec[k];
        if (side == s) --chosen[k];
      }
    }
  };
  dfs(0);
  return sols;
}

}  // namespace

TEST_CASE("construction over GF(2), n = 1") {
  const auto r = construct_relative_hemisystem(1, gf(1));
  CHECK(r.o1.size() == 6);
  CHECK(r.o2.size() == 6);
  CHECK(r.partition_ok);
  CHECK(r.partner_orbit_ok);
  CHECK(r.m_expected == 1);
  CHECK(r.report_o1.m == 1);
  CHECK(r.report_o1.generators_checked == 30);
  CHECK(r.pass);
  CHECK(naive_orbit(*r.space, r.gens, r.seed) == r.o1);
  CHECK_FALSE(r.o1.contains(r.space->tau_point(r.seed)));
}

TEST_CASE("construction over GF(2), n = 2") {
  const auto r = construct_relative_hemisystem(2, gf(1));
  const auto& p = *r.space;
  CHECK(p.off_points().size() == 240);
  CHECK(r.o1.size() == 120);
  CHECK(r.partition_ok);
  CHECK(r.partner_orbit_ok);
  CHECK(r.m_expected == 4);
  CHECK_FALSE(r.generators.sampled);
  CHECK(r.report_o1.generators_checked == 22950);
  CHECK(r.report_o1.m == 4);
  CHECK(r.report_o2.m == 4);
  CHECK(r.pass);
  CHECK(naive_orbit(p, r.gens, r.seed) == r.o1);

  const auto prof = count_profile(p, r.generators, r.o1);
  CHECK(prof.size() == 1);
  CHECK(prof.begin()->first == 4);

  SUBCASE("other seeds give O1 or O2") {
    std::mt19937_64 rng(5);
    const auto& off = p.off_points().indices();
    for (int t = 0; t < 5; ++t) {
      const PointIndex s = off[rng() % off.size()];
      const auto o = orbit_closure(p, r.gens, s);
      CHECK((o == r.o1 || o == r.o2));
      CHECK(o.contains(s));
    }
  }

  SUBCASE("line census") {
    const auto c = line_census(p, r.o1, r.o2);
    CHECK(c.ok);
    CHECK(c.total == 14280);
    CHECK(c.l1 == 3060);
    CHECK(c.l2 == 3060);
    CHECK(c.l3 == 8160);
  }

  SUBCASE("a damaged orbit fails") {
    auto pts = r.o1.indices();
    pts.pop_back();
    const auto rep = relative_movoid_check(p, r.generators, PointSet::from(pts));
    CHECK_FALSE(rep.pass);
  }

  SUBCASE("seeded search reproduces O1") {
    SearchOptions opt;
    opt.seed = r.o1;
    const auto s = search_hemisystems(p, r.generators, opt);
    CHECK(s.m == 4);
    CHECK(s.exhausted);
    REQUIRE(s.found.size() == 1);
    CHECK(s.found[0] == r.o1);
    CHECK(s.verified);
  }

  SUBCASE("spread sections") {
    const auto spread = spread_in_frame(*r.ctx, spread_build(*r.ctx));
    const auto& off = p.off_points().indices();
    const auto c0 = spread_ovoid_check(*r.ctx, p, spread, off[0]);
    CHECK(c0.pass);
    CHECK(c0.m_expected == 3);
    CHECK(c0.generators == 765);
    std::mt19937_64 rng(11);
    for (int t = 0; t < 10; ++t) CHECK(spread_ovoid_check(*r.ctx, p, spread, off[rng() % off.size()]).pass);
  }
}

TEST_CASE("construction over GF(4), n = 1") {
  const auto r = construct_relative_hemisystem(1, gf(2));
  CHECK(r.o1.size() == 120);
  CHECK(r.partition_ok);
  CHECK(r.m_expected == 2);
  CHECK(r.report_o1.generators_checked == 1020);
  CHECK(r.report_o1.m == 2);
  CHECK(r.pass);
  const auto c = line_census(*r.space, r.o1, r.o2);
  CHECK(c.ok);
  CHECK(c.l3 > 0);
}

TEST_CASE("orbit closure stays on the space") {
  const BlowupContext ctx(1, gf(1));
  const auto& fr = ctx.frame_space();
  const auto p = PolarSpace::quadric(fr, ctx.frame_form(), coordinate_hyperplane(fr, 5));
  // A generator outside the isometry group drives the orbit off the quadric.
  Matrix bad = Matrix::identity(6);
  bad(1, 0) = 1, bad(2, 0) = 1;
  bool threw = false;
  try {
    orbit_closure(fr, {bad}, p.off_points().indices().front(), &p);
  } catch (const Error& e) {
    threw = e.kind() == ErrorKind::internal;
  }
  CHECK(threw);
}

TEST_CASE("search on Q-(7,2)") {
  const auto p = frame_space(gf(1), 3, 1);
  const auto g = enumerate_generators(p);
  const auto s = search_hemisystems(p, g);
  CHECK(s.variables == 28);
  CHECK(s.generators == 630);
  CHECK(s.m == 2);
  CHECK(s.exhausted);
  CHECK(s.solutions == 0);
  CHECK(s.found.empty());
  CHECK(s.nodes_visited > 0);
  CHECK(plain_search(p, g, 2) == 0);

  SUBCASE("budget") {
    SearchOptions opt;
    opt.budget = 5;
    const auto b = search_hemisystems(p, g, opt);
    CHECK_FALSE(b.exhausted);
  }
}

TEST_CASE("search and scan on Q-(5,2)") {
  const auto p = frame_space(gf(1), 2, 1);
  const auto g = enumerate_generators(p);
  const auto s = search_hemisystems(p, g);
  CHECK(s.exhausted);
  CHECK(s.m == 1);
  CHECK(s.verified);
  CHECK(s.solutions == 2);
  CHECK(plain_search(p, g, 1) == 2);

  const auto sc = exhaustive_movoid_scan(p, g);
  CHECK(sc.subsets == 4096);
  CHECK(sc.census.at(0) == 1);
  CHECK(sc.census.at(2) == 1);
  CHECK(sc.proper_m_ok);
  CHECK(sc.proper_disjoint_ok);
  CHECK(sc.census.size() == 3);
  // Every proper example is found by the secant search and vice versa.
  CHECK(sc.census.at(1) == s.solutions);

  // Oracle: direct subset enumeration with point lists.
  const auto& off = p.off_points().indices();
  std::uint64_t ones = 0;
  for (std::uint32_t mask = 0; mask < 4096; ++mask) {
    std::vector<PointIndex> r;
    for (int i = 0; i < 12; ++i)
      if (mask >> i & 1) r.push_back(off[i]);
    const auto prof = count_profile(p, g, PointSet::from(r));
    if (prof.size() == 1 && prof.begin()->first == 1) ++ones;
  }
  CHECK(ones == sc.census.at(1));
}

TEST_CASE("search is independent of the thread count") {
  const auto p = frame_space(gf(1), 3, 1);
  const auto g = enumerate_generators(p);
  SearchOptions opt;
  opt.budget = 200;
  set_threads(1);
  const auto a = search_hemisystems(p, g, opt);
  set_threads(4);
  const auto b = search_hemisystems(p, g, opt);
  set_threads(0);
  CHECK(a.nodes_visited == b.nodes_visited);
  CHECK(a.exhausted == b.exhausted);
  CHECK(a.solutions == b.solutions);
}
