#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <map>
#include <set>

#include "polarkit/error.hpp"
#include "polarkit/polarspace.hpp"

using namespace polarkit;

namespace {

const FieldTable& gf2() {
  static const FieldTable f = FieldTable::make(2, 1);
  return f;
}
const FieldTable& gf4() {
  static const FieldTable f = FieldTable::make(2, 2);
  return f;
}

// Totally singular lines by pair enumeration, independent of the DFS.
std::size_t brute_lines(const PolarSpace& p) {
  const auto& ps = p.ps();
  std::set<Subspace> lines;
  const auto& pts = p.points().indices();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (!p.orth(pts[i], pts[j])) continue;
      const std::vector<Code> v{ps.point(pts[i]), ps.point(pts[j])};
      lines.insert(Subspace::from_vectors(ps, v));
    }
  return lines.size();
}

void check_generators(const PolarSpace& p, const GeneratorList& g) {
  const auto& ps = p.ps();
  for (const auto& s : g.gens) {
    REQUIRE(s.rank() == p.rank());
    for (Code a : s.basis()) {
      REQUIRE(p.singular(a));
      for (Code b : s.basis()) REQUIRE(p.bilinear().eval(ps, a, b) == 0);
    }
  }
}

}  // namespace

TEST_CASE("quadric points") {
  const auto q52 = frame_space(gf2(), 2, 1);
  CHECK(q52.points().size() == 27);  // (q^3+1)(q+1)
  CHECK(q52.off_points().size() == 12);
  CHECK(q52.section_points().size() == 15);
  CHECK(q52.ps().decode(q52.nucleus()) == std::vector<Elem>{1, 0, 0, 0, 0, 0});
  const auto q92 = frame_space(gf2(), 4, 1);
  CHECK(quadric_points(q92).size() == 495);
  CHECK(q92.off_points().size() == 240);
  for (PointIndex i : q92.points()) CHECK(q92.form().eval(q92.ps(), q92.ps().point(i)) == 0);
  // N = Sigma^perp is the nucleus of the section.
  const auto sec = q92.form().restrict_to(q92.ps(), q92.sigma());
  CHECK(classify_quadric(sec).family == Family::parabolic);
}

TEST_CASE("generator counts and closed formulas") {
  struct Case {
    const char* name;
    PolarSpace p;
    std::uint64_t total;
    std::uint64_t off;
  };
  std::vector<Case> cases{
      {"Qminus-5-2", frame_space(gf2(), 2, 1), 45, 30},
      {"Qminus-7-2", frame_space(gf2(), 3, 1), 765, 630},
      {"Qminus-9-2", frame_space(gf2(), 4, 1), 25245, 22950},
      {"Qminus-5-4", frame_space(gf4(), 2, 2), 1105, 1020},
  };
  for (auto& c : cases) {
    CAPTURE(c.name);
    const auto g = enumerate_generators(c.p);
    CHECK(g.size() == c.total);
    CHECK(g.count_off_sigma() == c.off);
    CHECK(expected_generator_count(c.p) == c.total);
    CHECK(expected_off_sigma_count(c.p) == c.off);
    CHECK(std::is_sorted(g.gens.begin(), g.gens.end()));
    check_generators(c.p, g);
    // Generators off Sigma meet it in a subspace of vector rank n - 1.
    for (std::size_t i = 0; i < g.size(); ++i)
      if (!g.in_sigma[i])
        REQUIRE(meet(c.p.ps(), g.gens[i], c.p.sigma()).rank() == c.p.rank() - 1);
  }
  CHECK(brute_lines(cases[0].p) == 45);

  const auto w54 = PolarSpace::symplectic(ProjectiveSpace(5, gf4()), frame_form(gf4(), 2, 2).polar());
  const auto gw54 = enumerate_generators(w54);
  CHECK(gw54.size() == 5525);
  check_generators(w54, gw54);
  const auto w92 = PolarSpace::symplectic(ProjectiveSpace(9, gf2()), frame_form(gf2(), 4, 1).polar());
  CHECK(enumerate_generators(w92).size() == 75735);

  const auto w32 = PolarSpace::symplectic(ProjectiveSpace(3, gf2()), frame_form(gf2(), 1, 1).polar());
  CHECK(brute_lines(w32) == enumerate_generators(w32).size());

  const auto q94 = frame_space(gf4(), 4, 2);
  CHECK_THROWS_AS((void)enumerate_generators(q94), Error);
}

TEST_CASE("nucleus secants and tau") {
  const auto q52 = frame_space(gf2(), 2, 1);
  const auto s52 = nucleus_secants(q52);
  CHECK(s52.lines.size() == 6);

  const auto q92 = frame_space(gf2(), 4, 1);
  const auto& ps = q92.ps();
  const auto s = nucleus_secants(q92);
  CHECK(s.lines.size() == 120);
  std::set<PointIndex> covered;
  for (const auto& pr : s.pairs) {
    covered.insert(pr[0]);
    covered.insert(pr[1]);
  }
  CHECK(covered.size() == 240);
  // Oracle: the second quadric point of the line PN, by scanning the line.
  const Code n = q92.nucleus();
  for (PointIndex p : q92.off_points()) {
    const PointIndex t = q92.tau_point(p);
    CHECK(t != p);
    CHECK(q92.tau_point(t) == p);
    std::vector<PointIndex> others;
    for (Elem c = 0; c < 2; ++c) {
      const Code v = ps.add(ps.point(p), ps.scale(c, n));
      if (q92.form().eval(ps, v) == 0 && ps.index_of(v) != p) others.push_back(ps.index_of(v));
    }
    REQUIRE(others.size() == 1);
    CHECK(others[0] == t);
  }
  for (PointIndex p : q92.section_points()) CHECK(q92.tau_point(p) == p);
  // Frame tau is x0 -> x0 + z.
  Matrix expect = Matrix::identity(10);
  expect(0, 9) = 1;
  CHECK(q92.tau() == expect);
}

TEST_CASE("hyperplane sections of Q-(9,2)") {
  const auto q92 = frame_space(gf2(), 4, 1);
  const auto& ps = q92.ps();
  const auto& b = q92.bilinear();
  std::size_t tangent = 0, nontangent = 0;
  std::size_t types[3] = {0, 0, 0};
  std::set<Subspace> elliptic_sections;
  for (PointIndex x = 0; x < ps.num_points(); ++x) {
    const std::vector<Code> xs{ps.point(x)};
    const Subspace h = perp_of(ps, Subspace::from_vectors(ps, xs), b);
    if (h == q92.sigma()) {
      ++nontangent;
      continue;
    }
    const auto info = section_classify(q92, h);
    REQUIRE(info.sigma_section.has_value());
    if (info.sigma_section->family == Family::elliptic)
      elliptic_sections.insert(meet(ps, h, q92.sigma()));
    if (info.tangent) {
      ++tangent;
      CHECK(info.hyperplane_section.family == Family::cone);
      CHECK(*info.tangent_point == x);
      if (!q92.on_sigma(x)) {
        CHECK(info.sigma_section->family == Family::elliptic);
        std::size_t cnt = 0;
        for (PointIndex p : q92.section_points()) cnt += contains_point(ps, h, ps.point(p));
        CHECK(cnt == 119);
      }
    } else {
      ++nontangent;
      CHECK(info.hyperplane_section.family == Family::parabolic);
      const auto fam = info.sigma_section->family;
      ++types[fam == Family::elliptic ? 0 : fam == Family::hyperbolic ? 1 : 2];
      if (fam == Family::cone) {
        CHECK(info.vertex.rank() == 1);
        CHECK(q92.form().eval(ps, info.vertex.basis()[0]) == 0);
      }
    }
  }
  CHECK(tangent == 495);
  CHECK(nontangent == 528);
  // Over GF(2) the line XN of a nonsingular X never carries two quadric
  // points, so no nontangent section meets Sigma elliptically.
  CHECK(types[0] == 0);
  CHECK(types[1] > 0);
  CHECK(types[2] > 0);
  CHECK(elliptic_sections.size() == 120);
  CHECK_THROWS_AS((void)section_classify(q92, q92.sigma()), Error);
}

TEST_CASE("section types over GF(4)") {
  const auto q54 = frame_space(gf4(), 2, 2);
  const auto& ps = q54.ps();
  std::map<Family, std::size_t> types;
  for (PointIndex x = 0; x < ps.num_points(); ++x) {
    if (q54.on_space(x) || x == q54.nucleus_index()) continue;
    const std::vector<Code> xs{ps.point(x)};
    const auto info = section_classify(q54, perp_of(ps, Subspace::from_vectors(ps, xs), q54.bilinear()));
    CHECK(!info.tangent);
    ++types[info.sigma_section->family];
  }
  CHECK(types.size() == 3);
  for (const auto& [fam, cnt] : types) CHECK(cnt > 0);
}

TEST_CASE("relative m-ovoid check") {
  const auto q92 = frame_space(gf2(), 4, 1);
  const auto g = enumerate_generators(q92);
  const auto empty = relative_movoid_check(q92, g, PointSet{});
  CHECK(empty.pass);
  CHECK(empty.m == 0);
  const auto all = relative_movoid_check(q92, g, q92.off_points());
  CHECK(all.pass);
  CHECK(all.m == 8);
  CHECK(all.generators_checked == 22950);

  auto pts = q92.off_points().indices();
  pts.pop_back();
  const auto broken = relative_movoid_check(q92, g, PointSet::from(pts));
  CHECK_FALSE(broken.pass);
  CHECK(broken.violations.size() <= kMaxWitnesses);
  CHECK(!broken.violations.empty());

  CHECK_THROWS_AS((void)relative_movoid_check(q92, g, q92.section_points()), Error);
}

TEST_CASE("lemma audit on Q-(5,2)") {
  const auto p = frame_space(gf2(), 2, 1);
  const auto g = enumerate_generators(p);
  const auto sec = nucleus_secants(p);
  // Oracle: one point per secant line, checked by direct counting.
  int found = 0;
  for (unsigned mask = 0; mask < 64; ++mask) {
    std::vector<PointIndex> r;
    for (int i = 0; i < 6; ++i) r.push_back(sec.pairs[i][(mask >> i) & 1]);
    bool ok = true;
    for (std::size_t k = 0; k < g.size() && ok; ++k) {
      if (g.in_sigma[k]) continue;
      int c = 0;
      for (PointIndex x : subspace_points(p.ps(), g.gens[k])) c += std::count(r.begin(), r.end(), x);
      ok = c == 1;
    }
    if (!ok) continue;
    ++found;
    const auto rs = PointSet::from(r);
    const auto audit = lemma_pre_audit(p, g, rs, 1);
    CHECK(audit.pass);
    const std::array<long, 6> want{5, 3, 4, 1, 5, 2};
    CHECK(audit.cases[0] == 0);
    CHECK(!audit.observed[0]);
    for (int k = 1; k < 6; ++k) {
      CHECK(audit.observed[k] == want[k]);
      CHECK(audit.cases[k] > 0);
    }
  }
  CHECK(found > 0);

  const auto empty = lemma_pre_audit(p, g, PointSet{}, 0);
  CHECK(empty.pass);
  for (int k : {1, 2, 4, 5}) CHECK(empty.observed[k] == 0);
  CHECK(empty.cases[0] == 0);
  CHECK(empty.cases[3] == 0);

  std::vector<PointIndex> two{sec.pairs[0][0], sec.pairs[0][1]};
  CHECK_FALSE(lemma_pre_audit(p, g, PointSet::from(two), 1).pass);
}

TEST_CASE("sampled generators") {
  const auto q54 = frame_space(gf4(), 2, 2);
  const auto full = enumerate_generators(q54);
  const auto s = sample_generators(q54, 500, 7);
  CHECK(s.sampled);
  CHECK(s.size() == 500);
  CHECK(s.count_off_sigma() == 500);
  std::set<Subspace> all(full.gens.begin(), full.gens.end());
  for (const auto& g : s.gens) CHECK(all.count(g) == 1);
  const auto again = sample_generators(q54, 500, 7);
  CHECK(again.gens == s.gens);
}
