#include "polarkit/applications.hpp"

#include <bit>
#include <random>
#include <sstream>

#include <json.hpp>

#include "polarkit/error.hpp"
#include "polarkit/parallel.hpp"

namespace polarkit {

std::vector<Elem> elliptic_members(const QuadraticForm& qe) {
  std::vector<Elem> out;
  for (const auto& m : pencil_members(qe))
    if (m.s && m.cls.family == Family::elliptic) out.push_back(*m.s);
  return out;
}

namespace {

Elem shear_for(const FieldTable& f, Elem s) {
  for (Elem c = 0; c < f.order(); ++c)
    if (f.add(f.mul(c, c), c) == s) return c;
  fail(ErrorKind::internal, "no shear reaches pencil member " + std::to_string(s));
}

PointSet image(const ProjectiveSpace& ps, const Matrix& m, const PointSet& s) {
  std::vector<PointIndex> out;
  for (PointIndex x : s) out.push_back(apply_point(ps, m, x));
  return PointSet::from(std::move(out));
}

}  // namespace

MixedOvoid build_mixed_ovoid(const HemisystemResult& base, const MixedChoice& choice) {
  const PolarSpace& p = *base.space;
  const auto& ps = p.ps();
  const auto& f = ps.field();
  require(f.order() >= 4, ErrorKind::usage,
          "the pencil over GF(2) has a single elliptic member, so two distinct members do not exist");
  require(choice.i != choice.j, ErrorKind::usage, "the two pencil members must differ");

  MixedOvoid x;
  x.base = base.space;
  x.choice = choice;
  x.elliptic_members = elliptic_members(p.form());
  const int ne = static_cast<int>(x.elliptic_members.size());
  require(choice.i >= 0 && choice.i < ne && choice.j >= 0 && choice.j < ne, ErrorKind::usage,
          "member index out of range (there are " + std::to_string(ne) + " elliptic members)");
  x.shear_i = shear_for(f, x.elliptic_members[choice.i]);
  x.shear_j = shear_for(f, x.elliptic_members[choice.j]);
  const int nc = ps.ncoords();
  x.a = image(ps, shear(nc, x.shear_i), choice.side_i ? base.o2 : base.o1);
  x.b = image(ps, shear(nc, x.shear_j), choice.side_j ? base.o2 : base.o1);
  x.qsection = p.section_points();
  x.x = set_union(set_union(x.a, x.b), x.qsection);
  require(x.x.size() == x.a.size() + x.b.size() + x.qsection.size(), ErrorKind::internal,
          "mixed ovoid parts overlap");
  const std::uint64_t q = f.order();
  const int n = nc / 2 - 1;
  x.m_expected = static_cast<int>((ipow(q, n) - 1) / (q - 1));
  return x;
}

MixedOvoid build_mixed_ovoid(int n, const FieldTable& f, const MixedChoice& choice) {
  require(n >= 2 && n % 2 == 0, ErrorKind::usage, "the rank must be even (Q-(2n+1, q) with n = 2n')");
  require(f.order() >= 4, ErrorKind::usage,
          "the pencil over GF(2) has a single elliptic member, so two distinct members do not exist");
  require(choice.i != choice.j, ErrorKind::usage, "the two pencil members must differ");
  return build_mixed_ovoid(construct_relative_hemisystem(n / 2, f), choice);
}

PolarSpace symplectic_of(const MixedOvoid& x) {
  return PolarSpace::symplectic(x.base->ps(), x.base->bilinear());
}

MovoidReport check_m_ovoid(const PolarSpace& w, const GeneratorList& gens, const PointSet& x,
                           std::optional<int> m_expected) {
  MovoidReport rep;
  rep.size = x.size();
  rep.expected_size = x.size();
  rep.size_ok = true;
  rep.sampled = gens.sampled;
  const auto counts = generator_counts(w, gens, x);
  rep.generators_checked = counts.size();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const int want = m_expected ? *m_expected : counts[0];
    if (counts[i] != want && rep.violations.size() < kMaxWitnesses) rep.violations.emplace_back(i, counts[i]);
  }
  if (rep.violations.empty() && !counts.empty()) rep.m = counts[0];
  rep.pass = rep.m.has_value() && (!m_expected || *rep.m == *m_expected);
  return rep;
}

MovoidReport verify_symplectic_ovoid(const MixedOvoid& x, const GeneratorList& w_gens) {
  return check_m_ovoid(symplectic_of(x), w_gens, x.x, x.m_expected);
}

std::map<std::size_t, std::size_t> hyperplane_spectrum(const ProjectiveSpace& ps, const PointSet& x) {
  const std::size_t np = ps.num_points();
  std::vector<Code> xs;
  for (PointIndex p : x) xs.push_back(ps.point(p));
  std::vector<std::map<std::size_t, std::size_t>> parts(kDefaultChunks);
  parallel_chunks(np, kDefaultChunks, [&](std::size_t b, std::size_t e, std::size_t c) {
    for (std::size_t h = b; h < e; ++h) {
      const Code a = ps.point(static_cast<PointIndex>(h));
      std::size_t cnt = 0;
      for (Code v : xs) cnt += ps.dot(a, v) == 0;
      ++parts[c][cnt];
    }
  });
  std::map<std::size_t, std::size_t> out;
  for (const auto& part : parts)
    for (auto [k, v] : part) out[k] += v;
  return out;
}

TwoCharacter two_character_check(const ProjectiveSpace& ps, const PointSet& x) {
  const std::uint64_t q = ps.q();
  const int n = ps.ncoords() / 2 - 1;
  TwoCharacter t;
  t.h1 = static_cast<std::size_t>((ipow(q, n) - 1) * (ipow(q, n) + 1) / (q - 1));
  t.h2 = t.h1 - static_cast<std::size_t>(ipow(q, n));
  t.spectrum = hyperplane_spectrum(ps, x);
  t.pass = t.spectrum.size() == 2 && t.spectrum.count(t.h1) && t.spectrum.count(t.h2);
  return t;
}

std::uint64_t SrgResult::edges() const {
  std::uint64_t d = 0;
  for (const auto& row : adj)
    for (auto w : row) d += std::popcount(w);
  return d / 2;
}

SrgResult srg_build_verify(const PolarSpace& p, const PointSet& r, std::uint64_t seed) {
  const auto& ps = p.ps();
  require(ps.q() == 2 && !p.is_symplectic() && p.cls().family == Family::elliptic, ErrorKind::usage,
          "the graph is defined on an elliptic quadric over GF(2)");
  const int n = ps.ncoords() / 2 - 1;
  require(n >= 3, ErrorKind::usage, "the graph needs rank at least 3");
  for (PointIndex x : r) require(p.on_space(x), ErrorKind::usage, "vertex not on the quadric");

  SrgResult g;
  g.vertices = r.indices();
  const std::size_t v = g.vertices.size();
  const std::size_t words = (v + 63) / 64;
  g.adj.assign(v, std::vector<std::uint64_t>(words, 0));
  for (std::size_t a = 0; a < v; ++a)
    for (std::size_t b = a + 1; b < v; ++b)
      if (p.orth(g.vertices[a], g.vertices[b])) {
        g.adj[a][b / 64] |= std::uint64_t{1} << (b % 64);
        g.adj[b][a / 64] |= std::uint64_t{1} << (a % 64);
      }

  g.ev = ipow(2, n - 1) * (ipow(2, n) - 1);
  g.ek = (ipow(2, n - 2) - 1) * (ipow(2, n) + 1);
  g.elambda = 2 * (ipow(2, n - 1) + 1) * (ipow(2, n - 3) - 1);
  g.emu = ipow(2, n - 1) * (ipow(2, n - 2) - 1);

  // Adjacency through the form agrees with "the line xy is on the quadric".
  if (v >= 2) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, v - 1);
    for (int t = 0; t < 1000; ++t) {
      const std::size_t a = pick(rng);
      std::size_t b = pick(rng);
      while (b == a) b = pick(rng);
      const std::vector<Code> l{ps.point(g.vertices[a]), ps.point(g.vertices[b])};
      bool on = true;
      for (PointIndex x : subspace_points(ps, Subspace::from_vectors(ps, l))) on = on && p.on_space(x);
      if (on != g.adjacent(a, b))
        g.witnesses.push_back("adjacency mismatch at " + std::to_string(g.vertices[a]) + "," +
                              std::to_string(g.vertices[b]));
      ++g.equivalence_checked;
    }
  }

  g.v = v;
  auto common = [&](std::size_t a, std::size_t b) {
    std::uint64_t c = 0;
    for (std::size_t w = 0; w < words; ++w) c += std::popcount(g.adj[a][w] & g.adj[b][w]);
    return c;
  };
  bool regular = true, lam_ok = true, mu_ok = true;
  for (std::size_t a = 0; a < v; ++a) {
    std::uint64_t d = 0;
    for (auto w : g.adj[a]) d += std::popcount(w);
    if (!g.k) g.k = d;
    else if (d != *g.k && regular) {
      regular = false;
      g.witnesses.push_back("vertex " + std::to_string(g.vertices[a]) + " has degree " + std::to_string(d));
    }
    for (std::size_t b = a + 1; b < v; ++b) {
      const std::uint64_t c = common(a, b);
      auto& slot = g.adjacent(a, b) ? g.lambda : g.mu;
      bool& ok = g.adjacent(a, b) ? lam_ok : mu_ok;
      if (!slot) slot = c;
      else if (*slot != c && ok) {
        ok = false;
        g.witnesses.push_back("pair " + std::to_string(g.vertices[a]) + "," + std::to_string(g.vertices[b]) +
                              " has " + std::to_string(c) + " common neighbours");
      }
    }
  }
  if (!regular) g.k.reset();
  if (!lam_ok) g.lambda.reset();
  if (!mu_ok) g.mu.reset();
  if (g.k && g.lambda && g.mu)
    g.feasible = *g.k * (*g.k - *g.lambda - 1) == (v - *g.k - 1) * *g.mu;
  g.pass = g.witnesses.empty() && g.feasible && *g.v == g.ev && *g.k == g.ek && *g.lambda == g.elambda &&
           *g.mu == g.emu;
  return g;
}

std::string srg_json(const SrgResult& g) {
  nlohmann::json j;
  j["vertices"] = g.vertices;
  auto& adj = j["adjacency"] = nlohmann::json::array();
  for (std::size_t a = 0; a < g.vertices.size(); ++a) {
    std::vector<std::size_t> row;
    for (std::size_t b = 0; b < g.vertices.size(); ++b)
      if (g.adjacent(a, b)) row.push_back(b);
    adj.push_back(row);
  }
  return j.dump();
}

std::string srg_dimacs(const SrgResult& g) {
  std::ostringstream o;
  o << "p edge " << g.vertices.size() << ' ' << g.edges() << '\n';
  for (std::size_t a = 0; a < g.vertices.size(); ++a)
    for (std::size_t b = a + 1; b < g.vertices.size(); ++b)
      if (g.adjacent(a, b)) o << "e " << a + 1 << ' ' << b + 1 << '\n';
  return o.str();
}

HyperbolicReport hyperbolic_demo(const FieldTable& f) {
  require(f.characteristic() == 2 && f.order() <= 4, ErrorKind::usage, "the demo runs for q in {2, 4}");
  const Elem delta = find_delta(f);
  const ProjectiveSpace ps(5, f);
  auto space = std::make_shared<const PolarSpace>(
      PolarSpace::quadric(ps, frame_form(f, 2, delta, true), coordinate_hyperplane(ps, 5)));
  const PolarSpace& p = *space;
  require(p.cls().family == Family::hyperbolic, ErrorKind::internal, "the demo quadric is not hyperbolic");

  // The base solid x0 = z = 0 must cut an elliptic quadric.
  const std::vector<Code> solid{ps.encode(std::vector<Elem>{0, 1, 0, 0, 0, 0}),
                                ps.encode(std::vector<Elem>{0, 0, 1, 0, 0, 0}),
                                ps.encode(std::vector<Elem>{0, 0, 0, 1, 0, 0}),
                                ps.encode(std::vector<Elem>{0, 0, 0, 0, 1, 0})};
  const auto base = classify_quadric(p.form().restrict_to(ps, Subspace::from_vectors(ps, solid)));
  require(base.family == Family::elliptic, ErrorKind::internal, "the base solid is not elliptic");

  HyperbolicReport r;
  r.space = space;
  const auto gens = enumerate_generators(p);
  r.planes = gens.size();
  bool ok = true;
  PointSet acc;
  for (Elem a = 0; a < f.order(); ++a) {
    HyperbolicSet s;
    s.a = a;
    std::vector<PointIndex> pts;
    for (PointIndex x : p.off_points()) {
      const Code c = ps.point(x);
      if (ps.coord(c, 0) == f.mul(a, ps.coord(c, 5))) pts.push_back(x);
    }
    s.points = PointSet::from(std::move(pts));
    s.report = relative_movoid_check(p, gens, s.points);
    ok = ok && s.report.pass && s.report.m == static_cast<int>(f.order());
    acc = set_union(acc, s.points);
    const auto u = relative_movoid_check(p, gens, acc);
    r.union_m.push_back(u.m);
    ok = ok && u.m == static_cast<int>((a + 1) * f.order());
    r.sets.push_back(std::move(s));
  }
  r.pass = ok;
  return r;
}

}  // namespace polarkit
