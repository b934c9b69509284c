#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <deque>
#include <random>
#include <set>

#include "polarkit/error.hpp"
#include "polarkit/fieldreduction.hpp"
#include "polarkit/polarspace.hpp"

using namespace polarkit;

namespace {

std::set<PointIndex> bfs_orbit(const ProjectiveSpace& ps, const std::vector<Matrix>& gens, PointIndex seed) {
  std::set<PointIndex> seen{seed};
  std::deque<PointIndex> todo{seed};
  while (!todo.empty()) {
    const PointIndex x = todo.front();
    todo.pop_front();
    for (const auto& g : gens) {
      const PointIndex y = apply_point(ps, g, x);
      if (seen.insert(y).second) todo.push_back(y);
    }
  }
  return seen;
}

Matrix random_word(const FieldTable& f, const std::vector<Matrix>& gens, std::mt19937_64& rng, int len) {
  std::uniform_int_distribution<std::size_t> d(0, gens.size() - 1);
  Matrix m = Matrix::identity(gens.front().rows);
  for (int i = 0; i < len; ++i) m = multiply(f, m, gens[d(rng)]);
  return m;
}

}  // namespace

TEST_CASE("trace form and symplectic basis") {
  for (auto [n, e] : {std::pair{1, 1u}, {2, 1u}, {1, 2u}}) {
    const BlowupContext ctx(n, FieldTable::make(2, e));
    const auto& f = ctx.sub();
    const auto& kp = ctx.kprime();
    const BilinearForm b(f, kp);
    CHECK(b.is_alternating());
    CHECK(b.is_nondegenerate());
    const Elem basis[2] = {1, ctx.xi()};
    for (int i = 0; i < 2 * n; ++i)
      for (int j = 0; j < 2 * n; ++j)
        for (int a = 0; a < 2; ++a)
          for (int c = 0; c < 2; ++c)
            CHECK(kp(2 * i + a, 2 * j + c) ==
                  ctx.emb().trace(ctx.ext().mul(ctx.ext().mul(basis[a], basis[c]), ctx.k()(i, j))));
    CHECK(multiply(f, multiply(f, transpose(ctx.c()), kp), ctx.c()) == standard_symplectic(4 * n));
  }
  const auto f2 = FieldTable::make(2, 1);
  CHECK(symplectic_basis(f2, standard_symplectic(6)) == Matrix::identity(6));

  std::mt19937_64 rng(3);
  int samples = 0;
  while (samples < 50) {
    Matrix g(8, 8);
    for (int i = 0; i < 8; ++i)
      for (int j = i + 1; j < 8; ++j) g(i, j) = g(j, i) = rng() & 1;
    if (rank(f2, g) != 8) continue;
    ++samples;
    const Matrix c = symplectic_basis(f2, g);
    CHECK(multiply(f2, multiply(f2, transpose(c), g), c) == standard_symplectic(8));
  }
  Matrix deg = standard_symplectic(4);
  deg(2, 3) = deg(3, 2) = 0;
  CHECK_THROWS_AS((void)symplectic_basis(f2, deg), Error);
}

TEST_CASE("blowup of points and matrices") {
  const BlowupContext c1(1, FieldTable::make(2, 1));
  CHECK(c1.xi() == 2);
  const auto& ep = c1.ext_space();
  const Code p = ep.encode(std::vector<Elem>{1, 0});
  const auto& rp = c1.red_space();
  const std::vector<Code> rows{rp.encode(std::vector<Elem>{1, 0, 0, 0}), rp.encode(std::vector<Elem>{0, 1, 0, 0})};
  CHECK(c1.blowup(p) == Subspace::from_vectors(rp, rows));
  CHECK(c1.blowup(Matrix::identity(2)) == Matrix::identity(4));

  const BlowupContext c2(2, FieldTable::make(2, 1));
  const auto gens = sp_generators(c2);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<PointIndex> pt(0, c2.ext_space().num_points() - 1);
  for (int t = 0; t < 100; ++t) {
    const Matrix g = random_word(c2.ext(), gens, rng, 6);
    const Code x = c2.ext_space().point(pt(rng));
    const Code gx = apply(c2.ext_space(), g, x);
    REQUIRE(c2.blowup(gx) == apply(c2.red_space(), c2.blowup(g), c2.blowup(x)));
  }
}

TEST_CASE("spread is a partition into isotropic lines") {
  struct Case {
    int n;
    unsigned e;
    std::size_t lines;
  };
  for (auto c : {Case{1, 1, 5}, Case{2, 1, 85}, Case{1, 2, 17}}) {
    const BlowupContext ctx(c.n, FieldTable::make(2, c.e));
    const auto d = spread_build(ctx);
    CHECK(d.size() == c.lines);
    std::vector<int> hits(ctx.red_space().num_points(), 0);
    for (const auto& l : d)
      for (PointIndex i : subspace_points(ctx.red_space(), l)) ++hits[i];
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  }
}

TEST_CASE("symplectic generators") {
  const BlowupContext c1(1, FieldTable::make(2, 1));
  const auto g1 = sp_generators(c1);
  for (const auto& g : g1)
    CHECK(multiply(c1.ext(), multiply(c1.ext(), transpose(g), c1.k()), g) == c1.k());
  CHECK(bfs_orbit(c1.ext_space(), g1, 0).size() == 5);

  const BlowupContext c2(2, FieldTable::make(2, 1));
  CHECK(bfs_orbit(c2.ext_space(), sp_generators(c2), 0).size() == 85);
  const auto odd = odd_generators(c2);
  for (const auto& g : odd) {
    CHECK(matrix_order(c2.ext(), g) % 2 == 1);
    CHECK(multiply(c2.ext(), multiply(c2.ext(), transpose(g), c2.k()), g) == c2.k());
  }
  CHECK(bfs_orbit(c2.ext_space(), odd, 0).size() == 85);
}

TEST_CASE("parabolic lift") {
  const BlowupContext ctx(2, FieldTable::make(2, 1));
  const auto& f = ctx.sub();
  CHECK(lift_parabolic(ctx, Matrix::identity(8)) == Matrix::identity(9));

  const ProjectiveSpace p8(8, f);
  const auto parab = frame_form(f, 4, 1).restrict_to(ctx.frame_space(), coordinate_hyperplane(ctx.frame_space(), 9));
  for (const auto& g : sp_generators(ctx)) {
    const Matrix s = ctx.reduce_to_y(g);
    const Matrix hat = lift_parabolic(ctx, s);
    for (Code v = 1; v <= p8.num_vectors(); ++v) REQUIRE(parab.eval(p8, apply(p8, hat, v)) == parab.eval(p8, v));
    // Projection from N commutes: the y-part of hat x is s y.
    const ProjectiveSpace p7(7, f);
    for (Code v = 1; v <= p8.num_vectors(); ++v) {
      if (parab.eval(p8, v) != 0) continue;
      const Code img = apply(p8, hat, v);
      std::vector<Elem> y(8), sy(8);
      for (int i = 0; i < 8; ++i) {
        y[i] = p8.coord(v, i + 1);
        sy[i] = p8.coord(img, i + 1);
      }
      REQUIRE(apply(p7, s, p7.encode(y)) == p7.encode(sy));
    }
    // theta is additive on all pairs of vectors.
    auto theta = [&](const std::vector<Elem>& y) {
      Elem a = 0, b = 0;
      std::vector<Elem> sy(8, 0);
      for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) sy[r] = f.add(sy[r], f.mul(s(r, c), y[c]));
      for (int t = 0; t < 8; t += 2) {
        a = f.add(a, f.mul(y[t], y[t + 1]));
        b = f.add(b, f.mul(sy[t], sy[t + 1]));
      }
      return f.sqrt(f.add(a, b));
    };
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        std::vector<Elem> ei(8, 0), ej(8, 0), eij(8, 0);
        ei[i] = 1;
        ej[j] = 1;
        eij[i] ^= 1;
        eij[j] ^= 1;
        REQUIRE(theta(eij) == f.add(theta(ei), theta(ej)));
      }
  }
  Matrix bad = Matrix::identity(8);
  bad(0, 2) = 1;
  CHECK_THROWS_AS((void)lift_parabolic(ctx, bad), Error);
}

TEST_CASE("elliptic extension") {
  const BlowupContext ctx(2, FieldTable::make(2, 1));
  const auto& f = ctx.sub();
  const auto id = extend_elliptic(ctx, Matrix::identity(8));
  CHECK(id.m == Matrix::identity(10));
  CHECK(id.gamma == 0);
  CHECK(std::all_of(id.v.begin(), id.v.end(), [](Elem x) { return x == 0; }));

  const auto& fr = ctx.frame_space();
  const auto& form = ctx.frame_form();
  const Matrix tau = frame_tau(ctx);
  for (const auto& g : sp_generators(ctx)) {
    const auto li = extend_elliptic(ctx, ctx.reduce_to_y(g));
    for (Code v = 0; v <= fr.num_vectors(); ++v) REQUIRE(form.eval(fr, apply(fr, li.m, v)) == form.eval(fr, v));
    const Matrix hat = lift_parabolic(ctx, li.s);
    for (int r = 0; r < 9; ++r)
      for (int c = 0; c < 9; ++c) CHECK(li.m(r, c) == hat(r, c));
    CHECK(multiply(f, tau, li.m) == multiply(f, li.m, tau));
    CHECK(multiply(f, tau, li.m) != li.m);
  }
}

TEST_CASE("lifted generators") {
  struct Case {
    int n;
    unsigned e;
  };
  for (auto c : {Case{1, 1}, Case{2, 1}, Case{1, 2}}) {
    CAPTURE(c.n);
    CAPTURE(c.e);
    const BlowupContext ctx(c.n, FieldTable::make(2, c.e));
    const auto& f = ctx.sub();
    const auto& fr = ctx.frame_space();
    const auto p = PolarSpace::quadric(fr, ctx.frame_form(), coordinate_hyperplane(fr, 4 * c.n + 1));
    const auto spread = spread_in_frame(ctx, spread_build(ctx));
    const std::set<Subspace> sset(spread.begin(), spread.end());
    for (const auto& l : spread)
      for (PointIndex i : subspace_points(fr, l)) REQUIRE(p.section_points().contains(i));
    const Matrix tau = frame_tau(ctx);
    CHECK(tau == p.tau());
    for (const auto& li : lifted_generators(ctx)) {
      const auto r = matrix_order(ctx.ext(), li.source);
      CHECK(r % 2 == 1);
      CHECK(matrix_order(f, li.m) == r);
      CHECK(ctx.frame_form().compose(li.m) == ctx.frame_form());
      CHECK(apply(fr, li.m, p.sigma()) == p.sigma());
      CHECK(fr.normalize(apply(fr, li.m, p.nucleus())) == p.nucleus());
      for (const auto& l : spread) REQUIRE(sset.count(apply(fr, li.m, l)) == 1);
      for (PointIndex x : p.off_points())
        REQUIRE(apply_point(fr, li.m, p.tau_point(x)) == p.tau_point(apply_point(fr, li.m, x)));
      // The partner extension has even order.
      CHECK(matrix_order(f, multiply(f, tau, li.m)) == 2 * r);
    }
  }
}
