#include "polarkit/quadforms.hpp"

#include "polarkit/error.hpp"

namespace polarkit {

BilinearForm::BilinearForm(FieldTable f, Matrix gram) : f_(std::move(f)), gram_(std::move(gram)) {
  require(gram_.rows == gram_.cols, ErrorKind::usage, "Gram matrix must be square");
}

Elem BilinearForm::eval(const ProjectiveSpace& ps, Code u, Code v) const {
  return ps.dot(polar_vector(ps, u), v);
}

Code BilinearForm::polar_vector(const ProjectiveSpace& ps, Code u) const {
  // (G u)_j = sum_i G(j, i) u_i; G symmetric so rows and columns agree.
  return apply(ps, gram_, u);
}

bool BilinearForm::is_alternating() const {
  for (int i = 0; i < ncoords(); ++i) {
    if (gram_(i, i) != 0) return false;
    for (int j = 0; j < ncoords(); ++j)
      if (gram_(i, j) != f_.neg(gram_(j, i))) return false;
  }
  return true;
}

bool BilinearForm::is_nondegenerate() const { return rank(f_, gram_) == ncoords(); }

QuadraticForm::QuadraticForm(FieldTable f, Matrix upper) : f_(std::move(f)), upper_(std::move(upper)) {
  require(upper_.rows == upper_.cols, ErrorKind::usage, "form matrix must be square");
  for (int i = 0; i < upper_.rows; ++i)
    for (int j = 0; j < i; ++j)
      require(upper_(i, j) == 0, ErrorKind::usage, "form matrix must be upper triangular");
}

QuadraticForm QuadraticForm::zero(FieldTable f, int ncoords) {
  return QuadraticForm(std::move(f), Matrix(ncoords, ncoords));
}

Elem QuadraticForm::eval(std::span<const Elem> x) const {
  Elem r = 0;
  const int n = ncoords();
  for (int i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    Elem row = 0;
    for (int j = i; j < n; ++j)
      if (x[j] && upper_(i, j)) row = f_.add(row, f_.mul(upper_(i, j), x[j]));
    r = f_.add(r, f_.mul(x[i], row));
  }
  return r;
}

Elem QuadraticForm::eval(const ProjectiveSpace& ps, Code v) const {
  Elem x[kMaxCoords];
  for (int i = 0; i < ncoords(); ++i) x[i] = ps.coord(v, i);
  return eval(std::span<const Elem>(x, ncoords()));
}

BilinearForm QuadraticForm::polar() const {
  const int n = ncoords();
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      if (i == j) {
        g(i, i) = f_.add(upper_(i, i), upper_(i, i));
      } else {
        g(i, j) = upper_(i, j);
        g(j, i) = upper_(i, j);
      }
    }
  return BilinearForm(f_, std::move(g));
}

QuadraticForm QuadraticForm::plus(const QuadraticForm& o) const {
  require(o.ncoords() == ncoords(), ErrorKind::usage, "form size mismatch");
  Matrix u = upper_;
  for (std::size_t k = 0; k < u.a.size(); ++k) u.a[k] = f_.add(u.a[k], o.upper_.a[k]);
  return QuadraticForm(f_, std::move(u));
}

QuadraticForm QuadraticForm::with_term(int i, int j, Elem c) const {
  if (i > j) std::swap(i, j);
  Matrix u = upper_;
  u(i, j) = f_.add(u(i, j), c);
  return QuadraticForm(f_, std::move(u));
}

QuadraticForm QuadraticForm::compose(const Matrix& m) const {
  // Q(M x) = sum_{a<=b} u_ab (M x)_a (M x)_b; collect coefficients of x_i x_j.
  const int n = ncoords();
  require(m.rows == n, ErrorKind::usage, "compose: shape mismatch");
  const int k = m.cols;
  Matrix out(k, k);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      const Elem c = upper_(a, b);
      if (c == 0) continue;
      for (int i = 0; i < k; ++i) {
        if (m(a, i) == 0 && m(b, i) == 0) continue;
        for (int j = 0; j < k; ++j) {
          const Elem t = f_.mul(c, f_.mul(m(a, i), m(b, j)));
          if (t == 0) continue;
          const int r = std::min(i, j), s = std::max(i, j);
          out(r, s) = f_.add(out(r, s), t);
        }
      }
    }
  return QuadraticForm(f_, std::move(out));
}

QuadraticForm QuadraticForm::restrict_to(const ProjectiveSpace& ps, const Subspace& basis) const {
  return compose(transpose(basis.matrix(ps)));
}

std::string to_string(Family f) {
  switch (f) {
    case Family::elliptic: return "elliptic";
    case Family::hyperbolic: return "hyperbolic";
    case Family::parabolic: return "parabolic";
    case Family::cone: return "cone";
  }
  return "?";
}

namespace {

Family nondegenerate_family(int n, int witt) {
  if (n % 2 == 1) {
    require(witt == (n - 1) / 2, ErrorKind::internal, "parabolic Witt index mismatch");
    return Family::parabolic;
  }
  if (witt == n / 2) return Family::hyperbolic;
  require(witt == n / 2 - 1, ErrorKind::internal, "quadric Witt index out of range");
  return Family::elliptic;
}

}  // namespace

QuadricClass classify_quadric(const QuadraticForm& q) {
  const auto& f = q.field();
  const int n = q.ncoords();
  require(n >= 1 && n <= 12 && f.order() <= 16, ErrorKind::resource,
          "classification limited to PG(11, 16)");
  const ProjectiveSpace ps(n - 1, f);
  const BilinearForm b = q.polar();

  // Radical of B, then the zeros of Q on it. In characteristic 2, Q restricted
  // to rad B is x -> (sum_i c_i sqrt(Q(r_i)))^2, so its zeros form the kernel
  // of a linear functional; in odd characteristic rad B is already singular.
  const Matrix radb = nullspace(f, b.gram());
  Subspace radical;
  if (radb.rows > 0) {
    if (f.characteristic() == 2) {
      Matrix functional(1, radb.rows);
      std::vector<Code> rows;
      for (int r = 0; r < radb.rows; ++r) {
        std::vector<Elem> x(n);
        for (int c = 0; c < n; ++c) x[c] = radb(r, c);
        functional(0, r) = f.sqrt(q.eval(x));
        rows.push_back(ps.encode(x));
      }
      const Matrix ker = nullspace(f, functional);
      std::vector<Code> vecs;
      for (int k = 0; k < ker.rows; ++k) {
        Code v = 0;
        for (int r = 0; r < radb.rows; ++r) v = ps.add(v, ps.scale(ker(k, r), rows[r]));
        vecs.push_back(v);
      }
      radical = Subspace::from_vectors(ps, vecs);
    } else {
      radical = Subspace::from_matrix(ps, radb);
    }
  }

  // Greedy maximal totally singular subspace: one pass over the singular
  // points suffices since rejected points stay rejected as the subspace grows.
  std::vector<Code> ts;
  std::vector<Code> ts_polar;
  Subspace cur;
  for (Code v : ps.points()) {
    if (q.eval(ps, v) != 0) continue;
    bool ok = true;
    for (Code w : ts_polar)
      if (ps.dot(w, v) != 0) {
        ok = false;
        break;
      }
    if (!ok || contains_point(ps, cur, v)) continue;
    ts.push_back(v);
    ts_polar.push_back(b.polar_vector(ps, v));
    cur = Subspace::from_vectors(ps, ts);
  }

  QuadricClass c;
  c.ncoords = n;
  c.radical = radical;
  c.witt_index = cur.rank();
  const int r0 = radical.rank();
  if (r0 == 0) {
    c.family = nondegenerate_family(n, c.witt_index);
    c.base_family = c.family;
  } else {
    c.family = Family::cone;
    c.base_family = nondegenerate_family(n - r0, c.witt_index - r0);
  }
  return c;
}

Code nucleus_of(const ProjectiveSpace& ps, const QuadraticForm& q) {
  require(ps.field().characteristic() == 2, ErrorKind::usage, "nucleus needs characteristic 2");
  const auto cls = classify_quadric(q);
  require(cls.family == Family::parabolic, ErrorKind::domain, "nucleus of a non-parabolic quadric");
  const Matrix radb = nullspace(q.field(), q.polar().gram());
  require(radb.rows == 1, ErrorKind::internal, "parabolic form with radical of rank != 1");
  std::vector<Elem> x(radb.cols);
  for (int c = 0; c < radb.cols; ++c) x[c] = radb(0, c);
  return ps.normalize(ps.encode(x));
}

Subspace perp_of(const ProjectiveSpace& ps, const Subspace& s, const BilinearForm& b) {
  require(b.is_nondegenerate(), ErrorKind::domain, "perp under a degenerate form");
  if (s.empty()) return Subspace::full(ps);
  const Matrix sys = multiply(ps.field(), s.matrix(ps), b.gram());
  return Subspace::from_matrix(ps, nullspace(ps.field(), sys));
}

QuadraticForm frame_form(const FieldTable& f, int pairs, Elem delta, bool elliptic_block) {
  const int n = 2 * pairs + 2;
  const int z = n - 1;
  Matrix u(n, n);
  u(0, 0) = 1;
  u(0, z) = 1;
  u(z, z) = delta;
  for (int t = 0; t < pairs; ++t) u(1 + 2 * t, 2 + 2 * t) = 1;
  if (elliptic_block) {
    require(pairs >= 1, ErrorKind::usage, "elliptic block needs a y-pair");
    const int a = 2 * pairs - 1, bcol = 2 * pairs;
    u(a, a) = 1;
    u(bcol, bcol) = delta;
  }
  return QuadraticForm(f, std::move(u));
}

QuadraticForm canonical_form(FormKind kind, int n, const FieldTable& f, Elem delta) {
  require(n >= 1, ErrorKind::usage, "rank parameter must be positive");
  require(f.characteristic() == 2, ErrorKind::usage, "canonical forms are for even q");
  const bool needs_delta = kind == FormKind::elliptic || kind == FormKind::construction_frame;
  if (needs_delta)
    require(f.absolute_trace(delta) == 1, ErrorKind::domain,
            "delta must have absolute trace 1 for an elliptic form");
  switch (kind) {
    case FormKind::construction_frame: return frame_form(f, n, delta);
    case FormKind::parabolic: {
      // X_{n+2} dropped: 2n+1 coordinates, pairs (i, 2n - i) and X_{n+1}^2.
      Matrix u(2 * n + 1, 2 * n + 1);
      for (int i = 0; i < n; ++i) u(i, 2 * n - i) = 1;
      u(n, n) = 1;
      return QuadraticForm(f, std::move(u));
    }
    case FormKind::elliptic:
    case FormKind::hyperbolic: {
      Matrix u(2 * n + 2, 2 * n + 2);
      for (int i = 0; i < n; ++i) u(i, 2 * n + 1 - i) = 1;
      u(n, n) = 1;
      u(n, n + 1) = 1;
      if (kind == FormKind::elliptic) u(n + 1, n + 1) = delta;
      return QuadraticForm(f, std::move(u));
    }
  }
  fail(ErrorKind::usage, "unknown form kind");
}

std::vector<PencilMember> pencil_members(const QuadraticForm& qe) {
  const auto& f = qe.field();
  const int z = qe.ncoords() - 1;
  std::vector<PencilMember> out;
  for (Elem s = 0; s < f.order(); ++s) {
    QuadraticForm m = qe.with_term(z, z, s);
    auto cls = classify_quadric(m);
    out.push_back({s, std::move(m), std::move(cls)});
  }
  QuadraticForm deg = QuadraticForm::zero(f, qe.ncoords()).with_term(z, z, 1);
  auto cls = classify_quadric(deg);
  out.push_back({std::nullopt, std::move(deg), std::move(cls)});
  return out;
}

PencilCensus census(const std::vector<PencilMember>& members) {
  PencilCensus c;
  for (const auto& m : members) {
    if (m.cls.family == Family::elliptic) ++c.elliptic;
    else if (m.cls.family == Family::hyperbolic) ++c.hyperbolic;
    else ++c.degenerate;
  }
  return c;
}

Matrix shear(int ncoords, Elem c) {
  Matrix m = Matrix::identity(ncoords);
  m(0, ncoords - 1) = c;
  return m;
}

}  // namespace polarkit
