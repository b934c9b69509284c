#include "polarkit/projspace.hpp"

#include <algorithm>
#include <string>

#include "polarkit/error.hpp"

namespace polarkit {

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols, m.rows);
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) t(c, r) = m(r, c);
  return t;
}

Matrix multiply(const FieldTable& f, const Matrix& x, const Matrix& y) {
  require(x.cols == y.rows, ErrorKind::usage, "matrix shape mismatch");
  Matrix r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const Elem a = x(i, k);
      if (a == 0) continue;
      for (int j = 0; j < y.cols; ++j) r(i, j) = f.add(r(i, j), f.mul(a, y(k, j)));
    }
  return r;
}

std::vector<int> row_reduce(const FieldTable& f, Matrix& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    int sel = -1;
    for (int r = row; r < m.rows; ++r)
      if (m(r, col) != 0) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    if (sel != row)
      for (int c = 0; c < m.cols; ++c) std::swap(m(sel, c), m(row, c));
    const Elem inv = f.inv(m(row, col));
    for (int c = 0; c < m.cols; ++c) m(row, c) = f.mul(m(row, c), inv);
    for (int r = 0; r < m.rows; ++r) {
      if (r == row || m(r, col) == 0) continue;
      const Elem factor = f.neg(m(r, col));
      for (int c = 0; c < m.cols; ++c) m(r, c) = f.add(m(r, c), f.mul(factor, m(row, c)));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

int rank(const FieldTable& f, Matrix m) { return static_cast<int>(row_reduce(f, m).size()); }

std::optional<Matrix> inverse(const FieldTable& f, const Matrix& m) {
  require(m.rows == m.cols, ErrorKind::usage, "inverse of a non-square matrix");
  const int n = m.rows;
  Matrix aug(n, 2 * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) aug(r, c) = m(r, c);
    aug(r, n + r) = 1;
  }
  const auto piv = row_reduce(f, aug);
  if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1) return std::nullopt;
  Matrix inv(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) inv(r, c) = aug(r, n + c);
  return inv;
}

void require_invertible(const FieldTable& f, const Matrix& m) {
  require(m.rows == m.cols && rank(f, m) == m.rows, ErrorKind::domain, "matrix is singular");
}

Matrix nullspace(const FieldTable& f, const Matrix& m) {
  Matrix r = m;
  const auto piv = row_reduce(f, r);
  std::vector<bool> is_pivot(m.cols, false);
  for (int c : piv) is_pivot[c] = true;
  Matrix basis(m.cols - static_cast<int>(piv.size()), m.cols);
  int out = 0;
  for (int free = 0; free < m.cols; ++free) {
    if (is_pivot[free]) continue;
    basis(out, free) = 1;
    for (std::size_t i = 0; i < piv.size(); ++i)
      basis(out, piv[i]) = f.neg(r(static_cast<int>(i), free));
    ++out;
  }
  return basis;
}

std::optional<std::vector<Elem>> solve(const FieldTable& f, const Matrix& m,
                                       std::span<const Elem> b) {
  Matrix aug(m.rows, m.cols + 1);
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) aug(r, c) = m(r, c);
    aug(r, m.cols) = b[r];
  }
  const auto piv = row_reduce(f, aug);
  if (!piv.empty() && piv.back() == m.cols) return std::nullopt;
  std::vector<Elem> x(m.cols, 0);
  for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug(static_cast<int>(i), m.cols);
  return x;
}

// ---------------------------------------------------------------------------

ProjectiveSpace::ProjectiveSpace(int d, FieldTable f) {
  require(d >= 0 && d + 1 <= kMaxCoords, ErrorKind::resource, "projective dimension out of range");
  auto s = std::make_shared<State>(std::move(f));
  s->d = d;
  s->q = s->f.order();
  s->char2 = s->f.characteristic() == 2;
  if (s->char2) {
    s->shift = s->f.degree();
    s->mask = (Code{1} << s->shift) - 1;
  }
  const int n = d + 1;
  s->pw.resize(n + 1);
  s->pw[0] = 1;
  for (int i = 1; i <= n; ++i) {
    require(s->pw[i - 1] <= (Code{1} << 62) / s->q, ErrorKind::resource, "vector codes overflow");
    s->pw[i] = s->pw[i - 1] * s->q;
  }
  s->nvec = s->pw[n] - 1;
  const Code npoints = s->nvec / (s->q - 1);
  require(npoints <= kMaxPoints, ErrorKind::resource,
          "PG(" + std::to_string(d) + "," + std::to_string(s->q) + ") has more than 2^24 points");
  s->block.resize(n + 1);
  s->block[0] = 0;
  for (int i = 0; i < n; ++i) s->block[i + 1] = s->block[i] + s->pw[d - i];
  s_ = s;

  // Enumerate points in index order.
  s->points.reserve(npoints);
  for (int lead = 0; lead < n; ++lead) {
    const Code tail = s->pw[d - lead];
    for (Code t = 0; t < tail; ++t) {
      // t's digits (most significant first) are coordinates lead+1 .. d.
      Code v = set_coord(0, lead, 1);
      Code rest = t;
      for (int c = d; c > lead; --c) {
        v = set_coord(v, c, static_cast<Elem>(rest % s->q));
        rest /= s->q;
      }
      s->points.push_back(v);
    }
  }
  if (s->pw[n] <= (Code{1} << 22)) {
    s->index_table.assign(s->pw[n], 0);
    for (Code v = 1; v < s->pw[n]; ++v) s->index_table[v] = compute_index(v);
  }
}

Code ProjectiveSpace::set_coord(Code v, int i, Elem x) const noexcept {
  const Elem old = coord(v, i);
  if (s_->shift) {
    v &= ~(s_->mask << (i * s_->shift));
    return v | (Code{x} << (i * s_->shift));
  }
  return v - old * s_->pw[i] + Code{x} * s_->pw[i];
}

Code ProjectiveSpace::encode(std::span<const Elem> x) const {
  require(static_cast<int>(x.size()) == ncoords(), ErrorKind::usage, "vector length mismatch");
  Code v = 0;
  for (int i = 0; i < ncoords(); ++i) {
    require(x[i] < s_->q, ErrorKind::usage, "coordinate out of range");
    v = set_coord(v, i, x[i]);
  }
  return v;
}

std::vector<Elem> ProjectiveSpace::decode(Code v) const {
  std::vector<Elem> x(ncoords());
  for (int i = 0; i < ncoords(); ++i) x[i] = coord(v, i);
  return x;
}

Code ProjectiveSpace::add_generic(Code a, Code b) const noexcept {
  Code r = 0;
  for (int i = 0; i < ncoords(); ++i) r += Code{s_->f.add(coord(a, i), coord(b, i))} * s_->pw[i];
  return r;
}

Code ProjectiveSpace::scale(Elem c, Code v) const noexcept {
  if (c == 1) return v;
  Code r = 0;
  if (c == 0) return r;
  for (int i = 0; i < ncoords(); ++i) {
    const Elem x = coord(v, i);
    if (x) r = set_coord(r, i, s_->f.mul(c, x));
  }
  return r;
}

Elem ProjectiveSpace::dot(Code a, Code b) const noexcept {
  if (s_->q == 2) return static_cast<Elem>(__builtin_popcountll(a & b) & 1);
  Elem r = 0;
  for (int i = 0; i < ncoords(); ++i) {
    const Elem x = coord(a, i);
    if (x) r = s_->f.add(r, s_->f.mul(x, coord(b, i)));
  }
  return r;
}

Code ProjectiveSpace::normalize(Code v) const noexcept {
  for (int i = 0; i < ncoords(); ++i) {
    const Elem x = coord(v, i);
    if (x) return x == 1 ? v : scale(s_->f.inv(x), v);
  }
  return 0;
}

PointIndex ProjectiveSpace::compute_index(Code v) const noexcept {
  v = normalize(v);
  int lead = 0;
  while (coord(v, lead) == 0) ++lead;
  Code off = 0;
  for (int c = lead + 1; c <= s_->d; ++c) off = off * s_->q + coord(v, c);
  return static_cast<PointIndex>(s_->block[lead] + off);
}

PointIndex ProjectiveSpace::index_of(Code v) const noexcept {
  if (!s_->index_table.empty()) return s_->index_table[v];
  return compute_index(v);
}

// ---------------------------------------------------------------------------

Subspace Subspace::from_matrix(const ProjectiveSpace& ps, const Matrix& rows) {
  Matrix m = rows;
  const auto piv = row_reduce(ps.field(), m);
  Subspace s;
  for (std::size_t r = 0; r < piv.size(); ++r) {
    std::vector<Elem> x(m.cols);
    for (int c = 0; c < m.cols; ++c) x[c] = m(static_cast<int>(r), c);
    s.rows_.push_back(ps.encode(x));
  }
  return s;
}

Subspace Subspace::from_vectors(const ProjectiveSpace& ps, std::span<const Code> vectors) {
  Matrix m(static_cast<int>(vectors.size()), ps.ncoords());
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) m(r, c) = ps.coord(vectors[r], c);
  return from_matrix(ps, m);
}

Subspace Subspace::full(const ProjectiveSpace& ps) {
  return from_matrix(ps, Matrix::identity(ps.ncoords()));
}

Matrix Subspace::matrix(const ProjectiveSpace& ps) const {
  Matrix m(rank(), ps.ncoords());
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) m(r, c) = ps.coord(rows_[r], c);
  return m;
}

Subspace span(const ProjectiveSpace& ps, const Subspace& a, const Subspace& b) {
  std::vector<Code> v = a.basis();
  v.insert(v.end(), b.basis().begin(), b.basis().end());
  return Subspace::from_vectors(ps, v);
}

Subspace meet(const ProjectiveSpace& ps, const Subspace& a, const Subspace& b) {
  // x = sum s_i a_i = sum t_j b_j: kernel of [A^T | -B^T] gives the s part.
  const int ra = a.rank(), rb = b.rank(), n = ps.ncoords();
  if (ra == 0 || rb == 0) return {};
  const auto& f = ps.field();
  Matrix sys(n, ra + rb);
  for (int c = 0; c < n; ++c) {
    for (int i = 0; i < ra; ++i) sys(c, i) = ps.coord(a.basis()[i], c);
    for (int j = 0; j < rb; ++j) sys(c, ra + j) = f.neg(ps.coord(b.basis()[j], c));
  }
  const Matrix ker = nullspace(f, sys);
  std::vector<Code> vecs;
  for (int k = 0; k < ker.rows; ++k) {
    Code v = 0;
    for (int i = 0; i < ra; ++i) v = ps.add(v, ps.scale(ker(k, i), a.basis()[i]));
    vecs.push_back(v);
  }
  return Subspace::from_vectors(ps, vecs);
}

bool contains_point(const ProjectiveSpace& ps, const Subspace& s, Code v) {
  // Reduce v against the echelon basis.
  const auto& f = ps.field();
  for (Code row : s.basis()) {
    int lead = 0;
    while (ps.coord(row, lead) == 0) ++lead;
    const Elem c = ps.coord(v, lead);
    if (c) v = ps.add(v, ps.scale(f.neg(c), row));
  }
  return v == 0;
}

bool contains(const ProjectiveSpace& ps, const Subspace& outer, const Subspace& inner) {
  for (Code v : inner.basis())
    if (!contains_point(ps, outer, v)) return false;
  return true;
}

std::vector<Code> subspace_vectors(const ProjectiveSpace& ps, const Subspace& s) {
  std::vector<Code> out{0};
  for (Code row : s.basis()) {
    const std::size_t n = out.size();
    for (Elem c = 1; c < ps.q(); ++c) {
      const Code sv = ps.scale(c, row);
      for (std::size_t i = 0; i < n; ++i) out.push_back(ps.add(out[i], sv));
    }
  }
  return out;
}

std::vector<PointIndex> subspace_points(const ProjectiveSpace& ps, const Subspace& s) {
  // Vectors whose last nonzero basis coefficient is 1 give each point once.
  std::vector<Code> acc{0};
  std::vector<PointIndex> pts;
  for (Code row : s.basis()) {
    const std::size_t n = acc.size();
    for (std::size_t i = 0; i < n; ++i) pts.push_back(ps.index_of(ps.add(acc[i], row)));
    for (Elem c = 1; c < ps.q(); ++c) {
      const Code sv = ps.scale(c, row);
      for (std::size_t i = 0; i < n; ++i) acc.push_back(ps.add(acc[i], sv));
    }
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

Code apply(const ProjectiveSpace& ps, const Matrix& m, Code v) {
  const auto& f = ps.field();
  const int n = ps.ncoords();
  Elem x[kMaxCoords];
  for (int i = 0; i < n; ++i) x[i] = ps.coord(v, i);
  Code r = 0;
  for (int i = 0; i < n; ++i) {
    Elem s = 0;
    for (int j = 0; j < n; ++j)
      if (x[j]) s = f.add(s, f.mul(m(i, j), x[j]));
    if (s) r = ps.set_coord(r, i, s);
  }
  return r;
}

PointIndex apply_point(const ProjectiveSpace& ps, const Matrix& m, PointIndex p) {
  return ps.index_of(apply(ps, m, ps.point(p)));
}

Subspace apply(const ProjectiveSpace& ps, const Matrix& m, const Subspace& s) {
  std::vector<Code> img;
  for (Code v : s.basis()) img.push_back(apply(ps, m, v));
  return Subspace::from_vectors(ps, img);
}

PointIndex apply_map(const ProjectiveSpace& ps, const Matrix& m, PointIndex p) {
  require_invertible(ps.field(), m);
  return apply_point(ps, m, p);
}

Subspace apply_map(const ProjectiveSpace& ps, const Matrix& m, const Subspace& s) {
  require_invertible(ps.field(), m);
  return apply(ps, m, s);
}

}  // namespace polarkit
