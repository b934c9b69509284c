#include "polarkit/fieldreduction.hpp"

#include <algorithm>

#include "polarkit/error.hpp"

namespace polarkit {

Matrix standard_symplectic(int dim) {
  Matrix j(dim, dim);
  for (int t = 0; t + 1 < dim; t += 2) j(t, t + 1) = j(t + 1, t) = 1;
  return j;
}

namespace {

Elem form_value(const FieldTable& f, const Matrix& g, const std::vector<Elem>& u, const std::vector<Elem>& v) {
  Elem r = 0;
  for (int i = 0; i < g.rows; ++i) {
    if (u[i] == 0) continue;
    Elem row = 0;
    for (int j = 0; j < g.cols; ++j) row = f.add(row, f.mul(g(i, j), v[j]));
    r = f.add(r, f.mul(u[i], row));
  }
  return r;
}

std::vector<Elem> column(const Matrix& m, int c) {
  std::vector<Elem> v(m.rows);
  for (int r = 0; r < m.rows; ++r) v[r] = m(r, c);
  return v;
}

std::vector<Elem> mat_vec(const FieldTable& f, const Matrix& m, const std::vector<Elem>& x) {
  std::vector<Elem> y(m.rows, 0);
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) y[r] = f.add(y[r], f.mul(m(r, c), x[c]));
  return y;
}

// f(y) = y0 y1 + y2 y3 + ...
Elem hyperbolic_value(const FieldTable& f, const std::vector<Elem>& y) {
  Elem r = 0;
  for (std::size_t t = 0; t + 1 < y.size(); t += 2) r = f.add(r, f.mul(y[t], y[t + 1]));
  return r;
}

bool preserves(const FieldTable& f, const Matrix& g, const Matrix& gram) {
  return multiply(f, multiply(f, transpose(g), gram), g) == gram;
}

}  // namespace

Matrix symplectic_basis(const FieldTable& f, const Matrix& g) {
  const int n = g.rows;
  require(n == g.cols && n % 2 == 0, ErrorKind::domain, "Gram matrix must be square of even size");
  for (int i = 0; i < n; ++i) {
    require(g(i, i) == 0, ErrorKind::domain, "Gram matrix is not alternating");
    for (int j = 0; j < n; ++j) require(g(i, j) == f.neg(g(j, i)), ErrorKind::domain, "Gram matrix is not alternating");
  }
  std::vector<std::vector<Elem>> rest;
  for (int i = 0; i < n; ++i) {
    std::vector<Elem> e(n, 0);
    e[i] = 1;
    rest.push_back(std::move(e));
  }
  Matrix c(n, n);
  int col = 0;
  while (!rest.empty()) {
    auto e = rest.front();
    rest.erase(rest.begin());
    auto it = std::find_if(rest.begin(), rest.end(),
                           [&](const std::vector<Elem>& w) { return form_value(f, g, e, w) != 0; });
    require(it != rest.end(), ErrorKind::domain, "Gram matrix is degenerate");
    auto fv = *it;
    rest.erase(it);
    const Elem s = f.inv(form_value(f, g, e, fv));
    for (auto& x : fv) x = f.mul(x, s);
    // Project the rest onto <e, f>^perp: w - g(w,f) e + g(w,e) f.
    for (auto& w : rest) {
      const Elem wf = form_value(f, g, w, fv), we = form_value(f, g, w, e);
      for (int i = 0; i < n; ++i) w[i] = f.add(f.sub(w[i], f.mul(wf, e[i])), f.mul(we, fv[i]));
    }
    for (int i = 0; i < n; ++i) {
      c(i, col) = e[i];
      c(i, col + 1) = fv[i];
    }
    col += 2;
  }
  require(multiply(f, multiply(f, transpose(c), g), c) == standard_symplectic(n), ErrorKind::internal,
          "symplectic basis check failed");
  return c;
}

namespace {

FieldTable square_extension(const FieldTable& sub) {
  return FieldTable::make(sub.characteristic(), 2 * sub.degree());
}

}  // namespace

BlowupContext::BlowupContext(int n, const FieldTable& sub)
    : n_(n),
      emb_(sub, square_extension(sub)),
      ext_ps_(2 * n - 1, emb_.ext()),
      red_ps_(4 * n - 1, sub),
      frame_ps_(4 * n + 1, sub),
      frame_(polarkit::frame_form(sub, 2 * n, find_delta(sub))) {
  require(n >= 1, ErrorKind::usage, "construction rank must be at least 1");
  require(sub.characteristic() == 2, ErrorKind::usage, "field reduction needs even q");
  const auto& ext = emb_.ext();
  delta_ = find_delta(sub);
  for (Elem z = 0; z < ext.order(); ++z)
    if (!emb_.section(z)) {
      xi_ = z;
      break;
    }
  split_.assign(ext.order(), {0, 0});
  for (Elem a = 0; a < sub.order(); ++a)
    for (Elem b = 0; b < sub.order(); ++b)
      split_[ext.add(emb_.embed(a), ext.mul(emb_.embed(b), xi_))] = {a, b};

  k_ = standard_symplectic(2 * n);
  const Elem basis[2] = {1, xi_};
  kprime_ = Matrix(4 * n, 4 * n);
  for (int i = 0; i < 2 * n; ++i)
    for (int a = 0; a < 2; ++a)
      for (int j = 0; j < 2 * n; ++j)
        for (int b = 0; b < 2; ++b)
          kprime_(2 * i + a, 2 * j + b) = emb_.trace(ext.mul(ext.mul(basis[a], basis[b]), k_(i, j)));
  c_ = symplectic_basis(sub, kprime_);
  auto inv = inverse(sub, c_);
  require(inv.has_value(), ErrorKind::internal, "symplectic basis is singular");
  c_inv_ = *inv;
}

std::vector<Elem> BlowupContext::flatten(std::span<const Elem> x) const {
  std::vector<Elem> out;
  out.reserve(2 * x.size());
  for (Elem z : x) {
    out.push_back(split_[z].first);
    out.push_back(split_[z].second);
  }
  return out;
}

Subspace BlowupContext::blowup(Code ext_point) const {
  const auto x = ext_ps_.decode(ext_point);
  std::vector<Elem> xx(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xx[i] = ext().mul(xi_, x[i]);
  const std::vector<Code> rows{red_ps_.encode(flatten(x)), red_ps_.encode(flatten(xx))};
  return Subspace::from_vectors(red_ps_, rows);
}

Matrix BlowupContext::blowup(const Matrix& g) const {
  const auto& ext = emb_.ext();
  const int d = 2 * n_;
  require(g.rows == d && g.cols == d, ErrorKind::usage, "matrix size does not match the context");
  const Elem basis[2] = {1, xi_};
  Matrix out(2 * d, 2 * d);
  for (int j = 0; j < d; ++j)
    for (int b = 0; b < 2; ++b)
      for (int i = 0; i < d; ++i) {
        const auto [lo, hi] = split_[ext.mul(g(i, j), basis[b])];
        out(2 * i, 2 * j + b) = lo;
        out(2 * i + 1, 2 * j + b) = hi;
      }
  return out;
}

Matrix BlowupContext::reduce_to_y(const Matrix& g) const {
  return multiply(sub(), multiply(sub(), c_inv_, blowup(g)), c_);
}

std::vector<Subspace> spread_build(const BlowupContext& ctx) {
  const auto& red = ctx.red_space();
  std::vector<Subspace> lines;
  lines.reserve(ctx.ext_space().num_points());
  std::vector<std::uint8_t> hit(red.num_points(), 0);
  for (Code p : ctx.ext_space().points()) {
    Subspace l = ctx.blowup(p);
    require(l.rank() == 2, ErrorKind::internal, "spread element is not a line");
    for (PointIndex i : subspace_points(red, l)) {
      require(!hit[i], ErrorKind::internal, "spread lines intersect");
      hit[i] = 1;
    }
    const auto u = red.decode(l.basis()[0]), v = red.decode(l.basis()[1]);
    require(form_value(ctx.sub(), ctx.kprime(), u, v) == 0, ErrorKind::internal,
            "spread line is not totally isotropic");
    lines.push_back(std::move(l));
  }
  require(std::all_of(hit.begin(), hit.end(), [](std::uint8_t h) { return h != 0; }), ErrorKind::internal,
          "spread does not cover the space");
  return lines;
}

std::vector<Subspace> spread_in_frame(const BlowupContext& ctx, const std::vector<Subspace>& spread) {
  const auto& f = ctx.sub();
  const auto& red = ctx.red_space();
  const auto& fr = ctx.frame_space();
  const int dy = 4 * ctx.n();
  std::vector<Subspace> out;
  out.reserve(spread.size());
  for (const auto& l : spread) {
    std::vector<Code> rows;
    for (Code r : l.basis()) {
      const auto y = mat_vec(f, ctx.c_inv(), red.decode(r));
      std::vector<Elem> x(dy + 2, 0);
      x[0] = f.sqrt(hyperbolic_value(f, y));
      for (int i = 0; i < dy; ++i) x[1 + i] = y[i];
      rows.push_back(fr.encode(x));
    }
    out.push_back(Subspace::from_vectors(fr, rows));
  }
  return out;
}

std::vector<Matrix> sp_generators(const BlowupContext& ctx) {
  const auto& ext = ctx.ext();
  const int d = 2 * ctx.n();
  std::vector<std::vector<Elem>> vs;
  for (int i = 0; i < d; ++i) {
    std::vector<Elem> v(d, 0);
    v[i] = 1;
    vs.push_back(v);
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      std::vector<Elem> v(d, 0);
      v[i] = v[j] = 1;
      vs.push_back(v);
    }
  std::vector<Matrix> out;
  for (const auto& v : vs) {
    const auto kv = mat_vec(ext, ctx.k(), v);
    for (unsigned bit = 0; bit < ext.degree(); ++bit) {
      const Elem lambda = static_cast<Elem>(1u) << bit;
      Matrix t = Matrix::identity(d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) t(i, j) = ext.add(t(i, j), ext.mul(lambda, ext.mul(v[i], kv[j])));
      require(preserves(ext, t, ctx.k()), ErrorKind::internal, "transvection does not preserve k");
      if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(std::move(t));
    }
  }
  return out;
}

Matrix lift_parabolic(const BlowupContext& ctx, const Matrix& s) {
  const auto& f = ctx.sub();
  const int dy = 4 * ctx.n();
  require(s.rows == dy && s.cols == dy, ErrorKind::usage, "matrix size does not match the context");
  require(preserves(f, s, standard_symplectic(dy)), ErrorKind::domain, "matrix is not symplectic");
  Matrix m(dy + 1, dy + 1);
  m(0, 0) = 1;
  for (int i = 0; i < dy; ++i) {
    // theta(e_i) = sqrt(f(s e_i)), since f(e_i) = 0.
    m(0, 1 + i) = f.sqrt(hyperbolic_value(f, column(s, i)));
    for (int r = 0; r < dy; ++r) m(1 + r, 1 + i) = s(r, i);
  }
  return m;
}

LiftedIsometry extend_elliptic(const BlowupContext& ctx, const Matrix& s) {
  const auto& f = ctx.sub();
  const int dy = 4 * ctx.n();
  const Matrix hat = lift_parabolic(ctx, s);
  LiftedIsometry li;
  li.s = s;
  li.theta.resize(dy);
  for (int i = 0; i < dy; ++i) li.theta[i] = hat(0, 1 + i);

  // b(s y, v) = theta(y) for all y  <=>  s^T J v = theta.
  const Matrix sys = multiply(f, transpose(s), standard_symplectic(dy));
  auto v = solve(f, sys, li.theta);
  require(v.has_value(), ErrorKind::internal, "no vector v for the extension");
  li.v = *v;
  const Elem fv = hyperbolic_value(f, li.v);
  require(f.absolute_trace(fv) == 0, ErrorKind::internal, "gamma^2 + gamma = f(v) has no root");
  bool found = false;
  for (Elem g = 0; g < f.order() && !found; ++g)
    if (f.add(f.mul(g, g), g) == fv) {
      li.gamma = g;
      found = true;
    }
  require(found, ErrorKind::internal, "Artin-Schreier root not found");

  const int nc = dy + 2, z = nc - 1;
  li.m = Matrix(nc, nc);
  for (int r = 0; r <= dy; ++r)
    for (int c = 0; c <= dy; ++c) li.m(r, c) = hat(r, c);
  li.m(0, z) = li.gamma;
  for (int i = 0; i < dy; ++i) li.m(1 + i, z) = li.v[i];
  li.m(z, z) = 1;
  require(ctx.frame_form().compose(li.m) == ctx.frame_form(), ErrorKind::internal,
          "lifted matrix does not preserve the frame form");
  return li;
}

std::uint64_t matrix_order(const FieldTable& f, const Matrix& m, std::uint64_t cap) {
  const Matrix id = Matrix::identity(m.rows);
  Matrix p = m;
  for (std::uint64_t k = 1; k <= cap; ++k) {
    if (p == id) return k;
    p = multiply(f, p, m);
  }
  fail(ErrorKind::resource, "matrix order exceeds cap");
}

namespace {

Matrix transvection(const FieldTable& ext, const Matrix& k, const std::vector<Elem>& v, Elem lambda) {
  const int d = k.rows;
  const auto kv = mat_vec(ext, k, v);
  Matrix t = Matrix::identity(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) t(i, j) = ext.add(t(i, j), ext.mul(lambda, ext.mul(v[i], kv[j])));
  return t;
}

std::vector<Elem> unit(int d, int i) {
  std::vector<Elem> v(d, 0);
  v[i] = 1;
  return v;
}

}  // namespace

std::vector<Matrix> odd_generators(const BlowupContext& ctx) {
  const auto& ext = ctx.ext();
  const auto& k = ctx.k();
  const int d = 2 * ctx.n();
  std::vector<std::pair<std::vector<Elem>, Elem>> family;
  for (int i = 0; i < d; ++i)
    for (unsigned bit = 0; bit < ext.degree(); ++bit) family.emplace_back(unit(d, i), Elem{1} << bit);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      auto v = unit(d, i);
      v[j] = 1;
      for (unsigned bit = 0; bit < ext.degree(); ++bit) family.emplace_back(v, Elem{1} << bit);
    }
  auto kval = [&](const std::vector<Elem>& a, const std::vector<Elem>& b) { return form_value(ext, k, a, b); };
  auto partner = [](int i) { return i ^ 1; };

  std::vector<Matrix> out;
  auto emit = [&](const std::vector<Elem>& a, Elem la, const std::vector<Elem>& b, Elem lb) {
    Matrix g = multiply(ext, transvection(ext, k, a, la), transvection(ext, k, b, lb));
    require(matrix_order(ext, g) % 2 == 1, ErrorKind::internal, "product of transvections has even order");
    if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(std::move(g));
  };
  // Hub links: t_{e0} t_{ei} directly, or through x = e_0' + e_i'.
  for (int i = 1; i < d; ++i) {
    if (kval(unit(d, 0), unit(d, i)) != 0) {
      emit(unit(d, 0), 1, unit(d, i), 1);
    } else {
      auto x = unit(d, partner(0));
      x[partner(i)] = 1;
      emit(unit(d, 0), 1, x, 1);
      emit(x, 1, unit(d, i), 1);
    }
  }
  for (const auto& [v, lambda] : family) {
    int hub = 0;
    while (hub < d && kval(unit(d, hub), v) == 0) ++hub;
    require(hub < d, ErrorKind::internal, "no hub pairs with a transvection vector");
    emit(unit(d, hub), 1, v, lambda);
  }
  return out;
}

Matrix frame_tau(const BlowupContext& ctx) {
  const int nc = 4 * ctx.n() + 2;
  Matrix t = Matrix::identity(nc);
  t(0, nc - 1) = 1;
  return t;
}

LiftedIsometry lift_odd(const BlowupContext& ctx, const Matrix& g) {
  const auto& f = ctx.sub();
  const std::uint64_t r = matrix_order(ctx.ext(), g);
  require(r % 2 == 1, ErrorKind::usage, "lift_odd needs an element of odd order");
  LiftedIsometry li = extend_elliptic(ctx, ctx.reduce_to_y(g));
  li.source = g;
  const Matrix id = Matrix::identity(li.m.rows);
  auto power = [&](const Matrix& m) {
    Matrix p = id;
    for (std::uint64_t i = 0; i < r; ++i) p = multiply(f, p, m);
    return p;
  };
  if (power(li.m) != id) {
    li.m = multiply(f, frame_tau(ctx), li.m);
    li.gamma = f.add(li.gamma, 1);
    require(power(li.m) == id, ErrorKind::internal, "neither extension has odd order");
  }
  return li;
}

std::vector<LiftedIsometry> lifted_generators(const BlowupContext& ctx) {
  std::vector<LiftedIsometry> out;
  for (const auto& g : odd_generators(ctx)) out.push_back(lift_odd(ctx, g));
  return out;
}

}  // namespace polarkit
