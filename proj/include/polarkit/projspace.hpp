#pragma once

// Projective space PG(d, q) over a FieldTable.
//
// Vectors of GF(q)^(d+1) are packed into a Code: the base-q integer whose
// digit i is coordinate i. For q = 2^e the digits are e-bit fields and vector
// addition is XOR. Points are normalized so that their first nonzero
// coordinate is 1 and are numbered in the order
//   (leading position ascending, then the remaining coordinates
//    lexicographically with earlier coordinates more significant),
// which starts (1,0,...,0), (1,0,...,0,1), ...

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "polarkit/gf.hpp"

namespace polarkit {

using Code = std::uint64_t;
using PointIndex = std::uint32_t;

inline constexpr std::size_t kMaxPoints = std::size_t{1} << 24;
inline constexpr int kMaxCoords = 16;

/// Dense row-major matrix over a field; the field is supplied by the caller.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<Elem> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}
  static Matrix identity(int n);

  Elem& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  Elem operator()(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
  bool operator==(const Matrix&) const = default;
};

Matrix transpose(const Matrix& m);
Matrix multiply(const FieldTable& f, const Matrix& x, const Matrix& y);
std::optional<Matrix> inverse(const FieldTable& f, const Matrix& m);
int rank(const FieldTable& f, Matrix m);
/// Reduced row-echelon form in place; returns the pivot columns.
std::vector<int> row_reduce(const FieldTable& f, Matrix& m);
/// Basis (as rows) of {x : m x = 0}.
Matrix nullspace(const FieldTable& f, const Matrix& m);
/// Some solution of m x = b, or nullopt when inconsistent.
std::optional<std::vector<Elem>> solve(const FieldTable& f, const Matrix& m, std::span<const Elem> b);

class ProjectiveSpace {
 public:
  ProjectiveSpace(int d, FieldTable f);

  int dim() const noexcept { return s_->d; }
  int ncoords() const noexcept { return s_->d + 1; }
  const FieldTable& field() const noexcept { return s_->f; }
  Elem q() const noexcept { return s_->q; }
  std::size_t num_points() const noexcept { return s_->points.size(); }

  Elem coord(Code v, int i) const noexcept {
    if (s_->shift) return static_cast<Elem>((v >> (i * s_->shift)) & s_->mask);
    return static_cast<Elem>((v / s_->pw[i]) % s_->q);
  }
  Code set_coord(Code v, int i, Elem x) const noexcept;
  Code encode(std::span<const Elem> x) const;
  std::vector<Elem> decode(Code v) const;

  Code add(Code a, Code b) const noexcept {
    if (s_->char2) return a ^ b;
    return add_generic(a, b);
  }
  Code scale(Elem c, Code v) const noexcept;
  /// Standard dot product sum_i a_i b_i.
  Elem dot(Code a, Code b) const noexcept;
  /// Scalar multiple with first nonzero coordinate 1.
  Code normalize(Code v) const noexcept;

  PointIndex index_of(Code v) const noexcept;  // v nonzero, any scalar multiple
  Code point(PointIndex i) const noexcept { return s_->points[i]; }
  const std::vector<Code>& points() const noexcept { return s_->points; }

  /// Number of nonzero vectors (q^(d+1) - 1).
  Code num_vectors() const noexcept { return s_->nvec; }

 private:
  struct State {
    explicit State(FieldTable field) : f(std::move(field)) {}
    int d = 0;
    FieldTable f;
    Elem q = 0;
    bool char2 = false;
    unsigned shift = 0;  // bits per coordinate when q is a power of two
    Code mask = 0;
    std::vector<Code> pw;     // q^i
    std::vector<Code> block;  // number of points with leading position < i
    Code nvec = 0;
    std::vector<Code> points;
    std::vector<PointIndex> index_table;  // code -> point index, when small enough
  };
  Code add_generic(Code a, Code b) const noexcept;
  PointIndex compute_index(Code v) const noexcept;

  std::shared_ptr<const State> s_;
};

/// Projective subspace stored as its reduced row-echelon basis, so equal
/// subspaces compare equal.
class Subspace {
 public:
  Subspace() = default;
  static Subspace from_vectors(const ProjectiveSpace& ps, std::span<const Code> vectors);
  static Subspace from_matrix(const ProjectiveSpace& ps, const Matrix& rows);
  static Subspace full(const ProjectiveSpace& ps);

  int rank() const noexcept { return static_cast<int>(rows_.size()); }
  int projdim() const noexcept { return rank() - 1; }
  bool empty() const noexcept { return rows_.empty(); }
  const std::vector<Code>& basis() const noexcept { return rows_; }
  Matrix matrix(const ProjectiveSpace& ps) const;

  bool operator==(const Subspace&) const = default;
  auto operator<=>(const Subspace&) const = default;

 private:
  std::vector<Code> rows_;
};

Subspace span(const ProjectiveSpace& ps, const Subspace& a, const Subspace& b);
Subspace meet(const ProjectiveSpace& ps, const Subspace& a, const Subspace& b);
bool contains_point(const ProjectiveSpace& ps, const Subspace& s, Code v);
bool contains(const ProjectiveSpace& ps, const Subspace& outer, const Subspace& inner);
/// All q^rank vectors of the subspace, zero first.
std::vector<Code> subspace_vectors(const ProjectiveSpace& ps, const Subspace& s);
/// Sorted point indices of the subspace.
std::vector<PointIndex> subspace_points(const ProjectiveSpace& ps, const Subspace& s);

Code apply(const ProjectiveSpace& ps, const Matrix& m, Code v);
/// Image of a point index under an invertible matrix.
PointIndex apply_point(const ProjectiveSpace& ps, const Matrix& m, PointIndex p);
Subspace apply(const ProjectiveSpace& ps, const Matrix& m, const Subspace& s);
/// Checks invertibility; throws domain on a singular matrix.
void require_invertible(const FieldTable& f, const Matrix& m);
/// apply / apply_point with an invertibility check up front.
PointIndex apply_map(const ProjectiveSpace& ps, const Matrix& m, PointIndex p);
Subspace apply_map(const ProjectiveSpace& ps, const Matrix& m, const Subspace& s);

}  // namespace polarkit
