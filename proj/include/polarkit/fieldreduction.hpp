#pragma once

// Field reduction GF(q^2)^(2n) -> GF(q)^(4n) and the lift of Sp(2n, q^2)
// into the stabilizer of the elliptic frame quadric on PG(4n+1, q).
//
// Coordinates of V' = GF(q)^(4n) are interleaved: x_i = a_i + b_i xi becomes
// (..., a_i, b_i, ...). The frame coordinates are (x0, y_1 .. y_4n, z) and
// y = C^-1 y' where C puts the trace form into standard symplectic shape.

#include <cstdint>
#include <vector>

#include "polarkit/gf.hpp"
#include "polarkit/projspace.hpp"
#include "polarkit/quadforms.hpp"

namespace polarkit {

/// Standard alternating Gram with hyperbolic pairs (0,1), (2,3), ...
Matrix standard_symplectic(int dim);

/// C with C^T g C standard; columns are e1, f1, e2, f2, ... found greedily.
Matrix symplectic_basis(const FieldTable& f, const Matrix& g);

class BlowupContext {
 public:
  BlowupContext(int n, const FieldTable& sub);

  int n() const noexcept { return n_; }
  const SubfieldEmbedding& emb() const noexcept { return emb_; }
  const FieldTable& sub() const noexcept { return emb_.sub(); }
  const FieldTable& ext() const noexcept { return emb_.ext(); }
  Elem xi() const noexcept { return xi_; }
  Elem delta() const noexcept { return delta_; }
  /// Alternating Gram over GF(q^2) on 2n coordinates.
  const Matrix& k() const noexcept { return k_; }
  /// Trace form T(k) over GF(q) on 4n coordinates.
  const Matrix& kprime() const noexcept { return kprime_; }
  const Matrix& c() const noexcept { return c_; }
  const Matrix& c_inv() const noexcept { return c_inv_; }

  /// GF(q)-coordinates (a, b) of z = a + b xi.
  std::pair<Elem, Elem> split(Elem z) const noexcept { return split_[z]; }
  /// Interleaved V' vector of an ext vector.
  std::vector<Elem> flatten(std::span<const Elem> x) const;

  /// PG(2n-1, q^2), PG(4n-1, q) and the frame space PG(4n+1, q).
  const ProjectiveSpace& ext_space() const noexcept { return ext_ps_; }
  const ProjectiveSpace& red_space() const noexcept { return red_ps_; }
  const ProjectiveSpace& frame_space() const noexcept { return frame_ps_; }
  /// Frame form x0^2 + x0 z + delta z^2 + f(y).
  const QuadraticForm& frame_form() const noexcept { return frame_; }

  /// Line of PG(4n-1, q) spanned by P and xi P (V' coordinates).
  Subspace blowup(Code ext_point) const;
  /// The GF(q)-matrix of an ext-linear map, in V' coordinates.
  Matrix blowup(const Matrix& g) const;
  /// C^-1 blowup(g) C: the same map on y-coordinates.
  Matrix reduce_to_y(const Matrix& g) const;

 private:
  int n_;
  SubfieldEmbedding emb_;
  Elem xi_ = 0;
  Elem delta_ = 0;
  std::vector<std::pair<Elem, Elem>> split_;
  Matrix k_, kprime_, c_, c_inv_;
  ProjectiveSpace ext_ps_, red_ps_, frame_ps_;
  QuadraticForm frame_;
};

/// One spread line per point of PG(2n-1, q^2), in that point order.
/// Disjointness and covering are checked; failure is an internal error.
std::vector<Subspace> spread_build(const BlowupContext& ctx);

/// Spread lines moved to y-coordinates and lifted into the section
/// x0^2 + f(y) of Sigma (frame coordinates).
std::vector<Subspace> spread_in_frame(const BlowupContext& ctx, const std::vector<Subspace>& spread);

/// Transvections x -> x + lambda k(x, v) v over GF(q^2) for v in
/// {e_i} and {e_i + e_j}, lambda over the polynomial basis of GF(q^2) over GF(2).
std::vector<Matrix> sp_generators(const BlowupContext& ctx);

/// Odd-order products t_h t_b of those transvections generating the same
/// group. Every b is paired with the first hub t_(e_i, 1) not orthogonal to
/// it, and the hubs are linked to t_(e_0, 1) through odd-order products.
std::vector<Matrix> odd_generators(const BlowupContext& ctx);

/// Multiplicative order of an invertible matrix (throws past `cap`).
std::uint64_t matrix_order(const FieldTable& f, const Matrix& m, std::uint64_t cap = 1u << 20);

/// (x0, y) -> (x0 + theta(y), s y) on 4n+1 coordinates.
Matrix lift_parabolic(const BlowupContext& ctx, const Matrix& s);

struct LiftedIsometry {
  Matrix m;       // frame matrix, (4n+2) square
  Matrix source;  // over GF(q^2); empty when lifted from a bare s
  Matrix s;       // on y-coordinates over GF(q)
  std::vector<Elem> theta;
  std::vector<Elem> v;
  Elem gamma = 0;
};

/// Extends s-hat to (x0, y, z) -> (x0 + theta(y) + gamma z, s y + z v, z)
/// with the least gamma. Throws internal if F is not preserved exactly.
LiftedIsometry extend_elliptic(const BlowupContext& ctx, const Matrix& s);

/// Lift of an element of odd order r: of the two extensions M and tau M
/// exactly one satisfies M^r = 1, and that one is returned.
LiftedIsometry lift_odd(const BlowupContext& ctx, const Matrix& g);

/// lift_odd over odd_generators.
std::vector<LiftedIsometry> lifted_generators(const BlowupContext& ctx);

/// x0 -> x0 + z on the frame.
Matrix frame_tau(const BlowupContext& ctx);

}  // namespace polarkit
