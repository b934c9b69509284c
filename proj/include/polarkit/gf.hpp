#pragma once

// Exact arithmetic in small finite fields GF(p^e).
//
// Elements are encoded as integers in [0, p^e) whose base-p digits are the
// coefficients of the representing polynomial, constant term least
// significant. For p = 2 addition is therefore a plain XOR.

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace polarkit {

using Elem = std::uint32_t;

inline std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

class FieldTable {
 public:
  /// Builds GF(p^e). Without a modulus the built-in default for (p, e) is
  /// used, so tables are identical across runs. Throws on a reducible
  /// modulus (domain) or on p^e > 2^16 (resource).
  static FieldTable make(unsigned p, unsigned e,
                         std::optional<std::vector<Elem>> modulus = std::nullopt);

  unsigned characteristic() const noexcept { return t_->p; }
  unsigned degree() const noexcept { return t_->e; }
  Elem order() const noexcept { return t_->q; }
  /// Monic modulus, constant term first (length degree() + 1).
  const std::vector<Elem>& modulus() const noexcept { return t_->modulus; }
  Elem primitive() const noexcept { return t_->exp[1]; }

  Elem add(Elem a, Elem b) const noexcept {
    if (t_->p == 2) return a ^ b;
    return add_odd(a, b);
  }
  Elem neg(Elem a) const noexcept;
  Elem sub(Elem a, Elem b) const noexcept { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const noexcept {
    if (a == 0 || b == 0) return 0;
    return t_->exp[t_->log[a] + t_->log[b]];
  }
  Elem inv(Elem a) const;  // throws domain on 0
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t k) const noexcept;
  /// Discrete log with respect to primitive(); a must be nonzero.
  std::uint32_t log(Elem a) const noexcept { return t_->log[a]; }
  Elem exp(std::uint64_t k) const noexcept { return t_->exp[k % (t_->q - 1)]; }

  /// Unique square root in characteristic 2 (inverse Frobenius).
  Elem sqrt(Elem a) const;
  /// Absolute trace onto the prime field.
  Elem absolute_trace(Elem a) const noexcept;

  bool operator==(const FieldTable& o) const noexcept {
    return t_->p == o.t_->p && t_->modulus == o.t_->modulus;
  }

 private:
  struct Tables {
    unsigned p = 0;
    unsigned e = 0;
    Elem q = 0;
    std::vector<Elem> modulus;
    std::vector<Elem> exp;  // length 2(q-1), so exp[log a + log b] needs no reduction
    std::vector<std::uint32_t> log;
  };
  explicit FieldTable(std::shared_ptr<const Tables> t) : t_(std::move(t)) {}
  Elem add_odd(Elem a, Elem b) const noexcept;

  std::shared_ptr<const Tables> t_;
};

/// GF(q) inside GF(q^2), with the relative trace z -> z + z^q.
class SubfieldEmbedding {
 public:
  SubfieldEmbedding(FieldTable sub, FieldTable ext);

  const FieldTable& sub() const noexcept { return sub_; }
  const FieldTable& ext() const noexcept { return ext_; }

  Elem embed(Elem a) const noexcept { return embed_[a]; }
  /// Inverse of embed on its image; nullopt outside the subfield.
  std::optional<Elem> section(Elem z) const noexcept;
  Elem conjugate(Elem z) const noexcept { return ext_.pow(z, sub_.order()); }
  Elem trace(Elem z) const;

 private:
  FieldTable sub_;
  FieldTable ext_;
  std::vector<Elem> embed_;
  std::vector<std::int32_t> section_;  // -1 off the image
};

struct TraceSqrt {
  Elem trace;  // in GF(q)
  Elem sqrt;   // in GF(q^2)
};

TraceSqrt trace_and_sqrt(const SubfieldEmbedding& emb, Elem z);

/// Least element (in encoding order) of absolute trace 1, so that
/// X^2 + X + delta is irreducible. Characteristic 2 only.
Elem find_delta(const FieldTable& f);

/// Default modulus used by FieldTable::make for (p, e), constant term first.
std::vector<Elem> default_modulus(unsigned p, unsigned e);

}  // namespace polarkit
