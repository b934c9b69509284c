#include "polarkit/gf.hpp"

#include <string>

#include "polarkit/error.hpp"

namespace polarkit {
namespace {

using Poly = std::vector<Elem>;  // coefficients mod p, constant term first

bool is_prime(unsigned p) {
  if (p < 2) return false;
  for (unsigned d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Elem inv_mod_p(Elem a, unsigned p) {
  for (Elem x = 1; x < p; ++x)
    if ((a * x) % p == 1) return x;
  return 0;
}

// Remainder of a modulo b over GF(p); b nonzero.
Poly poly_mod(Poly a, const Poly& b, unsigned p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const Elem lead_inv = inv_mod_p(b.back(), p);
  while (a.size() >= b.size()) {
    const Elem c = (a.back() * lead_inv) % p;
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i)
      a[shift + i] = (a[shift + i] + p - (c * b[i]) % p) % p;
    trim(a);
  }
  return a;
}

Poly poly_from_code(std::uint64_t code, unsigned p, unsigned len) {
  Poly a(len);
  for (unsigned i = 0; i < len; ++i) {
    a[i] = static_cast<Elem>(code % p);
    code /= p;
  }
  return a;
}

Elem code_from_poly(const Poly& a, unsigned p) {
  Elem code = 0;
  for (std::size_t i = a.size(); i-- > 0;) code = code * p + a[i];
  return code;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, unsigned p) {
  Poly r(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  return poly_mod(std::move(r), m, p);
}

std::string poly_to_string(const Poly& a) {
  std::string s = "[";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a[i]);
  }
  return s + "]";
}

// Returns a monic factor of degree <= deg/2, or nullopt when m is irreducible.
std::optional<Poly> find_factor(const Poly& m, unsigned p) {
  const unsigned deg = static_cast<unsigned>(m.size() - 1);
  for (unsigned d = 1; d <= deg / 2; ++d) {
    std::uint64_t count = 1;
    for (unsigned i = 0; i < d; ++i) count *= p;
    for (std::uint64_t c = 0; c < count; ++c) {
      Poly f = poly_from_code(c, p, d);
      f.push_back(1);
      if (poly_mod(m, f, p).empty()) return f;
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<Elem> default_modulus(unsigned p, unsigned e) {
  if (p == 2) {
    switch (e) {
      case 1: return {0, 1};
      case 2: return {1, 1, 1};
      case 3: return {1, 1, 0, 1};
      case 4: return {1, 1, 0, 0, 1};
      case 5: return {1, 0, 1, 0, 0, 1};
      case 6: return {1, 1, 0, 0, 0, 0, 1};
      case 7: return {1, 1, 0, 0, 0, 0, 0, 1};
      case 8: return {1, 0, 1, 1, 1, 0, 0, 0, 1};
      default: break;
    }
  }
  if (e == 1) return {0, 1};
  // Odd characteristic: least monic irreducible in encoding order.
  std::uint64_t count = 1;
  for (unsigned i = 0; i < e; ++i) count *= p;
  for (std::uint64_t c = 0; c < count; ++c) {
    Poly m = poly_from_code(c, p, e);
    m.push_back(1);
    if (m[0] != 0 && !find_factor(m, p)) return m;
  }
  fail(ErrorKind::internal, "no irreducible polynomial found");
}

FieldTable FieldTable::make(unsigned p, unsigned e, std::optional<std::vector<Elem>> modulus) {
  require(is_prime(p), ErrorKind::usage, "characteristic " + std::to_string(p) + " is not prime");
  require(e >= 1 && e <= 8, ErrorKind::resource, "extension degree must be in [1, 8]");
  std::uint64_t q = 1;
  for (unsigned i = 0; i < e; ++i) q *= p;
  require(q <= (1u << 16), ErrorKind::resource, "field order exceeds 2^16");

  Poly m = modulus ? *modulus : default_modulus(p, e);
  require(m.size() == e + 1 && m.back() == 1, ErrorKind::usage,
          "modulus must be monic of degree " + std::to_string(e));
  for (Elem c : m) require(c < p, ErrorKind::usage, "modulus coefficient out of range");
  if (e > 1) {
    require(m[0] != 0, ErrorKind::domain, "modulus " + poly_to_string(m) + " has root 0");
    if (auto f = find_factor(m, p))
      fail(ErrorKind::domain,
           "modulus " + poly_to_string(m) + " is reducible, factor " + poly_to_string(*f));
  }

  auto t = std::make_shared<Tables>();
  t->p = p;
  t->e = e;
  t->q = static_cast<Elem>(q);
  t->modulus = m;

  // Least element of multiplicative order q - 1.
  const Elem qm1 = t->q - 1;
  std::vector<Elem> powers;
  for (Elem g = 1; g < t->q; ++g) {
    const Poly gp = poly_from_code(g, p, e);
    powers.assign(1, 1);
    Poly cur = poly_from_code(1, p, e);
    bool primitive = true;
    for (Elem k = 1; k < qm1; ++k) {
      cur = poly_mulmod(cur, gp, m, p);
      cur.resize(e, 0);
      const Elem c = code_from_poly(cur, p);
      if (c == 1) {
        primitive = false;
        break;
      }
      powers.push_back(c);
    }
    if (primitive || qm1 == 1) break;
  }
  t->exp.resize(2 * static_cast<std::size_t>(qm1));
  t->log.assign(t->q, 0);
  for (Elem k = 0; k < qm1; ++k) {
    t->exp[k] = t->exp[k + qm1] = powers[k];
    t->log[powers[k]] = k;
  }
  return FieldTable(std::move(t));
}

Elem FieldTable::add_odd(Elem a, Elem b) const noexcept {
  const unsigned p = t_->p;
  Elem r = 0, scale = 1;
  for (unsigned i = 0; i < t_->e; ++i) {
    r += ((a % p + b % p) % p) * scale;
    a /= p;
    b /= p;
    scale *= p;
  }
  return r;
}

Elem FieldTable::neg(Elem a) const noexcept {
  const unsigned p = t_->p;
  if (p == 2) return a;
  Elem r = 0, scale = 1;
  for (unsigned i = 0; i < t_->e; ++i) {
    r += ((p - a % p) % p) * scale;
    a /= p;
    scale *= p;
  }
  return r;
}

Elem FieldTable::inv(Elem a) const {
  require(a != 0, ErrorKind::domain, "inverse of zero");
  const Elem qm1 = t_->q - 1;
  return t_->exp[(qm1 - t_->log[a]) % qm1];
}

Elem FieldTable::pow(Elem a, std::uint64_t k) const noexcept {
  if (k == 0) return 1;
  if (a == 0) return 0;
  const std::uint64_t qm1 = t_->q - 1;
  return t_->exp[(static_cast<std::uint64_t>(t_->log[a]) * (k % qm1)) % qm1];
}

Elem FieldTable::sqrt(Elem a) const {
  require(t_->p == 2, ErrorKind::usage, "square roots are only provided in characteristic 2");
  // x -> x^(q/2) inverts the Frobenius on GF(2^e).
  return pow(a, t_->q / 2);
}

Elem FieldTable::absolute_trace(Elem a) const noexcept {
  Elem t = 0, x = a;
  for (unsigned i = 0; i < t_->e; ++i) {
    t = add(t, x);
    x = pow(x, t_->p);
  }
  return t;
}

SubfieldEmbedding::SubfieldEmbedding(FieldTable sub, FieldTable ext)
    : sub_(std::move(sub)), ext_(std::move(ext)) {
  require(sub_.characteristic() == ext_.characteristic() && ext_.degree() == 2 * sub_.degree(),
          ErrorKind::usage, "extension must be quadratic over the subfield");
  const unsigned p = sub_.characteristic();
  const auto& m = sub_.modulus();
  // beta: least root in ext of the subfield modulus; X -> beta gives the embedding.
  Elem beta = 0;
  bool found = false;
  for (Elem z = 0; z < ext_.order() && !found; ++z) {
    Elem v = 0;
    for (std::size_t i = m.size(); i-- > 0;) {
      // coefficients are prime-field digits, which embed as themselves.
      v = ext_.add(ext_.mul(v, z), m[i]);
    }
    if (v == 0) {
      beta = z;
      found = true;
    }
  }
  require(found, ErrorKind::internal, "subfield modulus has no root in the extension");

  embed_.resize(sub_.order());
  section_.assign(ext_.order(), -1);
  for (Elem a = 0; a < sub_.order(); ++a) {
    Elem v = 0, bp = 1, x = a;
    for (unsigned i = 0; i < sub_.degree(); ++i) {
      v = ext_.add(v, ext_.mul(x % p, bp));
      bp = ext_.mul(bp, beta);
      x /= p;
    }
    embed_[a] = v;
    require(section_[v] < 0, ErrorKind::internal, "subfield embedding is not injective");
    section_[v] = static_cast<std::int32_t>(a);
  }
  for (Elem a = 0; a < sub_.order(); ++a)
    for (Elem b = 0; b < sub_.order(); ++b)
      require(embed_[sub_.mul(a, b)] == ext_.mul(embed_[a], embed_[b]) &&
                  embed_[sub_.add(a, b)] == ext_.add(embed_[a], embed_[b]),
              ErrorKind::internal, "subfield embedding is not a homomorphism");
  for (Elem z = 0; z < ext_.order(); ++z)
    require(section_[ext_.add(z, conjugate(z))] >= 0, ErrorKind::internal,
            "relative trace leaves the subfield");
}

std::optional<Elem> SubfieldEmbedding::section(Elem z) const noexcept {
  if (section_[z] < 0) return std::nullopt;
  return static_cast<Elem>(section_[z]);
}

Elem SubfieldEmbedding::trace(Elem z) const {
  return static_cast<Elem>(section_[ext_.add(z, conjugate(z))]);
}

TraceSqrt trace_and_sqrt(const SubfieldEmbedding& emb, Elem z) {
  return {emb.trace(z), emb.ext().sqrt(z)};
}

Elem find_delta(const FieldTable& f) {
  require(f.characteristic() == 2, ErrorKind::usage, "find_delta needs characteristic 2");
  for (Elem d = 0; d < f.order(); ++d)
    if (f.absolute_trace(d) == 1) return d;
  fail(ErrorKind::internal, "no element of trace 1");
}

}  // namespace polarkit
