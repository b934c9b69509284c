#include "polarkit/polarspace.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "polarkit/error.hpp"
#include "polarkit/parallel.hpp"

namespace polarkit {

PointSet PointSet::from(std::vector<PointIndex> idx) {
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  PointSet s;
  s.idx_ = std::move(idx);
  return s;
}

bool PointSet::contains(PointIndex p) const { return std::binary_search(idx_.begin(), idx_.end(), p); }

std::vector<std::uint8_t> PointSet::bitmap(std::size_t ambient) const {
  std::vector<std::uint8_t> b(ambient, 0);
  for (PointIndex p : idx_) {
    require(p < ambient, ErrorKind::usage, "point index out of range");
    b[p] = 1;
  }
  return b;
}

PointSet set_union(const PointSet& a, const PointSet& b) {
  std::vector<PointIndex> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return PointSet::from(std::move(out));
}

PointSet set_intersection(const PointSet& a, const PointSet& b) {
  std::vector<PointIndex> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return PointSet::from(std::move(out));
}

PointSet set_difference(const PointSet& a, const PointSet& b) {
  std::vector<PointIndex> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return PointSet::from(std::move(out));
}

PolarSpace::PolarSpace(ProjectiveSpace ps, std::optional<QuadraticForm> q, BilinearForm b)
    : ps_(std::move(ps)), form_(std::move(q)), b_(std::move(b)) {}

PolarSpace PolarSpace::quadric(ProjectiveSpace ps, QuadraticForm q, std::optional<Subspace> sigma) {
  require(q.ncoords() == ps.ncoords(), ErrorKind::usage, "form and space dimensions differ");
  BilinearForm b = q.polar();
  PolarSpace p(std::move(ps), std::move(q), std::move(b));
  p.cls_ = classify_quadric(*p.form_);
  p.build(std::move(sigma));
  return p;
}

PolarSpace PolarSpace::symplectic(ProjectiveSpace ps, BilinearForm b) {
  require(b.ncoords() == ps.ncoords(), ErrorKind::usage, "form and space dimensions differ");
  require(b.is_alternating() && b.is_nondegenerate(), ErrorKind::domain,
          "symplectic space needs a nondegenerate alternating form");
  PolarSpace p(std::move(ps), std::nullopt, std::move(b));
  p.cls_.ncoords = p.ps_.ncoords();
  p.cls_.witt_index = p.ps_.ncoords() / 2;
  p.build(std::nullopt);
  return p;
}

const QuadraticForm& PolarSpace::form() const {
  require(form_.has_value(), ErrorKind::usage, "symplectic space has no quadratic form");
  return *form_;
}

bool PolarSpace::singular(Code v) const { return form_ ? form_->eval(ps_, v) == 0 : true; }

void PolarSpace::build(std::optional<Subspace> sigma) {
  const std::size_t np = ps_.num_points();
  pv_.resize(np);
  on_.assign(np, 0);
  std::vector<PointIndex> pts;
  for (PointIndex i = 0; i < np; ++i) {
    const Code v = ps_.point(i);
    pv_[i] = b_.polar_vector(ps_, v);
    if (singular(v)) {
      on_[i] = 1;
      pts.push_back(i);
    }
  }
  points_ = PointSet::from(std::move(pts));
  in_sigma_.assign(np, 0);
  off_ = points_;
  if (!sigma) return;

  require(sigma->rank() == ps_.ncoords() - 1, ErrorKind::usage, "Sigma must be a hyperplane");
  require(b_.is_nondegenerate(), ErrorKind::domain, "Sigma needs a nondegenerate ambient form");
  const Subspace n = perp_of(ps_, *sigma, b_);
  nucleus_ = n.basis().front();
  nucleus_ = ps_.normalize(nucleus_);
  const auto& f = ps_.field();
  const Elem qn = form_->eval(ps_, nucleus_);
  require(qn != 0, ErrorKind::domain, "Sigma is tangent to the quadric");
  require(contains_point(ps_, *sigma, nucleus_), ErrorKind::domain, "Sigma^perp does not lie in Sigma");
  sigma_ = std::move(sigma);

  std::vector<PointIndex> off, sec;
  for (PointIndex i : subspace_points(ps_, *sigma_)) in_sigma_[i] = 1;
  for (PointIndex i : points_) (in_sigma_[i] ? sec : off).push_back(i);
  off_ = PointSet::from(std::move(off));
  section_ = PointSet::from(std::move(sec));

  const int nc = ps_.ncoords();
  const Code gn = b_.polar_vector(ps_, nucleus_);
  const Elem c = f.inv(qn);
  tau_ = Matrix::identity(nc);
  for (int i = 0; i < nc; ++i)
    for (int j = 0; j < nc; ++j)
      tau_(i, j) = f.add(tau_(i, j), f.mul(c, f.mul(ps_.coord(nucleus_, i), ps_.coord(gn, j))));
}

const Subspace& PolarSpace::sigma() const {
  require(sigma_.has_value(), ErrorKind::usage, "polar space has no distinguished hyperplane");
  return *sigma_;
}

Code PolarSpace::nucleus() const {
  require(sigma_.has_value(), ErrorKind::usage, "polar space has no distinguished hyperplane");
  return nucleus_;
}

PointIndex PolarSpace::nucleus_index() const { return ps_.index_of(nucleus()); }

const Matrix& PolarSpace::tau() const {
  require(sigma_.has_value(), ErrorKind::usage, "tau needs a distinguished hyperplane");
  return tau_;
}

PointIndex PolarSpace::tau_point(PointIndex p) const { return ps_.index_of(apply(ps_, tau(), ps_.point(p))); }

PointSet quadric_points(const PolarSpace& p) { return p.points(); }

Subspace coordinate_hyperplane(const ProjectiveSpace& ps, int coord) {
  std::vector<Code> rows;
  for (int i = 0; i < ps.ncoords(); ++i)
    if (i != coord) rows.push_back(ps.set_coord(0, i, 1));
  return Subspace::from_vectors(ps, rows);
}

PolarSpace frame_space(const FieldTable& f, int pairs, Elem delta, bool elliptic_block) {
  ProjectiveSpace ps(2 * pairs + 1, f);
  Subspace sigma = coordinate_hyperplane(ps, 2 * pairs + 1);
  return PolarSpace::quadric(std::move(ps), frame_form(f, pairs, delta, elliptic_block), std::move(sigma));
}

std::size_t GeneratorList::count_off_sigma() const {
  return static_cast<std::size_t>(std::count(in_sigma.begin(), in_sigma.end(), 0));
}

namespace {

std::uint64_t prod_plus_one(std::uint64_t q, int lo, int hi) {
  std::uint64_t r = 1;
  for (int i = lo; i <= hi; ++i) r *= ipow(q, i) + 1;
  return r;
}

}  // namespace

std::optional<std::uint64_t> expected_generator_count(const PolarSpace& p) {
  const std::uint64_t q = p.ps().q();
  const int nc = p.ps().ncoords();
  if (p.is_symplectic()) return prod_plus_one(q, 1, nc / 2);
  switch (p.cls().family) {
    case Family::elliptic: return prod_plus_one(q, 2, nc / 2);
    case Family::hyperbolic: return prod_plus_one(q, 0, nc / 2 - 1);
    case Family::parabolic: return prod_plus_one(q, 1, (nc - 1) / 2);
    case Family::cone: return std::nullopt;
  }
  return std::nullopt;
}

std::uint64_t expected_off_sigma_count(const PolarSpace& p) {
  require(!p.is_symplectic() && p.cls().family == Family::elliptic, ErrorKind::usage,
          "off-Sigma generator count is defined for elliptic quadrics");
  const std::uint64_t q = p.ps().q();
  const int n = p.ps().ncoords() / 2 - 1;
  return q * (ipow(q, n) - 1) * prod_plus_one(q, 2, n);
}

namespace {

// Depth-first search over canonical chains P1 < P2 < ... where each Pk is the
// least point of <P1..Pk> outside <P1..P(k-1)>. Every generator has exactly
// one such chain.
class GeneratorSearch {
 public:
  GeneratorSearch(const PolarSpace& p, std::vector<Subspace>& out)
      : p_(p), ps_(p.ps()), out_(out), mark_(ps_.num_points(), 0) {}

  void run_from(PointIndex first, const std::vector<PointIndex>& all) {
    std::vector<Code> vecs{0};
    std::vector<Code> basis;
    extend(first, all, vecs, basis);
  }

 private:
  void extend(PointIndex pi, const std::vector<PointIndex>& cand, const std::vector<Code>& vecs,
              std::vector<Code>& basis) {
    const Code pv = ps_.point(pi);
    // New points of <S, P>: normalize(P + s) for s in S; all must exceed P.
    std::vector<PointIndex> fresh;
    fresh.reserve(vecs.size());
    for (Code s : vecs) {
      const PointIndex j = ps_.index_of(ps_.add(pv, s));
      if (j < pi) return;
      fresh.push_back(j);
    }
    basis.push_back(pv);
    if (static_cast<int>(basis.size()) == p_.rank()) {
      out_.push_back(Subspace::from_vectors(ps_, basis));
      basis.pop_back();
      return;
    }
    for (PointIndex j : fresh) mark_[j] = 1;
    std::vector<Code> nvecs;
    nvecs.reserve(vecs.size() * ps_.q());
    for (Elem c = 0; c < ps_.q(); ++c) {
      const Code cp = ps_.scale(c, pv);
      for (Code s : vecs) nvecs.push_back(ps_.add(s, cp));
    }
    std::vector<PointIndex> next;
    for (PointIndex j : cand)
      if (j > pi && !mark_[j] && p_.orth(pi, j)) next.push_back(j);
    for (PointIndex j : next) extend(j, next, nvecs, basis);
    for (PointIndex j : fresh) mark_[j] = 0;
    basis.pop_back();
  }

  const PolarSpace& p_;
  const ProjectiveSpace& ps_;
  std::vector<Subspace>& out_;
  std::vector<std::uint8_t> mark_;
};

void flag_sigma(const PolarSpace& p, GeneratorList& g) {
  g.in_sigma.assign(g.gens.size(), 0);
  if (!p.has_sigma()) return;
  for (std::size_t i = 0; i < g.gens.size(); ++i)
    g.in_sigma[i] = contains(p.ps(), p.sigma(), g.gens[i]) ? 1 : 0;
}

}  // namespace

GeneratorList enumerate_generators(const PolarSpace& p) {
  const auto expected = expected_generator_count(p);
  require(expected.has_value(), ErrorKind::domain, "generator enumeration needs a nondegenerate space");
  require(*expected <= kMaxGenerators, ErrorKind::resource,
          "space has " + std::to_string(*expected) + " generators, above the cap of 10^7");

  const auto& all = p.points().indices();
  std::vector<std::vector<Subspace>> parts(all.size());
  parallel_chunks(all.size(), all.size(), [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t i = b; i < e; ++i) {
      GeneratorSearch search(p, parts[i]);
      // Candidates for P1 = all; P2 onward are filtered inside.
      search.run_from(all[i], all);
    }
  });
  GeneratorList g;
  for (auto& part : parts)
    for (auto& s : part) g.gens.push_back(std::move(s));
  std::sort(g.gens.begin(), g.gens.end());
  require(std::adjacent_find(g.gens.begin(), g.gens.end()) == g.gens.end(), ErrorKind::internal,
          "duplicate generator in enumeration");
  require(g.gens.size() == *expected, ErrorKind::internal,
          "enumerated " + std::to_string(g.gens.size()) + " generators, expected " +
              std::to_string(*expected));
  flag_sigma(p, g);
  return g;
}

GeneratorList sample_generators(const PolarSpace& p, std::size_t count, std::uint64_t seed) {
  require(p.has_sigma(), ErrorKind::usage, "sampling needs a distinguished hyperplane");
  const auto& ps = p.ps();
  const auto& off = p.off_points().indices();
  require(!off.empty(), ErrorKind::domain, "no points off Sigma");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, off.size() - 1);
  std::uniform_int_distribution<Elem> coef(0, ps.q() - 1);

  GeneratorList g;
  g.sampled = true;
  g.sample_seed = seed;
  g.gens.reserve(count);
  for (std::size_t t = 0; t < count; ++t) {
    std::vector<Code> basis{ps.point(off[pick(rng)])};
    Subspace s = Subspace::from_vectors(ps, basis);
    while (s.rank() < p.rank()) {
      const Subspace perp = perp_of(ps, s, p.bilinear());
      for (;;) {
        Code v = 0;
        for (Code row : perp.basis()) v = ps.add(v, ps.scale(coef(rng), row));
        if (v == 0 || !p.singular(v) || contains_point(ps, s, v)) continue;
        basis.push_back(v);
        break;
      }
      s = Subspace::from_vectors(ps, basis);
    }
    g.gens.push_back(std::move(s));
  }
  flag_sigma(p, g);
  return g;
}

SecantData nucleus_secants(const PolarSpace& p) {
  const auto& ps = p.ps();
  const Code n = p.nucleus();
  const PointIndex ni = ps.index_of(n);
  SecantData d;
  d.line_of.assign(ps.num_points(), SecantData::npos);
  for (PointIndex a : p.off_points()) {
    if (d.line_of[a] != SecantData::npos) continue;
    const PointIndex b = p.tau_point(a);
    require(b != a && p.on_space(b) && !p.on_sigma(b), ErrorKind::internal,
            "tau does not pair off-Sigma points");
    const std::vector<Code> span2{n, ps.point(a)};
    Subspace line = Subspace::from_vectors(ps, span2);
    std::vector<PointIndex> sing;
    for (PointIndex x : subspace_points(ps, line))
      if (x != ni && p.on_space(x)) sing.push_back(x);
    require(sing.size() == 2 && sing[0] == std::min(a, b) && sing[1] == std::max(a, b),
            ErrorKind::internal, "nucleus line is not a secant through the tau pair");
    const auto li = static_cast<PointIndex>(d.lines.size());
    d.line_of[a] = d.line_of[b] = li;
    d.lines.push_back(std::move(line));
    d.pairs.push_back({std::min(a, b), std::max(a, b)});
  }
  return d;
}

namespace {

// Lift a radical given in the coordinates of `h`'s basis back to the ambient.
Subspace lift_from(const ProjectiveSpace& ps, const Subspace& h, const Subspace& local) {
  const auto& hb = h.basis();
  const auto q = static_cast<Code>(ps.q());
  std::vector<Code> out;
  for (Code c : local.basis()) {
    Code v = 0, rest = c;
    for (Code row : hb) {
      v = ps.add(v, ps.scale(static_cast<Elem>(rest % q), row));
      rest /= q;
    }
    out.push_back(v);
  }
  return Subspace::from_vectors(ps, out);
}

}  // namespace

SectionInfo section_classify(const PolarSpace& p, const Subspace& h) {
  const auto& ps = p.ps();
  require(h.rank() == ps.ncoords() - 1, ErrorKind::usage, "section_classify needs a hyperplane");
  require(!(p.has_sigma() && h == p.sigma()), ErrorKind::usage, "H must differ from Sigma");
  const auto& q = p.form();
  SectionInfo info;
  const Subspace x = perp_of(ps, h, p.bilinear());
  const Code xv = x.basis().front();
  info.tangent = q.eval(ps, xv) == 0;
  if (info.tangent) info.tangent_point = ps.index_of(xv);
  info.hyperplane_section = classify_quadric(q.restrict_to(ps, h));
  if (p.has_sigma()) {
    const Subspace hs = meet(ps, h, p.sigma());
    auto cls = classify_quadric(q.restrict_to(ps, hs));
    if (!cls.radical.empty()) info.vertex = lift_from(ps, hs, cls.radical);
    info.sigma_section = std::move(cls);
  }
  return info;
}

std::vector<int> generator_counts(const PolarSpace& p, const GeneratorList& gens, const PointSet& x) {
  const auto bm = x.bitmap(p.ps().num_points());
  std::vector<int> counts(gens.size());
  parallel_chunks(gens.size(), kDefaultChunks, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t i = b; i < e; ++i) {
      int c = 0;
      for (PointIndex pt : subspace_points(p.ps(), gens.gens[i])) c += bm[pt];
      counts[i] = c;
    }
  });
  return counts;
}

MovoidReport relative_movoid_check(const PolarSpace& p, const GeneratorList& gens, const PointSet& r) {
  require(p.has_sigma(), ErrorKind::usage, "relative m-ovoids need a distinguished hyperplane");
  for (PointIndex x : r)
    require(x < p.ps().num_points() && p.on_space(x) && !p.on_sigma(x), ErrorKind::usage,
            "point " + std::to_string(x) + " is not an off-Sigma point of the space");
  MovoidReport rep;
  rep.size = r.size();
  rep.sampled = gens.sampled;
  const auto counts = generator_counts(p, gens, r);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (gens.in_sigma[i]) continue;
    ++rep.generators_checked;
    if (!rep.m) rep.m = counts[i];
    else if (counts[i] != *rep.m && rep.violations.size() < kMaxWitnesses)
      rep.violations.emplace_back(i, counts[i]);
  }
  bool uniform = rep.violations.empty();
  if (!uniform) rep.m.reset();
  if (rep.m && !p.is_symplectic() && p.cls().family == Family::elliptic) {
    const std::uint64_t q = p.ps().q();
    const int n = p.ps().ncoords() / 2 - 1;
    rep.expected_size = static_cast<std::size_t>(*rep.m) * q * (ipow(q, n) - 1);
  } else {
    rep.expected_size = r.size();
  }
  rep.size_ok = rep.expected_size == rep.size;
  rep.pass = uniform && rep.m.has_value() && rep.size_ok;
  return rep;
}

LemmaAudit lemma_pre_audit(const PolarSpace& p, const GeneratorList& gens, const PointSet& r, int m) {
  require(p.has_sigma() && !p.is_symplectic() && p.cls().family == Family::elliptic, ErrorKind::usage,
          "the audit runs on an elliptic quadric with a distinguished hyperplane");
  const auto& ps = p.ps();
  const long q = ps.q();
  const int n = ps.ncoords() / 2 - 1;
  const long qn = static_cast<long>(ipow(q, n));
  LemmaAudit a;
  a.expected = {m * (qn + 1), m * (qn - 1), m * qn, m * (qn + 1) - qn, m * (qn + 1), m * (qn - q)};

  const auto mv = relative_movoid_check(p, gens, r);
  a.m_confirmed = mv.pass && mv.m && *mv.m == m;
  if (!a.m_confirmed)
    a.witnesses.push_back("generator check does not confirm m = " + std::to_string(m));

  const auto in_r = r.bitmap(ps.num_points());
  auto count_perp = [&](PointIndex x) {
    long c = 0;
    for (PointIndex y : r) c += p.orth(x, y);
    return c;
  };

  // Per part: value -> (occurrences, first witness).
  using Tally = std::map<long, std::pair<std::size_t, PointIndex>>;
  std::array<Tally, 6> tally;
  const PointIndex ni = p.nucleus_index();
  const std::size_t np = ps.num_points();

  std::vector<std::array<Tally, 6>> partial(kDefaultChunks);
  parallel_chunks(np, kDefaultChunks, [&](std::size_t b, std::size_t e, std::size_t chunk) {
    auto& t = partial[chunk];
    for (std::size_t i = b; i < e; ++i) {
      const auto x = static_cast<PointIndex>(i);
      const long c = count_perp(x);
      int part = -1;
      if (p.on_space(x)) {
        part = in_r[x] ? 3 : (p.on_sigma(x) ? 5 : 4);
      } else if (x != ni) {
        // x^perp is a nontangent hyperplane other than Sigma.
        const std::vector<Code> xs{ps.point(x)};
        const Subspace h = perp_of(ps, Subspace::from_vectors(ps, xs), p.bilinear());
        const auto info = section_classify(p, h);
        switch (info.sigma_section->family) {
          case Family::elliptic: part = 0; break;
          case Family::hyperbolic: part = 1; break;
          default: part = 2; break;
        }
      }
      if (part < 0) continue;
      auto [it, fresh] = t[part].try_emplace(c, 0, x);
      ++it->second.first;
    }
  });
  for (const auto& t : partial)
    for (int k = 0; k < 6; ++k)
      for (const auto& [val, occ] : t[k]) {
        auto [it, fresh] = tally[k].try_emplace(val, 0, occ.second);
        it->second.first += occ.first;
        if (!fresh) it->second.second = std::min(it->second.second, occ.second);
      }

  static const char* names = "abcdef";
  a.pass = a.m_confirmed;
  for (int k = 0; k < 6; ++k) {
    std::size_t cases = 0;
    for (const auto& [val, occ] : tally[k]) cases += occ.first;
    a.cases[k] = cases;
    if (tally[k].size() == 1) a.observed[k] = tally[k].begin()->first;
    a.ok[k] = cases == 0 || (a.observed[k] && *a.observed[k] == a.expected[k]);
    if (!a.ok[k]) {
      for (const auto& [val, occ] : tally[k])
        if (val != a.expected[k] && a.witnesses.size() < kMaxWitnesses)
          a.witnesses.push_back(std::string("part ") + names[k] + ": point " +
                                std::to_string(occ.second) + " gives " + std::to_string(val) +
                                ", expected " + std::to_string(a.expected[k]));
    }
    a.pass = a.pass && a.ok[k];
  }
  return a;
}

}  // namespace polarkit
