#include "polarkit/certificate.hpp"

#include <bit>
#include <regex>

#include "polarkit/error.hpp"

namespace polarkit {

namespace {

std::string coords_str(const ProjectiveSpace& ps, PointIndex p) {
  std::string s = "(";
  const auto c = ps.decode(ps.point(p));
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s + ")";
}

Json code_json(const ProjectiveSpace& ps, Code v) { return Json(ps.decode(v)); }

Code code_from_json(const ProjectiveSpace& ps, const Json& j) {
  require(j.is_array() && static_cast<int>(j.size()) == ps.ncoords(), ErrorKind::verification,
          "coordinate list of the wrong length");
  std::vector<Elem> x;
  for (const auto& e : j) {
    const auto v = e.get<long long>();
    require(v >= 0 && v < static_cast<long long>(ps.q()), ErrorKind::verification,
            "coordinate outside the field");
    x.push_back(static_cast<Elem>(v));
  }
  return ps.encode(x);
}

Json violations_json(const MovoidReport& r) {
  Json a = Json::array();
  for (auto [g, c] : r.violations) a.push_back({g, c});
  return a;
}

void movoid_witnesses(const MovoidReport& r, const std::string& what, std::vector<std::string>& w) {
  for (auto [g, c] : r.violations)
    w.push_back("generator #" + std::to_string(g) + " meets " + what + " in " + std::to_string(c) + " points");
  if (!r.size_ok)
    w.push_back(what + " has " + std::to_string(r.size) + " points, expected " + std::to_string(r.expected_size));
}

template <class M>
Json map_json(const M& m) {
  Json a = Json::array();
  for (const auto& [k, v] : m) a.push_back({k, v});
  return a;
}

Json opt_json(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

std::vector<PointSet> sets_from_json(const ProjectiveSpace& ps, const Json& j) {
  std::vector<PointSet> out;
  for (const auto& s : j) out.push_back(points_from_json(ps, s));
  return out;
}

Json sets_json(const ProjectiveSpace& ps, const std::vector<PointSet>& sets) {
  Json a = Json::array();
  for (const auto& s : sets) a.push_back(points_json(ps, s));
  return a;
}

int hemisystem_m(const PolarSpace& p) {
  const int n = p.ps().ncoords() / 2 - 1;
  return static_cast<int>(ipow(p.ps().q(), n - 1) / 2);
}

}  // namespace

Json field_json(const FieldTable& f) {
  return Json{{"p", f.characteristic()}, {"e", f.degree()}, {"modulus", f.modulus()}};
}

FieldTable field_from_json(const Json& j) {
  return FieldTable::make(j.at("p").get<unsigned>(), j.at("e").get<unsigned>(),
                          j.at("modulus").get<std::vector<Elem>>());
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows; ++r) {
    std::vector<Elem> row(m.a.begin() + static_cast<std::ptrdiff_t>(r) * m.cols,
                          m.a.begin() + static_cast<std::ptrdiff_t>(r + 1) * m.cols);
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const FieldTable& f) {
  require(j.is_array() && !j.empty(), ErrorKind::verification, "matrix must be a nonempty list of rows");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    require(static_cast<int>(j[r].size()) == cols, ErrorKind::verification, "ragged matrix");
    for (int c = 0; c < cols; ++c) {
      const auto v = j[r][c].get<long long>();
      require(v >= 0 && v < static_cast<long long>(f.order()), ErrorKind::verification,
              "matrix entry outside the field");
      m(r, c) = static_cast<Elem>(v);
    }
  }
  return m;
}

Json points_json(const ProjectiveSpace& ps, const PointSet& s) {
  Json a = Json::array();
  for (PointIndex p : s) a.push_back(code_json(ps, ps.point(p)));
  return a;
}

PointSet points_from_json(const ProjectiveSpace& ps, const Json& j) {
  require(j.is_array(), ErrorKind::verification, "point list must be an array");
  std::vector<PointIndex> idx;
  for (const auto& e : j) {
    const Code v = code_from_json(ps, e);
    require(v != 0, ErrorKind::verification, "zero vector in a point list");
    require(ps.normalize(v) == v, ErrorKind::verification, "point is not normalized");
    idx.push_back(ps.index_of(v));
  }
  const std::size_t n = idx.size();
  auto s = PointSet::from(std::move(idx));
  require(s.size() == n, ErrorKind::verification, "repeated point in a point list");
  return s;
}

Json frame_json(const PolarSpace& p) {
  const auto& ps = p.ps();
  Json j;
  j["ncoords"] = ps.ncoords();
  j["kind"] = p.is_symplectic() ? "symplectic" : "quadric";
  if (!p.is_symplectic()) {
    j["quadratic_form"] = matrix_json(p.form().upper());
    j["delta"] = p.form().upper()(ps.ncoords() - 1, ps.ncoords() - 1);
  }
  j["gram"] = matrix_json(p.bilinear().gram());
  if (p.has_sigma()) {
    Json rows = Json::array();
    for (Code r : p.sigma().basis()) rows.push_back(code_json(ps, r));
    j["sigma"] = rows;
    j["nucleus"] = code_json(ps, p.nucleus());
  } else {
    j["sigma"] = nullptr;
    j["nucleus"] = nullptr;
  }
  return j;
}

PolarSpace space_from_frame(const Json& frame, const FieldTable& f) {
  const int n = frame.at("ncoords").get<int>();
  require(n >= 2 && n <= kMaxCoords, ErrorKind::usage, "unsupported number of coordinates");
  const ProjectiveSpace ps(n - 1, f);
  const Matrix gram = matrix_from_json(frame.at("gram"), f);
  require(gram.rows == n && gram.cols == n, ErrorKind::verification, "Gram matrix has the wrong size");
  if (frame.at("kind") == "symplectic") return PolarSpace::symplectic(ps, BilinearForm(f, gram));
  require(frame.at("kind") == "quadric", ErrorKind::usage, "unknown frame kind");
  const QuadraticForm q(f, matrix_from_json(frame.at("quadratic_form"), f));
  require(q.ncoords() == n, ErrorKind::verification, "quadratic form has the wrong size");
  require(q.polar().gram() == gram, ErrorKind::verification, "Gram matrix is not the polar form");
  std::optional<Subspace> sigma;
  if (!frame.at("sigma").is_null()) {
    std::vector<Code> rows;
    for (const auto& r : frame.at("sigma")) rows.push_back(code_from_json(ps, r));
    sigma = Subspace::from_vectors(ps, rows);
  }
  auto p = PolarSpace::quadric(ps, q, sigma);
  if (sigma && !frame.at("nucleus").is_null())
    require(ps.normalize(code_from_json(ps, frame.at("nucleus"))) == p.nucleus(), ErrorKind::verification,
            "recorded nucleus differs from Sigma^perp");
  return p;
}

Json certificate_base(const std::string& claim, const PolarSpace& p) {
  Json j;
  j["schema"] = kSchema;
  j["claim"] = claim;
  j["field"] = field_json(p.ps().field());
  j["frame"] = frame_json(p);
  return j;
}

Json hemisystem_certificate(const HemisystemResult& r, const std::optional<LineCensus>& census,
                            std::size_t sample_count) {
  const PolarSpace& p = *r.space;
  const auto& ps = p.ps();
  Json j = certificate_base("relative_hemisystem", p);
  Json d;
  d["n"] = r.n;
  d["q"] = ps.q();
  d["seed"] = code_json(ps, ps.point(r.seed));
  Json gens = Json::array();
  for (const auto& g : r.gens) gens.push_back(matrix_json(g.m));
  d["generators"] = gens;
  d["o1"] = points_json(ps, r.o1);
  d["o1_size"] = r.o1.size();
  d["o2_size"] = r.o2.size();
  d["m"] = opt_json(r.report_o1.m);
  d["m_expected"] = r.m_expected;
  d["generators_checked"] = r.report_o1.generators_checked;
  d["sampled"] = r.generators.sampled;
  if (r.generators.sampled) {
    d["sample_seed"] = r.generators.sample_seed;
    d["sample_count"] = sample_count;
  }
  if (census)
    d["line_census"] = {{"l1", census->l1}, {"l2", census->l2}, {"l3", census->l3}, {"total", census->total}};
  else
    d["line_census"] = nullptr;
  j["data"] = d;

  std::vector<std::string> w;
  movoid_witnesses(r.report_o1, "O1", w);
  movoid_witnesses(r.report_o2, "O2", w);
  if (!r.partition_ok) w.push_back("O1 and tau(O1) do not partition the off-Sigma points");
  if (!r.partner_orbit_ok) w.push_back("the orbit of tau(seed) is not tau(O1)");
  if (census)
    for (const auto& [prof, c] : census->unexpected)
      w.push_back(std::to_string(c) + " lines with profile (" + std::to_string(prof.first) + "," +
                  std::to_string(prof.second) + ")");
  const bool pass = r.pass && (!census || census->ok);
  j["verification"] = {{"pass", pass},
                       {"counters",
                        {{"partition_ok", r.partition_ok},
                         {"partner_orbit_ok", r.partner_orbit_ok},
                         {"o1_violations", violations_json(r.report_o1)},
                         {"o2_violations", violations_json(r.report_o2)}}},
                       {"witnesses", w}};
  return j;
}

Json search_certificate(const PolarSpace& p, const SearchOutcome& s, const SearchOptions& opt,
                        bool prove_nonexistence) {
  const auto& ps = p.ps();
  Json j = certificate_base(prove_nonexistence ? "nonexistence" : "relative_m_ovoid", p);
  Json d;
  d["kind"] = "search";
  d["mode"] = "hemisystem_one_per_line";
  d["m"] = s.m;
  d["variables"] = s.variables;
  d["generators"] = s.generators;
  d["budget"] = opt.budget;
  d["search_seed"] = opt.seed ? points_json(ps, *opt.seed) : Json(nullptr);
  d["exhausted"] = s.exhausted;
  d["nodes_visited"] = s.nodes_visited;
  d["solutions"] = s.solutions;
  d["found"] = sets_json(ps, s.found);
  j["data"] = d;
  std::vector<std::string> w;
  if (!s.exhausted) w.push_back("node budget exhausted before the search completed");
  if (!s.verified) w.push_back("a found set failed re-verification");
  if (prove_nonexistence && s.solutions)
    w.push_back(std::to_string(s.solutions) + " relative hemisystems exist");
  const bool pass = s.exhausted && s.verified && (!prove_nonexistence || s.solutions == 0);
  j["verification"] = {{"pass", pass}, {"counters", {{"nodes_visited", s.nodes_visited}}}, {"witnesses", w}};
  return j;
}

Json scan_certificate(const PolarSpace& p, const ScanResult& s) {
  Json j = certificate_base("relative_m_ovoid", p);
  Json d;
  d["kind"] = "scan";
  d["mode"] = "all_subsets";
  d["subsets"] = s.subsets;
  d["census"] = map_json(s.census);
  d["m_hemisystem"] = hemisystem_m(p);
  d["proper"] = sets_json(p.ps(), s.proper);
  j["data"] = d;
  std::vector<std::string> w;
  if (!s.proper_m_ok) w.push_back("a proper example has m other than q^(n-1)/2");
  if (!s.proper_disjoint_ok) w.push_back("a proper example meets its tau image");
  j["verification"] = {{"pass", s.proper_m_ok && s.proper_disjoint_ok},
                       {"counters", {{"proper_m_ok", s.proper_m_ok}, {"proper_disjoint_ok", s.proper_disjoint_ok}}},
                       {"witnesses", w}};
  return j;
}

Json audit_certificate(const PolarSpace& p, const PointSet& r, int m, const LemmaAudit& a) {
  Json j = certificate_base("relative_m_ovoid", p);
  Json d;
  d["kind"] = "lemma_audit";
  d["m"] = m;
  d["set"] = points_json(p.ps(), r);
  Json parts = Json::array();
  for (int i = 0; i < 6; ++i)
    parts.push_back({{"part", std::string(1, static_cast<char>('a' + i))},
                     {"observed", a.observed[i] ? Json(*a.observed[i]) : Json(nullptr)},
                     {"expected", a.expected[i]},
                     {"cases", a.cases[i]},
                     {"vacuous", a.cases[i] == 0},
                     {"ok", a.ok[i]}});
  d["parts"] = parts;
  d["m_confirmed"] = a.m_confirmed;
  j["data"] = d;
  j["verification"] = {{"pass", a.pass}, {"counters", {{"m_confirmed", a.m_confirmed}}}, {"witnesses", a.witnesses}};
  return j;
}

Json ovoid_certificate(const MixedOvoid& x, const MovoidReport& rep, const TwoCharacter& t) {
  const auto& ps = x.base->ps();
  Json j = certificate_base("symplectic_ovoid", *x.base);
  Json d;
  d["q"] = ps.q();
  d["n"] = ps.ncoords() / 2 - 1;
  d["variant"] = {x.choice.i, x.choice.side_i ? 1 : 0, x.choice.j, x.choice.side_j ? 1 : 0};
  d["pencil_values"] = x.elliptic_members;
  d["shears"] = {x.shear_i, x.shear_j};
  d["x"] = points_json(ps, x.x);
  d["sizes"] = {{"a", x.a.size()}, {"b", x.b.size()}, {"q", x.qsection.size()}, {"x", x.x.size()}};
  d["m"] = opt_json(rep.m);
  d["m_expected"] = x.m_expected;
  d["generators_checked"] = rep.generators_checked;
  d["spectrum"] = map_json(t.spectrum);
  d["h1"] = t.h1;
  d["h2"] = t.h2;
  j["data"] = d;
  std::vector<std::string> w;
  movoid_witnesses(rep, "X", w);
  if (!t.pass) w.push_back("hyperplane spectrum is not {h1, h2}");
  j["verification"] = {{"pass", rep.pass && t.pass},
                       {"counters", {{"two_character", t.pass}, {"violations", violations_json(rep)}}},
                       {"witnesses", w}};
  return j;
}

Json srg_certificate(const PolarSpace& p, const SrgResult& g) {
  Json j = certificate_base("srg", p);
  Json d;
  std::vector<PointIndex> v = g.vertices;
  d["vertices"] = points_json(p.ps(), PointSet::from(v));
  auto o = [](const std::optional<std::uint64_t>& x) { return x ? Json(*x) : Json(nullptr); };
  d["parameters"] = {{"v", o(g.v)}, {"k", o(g.k)}, {"lambda", o(g.lambda)}, {"mu", o(g.mu)}};
  d["expected"] = {{"v", g.ev}, {"k", g.ek}, {"lambda", g.elambda}, {"mu", g.emu}};
  d["feasible"] = g.feasible;
  d["equivalence_checked"] = g.equivalence_checked;
  d["graph"] = Json::parse(srg_json(g))["adjacency"];
  j["data"] = d;
  j["verification"] = {{"pass", g.pass}, {"counters", {{"edges", g.edges()}}}, {"witnesses", g.witnesses}};
  return j;
}

Json demo_certificate(const HyperbolicReport& h) {
  const PolarSpace& p = *h.space;
  Json j = certificate_base("demo", p);
  Json d;
  d["kind"] = "hyperbolic";
  d["q"] = p.ps().q();
  d["planes"] = h.planes;
  Json sets = Json::array();
  for (const auto& s : h.sets)
    sets.push_back({{"a", s.a}, {"size", s.points.size()}, {"m", opt_json(s.report.m)}, {"points", points_json(p.ps(), s.points)}});
  d["sets"] = sets;
  Json um = Json::array();
  for (const auto& m : h.union_m) um.push_back(opt_json(m));
  d["union_m"] = um;
  j["data"] = d;
  std::vector<std::string> w;
  for (const auto& s : h.sets) movoid_witnesses(s.report, "set a=" + std::to_string(s.a), w);
  j["verification"] = {{"pass", h.pass}, {"counters", {{"sets", h.sets.size()}}}, {"witnesses", w}};
  return j;
}

namespace {

void verify_hemisystem(const PolarSpace& p, const Json& d, VerifyOutcome& o) {
  const auto& ps = p.ps();
  const auto& f = ps.field();
  auto& w = o.witnesses;
  require(p.has_sigma() && !p.is_symplectic() && p.cls().family == Family::elliptic, ErrorKind::verification,
          "frame is not an elliptic quadric with a distinguished hyperplane");
  const int n = d.at("n").get<int>();
  require(ps.ncoords() == 4 * n + 2, ErrorKind::verification, "frame size does not match n");

  std::vector<Matrix> gens;
  for (const auto& mj : d.at("generators")) {
    Matrix m = matrix_from_json(mj, f);
    const std::size_t i = gens.size();
    if (m.rows != ps.ncoords() || m.cols != ps.ncoords() || !inverse(f, m)) {
      w.push_back("generator matrix " + std::to_string(i) + " is not an invertible square matrix");
      return;
    }
    if (!(p.form().compose(m) == p.form())) w.push_back("generator matrix " + std::to_string(i) + " does not preserve F");
    if (!(apply(ps, m, p.sigma()) == p.sigma()))
      w.push_back("generator matrix " + std::to_string(i) + " does not fix Sigma");
    gens.push_back(std::move(m));
  }

  const PointIndex seed = ps.index_of(code_from_json(ps, d.at("seed")));
  const auto o1 = points_from_json(ps, d.at("o1"));
  if (!p.on_space(seed) || p.on_sigma(seed)) w.push_back("seed is not an off-Sigma point of the quadric");
  for (PointIndex x : o1)
    if (!p.on_space(x) || p.on_sigma(x)) {
      w.push_back("point " + coords_str(ps, x) + " of O1 is not an off-Sigma point of the quadric");
      return;
    }
  try {
    const auto orbit = orbit_closure(ps, gens, seed, &p);
    if (!(orbit == o1)) {
      const auto extra = set_difference(o1, orbit);
      const auto missing = set_difference(orbit, o1);
      std::string msg = "O1 differs from the orbit of the seed";
      if (!extra.empty()) msg += "; " + coords_str(ps, *extra.begin()) + " is not in the orbit";
      if (!missing.empty()) msg += "; " + coords_str(ps, *missing.begin()) + " is missing";
      w.push_back(msg);
    }
  } catch (const Error& e) {
    w.push_back(e.what());
  }

  std::vector<PointIndex> img;
  for (PointIndex x : o1) img.push_back(p.tau_point(x));
  const auto o2 = PointSet::from(std::move(img));
  const bool partition = set_intersection(o1, o2).empty() && set_union(o1, o2) == p.off_points();
  if (!partition) w.push_back("O1 and tau(O1) do not partition the off-Sigma points");

  const bool sampled = d.at("sampled").get<bool>();
  const GeneratorList g = sampled ? sample_generators(p, d.at("sample_count").get<std::size_t>(),
                                                      d.at("sample_seed").get<std::uint64_t>())
                                  : enumerate_generators(p);
  const auto r1 = relative_movoid_check(p, g, o1);
  const auto r2 = relative_movoid_check(p, g, o2);
  movoid_witnesses(r1, "O1", w);
  movoid_witnesses(r2, "O2", w);
  const int m = hemisystem_m(p);
  if (r1.m && *r1.m != m) w.push_back("O1 has m = " + std::to_string(*r1.m) + ", expected " + std::to_string(m));
  if (d.at("m") != opt_json(r1.m)) w.push_back("recorded m does not match the recomputed m");
  if (d.at("generators_checked").get<std::size_t>() != r1.generators_checked)
    w.push_back("recorded generator count does not match");

  if (!d.at("line_census").is_null()) {
    const auto c = line_census(p, o1, o2);
    const auto& lc = d.at("line_census");
    if (!c.ok) w.push_back("a line has an unexpected profile");
    if (lc.at("l1") != c.l1 || lc.at("l2") != c.l2 || lc.at("l3") != c.l3 || lc.at("total") != c.total)
      w.push_back("recorded line census does not match");
    o.counters["line_census"] = {c.l1, c.l2, c.l3};
  }
  o.counters["o1_size"] = o1.size();
  o.counters["m"] = opt_json(r1.m);
  o.counters["generators_checked"] = r1.generators_checked;
  o.counters["sampled"] = sampled;
}

void verify_search(const PolarSpace& p, const Json& d, bool nonexistence, VerifyOutcome& o) {
  const auto& ps = p.ps();
  auto& w = o.witnesses;
  SearchOptions opt;
  opt.budget = d.at("budget").get<std::uint64_t>();
  if (!d.at("search_seed").is_null()) opt.seed = points_from_json(ps, d.at("search_seed"));
  const auto s = search_hemisystems(p, enumerate_generators(p), opt);
  const auto found = sets_from_json(ps, d.at("found"));
  if (s.found != found) w.push_back("recorded solutions differ from the recomputed ones");
  if (d.at("nodes_visited").get<std::uint64_t>() != s.nodes_visited)
    w.push_back("recorded node count " + d.at("nodes_visited").dump() + " differs from " + std::to_string(s.nodes_visited));
  if (d.at("solutions").get<std::uint64_t>() != s.solutions) w.push_back("recorded solution count differs");
  if (!s.exhausted) w.push_back("search did not complete within the recorded budget");
  if (!s.verified) w.push_back("a solution failed re-verification");
  if (nonexistence && s.solutions) w.push_back(std::to_string(s.solutions) + " relative hemisystems exist");
  const auto g = enumerate_generators(p);
  for (const auto& r : found) {
    const auto rep = relative_movoid_check(p, g, r);
    if (!rep.pass || rep.m != s.m) w.push_back("a recorded set is not a relative hemisystem");
  }
  o.counters["nodes_visited"] = s.nodes_visited;
  o.counters["solutions"] = s.solutions;
  o.counters["exhausted"] = s.exhausted;
}

void verify_scan(const PolarSpace& p, const Json& d, VerifyOutcome& o) {
  auto& w = o.witnesses;
  const auto g = enumerate_generators(p);
  const auto s = exhaustive_movoid_scan(p, g);
  if (d.at("census") != map_json(s.census)) w.push_back("recorded census differs from the recomputed one");
  if (!s.proper_m_ok) w.push_back("a proper example has m other than q^(n-1)/2");
  if (!s.proper_disjoint_ok) w.push_back("a proper example meets its tau image");
  const auto proper = sets_from_json(p.ps(), d.at("proper"));
  if (proper != s.proper) w.push_back("recorded proper examples differ");
  for (const auto& r : proper) {
    const auto rep = relative_movoid_check(p, g, r);
    if (!rep.pass || rep.m != hemisystem_m(p)) w.push_back("a recorded proper example fails the generator check");
  }
  o.counters["census"] = map_json(s.census);
}

void verify_audit(const PolarSpace& p, const Json& d, VerifyOutcome& o) {
  const auto r = points_from_json(p.ps(), d.at("set"));
  const int m = d.at("m").get<int>();
  const auto a = lemma_pre_audit(p, enumerate_generators(p), r, m);
  for (const auto& s : a.witnesses) o.witnesses.push_back(s);
  for (int i = 0; i < 6; ++i) {
    const auto& part = d.at("parts").at(i);
    const Json obs = a.observed[i] ? Json(*a.observed[i]) : Json(nullptr);
    if (part.at("observed") != obs || part.at("cases").get<std::size_t>() != a.cases[i])
      o.witnesses.push_back(std::string("recorded part ") + static_cast<char>('a' + i) + " differs");
  }
  o.counters["m_confirmed"] = a.m_confirmed;
}

void verify_ovoid(const PolarSpace& p, const Json& d, VerifyOutcome& o) {
  const auto& ps = p.ps();
  auto& w = o.witnesses;
  const auto x = points_from_json(ps, d.at("x"));
  const auto wsp = PolarSpace::symplectic(ps, p.bilinear());
  const std::uint64_t q = ps.q();
  const int n = ps.ncoords() / 2 - 1;
  const int m = static_cast<int>((ipow(q, n) - 1) / (q - 1));
  const auto rep = check_m_ovoid(wsp, enumerate_generators(wsp), x, m);
  movoid_witnesses(rep, "X", w);
  if (!rep.m) w.push_back("X is not an m-ovoid of the symplectic space");
  if (x.size() != p.points().size()) w.push_back("X does not have the size of the quadric");
  const auto t = two_character_check(ps, x);
  if (!t.pass) w.push_back("hyperplane spectrum is not {h1, h2}");
  if (d.at("spectrum") != map_json(t.spectrum)) w.push_back("recorded spectrum differs");
  o.counters["m"] = opt_json(rep.m);
  o.counters["generators_checked"] = rep.generators_checked;
  o.counters["spectrum"] = map_json(t.spectrum);
}

void verify_srg(const PolarSpace& p, const Json& d, VerifyOutcome& o) {
  const auto v = points_from_json(p.ps(), d.at("vertices"));
  const auto g = srg_build_verify(p, v);
  for (const auto& s : g.witnesses) o.witnesses.push_back(s);
  if (!g.pass) o.witnesses.push_back("measured parameters do not match the expected ones");
  if (d.at("graph") != Json::parse(srg_json(g))["adjacency"]) o.witnesses.push_back("recorded graph differs");
  auto opt = [](const std::optional<std::uint64_t>& x) { return x ? Json(*x) : Json(nullptr); };
  const Json params = {{"v", opt(g.v)}, {"k", opt(g.k)}, {"lambda", opt(g.lambda)}, {"mu", opt(g.mu)}};
  if (d.at("parameters") != params) o.witnesses.push_back("recorded parameters differ");
  o.counters["parameters"] = params;
}

void verify_demo(const PolarSpace& p, const Json& d, VerifyOutcome& o) {
  auto& w = o.witnesses;
  if (p.cls().family != Family::hyperbolic || !p.has_sigma()) {
    w.push_back("frame is not a hyperbolic quadric with a distinguished hyperplane");
    return;
  }
  const int q = static_cast<int>(p.ps().q());
  const auto g = enumerate_generators(p);
  PointSet acc;
  int i = 0;
  for (const auto& s : d.at("sets")) {
    const auto pts = points_from_json(p.ps(), s.at("points"));
    const auto rep = relative_movoid_check(p, g, pts);
    if (!rep.pass || rep.m != q) w.push_back("set " + s.at("a").dump() + " is not a relative q-ovoid");
    acc = set_union(acc, pts);
    ++i;
    const auto u = relative_movoid_check(p, g, acc);
    if (u.m != i * q) w.push_back("union of the first " + std::to_string(i) + " sets is not a relative iq-ovoid");
  }
  if (i != q) w.push_back("expected " + std::to_string(q) + " sets");
  o.counters["planes"] = g.size();
}

}  // namespace

VerifyOutcome verify_certificate(const Json& cert) {
  VerifyOutcome o;
  try {
    require(cert.is_object() && cert.value("schema", "") == kSchema, ErrorKind::usage,
            "not a polarcert/1 certificate");
    o.claim = cert.at("claim").get<std::string>();
    const auto f = field_from_json(cert.at("field"));
    const auto& d = cert.at("data");
    std::optional<PolarSpace> p;
    try {
      p = space_from_frame(cert.at("frame"), f);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::usage) throw;
      o.witnesses.push_back(std::string("frame: ") + e.what());
      return o;
    }
    try {
      if (o.claim == "relative_hemisystem") verify_hemisystem(*p, d, o);
      else if (o.claim == "nonexistence") verify_search(*p, d, true, o);
      else if (o.claim == "relative_m_ovoid") {
        const auto kind = d.at("kind").get<std::string>();
        if (kind == "search") verify_search(*p, d, false, o);
        else if (kind == "scan") verify_scan(*p, d, o);
        else if (kind == "lemma_audit") verify_audit(*p, d, o);
        else fail(ErrorKind::usage, "unknown relative_m_ovoid kind " + kind);
      } else if (o.claim == "symplectic_ovoid" || o.claim == "two_character") verify_ovoid(*p, d, o);
      else if (o.claim == "srg") verify_srg(*p, d, o);
      else if (o.claim == "demo") verify_demo(*p, d, o);
      else fail(ErrorKind::usage, "unknown claim " + o.claim);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::usage || e.kind() == ErrorKind::resource) throw;
      o.witnesses.push_back(e.what());
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::usage, std::string("malformed certificate: ") + e.what());
  }
  o.pass = o.witnesses.empty();
  return o;
}

PolarSpace space_by_name(const std::string& name) {
  static const std::regex re("^(Qminus|Qplus|W)-([0-9]+)-([0-9]+)$");
  std::smatch m;
  require(std::regex_match(name, m, re), ErrorKind::usage,
          "space names look like Qminus-9-2, Qplus-5-4 or W-5-4");
  const int d = std::stoi(m[2]);
  const int q = std::stoi(m[3]);
  require(d >= 3 && d % 2 == 1 && d < kMaxCoords, ErrorKind::usage, "dimension must be odd, at least 3");
  require(q >= 2 && q <= 256 && (q & (q - 1)) == 0, ErrorKind::usage, "q must be a power of two");
  const auto f = FieldTable::make(2, static_cast<unsigned>(std::countr_zero(static_cast<unsigned>(q))));
  const int pairs = (d - 1) / 2;
  const Elem delta = find_delta(f);
  if (m[1] == "Qminus") return frame_space(f, pairs, delta);
  if (m[1] == "Qplus") return frame_space(f, pairs, delta, true);
  const auto e = frame_space(f, pairs, delta);
  return PolarSpace::symplectic(e.ps(), e.bilinear());
}

}  // namespace polarkit
