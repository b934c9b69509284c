#pragma once

// Certificates ("polarcert/1"): a claim, the raw data needed to re-check it
// (field, frame, coordinates, matrices) and the verification outcome.
// verify_certificate recomputes every claim from the serialized data alone.

#include <string>
#include <vector>

#include <json.hpp>

#include "polarkit/applications.hpp"
#include "polarkit/hemisystems.hpp"

namespace polarkit {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "polarcert/1";
inline constexpr const char* kVersion = "0.1.0";

Json field_json(const FieldTable& f);
FieldTable field_from_json(const Json& j);

Json matrix_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const FieldTable& f);

/// Points as coordinate lists, in index order.
Json points_json(const ProjectiveSpace& ps, const PointSet& s);
/// Throws verification on malformed, unnormalized or repeated points.
PointSet points_from_json(const ProjectiveSpace& ps, const Json& j);

/// Quadratic form (upper-triangular), polar Gram, Sigma basis, nucleus, delta.
Json frame_json(const PolarSpace& p);
PolarSpace space_from_frame(const Json& frame, const FieldTable& f);

/// Skeleton with schema, claim, field and frame.
Json certificate_base(const std::string& claim, const PolarSpace& p);

Json hemisystem_certificate(const HemisystemResult& r, const std::optional<LineCensus>& census,
                            std::size_t sample_count);
Json search_certificate(const PolarSpace& p, const SearchOutcome& s, const SearchOptions& opt,
                        bool prove_nonexistence);
Json scan_certificate(const PolarSpace& p, const ScanResult& s);
Json audit_certificate(const PolarSpace& p, const PointSet& r, int m, const LemmaAudit& a);
Json ovoid_certificate(const MixedOvoid& x, const MovoidReport& rep, const TwoCharacter& t);
Json srg_certificate(const PolarSpace& p, const SrgResult& g);
Json demo_certificate(const HyperbolicReport& h);

struct VerifyOutcome {
  bool pass = false;
  std::string claim;
  Json counters = Json::object();
  std::vector<std::string> witnesses;
};

/// Recomputes the claim. Throws usage on a malformed certificate.
VerifyOutcome verify_certificate(const Json& cert);

/// The space named family-dim-q: Qminus-D-Q, Qplus-D-Q (frame forms with
/// Sigma = {z = 0}) or W-D-Q (their common polar form). Throws usage.
PolarSpace space_by_name(const std::string& name);

}  // namespace polarkit
