#pragma once

#include <torsion/sparse_poly.hpp>
#include <torsion/subtorus.hpp>
#include <torsion/torsion.hpp>
#include <torsion/znlattice.hpp>

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace torsion {

using Json = nlohmann::ordered_json;

/// {"num_vars": n, "terms": [{"coeff": "3", "exp": [105]}, ...]}, terms in
/// descending grlex order. Exponents beyond 2^53 are written as strings.
Json poly_to_json(const SparsePoly& p);
/// Accepts the object form or a text string.
SparsePoly poly_from_json(const Json& j, std::size_t num_vars);

Json int_to_json(const Int& v);  // decimal string
Int int_from_json(const Json& j);  // string or integer

Json matrix_to_json(const IntMatrix& m);
IntMatrix matrix_from_json(const Json& j);

Json certificate_to_json(const NonContainmentCertificate& c);
NonContainmentCertificate certificate_from_json(const Json& j);

Json search_to_json(const CertificateSearch& s);
Json bounds_to_json(const KpsBounds& b);
Json verdict_to_json(const TorsionVerdict& v);

/// {"system": [[poly, ...], ...], "orders": [...], "dbars"?: [[...], ...], "num_vars"?: n}
struct InstanceFile {
  std::size_t num_vars = 0;
  std::vector<std::vector<SparsePoly>> system;
  std::vector<Int> orders;
  std::optional<std::vector<std::vector<Int>>> dbars;
};

/// Largest variable index written as x<k> in the text, 0 if none.
std::size_t max_variable_index(std::string_view text);

InstanceFile instance_from_json(const Json& j);

}  // namespace torsion
