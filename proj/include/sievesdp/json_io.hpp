#pragma once

#include <json.hpp>

#include <string>
#include <string_view>

#include "sievesdp/certificate.hpp"
#include "sievesdp/oracle.hpp"
#include "sievesdp/problem.hpp"
#include "sievesdp/sym_relax.hpp"
#include "sievesdp/sym_matrix.hpp"

namespace sievesdp {

using Json = nlohmann::json;

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

/// Problems are validated after parsing (ProblemValidationError).
Json problem_to_json(const SiftingProblem& problem);
SiftingProblem problem_from_json(const Json& j);
SiftingProblem parse_problem(std::string_view text);

Json matrix_to_json(const AnyMatrix& m);
/// Rows may be full (then symmetry is checked) or lower-triangular.
AnyMatrix matrix_from_json(const Json& j, const std::string& where = "matrix");

/// Floats use shortest round-trip decimals, rationals "num/den" strings.
Json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const Json& j, const std::string& where);

/// Comma-joined partition names in problem order ("" for the empty set).
std::string subset_key(const SiftingProblem& problem, PartitionSet d);
PartitionSet subset_from_key(const SiftingProblem& problem, std::string_view key);
Json subset_to_json(const SiftingProblem& problem, PartitionSet d);
PartitionSet subset_from_json(const SiftingProblem& problem, const Json& j, const std::string& where);

Json certificate_to_json(const SiftingProblem& problem, const Certificate& cert);
/// Partition names resolve against `problem`; errors are MalformedCertificate.
Certificate certificate_from_json(const SiftingProblem& problem, const Json& j);
std::string serialize(const SiftingProblem& problem, const Certificate& cert);
Certificate parse_certificate(const SiftingProblem& problem, std::string_view text);

Json coeffs_to_json(const SiftingProblem& problem, const SymCoeffs& b, PartitionSet s);
std::pair<SymCoeffs, PartitionSet> coeffs_from_json(const SiftingProblem& problem, const Json& j);

/// {"lambda": {key: q, ...}, "remainder": {...}}
Json linear_weights_to_json(const SiftingProblem& problem, const LinearWeights& lw);
LinearWeights linear_weights_from_json(const SiftingProblem& problem, const Json& j);

}  // namespace sievesdp
