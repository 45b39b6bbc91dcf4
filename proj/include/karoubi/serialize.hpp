#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "karoubi/decompose.hpp"
#include "karoubi/leaks.hpp"

namespace karoubi::serialize {

using Json = nlohmann::ordered_json;

// -- matrices -----------------------------------------------------------------
// Complex matrices are arrays of rows whose entries are [re, im] pairs,
// row-major. Real and boolean matrices are arrays of rows of numbers.

Json cmat_to_json(const CMat& m);
CMat cmat_from_json(const Json& j);
Json rmat_to_json(const RMat& m);
RMat rmat_from_json(const Json& j);
Json bool_matrix_to_json(const mat::BoolMatrix& m);
mat::BoolMatrix bool_matrix_from_json(const Json& j);

// -- channel files --------------------------------------------------------------
// { "dom": {"dims": [...]}, "cod": {"dims": [...]},
//   "repr": "choi" | "kraus" | "superop",
//   "convention": {"vectorization": "block-row-major", "choi": "dom-tensor-cod"},
//   "<repr>": payload, ... }
// A file may carry both "choi" and "superop"; they are cross-validated.
// Matrix-semiring payloads instead use
// { "semiring": "boolean" | "nonneg-real", "matrix": [[...], ...] }.

struct ParsedInput {
  std::optional<quant::Channel> channel;
  std::optional<Mor> mat_morphism;  // in the boolean or nonnegative-real theory
  bool is_channel() const { return channel.has_value(); }
};

ParsedInput parse_morphism_json(const Json& j, Tolerance tol = {});
ParsedInput parse_morphism_file(const std::string& path, Tolerance tol = {});

Json channel_to_json(const quant::Channel& c, const std::string& repr = "superop");

// -- decompositions ---------------------------------------------------------------

Json decomposition_to_json(const decompose::BlockDecomposition& dec,
                           const decompose::DecompositionReport* report = nullptr);
decompose::BlockDecomposition decomposition_from_json(const Json& j);

Json report_to_json(const decompose::DecompositionReport& report);

// -- Frobenius structures ----------------------------------------------------------
// { "dim": d, "delta": d^2 x d complex matrix }

Json frobenius_to_json(const leaks::FrobeniusStructure& fs);
leaks::FrobeniusStructure frobenius_from_json(const Json& j);

Json load_json_file(const std::string& path);

}  // namespace karoubi::serialize
