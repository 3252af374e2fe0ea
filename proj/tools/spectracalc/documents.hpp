#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectracalc/hybrid.hpp"
#include "spectracalc/jordan.hpp"
#include "spectracalc/series.hpp"

namespace spectracalc::cli {

using nlohmann::json;

enum class DocumentKind { structured, numeric, hybrid };

/// One input file. Structured documents carry a Jordan spec, numeric ones dense
/// entries, hybrid ones discrete and continuous spectral nodes.
struct MatrixDocument {
  DocumentKind kind = DocumentKind::numeric;
  bool exact = false;
  Tolerance tol;
  std::string source;

  std::optional<JordanSpec<GaussQ>> spec_q;
  std::optional<JordanSpec<Complex>> spec_f;
  std::optional<MatrixQ> entries_q;
  std::optional<MatrixF> entries_f;
  std::vector<GaussQ> eigenvalues_q;  // required to decompose exact numeric documents
  std::optional<HybridOperatorSpec> hybrid;

  std::size_t dimension() const;
};

GaussQ parse_scalar(const json& j);
MatrixQ parse_matrix(const json& rows);
void apply_tolerances(const json& j, Tolerance& tol);

MatrixDocument parse_document(const json& j, const std::string& source = "<json>");
MatrixDocument load_document(const std::filesystem::path& path);

SeriesFunction parse_function(const json& j);
SeriesFunction load_function(const std::filesystem::path& path);

json read_json(const std::filesystem::path& path);

}  // namespace spectracalc::cli
