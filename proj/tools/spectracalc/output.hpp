#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "spectracalc/analogy.hpp"
#include "spectracalc/jordan.hpp"

namespace spectracalc::cli {

using nlohmann::json;

/// Four decimals, "a+bi" when the imaginary part shows at that precision.
std::string format_scalar(const Complex& z);
std::string format_scalar(const GaussQ& z);

/// Rows indented by `indent` spaces, columns right-aligned.
template <class T>
void print_matrix(std::ostream& os, const Matrix<T>& m, int indent = 2);

json to_json(const Complex& z);
json to_json(const GaussQ& z);
template <class T>
json to_json(const Matrix<T>& m);
json to_json(const FamilyReport& r);
json to_json(const PropCheck& c);

void print_report(std::ostream& os, const FamilyReport& r);

}  // namespace spectracalc::cli
