#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <vector>

namespace spectracalc::cli {

namespace {

std::string fixed4(double v) {
  if (std::abs(v) < 5e-5) v = 0.0;  // no "-0.0000"
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

}  // namespace

std::string format_scalar(const Complex& z) {
  const std::string re = fixed4(z.real());
  if (std::abs(z.imag()) < 5e-5) return re;
  const std::string im = fixed4(std::abs(z.imag()));
  return re + (z.imag() < 0 ? "-" : "+") + im + "i";
}

std::string format_scalar(const GaussQ& z) { return z.to_string(); }

template <class T>
void print_matrix(std::ostream& os, const Matrix<T>& m, int indent) {
  std::vector<std::string> cells;
  std::size_t width = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      cells.push_back(format_scalar(m(i, j)));
      width = std::max(width, cells.back().size());
    }
  }
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << std::string(static_cast<std::size_t>(indent), ' ') << "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      os << (j ? "  " : "") << std::setw(static_cast<int>(width)) << cells[i * m.cols() + j];
    }
    os << "]\n";
  }
}

json to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json to_json(const GaussQ& z) { return json::array({z.re().get_str(), z.im().get_str()}); }

template <class T>
json to_json(const Matrix<T>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const FamilyReport& r) {
  json v = json::array();
  for (const auto& x : r.violations) {
    v.push_back({{"check", std::string(to_string(x.check))},
                 {"first", x.first},
                 {"second", x.second},
                 {"magnitude", x.magnitude},
                 {"detail", x.detail}});
  }
  return {{"ok", r.ok()}, {"violations", std::move(v)}};
}

json to_json(const PropCheck& c) {
  return {{"name", c.name}, {"status", std::string(to_string(c.status))}, {"residual", c.residual}, {"detail", c.detail}};
}

void print_report(std::ostream& os, const FamilyReport& r) {
  if (r.ok()) {
    os << "family checks: ok\n";
    return;
  }
  os << "family checks: " << r.violations.size() << " violation(s)\n";
  for (const auto& v : r.violations) {
    os << "  " << to_string(v.check) << " items " << v.first << "," << v.second << " residual " << v.magnitude;
    if (!v.detail.empty()) os << " (" << v.detail << ")";
    os << "\n";
  }
}

template void print_matrix(std::ostream&, const Matrix<Complex>&, int);
template void print_matrix(std::ostream&, const Matrix<GaussQ>&, int);
template json to_json(const Matrix<Complex>&);
template json to_json(const Matrix<GaussQ>&);

}  // namespace spectracalc::cli
