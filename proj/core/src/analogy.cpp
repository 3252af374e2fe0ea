#include "spectracalc/analogy.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace spectracalc {

std::string_view to_string(PropStatus status) noexcept {
  switch (status) {
    case PropStatus::pass: return "pass";
    case PropStatus::fail: return "fail";
    case PropStatus::not_applicable: return "not applicable";
  }
  return "unknown";
}

std::string AnalogySignature::to_string() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    os << (k ? " " : "") << "[";
    for (std::size_t i = 0; i < entries[k].partition.size(); ++i) os << (i ? "," : "") << entries[k].partition[i];
    os << "]";
  }
  return os.str();
}

namespace {

template <class T>
std::vector<std::size_t> sorted_partition(const JordanGroup<T>& g) {
  auto p = g.block_sizes;
  std::sort(p.begin(), p.end(), std::greater<>());
  return p;
}

template <class T>
bool is_zero_eig(const T& v, const Tolerance& tol) {
  return ScalarTraits<T>::is_zero(v, tol.cluster_eps);
}

// Ratio mu / lambda if it is finite and nonzero. Zero pairs with zero at ratio 1.
template <class T>
std::optional<T> pair_ratio(const T& lambda, const T& mu, const Tolerance& tol, std::string* why) {
  const bool lz = is_zero_eig(lambda, tol);
  const bool mz = is_zero_eig(mu, tol);
  if (lz && mz) return ScalarTraits<T>::one();
  if (lz) {
    if (why) *why = "zero eigenvalue in x paired with nonzero in y (no finite ratio)";
    return std::nullopt;
  }
  if (mz) {
    if (why) *why = "nonzero eigenvalue in x paired with zero in y (ratio would be 0)";
    return std::nullopt;
  }
  return mu / lambda;
}

double relative_gap(const Complex& a, const Complex& b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

template <class T>
double rel_residual(const T& a, const T& b) {
  if constexpr (ScalarTraits<T>::exact) {
    if (a == b) return 0.0;
    return std::max(relative_gap(a.to_complex(), b.to_complex()), std::numeric_limits<double>::min());
  } else {
    return relative_gap(a, b);
  }
}

template <class T>
PropStatus judge(bool ok) {
  return ok ? PropStatus::pass : PropStatus::fail;
}

}  // namespace

template <class T>
std::vector<std::size_t> canonical_group_order(const JordanSpec<T>& spec) {
  std::vector<std::size_t> order(spec.groups.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::vector<std::size_t>> parts;
  for (const auto& g : spec.groups) parts.push_back(sorted_partition(g));
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (parts[a] != parts[b]) return parts[a] < parts[b];
    return lex_less(spec.groups[a].eigenvalue, spec.groups[b].eigenvalue);
  });
  return order;
}

template <class T>
AnalogySignature signature_of(const JordanSpec<T>& spec) {
  AnalogySignature sig;
  for (auto k : canonical_group_order(spec)) {
    sig.entries.push_back({spec.groups[k].algebraic(), sorted_partition(spec.groups[k])});
  }
  return sig;
}

template <class T>
std::optional<T> RatioProfile<T>::constant_ratio(const Tolerance& tol) const {
  if (matches.empty()) return std::nullopt;
  const T& c = matches.front().ratio;
  for (const auto& m : matches) {
    if constexpr (ScalarTraits<T>::exact) {
      if (!(m.ratio == c)) return std::nullopt;
    } else {
      if (relative_gap(m.ratio, c) > tol.cluster_eps) return std::nullopt;
    }
  }
  return c;
}

template <class T>
AnalogyOutcome<T> check_analogous(const JordanSpec<T>& x, const JordanSpec<T>& y, const Tolerance& tol) {
  AnalogyOutcome<T> out;
  if (x.dimension() != y.dimension()) {
    throw SpectralError(ErrorKind::dimension_mismatch, "analogy needs equal dimensions");
  }
  if (x.groups.size() != y.groups.size()) {
    out.reason = "different numbers of distinct eigenvalues";
    return out;
  }
  if (!(signature_of(x) == signature_of(y))) {
    out.reason = "block partitions differ: " + signature_of(x).to_string() + " vs " + signature_of(y).to_string();
    return out;
  }
  const auto xo = canonical_group_order(x);
  const auto yo = canonical_group_order(y);
  const std::size_t n = xo.size();
  std::vector<bool> used(n, false);
  std::vector<GroupMatch<T>> chosen;
  std::string last_reason;

  // depth-first over x groups in canonical order; candidates are y groups with the same partition
  auto search = [&](auto&& self, std::size_t depth) -> bool {
    if (depth == n) return true;
    const auto& gx = x.groups[xo[depth]];
    const auto px = sorted_partition(gx);
    for (std::size_t c = 0; c < n; ++c) {
      if (used[c]) continue;
      const auto& gy = y.groups[yo[c]];
      if (sorted_partition(gy) != px) continue;
      auto r = pair_ratio(gx.eigenvalue, gy.eigenvalue, tol, &last_reason);
      if (!r) continue;
      used[c] = true;
      chosen.push_back({xo[depth], yo[c], *r});
      if (self(self, depth + 1)) return true;
      chosen.pop_back();
      used[c] = false;
    }
    return false;
  };
  if (search(search, 0)) {
    out.profile = RatioProfile<T>{std::move(chosen)};
  } else {
    out.reason = last_reason.empty() ? "no partition-preserving eigenvalue matching" : last_reason;
  }
  return out;
}

template <class T>
bool is_valid_profile(const JordanSpec<T>& x, const JordanSpec<T>& y, const RatioProfile<T>& profile,
                      const Tolerance& tol) {
  if (profile.matches.size() != x.groups.size() || x.groups.size() != y.groups.size()) return false;
  std::vector<bool> xs(x.groups.size(), false), ys(y.groups.size(), false);
  for (const auto& m : profile.matches) {
    if (m.x_group >= xs.size() || m.y_group >= ys.size() || xs[m.x_group] || ys[m.y_group]) return false;
    xs[m.x_group] = ys[m.y_group] = true;
    const auto& gx = x.groups[m.x_group];
    const auto& gy = y.groups[m.y_group];
    if (sorted_partition(gx) != sorted_partition(gy)) return false;
    if (ScalarTraits<T>::is_zero(m.ratio, 0.0)) return false;
    T predicted = m.ratio * gx.eigenvalue;
    if constexpr (ScalarTraits<T>::exact) {
      if (!(predicted == gy.eigenvalue)) return false;
    } else {
      if (std::abs(predicted - gy.eigenvalue) > tol.cluster_eps * std::max(1.0, std::abs(gy.eigenvalue))) return false;
    }
  }
  return true;
}

template <class T>
RatioProfile<T> invert(const RatioProfile<T>& xy) {
  RatioProfile<T> out;
  for (const auto& m : xy.matches) out.matches.push_back({m.y_group, m.x_group, ScalarTraits<T>::one() / m.ratio});
  return out;
}

template <class T>
RatioProfile<T> compose(const RatioProfile<T>& xy, const RatioProfile<T>& yz) {
  RatioProfile<T> out;
  for (const auto& a : xy.matches) {
    auto it = std::find_if(yz.matches.begin(), yz.matches.end(),
                           [&](const GroupMatch<T>& b) { return b.x_group == a.y_group; });
    if (it == yz.matches.end()) throw SpectralError(ErrorKind::invalid_argument, "profiles do not chain");
    out.matches.push_back({a.x_group, it->y_group, a.ratio * it->ratio});
  }
  return out;
}

template <class T>
PropsReport verify_props(const JordanSpec<T>& x, const JordanSpec<T>& y, const RatioProfile<T>& profile,
                         const Tolerance& tol) {
  using Tr = ScalarTraits<T>;
  constexpr bool exact = Tr::exact;
  PropsReport report;
  const Matrix<T> mx = assemble(x, tol);
  const Matrix<T> my = assemble(y, tol);
  const double rel_eps = exact ? 0.0 : tol.recon_eps;

  const auto rx = rank_with_tol(mx, tol);
  const auto ry = rank_with_tol(my, tol);
  report.rank = {"rank", judge<T>(rx == ry), rx > ry ? double(rx - ry) : double(ry - rx),
                 "rank(X)=" + std::to_string(rx) + " rank(Y)=" + std::to_string(ry)};

  bool same_transform = x.transform.rows() == y.transform.rows();
  if (same_transform) {
    if constexpr (exact) {
      same_transform = x.transform == y.transform;
    } else {
      same_transform = max_abs_diff(x.transform, y.transform) <= tol.recon_eps * std::max(1.0, max_abs(x.transform));
    }
  }
  report.commutation.name = "commutation";
  if (same_transform) {
    const double comm = max_abs(Matrix<T>(mx * my - my * mx));
    const double scale = std::max(1.0, max_abs(mx) * max_abs(my));
    report.commutation.residual = comm;
    report.commutation.status = judge<T>(exact ? comm == 0.0 : comm <= tol.recon_eps * scale);
    report.commutation.detail = "||XY - YX||_max";
  } else {
    report.commutation.detail = "transforms differ";
  }

  T scale_det = Tr::one();
  for (const auto& m : profile.matches) {
    const std::size_t alpha = x.groups[m.x_group].algebraic();
    for (std::size_t a = 0; a < alpha; ++a) scale_det *= m.ratio;
  }
  const T det_x = determinant(mx);
  const T det_y = determinant(my);
  const T lhs = det_x * scale_det;
  const double det_res = rel_residual(lhs, det_y);
  report.determinant = {"determinant", judge<T>(det_res <= rel_eps), det_res, "det(X) * prod c^alpha vs det(Y)"};

  report.trace.name = "trace";
  report.char_poly.name = "characteristic-polynomial";
  const auto c = profile.constant_ratio(tol);
  if (!c) {
    report.trace.detail = report.char_poly.detail = "ratios are not constant";
    return report;
  }
  const double tr_res = rel_residual(T(*c * trace(mx)), trace(my));
  report.trace = {"trace", judge<T>(tr_res <= rel_eps), tr_res, "trace(Y) vs c * trace(X)"};

  const auto ax = characteristic_polynomial(mx);
  const auto by = characteristic_polynomial(my);
  const std::size_t dim = ax.size() - 1;
  double cp_res = 0.0;
  for (std::size_t j = 0; j <= dim; ++j) {
    T scaled = ax[j];
    for (std::size_t e = 0; e < dim - j; ++e) scaled *= *c;
    cp_res = std::max(cp_res, rel_residual(scaled, by[j]));
  }
  report.char_poly = {"characteristic-polynomial", judge<T>(cp_res <= rel_eps), cp_res,
                      "coefficients of CP_Y(y) vs c^(m-j) * coefficients of CP_X"};
  return report;
}

#define SPECTRACALC_INSTANTIATE(T)                                                                        \
  template std::vector<std::size_t> canonical_group_order(const JordanSpec<T>&);                          \
  template AnalogySignature signature_of(const JordanSpec<T>&);                                           \
  template struct RatioProfile<T>;                                                                        \
  template AnalogyOutcome<T> check_analogous(const JordanSpec<T>&, const JordanSpec<T>&, const Tolerance&); \
  template bool is_valid_profile(const JordanSpec<T>&, const JordanSpec<T>&, const RatioProfile<T>&,      \
                                 const Tolerance&);                                                       \
  template RatioProfile<T> invert(const RatioProfile<T>&);                                                \
  template RatioProfile<T> compose(const RatioProfile<T>&, const RatioProfile<T>&);                       \
  template PropsReport verify_props(const JordanSpec<T>&, const JordanSpec<T>&, const RatioProfile<T>&,   \
                                    const Tolerance&);

SPECTRACALC_INSTANTIATE(Complex)
SPECTRACALC_INSTANTIATE(GaussQ)

#undef SPECTRACALC_INSTANTIATE

}  // namespace spectracalc
