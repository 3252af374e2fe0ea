#include "spectracalc/series.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "spectracalc/error.hpp"

namespace spectracalc {

std::string_view to_string(SeriesKind kind) noexcept {
  switch (kind) {
    case SeriesKind::exp: return "exp";
    case SeriesKind::sin: return "sin";
    case SeriesKind::cos: return "cos";
    case SeriesKind::geometric: return "geometric";
    case SeriesKind::exp_sum: return "exp_sum";
    case SeriesKind::sparse: return "sparse";
    case SeriesKind::generator: return "generator";
  }
  return "unknown";
}

SeriesOptions SeriesOptions::from_environment() {
  SeriesOptions opts;
  if (const char* env = std::getenv("SPECTRACALC_MAX_TERMS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0)
      throw SpectralError(ErrorKind::parse, std::string("SPECTRACALC_MAX_TERMS must be a positive integer, got '") +
                                                env + "'");
    opts.max_terms = static_cast<std::size_t>(v);
  }
  return opts;
}

namespace {

double inv_factorial(std::size_t n) {
  if (n > 170) return 0.0;
  double r = 1.0;
  for (std::size_t i = 2; i <= n; ++i) r /= static_cast<double>(i);
  return r;
}

double falling(std::size_t l, std::size_t q) {
  double r = 1.0;
  for (std::size_t i = 0; i < q; ++i) r *= static_cast<double>(l - i);
  return r;
}

mpz_class falling_exact(std::size_t l, std::size_t q) {
  mpz_class r = 1;
  for (std::size_t i = 0; i < q; ++i) r *= static_cast<unsigned long>(l - i);
  return r;
}

template <class T>
T ipow(const T& base, std::size_t e) {
  T r = ScalarTraits<T>::one();
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

void check_arity(const SeriesFunction& f, std::size_t got) {
  if (got != f.arity())
    throw SpectralError(ErrorKind::dimension_mismatch, "function of arity " + std::to_string(f.arity()) +
                                                           " given " + std::to_string(got) + " arguments");
}

}  // namespace

SeriesFunction SeriesFunction::exp() {
  SeriesFunction f;
  f.kind_ = SeriesKind::exp;
  f.radii_ = {infinite_radius};
  f.name_ = "exp";
  return f;
}

SeriesFunction SeriesFunction::sin() {
  SeriesFunction f = exp();
  f.kind_ = SeriesKind::sin;
  f.name_ = "sin";
  return f;
}

SeriesFunction SeriesFunction::cos() {
  SeriesFunction f = exp();
  f.kind_ = SeriesKind::cos;
  f.name_ = "cos";
  return f;
}

SeriesFunction SeriesFunction::geometric() {
  SeriesFunction f;
  f.kind_ = SeriesKind::geometric;
  f.radii_ = {1.0};
  f.name_ = "geometric";
  return f;
}

SeriesFunction SeriesFunction::exp_sum(std::size_t arity) {
  if (arity == 0) throw SpectralError(ErrorKind::invalid_argument, "arity must be positive");
  SeriesFunction f;
  f.kind_ = SeriesKind::exp_sum;
  f.arity_ = arity;
  f.radii_.assign(arity, infinite_radius);
  f.name_ = "exp_sum";
  return f;
}

SeriesFunction SeriesFunction::sparse(std::size_t arity, std::map<Exponents, GaussQ> coeffs, std::vector<double> radii) {
  if (arity == 0) throw SpectralError(ErrorKind::invalid_argument, "arity must be positive");
  if (radii.empty()) radii.assign(arity, infinite_radius);
  if (radii.size() != arity)
    throw SpectralError(ErrorKind::invalid_argument, "expected " + std::to_string(arity) + " radii");
  for (double r : radii)
    if (!(r > 0.0)) throw SpectralError(ErrorKind::invalid_argument, "radii must be positive");
  SeriesFunction f;
  f.kind_ = SeriesKind::sparse;
  f.arity_ = arity;
  f.radii_ = std::move(radii);
  f.name_ = "series";
  for (auto& [l, a] : coeffs) {
    if (l.size() != arity)
      throw SpectralError(ErrorKind::invalid_argument, "exponent tuple length differs from arity");
    if (!a.is_zero()) f.coeffs_.emplace(l, std::move(a));
  }
  return f;
}

SeriesFunction SeriesFunction::polynomial(std::span<const GaussQ> coeffs) {
  std::map<Exponents, GaussQ> m;
  for (std::size_t l = 0; l < coeffs.size(); ++l) m[{l}] = coeffs[l];
  auto f = sparse(1, std::move(m));
  f.name_ = "polynomial";
  return f;
}

SeriesFunction SeriesFunction::product(std::size_t arity) {
  auto f = sparse(arity, {{Exponents(arity, 1), GaussQ(1)}});
  f.name_ = "product";
  return f;
}

SeriesFunction SeriesFunction::sum(std::size_t arity) {
  std::map<Exponents, GaussQ> m;
  for (std::size_t l = 0; l < arity; ++l) {
    Exponents e(arity, 0);
    e[l] = 1;
    m[e] = GaussQ(1);
  }
  auto f = sparse(arity, std::move(m));
  f.name_ = "sum";
  return f;
}

SeriesFunction SeriesFunction::generator(std::function<Complex(std::size_t)> coeff, double radius, std::string name) {
  if (!coeff) throw SpectralError(ErrorKind::invalid_argument, "empty coefficient generator");
  if (!(radius > 0.0)) throw SpectralError(ErrorKind::invalid_argument, "radius must be positive");
  SeriesFunction f;
  f.kind_ = SeriesKind::generator;
  f.radii_ = {radius};
  f.name_ = std::move(name);
  f.generator_ = std::move(coeff);
  return f;
}

std::optional<std::size_t> SeriesFunction::degree() const {
  if (kind_ != SeriesKind::sparse) return std::nullopt;
  std::size_t d = 0;
  for (const auto& [l, a] : coeffs_) {
    std::size_t t = 0;
    for (auto e : l) t += e;
    d = std::max(d, t);
  }
  return d;
}

Complex SeriesFunction::coefficient(const Exponents& l) const {
  if (l.size() != arity_) throw SpectralError(ErrorKind::dimension_mismatch, "exponent tuple length differs from arity");
  switch (kind_) {
    case SeriesKind::exp: return inv_factorial(l[0]);
    case SeriesKind::sin:
      if (l[0] % 2 == 0) return 0.0;
      return ((l[0] / 2) % 2 == 0 ? 1.0 : -1.0) * inv_factorial(l[0]);
    case SeriesKind::cos:
      if (l[0] % 2 == 1) return 0.0;
      return ((l[0] / 2) % 2 == 0 ? 1.0 : -1.0) * inv_factorial(l[0]);
    case SeriesKind::geometric: return 1.0;
    case SeriesKind::exp_sum: {
      double r = 1.0;
      for (auto e : l) r *= inv_factorial(e);
      return r;
    }
    case SeriesKind::sparse: {
      auto it = coeffs_.find(l);
      return it == coeffs_.end() ? Complex{} : it->second.to_complex();
    }
    case SeriesKind::generator: return generator_(l[0]);
  }
  return {};
}

GaussQ SeriesFunction::coefficient_exact(const Exponents& l) const {
  if (!supports_exact())
    throw SpectralError(ErrorKind::unsupported_mode, "exact coefficients need a sparse series, not " + name_);
  if (l.size() != arity_) throw SpectralError(ErrorKind::dimension_mismatch, "exponent tuple length differs from arity");
  auto it = coeffs_.find(l);
  return it == coeffs_.end() ? GaussQ() : it->second;
}

void SeriesFunction::check_radius(std::span<const Complex> z) const {
  check_arity(*this, z.size());
  for (std::size_t l = 0; l < z.size(); ++l) {
    const double r = radii_[l];
    if (std::isinf(r)) continue;
    if (!(std::abs(z[l]) < r * (1.0 - 1e-12))) {
      throw SpectralError(ErrorKind::out_of_radius, name_ + ": |z_" + std::to_string(l + 1) +
                                                        "| = " + std::to_string(std::abs(z[l])) +
                                                        " is not inside radius " + std::to_string(r));
    }
  }
}

Complex SeriesFunction::partial(const Exponents& q, std::span<const Complex> z, const SeriesOptions& opts) const {
  check_arity(*this, z.size());
  if (q.size() != arity_) throw SpectralError(ErrorKind::dimension_mismatch, "derivative order length differs from arity");
  switch (kind_) {
    case SeriesKind::exp: return std::exp(z[0]);
    case SeriesKind::sin: {
      const Complex s = std::sin(z[0]), c = std::cos(z[0]);
      const Complex cycle[4] = {s, c, -s, -c};
      return cycle[q[0] % 4];
    }
    case SeriesKind::cos: {
      const Complex s = std::sin(z[0]), c = std::cos(z[0]);
      const Complex cycle[4] = {c, -s, -c, s};
      return cycle[q[0] % 4];
    }
    case SeriesKind::geometric: {
      double fact = 1.0;
      for (std::size_t i = 2; i <= q[0]; ++i) fact *= static_cast<double>(i);
      return fact / std::pow(Complex(1.0) - z[0], static_cast<double>(q[0] + 1));
    }
    case SeriesKind::exp_sum: {
      Complex s{};
      for (const auto& v : z) s += v;
      return std::exp(s);
    }
    case SeriesKind::sparse: {
      Complex total{};
      for (const auto& [l, a] : coeffs_) {
        Complex term = a.to_complex();
        bool vanishes = false;
        for (std::size_t v = 0; v < arity_ && !vanishes; ++v) {
          if (l[v] < q[v]) {
            vanishes = true;
            break;
          }
          term *= falling(l[v], q[v]) * ipow(z[v], l[v] - q[v]);
        }
        if (!vanishes) total += term;
      }
      return total;
    }
    case SeriesKind::generator: {
      // sum over l >= q of a_l l!/(l-q)! z^(l-q)
      Complex total{};
      Complex zpow{1.0};
      std::size_t quiet = 0;
      for (std::size_t l = q[0]; l < q[0] + opts.max_terms; ++l) {
        const Complex term = generator_(l) * falling(l, q[0]) * zpow;
        if (!std::isfinite(term.real()) || !std::isfinite(term.imag()))
          throw SpectralError(ErrorKind::non_convergent, name_ + ": non-finite term at index " + std::to_string(l));
        total += term;
        quiet = std::abs(term) < opts.series_eps * (1.0 + std::abs(total)) ? quiet + 1 : 0;
        if (quiet >= opts.quiet_window) return total;
        zpow *= z[0];
      }
      throw SpectralError(ErrorKind::non_convergent,
                          name_ + ": no convergence within " + std::to_string(opts.max_terms) + " terms");
    }
  }
  return {};
}

GaussQ SeriesFunction::partial_exact(const Exponents& q, std::span<const GaussQ> z) const {
  if (!supports_exact())
    throw SpectralError(ErrorKind::unsupported_mode, "exact evaluation needs a sparse series, not " + name_);
  check_arity(*this, z.size());
  if (q.size() != arity_) throw SpectralError(ErrorKind::dimension_mismatch, "derivative order length differs from arity");
  GaussQ total;
  for (const auto& [l, a] : coeffs_) {
    GaussQ term = a;
    bool vanishes = false;
    for (std::size_t v = 0; v < arity_; ++v) {
      if (l[v] < q[v]) {
        vanishes = true;
        break;
      }
      term *= GaussQ(mpq_class(falling_exact(l[v], q[v])));
      term *= ipow(z[v], l[v] - q[v]);
    }
    if (!vanishes) total += term;
  }
  return total;
}

Complex eval_scalar(const SeriesFunction& f, std::span<const Complex> z, const SeriesOptions& opts) {
  f.check_radius(z);
  return f.partial(Exponents(f.arity(), 0), z, opts);
}

GaussQ eval_scalar(const SeriesFunction& f, std::span<const GaussQ> z) {
  std::vector<Complex> zf;
  for (const auto& v : z) zf.push_back(v.to_complex());
  f.check_radius(zf);
  return f.partial_exact(Exponents(f.arity(), 0), z);
}

namespace {

template <class T>
T coefficient_as(const SeriesFunction& f, const Exponents& l) {
  if constexpr (ScalarTraits<T>::exact) {
    return f.coefficient_exact(l);
  } else {
    return f.coefficient(l);
  }
}

template <class T>
void accumulate(const SeriesFunction& f, const std::vector<std::vector<Matrix<T>>>& powers, Exponents& l,
                std::size_t var, std::size_t budget, Matrix<T>& out) {
  if (var == l.size()) {
    const T a = coefficient_as<T>(f, l);
    if (ScalarTraits<T>::is_zero(a, 0.0)) return;
    Matrix<T> term = powers[0][l[0]];
    for (std::size_t v = 1; v < l.size(); ++v) term = term * powers[v][l[v]];
    out.add_scaled(a, term);
    return;
  }
  for (std::size_t e = 0; e <= budget; ++e) {
    l[var] = e;
    accumulate(f, powers, l, var + 1, budget - e, out);
  }
  l[var] = 0;
}

}  // namespace

template <class T>
Matrix<T> series_oracle(const SeriesFunction& f, std::span<const Matrix<T>> mats, std::size_t max_degree) {
  check_arity(f, mats.size());
  const std::size_t n = mats[0].rows();
  for (const auto& m : mats) {
    if (m.rows() != n || m.cols() != n)
      throw SpectralError(ErrorKind::dimension_mismatch, "series arguments must be square of equal size");
  }
  if constexpr (ScalarTraits<T>::exact) {
    if (!f.supports_exact())
      throw SpectralError(ErrorKind::unsupported_mode, "exact evaluation needs a sparse series, not " + f.name());
  }
  std::size_t top = max_degree;
  if (auto d = f.degree()) top = std::min(top, *d);
  std::vector<std::vector<Matrix<T>>> powers(mats.size());
  for (std::size_t v = 0; v < mats.size(); ++v) {
    powers[v].push_back(Matrix<T>::identity(n));
    for (std::size_t e = 1; e <= top; ++e) powers[v].push_back(powers[v].back() * mats[v]);
  }
  Matrix<T> out(n, n);
  if (f.kind() == SeriesKind::sparse) {
    for (const auto& [l, a] : f.sparse_coefficients()) {
      std::size_t t = 0;
      for (auto e : l) t += e;
      if (t > top) continue;
      Matrix<T> term = powers[0][l[0]];
      for (std::size_t v = 1; v < l.size(); ++v) term = term * powers[v][l[v]];
      out.add_scaled(coefficient_as<T>(f, l), term);
    }
    return out;
  }
  Exponents l(mats.size(), 0);
  accumulate(f, powers, l, 0, top, out);
  return out;
}

template Matrix<Complex> series_oracle(const SeriesFunction&, std::span<const Matrix<Complex>>, std::size_t);
template Matrix<GaussQ> series_oracle(const SeriesFunction&, std::span<const Matrix<GaussQ>>, std::size_t);

}  // namespace spectracalc
