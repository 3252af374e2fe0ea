// Acceptance checks AC1..AC10. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "graph_iso.hpp"
#include "spectracalc/analogy.hpp"
#include "spectracalc/asg.hpp"
#include "spectracalc/calculus.hpp"
#include "spectracalc/enumeration.hpp"
#include "spectracalc/hybrid.hpp"
#include "spectracalc/jordan.hpp"
#include "spectracalc/linalg.hpp"

using namespace spectracalc;
namespace t = spectracalc::testing;

namespace {

/// Collects failures; a criterion passes when none were recorded.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
  bool ok() const { return failed_ == 0; }
  std::string summary() const {
    std::ostringstream os;
    os << checks_ << " checks";
    if (!notes_.empty()) os << "; " << notes_;
    if (failed_ > 0) {
      os << "; " << failed_ << " failed:";
      for (const auto& f : failures_) os << " [" << f << "]";
    }
    return os.str();
  }

 private:
  std::size_t checks_ = 0, failed_ = 0;
  std::vector<std::string> failures_;
  std::string notes_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

template <class T>
Matrix<T> power(const Matrix<T>& m, std::size_t k) {
  return m.pow(static_cast<unsigned>(k));
}

// ---------------------------------------------------------------- AC1

template <class T>
void family_invariants(Check& c, const JordanSpec<T>& spec, double eps, const std::string& tag) {
  const auto fam = extract_family(spec);
  const std::size_t n = spec.dimension();
  auto small = [&](const Matrix<T>& m) {
    if constexpr (ScalarTraits<T>::exact) return m == Matrix<T>(m.rows(), m.cols());
    else return max_abs(m) < eps;
  };
  Matrix<T> sum(n, n);
  for (const auto& it : fam.items) sum += it.projector;
  c.expect(small(sum - Matrix<T>::identity(n)), tag + " completeness");
  for (std::size_t a = 0; a < fam.items.size(); ++a) {
    const auto& pa = fam.items[a].projector;
    c.expect(small(pa * pa - pa), tag + " idempotence");
    for (std::size_t b = 0; b < fam.items.size(); ++b)
      if (a != b) c.expect(small(pa * fam.items[b].projector), tag + " orthogonality");
    const auto& na = fam.items[a].nilpotent;
    const std::size_t m = fam.items[a].block_size;
    c.expect(small(power(na, m)), tag + " N^m = 0");
    c.expect(!small(power(na, m - 1)), tag + " N^(m-1) != 0");
  }
  c.expect(small(reconstruct(fam) - assemble(spec)), tag + " reconstruction");
}

Check ac1() {
  Check c;
  t::Rng rng(1001);
  for (int i = 0; i < 50; ++i) family_invariants(c, t::random_float_spec(rng, 8, 4), 1e-8, "float");
  for (int i = 0; i < 50; ++i) family_invariants(c, t::random_exact_spec(rng, 8, 4), 0.0, "exact");
  c.note("100 specs, dim <= 8, blocks <= 4");
  return c;
}

// ---------------------------------------------------------------- AC2

Check ac2() {
  Check c;
  Tolerance block_tol;
  block_tol.cluster_eps = 1e-3;
  t::Rng rng(1002);
  for (int i = 0; i < 50; ++i) {
    const auto spec = t::random_exact_spec(rng, 8, 4);
    const MatrixQ x = assemble(spec);
    std::vector<GaussQ> eig;
    for (const auto& g : spec.groups) eig.push_back(g.eigenvalue);
    const auto exact_back = decompose(x, eig);
    c.expect(exact_back.groups.size() == spec.groups.size(), "exact group count");
    for (const auto& g : exact_back.groups)
      c.expect(g.block_sizes == t::weyr_partition(x, g.eigenvalue), "exact block sizes vs Weyr oracle");
    c.expect(exact_back.groups == spec.groups, "exact round trip structure");
    c.expect(assemble(exact_back) == x, "exact round trip matrix");

    // float decomposition of a well-conditioned realization of the same structure;
    // a size-m block scatters its computed eigenvalues by about eps^(1/m), so the
    // clustering radius must exceed that for blocks of size 3 and 4
    JordanSpec<Complex> fs = to_float(spec);
    fs.transform = seeded_transform(spec.dimension(), 7 + i);
    fs = canonicalize(fs);
    const auto float_back = decompose(assemble(fs), block_tol);
    bool same = float_back.groups.size() == spec.groups.size();
    if (same) {
      for (const auto& g : float_back.groups) {
        // match by eigenvalue against the exact oracle
        bool found = false;
        for (const auto& q : spec.groups)
          if (std::abs(q.eigenvalue.to_complex() - g.eigenvalue) < 1e-6) {
            found = true;
            same = same && g.block_sizes == t::weyr_partition(x, q.eigenvalue);
          }
        same = same && found;
      }
    }
    c.expect(same, "float block sizes vs Weyr oracle");
  }
  c.note("50 specs");
  return c;
}

// ---------------------------------------------------------------- AC3

Check ac3() {
  Check c;
  t::Rng rng(1003);
  std::vector<GaussQ> coeffs;
  for (long k = 0; k <= 7; ++k) coeffs.push_back(GaussQ(mpq_class(k % 4 - 2, k + 1), mpq_class(1, k + 3)));
  const auto poly = SeriesFunction::polynomial(coeffs);
  const std::vector<SeriesFunction> fs{SeriesFunction::exp(), SeriesFunction::sin(), SeriesFunction::cos(), poly};
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto spec = t::random_float_spec(rng, 6, 4);
    const auto fam = extract_family(spec);
    const std::vector<MatrixF> xs{assemble(spec)};
    for (const auto& f : fs) {
      const double err = norm_inf(MatrixF(apply_single(f, fam) - series_oracle<Complex>(f, xs, 30)));
      worst = std::max(worst, err);
      c.expect(err < 1e-6, f.name() + " residual " + fmt(err));
    }
  }
  for (int i = 0; i < 20; ++i) {
    const auto spec = t::random_exact_spec(rng, 6, 4);
    const std::vector<MatrixQ> xs{assemble(spec)};
    c.expect(apply_single(poly, extract_family(spec)) == series_oracle<GaussQ>(poly, xs, 7), "exact polynomial");
  }
  c.note("50 float families x 4 functions, max residual " + fmt(worst) + "; 20 exact polynomial checks");
  return c;
}

// ---------------------------------------------------------------- AC4

Check ac4() {
  Check c;
  t::Rng rng(1004);
  const auto mixed2 = SeriesFunction::sparse(
      2, {{{0, 0}, GaussQ(1)}, {{1, 2}, GaussQ(2)}, {{3, 1}, GaussQ(mpq_class(-1, 3))}, {{2, 2}, GaussQ(0, 1)}});
  const auto mixed3 = SeriesFunction::sparse(
      3, {{{1, 1, 1}, GaussQ(1)}, {{2, 0, 1}, GaussQ(-1)}, {{0, 3, 2}, GaussQ(mpq_class(1, 2))}});
  double worst = 0.0, worst_product = 0.0;
  for (int i = 0; i < 30; ++i) {
    const std::size_t dim = 2 + i % 3;
    const std::size_t arity = i % 2 == 0 ? 2 : 3;
    std::vector<SpectralFamily<Complex>> fams;
    std::vector<MatrixF> xs;
    for (std::size_t l = 0; l < arity; ++l) {
      const auto s = t::random_float_spec_of_dim(rng, dim, 3);
      fams.push_back(extract_family(s));
      xs.push_back(assemble(s));
    }
    for (const auto& f : {SeriesFunction::exp_sum(arity), arity == 2 ? mixed2 : mixed3}) {
      const double err = norm_inf(MatrixF(apply_multi<Complex>(f, fams) - series_oracle<Complex>(f, xs, 40)));
      worst = std::max(worst, err);
      c.expect(err < 1e-6, "arity " + std::to_string(arity) + " " + f.name() + " residual " + fmt(err));
    }
    if (arity == 2) {
      const std::vector<SpectralFamily<Complex>> pair{fams[0], fams[1]};
      const double err = max_abs(MatrixF(apply_multi<Complex>(SeriesFunction::product(2), pair) - xs[0] * xs[1]));
      worst_product = std::max(worst_product, err);
      c.expect(err < 1e-12, "z1 z2 residual " + fmt(err));
    } else {
      const double err =
          max_abs(MatrixF(apply_multi<Complex>(SeriesFunction::product(3), fams) - xs[0] * xs[1] * xs[2]));
      worst_product = std::max(worst_product, err);
      c.expect(err < 1e-12, "z1 z2 z3 residual " + fmt(err));
    }
  }
  for (int i = 0; i < 10; ++i) {
    auto a = t::random_exact_spec(rng, 4, 3);
    auto b = t::random_exact_spec(rng, 4, 3);
    while (b.dimension() != a.dimension()) b = t::random_exact_spec(rng, 4, 3);
    c.expect(apply_two(SeriesFunction::product(2), extract_family(a), extract_family(b)) == assemble(a) * assemble(b),
             "exact z1 z2");
  }
  c.note("30 pairs/triples, max oracle residual " + fmt(worst) + ", max product residual " + fmt(worst_product));
  return c;
}

// ---------------------------------------------------------------- AC5

Check ac5() {
  Check c;
  t::Rng rng(1005);
  const auto f = SeriesFunction::exp_sum(2);
  std::vector<double> least(4, 1e300);
  for (int i = 0; i < 5; ++i) {
    // two groups with a size-2 block each, so every mixed term is nonzero
    std::vector<SpectralFamily<Complex>> fams;
    std::vector<MatrixF> xs;
    for (int l = 0; l < 2; ++l) {
      auto eig = t::random_float_eigenvalues(rng, 2);
      JordanSpec<Complex> s;
      s.groups = {{eig[0], {2}}, {eig[1], {1}}};
      s.transform = seeded_transform(3, rng());
      s = canonicalize(s);
      fams.push_back(extract_family(s));
      xs.push_back(assemble(s));
    }
    const MatrixF oracle = series_oracle<Complex>(f, xs, 40);
    c.expect(norm_inf(MatrixF(apply_multi<Complex>(f, fams) - oracle)) < 1e-6, "full formula agrees");
    for (TermPattern p = 0; p < 4; ++p) {
      const double err =
          norm_inf(MatrixF(apply_multi<Complex>(f, fams, {}, TermMask::all_but(2, p)) - oracle));
      least[p] = std::min(least[p], err);
      c.expect(err > 1e-3, "pattern " + std::to_string(p) + " ablation error " + fmt(err));
    }
  }
  c.note("min ablation errors P.P " + fmt(least[0]) + ", N.P " + fmt(least[1]) + ", P.N " + fmt(least[2]) +
         ", N.N " + fmt(least[3]));
  return c;
}

// ---------------------------------------------------------------- AC6

GaussQ random_ratio(t::Rng& rng) {
  static const std::vector<GaussQ> pool{GaussQ(2),
                                        GaussQ(-1),
                                        GaussQ(mpq_class(1, 2)),
                                        GaussQ(mpq_class(3, 2), mpq_class(1, 2)),
                                        GaussQ(0, -2),
                                        GaussQ(3),
                                        GaussQ(mpq_class(-2, 3), 1)};
  return pool[t::uniform_index(rng, 0, pool.size() - 1)];
}

JordanSpec<GaussQ> scaled(const JordanSpec<GaussQ>& x, const std::vector<GaussQ>& ratios) {
  JordanSpec<GaussQ> y = x;
  for (std::size_t k = 0; k < y.groups.size(); ++k) y.groups[k].eigenvalue = ratios[k] * x.groups[k].eigenvalue;
  return y;
}

bool distinct_eigenvalues(const JordanSpec<GaussQ>& s) {
  for (std::size_t a = 0; a < s.groups.size(); ++a)
    for (std::size_t b = a + 1; b < s.groups.size(); ++b)
      if (s.groups[a].eigenvalue == s.groups[b].eigenvalue) return false;
  return true;
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

Check ac6() {
  Check c;
  t::Rng rng(1006);
  int pairs = 0;
  while (pairs < 30) {
    const auto x = t::random_exact_spec(rng, 6, 3);
    std::vector<GaussQ> r1, r2;
    for (std::size_t k = 0; k < x.groups.size(); ++k) {
      r1.push_back(random_ratio(rng));
      r2.push_back(random_ratio(rng));
    }
    const auto y = scaled(x, r1);
    const auto z = scaled(y, r2);
    if (!distinct_eigenvalues(y) || !distinct_eigenvalues(z)) continue;
    ++pairs;

    // equivalence-relation laws
    c.expect(static_cast<bool>(check_analogous(x, x)), "reflexive");
    const auto xy = check_analogous(x, y);
    const auto yx = check_analogous(y, x);
    const auto yz = check_analogous(y, z);
    c.expect(xy && yx, "symmetric");
    c.expect(yz && check_analogous(x, z), "transitive");

    const MatrixQ xq = assemble(x), yq = assemble(y);
    const MatrixF xf = to_float(xq), yf = to_float(yq);

    // same transform: XY = YX
    c.expect(max_abs(MatrixF(xf * yf - yf * xf)) < 1e-8, "commutation");

    // det Y = det X * prod c_k^alpha_k
    Complex factor(1.0, 0.0);
    for (std::size_t k = 0; k < x.groups.size(); ++k)
      factor *= std::pow(r1[k].to_complex(), static_cast<double>(x.groups[k].algebraic()));
    c.expect(rel(determinant(yf), determinant(xf) * factor) < 1e-10, "determinant ratio");

    // library Props report agrees
    if (xy) c.expect(verify_props(x, y, *xy.profile).passed(), "verify_props on x, y");

    // constant ratio: trace and root scaling
    const GaussQ cst = random_ratio(rng);
    const auto w = scaled(x, std::vector<GaussQ>(x.groups.size(), cst));
    const MatrixQ wq = assemble(w);
    c.expect(rel(trace(to_float(wq)), cst.to_complex() * trace(xf)) < 1e-10, "trace relation");
    std::vector<GaussQ> roots;
    for (const auto& g : x.groups)
      for (std::size_t a = 0; a < g.algebraic(); ++a) roots.push_back(cst * g.eigenvalue);
    c.expect(characteristic_polynomial(wq) == t::poly_from_roots(roots), "root scaling");
    const auto xw = check_analogous(x, w);
    c.expect(xw && verify_props(x, w, *xw.profile).passed(), "verify_props constant ratio");
  }
  c.note("30 analogous pairs");
  return c;
}

// ---------------------------------------------------------------- AC7

Check ac7() {
  Check c;
  for (std::size_t m = 1; m <= 40; ++m) {
    std::vector<long> by_k(m + 1, 0);
    long total = 0;
    std::vector<std::size_t> prefix;
    t::enumerate_partitions(m, m, prefix, [&](const std::vector<std::size_t>& p) {
      ++by_k[p.size()];
      ++total;
    });
    c.expect(partition_total(m) == total, "P(" + std::to_string(m) + ")");
    for (std::size_t k = 1; k <= m; ++k)
      c.expect(partition_k(m, k) == by_k[k], "P_" + std::to_string(k) + "(" + std::to_string(m) + ")");
  }
  // brute force: every nonincreasing multiplicity tuple, product of partition counts
  for (std::size_t m = 1; m <= 12; ++m) {
    mpz_class brute = 0;
    for (const auto& alpha : t::partitions_of(m)) {
      mpz_class prod = 1;
      for (auto a : alpha) prod *= static_cast<unsigned long>(t::partitions_of(a).size());
      brute += prod;
    }
    c.expect(family_count(m) == brute, "family_count(" + std::to_string(m) + ")");
  }
  c.expect(family_count(1) == 1 && family_count(2) == 3 && family_count(3) == 6, "family_count(1..3)");
  std::vector<double> dist;
  std::string ratios;
  for (std::size_t m : {50u, 100u, 200u, 500u}) {
    const double r = std::exp(asymptotic_family_count(m, 1).log_value - std::log(partition_total(m).get_d()));
    dist.push_back(std::abs(r - 1.0));
    ratios += (ratios.empty() ? "" : ", ") + fmt(r);
  }
  for (std::size_t i = 1; i < dist.size(); ++i) c.expect(dist[i] < dist[i - 1], "ratio improves");
  c.note("ratios " + ratios);
  return c;
}

// ---------------------------------------------------------------- AC8

Check ac8() {
  Check c;
  std::vector<std::pair<AnalogySignature, AsgGraph>> all;
  std::vector<std::string> dots;
  for (std::size_t m = 1; m <= 4; ++m) {
    for (const auto& shape : t::all_structures(m)) {
      JordanSpec<GaussQ> s;
      for (std::size_t k = 0; k < shape.size(); ++k) s.groups.push_back({GaussQ(static_cast<long>(k) + 1), shape[k]});
      s.transform = MatrixQ::identity(s.dimension());
      s = canonicalize(s);
      const auto g = build_graph(extract_family(s));
      all.emplace_back(signature_of(s), g);
      // DOT from an independently rebuilt family must be byte-identical
      c.expect(export_dot(g) == export_dot(build_graph(extract_family(canonicalize(s)))), "DOT determinism");
    }
  }
  std::size_t pairs = 0;
  for (const auto& [sa, ga] : all)
    for (const auto& [sb, gb] : all) {
      ++pairs;
      c.expect(t::label_isomorphic(ga, gb) == (sa == sb), sa.to_string() + " vs " + sb.to_string());
    }
  c.note(std::to_string(all.size()) + " structures, " + std::to_string(pairs) + " pairs");
  return c;
}

// ---------------------------------------------------------------- AC9

Check ac9() {
  Check c;
  t::Rng rng(1009);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    HybridOperatorSpec s;
    const std::size_t nd = t::uniform_index(rng, 1, 3);
    auto eig = t::random_float_eigenvalues(rng, nd);
    for (auto& e : eig) e += Complex(0.0, 1.5);  // keep clear of the real segment
    for (const auto& e : eig) s.discrete.push_back({e, t::uniform_index(rng, 1, 3), t::uniform_index(rng, 1, 2)});
    s.continuous = HybridOperatorSpec::midpoint_nodes(-1.0, 1.0, t::uniform_index(rng, 2, 6), t::uniform_index(rng, 1, 2));
    s.transform = seeded_transform(s.dimension(), rng());
    const auto r = realize(s);
    for (const auto& f : {SeriesFunction::exp(), SeriesFunction::sin(), SeriesFunction::cos()}) {
      const MatrixF a = apply_hybrid(f, s);
      const MatrixF b = apply_single(f, r.family);
      const double err = norm_inf(MatrixF(a - b)) / std::max(1.0, norm_inf(b));
      worst = std::max(worst, err);
      c.expect(err < 1e-9, f.name() + " hybrid vs Jordan route " + fmt(err));
    }
  }
  // midpoint refinement on the weighted trace of exp over [0, 1]
  const double exact = std::exp(1.0) - 1.0;
  std::vector<double> errors;
  for (std::size_t n : {4u, 8u, 16u, 32u, 64u}) {
    HybridOperatorSpec s;
    s.continuous = HybridOperatorSpec::midpoint_nodes(0.0, 1.0, n, 1);
    s.transform = seeded_transform(n, 99);
    const auto r = realize(s);
    errors.push_back(std::abs(weighted_trace(apply_hybrid(SeriesFunction::exp(), s), r) - Complex(exact, 0.0)));
  }
  std::string ratios;
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double q = errors[i - 1] / errors[i];
    ratios += (ratios.empty() ? "" : ", ") + fmt(q);
    c.expect(q > 4.0 / 1.5 && q < 4.0 * 1.5, "refinement ratio " + fmt(q));
  }
  // Fredholm determinant against det(I + A) with A similar to diag(2^-i)
  std::vector<Complex> eig, ones, diag;
  for (int i = 1; i <= 30; ++i) {
    eig.push_back(Complex(std::ldexp(1.0, -i), 0.0));
    ones.push_back(Complex(1.0, 0.0));
  }
  const MatrixF tr = seeded_transform(30, 5);
  const MatrixF a = tr * MatrixF::diagonal(eig) * inverse(tr);
  const double ferr = std::abs(fredholm_det<Complex>(eig, ones) - determinant(MatrixF(MatrixF::identity(30) + a)));
  c.expect(ferr < 1e-12, "Fredholm vs det(I + A) " + fmt(ferr));
  c.note("20 mixed specs, max relative residual " + fmt(worst) + "; refinement ratios " + ratios +
         "; Fredholm error " + fmt(ferr));
  return c;
}

// ---------------------------------------------------------------- AC10

Check ac10() {
  Check c;
  const double rounded[4][4] = {{8.23, -1.91, 0.09, -2.14},
                                {3.32, 2.73, 0.73, -1.59},
                                {1.43, -0.23, 2.27, -0.66},
                                {3.05, -1.18, -1.18, 1.77}};
  const JordanSpec<GaussQ> spec{MatrixQ{{1, 2, 3, 4}, {0, 1, 4, 3}, {2, 0, 1, 1}, {3, 4, 1, 2}},
                                {{GaussQ(2), {1}}, {GaussQ(3), {1}}, {GaussQ(5), {2}}}};
  const MatrixQ x = assemble(spec);
  const MatrixF xf = to_float(x);
  double worst = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) worst = std::max(worst, std::abs(xf(i, j) - Complex(rounded[i][j], 0.0)));
  c.expect(worst <= 0.01, "entrywise deviation " + fmt(worst));
  c.expect(determinant(x) == GaussQ(150), "det = 150");
  c.expect(trace(x) == GaussQ(15), "trace = 15");
  c.expect(t::oracle_rank(x) == 4 && rank_with_tol(x) == 4, "rank = 4");
  c.note("max deviation from two-decimal entries " + fmt(worst));
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
      {"AC1 family invariants", ac1},
      {"AC2 decomposition oracle", ac2},
      {"AC3 single-variable mapping", ac3},
      {"AC4 multi-variable mapping", ac4},
      {"AC5 mixed-term necessity", ac5},
      {"AC6 analogy properties", ac6},
      {"AC7 enumeration", ac7},
      {"AC8 structure graph", ac8},
      {"AC9 hybrid harness", ac9},
      {"AC10 worked example", ac10},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
      const Check c = fn();
      ok = c.ok();
      detail = c.summary();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s (%.2fs): %s\n", ok ? "PASS" : "FAIL", name.c_str(), secs, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
