#include "documents.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "spectracalc/error.hpp"

namespace spectracalc::cli {

namespace {

[[noreturn]] void fail(const std::string& what) { throw SpectralError(ErrorKind::parse, what); }

// Shortest round-trip decimal, so 0.1 in a document means 1/10 in exact mode.
mpq_class rational_from_number(const json& j) {
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? mpq_class(std::to_string(j.get<std::uint64_t>()))
                                  : mpq_class(std::to_string(j.get<std::int64_t>()));
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail("non-finite number");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return GaussQ::parse_rational(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
}

mpq_class parse_real(const json& j) {
  if (j.is_number()) return rational_from_number(j);
  if (j.is_string()) return GaussQ::parse_rational(j.get<std::string>());
  fail("expected a number or rational string, got " + j.dump());
}

std::size_t parse_count(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 1)
    fail(std::string(what) + " must be a positive integer, got " + j.dump());
  return j.get<std::size_t>();
}

MatrixQ parse_transform(const json& j, std::size_t n) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "identity") return MatrixQ::identity(n);
    constexpr std::string_view prefix = "random_seed:";
    if (s.starts_with(prefix)) {
      std::uint64_t seed = 0;
      const char* first = s.data() + prefix.size();
      auto res = std::from_chars(first, s.data() + s.size(), seed);
      if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || first == res.ptr)
        fail("bad transform seed in '" + s + "'");
      return to_exact(seeded_transform(n, seed));
    }
    fail("unknown transform '" + s + "'");
  }
  return parse_matrix(j);
}

std::vector<JordanGroup<GaussQ>> parse_groups(const json& j) {
  if (!j.is_array() || j.empty()) fail("\"groups\" must be a nonempty array");
  std::vector<JordanGroup<GaussQ>> groups;
  for (const auto& g : j) {
    if (!g.is_object() || !g.contains("eigenvalue") || !g.contains("blocks"))
      fail("each group needs \"eigenvalue\" and \"blocks\"");
    JordanGroup<GaussQ> group{parse_scalar(g["eigenvalue"]), {}};
    if (!g["blocks"].is_array() || g["blocks"].empty()) fail("\"blocks\" must be a nonempty array");
    for (const auto& b : g["blocks"]) group.block_sizes.push_back(parse_count(b, "block size"));
    groups.push_back(std::move(group));
  }
  return groups;
}

HybridOperatorSpec parse_hybrid(const json& j) {
  HybridOperatorSpec spec;
  if (j.contains("discrete")) {
    for (const auto& d : j["discrete"]) {
      if (!d.is_array() || d.size() != 4) fail("discrete nodes are [re, im, m, multiplicity]");
      spec.discrete.push_back({{parse_real(d[0]).get_d(), parse_real(d[1]).get_d()},
                               parse_count(d[2], "nilpotency degree"),
                               parse_count(d[3], "multiplicity")});
    }
  }
  if (j.contains("continuous")) {
    const auto& c = j["continuous"];
    if (c.is_object()) {
      if (!c.contains("interval") || !c["interval"].is_array() || c["interval"].size() != 2)
        fail("continuous segment needs \"interval\": [a, b]");
      const double a = parse_real(c["interval"][0]).get_d();
      const double b = parse_real(c["interval"][1]).get_d();
      const std::size_t nodes = parse_count(c.value("nodes", json(8)), "nodes");
      const std::size_t m = parse_count(c.value("m", json(1)), "m");
      spec.continuous = HybridOperatorSpec::midpoint_nodes(a, b, nodes, m);
    } else if (c.is_array()) {
      for (const auto& node : c) {
        if (!node.is_object() || !node.contains("eigenvalue") || !node.contains("weight"))
          fail("explicit continuous nodes need \"eigenvalue\" and \"weight\"");
        spec.continuous.push_back({parse_scalar(node["eigenvalue"]).to_complex(), parse_real(node["weight"]).get_d(),
                                   parse_count(node.value("m", json(1)), "m")});
      }
    } else {
      fail("\"continuous\" must be an object or a node list");
    }
  }
  spec.transform = to_float(parse_transform(j.value("transform", json("identity")), spec.dimension()));
  return spec;
}

}  // namespace

GaussQ parse_scalar(const json& j) {
  if (j.is_array()) {
    if (j.size() != 2) fail("complex scalars are [re, im] pairs, got " + j.dump());
    return GaussQ(parse_real(j[0]), parse_real(j[1]));
  }
  return GaussQ(parse_real(j));
}

MatrixQ parse_matrix(const json& rows) {
  if (!rows.is_array() || rows.empty()) fail("matrix must be a nonempty array of rows");
  const std::size_t n = rows.size();
  std::size_t cols = 0;
  std::vector<GaussQ> entries;
  for (const auto& row : rows) {
    if (!row.is_array() || row.empty()) fail("matrix rows must be nonempty arrays");
    if (cols == 0) cols = row.size();
    if (row.size() != cols) fail("ragged matrix rows");
    for (const auto& e : row) entries.push_back(parse_scalar(e));
  }
  return MatrixQ(n, cols, std::move(entries));
}

void apply_tolerances(const json& j, Tolerance& tol) {
  if (!j.is_object()) fail("\"tolerances\" must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) fail("tolerance " + key + " must be a number");
    const double v = value.get<double>();
    if (key == "rank_eps") tol.rank_eps = v;
    else if (key == "recon_eps") tol.recon_eps = v;
    else if (key == "cluster_eps") tol.cluster_eps = v;
    else fail("unknown tolerance '" + key + "'");
  }
  tol.validate();
}

std::size_t MatrixDocument::dimension() const {
  if (spec_q) return spec_q->dimension();
  if (spec_f) return spec_f->dimension();
  if (entries_q) return entries_q->rows();
  if (entries_f) return entries_f->rows();
  if (hybrid) return hybrid->dimension();
  return 0;
}

MatrixDocument parse_document(const json& j, const std::string& source) {
  if (!j.is_object() || !j.contains("mode") || !j["mode"].is_string()) fail(source + ": missing \"mode\"");
  MatrixDocument doc;
  doc.source = source;
  if (j.contains("tolerances")) apply_tolerances(j["tolerances"], doc.tol);
  const auto mode = j["mode"].get<std::string>();
  if (mode == "structured") {
    doc.kind = DocumentKind::structured;
    doc.exact = j.value("exact", true);
    JordanSpec<GaussQ> spec;
    spec.groups = parse_groups(j.value("groups", json()));
    spec.transform = parse_transform(j.value("transform", json("identity")), spec.dimension());
    if (doc.exact) doc.spec_q = std::move(spec);
    else doc.spec_f = to_float(spec);
  } else if (mode == "numeric") {
    doc.kind = DocumentKind::numeric;
    doc.exact = j.value("exact", false);
    if (!j.contains("entries")) fail(source + ": numeric documents need \"entries\"");
    MatrixQ m(1, 1);
    if (j.contains("rows") || j.contains("cols")) {
      const std::size_t rows = parse_count(j.value("rows", json()), "rows");
      const std::size_t cols = parse_count(j.value("cols", json()), "cols");
      const auto& flat = j["entries"];
      if (!flat.is_array() || flat.size() != rows * cols) fail(source + ": expected rows*cols entries");
      std::vector<GaussQ> entries;
      for (const auto& e : flat) entries.push_back(parse_scalar(e));
      m = MatrixQ(rows, cols, std::move(entries));
    } else {
      m = parse_matrix(j["entries"]);
    }
    if (m.rows() != m.cols()) fail(source + ": matrix must be square");
    if (j.contains("eigenvalues")) {
      for (const auto& e : j["eigenvalues"]) doc.eigenvalues_q.push_back(parse_scalar(e));
    }
    if (doc.exact) doc.entries_q = std::move(m);
    else doc.entries_f = to_float(m);
  } else if (mode == "hybrid") {
    doc.kind = DocumentKind::hybrid;
    doc.hybrid = parse_hybrid(j);
  } else {
    fail(source + ": unknown mode '" + mode + "'");
  }
  return doc;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(path.string() + ": " + e.what());
  }
}

MatrixDocument load_document(const std::filesystem::path& path) {
  try {
    return parse_document(read_json(path), path.string());
  } catch (const json::exception& e) {
    fail(path.string() + ": " + e.what());
  }
}

SeriesFunction parse_function(const json& j) {
  if (!j.is_object()) fail("function document must be an object");
  if (j.contains("builtin")) {
    const auto name = j["builtin"].get<std::string>();
    const std::size_t arity = parse_count(j.value("arity", json(1)), "arity");
    auto univariate = [&](SeriesFunction f) {
      if (arity != 1) fail("builtin '" + name + "' takes one argument");
      return f;
    };
    if (name == "exp") return univariate(SeriesFunction::exp());
    if (name == "sin") return univariate(SeriesFunction::sin());
    if (name == "cos") return univariate(SeriesFunction::cos());
    if (name == "geometric") return univariate(SeriesFunction::geometric());
    if (name == "identity") return univariate(SeriesFunction::sparse(1, {{{1}, GaussQ(1)}}));
    if (name == "square") return univariate(SeriesFunction::sparse(1, {{{2}, GaussQ(1)}}));
    if (name == "exp_sum") return SeriesFunction::exp_sum(arity);
    if (name == "product") return SeriesFunction::product(arity);
    if (name == "sum") return SeriesFunction::sum(arity);
    fail("unknown builtin '" + name + "'");
  }
  if (j.contains("polynomial")) {
    std::vector<GaussQ> coeffs;
    for (const auto& c : j["polynomial"]) coeffs.push_back(parse_scalar(c));
    if (coeffs.empty()) fail("polynomial needs coefficients");
    return SeriesFunction::polynomial(coeffs);
  }
  if (j.contains("series")) {
    const auto& s = j["series"];
    const std::size_t arity = parse_count(s.value("arity", json(1)), "arity");
    std::map<Exponents, GaussQ> coeffs;
    for (const auto& c : s.value("coeffs", json::array())) {
      if (!c.is_array() || c.size() != arity + 2) fail("series coefficients are [l_1, ..., l_r, re, im]");
      Exponents l;
      for (std::size_t v = 0; v < arity; ++v) {
        if (!c[v].is_number_integer() || c[v].get<std::int64_t>() < 0) fail("exponents must be nonnegative integers");
        l.push_back(c[v].get<std::size_t>());
      }
      GaussQ a(parse_real(c[arity]), parse_real(c[arity + 1]));
      if (!coeffs.emplace(l, a).second) fail("duplicate series exponent");
    }
    std::vector<double> radii;
    if (s.contains("radii")) {
      for (const auto& r : s["radii"]) {
        if (r.is_string() && (r.get<std::string>() == "inf" || r.get<std::string>() == "infinity"))
          radii.push_back(infinite_radius);
        else radii.push_back(parse_real(r).get_d());
      }
    }
    return SeriesFunction::sparse(arity, std::move(coeffs), std::move(radii));
  }
  fail("function document needs \"builtin\", \"polynomial\" or \"series\"");
}

SeriesFunction load_function(const std::filesystem::path& path) {
  try {
    return parse_function(read_json(path));
  } catch (const json::exception& e) {
    fail(path.string() + ": " + e.what());
  }
}

}  // namespace spectracalc::cli
