#include "commands.hpp"

#include <fstream>
#include <map>
#include <memory>
#include <variant>

#include <CLI11.hpp>

#include "documents.hpp"
#include "output.hpp"
#include "spectracalc/analogy.hpp"
#include "spectracalc/asg.hpp"
#include "spectracalc/calculus.hpp"
#include "spectracalc/enumeration.hpp"
#include "spectracalc/hybrid.hpp"

namespace spectracalc::cli {

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::clustering_ambiguous:
    case ErrorKind::chain_construction:
    case ErrorKind::reconstruction:
    case ErrorKind::singular: return exit_code::decomposition_failed;
    case ErrorKind::out_of_radius:
    case ErrorKind::non_convergent: return exit_code::check_failed;
    case ErrorKind::parse: return exit_code::usage;
    case ErrorKind::dimension_mismatch:
    case ErrorKind::cap_exceeded:
    case ErrorKind::invalid_argument:
    case ErrorKind::invalid_family:
    case ErrorKind::structural_mismatch:
    case ErrorKind::unsupported_mode: return exit_code::data;
  }
  return exit_code::data;
}

namespace {

constexpr double check_threshold = 1e-6;

struct GlobalOptions {
  std::vector<std::string> tol;
  bool json = false;
  bool pretty = false;
};

void override_tolerances(const std::vector<std::string>& pairs, Tolerance& tol) {
  for (const auto& p : pairs) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw SpectralError(ErrorKind::parse, "--tol expects key=value, got '" + p + "'");
    const std::string key = p.substr(0, eq);
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(p.substr(eq + 1), &used);
      if (used != p.size() - eq - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw SpectralError(ErrorKind::parse, "--tol value for " + key + " is not a number");
    }
    apply_tolerances(json{{key, v}}, tol);
  }
}

MatrixDocument load(const std::string& path, const GlobalOptions& g) {
  auto doc = load_document(path);
  override_tolerances(g.tol, doc.tol);
  return doc;
}

template <class T>
struct Decomposition {
  JordanSpec<T> spec;
  SpectralFamily<T> family;
  Matrix<T> matrix;
};

using AnyDecomposition = std::variant<Decomposition<GaussQ>, Decomposition<Complex>>;

template <class T>
Decomposition<T> from_spec(const JordanSpec<T>& spec, const Tolerance& tol) {
  auto canon = canonicalize(spec);
  auto matrix = assemble(canon, tol);
  auto family = extract_family(canon, tol);
  return {std::move(canon), std::move(family), std::move(matrix)};
}

AnyDecomposition decompose_document(const MatrixDocument& doc) {
  const Tolerance& tol = doc.tol;
  switch (doc.kind) {
    case DocumentKind::structured:
      if (doc.spec_q) return from_spec(*doc.spec_q, tol);
      return from_spec(*doc.spec_f, tol);
    case DocumentKind::numeric:
      if (doc.entries_q) {
        if (doc.eigenvalues_q.empty())
          throw SpectralError(ErrorKind::invalid_argument,
                              doc.source + ": exact numeric documents need \"eigenvalues\" to decompose");
        auto spec = decompose(*doc.entries_q, doc.eigenvalues_q);
        auto family = extract_family(spec, tol);
        return Decomposition<GaussQ>{std::move(spec), std::move(family), *doc.entries_q};
      } else {
        auto spec = decompose(*doc.entries_f, tol);
        auto family = extract_family(spec, tol);
        return Decomposition<Complex>{std::move(spec), std::move(family), *doc.entries_f};
      }
    case DocumentKind::hybrid: {
      auto real = realize(*doc.hybrid, tol);
      return from_spec(real.spec, tol);
    }
  }
  throw SpectralError(ErrorKind::invalid_argument, "unknown document kind");
}

Decomposition<Complex> as_float(const AnyDecomposition& d) {
  if (const auto* f = std::get_if<Decomposition<Complex>>(&d)) return *f;
  const auto& q = std::get<Decomposition<GaussQ>>(d);
  return {to_float(q.spec), to_float(q.family), to_float(q.matrix)};
}

template <class T>
json groups_json(const JordanSpec<T>& spec) {
  json groups = json::array();
  for (const auto& g : spec.groups) {
    groups.push_back({{"eigenvalue", to_json(g.eigenvalue)},
                      {"blocks", g.block_sizes},
                      {"algebraic", g.algebraic()},
                      {"geometric", g.geometric()}});
  }
  return groups;
}

template <class T>
void print_groups(std::ostream& out, const JordanSpec<T>& spec) {
  for (std::size_t k = 0; k < spec.groups.size(); ++k) {
    const auto& g = spec.groups[k];
    out << "  eigenvalue " << format_scalar(g.eigenvalue) << ": blocks [";
    for (std::size_t i = 0; i < g.block_sizes.size(); ++i) out << (i ? "," : "") << g.block_sizes[i];
    out << "] (algebraic " << g.algebraic() << ", geometric " << g.geometric() << ")\n";
  }
}

// decompose and verify
int cmd_decompose(const std::string& path, const GlobalOptions& g, bool report_only, std::ostream& out) {
  const auto doc = load(path, g);
  const auto any = decompose_document(doc);
  return std::visit(
      [&](const auto& d) {
        const auto report = verify_family(d.family, doc.tol);
        const char* mode = ScalarTraits<std::decay_t<decltype(d.family.items[0].eigenvalue)>>::name;
        if (g.json) {
          json j{{"mode", mode}, {"dimension", d.family.dimension}, {"groups", groups_json(d.spec)},
                 {"verify", to_json(report)}};
          if (!report_only) {
            j["transform"] = to_json(d.spec.transform);
            json items = json::array();
            for (const auto& it : d.family.items) {
              items.push_back({{"group", it.group + 1},
                               {"block", it.block + 1},
                               {"eigenvalue", to_json(it.eigenvalue)},
                               {"block_size", it.block_size},
                               {"projector", to_json(it.projector)},
                               {"nilpotent", to_json(it.nilpotent)}});
            }
            j["family"] = std::move(items);
          }
          out << j.dump(2) << "\n";
        } else {
          out << "mode: " << mode << "\n";
          out << "dimension: " << d.family.dimension << "\n";
          out << "groups: " << d.spec.groups.size() << "\n";
          print_groups(out, d.spec);
          if (!report_only) {
            out << "transform U:\n";
            print_matrix(out, d.spec.transform);
            for (const auto& it : d.family.items) {
              out << "P(" << it.group + 1 << "," << it.block + 1 << ") eigenvalue " << format_scalar(it.eigenvalue)
                  << ", block size " << it.block_size << ":\n";
              print_matrix(out, it.projector);
              out << "N(" << it.group + 1 << "," << it.block + 1 << "):\n";
              print_matrix(out, it.nilpotent);
            }
          }
          print_report(out, report);
        }
        return report.ok() ? exit_code::ok : exit_code::decomposition_failed;
      },
      any);
}

template <class T>
int report_classification(const Decomposition<T>& x, const Decomposition<T>& y, const Tolerance& tol,
                          const GlobalOptions& g, std::ostream& out) {
  const auto outcome = check_analogous(x.spec, y.spec, tol);
  const auto sx = signature_of(x.spec);
  const auto sy = signature_of(y.spec);
  if (!outcome) {
    if (g.json) {
      out << json{{"analogous", false}, {"reason", outcome.reason}, {"signature_x", sx.to_string()},
                  {"signature_y", sy.to_string()}}
                 .dump(2)
          << "\n";
    } else {
      out << "not analogous: " << outcome.reason << "\n";
      out << "signature X: " << sx.to_string() << "\n";
      out << "signature Y: " << sy.to_string() << "\n";
    }
    return exit_code::not_analogous;
  }
  const auto& profile = *outcome.profile;
  const auto props = verify_props(x.spec, y.spec, profile, tol);
  const T det_x = determinant(x.matrix);
  const T det_y = determinant(y.matrix);
  T scale = ScalarTraits<T>::one();
  for (const auto& m : profile.matches)
    for (std::size_t a = 0; a < x.spec.groups[m.x_group].algebraic(); ++a) scale *= m.ratio;
  if (g.json) {
    json ratios = json::array();
    for (const auto& m : profile.matches) {
      ratios.push_back({{"x_eigenvalue", to_json(x.spec.groups[m.x_group].eigenvalue)},
                        {"y_eigenvalue", to_json(y.spec.groups[m.y_group].eigenvalue)},
                        {"ratio", to_json(m.ratio)}});
    }
    json checks = json::array();
    for (const auto* c : props.all()) checks.push_back(to_json(*c));
    out << json{{"analogous", true},
                {"signature", sx.to_string()},
                {"ratios", ratios},
                {"det_x", to_json(det_x)},
                {"det_y", to_json(det_y)},
                {"ratio_power_product", to_json(scale)},
                {"props", checks},
                {"props_passed", props.passed()}}
               .dump(2)
        << "\n";
  } else {
    out << "analogous\n";
    out << "signature: " << sx.to_string() << "\n";
    for (const auto& m : profile.matches) {
      out << "  " << format_scalar(x.spec.groups[m.x_group].eigenvalue) << " -> "
          << format_scalar(y.spec.groups[m.y_group].eigenvalue) << "  c = " << format_scalar(m.ratio) << "\n";
    }
    out << "det(X) = " << format_scalar(det_x) << ", det(Y) = " << format_scalar(det_y)
        << ", prod c^alpha = " << format_scalar(scale) << "\n";
    out << "props:\n";
    for (const auto* c : props.all()) {
      out << "  " << c->name << ": " << to_string(c->status);
      if (c->status != PropStatus::not_applicable) out << " (residual " << c->residual << ")";
      else out << " (" << c->detail << ")";
      out << "\n";
    }
  }
  return exit_code::ok;
}

int cmd_classify(const std::string& a, const std::string& b, const GlobalOptions& g, std::ostream& out) {
  const auto da = load(a, g);
  const auto db = load(b, g);
  if (da.dimension() != db.dimension()) {
    throw SpectralError(ErrorKind::dimension_mismatch, "dimensions differ: " + std::to_string(da.dimension()) +
                                                           " vs " + std::to_string(db.dimension()));
  }
  const auto x = decompose_document(da);
  const auto y = decompose_document(db);
  const auto* xq = std::get_if<Decomposition<GaussQ>>(&x);
  const auto* yq = std::get_if<Decomposition<GaussQ>>(&y);
  if (xq && yq) return report_classification(*xq, *yq, da.tol, g, out);
  return report_classification(as_float(x), as_float(y), da.tol, g, out);
}

int cmd_count(std::size_t m, std::size_t asymptotic, bool both, std::size_t cap, const GlobalOptions& g,
              std::ostream& out) {
  json j{{"m", m}};
  const bool within_cap = m >= 1 && m <= cap;
  if (!within_cap && asymptotic == 0) family_count(m, cap);  // throws with the cap message
  if (within_cap) {
    j["family_count"] = family_count(m, cap).get_str();
    if (both) j["unordered_count"] = family_count_unordered(m, cap).get_str();
  }
  if (asymptotic > 0) {
    const auto est = asymptotic_family_count(m, asymptotic);
    json a{{"groups", asymptotic}, {"estimate", est.value}, {"log_estimate", est.log_value}};
    if (within_cap) {
      const mpz_class exact = equal_split_family_count(m, asymptotic);
      a["exact"] = exact.get_str();
      a["ratio"] = std::exp(est.log_value - std::log(mpf_class(exact).get_d()));
    }
    j["asymptotic"] = std::move(a);
  }
  if (g.json) {
    out << j.dump(2) << "\n";
    return exit_code::ok;
  }
  if (within_cap) {
    out << "family_count(" << m << ") = " << j["family_count"].get<std::string>() << "\n";
    if (both) out << "unordered_count(" << m << ") = " << j["unordered_count"].get<std::string>() << "\n";
  } else {
    out << "family_count(" << m << "): skipped, m exceeds cap " << cap << "\n";
  }
  if (asymptotic > 0) {
    const auto& a = j["asymptotic"];
    out << "asymptotic(m=" << m << ", K=" << asymptotic << ") = " << a["estimate"].get<double>() << " (log "
        << a["log_estimate"].get<double>() << ")\n";
    if (a.contains("exact")) {
      out << "P(" << m / asymptotic << ")^" << asymptotic << " = " << a["exact"].get<std::string>() << "\n";
      out << "ratio estimate/exact = " << a["ratio"].get<double>() << "\n";
    }
  }
  return exit_code::ok;
}

int cmd_graph(const std::string& path, const std::string& dot_path, const GlobalOptions& g, std::ostream& out) {
  const auto doc = load(path, g);
  const auto any = decompose_document(doc);
  const AsgGraph graph = std::visit([&](const auto& d) { return build_graph(d.family, doc.tol); }, any);
  const std::string dot = export_dot(graph);
  if (g.json) {
    json nodes = json::array();
    for (const auto& n : graph.nodes) {
      nodes.push_back({{"id", n.id}, {"kind", std::string(to_string(n.kind))}, {"k", n.group}, {"i", n.block},
                       {"block_size", n.block_size}, {"power", n.power}, {"eigenvalue", n.annotation}});
    }
    json edges = json::array();
    for (const auto& e : graph.edges) {
      edges.push_back({{"from", graph.nodes[e.from].id}, {"to", graph.nodes[e.to].id},
                       {"label", std::string(to_string(e.label))}});
    }
    out << json{{"nodes", nodes}, {"edges", edges}}.dump(2) << "\n";
  }
  if (!dot_path.empty()) {
    std::ofstream f(dot_path, std::ios::binary);
    if (!f) throw SpectralError(ErrorKind::parse, "cannot write " + dot_path);
    f << dot;
    if (!g.json) {
      out << "wrote " << dot_path << " (" << graph.nodes.size() << " nodes, " << graph.edges.size() << " edges)\n";
    }
  } else if (!g.json) {
    out << dot;
  }
  return exit_code::ok;
}

template <class T>
int report_apply(const Matrix<T>& result, const std::optional<Matrix<T>>& oracle, std::size_t degree,
                 const GlobalOptions& g, std::ostream& out) {
  double residual = 0.0;
  if (oracle) residual = norm_inf(Matrix<T>(result - *oracle));
  const bool ok = residual <= check_threshold;
  if (g.json) {
    json j{{"mode", ScalarTraits<T>::name}, {"result", to_json(result)}};
    if (oracle) j["check"] = {{"oracle_degree", degree}, {"residual", residual}, {"passed", ok}};
    out << j.dump(2) << "\n";
  } else {
    out << "f(X) [" << ScalarTraits<T>::name << "]:\n";
    print_matrix(out, result);
    if (oracle) {
      out << "oracle residual (degree " << degree << "): " << residual << (ok ? "" : "  FAILED") << "\n";
    }
  }
  return ok ? exit_code::ok : exit_code::check_failed;
}

int cmd_apply(const std::string& fn_path, const std::vector<std::string>& paths, std::size_t degree, bool check,
              const GlobalOptions& g, std::ostream& out) {
  const auto f = load_function(fn_path);
  if (paths.size() != f.arity()) {
    throw SpectralError(ErrorKind::dimension_mismatch, "function has arity " + std::to_string(f.arity()) + " but " +
                                                           std::to_string(paths.size()) + " matrices were given");
  }
  std::vector<MatrixDocument> docs;
  for (const auto& p : paths) docs.push_back(load(p, g));
  const Tolerance tol = docs.front().tol;
  const auto opts = SeriesOptions::from_environment();

  const bool all_hybrid =
      std::all_of(docs.begin(), docs.end(), [](const auto& d) { return d.kind == DocumentKind::hybrid; });
  if (all_hybrid) {
    std::vector<HybridOperatorSpec> specs;
    std::vector<MatrixF> mats;
    for (const auto& d : docs) {
      specs.push_back(*d.hybrid);
      mats.push_back(realize(*d.hybrid, d.tol).matrix);
    }
    const MatrixF result = apply_hybrid_multi(f, specs, opts, {}, tol);
    std::optional<MatrixF> oracle;
    if (check) oracle = series_oracle<Complex>(f, mats, degree);
    return report_apply(result, oracle, degree, g, out);
  }

  std::vector<AnyDecomposition> decs;
  for (const auto& d : docs) decs.push_back(decompose_document(d));
  const bool exact = f.supports_exact() && std::all_of(decs.begin(), decs.end(), [](const auto& d) {
                       return std::holds_alternative<Decomposition<GaussQ>>(d);
                     });
  if (exact) {
    std::vector<SpectralFamily<GaussQ>> fams;
    std::vector<MatrixQ> mats;
    for (const auto& d : decs) {
      fams.push_back(std::get<Decomposition<GaussQ>>(d).family);
      mats.push_back(std::get<Decomposition<GaussQ>>(d).matrix);
    }
    const MatrixQ result = apply_multi<GaussQ>(f, fams, opts);
    std::optional<MatrixQ> oracle;
    if (check) oracle = series_oracle<GaussQ>(f, mats, degree);
    return report_apply(result, oracle, degree, g, out);
  }
  std::vector<SpectralFamily<Complex>> fams;
  std::vector<MatrixF> mats;
  for (const auto& d : decs) {
    auto fd = as_float(d);
    fams.push_back(std::move(fd.family));
    mats.push_back(std::move(fd.matrix));
  }
  const MatrixF result = apply_multi<Complex>(f, fams, opts);
  std::optional<MatrixF> oracle;
  if (check) oracle = series_oracle<Complex>(f, mats, degree);
  return report_apply(result, oracle, degree, g, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Jordan structure, analogous families and spectral functional calculus", "spectracalc"};
  app.require_subcommand(1);
  // global options are accepted before or after the subcommand name
  std::vector<std::unique_ptr<GlobalOptions>> scopes;
  auto add_globals = [&scopes](CLI::App* a) {
    auto& g = *scopes.emplace_back(std::make_unique<GlobalOptions>());
    a->add_option("--tol", g.tol, "Tolerance override key=value (rank_eps, recon_eps, cluster_eps); repeatable")
        ->expected(1)
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    auto* json_flag = a->add_flag("--json", g.json, "Emit JSON with full precision");
    a->add_flag("--pretty", g.pretty, "Human-readable output, matrices to 4 decimals (default)")->excludes(json_flag);
  };
  add_globals(&app);

  std::string input, second, dot_path, fn_path;
  std::vector<std::string> matrices;
  std::size_t m = 0, asymptotic = 0, cap = default_family_cap, degree = 30;
  bool both = false, check = false;

  auto* decompose_cmd = app.add_subcommand("decompose", "Jordan structure and projector/nilpotent family");
  decompose_cmd->add_option("input", input, "Matrix document")->required();
  auto* verify_cmd = app.add_subcommand("verify", "Decompose and report only the family checks");
  verify_cmd->add_option("input", input, "Matrix document")->required();
  auto* classify_cmd = app.add_subcommand("classify", "Decide whether two matrices are analogous");
  classify_cmd->add_option("a", input, "First matrix document")->required();
  classify_cmd->add_option("b", second, "Second matrix document")->required();
  auto* count_cmd = app.add_subcommand("count", "Number of analogous families in dimension m");
  count_cmd->add_option("m", m, "Dimension")->required()->check(CLI::PositiveNumber);
  count_cmd->add_option("--asymptotic", asymptotic, "Closed-form estimate with K equal groups")
      ->check(CLI::PositiveNumber);
  count_cmd->add_flag("--both-conventions", both, "Also print the unordered-multiset count");
  count_cmd->add_option("--cap", cap, "Largest m for exact counting")->capture_default_str();
  auto* graph_cmd = app.add_subcommand("graph", "Analogous structure graph as Graphviz DOT");
  graph_cmd->add_option("input", input, "Matrix document")->required();
  graph_cmd->add_option("--dot", dot_path, "Write DOT to this path instead of stdout");
  auto* apply_cmd = app.add_subcommand("apply", "Evaluate f(X_1, ..., X_r) by spectral mapping");
  apply_cmd->add_option("function", fn_path, "Function document")->required();
  apply_cmd->add_option("matrices", matrices, "One matrix document per argument")->required();
  apply_cmd->add_option("--oracle-degree", degree, "Truncation degree of the series oracle")->capture_default_str();
  apply_cmd->add_flag("--check", check, "Compare against the truncated series oracle");
  for (auto* sub : {decompose_cmd, verify_cmd, classify_cmd, count_cmd, graph_cmd, apply_cmd}) add_globals(sub);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::ok : exit_code::usage;
  }
  GlobalOptions g;
  for (const auto& scope : scopes) {
    g.tol.insert(g.tol.end(), scope->tol.begin(), scope->tol.end());
    g.json = g.json || scope->json;
    g.pretty = g.pretty || scope->pretty;
  }
  if (g.json && g.pretty) {
    err << "--json and --pretty are mutually exclusive\n";
    return exit_code::usage;
  }

  try {
    if (*decompose_cmd) return cmd_decompose(input, g, false, out);
    if (*verify_cmd) return cmd_decompose(input, g, true, out);
    if (*classify_cmd) return cmd_classify(input, second, g, out);
    if (*count_cmd) return cmd_count(m, asymptotic, both, cap, g, out);
    if (*graph_cmd) return cmd_graph(input, dot_path, g, out);
    if (*apply_cmd) return cmd_apply(fn_path, matrices, degree, check, g, out);
  } catch (const SpectralError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const nlohmann::json::exception& e) {
    err << "error: parse: " << e.what() << "\n";
    return exit_code::usage;
  }
  return exit_code::usage;
}

}  // namespace spectracalc::cli
