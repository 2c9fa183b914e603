#include "commands.hpp"

#include "run_meta.hpp"

#include <coda_ica/coda.hpp>
#include <coda_ica/csv.hpp>
#include <coda_ica/eval.hpp>
#include <coda_ica/pipeline.hpp>
#include <coda_ica/rng.hpp>
#include <coda_ica/scatter.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace coda_ica::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string path_in(const std::string& dir, const std::string& file) {
  return (fs::path(dir) / file).string();
}

std::vector<std::string> numbered(const std::string& prefix, Index count) {
  std::vector<std::string> names;
  for (Index i = 1; i <= count; ++i) names.push_back(prefix + std::to_string(i));
  return names;
}

/// CSV with a leading text column of row labels.
void write_labelled(const std::string& path, const std::string& label_header,
                    const std::vector<std::string>& labels, const std::vector<std::string>& names,
                    const Matrix& values) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write '" + path + "'");
  out << label_header;
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (Index i = 0; i < values.rows(); ++i) {
    out << labels[static_cast<std::size_t>(i)];
    for (Index j = 0; j < values.cols(); ++j) out << ',' << csv::format_double(values(i, j));
    out << '\n';
  }
}

void write_text_rows(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write '" + path + "'");
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << row[j];
    out << '\n';
  }
}

json matrix_json(const Matrix& M) {
  json rows = json::array();
  for (Index i = 0; i < M.rows(); ++i) {
    json r = json::array();
    for (Index j = 0; j < M.cols(); ++j) r.push_back(M(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Matrix json_matrix(const json& j, const char* what) {
  if (!j.is_array() || j.empty() || !j.front().is_array())
    throw DomainError(std::string("expected a matrix for '") + what + "'");
  const auto rows = static_cast<Index>(j.size());
  const auto cols = static_cast<Index>(j.front().size());
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& r = j[static_cast<std::size_t>(i)];
    if (static_cast<Index>(r.size()) != cols) throw DomainError(std::string("ragged matrix '") + what + "'");
    for (Index c = 0; c < cols; ++c) M(i, c) = r[static_cast<std::size_t>(c)].get<double>();
  }
  return M;
}

Vector json_vector(const json& j, const char* what) {
  if (!j.is_array()) throw DomainError(std::string("expected a vector for '") + what + "'");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = j[i].get<double>();
  return v;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  return json::parse(in);
}

ContrastMatrix load_basis(const std::string& path, Index parts, char delim) {
  if (path.empty()) return contrast_matrix(parts);
  const csv::Table t = csv::read_table_file(path, delim);
  if (t.values.rows() != parts || t.values.cols() != parts - 1) {
    std::ostringstream os;
    os << "basis '" << path << "' must be " << parts << " x " << parts - 1 << ", got "
       << t.values.rows() << " x " << t.values.cols();
    throw DomainError(os.str());
  }
  return ContrastMatrix::from_matrix(t.values, fs::path(path).stem().string());
}

/// "IC.3" or "3" (1-based) against the column names of a scores table.
Index component_index(const std::string& component, const std::vector<std::string>& names) {
  for (std::size_t j = 0; j < names.size(); ++j)
    if (names[j] == component) return static_cast<Index>(j);
  long long k = 0;
  const char* first = component.data();
  const char* last = first + component.size();
  auto [ptr, ec] = std::from_chars(first, last, k);
  if (ec == std::errc() && ptr == last && k >= 1 && k <= static_cast<long long>(names.size()))
    return static_cast<Index>(k - 1);
  throw DomainError("no component '" + component + "' (have " + std::to_string(names.size()) +
                    " components)");
}

json density_json(const DensityEstimate& e) {
  json d;
  d["bandwidth"] = e.bandwidth;
  d["grid_points"] = e.grid.size();
  d["minima"] = e.minima.size();
  d["dominant_minima"] =
      std::count_if(e.minima.begin(), e.minima.end(), [](const LocalMinimum& m) { return m.dominant; });
  return d;
}

void write_density(const std::string& dir, const std::string& suffix, const DensityEstimate& e) {
  Matrix curve(e.grid.size(), 2);
  curve << e.grid, e.density;
  csv::write_table_file(path_in(dir, "density" + suffix + ".csv"), {"x", "density"}, curve);
  Matrix minima(static_cast<Index>(e.minima.size()), 4);
  for (std::size_t i = 0; i < e.minima.size(); ++i) {
    const auto r = static_cast<Index>(i);
    minima(r, 0) = e.minima[i].location;
    minima(r, 1) = e.minima[i].density;
    minima(r, 2) = e.minima[i].prominence;
    minima(r, 3) = e.minima[i].dominant ? 1.0 : 0.0;
  }
  csv::write_table_file(path_in(dir, "minima" + suffix + ".csv"),
                        {"location", "density", "prominence", "dominant"}, minima);
}

/// "kjade(2)" -> ("kjade", "2"); "fobi" -> ("fobi", "").
std::pair<std::string, std::string> split_method(const std::string& method) {
  const auto open = method.find('(');
  if (open == std::string::npos) return {method, ""};
  if (method.back() != ')') throw DomainError("malformed method '" + method + "'");
  return {method.substr(0, open), method.substr(open + 1, method.size() - open - 2)};
}

EstimatorSpec make_spec(const IcaConfig& cfg) {
  const auto [name, arg] = split_method(cfg.method);
  EstimatorSpec spec;
  spec.kind = EstimatorSpec::parse_kind(name);
  spec.nonlinearities = cfg.g;
  if (spec.kind == EstimatorSpec::Kind::kjade) {
    spec.k = cfg.k;
    if (!arg.empty()) {
      long long k = 0;
      auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), k);
      if (ec != std::errc() || ptr != arg.data() + arg.size())
        throw DomainError("kjade needs an integer band width, got '" + arg + "'");
      if (cfg.k != 0 && cfg.k != k) throw DomainError("conflicting --k and " + cfg.method);
      spec.k = k;
    }
    if (spec.k == 0) throw DomainError("kjade needs a band width: --k or kjade(k)");
  } else if (!arg.empty()) {
    if (spec.kind == EstimatorSpec::Kind::fobi || spec.kind == EstimatorSpec::Kind::jade)
      throw DomainError("method " + name + " takes no argument");
    if (!cfg.g.empty()) throw DomainError("give the nonlinearity either in --method or --g, not both");
    spec.nonlinearities = {arg};
  }
  if (cfg.k != 0 && spec.kind != EstimatorSpec::Kind::kjade)
    throw DomainError("--k only applies to kjade");
  // Ids are checked before any data is read.
  for (const auto& id : spec.nonlinearities) (void)Nonlinearity::from_id(id);

  spec.fastica.tol = cfg.tol;
  spec.fastica.max_iter = cfg.max_iter;
  spec.fastica.restarts = cfg.restarts;
  spec.fastica.seed = cfg.seed;
  if (cfg.init == "random")
    spec.fastica.init = FastIcaOptions::Init::random_orthogonal;
  else if (cfg.init == "identity")
    spec.fastica.init = FastIcaOptions::Init::identity;
  else
    throw DomainError("--init must be 'random' or 'identity'");
  spec.fastica.validate();
  if (cfg.jade_cap < 1) throw DomainError("--jade-cap must be >= 1");
  spec.algebraic.jade_dim_cap = cfg.jade_cap;
  return spec;
}

json options_json(const IcaConfig& cfg, const EstimatorSpec& spec) {
  json o;
  o["input"] = cfg.input;
  o["delim"] = std::string(1, cfg.delim);
  o["kappa"] = cfg.kappa;
  o["method"] = spec.tag();
  if (spec.kind == EstimatorSpec::Kind::kjade) o["k"] = spec.k;
  o["nonlinearities"] = spec.nonlinearities;
  o["tol"] = cfg.tol;
  o["max_iter"] = cfg.max_iter;
  o["restarts"] = cfg.restarts;
  o["init"] = cfg.init;
  o["jade_dim_cap"] = cfg.jade_cap;
  o["basis"] = cfg.basis.empty() ? std::string(ContrastMatrix::kStandardId) : cfg.basis;
  o["emit"] = cfg.emit;
  if (!cfg.truth.empty()) o["truth"] = cfg.truth;
  return o;
}

json diagnostics_json(const Diagnostics& d) {
  json j;
  j["converged"] = d.converged;
  j["iterations"] = d.iterations;
  j["restarts"] = d.restarts;
  j["a4_warning"] = d.a4_warning;
  j["non_identifiable"] = d.non_identifiable;
  if (!d.pilot.empty()) j["pilot"] = d.pilot;
  if (!d.criterion.empty()) j["criterion"] = d.criterion;
  if (d.eigenvalues.size() > 0) j["cov4_eigenvalues"] = vector_json(d.eigenvalues);
  json comps = json::array();
  for (std::size_t i = 0; i < d.components.size(); ++i) {
    const ComponentInfo& c = d.components[i];
    json e;
    e["component"] = "IC." + std::to_string(i + 1);
    e["raw_index"] = c.raw_index + 1;
    e["kurtosis"] = c.kurtosis;
    e["skewness"] = c.skewness;
    if (!c.nonlinearity.empty()) e["nonlinearity"] = c.nonlinearity;
    if (std::isfinite(c.objective)) e["objective"] = c.objective;
    if (std::isfinite(c.alpha)) e["alpha"] = c.alpha;
    if (c.extraction_position >= 0) e["extraction_position"] = c.extraction_position + 1;
    comps.push_back(std::move(e));
  }
  j["components"] = std::move(comps);
  return j;
}

const std::set<std::string>& plain_emits() {
  static const std::set<std::string> s{"scores", "loadings-ilr", "loadings-clr", "kurtosis-table", "scree"};
  return s;
}

std::vector<std::string> effective_emits(const std::vector<std::string>& emit) {
  if (!emit.empty()) return emit;
  return {"scores", "loadings-ilr", "loadings-clr", "kurtosis-table"};
}

void check_emits(const std::vector<std::string>& emit) {
  for (const auto& e : emit) {
    if (plain_emits().count(e) || e.rfind("density:", 0) == 0) continue;
    throw DomainError("unknown --emit value '" + e +
                      "' (valid: scores, loadings-ilr, loadings-clr, kurtosis-table, scree, density:<component>)");
  }
}

}  // namespace

char parse_delimiter(const std::string& text) {
  if (text == "tab" || text == "\\t" || text == "\t") return '\t';
  if (text == "comma") return ',';
  if (text == "semicolon") return ';';
  if (text.size() == 1 && text != "\"" && text != "." && text != "-" && text != "+") return text[0];
  throw DomainError("unsupported delimiter '" + text + "'");
}

int cmd_transform(const TransformConfig& cfg) {
  json meta;
  meta["options"] = {{"input", cfg.input}, {"inverse", cfg.inverse}, {"kappa", cfg.kappa},
                     {"emit", cfg.emit}, {"basis", cfg.basis}};
  return run_with_meta("transform", cfg.out, meta, [&](json& m) {
    Stopwatch clock;
    if (!(cfg.kappa > 0.0) || !std::isfinite(cfg.kappa)) throw DomainError("--kappa must be positive");
    if (cfg.inverse.empty()) {
      std::vector<std::string> emit = cfg.emit.empty() ? std::vector<std::string>{"clr", "ilr"} : cfg.emit;
      for (const auto& e : emit)
        if (e != "clr" && e != "ilr") throw DomainError("transform --emit takes clr and/or ilr, got '" + e + "'");
      const CompositionMatrix X = csv::read_composition_file(cfg.input, cfg.delim);
      m["timings_ms"]["read"] = clock.lap();
      m["rows"] = X.rows();
      m["parts"] = X.parts();
      for (const auto& e : emit) {
        if (e == "clr") {
          csv::write_table_file(path_in(cfg.out, "clr.csv"), X.part_names(), clr_rows(X.data()));
        } else {
          const ContrastMatrix V = load_basis(cfg.basis, X.parts(), cfg.delim);
          csv::write_table_file(path_in(cfg.out, "ilr.csv"), numbered("ilr.", X.parts() - 1),
                                ilr_rows(X.data(), V));
          m["basis"] = V.basis_id();
        }
      }
      m["timings_ms"]["transform"] = clock.lap();
      return;
    }
    if (cfg.inverse != "clr" && cfg.inverse != "ilr") throw DomainError("--inverse takes clr or ilr");
    const csv::Table t = csv::read_table_file(cfg.input, cfg.delim);
    m["timings_ms"]["read"] = clock.lap();
    Matrix comp;
    std::vector<std::string> names;
    if (cfg.inverse == "clr") {
      comp = clr_inv_rows(t.values, cfg.kappa);
      names = cfg.parts.empty() ? t.names : cfg.parts;
    } else {
      const Index d = t.values.cols() + 1;
      const ContrastMatrix V = load_basis(cfg.basis, d, cfg.delim);
      comp = ilr_inv_rows(t.values, V, cfg.kappa);
      names = cfg.parts.empty() ? numbered("x.", d) : cfg.parts;
      m["basis"] = V.basis_id();
    }
    if (static_cast<Index>(names.size()) != comp.cols())
      throw DomainError("--parts has " + std::to_string(names.size()) + " names for " +
                        std::to_string(comp.cols()) + " parts");
    csv::write_table_file(path_in(cfg.out, "composition.csv"), names, comp);
    m["rows"] = comp.rows();
    m["parts"] = comp.cols();
    m["timings_ms"]["transform"] = clock.lap();
  });
}

int cmd_simulate(const SimulateConfig& cfg) {
  json meta;
  meta["seed"] = cfg.seed;
  meta["options"] = {{"n", cfg.n}, {"parts", cfg.parts}, {"sources", cfg.sources},
                     {"kappa", cfg.kappa}, {"max_condition", cfg.max_condition}};
  return run_with_meta("simulate", cfg.out, meta, [&](json& m) {
    Stopwatch clock;
    if (cfg.parts < 2) throw DomainError("--parts must be >= 2");
    if (cfg.n < 2) throw DomainError("--n must be >= 2");
    if (!(cfg.kappa > 0.0)) throw DomainError("--kappa must be positive");
    if (!(cfg.max_condition >= 1.0)) throw DomainError("--max-condition must be >= 1");
    const Index p = cfg.parts - 1;
    std::vector<SourceSpec> sources;
    if (cfg.sources.empty()) {
      const std::vector<SourceSpec> pool{SourceSpec::uniform(), SourceSpec::exponential(), SourceSpec::laplace()};
      for (Index j = 0; j < p; ++j) sources.push_back(pool[static_cast<std::size_t>(j) % pool.size()]);
    } else {
      for (const auto& s : cfg.sources) sources.push_back(SourceSpec::parse(s));
      if (static_cast<Index>(sources.size()) != p)
        throw DomainError("--sources needs parts - 1 = " + std::to_string(p) + " entries, got " +
                          std::to_string(sources.size()));
    }
    const Matrix A = random_mixing(p, mix_seed(cfg.seed, 1), cfg.max_condition);
    Rng rng(mix_seed(cfg.seed, 2));
    const Vector b = rng.normal_matrix(p, 1);
    const SimulatedData sim = simulate_ic_data(cfg.n, sources, A, b, cfg.seed);
    const ContrastMatrix V = contrast_matrix(cfg.parts);
    const Matrix comp = ilr_inv_rows(sim.X, V, cfg.kappa);
    m["timings_ms"]["simulate"] = clock.lap();

    csv::write_table_file(path_in(cfg.out, "composition.csv"), numbered("x.", cfg.parts), comp);
    json truth;
    json names = json::array();
    for (const auto& s : sources) names.push_back(s.name());
    truth["sources"] = names;
    truth["seed"] = cfg.seed;
    truth["n"] = cfg.n;
    truth["kappa"] = cfg.kappa;
    truth["basis"] = V.basis_id();
    truth["A_ilr"] = matrix_json(A);
    truth["b"] = vector_json(b);
    truth["V"] = matrix_json(V.matrix());
    std::ofstream out(path_in(cfg.out, "truth.json"));
    if (!out) throw DomainError("cannot write truth.json");
    out << truth.dump(2) << '\n';
    m["sources"] = names;
    m["timings_ms"]["write"] = clock.lap();
  });
}

int cmd_ica(const IcaConfig& cfg) {
  json meta;
  meta["seed"] = cfg.seed;
  meta["method"] = cfg.method;
  return run_with_meta("ica", cfg.out, meta, [&](json& m) {
    Stopwatch clock;
    const EstimatorSpec spec = make_spec(cfg);
    m["options"] = options_json(cfg, spec);
    check_emits(cfg.emit);
    if (!(cfg.kappa > 0.0) || !std::isfinite(cfg.kappa)) throw DomainError("--kappa must be positive");
    if (cfg.grid < 3) throw DomainError("--grid must be >= 3");

    const CompositionMatrix X = csv::read_composition_file(cfg.input, cfg.delim);
    spec.validate(X.parts() - 1);
    const ContrastMatrix V = load_basis(cfg.basis, X.parts(), cfg.delim);
    m["rows"] = X.rows();
    m["parts"] = X.parts();
    m["timings_ms"]["read"] = clock.lap();

    const CodaIcaResult r = [&] {
      try {
        return compositional_ica(X, spec, V);
      } catch (const JointDiagError& e) {
        m["diagnostics"] = {{"converged", false}, {"sweeps", e.partial().sweeps},
                            {"off_criterion", e.partial().off_criterion}};
        throw;
      }
    }();
    m["timings_ms"]["fit"] = clock.lap();
    m["method"] = r.base.method;
    m["diagnostics"] = diagnostics_json(r.base.diagnostics);
    for (const auto& w : r.base.diagnostics.warnings) m["warnings"].push_back(w);

    const Index p = r.base.W.rows();
    const auto ic_names = numbered("IC.", p);
    const auto ilr_names = numbered("ilr.", p);

    if (!cfg.truth.empty()) {
      const json truth = read_json(cfg.truth);
      const Matrix A_truth = json_matrix(truth.at("A_ilr"), "A_ilr");
      Matrix V_truth = truth.contains("V") ? json_matrix(truth.at("V"), "V") : contrast_matrix(X.parts()).matrix();
      if (A_truth.rows() != p || V_truth.rows() != X.parts())
        throw DomainError("truth file does not match the input dimension");
      // Express the true mixing in the basis used for this run.
      const Matrix A_run = V.matrix().transpose() * V_truth * A_truth;
      m["md"] = md_index(r.base.W, A_run);
    }

    for (const auto& e : effective_emits(cfg.emit)) {
      if (e == "scores") {
        csv::write_table_file(path_in(cfg.out, "scores.csv"), ic_names, r.base.Z);
      } else if (e == "loadings-clr") {
        write_labelled(path_in(cfg.out, "loadings_clr.csv"), "component", ic_names, X.part_names(), r.W_clr);
      } else if (e == "loadings-ilr") {
        write_labelled(path_in(cfg.out, "loadings_ilr.csv"), "component", ic_names, ilr_names, r.base.W);
      } else if (e == "kurtosis-table") {
        std::vector<std::vector<std::string>> rows;
        for (Index i = 0; i < p; ++i) {
          const ComponentInfo& c = r.base.diagnostics.components[static_cast<std::size_t>(i)];
          rows.push_back({ic_names[static_cast<std::size_t>(i)], csv::format_double(c.kurtosis),
                          csv::format_double(c.skewness)});
        }
        write_text_rows(path_in(cfg.out, "kurtosis.csv"), {"component", "kurtosis", "skewness"}, rows);
      } else if (e == "scree") {
        const Vector& ev = r.base.diagnostics.eigenvalues;
        Matrix scree(p, ev.size() == p ? 3 : 2);
        for (Index i = 0; i < p; ++i) {
          scree(i, 0) = static_cast<double>(i + 1);
          scree(i, 1) = r.base.diagnostics.components[static_cast<std::size_t>(i)].kurtosis;
          if (ev.size() == p) scree(i, 2) = ev(i);
        }
        std::vector<std::string> cols{"rank", "kurtosis"};
        if (ev.size() == p) cols.push_back("cov4_eigenvalue");
        csv::write_table_file(path_in(cfg.out, "scree.csv"), cols, scree);
      } else {
        const std::string comp = e.substr(std::string("density:").size());
        const Index j = component_index(comp, ic_names);
        const DensityEstimate est = kernel_density(r.base.Z.col(j), cfg.grid);
        write_density(cfg.out, "_" + ic_names[static_cast<std::size_t>(j)], est);
        m["density"][ic_names[static_cast<std::size_t>(j)]] = density_json(est);
      }
    }
    if (spec.kind == EstimatorSpec::Kind::fastica_adaptive) {
      std::vector<std::vector<std::string>> rows;
      for (Index i = 0; i < p; ++i) {
        const ComponentInfo& c = r.base.diagnostics.components[static_cast<std::size_t>(i)];
        rows.push_back({ic_names[static_cast<std::size_t>(i)], c.nonlinearity,
                        std::isfinite(c.alpha) ? csv::format_double(c.alpha) : "NA",
                        std::to_string(c.extraction_position + 1)});
      }
      write_text_rows(path_in(cfg.out, "chosen_nonlinearities.csv"),
                      {"component", "nonlinearity", "alpha", "extraction_position"}, rows);
    }

    json model;
    model["method"] = r.base.method;
    model["part_names"] = X.part_names();
    model["kappa"] = cfg.kappa;
    model["basis"] = V.basis_id();
    model["V"] = matrix_json(V.matrix());
    model["W_ilr"] = matrix_json(r.base.W);
    model["A_ilr"] = matrix_json(r.base.A);
    model["b"] = vector_json(r.base.b);
    model["W_clr"] = matrix_json(r.W_clr);
    std::ofstream out(path_in(cfg.out, "model.json"));
    if (!out) throw DomainError("cannot write model.json");
    out << model.dump(2) << '\n';
    m["timings_ms"]["write"] = clock.lap();
  });
}

int cmd_density(const DensityConfig& cfg) {
  json meta;
  meta["options"] = {{"input", cfg.input}, {"component", cfg.component}, {"grid", cfg.grid},
                     {"dominance", cfg.dominance}};
  return run_with_meta("density", cfg.out, meta, [&](json& m) {
    Stopwatch clock;
    if (cfg.grid < 3) throw DomainError("--grid must be >= 3");
    if (!(cfg.dominance >= 0.0 && cfg.dominance < 1.0)) throw DomainError("--dominance must be in [0, 1)");
    const csv::Table t = csv::read_table_file(cfg.input, cfg.delim);
    const Index j = component_index(cfg.component, t.names);
    m["timings_ms"]["read"] = clock.lap();
    const DensityEstimate est = kernel_density(t.values.col(j), cfg.grid, cfg.dominance);
    m["component"] = t.names[static_cast<std::size_t>(j)];
    m["density"] = density_json(est);
    write_density(cfg.out, "", est);
    m["timings_ms"]["density"] = clock.lap();
  });
}

int cmd_reconstruct(const ReconstructConfig& cfg) {
  json meta;
  meta["options"] = {{"input", cfg.input}, {"signal", cfg.signal}, {"kappa", cfg.kappa}};
  return run_with_meta("reconstruct", cfg.out, meta, [&](json& m) {
    Stopwatch clock;
    if (!(cfg.kappa > 0.0) || !std::isfinite(cfg.kappa)) throw DomainError("--kappa must be positive");
    if (cfg.signal.empty()) throw DomainError("--signal needs at least one component");
    const json model = read_json(path_in(cfg.input, "model.json"));
    const Matrix A = json_matrix(model.at("A_ilr"), "A_ilr");
    const Vector b = json_vector(model.at("b"), "b");
    const ContrastMatrix V = ContrastMatrix::from_matrix(json_matrix(model.at("V"), "V"),
                                                         model.at("basis").get<std::string>());
    const auto part_names = model.at("part_names").get<std::vector<std::string>>();
    const csv::Table scores = csv::read_table_file(path_in(cfg.input, "scores.csv"));
    if (scores.values.cols() != A.cols())
      throw DomainError("scores.csv and model.json disagree on the number of components");
    m["method"] = model.at("method");
    m["timings_ms"]["read"] = clock.lap();

    std::vector<Index> indices;
    for (const auto& s : cfg.signal) indices.push_back(component_index(s, scores.names));
    const SignalPartition partition(indices, A.cols());
    const Reconstruction rec = reconstruct(scores.values, A, b, V, partition, cfg.kappa);
    json used = json::array();
    for (Index i : indices) used.push_back(scores.names[static_cast<std::size_t>(i)]);
    m["signal"] = used;
    csv::write_table_file(path_in(cfg.out, "reconstructed.csv"), part_names, rec.composition.data());
    m["timings_ms"]["reconstruct"] = clock.lap();
  });
}

}  // namespace coda_ica::cli
