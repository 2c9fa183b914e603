#include "commands.hpp"
#include "run_meta.hpp"

#include <coda_ica/nonlinearity.hpp>
#include <coda_ica/pipeline.hpp>
#include <coda_ica/types.hpp>

#include <CLI11.hpp>

#include <iostream>

using namespace coda_ica;
using namespace coda_ica::cli;

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Independent component analysis for compositional data"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string delim = ",";

  TransformConfig tcfg;
  auto* transform = app.add_subcommand("transform", "clr / ilr coordinates of a composition, or their inverse");
  transform->add_option("--input", tcfg.input, "CSV with a header of part names")->required();
  transform->add_option("--delim", delim, "Field delimiter (character, 'tab' or 'semicolon')");
  transform->add_option("--out", tcfg.out, "Output directory");
  transform->add_option("--emit", tcfg.emit, "clr and/or ilr (default: both)")->delimiter(',');
  transform->add_option("--inverse", tcfg.inverse, "Read clr or ilr coordinates and write composition.csv")
      ->check(CLI::IsMember({"clr", "ilr"}));
  transform->add_option("--parts", tcfg.parts, "Part names for the inverse output")->delimiter(',');
  transform->add_option("--kappa", tcfg.kappa, "Row total of the inverse output");
  transform->add_option("--basis", tcfg.basis, "CSV with a d x (d-1) contrast matrix");

  SimulateConfig scfg;
  auto* simulate = app.add_subcommand("simulate", "Compositions whose ilr coordinates follow an IC model");
  simulate->add_option("--n", scfg.n, "Number of rows");
  simulate->add_option("--parts", scfg.parts, "Number of parts d");
  simulate->add_option("--sources", scfg.sources,
                       "d-1 source laws: uniform, exponential, laplace, gaussian, t(df), two-point(p)")
      ->delimiter(',');
  simulate->add_option("--seed", scfg.seed, "Random seed");
  simulate->add_option("--kappa", scfg.kappa, "Row total");
  simulate->add_option("--max-condition", scfg.max_condition, "Condition number bound of the mixing matrix");
  simulate->add_option("--out", scfg.out, "Output directory");

  IcaConfig icfg;
  auto* ica = app.add_subcommand("ica", "Compositional ICA in ilr coordinates");
  ica->add_option("--input", icfg.input, "Composition CSV")->required();
  ica->add_option("--delim", delim, "Field delimiter");
  ica->add_option("--kappa", icfg.kappa, "Row total recorded for reconstruction");
  ica->add_option("--method", icfg.method,
                  "One of " + join(EstimatorSpec::kind_names()) + "; kjade(k) and fastica-*(g) also accepted");
  ica->add_option("--k", icfg.k, "Band width for kjade");
  ica->add_option("--g", icfg.g, "Nonlinearity id(s): " + join(Nonlinearity::valid_ids()))->delimiter(',');
  ica->add_option("--tol", icfg.tol, "FastICA convergence tolerance");
  ica->add_option("--max-iter", icfg.max_iter, "FastICA iteration limit");
  ica->add_option("--restarts", icfg.restarts, "FastICA restarts after a failed start");
  ica->add_option("--seed", icfg.seed, "Seed for FastICA starting values");
  ica->add_option("--init", icfg.init, "FastICA start: random or identity");
  ica->add_option("--jade-cap", icfg.jade_cap, "Largest dimension accepted by jade");
  ica->add_option("--out", icfg.out, "Output directory");
  ica->add_option("--emit", icfg.emit,
                  "scores, loadings-ilr, loadings-clr, kurtosis-table, scree, density:<component>")
      ->delimiter(',');
  ica->add_option("--truth", icfg.truth, "truth.json from simulate; adds md to run_meta.json");
  ica->add_option("--basis", icfg.basis, "CSV with a d x (d-1) contrast matrix");
  ica->add_option("--grid", icfg.grid, "Grid size for density emits");

  DensityConfig dcfg;
  auto* density = app.add_subcommand("density", "Kernel density of one score column");
  density->add_option("--input", dcfg.input, "scores.csv")->required();
  density->add_option("--delim", delim, "Field delimiter");
  density->add_option("--component", dcfg.component, "Column name (IC.3) or 1-based index");
  density->add_option("--grid", dcfg.grid, "Number of grid points");
  density->add_option("--dominance", dcfg.dominance, "Minimum relative prominence of a dominant minimum");
  density->add_option("--out", dcfg.out, "Output directory");

  ReconstructConfig rcfg;
  auto* rec = app.add_subcommand("reconstruct", "Composition restored from a subset of components");
  rec->add_option("--input", rcfg.input, "Output directory of a previous ica run")->required();
  rec->add_option("--signal", rcfg.signal, "Signal components (IC.k names or 1-based indices)")
      ->delimiter(',');
  rec->add_option("--kappa", rcfg.kappa, "Row total");
  rec->add_option("--out", rcfg.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  char d = ',';
  try {
    d = parse_delimiter(delim);
  } catch (const DomainError& e) {
    std::cerr << "coda-ica: " << e.what() << '\n';
    return kInputError;
  }

  if (*transform) {
    tcfg.delim = d;
    return cmd_transform(tcfg);
  }
  if (*simulate) return cmd_simulate(scfg);
  if (*ica) {
    icfg.delim = d;
    return cmd_ica(icfg);
  }
  if (*density) {
    dcfg.delim = d;
    return cmd_density(dcfg);
  }
  return cmd_reconstruct(rcfg);
}
