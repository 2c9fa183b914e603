// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--cli PATH] [--only N] [--workdir DIR]
//
// Exit status is 0 only when every selected criterion passes.

#include <coda_ica/algebraic.hpp>
#include <coda_ica/coda.hpp>
#include <coda_ica/eval.hpp>
#include <coda_ica/fastica.hpp>
#include <coda_ica/pipeline.hpp>
#include <coda_ica/scatter.hpp>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <iostream>
#include <sstream>
#include <string>

using namespace coda_ica;
using namespace coda_ica::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Settings {
  std::string cli;
  fs::path workdir;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Matrix random_compositions(Index n, Index d, Rng& rng) { return random_composition_rows(n, d, rng); }

// 1 ------------------------------------------------------------------------
Outcome transform_exactness(const Settings&) {
  const auto t0 = std::chrono::steady_clock::now();
  double clr_sum = 0, simplex_ilr = 0, simplex_clr = 0, coord_ilr = 0, coord_clr = 0, ortho = 0, balance = 0;
  Rng rng(1);
  for (Index d : {3, 10, 48}) {
    const ContrastMatrix V = contrast_matrix(d);
    const Matrix& Vm = V.matrix();
    ortho = std::max(ortho, max_abs(Vm.transpose() * Vm - Matrix::Identity(d - 1, d - 1)));
    const Matrix X = closure_rows(random_compositions(1000, d, rng), 1.0);
    const Matrix C = clr_rows(X);
    const Matrix Y = ilr_rows(X, V);
    clr_sum = std::max(clr_sum, C.rowwise().sum().cwiseAbs().maxCoeff());
    simplex_ilr = std::max(simplex_ilr, ((ilr_inv_rows(Y, V, 1.0) - X).array() / X.array()).abs().maxCoeff());
    simplex_clr = std::max(simplex_clr, ((clr_inv_rows(C, 1.0) - X).array() / X.array()).abs().maxCoeff());
    for (Index i = 0; i < X.rows(); ++i) {
      const Vector y = Y.row(i).transpose();
      const Vector c = C.row(i).transpose();
      const double sy = std::max(1.0, y.cwiseAbs().maxCoeff());
      const double sc = std::max(1.0, c.cwiseAbs().maxCoeff());
      coord_ilr = std::max(coord_ilr, (Vm.transpose() * (Vm * y) - y).cwiseAbs().maxCoeff() / sy);
      coord_clr = std::max(coord_clr, (Vm * (Vm.transpose() * c) - c).cwiseAbs().maxCoeff() / sc);
      balance = std::max(balance, (ilr_balances(X.row(i).transpose()) - Vm.transpose() * c).cwiseAbs().maxCoeff() / sy);
    }
  }
  const double secs = seconds_since(t0);
  const double roundtrip = std::max({simplex_ilr, simplex_clr, coord_ilr, coord_clr});
  Outcome o;
  o.pass = clr_sum <= 1e-10 && roundtrip <= 1e-12 && ortho <= 1e-12 && balance <= 1e-12 && secs < 5.0;
  o.detail = "clr sum " + fmt(clr_sum) + ", roundtrip " + fmt(roundtrip) + ", V'V-I " + fmt(ortho) +
             ", balances " + fmt(balance) + ", " + fmt(secs) + " s";
  return o;
}

// 2 ------------------------------------------------------------------------
Outcome cov4_identity(const Settings&) {
  const auto t0 = std::chrono::steady_clock::now();
  const Index n = 5000, p = 6;
  Rng rng(2);
  Matrix X(n, p);
  for (Index j = 0; j < p; ++j)
    X.col(j) = (j % 2 ? SourceSpec::exponential() : SourceSpec::student_t(7)).sample(n, rng);
  X = X * rng.normal_matrix(p, p).transpose();
  X.rowwise() += rng.normal_matrix(1, p).row(0);
  const Matrix Xs = whiten(X).X_st;
  Matrix sum = static_cast<double>(p + 2) * Matrix::Identity(p, p);
  for (Index i = 0; i < p; ++i) sum += cumulant_matrix(Xs, i, i).C;
  const double err = max_abs(cov4(Xs) - sum / static_cast<double>(p + 2));
  const double secs = seconds_since(t0);
  return {err <= 1e-10 && secs < 5.0, "max deviation " + fmt(err) + ", " + fmt(secs) + " s"};
}

// 3 ------------------------------------------------------------------------
Outcome recovery_suite(const Settings&) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<SourceSpec> src{SourceSpec::uniform(), SourceSpec::exponential(), SourceSpec::laplace(),
                                    SourceSpec::two_point(0.3)};
  struct Entry {
    const char* name;
    double threshold;
    std::function<UnmixingResult(const Matrix&, const FastIcaOptions&)> run;
    std::vector<double> md;
  };
  std::vector<Entry> entries{
      {"fobi", 0.15, [](const Matrix& X, const FastIcaOptions&) { return fobi(X); }, {}},
      {"jade", 0.10, [](const Matrix& X, const FastIcaOptions&) { return jade(X); }, {}},
      {"kjade(2)", 0.10, [](const Matrix& X, const FastIcaOptions&) { return k_jade(X, 2); }, {}},
      {"defl pow3", 0.10,
       [](const Matrix& X, const FastIcaOptions& o) { return deflation_fastica(X, Nonlinearity::pow3(), o); }, {}},
      {"adaptive", 0.10,
       [](const Matrix& X, const FastIcaOptions& o) { return adaptive_deflation_fastica(X, candidate_set(), o); },
       {}},
      {"sym tanh", 0.10,
       [](const Matrix& X, const FastIcaOptions& o) { return symmetric_fastica(X, Nonlinearity::tanh(), o); }, {}},
      {"sqsym tanh", 0.10,
       [](const Matrix& X, const FastIcaOptions& o) {
         return squared_symmetric_fastica(X, Nonlinearity::tanh(), o);
       },
       {}},
  };
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Simulation s = simulate(20000, src, seed);
    FastIcaOptions opt;
    opt.seed = seed;
    for (auto& e : entries) {
      try {
        e.md.push_back(md_index(e.run(s.data.X, opt).W, s.A));
      } catch (const Error&) {
        e.md.push_back(1.0);
      }
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = secs < 120.0;
  std::string failed;
  for (const auto& e : entries) {
    const double med = median(e.md);
    const bool ok = med < e.threshold;
    o.pass = o.pass && ok;
    o.detail += std::string(o.detail.empty() ? "" : ", ") + e.name + " " + fmt(med) + (ok ? "" : " (over " + fmt(e.threshold) + ")");
  }
  o.detail = "median md: " + o.detail + "; " + fmt(secs) + " s";
  return o;
}

// 4 ------------------------------------------------------------------------
Outcome equal_kurtosis_separation(const Settings&) {
  const std::vector<SourceSpec> src{SourceSpec::laplace(), SourceSpec::laplace(), SourceSpec::uniform()};
  std::vector<double> md_fobi, md_jade;
  int warned = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Simulation s = simulate(20000, src, seed);
    const UnmixingResult f = fobi(s.data.X);
    md_fobi.push_back(md_index(f.W, s.A));
    md_jade.push_back(md_index(jade(s.data.X).W, s.A));
    if (f.diagnostics.a4_warning) ++warned;
  }
  const double mj = median(md_jade), mf = median(md_fobi);
  Outcome o;
  o.pass = mj < 0.10 && mf - mj >= 0.05 && warned >= 18;
  o.detail = "jade median " + fmt(mj) + ", fobi median " + fmt(mf) + ", gap warnings " + std::to_string(warned) + "/20";
  return o;
}

// 5 ------------------------------------------------------------------------
Outcome equivariance(const Settings&) {
  const std::vector<SourceSpec> src{SourceSpec::uniform(), SourceSpec::exponential(), SourceSpec::laplace(),
                                    SourceSpec::two_point(0.3)};
  double affine = 0.0, basis = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Simulation s = simulate(5000, src, 500 + seed);
    Rng rng(mix_seed(seed, 5));
    const Matrix M = random_mixing(4, mix_seed(seed, 6));
    const Matrix Y = (s.data.X * M.transpose()).rowwise() + rng.normal_matrix(1, 4).row(0);
    affine = std::max(affine, signed_perm_distance(fobi(s.data.X).Z, fobi(Y).Z));
    affine = std::max(affine, signed_perm_distance(jade(s.data.X).Z, jade(Y).Z));
    for (Index k = 1; k <= 4; ++k)
      affine = std::max(affine, signed_perm_distance(k_jade(s.data.X, k).Z, k_jade(Y, k).Z));

    const CompositionMatrix X(ilr_inv_rows(s.data.X, contrast_matrix(5), 1.0));
    const ContrastMatrix V2 =
        ContrastMatrix::from_matrix(contrast_matrix(5).matrix() * random_orthogonal(4, rng), "rotated");
    for (auto kind : {EstimatorSpec::Kind::fobi, EstimatorSpec::Kind::jade, EstimatorSpec::Kind::kjade}) {
      EstimatorSpec spec;
      spec.kind = kind;
      spec.k = 2;
      basis = std::max(basis, signed_perm_distance(compositional_ica(X, spec).base.Z,
                                                   compositional_ica(X, spec, V2).base.Z));
    }
  }
  return {affine <= 1e-6 && basis <= 1e-6, "affine max |dZ| " + fmt(affine) + ", basis max |dZ| " + fmt(basis)};
}

// 6 ------------------------------------------------------------------------
Outcome jade_sqsym(const Settings&) {
  std::vector<double> rel;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Simulation s = simulate(50000, three_sources(), 600 + seed);
    FastIcaOptions opt;
    opt.seed = seed;
    const Matrix Wj = jade(s.data.X).W;
    const Matrix Ws = squared_symmetric_fastica(s.data.X, Nonlinearity::pow3(), opt).W;
    const Matrix matched = match_to_reference(Ws, Wj).apply_rows(Ws);
    for (Index i = 0; i < 3; ++i) rel.push_back((matched.row(i) - Wj.row(i)).norm() / Wj.row(i).norm());
  }
  const double med = median(rel);
  return {med < 0.05, "median row-wise relative difference " + fmt(med) + ", max " +
                          fmt(*std::max_element(rel.begin(), rel.end()))};
}

// 7 ------------------------------------------------------------------------
Outcome kjade_boundaries(const Settings&) {
  double to_jade = 0.0, to_fobi = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Simulation s = simulate(20000, three_sources(), 700 + seed);
    to_jade = std::max(to_jade, signed_perm_distance(jade(s.data.X).Z, k_jade(s.data.X, 3).Z));
    to_fobi = std::max(to_fobi, signed_perm_distance(fobi(s.data.X).Z, k_jade(s.data.X, 1).Z));
  }
  Outcome o;
  o.pass = to_jade <= 1e-6 && to_fobi <= 1e-6;
  o.detail = "k=p vs jade max |dZ| " + fmt(to_jade) + (to_jade <= 1e-6 ? "" : " (over 1e-6)") +
             ", k=1 vs fobi max |dZ| " + fmt(to_fobi) + (to_fobi <= 1e-6 ? "" : " (over 1e-6)");
  return o;
}

// 8 ------------------------------------------------------------------------
Outcome gaussian_guards(const Settings&) {
  const std::vector<SourceSpec> src(3, SourceSpec::gaussian());
  struct Entry {
    const char* name;
    std::function<UnmixingResult(const Matrix&, const FastIcaOptions&)> run;
    int flagged = 0;
  };
  std::vector<Entry> entries{
      {"defl pow3", [](const Matrix& X, const FastIcaOptions& o) { return deflation_fastica(X, Nonlinearity::pow3(), o); }},
      {"adaptive", [](const Matrix& X, const FastIcaOptions& o) { return adaptive_deflation_fastica(X, candidate_set(), o); }},
      {"sym tanh", [](const Matrix& X, const FastIcaOptions& o) { return symmetric_fastica(X, Nonlinearity::tanh(), o); }},
      {"sqsym tanh", [](const Matrix& X, const FastIcaOptions& o) { return squared_symmetric_fastica(X, Nonlinearity::tanh(), o); }},
  };
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Simulation s = simulate(5000, src, 800 + seed);
    FastIcaOptions opt;
    opt.seed = seed;
    for (auto& e : entries) {
      try {
        if (e.run(s.data.X, opt).diagnostics.non_identifiable) ++e.flagged;
      } catch (const CriterionUndefined&) {
        ++e.flagged;
      } catch (const ConvergenceError&) {
        ++e.flagged;
      }
    }
  }
  Outcome o{true, ""};
  for (const auto& e : entries) {
    o.pass = o.pass && e.flagged == 20;
    o.detail += std::string(o.detail.empty() ? "" : ", ") + e.name + " " + std::to_string(e.flagged) + "/20";
  }
  o.detail = "flagged: " + o.detail;
  return o;
}

// 9 ------------------------------------------------------------------------
Outcome reconstruction(const Settings&) {
  double full = 0.0;
  int rank_one = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Index d = 3 + static_cast<Index>(seed % 6);
    std::vector<SourceSpec> src;
    for (Index j = 0; j < d - 1; ++j) src.push_back(three_sources()[static_cast<std::size_t>(j % 3)]);
    const Simulation s = simulate(500, src, 900 + seed);
    const double kappa = 1.0 + static_cast<double>(seed);
    const CompositionMatrix X(ilr_inv_rows(s.data.X, contrast_matrix(d), kappa));
    const CodaIcaResult r = compositional_ica(X, EstimatorSpec{});
    std::vector<Index> all(static_cast<std::size_t>(d - 1));
    std::iota(all.begin(), all.end(), Index{0});
    const Reconstruction rec = reconstruct(r, SignalPartition(all, d - 1), kappa);
    full = std::max(full, ((rec.composition.data() - X.data()).array() / X.data().array()).abs().maxCoeff());
    const Reconstruction one = reconstruct(r, SignalPartition({static_cast<Index>(seed % static_cast<std::uint64_t>(d - 1))}, d - 1));
    const Matrix centered = one.ilr.rowwise() - one.ilr.colwise().mean();
    if (numerical_rank(centered, 1e-8) == 1) ++rank_one;
  }
  return {full <= 1e-8 && rank_one == 100,
          "full partition max relative error " + fmt(full) + ", rank one " + std::to_string(rank_one) + "/100"};
}

// 10 -----------------------------------------------------------------------
Outcome density(const Settings&) {
  const Index n = 100000;
  Rng rng(10);
  Vector mix = rng.normal_matrix(n, 1);
  for (Index i = 0; i < n; ++i) mix(i) += (i % 2 ? 3.0 : -3.0);
  const Vector uni = rng.normal_matrix(n, 1);

  // Bandwidth from first principles: sd with n - 1, type 7 quartiles.
  std::vector<double> sorted(mix.data(), mix.data() + n);
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double q) {
    const double h = (static_cast<double>(n) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[std::min(lo + 1, sorted.size() - 1)] - sorted[lo]);
  };
  const double sd = std::sqrt((mix.array() - mix.mean()).square().sum() / static_cast<double>(n - 1));
  const double iqr = quantile(0.75) - quantile(0.25);
  const double h_expected = 0.9 * std::min(sd, iqr / 1.34) * std::pow(static_cast<double>(n), -0.2);

  const DensityEstimate bi = kernel_density(mix);
  const DensityEstimate un = kernel_density(uni);
  int dominant = 0;
  bool centred = true;
  for (const auto& m : bi.minima) {
    if (!m.dominant) continue;
    ++dominant;
    centred = centred && m.location > -1.0 && m.location < 1.0;
  }
  int control = 0;
  for (const auto& m : un.minima) control += m.dominant ? 1 : 0;
  const double h_err = std::abs(bi.bandwidth - h_expected) / h_expected;
  return {dominant == 1 && centred && control == 0 && h_err < 1e-12,
          "mixture dominant minima " + std::to_string(dominant) + (centred ? " in (-1, 1)" : " outside (-1, 1)") +
              ", control " + std::to_string(control) + ", bandwidth rel. error " + fmt(h_err)};
}

// 11 -----------------------------------------------------------------------
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Compares two output directories. run_meta.json is compared with the wall
// clock timings removed; every other file byte for byte.
bool same_outputs(const fs::path& a, const fs::path& b, std::string& why) {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(a)) names.push_back(e.path().filename().string());
  std::size_t count_b = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(b)) ++count_b;
  if (names.size() != count_b) {
    why = a.filename().string() + ": different file sets";
    return false;
  }
  for (const auto& n : names) {
    if (!fs::exists(b / n)) {
      why = n + " missing in second run";
      return false;
    }
    std::string x = slurp(a / n), y = slurp(b / n);
    if (n == "run_meta.json") {
      auto jx = nlohmann::ordered_json::parse(x), jy = nlohmann::ordered_json::parse(y);
      jx.erase("timings_ms");
      jy.erase("timings_ms");
      x = jx.dump();
      y = jy.dump();
    }
    if (x != y) {
      why = a.filename().string() + "/" + n + " differs";
      return false;
    }
  }
  return true;
}

Outcome cli_determinism(const Settings& st) {
  if (st.cli.empty() || !fs::exists(st.cli)) return {false, "coda-ica binary not found (pass --cli PATH)"};
  const std::string cli = fs::absolute(st.cli).string();
  const fs::path root = fs::absolute(st.workdir) / "cli-determinism";
  fs::remove_all(root);
  fs::create_directories(root);

  std::vector<std::pair<std::string, std::string>> commands{
      {"simulate", "simulate --n 3000 --parts 5 --seed 11 --sources 'uniform,exponential,laplace,two-point(0.3)'"},
      {"transform", "transform --input simulate/composition.csv"},
      {"inverse", "transform --input transform/ilr.csv --inverse ilr --kappa 100"},
      {"fobi", "ica --input simulate/composition.csv --method fobi --truth simulate/truth.json --emit scores,loadings-ilr,loadings-clr,kurtosis-table,scree,density:IC.1"},
      {"jade", "ica --input simulate/composition.csv --method jade"},
      {"kjade", "ica --input simulate/composition.csv --method kjade --k 2"},
      {"defl", "ica --input simulate/composition.csv --method fastica-defl --g tanh --seed 5"},
      {"adaptive", "ica --input simulate/composition.csv --method fastica-adaptive --seed 5"},
      {"sym", "ica --input simulate/composition.csv --method fastica-sym --g gaus --seed 5"},
      {"sqsym", "ica --input simulate/composition.csv --method fastica-sqsym --seed 5"},
      {"density", "density --input fobi/scores.csv --component IC.2"},
      {"reconstruct", "reconstruct --input fobi --signal 1,3 --kappa 10"},
  };
  // Each pass runs from its own directory with relative paths, so recorded
  // option values are identical between passes.
  for (const char* run : {"a", "b"}) {
    const fs::path dir = root / run;
    fs::create_directories(dir);
    for (const auto& [name, args] : commands) {
      const std::string cmd = "cd \"" + dir.string() + "\" && \"" + cli + "\" " + args + " --out " + name +
                              " > " + name + ".log 2>&1";
      const int rc = std::system(cmd.c_str());
      if (rc != 0) return {false, name + " exited with status " + std::to_string(rc)};
    }
  }
  for (const auto& c : commands) {
    std::string why;
    if (!same_outputs(root / "a" / c.first, root / "b" / c.first, why)) return {false, why};
  }
  return {true, std::to_string(commands.size()) + " commands, all outputs identical across two runs"};
}

}  // namespace

int main(int argc, char** argv) {
  Settings st;
  st.workdir = fs::temp_directory_path() / "coda_ica_acceptance";
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--cli" && i + 1 < argc) st.cli = argv[++i];
    else if (a == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
    else if (a == "--workdir" && i + 1 < argc) st.workdir = argv[++i];
    else {
      std::cerr << "usage: acceptance [--cli PATH] [--only N] [--workdir DIR]\n";
      return 2;
    }
  }

  const std::vector<std::pair<const char*, Outcome (*)(const Settings&)>> criteria{
      {"transform exactness", transform_exactness},
      {"cov4 / cumulant identity", cov4_identity},
      {"recovery suite", recovery_suite},
      {"equal kurtosis separation", equal_kurtosis_separation},
      {"equivariance", equivariance},
      {"JADE vs squared symmetric pow3", jade_sqsym},
      {"k-JADE boundary identities", kjade_boundaries},
      {"Gaussian guards", gaussian_guards},
      {"reconstruction", reconstruction},
      {"density", density},
      {"CLI determinism", cli_determinism},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (only != 0 && only != id) continue;
    Outcome o;
    try {
      o = criteria[i].second(st);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (id < 10 ? " " : "") << id << "  " << criteria[i].first
              << ": " << o.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criterion/criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
