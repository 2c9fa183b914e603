#include "run_meta.hpp"

#include <coda_ica/csv.hpp>
#include <coda_ica/rng.hpp>
#include <coda_ica/types.hpp>

#include <Eigen/Core>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace coda_ica::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

double Stopwatch::lap() {
  const auto now = Clock::now();
  const double ms = std::chrono::duration<double, std::milli>(now - last_).count();
  last_ = now;
  return ms;
}

double Stopwatch::total() const {
  return std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
}

json versions() {
  json v;
  v["coda_ica"] = kVersion;
  v["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  v["rng"] = Rng::kAlgorithm;
  return v;
}

namespace {

json error_entry(const char* type, const std::string& message) {
  json e;
  e["type"] = type;
  e["message"] = message;
  return e;
}

void write_meta(const std::string& out_dir, const json& meta) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  std::ofstream out(fs::path(out_dir) / "run_meta.json");
  if (!out) {
    std::cerr << "coda-ica: cannot write run_meta.json in '" << out_dir << "'\n";
    return;
  }
  out << meta.dump(2) << '\n';
}

}  // namespace

int run_with_meta(const std::string& command, const std::string& out_dir, json meta,
                  const std::function<void(json&)>& body) {
  Stopwatch clock;
  meta["command"] = command;
  meta["versions"] = versions();
  if (!meta.contains("warnings")) meta["warnings"] = json::array();
  int code = kOk;
  try {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw DomainError("cannot create output directory '" + out_dir + "': " + ec.message());
    body(meta);
  } catch (const csv::ParseError& e) {
    code = kInputError;
    meta["error"] = error_entry("ParseError", e.what());
    meta["error"]["row"] = e.row();
    meta["error"]["column"] = e.column();
  } catch (const DegenerateSample& e) {
    code = kInputError;
    meta["error"] = error_entry("DegenerateSample", e.what());
  } catch (const DomainError& e) {
    code = kInputError;
    meta["error"] = error_entry("DomainError", e.what());
  } catch (const SingularCovariance& e) {
    code = kNumericalError;
    meta["error"] = error_entry("SingularCovariance", e.what());
  } catch (const DimensionCap& e) {
    code = kNumericalError;
    meta["error"] = error_entry("DimensionCap", e.what());
  } catch (const ConvergenceError& e) {
    code = kNumericalError;
    meta["error"] = error_entry("ConvergenceError", e.what());
  } catch (const NumericalError& e) {
    code = kNumericalError;
    meta["error"] = error_entry("NumericalError", e.what());
  } catch (const nlohmann::json::exception& e) {
    code = kInputError;
    meta["error"] = error_entry("DomainError", std::string("malformed JSON: ") + e.what());
  } catch (const std::exception& e) {
    code = kNumericalError;
    meta["error"] = error_entry("Error", e.what());
  }
  meta["exit_code"] = code;
  meta["timings_ms"]["total"] = clock.total();
  write_meta(out_dir, meta);
  if (code != kOk) std::cerr << "coda-ica " << command << ": " << meta["error"]["message"].get<std::string>() << '\n';
  return code;
}

}  // namespace coda_ica::cli
