#pragma once

// Configuration parsing and subcommand dispatch for the fockshift tool.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fockshift/algebra.hpp"
#include "fockshift/eigen.hpp"

namespace fockshift::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitPrecondition = 2;
inline constexpr std::uint64_t kSeed = 0x5eed;

/// Schema violation; `path` is a JSON pointer-like location such as $.table["1:e"].
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct RunConfig {
  /// Weight-system part of the document, as given.
  std::optional<Json> weights_doc;
  std::optional<WeightSystem> weights;
  int depth = 8;
  double tolerance = 1e-10;
  double epsilon = 0.02;
  std::optional<GridSpec> grid;
  std::vector<std::vector<cplx>> lambdas;
  /// Parsed content of the --coeffs file.
  std::optional<Json> coeffs_doc;
  std::vector<int> k;
  /// spectra mode: right | resolvent | left | zero
  std::string mode = "right";
  /// Assumed norm M for the left growth certificate.
  double assumed = 0.0;
  std::optional<std::string> out;
  std::optional<std::string> report;
  bool timings = false;
};

/// Weight-system document: {"n", "family", family fields}.
WeightSystem parse_weights(const Json& doc);

/// Weight-system fields plus optional "depth", "tolerance", "epsilon", "grid".
/// Unknown fields are rejected.
RunConfig parse_config(const Json& doc);
RunConfig load_config(const std::string& path);
Json read_json_file(const std::string& path);

/// Comma-separated complex literals a+bi, a-bi, bi or a.
std::vector<cplx> parse_lambda(std::string_view text);

/// {"coeffs": {"w": [re, im], ...}}
FourierElement parse_fourier(const Json& doc, int n);
CoeffMap parse_coeff_map(const Json& doc, int n, const std::string& path);

/// Resolved configuration as embedded in every report.
Json config_echo(const RunConfig& config);

/// Writes to a temporary file next to `path` and renames it into place.
void write_atomic(const std::string& path, const std::string& content);

/// Runs one subcommand. Reports go to config.report (JSON) or config.out
/// (CSV), else to `out`; errors go to `err`. Returns the exit code.
int run_command(const std::string& verb, const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace fockshift::cli
