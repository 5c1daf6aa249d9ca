#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "geninv/calculus.hpp"
#include "geninv/diagnostics.hpp"
#include "geninv/geninv.hpp"
#include "geninv/perturb.hpp"

namespace geninv::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

enum class Field { real, complex };

const char* to_string(Field field);

/// Parsed matrix file. Format:
///
///   <rows> <cols> <real|complex>
///   entries, whitespace separated, row-major; complex entries as "re im"
struct MatrixFile {
  Matrix matrix;
  Field field = Field::real;
};

/// Throws an input error naming line and column on any malformed token.
MatrixFile parse_matrix(std::istream& in);
MatrixFile parse_matrix_text(const std::string& text);
MatrixFile parse_matrix_file(const std::string& path);

/// 17-significant-digit text that parses back to the identical matrix.
std::string serialize_matrix(const Matrix& m, Field field);

/// Nested row arrays; complex entries as [re, im] pairs.
Json matrix_to_json(const Matrix& m, Field field);

Json certificate_to_json(const InverseCertificate& cert, Field field);
Json perturbation_to_json(const PerturbationReport& rep, Field field);
Json derivative_to_json(const DerivativeReport& rep, Field field);
Json diagnostics_to_json(const SequenceDiagnostics& diag);
Json gap_to_json(const GapResult& gap);

/// Settings shared by every subcommand.
struct RunConfig {
  ToleranceConfig tol;
  std::uint64_t seed = 0;
  std::string out_path;
  // derivcheck
  std::string kind = "bc";
  double t0 = 0.0;
  // seqcheck
  std::string family = "additive";
  int count = 200;
  // gap
  int trials = 1000;
  // perturb
  bool allow_outside = false;
};

struct RunResult {
  Json report;
  int exit_code = 0;
};

/// Exit codes: 0 success, 1 input error, 2 existence failure.
RunResult run_subcommand(const std::string& name,
                         const std::vector<std::string>& inputs,
                         const RunConfig& config);

/// Subcommand names in the order the CLI lists them.
const std::vector<std::string>& subcommand_names();

}  // namespace geninv::io
