#include "geninv/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace geninv::io {

namespace {

struct Token {
  std::string text;
  int line = 0;
  int column = 0;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1;
  int column = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    const char ch = text[i];
    if (ch == '\n') {
      ++line;
      column = 1;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      ++column;
      ++i;
    } else {
      Token tok{{}, line, column};
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) {
        tok.text.push_back(text[i]);
        ++i;
        ++column;
      }
      out.push_back(std::move(tok));
    }
  }
  return out;
}

Error at(const Token& tok, const std::string& message) {
  return input_error("line " + std::to_string(tok.line) + ", column " +
                     std::to_string(tok.column) + ": " + message);
}

double parse_double(const Token& tok) {
  double value = 0.0;
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw at(tok, "cannot parse '" + tok.text + "' as a number");
  if (!std::isfinite(value)) throw at(tok, "non-finite entry '" + tok.text + "'");
  return value;
}

long parse_dimension(const Token& tok) {
  long value = 0;
  const auto [ptr, ec] =
      std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), value);
  if (ec != std::errc() || ptr != tok.text.data() + tok.text.size() || value <= 0)
    throw at(tok, "malformed header: '" + tok.text + "' is not a positive integer");
  return value;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

Field field_of(const std::vector<MatrixFile>& files) {
  for (const MatrixFile& f : files)
    if (f.field == Field::complex) return Field::complex;
  return Field::real;
}

}  // namespace

const char* to_string(Field field) {
  return field == Field::real ? "real" : "complex";
}

MatrixFile parse_matrix_text(const std::string& text) {
  const std::vector<Token> tokens = tokenize(text);
  if (tokens.empty()) throw input_error("line 1, column 1: malformed header: empty input");
  const Token& first = tokens.front();
  std::size_t header_end = 0;
  while (header_end < tokens.size() && tokens[header_end].line == first.line) ++header_end;
  if (header_end != 3) {
    throw at(first, "malformed header: expected '<rows> <cols> <real|complex>', found " +
                        std::to_string(header_end) + " tokens");
  }
  const long rows = parse_dimension(tokens[0]);
  const long cols = parse_dimension(tokens[1]);
  MatrixFile out;
  if (tokens[2].text == "real") {
    out.field = Field::real;
  } else if (tokens[2].text == "complex") {
    out.field = Field::complex;
  } else {
    throw at(tokens[2], "malformed header: field must be 'real' or 'complex', found '" +
                            tokens[2].text + "'");
  }

  const std::size_t per_entry = out.field == Field::real ? 1 : 2;
  const std::size_t expected = static_cast<std::size_t>(rows * cols) * per_entry;
  const std::size_t found = tokens.size() - 3;
  if (found != expected) {
    const Token& where = found > expected ? tokens[3 + expected] : tokens.back();
    throw at(where, "expected " + std::to_string(expected) + " entries, found " +
                        std::to_string(found));
  }

  out.matrix = Matrix(rows, cols);
  std::size_t k = 3;
  for (long i = 0; i < rows; ++i) {
    for (long j = 0; j < cols; ++j) {
      const double re = parse_double(tokens[k++]);
      const double im = per_entry == 2 ? parse_double(tokens[k++]) : 0.0;
      out.matrix(i, j) = Scalar(re, im);
    }
  }
  return out;
}

MatrixFile parse_matrix(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix_text(buf.str());
}

MatrixFile parse_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open matrix file '" + path + "'");
  try {
    return parse_matrix(in);
  } catch (const Error& e) {
    throw input_error(path + ": " + e.what());
  }
}

std::string serialize_matrix(const Matrix& m, Field field) {
  std::string out = std::to_string(m.rows()) + " " + std::to_string(m.cols()) + " " +
                    to_string(field) + "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ' ';
      out += format_double(m(i, j).real());
      if (field == Field::complex) {
        out += ' ';
        out += format_double(m(i, j).imag());
      }
    }
    out += '\n';
  }
  return out;
}

Json matrix_to_json(const Matrix& m, Field field) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (field == Field::complex)
        row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
      else
        row.push_back(m(i, j).real());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Json certificate_to_json(const InverseCertificate& cert, Field field) {
  Json j;
  j["kind"] = to_string(cert.kind);
  j["inverse"] = matrix_to_json(cert.inverse, field);
  Json res = Json::object();
  for (const auto& [name, value] : cert.residuals) res[name] = value;
  j["residuals"] = res;
  j["restricted_condition"] = cert.restricted_condition;
  j["range_gap"] = cert.range_gap;
  j["nullspace_gap"] = cert.nullspace_gap;
  j["direct_sum_margin"] = cert.direct_sum_margin;
  j["scale"] = cert.scale;
  return j;
}

Json perturbation_to_json(const PerturbationReport& rep, Field field) {
  Json j;
  j["radius"] = rep.radius;
  j["outside_ball"] = rep.outside_ball;
  j["formula_inverse"] = matrix_to_json(rep.formula_inverse, field);
  j["formula_inverse_alt"] = matrix_to_json(rep.formula_inverse_alt, field);
  j["formula_mutual_discrepancy"] = rep.formula_mutual_discrepancy;
  j["direct_exists"] = rep.direct_exists;
  j["direct_inverse"] =
      rep.direct_exists ? matrix_to_json(rep.direct_inverse, field) : Json(nullptr);
  j["discrepancy"] = rep.direct_exists ? Json(rep.discrepancy) : Json(nullptr);
  j["bound_value"] = rep.bound_value ? Json(*rep.bound_value) : Json("inapplicable");
  j["actual_error"] = rep.actual_error;
  j["scale"] = rep.scale;
  return j;
}

Json derivative_to_json(const DerivativeReport& rep, Field field) {
  Json j;
  j["kind"] = to_string(rep.kind);
  j["t0"] = rep.t0;
  j["inverse_at_t0"] = matrix_to_json(rep.inverse_at_t0, field);
  j["formula_derivative"] = matrix_to_json(rep.formula_derivative, field);
  Json errs = Json::array();
  for (const auto& [step, err] : rep.fd_errors) errs.push_back(Json::array({step, err}));
  j["fd_errors"] = errs;
  j["observed_order"] = rep.exact ? Json("exact") : Json(rep.observed_order);
  j["scale"] = rep.scale;
  j["projector_form_derivative"] = matrix_to_json(rep.projector_form_derivative, field);
  Json pf = Json::array();
  for (const auto& [step, err] : rep.projector_form_fd_errors)
    pf.push_back(Json::array({step, err}));
  j["projector_form_fd_errors"] = pf;
  j["projector_form_order"] =
      rep.projector_form_exact ? Json("exact") : Json(rep.projector_form_order);
  return j;
}

Json diagnostics_to_json(const SequenceDiagnostics& diag) {
  Json j;
  j["indices"] = diag.indices;
  Json failures = Json::array();
  for (const auto& [index, why] : diag.failures)
    failures.push_back(Json{{"index", index}, {"error", why}});
  j["failures"] = failures;
  Json series = Json::object();
  for (const auto& [name, values] : diag.series) {
    Json arr = Json::array();
    for (double v : values) arr.push_back(std::isnan(v) ? Json(nullptr) : Json(v));
    series[name] = arr;
  }
  j["series"] = series;
  Json verdicts = Json::object();
  for (const Statement& s : diag.statements) verdicts[s.label] = s.converged;
  j["verdicts"] = verdicts;
  j["threshold"] = diag.threshold;
  j["unanimous"] = diag.unanimous;
  j["alarm"] = !diag.unanimous;
  j["identity_discrepancy"] = diag.identity_discrepancy;
  j["adjoint_discrepancy"] = diag.adjoint_discrepancy;
  return j;
}

Json gap_to_json(const GapResult& g) {
  return Json{{"delta_mn", g.delta_mn}, {"delta_nm", g.delta_nm}, {"gap", g.gap}};
}

// ---------------------------------------------------------------------------
// Subcommands

namespace {

std::vector<MatrixFile> load(const std::vector<std::string>& inputs, std::size_t count,
                             const std::string& usage) {
  if (inputs.size() != count)
    throw input_error("expected " + std::to_string(count) + " input files: " + usage);
  std::vector<MatrixFile> out;
  for (const std::string& path : inputs) out.push_back(parse_matrix_file(path));
  return out;
}

Json header(const std::string& name) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["command"] = name;
  return j;
}

MatrixCurve affine_curve(const Matrix& base, const Matrix& slope, std::string label) {
  if (base.rows() != slope.rows() || base.cols() != slope.cols())
    throw input_error("curve " + label + ": base and slope shapes differ");
  return {[base, slope](double t) { return Matrix(base + t * slope); }, -1e300, 1e300,
          std::move(label)};
}

// Orthogonal projector onto the column space of base + t * slope.
MatrixCurve projector_curve(const Matrix& base, const Matrix& slope, std::string label,
                            const ToleranceConfig& tol) {
  if (base.rows() != slope.rows() || base.cols() != slope.cols())
    throw input_error("curve " + label + ": base and slope shapes differ");
  return {[base, slope, tol](double t) {
            return column_space(Matrix(base + t * slope), tol).orthogonal_projector();
          },
          -1e300, 1e300, std::move(label)};
}

RunResult run_pinv(const std::vector<std::string>& inputs, const RunConfig& cfg) {
  const auto files = load(inputs, 1, "pinv A");
  Json j = header("pinv");
  j["certificate"] =
      certificate_to_json(moore_penrose(files[0].matrix, cfg.tol), field_of(files));
  return {j, 0};
}

RunResult run_bcinv(const std::vector<std::string>& inputs, const RunConfig& cfg) {
  const auto files = load(inputs, 3, "bcinv A B C");
  Json j = header("bcinv");
  j["certificate"] = certificate_to_json(
      bc_inverse(files[0].matrix, files[1].matrix, files[2].matrix, cfg.tol),
      field_of(files));
  return {j, 0};
}

RunResult run_outer(const std::vector<std::string>& inputs, const RunConfig& cfg) {
  const auto files = load(inputs, 3, "outer A T S (T, S given by spanning columns)");
  const Matrix& a = files[0].matrix;
  if (files[1].matrix.rows() != a.cols())
    throw input_error("T must have as many rows as A has columns");
  if (files[2].matrix.rows() != a.rows())
    throw input_error("S must have as many rows as A");
  Json j = header("outer");
  j["certificate"] = certificate_to_json(
      outer_prescribed(a, column_space(files[1].matrix, cfg.tol),
                       column_space(files[2].matrix, cfg.tol), cfg.tol),
      field_of(files));
  return {j, 0};
}

RunResult run_along(const std::vector<std::string>& inputs, const RunConfig& cfg) {
  const auto files = load(inputs, 2, "along A D");
  Json j = header("along");
  j["certificate"] = certificate_to_json(
      inverse_along(files[0].matrix, files[1].matrix, cfg.tol), field_of(files));
  return {j, 0};
}

RunResult run_bottduffin(const std::vector<std::string>& inputs, const RunConfig& cfg) {
  const auto files = load(inputs, 3, "bottduffin A P Q");
  const ObliqueProjector p = projector_from_matrix(files[1].matrix, cfg.tol);
  const ObliqueProjector q = projector_from_matrix(files[2].matrix, cfg.tol);
  Json j = header("bottduffin");
  j["certificate"] =
      certificate_to_json(bott_duffin(files[0].matrix, p, q, cfg.tol), field_of(files));
  return {j, 0};
}

RunResult run_gap(const std::vector<std::string>& inputs, const RunConfig& cfg) {
  const auto files = load(inputs, 2, "gap M N (subspaces given by spanning columns)");
  const Subspace m = column_space(files[0].matrix, cfg.tol);
  const Subspace n = column_space(files[1].matrix, cfg.tol);
  Json j = header("gap");
  j["dims"] = Json::array({m.dim(), n.dim()});
  j["gap"] = gap_to_json(gap(m, n));
  j["oracle_delta_mn"] = gap_sampling_oracle(m, n, cfg.trials, cfg.seed);
  j["oracle_delta_nm"] = gap_sampling_oracle(n, m, cfg.trials, cfg.seed);
  const DirectSum ds = direct_sum_check(m, n, cfg.tol);
  j["direct_sum"] = Json{{"holds", ds.holds}, {"margin", ds.margin}};
  j["seed"] = cfg.seed;
  j["trials"] = cfg.trials;
  return {j, 0};
}

RunResult run_perturb(const std::vector<std::string>& inputs, const RunConfig& cfg) {
  const auto files = load(inputs, 4, "perturb A B C E");
  const InverseCertificate cert =
      bc_inverse(files[0].matrix, files[1].matrix, files[2].matrix, cfg.tol);
  Json j = header("perturb");
  j["certificate"] = certificate_to_json(cert, field_of(files));
  j["perturbation"] = perturbation_to_json(
      perturbed_bc_inverse(cert, files[3].matrix, cfg.tol, cfg.allow_outside),
      field_of(files));
  return {j, 0};
}

RunResult run_derivcheck(const std::vector<std::string>& inputs, const RunConfig& cfg) {
  CurveFamily family;
  std::vector<MatrixFile> files;
  if (cfg.kind == "mp") {
    files = load(inputs, 2, "derivcheck --kind mp A0 A1");
    family = CurveFamily::mp(affine_curve(files[0].matrix, files[1].matrix, "a"));
  } else if (cfg.kind == "bc") {
    files = load(inputs, 6, "derivcheck --kind bc A0 A1 B0 B1 C0 C1");
    family = CurveFamily::bc(affine_curve(files[0].matrix, files[1].matrix, "a"),
                             affine_curve(files[2].matrix, files[3].matrix, "b"),
                             affine_curve(files[4].matrix, files[5].matrix, "c"));
  } else if (cfg.kind == "oip") {
    files = load(inputs, 6, "derivcheck --kind oip A0 A1 T0 T1 S0 S1");
    family = CurveFamily::oip(
        affine_curve(files[0].matrix, files[1].matrix, "A"),
        projector_curve(files[2].matrix, files[3].matrix, "P", cfg.tol),
        projector_curve(files[4].matrix, files[5].matrix, "Q", cfg.tol));
  } else {
    throw input_error("unknown --kind '" + cfg.kind + "' (expected bc, mp or oip)");
  }
  Json j = header("derivcheck");
  j["report"] =
      derivative_to_json(finite_difference_check(family, cfg.t0, cfg.tol), field_of(files));
  return {j, 0};
}

RunResult run_seqcheck(const std::vector<std::string>& inputs, const RunConfig& cfg) {
  if (cfg.count < 1) throw input_error("--count must be positive");
  const std::string& fam = cfg.family;
  if (fam != "additive" && fam != "rotating" && fam != "rankdrop")
    throw input_error("unknown --family '" + fam + "' (expected additive, rotating or rankdrop)");

  Json j = header("seqcheck");
  j["kind"] = cfg.kind;
  j["family"] = fam;
  j["count"] = cfg.count;
  if (cfg.kind == "bc") {
    const auto files = load(inputs, 3, "seqcheck --kind bc A B C");
    const BcProblem limit{files[0].matrix, files[1].matrix, files[2].matrix};
    const Eigen::Index n = limit.a.rows();
    const std::vector<BcProblem> seq =
        fam == "additive" ? families::additive(limit, identity(n), cfg.count)
        : fam == "rotating" ? families::rotating(limit, cfg.count)
                            : families::rank_drop(limit, cfg.count);
    j["diagnostics"] = diagnostics_to_json(sequence_report(limit, seq, cfg.tol));
  } else if (cfg.kind == "mp") {
    const auto files = load(inputs, 1, "seqcheck --kind mp A");
    const Matrix& a = files[0].matrix;
    const std::vector<Matrix> seq =
        fam == "additive" ? families::mp_additive(a, cfg.count)
        : fam == "rotating" ? families::mp_rotating(a, cfg.count)
                            : families::mp_rank_drop(a, cfg.count, cfg.tol);
    j["diagnostics"] = diagnostics_to_json(mp_continuity_report(a, seq, cfg.tol));
  } else if (cfg.kind == "oip") {
    const auto files = load(inputs, 3, "seqcheck --kind oip A T S");
    const Matrix& a = files[0].matrix;
    if (files[1].matrix.rows() != a.cols() || files[2].matrix.rows() != a.rows())
      throw input_error("T and S must live in the domain and codomain of A");
    const OipProblem limit{a, column_space(files[1].matrix, cfg.tol),
                           column_space(files[2].matrix, cfg.tol)};
    std::vector<OipProblem> seq;
    if (fam == "additive") {
      const Matrix direction = Matrix::Identity(a.rows(), a.cols());
      for (int k = 1; k <= cfg.count; ++k)
        seq.push_back({a + direction / static_cast<double>(k), limit.t, limit.s});
    } else if (fam == "rotating") {
      seq = families::oip_rotating(limit, Matrix::Zero(a.rows(), a.cols()), cfg.count);
    } else {
      seq = families::oip_rank_drop(limit, cfg.count);
    }
    j["diagnostics"] = diagnostics_to_json(oip_sequence_report(limit, seq, cfg.tol));
  } else {
    throw input_error("unknown --kind '" + cfg.kind + "' (expected bc, mp or oip)");
  }
  return {j, 0};
}

Json error_report(const std::string& name, const std::string& message,
                  const std::string& clause, Json margin) {
  Json j = header(name);
  j["error"] = message;
  j["clause"] = clause;
  j["margin"] = std::move(margin);
  return j;
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {
      "pinv", "bcinv", "outer", "along", "bottduffin",
      "gap",  "perturb", "derivcheck", "seqcheck"};
  return names;
}

RunResult run_subcommand(const std::string& name, const std::vector<std::string>& inputs,
                         const RunConfig& config) {
  try {
    config.tol.validate();
    if (name == "pinv") return run_pinv(inputs, config);
    if (name == "bcinv") return run_bcinv(inputs, config);
    if (name == "outer") return run_outer(inputs, config);
    if (name == "along") return run_along(inputs, config);
    if (name == "bottduffin") return run_bottduffin(inputs, config);
    if (name == "gap") return run_gap(inputs, config);
    if (name == "perturb") return run_perturb(inputs, config);
    if (name == "derivcheck") return run_derivcheck(inputs, config);
    if (name == "seqcheck") return run_seqcheck(inputs, config);
    throw input_error("unknown subcommand '" + name + "'");
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::existence)
      return {error_report(name, e.what(), e.clause(), e.margin()), 2};
    return {error_report(name, e.what(), e.kind() == ErrorKind::input ? "input" : "kernel",
                         nullptr),
            1};
  }
}

}  // namespace geninv::io
