#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gsvdkit/gsvdkit.hpp"

namespace gsvdkit::cli {

namespace {

using nlohmann::json;

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string join(const std::vector<double>& xs, const char* sep = ", ") {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) s += sep;
    s += num(xs[i]);
  }
  return s;
}

json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json columns_json(const Matrix& m) {
  json arr = json::array();
  for (Index j = 0; j < m.cols(); ++j) arr.push_back(vector_json(m.col(j)));
  return arr;
}

Tolerance make_tol(const std::optional<double>& rel) {
  Tolerance tol;
  tol.rel = rel;
  tol.validate();
  return tol;
}

struct Pair {
  Matrix a;
  Matrix b;
};

Pair load_pair(const std::string& a_path, const std::string& b_path, bool header) {
  Pair p{read_csv(a_path, header), read_csv(b_path, header)};
  if (p.a.cols() != p.b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, a_path + " has " + std::to_string(p.a.cols()) +
                                                  " columns but " + b_path + " has " +
                                                  std::to_string(p.b.cols()));
  }
  return p;
}

void emit(const json& doc, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << doc.dump(2) << '\n';
  } else {
    write_text(path, doc.dump(2) + "\n");
  }
}

struct GsvdOpts {
  std::string a_path, b_path, json_path, csv_prefix;
  std::optional<double> tol;
  std::string convention = "bottom";
  bool compact = false;
  bool header = false;
};

int cmd_gsvd(const GsvdOpts& o, std::ostream& out) {
  const Pair p = load_pair(o.a_path, o.b_path, o.header);
  GsvdFactors f = gsvd_decompose(p.a, p.b, make_tol(o.tol));
  if (o.convention == "top") f = with_layout(f, SineLayout::Top);
  if (o.compact) f = compact(f);

  json doc = json::parse(factors_to_json(f));
  const Apportionment ap = apportion(f);
  json labels = json::array();
  for (Attribution a : ap.labels) labels.push_back(std::string(to_string(a)));
  doc["apportionment"] = {{"angles", ap.angles},
                          {"labels", labels},
                          {"theta_lo", ap.theta_lo},
                          {"theta_hi", ap.theta_hi},
                          {"h_condition", ap.h_condition}};

  if (!o.csv_prefix.empty()) {
    write_csv(o.csv_prefix + "_U.csv", f.u);
    write_csv(o.csv_prefix + "_V.csv", f.v);
    write_csv(o.csv_prefix + "_C.csv", f.cosine_matrix());
    write_csv(o.csv_prefix + "_S.csv", f.sine_matrix());
    write_csv(o.csv_prefix + "_H.csv", f.h);
  }
  if (o.json_path.empty()) {
    out << doc.dump(2) << '\n';
    return kOk;
  }
  write_text(o.json_path, doc.dump(2) + "\n");
  const CsStructure cs = structure_counts(f);
  out << "r = " << f.r << ", ra = " << f.r_a << ", rb = " << f.r_b << '\n';
  out << "infinite " << cs.n_infinite << ", finite " << cs.n_finite << ", zero " << cs.n_zero
      << '\n';
  out << "values: " << join(cotangents(f)) << '\n';
  return kOk;
}

struct VerifyOpts {
  std::string doc_path, a_path, b_path;
  double tol = 1e-11;
  bool header = false;
};

int cmd_verify(const VerifyOpts& o, std::ostream& out, std::ostream& err) {
  std::ifstream in(o.doc_path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, o.doc_path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  const GsvdFactors f = factors_from_json(ss.str(), o.doc_path);
  const Pair p = load_pair(o.a_path, o.b_path, o.header);
  if (p.a.rows() != f.m1 || p.b.rows() != f.m2 || p.a.cols() != f.n) {
    throw Error(ErrorCode::DimensionMismatch,
                o.doc_path + ": factor shapes do not match " + o.a_path + " and " + o.b_path);
  }
  const double residual = rel_frobenius(f.stacked(), vstack(p.a, p.b));
  double cs_err = 0.0;
  for (std::size_t i = 0; i < f.c.size(); ++i)
    cs_err = std::max(cs_err, std::abs(f.c[i] * f.c[i] + f.s[i] * f.s[i] - 1.0));
  out << "reconstruction " << num(residual) << '\n';
  out << "cs_identity " << num(cs_err) << '\n';
  if (!(residual <= o.tol)) {
    err << "error: reconstruction residual " << num(residual) << " exceeds " << num(o.tol) << '\n';
    return kNumeric;
  }
  out << "ok\n";
  return kOk;
}

struct TikhonovOpts {
  std::string a_path, l_path, b_path, json_path;
  std::vector<double> lambdas{0.0, 1.0, 10.0};
  bool header = false;
};

int cmd_tikhonov(const TikhonovOpts& o, std::ostream& out) {
  TikhonovProblem prob{read_csv(o.a_path, o.header), read_csv(o.l_path, o.header),
                       read_csv_vector(o.b_path, o.header)};
  if (prob.a.cols() != prob.l.cols()) {
    throw Error(ErrorCode::DimensionMismatch, o.a_path + " has " + std::to_string(prob.a.cols()) +
                                                  " columns but " + o.l_path + " has " +
                                                  std::to_string(prob.l.cols()));
  }
  if (prob.a.rows() != prob.b.size()) {
    throw Error(ErrorCode::DimensionMismatch, o.a_path + " has " + std::to_string(prob.a.rows()) +
                                                  " rows but " + o.b_path + " has " +
                                                  std::to_string(prob.b.size()) + " entries");
  }
  const std::vector<PathPoint> path = solve_path(prob, o.lambdas);

  json points = json::array();
  out << "lambda,norm_x";
  for (Index j = 0; j < prob.a.cols(); ++j) out << ",x" << j + 1;
  for (Index j = 0; j < prob.a.cols(); ++j) out << ",damping" << j + 1;
  out << '\n';
  for (const PathPoint& pt : path) {
    out << num(pt.lambda) << ',' << num(pt.x.norm());
    for (Index j = 0; j < pt.x.size(); ++j) out << ',' << num(pt.x(j));
    for (double d : pt.damping) out << ',' << num(d);
    out << '\n';
    points.push_back(
        {{"lambda", pt.lambda}, {"x", vector_json(pt.x)}, {"norm_x", pt.x.norm()}, {"damping", pt.damping}});
  }
  if (!o.json_path.empty()) write_text(o.json_path, json{{"points", points}}.dump(2) + "\n");
  return kOk;
}

struct AnovaOpts {
  std::string data_path;
  std::vector<Index> partition;
  bool header = false;
};

int cmd_anova(const AnovaOpts& o, std::ostream& out) {
  const Vector v = read_csv_vector(o.data_path, o.header);
  Index total = 0;
  for (Index pi : o.partition) total += pi;
  if (total != v.size()) {
    throw Error(ErrorCode::InvalidPartition, "partition sums to " + std::to_string(total) + " but " +
                                                 o.data_path + " has " +
                                                 std::to_string(v.size()) + " values");
  }
  const AnovaReport rep = anova_f(cluster_design(o.partition), v);
  out << "between_ss " << num(rep.between_norm_sq) << '\n';
  out << "within_ss " << num(rep.within_norm_sq) << '\n';
  out << "df_between " << rep.df_between << '\n';
  out << "df_within " << rep.df_within << '\n';
  out << "F " << num(rep.f_value) << '\n';
  return kOk;
}

struct EllipseOpts {
  std::string a_path, b_path, json_path;
  int samples = 64;
  bool header = false;
};

json axes_json(const std::vector<SemiAxis>& axes) {
  json arr = json::array();
  for (const SemiAxis& ax : axes) arr.push_back({{"length", ax.length}, {"direction", vector_json(ax.direction)}});
  return arr;
}

json sections_json(const std::vector<SemiAxis>& axes, int samples) {
  json arr = json::array();
  for (std::size_t i = 0; i + 1 < axes.size(); ++i) {
    arr.push_back({{"i", i}, {"j", i + 1}, {"points", columns_json(ellipse_section(axes, i, i + 1, samples))}});
  }
  return arr;
}

int cmd_ellipse(const EllipseOpts& o, std::ostream& out) {
  const Pair p = load_pair(o.a_path, o.b_path, o.header);
  const GsvdFactors f = gsvd_decompose(p.a, p.b);
  const EllipseData ed = ellipse_data(f);
  json doc;
  doc["cosine_semiaxes"] = axes_json(ed.cosine_semiaxes);
  doc["sine_semiaxes"] = axes_json(ed.sine_semiaxes);
  doc["sphere_points"] = columns_json(ed.sphere_points);
  doc["angles"] = ed.angles;
  doc["samples"] = o.samples;
  doc["cosine_sections"] = sections_json(ed.cosine_semiaxes, o.samples);
  doc["sine_sections"] = sections_json(ed.sine_semiaxes, o.samples);
  emit(doc, o.json_path, out);
  if (!o.json_path.empty()) {
    std::vector<double> lengths;
    for (const SemiAxis& ax : ed.cosine_semiaxes) lengths.push_back(ax.length);
    out << "cosine semi-axes: " << join(lengths) << '\n';
    lengths.clear();
    for (const SemiAxis& ax : ed.sine_semiaxes) lengths.push_back(ax.length);
    out << "sine semi-axes: " << join(lengths) << '\n';
  }
  return kOk;
}

struct AnglesOpts {
  std::string a1_path, a2_path, json_path;
  bool header = false;
};

int cmd_angles(const AnglesOpts& o, std::ostream& out) {
  const Matrix a1 = read_csv(o.a1_path, o.header);
  const Matrix a2 = read_csv(o.a2_path, o.header);
  if (a1.rows() != a2.rows()) {
    throw Error(ErrorCode::DimensionMismatch, o.a1_path + " has " + std::to_string(a1.rows()) +
                                                  " rows but " + o.a2_path + " has " +
                                                  std::to_string(a2.rows()));
  }
  const PrincipalAngles pa = principal_angles(a1, a2);
  std::vector<double> theta;
  for (double c : pa.cosines) theta.push_back(std::acos(std::clamp(c, 0.0, 1.0)));
  out << "cosine,angle\n";
  for (std::size_t i = 0; i < theta.size(); ++i) out << num(pa.cosines[i]) << ',' << num(theta[i]) << '\n';
  if (!o.json_path.empty()) {
    json doc{{"cosines", pa.cosines},
             {"angles", theta},
             {"reference", pa.reference},
             {"route_gap", pa.route_gap},
             {"vectors1", columns_json(pa.vectors1)},
             {"vectors2", columns_json(pa.vectors2)}};
    write_text(o.json_path, doc.dump(2) + "\n");
  }
  return kOk;
}

struct ReduceOpts {
  std::string m_path, out_path;
  std::vector<Index> partition;
  bool fast = false;
  bool header = false;
};

int cmd_reduce(const ReduceOpts& o, std::ostream& out) {
  const Matrix m = read_csv(o.m_path, o.header);
  const ClusterDesign design = cluster_design(o.partition);
  if (design.p != m.rows()) {
    throw Error(ErrorCode::InvalidPartition, "partition sums to " + std::to_string(design.p) +
                                                 " but " + o.m_path + " has " +
                                                 std::to_string(m.rows()) + " rows");
  }
  const DiscriminantReduction red = discriminant_reduce(m, design, {}, o.fast);
  if (o.out_path.empty()) {
    out << format_csv(red.mg);
    return kOk;
  }
  write_csv(o.out_path, red.mg);
  out << "wrote " << red.mg.rows() << "x" << red.mg.cols() << " to " << o.out_path << '\n';
  out << "values: " << join(finite_cotangents(red.anova_factors)) << '\n';
  return kOk;
}

struct JacobiOpts {
  Index m1 = 3, m2 = 5, n = 1;
  double beta = 1.0;
  Index samples = 10000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out_path, json_path;
};

int cmd_jacobi(const JacobiOpts& o, std::ostream& out) {
  const JacobiParams params{o.m1, o.m2, o.n, o.beta};
  const EmpiricalReport rep = empirical_check(params, o.samples, SeededRng(o.seed), o.threads);
  json doc{{"m1", o.m1},
           {"m2", o.m2},
           {"n", o.n},
           {"beta", o.beta},
           {"samples", o.samples},
           {"seed", o.seed},
           {"generator", std::string(SeededRng::kAlgorithm)},
           {"mean_trace", rep.mean_trace},
           {"trace_se", rep.trace_se},
           {"expected_trace", rep.expected_trace},
           {"trace_z", rep.trace_z},
           {"quality_warnings", rep.quality_warnings}};
  if (rep.ks_applicable) {
    doc["ks_distance"] = rep.ks_distance;
    doc["beta_a"] = rep.beta_a;
    doc["beta_b"] = rep.beta_b;
  }
  if (!o.out_path.empty()) write_csv(o.out_path, rep.samples);
  emit(doc, o.json_path, out);
  if (!o.json_path.empty()) {
    out << "mean trace " << num(rep.mean_trace) << " (expected " << num(rep.expected_trace)
        << ", z = " << num(rep.trace_z) << ")\n";
    if (rep.ks_applicable) out << "KS distance " << num(rep.ks_distance) << '\n';
  }
  return kOk;
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::NonFinite:
    case ErrorCode::DomainError:
    case ErrorCode::UnsupportedBeta:
      return kParse;
    case ErrorCode::DimensionMismatch:
    case ErrorCode::InvalidDimensions:
    case ErrorCode::InvalidPartition:
    case ErrorCode::NeedsAugmentation:
    case ErrorCode::NoAugmentationNeeded:
      return kDimension;
    case ErrorCode::RankOutOfRange:
    case ErrorCode::RankDeficient:
    case ErrorCode::SingularH:
      return kRank;
    case ErrorCode::NotOrthonormal:
    case ErrorCode::ZeroDenominator:
    case ErrorCode::ZeroWithin:
    case ErrorCode::DegenerateData:
    case ErrorCode::NumericFailure:
      return kNumeric;
  }
  return kNumeric;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized singular value decomposition toolkit", "gsvdkit"};
  app.require_subcommand(1);

  GsvdOpts gsvd_o;
  auto* gsvd_cmd = app.add_subcommand("gsvd", "Factor a matrix pair as [A; B] = [UC; VS] H");
  gsvd_cmd->add_option("A", gsvd_o.a_path, "CSV file for A")->required();
  gsvd_cmd->add_option("B", gsvd_o.b_path, "CSV file for B")->required();
  gsvd_cmd->add_option("--tol", gsvd_o.tol, "relative rank tolerance (default max(m,n)*eps)");
  gsvd_cmd->add_option("--convention", gsvd_o.convention, "sine placement")
      ->check(CLI::IsMember({"bottom", "top"}));
  gsvd_cmd->add_flag("--compact", gsvd_o.compact, "drop left-nullspace columns of U and V");
  gsvd_cmd->add_option("--json", gsvd_o.json_path, "write the factors document here");
  gsvd_cmd->add_option("--csv-prefix", gsvd_o.csv_prefix, "write PREFIX_{U,V,C,S,H}.csv");
  gsvd_cmd->add_flag("--header", gsvd_o.header, "skip the first CSV line");

  VerifyOpts verify_o;
  auto* verify_cmd = app.add_subcommand("verify", "Check a factors document against A and B");
  verify_cmd->add_option("DOC", verify_o.doc_path, "JSON written by gsvd --json")->required();
  verify_cmd->add_option("A", verify_o.a_path)->required();
  verify_cmd->add_option("B", verify_o.b_path)->required();
  verify_cmd->add_option("--tol", verify_o.tol, "relative reconstruction tolerance");
  verify_cmd->add_flag("--header", verify_o.header, "skip the first CSV line");

  TikhonovOpts tik_o;
  auto* tik_cmd = app.add_subcommand("tikhonov", "Regularized solutions along a lambda grid");
  tik_cmd->add_option("A", tik_o.a_path)->required();
  tik_cmd->add_option("L", tik_o.l_path)->required();
  tik_cmd->add_option("b", tik_o.b_path)->required();
  tik_cmd->add_option("--lambdas", tik_o.lambdas, "comma-separated lambda values")->delimiter(',');
  tik_cmd->add_option("--json", tik_o.json_path, "write the solution path here");
  tik_cmd->add_flag("--header", tik_o.header, "skip the first CSV line");

  AnovaOpts anova_o;
  auto* anova_cmd = app.add_subcommand("anova", "One-way ANOVA F statistic");
  anova_cmd->add_option("DATA", anova_o.data_path)->required();
  anova_cmd->add_option("--partition", anova_o.partition, "cluster sizes")->delimiter(',')->required();
  anova_cmd->add_flag("--header", anova_o.header, "skip the first CSV line");

  EllipseOpts ell_o;
  auto* ell_cmd = app.add_subcommand("ellipse", "Cosine and sine ellipse plot data");
  ell_cmd->add_option("A", ell_o.a_path)->required();
  ell_cmd->add_option("B", ell_o.b_path)->required();
  ell_cmd->add_option("--samples", ell_o.samples, "points per planar section")
      ->check(CLI::PositiveNumber);
  ell_cmd->add_option("--json", ell_o.json_path, "write the plot data here");
  ell_cmd->add_flag("--header", ell_o.header, "skip the first CSV line");

  AnglesOpts ang_o;
  auto* ang_cmd = app.add_subcommand("angles", "Principal angles between col(A1) and col(A2)");
  ang_cmd->add_option("A1", ang_o.a1_path)->required();
  ang_cmd->add_option("A2", ang_o.a2_path)->required();
  ang_cmd->add_option("--json", ang_o.json_path, "write cosines and principal vectors here");
  ang_cmd->add_flag("--header", ang_o.header, "skip the first CSV line");

  ReduceOpts red_o;
  auto* red_cmd = app.add_subcommand("reduce", "Discriminant reduction to k-1 columns");
  red_cmd->add_option("M", red_o.m_path, "data matrix, one item per row")->required();
  red_cmd->add_option("--partition", red_o.partition, "cluster sizes")->delimiter(',')->required();
  red_cmd->add_option("--out", red_o.out_path, "CSV file for M G");
  red_cmd->add_flag("--fast", red_o.fast, "use the orthonormal RQ basis for G");
  red_cmd->add_flag("--header", red_o.header, "skip the first CSV line");

  JacobiOpts jac_o;
  auto* jac_cmd = app.add_subcommand("jacobi", "Sample MANOVA eigenvalues and check the Jacobi law");
  jac_cmd->add_option("--m1", jac_o.m1)->check(CLI::PositiveNumber);
  jac_cmd->add_option("--m2", jac_o.m2)->check(CLI::PositiveNumber);
  jac_cmd->add_option("--n", jac_o.n)->check(CLI::PositiveNumber);
  jac_cmd->add_option("--beta", jac_o.beta);
  jac_cmd->add_option("--samples", jac_o.samples);
  jac_cmd->add_option("--seed", jac_o.seed);
  jac_cmd->add_option("--threads", jac_o.threads)->check(CLI::PositiveNumber);
  jac_cmd->add_option("--out", jac_o.out_path, "CSV file for the sampled eigenvalues");
  jac_cmd->add_option("--json", jac_o.json_path, "write the report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (*gsvd_cmd) return cmd_gsvd(gsvd_o, out);
    if (*verify_cmd) return cmd_verify(verify_o, out, err);
    if (*tik_cmd) return cmd_tikhonov(tik_o, out);
    if (*anova_cmd) return cmd_anova(anova_o, out);
    if (*ell_cmd) return cmd_ellipse(ell_o, out);
    if (*ang_cmd) return cmd_angles(ang_o, out);
    if (*red_cmd) return cmd_reduce(red_o, out);
    if (*jac_cmd) return cmd_jacobi(jac_o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumeric;
  }
  return kParse;
}

}  // namespace gsvdkit::cli
