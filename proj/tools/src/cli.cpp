#include "dsent_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dsent/entropy.hpp"
#include "dsent/error.hpp"
#include "dsent/gallery.hpp"
#include "dsent/io.hpp"
#include "dsent/nullity.hpp"
#include "dsent/sampling.hpp"
#include "dsent/spectral.hpp"

namespace dsent::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Config {
  std::string operator_path;
  std::string collection_path;
  std::size_t n = 32;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  std::string base = "e";
  std::string format;
  double eps_spec = kDefaultPeripheralEps;
  std::size_t cell_budget = TraceOptions{}.cell_budget;
  std::string shift;
  std::size_t grid = 2;
  std::vector<std::size_t> coords{1};
  std::string sequence = "powers_of_two";
  std::string alphas = "0,1,0.5,0.25,0.125,0.1,0.05,0.01";
  std::size_t count = 100;
  std::size_t size = 8;
  std::string dump;
  std::string name;
  bool list = false;
  std::optional<double> radius;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json complex_pair(Complex z) { return Json::array({z.real(), z.imag()}); }

std::string output_format(const Config& c, const char* fallback) {
  return c.format.empty() ? fallback : c.format;
}

void require_json(const Config& c) {
  if (!c.format.empty() && c.format != "json") {
    throw Error(ErrorCode::BadParameters, "this command only writes json");
  }
}

ShiftOperator make_shift(const Config& c) {
  if (c.shift == "koopman") return ShiftOperator::koopman(c.grid);
  return ShiftOperator::averaged(c.grid);
}

std::vector<WindowFunction> shift_collection(const Config& c) {
  std::vector<WindowFunction> out;
  for (std::size_t k : c.coords) out.push_back(WindowFunction::coordinate_indicator(c.grid, k, c.grid - 1));
  return out;
}

TraceOptions trace_options(const Config& c) { return TraceOptions{c.cell_budget}; }

void write_trace(std::ostream& out, const EntropyTrace& raw, const Config& c) {
  const EntropyTrace trace = c.base == "2" ? raw.in_base(2.0) : raw;
  if (output_format(c, "csv") == "csv") {
    out << "n,H,H_over_n\n";
    for (const auto& row : trace.rows) out << row.n << ',' << num(row.h) << ',' << num(row.h_over_n) << '\n';
    return;
  }
  Json doc;
  doc["base"] = c.base;
  doc["collection_size"] = trace.collection_size;
  doc["horizon"] = trace.horizon;
  doc["rows"] = Json::array();
  for (const auto& row : trace.rows) doc["rows"].push_back({{"n", row.n}, {"H", row.h}, {"H_over_n", row.h_over_n}});
  doc["final_slope"] = trace.final_slope();
  doc["limsup_surrogate"] = trace.limsup_surrogate();
  out << doc.dump(2) << '\n';
}

template <typename Compute>
void run_trace(std::ostream& out, const Config& c, Compute compute) {
  try {
    write_trace(out, compute(), c);
  } catch (const CellBudgetError& e) {
    write_trace(out, e.partial_trace(), c);
    throw;
  }
}

void cmd_entropy(const Config& c, std::ostream& out) {
  if (!c.shift.empty()) {
    const auto f = shift_collection(c);
    run_trace(out, c, [&] { return entropy_trace(make_shift(c), f, c.n, trace_options(c)); });
    return;
  }
  const DenseOperator t = read_operator_file(c.operator_path);
  const Collection f = read_collection_file(c.collection_path, t.space());
  run_trace(out, c, [&] { return entropy_trace(t, f, c.n, trace_options(c)); });
}

void cmd_seq_entropy(const Config& c, std::ostream& out) {
  const SequenceSpec seq = SequenceSpec::parse(c.sequence);
  if (!c.shift.empty()) {
    const auto f = shift_collection(c);
    run_trace(out, c, [&] { return sequence_entropy_trace(make_shift(c), f, seq, c.n, trace_options(c)); });
    return;
  }
  const DenseOperator t = read_operator_file(c.operator_path);
  const Collection f = read_collection_file(c.collection_path, t.space());
  run_trace(out, c, [&] { return sequence_entropy_trace(t, f, seq, c.n, trace_options(c)); });
}

void cmd_decompose(const Config& c, std::ostream& out) {
  require_json(c);
  const DenseOperator t = read_operator_file(c.operator_path);
  const SpectralSplit s = jdlg_decompose(t, c.eps_spec);
  const UnitarySplit u = nf_decompose(t);
  Json doc;
  doc["points"] = t.size();
  doc["rev_dim"] = s.rev_basis.cols();
  doc["aws_dim"] = s.aws_basis.cols();
  doc["uni_dim"] = u.uni_basis.cols();
  doc["cnu_dim"] = u.cnu_basis.cols();
  doc["peripheral_eigenvalues"] = Json::array();
  for (const auto& z : s.peripheral_eigenvalues) doc["peripheral_eigenvalues"].push_back(complex_pair(z));
  doc["aws_spectral_radius"] = s.aws_spectral_radius;
  doc["residuals"] = {
      {"decoupling", s.decoupling_residual},
      {"rev_invariance", s.rev_invariance_residual},
      {"aws_invariance", s.aws_invariance_residual},
      {"uni_reducing", u.reducing_residual},
      {"uni_isometry", u.isometry_residual},
      {"rev_uni_angle", max_principal_angle(t.space(), s.rev_basis, u.uni_basis)},
  };
  doc["nf_iterations"] = u.iterations;
  if (c.radius) {
    const QuasiCompactReport q = quasi_compact_classify(t, *c.radius);
    doc["quasi_compact"] = {{"r", *c.radius},
                            {"is_quasi_compact", q.is_quasi_compact},
                            {"f_dim", q.f_dim},
                            {"peripheral_moduli", q.peripheral_moduli},
                            {"interior_radius", q.interior_radius}};
  }
  out << doc.dump(2) << '\n';
}

void cmd_nullity(const Config& c, std::ostream& out) {
  require_json(c);
  Json doc;
  if (!c.shift.empty()) {
    const NullityReport r = nullity_check(make_shift(c), c.n, c.tol);
    doc["backend"] = "shift_" + c.shift;
    doc["verdict"] = to_string(r.verdict);
    doc["route"] = to_string(r.route);
    doc["horizon"] = r.horizon;
    doc["final_norms"] = r.final_norms;
    doc["min_pairwise_distance"] = r.min_pairwise_distance;
    doc["min_deviation"] = r.min_deviation;
  } else {
    const DenseOperator t = read_operator_file(c.operator_path);
    const NullityReport r = nullity_check(t, c.n, c.tol, c.eps_spec);
    doc["backend"] = "dense";
    doc["verdict"] = to_string(r.verdict);
    doc["route"] = to_string(r.route);
    doc["horizon"] = r.horizon;
    doc["aws_spectral_radius"] = r.aws_spectral_radius;
    doc["final_norms"] = r.final_norms;
  }
  out << doc.dump(2) << '\n';
}

void cmd_factor(const Config& c, std::ostream& out) {
  require_json(c);
  const DenseOperator t = read_operator_file(c.operator_path);
  const RotationFactor f = hvn_factor(t, jdlg_decompose(t, c.eps_spec));
  Json doc;
  doc["atoms"] = f.atoms;
  doc["rotation"] = f.rotation;
  doc["projection"] = f.projection;
  doc["atom_masses"] = f.atom_masses;
  doc["mass_spread"] = f.mass_spread;
  doc["single_cycle"] = f.single_cycle;
  doc["factor_residual"] = f.factor_residual;
  doc["support_deviation"] = transition_support_check(t, f);
  out << doc.dump(2) << '\n';
}

bool cmd_examples(const Config& c, std::ostream& out) {
  require_json(c);
  Json doc;
  if (c.list) {
    doc["entries"] = Json::array();
    for (const auto& e : gallery_list()) {
      Json entry{{"name", e.name}, {"parameters", e.parameters}, {"description", e.description}};
      entry["properties"] = Json::array();
      for (const auto& p : e.properties) entry["properties"].push_back({{"name", p.name}, {"basis", p.basis}});
      doc["entries"].push_back(entry);
    }
    out << doc.dump(2) << '\n';
    return true;
  }
  std::vector<std::string> names;
  if (c.name.empty()) {
    for (const auto& e : gallery_list()) names.push_back(e.name);
  } else {
    names.push_back(c.name);
  }
  bool all = true;
  doc["entries"] = Json::array();
  for (const auto& name : names) {
    const GalleryReport r = gallery_run(name);
    all = all && r.passed();
    Json entry{{"name", r.name}, {"parameters", r.parameters}, {"passed", r.passed()}};
    entry["properties"] = Json::array();
    for (const auto& p : r.results) {
      entry["properties"].push_back({{"name", p.name}, {"basis", p.basis}, {"passed", p.passed}, {"detail", p.detail}});
    }
    doc["entries"].push_back(entry);
  }
  doc["passed"] = all;
  out << doc.dump(2) << '\n';
  return all;
}

std::vector<double> parse_alphas(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::AlphaRange, "not a number: '" + item + "'");
    }
  }
  if (out.empty()) throw Error(ErrorCode::AlphaRange, "no alphas given");
  return out;
}

// 1/alpha when it is a positive integer.
std::optional<long> reciprocal_integer(double alpha) {
  if (!(alpha > 0.0)) return std::nullopt;
  const double r = 1.0 / alpha;
  const double k = std::round(r);
  if (std::abs(r - k) > 1e-9 * k) return std::nullopt;
  return static_cast<long>(k);
}

void cmd_perturb_study(const Config& c, std::ostream& out) {
  const DenseOperator t = read_operator_file(c.operator_path);
  const Collection f = read_collection_file(c.collection_path, t.space());
  const DenseOperator s = mean_projection(t.space());
  const std::string format = output_format(c, "csv");
  Json rows = Json::array();
  if (format == "csv") out << "alpha,l1_distance,bound,slope\n";
  for (double alpha : parse_alphas(c.alphas)) {
    const DenseOperator p = convex_combination(alpha, t, s);
    const double distance = l1_operator_norm(t.space(), p.matrix() - t.matrix());
    EntropyTrace trace = entropy_trace(p, f, c.n, trace_options(c));
    if (c.base == "2") trace = trace.in_base(2.0);
    const auto k = reciprocal_integer(alpha);
    if (format == "csv") {
      out << num(alpha) << ',' << num(distance) << ',' << (k ? num(2.0 / double(*k)) : "") << ','
          << num(trace.final_slope()) << '\n';
    } else {
      Json row{{"alpha", alpha}, {"l1_distance", distance}};
      row["bound"] = k ? Json(2.0 / double(*k)) : Json(nullptr);
      row["slope"] = trace.final_slope();
      rows.push_back(row);
    }
  }
  if (format != "csv") out << Json{{"horizon", c.n}, {"rows", rows}}.dump(2) << '\n';
}

void cmd_random_study(const Config& c, std::ostream& out) {
  if (c.size == 0 || c.count == 0) throw Error(ErrorCode::BadParameters, "count and size must be positive");
  std::mt19937_64 rng(c.seed);
  const std::string format = output_format(c, "csv");
  if (!c.dump.empty()) std::filesystem::create_directories(c.dump);

  constexpr std::size_t kBins = 10;
  constexpr double kBinWidth = 0.05;
  std::vector<std::size_t> histogram(kBins + 1, 0);
  std::size_t null_count = 0;
  Json samples = Json::array();
  if (format == "csv") out << "sample,verdict,route,aws_spectral_radius,slope\n";

  for (std::size_t i = 0; i < c.count; ++i) {
    const DenseOperator t = sinkhorn_sample(c.size, rng);
    Eigen::VectorXd half = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(c.size));
    half.head(static_cast<Eigen::Index>((c.size + 1) / 2)).setOnes();
    Eigen::VectorXd noise(static_cast<Eigen::Index>(c.size));
    for (Eigen::Index x = 0; x < noise.size(); ++x) noise[x] = unit_uniform(rng);
    const Collection f(t.space(), {half, noise});

    if (!c.dump.empty()) {
      char file[32];
      std::snprintf(file, sizeof file, "sample_%04zu.json", i);
      std::ofstream dump(std::filesystem::path(c.dump) / file);
      write_operator(dump, t);
    }

    const NullityReport r = nullity_check(t, c.n, c.tol, c.eps_spec);
    EntropyTrace trace = entropy_trace(t, f, c.n, trace_options(c));
    if (c.base == "2") trace = trace.in_base(2.0);
    const double slope = trace.final_slope();
    if (r.verdict == Verdict::Null) ++null_count;
    histogram[std::min(kBins, static_cast<std::size_t>(slope / kBinWidth))]++;

    if (format == "csv") {
      out << i << ',' << to_string(r.verdict) << ',' << to_string(r.route) << ',' << num(r.aws_spectral_radius)
          << ',' << num(slope) << '\n';
    } else {
      samples.push_back({{"sample", i},
                         {"verdict", to_string(r.verdict)},
                         {"route", to_string(r.route)},
                         {"aws_spectral_radius", r.aws_spectral_radius},
                         {"slope", slope}});
    }
  }
  if (format == "csv") return;
  Json doc{{"count", c.count}, {"size", c.size}, {"seed", c.seed}, {"horizon", c.n}, {"null_count", null_count}};
  Json bins = Json::array();
  for (std::size_t b = 0; b <= kBins; ++b) {
    bins.push_back({{"from", double(b) * kBinWidth}, {"to", b == kBins ? Json(nullptr) : Json(double(b + 1) * kBinWidth)},
                    {"count", histogram[b]}});
  }
  doc["slope_histogram"] = bins;
  doc["samples"] = samples;
  out << doc.dump(2) << '\n';
}

int exit_code(const Error& e) {
  switch (classify(e.code())) {
    case ErrorClass::Validation: return kValidation;
    case ErrorClass::Budget: return kBudget;
    case ErrorClass::Hypothesis: return kHypothesis;
    case ErrorClass::Numerical: return kNumerical;
  }
  return kNumerical;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Entropy, spectral splittings and nullity of doubly stochastic operators.", "dsent"};
  app.require_subcommand(1);

  const auto common = [&c](CLI::App* sub) {
    sub->add_option("--n", c.n, "Horizon N")->check(CLI::PositiveNumber);
    sub->add_option("--tol", c.tol, "Tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--base", c.base, "Logarithm base")->check(CLI::IsMember({"e", "2"}));
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--eps-spec", c.eps_spec, "Peripheral spectrum threshold");
    sub->add_option("--cell-budget", c.cell_budget, "Maximal number of cells in a join")->check(CLI::PositiveNumber);
  };
  const auto shift_flags = [&c](CLI::App* sub) {
    sub->add_option("--shift", c.shift, "Use the product-shift backend")->check(CLI::IsMember({"koopman", "average"}));
    sub->add_option("--grid", c.grid, "Atoms per coordinate of the shift backend")->check(CLI::Range(2, 64));
    sub->add_option("--coord", c.coords, "Coordinates k of the indicators {x_k = top atom}")
        ->check(CLI::PositiveNumber);
  };
  const auto operator_file = [&c](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--operator", c.operator_path, "Operator JSON file")->check(CLI::ExistingFile);
    if (required) opt->required();
  };
  const auto collection_file = [&c](CLI::App* sub) {
    sub->add_option("--collection", c.collection_path, "Collection JSON file")->check(CLI::ExistingFile);
  };

  auto* entropy = app.add_subcommand("entropy", "Trace of H(F v TF v ... v T^{n-1}F)");
  auto* seq = app.add_subcommand("seq-entropy", "Trace of the entropy along a sequence");
  for (auto* sub : {entropy, seq}) {
    common(sub);
    operator_file(sub, false);
    collection_file(sub);
    shift_flags(sub);
  }
  seq->add_option("--sequence", c.sequence, "powers_of_two, primes, arithmetic:<step> or a list 1,3,7");

  auto* decompose = app.add_subcommand("decompose", "JdLG and NF splittings");
  common(decompose);
  operator_file(decompose, true);
  decompose->add_option("--radius", c.radius, "Also classify quasi-compactness at this radius");

  auto* nullity = app.add_subcommand("nullity", "Nullity verdict");
  common(nullity);
  operator_file(nullity, false);
  shift_flags(nullity);

  auto* factor = app.add_subcommand("factor", "Rotation factor of the reversible part");
  common(factor);
  operator_file(factor, true);

  auto* examples = app.add_subcommand("examples", "Run the example gallery");
  common(examples);
  examples->add_option("--name", c.name, "Run a single entry");
  examples->add_flag("--list", c.list, "List entries and their properties");

  auto* perturb = app.add_subcommand("perturb-study", "Distance and entropy slope of (1-alpha)T + alpha S");
  common(perturb);
  operator_file(perturb, true);
  collection_file(perturb);
  perturb->add_option("--alphas", c.alphas, "Comma-separated mixing weights");

  auto* random = app.add_subcommand("random-study", "Nullity and entropy of random doubly stochastic matrices");
  common(random);
  random->add_option("--count", c.count, "Number of samples");
  random->add_option("--size", c.size, "Points per sample");
  random->add_option("--dump", c.dump, "Write every sampled operator to this directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    const auto needs_inputs = [&c](bool collection) {
      if (!c.shift.empty()) return;
      if (c.operator_path.empty()) throw Error(ErrorCode::BadParameters, "--operator is required without --shift");
      if (collection && c.collection_path.empty()) throw Error(ErrorCode::BadParameters, "--collection is required");
    };
    if (entropy->parsed()) {
      needs_inputs(true);
      cmd_entropy(c, out);
    } else if (seq->parsed()) {
      needs_inputs(true);
      cmd_seq_entropy(c, out);
    } else if (decompose->parsed()) {
      cmd_decompose(c, out);
    } else if (nullity->parsed()) {
      needs_inputs(false);
      cmd_nullity(c, out);
    } else if (factor->parsed()) {
      cmd_factor(c, out);
    } else if (examples->parsed()) {
      return cmd_examples(c, out) ? kOk : kCheckFailed;
    } else if (perturb->parsed()) {
      if (c.collection_path.empty()) throw Error(ErrorCode::BadParameters, "--collection is required");
      cmd_perturb_study(c, out);
    } else if (random->parsed()) {
      cmd_random_study(c, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e);
  }
  return kOk;
}

}  // namespace dsent::cli
