// Command-line front door: parse island specs, run certificates, chains and
// the desk-scale verifications, emit JSON/CSV reports with exit-code triage.
//
// Exit codes: 0 check passed / DISJOINT_CERTIFIED, 1 check failed /
// OVERLAP_DETECTED, 2 INCONCLUSIVE, 64 usage error. A report is written on
// exits 0-2.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "arch/chain.hpp"
#include "arch/leveldeform.hpp"
#include "arch/positivity.hpp"
#include "arch/reports.hpp"
#include "arch/spherical.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;
using namespace arch;

constexpr int kExitPassed = 0;
constexpr int kExitFailed = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 64;

struct Options {
  std::string disks;
  std::string pq;
  int max_iter = 50;
  double tol = 1e-10;
  int samples = 32;
  std::string band;
  std::uint64_t seed = 1;
  double t = 0.5;
  std::string h = "z2";
  int n = 1000;
  double two_disk_a = 0.0;
  std::string out;
  bool no_timestamp = false;
};

std::string read_input(const std::string& spec) {
  // Inline JSON if it looks like JSON, otherwise a file path.
  if (!spec.empty() && (spec.front() == '[' || spec.front() == '{')) return spec;
  std::ifstream in(spec);
  if (!in) throw std::invalid_argument("cannot open input file: " + spec);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ArchipelagoSpec parse_disks(const std::string& spec) {
  const std::string text = read_input(spec);
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw std::invalid_argument("malformed JSON disk list");
  if (j.is_object()) return archipelago_from_json(text);
  if (!j.is_array()) throw std::invalid_argument("disks must be [[cx,cy,r],...] triples");
  std::vector<std::pair<cplx, double>> disks;
  for (const auto& triple : j) {
    if (!triple.is_array() || triple.size() != 3)
      throw std::invalid_argument("disks must be [cx, cy, r] triples");
    disks.emplace_back(cplx(triple[0].get<double>(), triple[1].get<double>()),
                       triple[2].get<double>());
  }
  return make_archipelago(disks);
}

std::pair<double, double> parse_band(const Options& opt, double bounding_radius) {
  if (opt.band.empty()) return default_band(bounding_radius);
  const auto comma = opt.band.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("--band expects LO,HI");
  const double lo = std::stod(opt.band.substr(0, comma));
  const double hi = std::stod(opt.band.substr(comma + 1));
  if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("--band expects 0 < LO <= HI");
  return {lo, hi};
}

ordered_json config_echo(const Options& opt, const std::string& subcommand,
                         std::pair<double, double> band) {
  return ordered_json{{"subcommand", subcommand},
                      {"disks", opt.disks},
                      {"pq", opt.pq},
                      {"max_iter", opt.max_iter},
                      {"tol", opt.tol},
                      {"samples", opt.samples},
                      {"band", {band.first, band.second}},
                      {"seed", opt.seed},
                      {"t", opt.t},
                      {"h", opt.h},
                      {"n", opt.n},
                      {"two_disk_a", opt.two_disk_a},
                      {"out", opt.out},
                      {"no_timestamp", opt.no_timestamp}};
}

void attach_timestamp(ordered_json& report, const Options& opt) {
  if (opt.no_timestamp) return;
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&tt));
  report["timestamp"] = buf;
}

std::string sibling_path(const std::string& out, const std::string& suffix) {
  const auto dot = out.find_last_of('.');
  const std::string stem = dot == std::string::npos ? out : out.substr(0, dot);
  return stem + suffix;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot write output file: " + path);
  f << text;
}

void emit_report(const Options& opt, ordered_json report) {
  attach_timestamp(report, opt);
  const std::string text = report.dump(2) + "\n";
  if (opt.out.empty()) {
    std::cout << text;
  } else {
    write_text(opt.out, text);
  }
}

// Builds (P, Q) and the evaluator from whichever input the command got.
struct ProblemInput {
  std::optional<ArchipelagoSpec> arch;
  NodePolynomial P;
  HermitianPolynomialKernel Q;
  KernelEvaluator ev = KernelEvaluator::empty();
};

ProblemInput resolve_input(const Options& opt) {
  ProblemInput in;
  if (opt.two_disk_a > 0.0) {
    in.arch = make_archipelago(
        {{cplx(-opt.two_disk_a, 0.0), 1.0}, {cplx(opt.two_disk_a, 0.0), 1.0}});
  } else if (!opt.disks.empty()) {
    in.arch = parse_disks(opt.disks);
  } else if (!opt.pq.empty()) {
    auto raw = raw_pq_from_json(read_input(opt.pq));
    // Bounding radius estimate for raw input: node reach plus a radial scan
    // of the diagonal sign changes.
    double r0 = 1.0;
    for (const auto& root : polynomial_roots(raw.P)) r0 = std::max(r0, std::abs(root));
    for (int k = 0; k < 256; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / 256.0;
      for (double r = 8.0 * r0; r > 0.02; r *= 0.98) {
        if (raw.Q.eval_diagonal(std::polar(r, theta)) < 0.0) {
          r0 = std::max(r0, r);
          break;
        }
      }
    }
    in.P = raw.P;
    in.Q = raw.Q;
    in.ev = KernelEvaluator::from_raw(raw.P, raw.Q, r0);
    return in;
  } else {
    throw std::invalid_argument("provide --disks, --pq or --two-disk-a");
  }
  auto [P, Q] = defining_data(*in.arch);
  in.P = std::move(P);
  in.Q = std::move(Q);
  in.ev = KernelEvaluator::from_archipelago(*in.arch);
  return in;
}

int run_overlap(const Options& opt) {
  if (opt.disks.empty() && !(opt.two_disk_a > 0.0))
    throw std::invalid_argument("overlap requires --disks or --two-disk-a");
  const ProblemInput in = resolve_input(opt);
  const auto band = parse_band(opt, in.ev.bounding_radius());
  const SamplePlan plan{opt.samples, band.first, band.second, opt.seed};
  const OverlapDecision dec = decide_overlap(*in.arch, plan, opt.max_iter, opt.tol);

  ordered_json report = ordered_json::parse(to_json(dec));
  report["config"] = config_echo(opt, "overlap", band);
  emit_report(opt, report);
  if (!opt.out.empty())
    write_text(sibling_path(opt.out, ".trace.csv"), chain_trace_csv(dec.chain_trace, nullptr));

  switch (dec.verdict) {
    case OverlapVerdict::DisjointCertified: return kExitPassed;
    case OverlapVerdict::OverlapDetected: return kExitFailed;
    case OverlapVerdict::Inconclusive: return kExitInconclusive;
  }
  return kExitInconclusive;
}

int run_chain(const Options& opt) {
  const ProblemInput in = resolve_input(opt);
  const double cap = 4.0 * (in.ev.bounding_radius() + 1.0);
  const ChainOutcome outcome = run_chain_for(in.P, in.Q, opt.max_iter, opt.tol, cap);

  ordered_json report;
  bool passed = false;
  if (outcome.seed.status == SeedStatus::NotPsd) {
    report["verdict"] = "SEED_NOT_PSD";
    report["offending_eigenvalue"] = outcome.seed.offending_eigenvalue;
  } else if (outcome.seed.status == SeedStatus::DegenerateSeed) {
    report["verdict"] = "DEGENERATE_SEED";
  } else {
    const auto& run = *outcome.run;
    passed = run.report.certified;
    report["verdict"] = passed ? "CERTIFIED_UP_TO_" + std::to_string(opt.max_iter)
                               : "FAILED_AT(" + std::to_string(run.report.failed_at) + ", " +
                                     chain_failure_name(run.report.mode) + ")";
    report["steps_run"] = run.report.steps_run;
    report["failed_at"] = run.report.failed_at;
    ordered_json trace = ordered_json::array();
    for (const auto& st : run.history) {
      trace.push_back({{"step", st.step},
                       {"min_eig_A2", st.min_eig_A2},
                       {"trace_A2", st.trace_A2},
                       {"norm_D", st.norm_D}});
    }
    report["trace"] = trace;
    if (!opt.out.empty())
      write_text(sibling_path(opt.out, ".trace.csv"), chain_trace_csv(run));
  }
  report["norm_cap"] = cap;
  report["config"] = config_echo(opt, "chain", {0.0, 0.0});
  emit_report(opt, report);
  return passed ? kExitPassed : kExitFailed;
}

int run_kernel(const Options& opt) {
  const ProblemInput in = resolve_input(opt);
  const auto band = parse_band(opt, in.ev.bounding_radius());
  const SamplePlan plan{opt.samples, band.first, band.second, opt.seed};

  const ChainOutcome outcome =
      run_chain_for(in.P, in.Q, opt.max_iter, opt.tol, 4.0 * (in.ev.bounding_radius() + 1.0));
  if (outcome.seed.status != SeedStatus::Ok || !outcome.run->report.certified)
    throw std::invalid_argument("kernel: the chain does not survive --max-iter steps; "
                                "the operator paths need a surviving model");
  const TruncatedOperator op = assemble_truncated(*outcome.run, opt.max_iter);

  const auto pairs = plan_pairs(plan);
  double max_op_err = 0.0, max_series_err = 0.0;
  ordered_json samples = ordered_json::array();
  for (int k = 0; k + 1 < plan.n; k += 2) {
    const PointQuad q{pairs[static_cast<std::size_t>(k)].first,
                      pairs[static_cast<std::size_t>(k)].second,
                      pairs[static_cast<std::size_t>(k) + 1].first,
                      pairs[static_cast<std::size_t>(k) + 1].second};
    const cplx rational = kernel_L(in.ev, q);
    const cplx via_op = operator_L(op, q);
    const cplx via_series = neumann_L(*outcome.run, q, opt.max_iter);
    const double scale = std::max(1.0, std::abs(rational));
    max_op_err = std::max(max_op_err, std::abs(rational - via_op) / scale);
    max_series_err = std::max(max_series_err, std::abs(rational - via_series) / scale);
    if (samples.size() < 4) {
      const auto [m, nn] = kernel_M_N(in.ev, q.w, q.z);
      samples.push_back({{"quad",
                          {q.w.real(), q.w.imag(), q.z.real(), q.z.imag(), q.u.real(),
                           q.u.imag(), q.v.real(), q.v.imag()}},
                         {"E", {in.ev.eval(q.w, q.z).real(), in.ev.eval(q.w, q.z).imag()}},
                         {"M", {m.real(), m.imag()}},
                         {"N", {nn.real(), nn.imag()}},
                         {"L", {rational.real(), rational.imag()}}});
    }
  }
  const double gate = 1e-6;
  const bool passed = max_op_err <= gate && max_series_err <= gate;
  ordered_json report{{"verdict", passed ? "CROSS_PATH_AGREEMENT" : "CROSS_PATH_DISAGREEMENT"},
                      {"max_operator_rel_err", max_op_err},
                      {"max_series_rel_err", max_series_err},
                      {"agreement_gate", gate},
                      {"truncation", opt.max_iter},
                      {"samples", samples}};
  report["config"] = config_echo(opt, "kernel", band);
  emit_report(opt, report);
  return passed ? kExitPassed : kExitFailed;
}

int run_levelset(const Options& opt, bool h_given) {
  if (!h_given) {
    // Density-grid export mode.
    const DensityField field = density_field(opt.t, opt.n, 2.6);
    ordered_json report{{"mode", "density_grid"},
                        {"t", opt.t},
                        {"n", opt.n},
                        {"mass", field.mass()},
                        {"hole_cells", field.hole_cells()},
                        {"t_supported", field.t_supported}};
    report["config"] = config_echo(opt, "levelset", {0.0, 0.0});
    emit_report(opt, report);
    if (!opt.out.empty())
      write_text(sibling_path(opt.out, ".grid.csv"), density_to_csv(field));
    return kExitPassed;
  }

  HarmonicTag tag;
  if (opt.h == "1") tag = HarmonicTag::One;
  else if (opt.h == "z") tag = HarmonicTag::Z;
  else if (opt.h == "z2") tag = HarmonicTag::Z2;
  else if (opt.h == "z3") tag = HarmonicTag::Z3;
  else if (opt.h == "rez2") tag = HarmonicTag::ReZ2;
  else throw std::invalid_argument("--h must be one of 1, z, z2, z3, rez2");

  const QuadratureCheckReport rep = quadrature_identity_check(opt.t, tag, opt.n);
  const bool passed = rep.rel_err <= 0.005;
  ordered_json report = ordered_json::parse(to_json(rep));
  report["verdict"] = passed ? "QUADRATURE_IDENTITY_OK" : "QUADRATURE_IDENTITY_VIOLATION";
  report["rel_err_gate"] = 0.005;
  report["config"] = config_echo(opt, "levelset", {0.0, 0.0});
  emit_report(opt, report);
  return passed ? kExitPassed : kExitFailed;
}

int run_sphere(const Options& opt) {
  const int n = std::max(512, opt.n);
  const double pi = std::numbers::pi;
  const double s2 = std::numbers::sqrt2;
  const SphericalAreaReport unit = spherical_area({cplx(0.0, 0.0), 1.0}, n);
  const SphericalAreaReport big = spherical_area({cplx(0.0, 0.0), s2}, n);
  const SphericalAreaReport moved = spherical_area({cplx(1.0, 0.0), s2}, n);
  const HalfplaneCheckReport halfplane = orthogonal_halfplane_check(std::max(100, opt.n));

  const auto area_ok = [](const SphericalAreaReport& r, double expected) {
    return std::abs(r.closed_form - expected) <= 1e-9 &&
           r.abs_err <= 1e-6 * (1.0 + r.closed_form);
  };
  const bool passed = area_ok(unit, 2.0 * pi) && area_ok(big, 8.0 * pi / 3.0) &&
                      area_ok(moved, 2.0 * pi) && halfplane.line_residual <= 1e-10 &&
                      halfplane.area_sum_err <= 1e-6 &&
                      halfplane.geodesic_membership_err <= 1e-12 && halfplane.u_map_infinity_ok;

  ordered_json report{{"verdict", passed ? "SPHERICAL_CHECKS_OK" : "SPHERICAL_CHECKS_FAILED"},
                      {"areas", ordered_json::array({ordered_json::parse(to_json(unit)),
                                                     ordered_json::parse(to_json(big)),
                                                     ordered_json::parse(to_json(moved))})},
                      {"halfplane", ordered_json::parse(to_json(halfplane))}};
  report["config"] = config_echo(opt, "sphere", {0.0, 0.0});
  emit_report(opt, report);
  return passed ? kExitPassed : kExitFailed;
}

int run_identities(const Options& opt) {
  const std::string disks = opt.disks.empty() ? "[[0,0,1],[4,0,1]]" : opt.disks;
  Options local = opt;
  local.disks = disks;
  const ArchipelagoSpec arch = parse_disks(disks);
  if (arch.disks.size() < 2)
    throw std::invalid_argument("identities requires at least two disks");

  const auto ev1 = KernelEvaluator::from_archipelago(
      make_archipelago({{arch.disks[0].center, arch.disks[0].radius}}));
  std::vector<std::pair<cplx, double>> rest;
  for (std::size_t i = 1; i < arch.disks.size(); ++i)
    rest.emplace_back(arch.disks[i].center, arch.disks[i].radius);
  const auto ev2 = KernelEvaluator::from_archipelago(make_archipelago(rest));

  const auto band = parse_band(local, arch.bounding_radius);
  const SamplePlan plan{opt.samples, band.first, band.second, opt.seed};
  const auto pairs = plan_pairs(plan);

  double max_residual = 0.0, min_reverse_cs = 0.0;
  for (int k = 0; k + 1 < plan.n; k += 2) {
    const PointQuad q{pairs[static_cast<std::size_t>(k)].first,
                      pairs[static_cast<std::size_t>(k)].second,
                      pairs[static_cast<std::size_t>(k) + 1].first,
                      pairs[static_cast<std::size_t>(k) + 1].second};
    const IdentityReport rep = identity_suite(ev1, ev2, q);
    max_residual = std::max(max_residual, rep.max_residual());
    min_reverse_cs = std::min(min_reverse_cs, rep.reverse_cauchy_schwarz);
  }
  const double gate = std::max(opt.tol, 1e-12);
  const bool passed = max_residual <= gate && min_reverse_cs >= -1e-12;
  ordered_json report{{"verdict", passed ? "IDENTITIES_OK" : "IDENTITIES_VIOLATION"},
                      {"max_residual", max_residual},
                      {"min_reverse_cauchy_schwarz", min_reverse_cs},
                      {"residual_gate", gate}};
  report["config"] = config_echo(local, "identities", band);
  emit_report(local, report);
  return passed ? kExitPassed : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positivity certificates for non-overlapping island families"};
  app.require_subcommand(1);

  Options opt;
  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--disks", opt.disks, "Disk list JSON: [[cx,cy,r],...], "
                                          "{\"disks\":[...]} or a file path");
    cmd->add_option("--pq", opt.pq, "Raw quadrature-domain input file {\"P\":...,\"Q\":...}");
    cmd->add_option("--max-iter", opt.max_iter, "Chain step budget / truncation depth")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol", opt.tol, "PSD tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--samples", opt.samples, "Sample count")->check(CLI::PositiveNumber);
    cmd->add_option("--band", opt.band, "Radial sampling band LO,HI");
    cmd->add_option("--seed", opt.seed, "Sampling seed");
    cmd->add_option("--t", opt.t, "Level parameter in [0,1]");
    cmd->add_option("--n", opt.n, "Grid resolution")->check(CLI::PositiveNumber);
    cmd->add_option("--two-disk-a", opt.two_disk_a, "Symmetric two-disk half-separation");
    cmd->add_option("--out", opt.out, "Report output path (default stdout)");
    cmd->add_flag("--no-timestamp", opt.no_timestamp, "Omit the timestamp from reports");
  };

  CLI::App* overlap = app.add_subcommand("overlap", "Decide non-overlapping of a disk family");
  CLI::App* chain = app.add_subcommand("chain", "Run the block-matrix recurrence");
  CLI::App* kernel = app.add_subcommand("kernel", "Cross-check the kernel evaluation paths");
  CLI::App* levelset = app.add_subcommand("levelset", "Level-set densities and quadrature checks");
  CLI::App* sphere = app.add_subcommand("sphere", "Spherical-metric verifications");
  CLI::App* identities = app.add_subcommand("identities", "Merging identity residuals");
  for (CLI::App* cmd : {overlap, chain, kernel, levelset, sphere, identities}) add_common(cmd);
  levelset->set_help_flag("--help", "Print this help message and exit");
  CLI::Option* h_opt =
      levelset->add_option("--h", opt.h, "Harmonic test function: 1, z, z2, z3, rez2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (overlap->parsed()) return run_overlap(opt);
    if (chain->parsed()) return run_chain(opt);
    if (kernel->parsed()) return run_kernel(opt);
    if (levelset->parsed()) return run_levelset(opt, h_opt->count() > 0);
    if (sphere->parsed()) return run_sphere(opt);
    if (identities->parsed()) return run_identities(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
