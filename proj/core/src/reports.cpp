#include "arch/reports.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

namespace arch {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json json_or_null(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

ordered_json plan_json(const SamplePlan& plan) {
  return {{"n", plan.n}, {"band", {plan.r_lo, plan.r_hi}}, {"seed", plan.seed}};
}

ordered_json gram_json(const GramReport& rep) {
  return {{"kernel", rep.kernel}, {"n", rep.n},
          {"seed", rep.seed},     {"min_eig", rep.min_eig},
          {"tolerance", rep.tolerance}, {"verdict", rep.psd ? "PSD" : "NOT_PSD"}};
}

}  // namespace

std::string to_json(const GramReport& rep) { return gram_json(rep).dump(2); }

std::string to_json(const CertificateReport& rep) {
  ordered_json j{{"bounded_ok", rep.bounded_ok},
                 {"C_bound", json_or_null(rep.c_bound)},
                 {"pointeval_ok", rep.pointeval_ok},
                 {"C_point", json_or_null(rep.c_point)},
                 {"lambda", {rep.lambda.real(), rep.lambda.imag()}},
                 {"g1_min_eig", rep.g1_min_eig},
                 {"gb_min_eig", rep.gb_min_eig},
                 {"plan", plan_json(rep.plan)}};
  return j.dump(2);
}

std::string to_json(const OverlapDecision& dec) {
  ordered_json stages = ordered_json::array();
  for (const auto& st : dec.stages) {
    stages.push_back({{"name", st.name},
                      {"passed", st.passed},
                      {"min_eig", st.min_eig},
                      {"C", json_or_null(st.C)},
                      {"n", st.n},
                      {"seed", st.seed},
                      {"detail", st.detail}});
  }
  ordered_json j{{"verdict", overlap_verdict_name(dec.verdict)},
                 {"stages", stages},
                 {"thresholds",
                  {{"tolerance", dec.tolerance},
                   {"sound_failure_factor", 10.0},
                   {"chain_budget", dec.chain_budget},
                   {"chain_failed_at", dec.chain_failed_at}}}};
  return j.dump(2);
}

std::string to_json(const QuadratureCheckReport& rep) {
  ordered_json j{{"t", rep.t},
                 {"h", rep.h},
                 {"n", rep.n},
                 {"lhs_re", rep.lhs.real()},
                 {"lhs_im", rep.lhs.imag()},
                 {"rhs_re", rep.rhs.real()},
                 {"rhs_im", rep.rhs.imag()},
                 {"abs_err", rep.abs_err},
                 {"rel_err", rep.rel_err}};
  return j.dump(2);
}

std::string to_json(const SphericalAreaReport& rep) {
  ordered_json j{{"region", rep.region},
                 {"closed_form", rep.closed_form},
                 {"numeric", rep.numeric},
                 {"abs_err", rep.abs_err}};
  return j.dump(2);
}

std::string to_json(const HalfplaneCheckReport& rep) {
  ordered_json j{{"line_residual", rep.line_residual},
                 {"area_sum", rep.area_sum},
                 {"area_sum_err", rep.area_sum_err},
                 {"geodesic_membership_err", rep.geodesic_membership_err},
                 {"u_map_zero_err", rep.u_map_zero_err},
                 {"u_map_infinity_ok", rep.u_map_infinity_ok}};
  return j.dump(2);
}

std::string to_json(const IdentityReport& rep) {
  ordered_json j{{"merging1", rep.merging1},
                 {"merging3", rep.merging3},
                 {"merging5", rep.merging5},
                 {"n_product", rep.n_product},
                 {"reverse_cauchy_schwarz", rep.reverse_cauchy_schwarz}};
  return j.dump(2);
}

std::string to_json(const MergingResidualReport& rep) {
  ordered_json j{{"closed_form_max", rep.closed_form_max},
                 {"operator_max", rep.operator_max},
                 {"max_abs_n2", rep.max_abs_n2}};
  return j.dump(2);
}

std::string chain_trace_csv(std::span<const ChainState> history, const ChainReport* report) {
  std::ostringstream out;
  out.precision(17);
  out << "step,min_eig_A2,trace_A2,norm_D,verdict\n";
  for (const auto& st : history) {
    out << st.step << ',' << st.min_eig_A2 << ',' << st.trace_A2 << ',' << st.norm_D
        << ",OK\n";
  }
  if (report && !report->certified) {
    out << report->failed_at << ",,,," << "FAILED_" << chain_failure_name(report->mode) << '\n';
  }
  return out.str();
}

std::string chain_trace_csv(const ChainRun& run) {
  return chain_trace_csv(run.history, &run.report);
}

}  // namespace arch
