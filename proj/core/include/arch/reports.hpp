#pragma once

#include <string>

#include "arch/chain.hpp"
#include "arch/kernels.hpp"
#include "arch/leveldeform.hpp"
#include "arch/positivity.hpp"
#include "arch/spherical.hpp"

namespace arch {

/// JSON serializers for the report types. Key order and number formatting
/// are deterministic so identical inputs produce byte-identical output.
std::string to_json(const GramReport& rep);
std::string to_json(const CertificateReport& rep);
std::string to_json(const OverlapDecision& dec);
std::string to_json(const QuadratureCheckReport& rep);
std::string to_json(const SphericalAreaReport& rep);
std::string to_json(const HalfplaneCheckReport& rep);
std::string to_json(const IdentityReport& rep);
std::string to_json(const MergingResidualReport& rep);

/// Chain trace CSV: step, min_eig_A2, trace_A2, norm_D, verdict.
std::string chain_trace_csv(const ChainRun& run);
std::string chain_trace_csv(std::span<const ChainState> history, const ChainReport* report);

}  // namespace arch
