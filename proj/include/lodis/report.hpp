#ifndef LODIS_REPORT_HPP
#define LODIS_REPORT_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lodis/mas.hpp"
#include "lodis/oracle.hpp"
#include "lodis/protocol.hpp"

namespace lodis {

using Json = nlohmann::ordered_json;

struct SideReport {
  Side side = Side::A;
  int dim_T = 0;
  int dim_Tperp = 0;
  MasDecision decision;
  std::optional<Protocol> protocol;
  std::optional<SimStats> simulation;
};

struct AnalysisReport {
  std::string input_path;
  std::string digest;
  int d_A = 0, d_B = 0, d = 0, n = 0;
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  bool simulated = false;
  std::vector<SideReport> sides;
  int exit_code = 0;
};

Json to_json(const MasEvidence& ev);
Json to_json(const MasDecision& dec);
Json to_json(const AliceMeasurement& m);
Json to_json(const Protocol& p);
Json to_json(const SimStats& s);
Json to_json(const SideReport& r);
Json to_json(const AnalysisReport& r);
Json to_json(const GenericityReport& r);

/// Serialize with keys in insertion order and every floating-point number
/// printed with 17 significant digits, so identical runs produce identical
/// bytes.
std::string dump_json(const Json& j, int indent = 2);

/// FNV-1a 64-bit content digest, rendered as fnv1a64:<hex>.
std::string fnv1a64_hex(std::string_view bytes);

/// Reconstruct a protocol from its report serialization (used by the
/// replay path; the blocks are taken as stored, not rebuilt).
Protocol protocol_from_json(const Json& j);

}  // namespace lodis

#endif
