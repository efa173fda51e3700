#pragma once

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace gradsym::cli {

inline constexpr const char* kReportSchema = "gradsym-report/1";

struct Common {
  std::uint64_t seed = 20240917;
  int samples = 100;
  double tol = 1e-9;
};

struct Result {
  nlohmann::json report;
  bool pass = false;
};

struct VerifyOptions {
  std::string table = "T1";
  std::string catalog;
};

struct ReduceOptions {
  std::string id = "all";
  std::string k = "1";
  /// Per-case default when omitted: 1 for iii and iv, 0 otherwise.
  std::optional<std::string> lambda;
  bool integrate = false;
  double from = 1, to = 2;
  std::vector<double> init;
  /// Comma-separated profile omega, phi[, phi'] of the integration.
  std::string profile;
};

struct ExactOptions {
  std::string family = "4-15";
  std::optional<std::string> k;
  std::string lambda = "1";
  std::string c1 = "0";
  std::string c2 = "1";
  int sign = 1;
  std::string variant = "both";
  int grid = 9;
  int refine = 1;
};

struct HodographOptions {
  std::string q = "both";
  int grid = 17;
  int refine = 1;
};

struct FilterOptions {
  std::string in, out;
  std::string model = "rational";
  std::string d0 = "0.01";
  double time = 0.5;
  double safety = 0.4;
};

struct FlowOptions {
  std::string table = "T1";
  std::string row = "7";
  std::string reading;
  std::string generator = "X3";
  std::vector<std::string> params;
  std::vector<double> point;
  double eps = 0.1;
};

Result cmd_verify(const VerifyOptions& o, const Common& c, std::ostream& out);
Result cmd_determining(const Common& c, std::ostream& out);
Result cmd_reduce(const ReduceOptions& o, const Common& c, std::ostream& out);
Result cmd_exact(const ExactOptions& o, const Common& c, std::ostream& out);
Result cmd_hodograph(const HodographOptions& o, const Common& c, std::ostream& out);
Result cmd_pm_filter(const FilterOptions& o, std::ostream& out);
Result cmd_flow(const FlowOptions& o, const Common& c, std::ostream& out);

}  // namespace gradsym::cli
