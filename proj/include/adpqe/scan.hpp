#pragma once

// Batch driver: SPQE and the auxiliary corrections over a list of FCIDUMP
// fixtures and thresholds, with CSV / JSON / text reports.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "adpqe/spqe.hpp"
#include "json.hpp"

namespace adpqe {

enum class Scheme { spqe, asc1, asc2 };

Scheme parse_scheme(const std::string& name);
const char* scheme_name(Scheme s);
// "sd" -> 2, "sdt" -> 3, "sdtq" -> 4
int parse_pool_rank(const std::string& name);

struct ScanEntry {
  std::string label;
  std::filesystem::path fcidump;
};

struct ScanManifest {
  std::vector<ScanEntry> entries;
  SPQEConfig config;
  std::vector<Scheme> schemes{Scheme::spqe, Scheme::asc1, Scheme::asc2};
  bool fci = false;
  std::vector<double> omega_sweep;  // empty: config.omega alone
  double epsilon = 1.6e-3;          // measurement-bound precision

  bool wants(Scheme s) const;
  std::vector<double> omegas() const;
  // Throws ConfigurationError on duplicate labels or an empty entry list.
  void validate() const;
};

// Relative fixture paths resolve against base_dir.
ScanManifest parse_manifest(const nlohmann::json& j, const std::filesystem::path& base_dir);
ScanManifest load_manifest(const std::filesystem::path& path);

struct ScanRow {
  std::string label;
  double omega = 0.0;
  double e_hf = 0.0;
  double e_spqe = 0.0;
  std::optional<double> e_scheme1;
  std::optional<double> e_scheme2;
  std::optional<double> e_fci;
  std::size_t n_p = 0;
  std::size_t n_a = 0;
  long long cnot = 0;
  std::size_t n_res = 0;
  double m_spqe = 0.0;
  double m_ii = 0.0;
  nlohmann::json record;
};

struct ScanReport {
  std::vector<ScanRow> rows;          // manifest order, then omega order
  std::vector<std::string> errors;    // one line per failed entry or point
  bool ok() const { return errors.empty(); }
};

// Runs every (entry, omega) point on up to `workers` threads; 0 picks
// ADPQE_WORKERS or the hardware concurrency.
ScanReport run_scan(const ScanManifest& manifest, unsigned workers = 0);

void write_csv(std::ostream& out, const ScanReport& report);
nlohmann::json report_to_json(const ScanManifest& manifest, const ScanReport& report);
void write_summary(std::ostream& out, const ScanReport& report);

}  // namespace adpqe
