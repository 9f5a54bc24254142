#include "adpqe/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

#include "adpqe/asc.hpp"
#include "adpqe/errors.hpp"
#include "adpqe/fci.hpp"
#include "adpqe/resources.hpp"

namespace adpqe {

namespace {

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt12(*v) : std::string{}; }

std::string error_mEh(const std::optional<double>& e, const std::optional<double>& fci) {
  if (!e || !fci) return {};
  return fmt12((*e - *fci) * 1e3);
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ADPQE_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Calls job(i) for i in [0, n) on a small pool of threads.
template <typename Job>
void parallel_for(std::size_t n, unsigned workers, Job job) {
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i = next++; i < n; i = next++) job(i);
  };
  const unsigned extra = static_cast<unsigned>(std::min<std::size_t>(workers, n)) - (n > 0);
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < extra; ++t) pool.emplace_back(loop);
  loop();
}

struct LoadedEntry {
  std::optional<Problem> problem;
  std::optional<double> e_fci;
  std::string error;
};

}  // namespace

Scheme parse_scheme(const std::string& name) {
  if (name == "spqe") return Scheme::spqe;
  if (name == "asc1") return Scheme::asc1;
  if (name == "asc2") return Scheme::asc2;
  throw ConfigurationError("unknown scheme '" + name + "'");
}

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::spqe: return "spqe";
    case Scheme::asc1: return "asc1";
    case Scheme::asc2: return "asc2";
  }
  return "?";
}

int parse_pool_rank(const std::string& name) {
  if (name == "s") return 1;
  if (name == "sd") return 2;
  if (name == "sdt") return 3;
  if (name == "sdtq") return 4;
  throw ConfigurationError("unknown pool '" + name + "' (expected sd, sdt or sdtq)");
}

bool ScanManifest::wants(Scheme s) const {
  return std::find(schemes.begin(), schemes.end(), s) != schemes.end();
}

std::vector<double> ScanManifest::omegas() const {
  return omega_sweep.empty() ? std::vector<double>{config.omega} : omega_sweep;
}

void ScanManifest::validate() const {
  if (entries.empty()) throw ConfigurationError("manifest has no entries");
  std::set<std::string> labels;
  for (const auto& e : entries) {
    if (!labels.insert(e.label).second) {
      throw ConfigurationError("duplicate label '" + e.label + "'");
    }
  }
  if (!(epsilon > 0.0)) throw ConfigurationError("epsilon must be positive");
  for (double w : omegas()) {
    SPQEConfig c = config;
    c.omega = w;
    c.validate();
  }
}

ScanManifest parse_manifest(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  ScanManifest m;
  try {
    for (const auto& e : j.at("entries")) {
      std::filesystem::path p = e.at("fcidump").get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      m.entries.push_back({e.at("label").get<std::string>(), p});
    }
    if (j.contains("config")) {
      const auto& c = j["config"];
      m.config.omega = c.value("omega", m.config.omega);
      m.config.dt = c.value("dt", m.config.dt);
      m.config.micro.residual_tolerance =
          c.value("micro_tolerance", m.config.micro.residual_tolerance);
      m.config.micro.max_iterations = c.value("max_micro_iterations", m.config.micro.max_iterations);
      m.config.max_macro_iterations = c.value("max_macro_iterations", m.config.max_macro_iterations);
      if (c.contains("pool")) m.config.rank_cap = parse_pool_rank(c["pool"].get<std::string>());
      if (c.contains("core_pool")) {
        m.config.selection_rank_cap = parse_pool_rank(c["core_pool"].get<std::string>());
      }
    }
    if (j.contains("schemes")) {
      m.schemes.clear();
      for (const auto& s : j["schemes"]) m.schemes.push_back(parse_scheme(s.get<std::string>()));
    }
    m.fci = j.value("fci", false);
    if (j.contains("omega_sweep")) m.omega_sweep = j["omega_sweep"].get<std::vector<double>>();
    m.epsilon = j.value("epsilon", m.epsilon);
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigurationError(std::string("malformed manifest: ") + ex.what());
  }
  m.validate();
  return m;
}

ScanManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open manifest " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigurationError("malformed manifest " + path.string() + ": " + ex.what());
  }
  return parse_manifest(j, path.parent_path());
}

ScanReport run_scan(const ScanManifest& manifest, unsigned workers) {
  manifest.validate();
  workers = resolve_workers(workers);
  const auto omegas = manifest.omegas();

  std::vector<LoadedEntry> loaded(manifest.entries.size());
  parallel_for(loaded.size(), workers, [&](std::size_t i) {
    const auto& entry = manifest.entries[i];
    try {
      loaded[i].problem.emplace(prepare_problem(parse_fcidump_file(entry.fcidump.string())));
      if (manifest.fci) loaded[i].e_fci = fci_ground_energy(*loaded[i].problem).energy;
    } catch (const std::exception& ex) {
      loaded[i].problem.reset();
      loaded[i].error = entry.label + ": " + ex.what();
    }
  });

  const std::size_t n_points = loaded.size() * omegas.size();
  std::vector<std::optional<ScanRow>> rows(n_points);
  std::vector<std::string> point_errors(n_points);
  parallel_for(n_points, workers, [&](std::size_t k) {
    const std::size_t i = k / omegas.size();
    if (!loaded[i].problem) return;
    const Problem& problem = *loaded[i].problem;
    SPQEConfig cfg = manifest.config;
    cfg.omega = omegas[k % omegas.size()];
    try {
      const SPQEResult spqe = run_spqe(problem, cfg);
      ScanRow row;
      row.label = manifest.entries[i].label;
      row.omega = cfg.omega;
      row.e_hf = spqe.e_hf;
      row.e_spqe = spqe.e_spqe;
      row.e_fci = loaded[i].e_fci;
      row.record["label"] = row.label;
      row.record["spqe"] = spqe_to_json(spqe);

      if (manifest.wants(Scheme::asc1) || manifest.wants(Scheme::asc2)) {
        const auto aux = map_auxiliary(spqe, problem.compiled, problem.reference);
        const ASCEnergies e = manifest.wants(Scheme::asc2)
                                  ? asc_energies(spqe, aux, problem.compiled, problem.reference)
                                  : energy_scheme1(spqe, aux, problem.reference);
        if (manifest.wants(Scheme::asc1)) row.e_scheme1 = e.e_scheme1;
        if (manifest.wants(Scheme::asc2)) row.e_scheme2 = e.e_scheme2;
        row.record["asc"] = asc_to_json(aux, e);
      }

      const auto res = estimate_resources(spqe, problem.qubit_hamiltonian, manifest.epsilon);
      row.n_p = res.parameter_count;
      row.n_a = res.n_auxiliary;
      row.cnot = res.cnot_count;
      row.n_res = res.residual_evaluations;
      row.m_spqe = res.m_spqe_bound;
      row.m_ii = res.m_scheme2_bound;
      row.record["resources"] = resources_to_json(res);
      if (row.e_fci) row.record["e_fci"] = *row.e_fci;
      rows[k] = std::move(row);
    } catch (const std::exception& ex) {
      point_errors[k] = manifest.entries[i].label + " omega=" + fmt12(cfg.omega) + ": " + ex.what();
    }
  });

  ScanReport report;
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    if (!loaded[i].error.empty()) report.errors.push_back(loaded[i].error);
    for (std::size_t w = 0; w < omegas.size(); ++w) {
      const std::size_t k = i * omegas.size() + w;
      if (rows[k]) report.rows.push_back(std::move(*rows[k]));
      if (!point_errors[k].empty()) report.errors.push_back(point_errors[k]);
    }
  }
  return report;
}

void write_csv(std::ostream& out, const ScanReport& report) {
  out << "label,omega,e_hf,e_spqe,e_scheme1,e_scheme2,e_fci,err_spqe,err_s1,err_s2,"
         "n_p,n_a,cnot,n_res,m_spqe,m_ii\n";
  for (const auto& r : report.rows) {
    out << r.label << ',' << fmt12(r.omega) << ',' << fmt12(r.e_hf) << ',' << fmt12(r.e_spqe)
        << ',' << fmt_opt(r.e_scheme1) << ',' << fmt_opt(r.e_scheme2) << ',' << fmt_opt(r.e_fci)
        << ',' << error_mEh(r.e_spqe, r.e_fci) << ',' << error_mEh(r.e_scheme1, r.e_fci) << ','
        << error_mEh(r.e_scheme2, r.e_fci) << ',' << r.n_p << ',' << r.n_a << ',' << r.cnot
        << ',' << r.n_res << ',' << fmt12(r.m_spqe) << ',' << fmt12(r.m_ii) << '\n';
  }
}

nlohmann::json report_to_json(const ScanManifest& manifest, const ScanReport& report) {
  nlohmann::json schemes = nlohmann::json::array();
  for (Scheme s : manifest.schemes) schemes.push_back(scheme_name(s));
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : report.rows) runs.push_back(r.record);
  return {{"config", config_to_json(manifest.config)},
          {"schemes", schemes},
          {"fci", manifest.fci},
          {"omegas", manifest.omegas()},
          {"epsilon", manifest.epsilon},
          {"runs", runs},
          {"errors", report.errors}};
}

void write_summary(std::ostream& out, const ScanReport& report) {
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %-8s %12s %12s %12s %5s %5s %8s\n", "label", "omega",
                "err_spqe", "err_s1", "err_s2", "n_p", "n_a", "cnot");
  out << line;
  auto err = [](const std::optional<double>& e, const std::optional<double>& f) {
    return e && f ? (*e - *f) * 1e3 : std::nan("");
  };
  for (const auto& r : report.rows) {
    std::snprintf(line, sizeof line, "%-10s %-8.4g %12.6f %12.6f %12.6f %5zu %5zu %8lld\n",
                  r.label.c_str(), r.omega, err(r.e_spqe, r.e_fci), err(r.e_scheme1, r.e_fci),
                  err(r.e_scheme2, r.e_fci), r.n_p, r.n_a, r.cnot);
    out << line;
  }
  out << "errors in mE_h relative to FCI (blank columns print nan)\n";
  for (const auto& e : report.errors) out << "error: " << e << '\n';
}

}  // namespace adpqe
