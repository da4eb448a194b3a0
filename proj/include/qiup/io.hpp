#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qiup/acquisition.hpp"
#include "qiup/fitting.hpp"
#include "qiup/tomography.hpp"

// File schemas (all JSON, schema_version "1"): fringe datasets, simulation
// manifests, fit reports and reconstruction reports. Serialization is
// deterministic (sorted keys, shortest round-trip numbers), so identical
// inputs produce byte-identical files.
namespace qiup::io {

inline constexpr const char* tool_version = "0.1.0";
inline constexpr const char* schema_version = "1";

// Unreadable, unparsable or schema-violating input file.
struct MalformedFile : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

// Parses JSON; parse failures throw MalformedFile with a "path:line:" anchor.
nlohmann::json parse_json_file(const std::filesystem::path& path);

// Throws MalformedFile when `j` holds keys outside `allowed` (strict configs).
void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                         const std::string& context);

// --- datasets ------------------------------------------------------------

void save_dataset(const std::filesystem::path& path, const acquisition::FringeDataset& ds);
// Rejects mismatched zeta_grid/counts lengths and invalid values.
acquisition::FringeDataset load_dataset(const std::filesystem::path& path);

nlohmann::json dataset_to_json(const acquisition::FringeDataset& ds);
acquisition::FringeDataset dataset_from_json(const nlohmann::json& j, const std::string& context);

// --- manifests -----------------------------------------------------------

struct ManifestEntry {
  std::string path;  // relative to the manifest's directory
  std::string label;
  std::string role;  // "calibration" | "object"
  Theta theta = Theta::Deg0;
  ProbeState probe{1.0, 0.0, 0.0};
  std::string probe_name;  // "alpha1", "beta1", "diag", ...
};

struct Manifest {
  std::string config_hash;
  std::uint64_t seed = 0;
  double b1 = 0.7071067811865476;
  double b2 = 0.7071067811865476;
  std::vector<ManifestEntry> datasets;
};

void save_manifest(const std::filesystem::path& path, const Manifest& m);
Manifest load_manifest(const std::filesystem::path& path);

// --- fit reports ----------------------------------------------------------

struct FitRecord {
  std::string path;
  std::string label;
  fitting::SinusoidFit fit;
  std::optional<double> nu;      // absent when the fit is unphysical (c <= 0 or a > c)
  std::optional<double> nu_err;
};

struct FitReport {
  std::vector<FitRecord> fits;
};

void save_fit_report(const std::filesystem::path& path, const FitReport& report);
FitReport load_fit_report(const std::filesystem::path& path);

// --- reconstruction reports -------------------------------------------------

struct ProbeCheck {
  std::string name;
  ProbeState declared{1.0, 0.0, 0.0};
  ProbeState characterized{1.0, 0.0, 0.0};
  double theta45_phase_residual = 0.0;
  double max_deviation = 0.0;  // worst of |d alpha1|, |d beta1|, circ_dist(gamma)
};

struct ReconstructionReport {
  std::string config_hash;
  std::uint64_t seed = 0;
  tomography::Reconstruction rec;
  double t_rel_spread = 0.0;
  double zeta_origin_correction = 0.0;
  std::vector<ProbeCheck> probe_checks;
  std::vector<FitRecord> per_dataset_fits;
};

void save_reconstruction_report(const std::filesystem::path& path,
                                const ReconstructionReport& report);

// --- misc -------------------------------------------------------------------

std::uint64_t fnv1a64(std::string_view bytes);
// "fnv1a:<16 hex digits>" over the file's bytes.
std::string file_hash(const std::filesystem::path& path);

}  // namespace qiup::io
