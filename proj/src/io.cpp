#include "qiup/io.hpp"

#include <fstream>
#include <sstream>

#include "qiup/common.hpp"

namespace qiup::io {

using nlohmann::json;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedFile("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("short write: " + path.string());
}

nlohmann::json parse_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is 1-based; anchor the message to the offending line.
    std::size_t line = 1;
    const std::size_t stop = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
    for (std::size_t i = 0; i < stop; ++i)
      if (text[i] == '\n') ++line;
    throw MalformedFile(path.string() + ":" + std::to_string(line) + ": " + e.what());
  }
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& context) {
  if (!j.is_object()) throw MalformedFile(context + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* name : allowed)
      if (key == name) {
        known = true;
        break;
      }
    if (!known) throw MalformedFile(context + ": unknown field \"" + key + "\"");
  }
}

namespace {

template <typename T>
T field(const json& j, const char* name, const std::string& context) {
  if (!j.contains(name)) throw MalformedFile(context + ": missing field \"" + name + "\"");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception&) {
    throw MalformedFile(context + ": field \"" + name + "\" has the wrong type");
  }
}

Theta theta_from_string(const std::string& s, const std::string& context) {
  if (s == "0") return Theta::Deg0;
  if (s == "45") return Theta::Deg45;
  throw MalformedFile(context + ": theta must be \"0\" or \"45\"");
}

json probe_to_json(const ProbeState& p) {
  return json{{"alpha1", p.alpha1}, {"beta1", p.beta1}, {"gamma", p.gamma}};
}

ProbeState probe_from_json(const json& j, const std::string& context) {
  try {
    return ProbeState{field<double>(j, "alpha1", context), field<double>(j, "beta1", context),
                      field<double>(j, "gamma", context)};
  } catch (const std::invalid_argument& e) {
    throw MalformedFile(context + ": " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

json dataset_to_json(const acquisition::FringeDataset& ds) {
  json j;
  j["schema_version"] = schema_version;
  j["label"] = ds.label;
  j["theta"] = theta_label(ds.theta);
  j["probe"] = probe_to_json(ds.probe);
  j["zeta_grid"] = ds.config.zeta_grid;
  j["counts"] = ds.counts;
  j["config"] = json{
      {"pairs_per_point", ds.config.pairs_per_point},
      {"noise", ds.config.noise == acquisition::NoiseModel::Poisson ? "poisson" : "none"},
      {"rng_seed", ds.config.rng_seed},
      {"model", ds.config.model == acquisition::ForwardModel::Oracle ? "oracle" : "analytic"},
  };
  return j;
}

acquisition::FringeDataset dataset_from_json(const json& j, const std::string& context) {
  if (field<std::string>(j, "schema_version", context) != schema_version)
    throw MalformedFile(context + ": unsupported schema_version");
  acquisition::FringeDataset ds;
  ds.label = field<std::string>(j, "label", context);
  ds.theta = theta_from_string(field<std::string>(j, "theta", context), context);
  ds.probe = probe_from_json(field<json>(j, "probe", context), context + ".probe");
  ds.config.zeta_grid = field<std::vector<double>>(j, "zeta_grid", context);
  ds.counts = field<std::vector<double>>(j, "counts", context);

  const json cfg = field<json>(j, "config", context);
  const std::string cctx = context + ".config";
  ds.config.pairs_per_point = field<std::uint64_t>(cfg, "pairs_per_point", cctx);
  const std::string noise = field<std::string>(cfg, "noise", cctx);
  if (noise == "none")
    ds.config.noise = acquisition::NoiseModel::None;
  else if (noise == "poisson")
    ds.config.noise = acquisition::NoiseModel::Poisson;
  else
    throw MalformedFile(cctx + ": noise must be \"none\" or \"poisson\"");
  ds.config.rng_seed = field<std::uint64_t>(cfg, "rng_seed", cctx);
  const std::string model = field<std::string>(cfg, "model", cctx);
  if (model == "oracle")
    ds.config.model = acquisition::ForwardModel::Oracle;
  else if (model == "analytic")
    ds.config.model = acquisition::ForwardModel::Analytic;
  else
    throw MalformedFile(cctx + ": model must be \"oracle\" or \"analytic\"");

  if (ds.counts.size() != ds.config.zeta_grid.size())
    throw MalformedFile(context + ": counts and zeta_grid lengths differ");
  for (double c : ds.counts)
    if (!(c >= 0.0)) throw MalformedFile(context + ": counts must be nonnegative");
  try {
    ds.config.validate();
  } catch (const std::invalid_argument& e) {
    throw MalformedFile(context + ": " + e.what());
  }
  return ds;
}

void save_dataset(const std::filesystem::path& path, const acquisition::FringeDataset& ds) {
  write_text_file(path, dump(dataset_to_json(ds)));
}

acquisition::FringeDataset load_dataset(const std::filesystem::path& path) {
  return dataset_from_json(parse_json_file(path), path.string());
}

void save_manifest(const std::filesystem::path& path, const Manifest& m) {
  json entries = json::array();
  for (const auto& e : m.datasets) {
    entries.push_back(json{
        {"path", e.path},
        {"label", e.label},
        {"role", e.role},
        {"theta", theta_label(e.theta)},
        {"probe", probe_to_json(e.probe)},
        {"probe_name", e.probe_name},
    });
  }
  json j{
      {"schema_version", schema_version},
      {"tool_version", tool_version},
      {"config_hash", m.config_hash},
      {"seed", m.seed},
      {"src", json{{"b1", m.b1}, {"b2", m.b2}}},
      {"datasets", entries},
  };
  write_text_file(path, dump(j));
}

Manifest load_manifest(const std::filesystem::path& path) {
  const json j = parse_json_file(path);
  const std::string context = path.string();
  if (field<std::string>(j, "schema_version", context) != schema_version)
    throw MalformedFile(context + ": unsupported schema_version");
  Manifest m;
  m.config_hash = field<std::string>(j, "config_hash", context);
  m.seed = field<std::uint64_t>(j, "seed", context);
  const json src = field<json>(j, "src", context);
  m.b1 = field<double>(src, "b1", context + ".src");
  m.b2 = field<double>(src, "b2", context + ".src");
  const json entries = field<json>(j, "datasets", context);
  if (!entries.is_array()) throw MalformedFile(context + ": datasets must be an array");
  for (const auto& e : entries) {
    ManifestEntry entry;
    entry.path = field<std::string>(e, "path", context);
    entry.label = field<std::string>(e, "label", context);
    entry.role = field<std::string>(e, "role", context);
    entry.theta = theta_from_string(field<std::string>(e, "theta", context), context);
    entry.probe = probe_from_json(field<json>(e, "probe", context), context);
    entry.probe_name = field<std::string>(e, "probe_name", context);
    m.datasets.push_back(std::move(entry));
  }
  return m;
}

namespace {

json fit_to_json(const fitting::SinusoidFit& f) {
  return json{
      {"c", f.c},
      {"a", f.a},
      {"phi", f.phi},
      {"residual_rms", f.residual_rms},
      {"stderr", json{{"c", f.err.c}, {"a", f.err.a}, {"phi", f.err.phi}}},
      {"phase_undetermined", f.phase_undetermined},
      {"poisson_weighted", f.poisson_weighted},
  };
}

fitting::SinusoidFit fit_from_json(const json& j, const std::string& context) {
  fitting::SinusoidFit f;
  f.c = field<double>(j, "c", context);
  f.a = field<double>(j, "a", context);
  f.phi = field<double>(j, "phi", context);
  f.residual_rms = field<double>(j, "residual_rms", context);
  const json err = field<json>(j, "stderr", context);
  f.err.c = field<double>(err, "c", context + ".stderr");
  f.err.a = field<double>(err, "a", context + ".stderr");
  f.err.phi = field<double>(err, "phi", context + ".stderr");
  f.phase_undetermined = field<bool>(j, "phase_undetermined", context);
  f.poisson_weighted = field<bool>(j, "poisson_weighted", context);
  return f;
}

json record_to_json(const FitRecord& r) {
  json j{{"path", r.path}, {"label", r.label}, {"fit", fit_to_json(r.fit)}};
  j["nu"] = r.nu ? json(*r.nu) : json(nullptr);
  j["nu_stderr"] = r.nu_err ? json(*r.nu_err) : json(nullptr);
  return j;
}

FitRecord record_from_json(const json& j, const std::string& context) {
  FitRecord r;
  r.path = field<std::string>(j, "path", context);
  r.label = field<std::string>(j, "label", context);
  r.fit = fit_from_json(field<json>(j, "fit", context), context + ".fit");
  if (j.contains("nu") && !j.at("nu").is_null()) r.nu = j.at("nu").get<double>();
  if (j.contains("nu_stderr") && !j.at("nu_stderr").is_null())
    r.nu_err = j.at("nu_stderr").get<double>();
  return r;
}

}  // namespace

void save_fit_report(const std::filesystem::path& path, const FitReport& report) {
  json fits = json::array();
  for (const auto& r : report.fits) fits.push_back(record_to_json(r));
  json j{
      {"schema_version", schema_version},
      {"tool_version", tool_version},
      {"fits", fits},
  };
  write_text_file(path, dump(j));
}

FitReport load_fit_report(const std::filesystem::path& path) {
  const json j = parse_json_file(path);
  const std::string context = path.string();
  if (field<std::string>(j, "schema_version", context) != schema_version)
    throw MalformedFile(context + ": unsupported schema_version");
  const json fits = field<json>(j, "fits", context);
  if (!fits.is_array()) throw MalformedFile(context + ": fits must be an array");
  FitReport report;
  for (const auto& f : fits) report.fits.push_back(record_from_json(f, context));
  return report;
}

void save_reconstruction_report(const std::filesystem::path& path,
                                const ReconstructionReport& report) {
  const tomography::Reconstruction& rec = report.rec;
  json checks = json::array();
  for (const auto& c : report.probe_checks) {
    checks.push_back(json{
        {"name", c.name},
        {"declared", probe_to_json(c.declared)},
        {"characterized", probe_to_json(c.characterized)},
        {"theta45_phase_residual", c.theta45_phase_residual},
        {"max_deviation", c.max_deviation},
    });
  }
  json fits = json::array();
  for (const auto& r : report.per_dataset_fits) fits.push_back(record_to_json(r));
  json j{
      {"schema_version", schema_version},
      {"tool_version", tool_version},
      {"config_hash", report.config_hash},
      {"seed", report.seed},
      {"t_hat", rec.t_hat},
      {"t_rel_spread", report.t_rel_spread},
      {"zeta_origin_correction", report.zeta_origin_correction},
      {"probe_hat", probe_to_json(rec.probe_hat)},
      {"object",
       json{{"tau_h", rec.object.tau_h},
            {"tau_v", rec.object.tau_v},
            {"kappa", rec.object.kappa},
            {"phi_h", rec.object.phi_h},
            {"phi_v", rec.object.phi_v},
            {"xi", rec.object.xi}}},
      {"dphi", rec.dphi},
      {"kappa_alpha", rec.kappa_alpha},
      {"kappa_beta", rec.kappa_beta},
      {"kappa_is_upper_bound", rec.kappa_is_upper_bound},
      {"ratios", json{{"r1", rec.ratios.r1}, {"r2", rec.ratios.r2}}},
      {"xi1", rec.xi1},
      {"xi2", rec.xi2},
      {"consistency",
       json{{"kappa_rel_discrepancy", rec.consistency.kappa_rel_discrepancy},
            {"xi_rel_discrepancy", rec.consistency.xi_rel_discrepancy},
            {"pass", rec.consistency.pass}}},
      {"refined", rec.refined},
      {"residual_rms", rec.residual_rms},
      {"iterations", rec.iterations},
      {"probe_checks", checks},
      {"per_dataset_fits", fits},
  };
  write_text_file(path, dump(j));
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    hash ^= b;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string file_hash(const std::filesystem::path& path) {
  const std::uint64_t h = fnv1a64(read_text_file(path));
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qiup::io
