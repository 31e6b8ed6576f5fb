#include "rsfield/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rsfield {

namespace fs = std::filesystem;
using nlohmann::json;

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp);
    out << content;
    if (!out) throw std::runtime_error("atomic_write: write failed for " + tmp);
  }
  fs::rename(tmp, path);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string grid_field_csv(const GridField& field) {
  const GridPartition& P = field.partition();
  const int N = P.dim();
  std::ostringstream out;
  for (int m = 0; m < N; ++m) out << "u" << (m + 1) << ",";
  out << "value\n";
  std::vector<int> extents(N);
  for (int m = 0; m < N; ++m) extents[m] = P.nodes(m);
  std::size_t k = 0;
  detail::for_each_index(extents, [&](const std::vector<int>& idx) {
    for (int m = 0; m < N; ++m) out << format_double(P.axis(m)[idx[m]]) << ",";
    out << format_double(field.values()[k++]) << "\n";
  });
  return out.str();
}

nlohmann::json axes_json(const GridPartition& P) {
  json axes = json::array();
  for (int m = 0; m < P.dim(); ++m) axes.push_back(P.axis(m));
  return axes;
}

GridPartition partition_from_json(const nlohmann::json& j) {
  std::vector<std::vector<double>> axes;
  for (const auto& ax : j) axes.push_back(ax.get<std::vector<double>>());
  return GridPartition(std::move(axes));
}

void save_grid_field(const std::string& base_path, const GridField& field) {
  atomic_write(base_path + ".csv", grid_field_csv(field));
  json header;
  header["axes"] = axes_json(field.partition());
  atomic_write(base_path + ".json", header.dump(2) + "\n");
}

namespace {

std::vector<double> csv_values(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load: cannot open " + path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t pos = 0;
    for (int m = 0; m < dim; ++m) {
      pos = line.find(',', pos);
      if (pos == std::string::npos) throw std::runtime_error("load: malformed CSV row");
      ++pos;
    }
    values.push_back(std::stod(line.substr(pos)));
  }
  return values;
}

}  // namespace

GridField load_grid_field(const std::string& base_path) {
  std::ifstream hin(base_path + ".json");
  if (!hin) throw std::runtime_error("load_grid_field: cannot open " + base_path + ".json");
  json header = json::parse(hin);
  GridPartition P = partition_from_json(header.at("axes"));
  return GridField(P, csv_values(base_path + ".csv", P.dim()));
}

nlohmann::json to_json(const IntegralResult& r) {
  json j;
  j["value"] = r.value;
  j["error_estimate"] = r.error_estimate;
  json levels = json::array();
  for (const auto& [norm, value] : r.levels) levels.push_back({norm, value});
  j["levels"] = levels;
  return j;
}

nlohmann::json to_json(const TestReport& r) {
  json j;
  j["name"] = r.name;
  j["alpha"] = r.alpha;
  j["pass"] = r.pass;
  json stats = json::array();
  for (const auto& s : r.statistics) {
    stats.push_back({{"probe", s.probe},
                     {"observed", s.observed},
                     {"expected", s.expected},
                     {"se", s.se},
                     {"z", s.z}});
  }
  j["statistics"] = stats;
  return j;
}

std::string report_table(const TestReport& r) {
  std::ostringstream out;
  out << r.name << " (alpha=" << r.alpha << "): " << (r.pass ? "PASS" : "FAIL") << "\n";
  char buf[256];
  std::snprintf(buf, sizeof(buf), "  %-28s %14s %14s %12s %8s\n", "probe", "observed",
                "expected", "se", "z");
  out << buf;
  for (const auto& s : r.statistics) {
    std::snprintf(buf, sizeof(buf), "  %-28s %14.6g %14.6g %12.4g %8.2f\n", s.probe.c_str(),
                  s.observed, s.expected, s.se, s.z);
    out << buf;
  }
  return out.str();
}

void save_ensemble(const std::string& dir, const FieldEnsemble& E) {
  fs::create_directories(dir);
  json manifest;
  manifest["driver"] = E.driver;
  manifest["params"] = E.params;
  manifest["seed"] = E.seed;
  manifest["replications"] = E.size();
  manifest["axes"] = axes_json(E.partition);
  atomic_write((fs::path(dir) / "manifest.json").string(), manifest.dump(2) + "\n");
  for (int m = 0; m < E.size(); ++m) {
    char name[32];
    std::snprintf(name, sizeof(name), "field_%04d", m);
    atomic_write((fs::path(dir) / (std::string(name) + ".csv")).string(),
                 grid_field_csv(E.field(m)));
  }
}

FieldEnsemble load_ensemble(const std::string& dir) {
  std::ifstream min((fs::path(dir) / "manifest.json").string());
  if (!min) throw std::runtime_error("load_ensemble: cannot open manifest in " + dir);
  json manifest = json::parse(min);
  FieldEnsemble E{partition_from_json(manifest.at("axes")), {}, manifest.at("seed"),
                  manifest.at("driver"), manifest.value("params", std::string())};
  const int M = manifest.at("replications");
  E.replications.resize(M);
  for (int m = 0; m < M; ++m) {
    char name[32];
    std::snprintf(name, sizeof(name), "field_%04d.csv", m);
    E.replications[m] = csv_values((fs::path(dir) / name).string(), E.partition.dim());
    if (E.replications[m].size() != E.partition.node_count())
      throw std::runtime_error("load_ensemble: field size mismatch");
  }
  return E;
}

void save_transformed(const std::string& base_path, const TransformedField& field) {
  save_grid_field(base_path, field.base);
  json prov;
  prov["theta"] = field.theta.components;
  prov["kind"] = to_string(field.kind);
  prov["truncation"] = field.truncation;
  prov["seed"] = field.seed;
  prov["provenance"] = field.provenance;
  atomic_write(base_path + ".provenance.json", prov.dump(2) + "\n");
}

}  // namespace rsfield
