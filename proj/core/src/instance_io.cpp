#include "sinrsched/instance_io.hpp"

#include <fstream>
#include <sstream>

namespace sinrsched {

using nlohmann::json;

json InstanceToJson(const Instance& inst) {
  json j;
  j["version"] = kInstanceFormatVersion;
  const auto& sp = inst.space();
  if (sp.is_euclidean()) {
    const auto& e = sp.euclidean();
    j["metric"] = {{"type", "euclidean"}, {"dim", e.dim}};
    json pts = json::array();
    for (std::size_t p = 0; p < sp.point_count(); ++p) {
      json row = json::array();
      for (double c : sp.point(p)) row.push_back(c);
      pts.push_back(std::move(row));
    }
    j["points"] = std::move(pts);
  } else {
    const auto& m = sp.matrix();
    json d = json::array();
    const auto n = static_cast<std::size_t>(m.n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) d.push_back(m.dist[a * n + b]);
    }
    j["metric"] = {{"type", "matrix"}, {"n", m.n}, {"d", std::move(d)}};
  }
  const auto& p = inst.params();
  j["params"] = {{"alpha", p.alpha}, {"beta", p.beta}, {"noise", p.noise}};
  json links = json::array();
  for (const Link& l : inst.links()) {
    links.push_back({{"s", l.sender}, {"r", l.receiver}, {"w", l.weight}});
  }
  j["links"] = std::move(links);
  return j;
}

Instance InstanceFromJson(const json& j) {
  try {
    if (!j.is_object()) throw ParameterError("instance document must be an object");
    if (!j.contains("version") || !j.at("version").is_number_integer()) {
      throw ParameterError("instance file is missing an integer 'version'");
    }
    const int version = j.at("version").get<int>();
    if (version != kInstanceFormatVersion) {
      throw ParameterError("unsupported instance format version " + std::to_string(version));
    }
    const json& metric = j.at("metric");
    const std::string type = metric.at("type").get<std::string>();
    MetricSpace space;
    if (type == "euclidean") {
      const int dim = metric.at("dim").get<int>();
      std::vector<double> coords;
      for (const json& row : j.at("points")) {
        if (!row.is_array() || row.size() != static_cast<std::size_t>(dim)) {
          throw ParameterError("point does not match the metric dimension");
        }
        for (const json& c : row) coords.push_back(c.get<double>());
      }
      space = MetricSpace::Euclidean(dim, std::move(coords));
    } else if (type == "matrix") {
      const int n = metric.at("n").get<int>();
      const auto upper = metric.at("d").get<std::vector<double>>();
      space = MetricSpace::MatrixFromUpper(n, upper);
    } else {
      throw ParameterError("unknown metric type '" + type + "'");
    }
    SinrParams params;
    const json& pj = j.at("params");
    params.alpha = pj.at("alpha").get<double>();
    params.beta = pj.at("beta").get<double>();
    params.noise = pj.at("noise").get<double>();
    std::vector<Link> links;
    for (const json& lj : j.at("links")) {
      Link l;
      l.sender = lj.at("s").get<int>();
      l.receiver = lj.at("r").get<int>();
      l.weight = lj.contains("w") ? lj.at("w").get<double>() : 1.0;
      l.id = static_cast<LinkId>(links.size());
      links.push_back(l);
    }
    return Instance(std::move(space), std::move(links), params);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed instance: ") + e.what());
  }
}

std::string DumpInstance(const Instance& inst) { return InstanceToJson(inst).dump(1) + "\n"; }

Instance ParseInstance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("instance is not valid JSON: ") + e.what());
  }
  return InstanceFromJson(j);
}

void SaveInstance(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot open '" + path + "' for writing");
  out << DumpInstance(inst);
  if (!out) throw ParameterError("failed writing '" + path + "'");
}

Instance LoadInstance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot open instance file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseInstance(buf.str());
}

}  // namespace sinrsched
