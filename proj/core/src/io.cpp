#include "capquad/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace capquad::io {

using nlohmann::json;

namespace {

json point_json(const SpherePoint& x) {
  json a = json::array();
  for (double c : x.coords()) a.push_back(c);
  return a;
}

SpherePoint point_from(const json& j, int d, const char* what) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(d + 1)) {
    throw FormatError(std::string(what) + " must be an array of " + std::to_string(d + 1) +
                      " numbers");
  }
  std::array<double, 3> c{};
  double norm2 = 0.0;
  for (int i = 0; i <= d; ++i) {
    if (!j[i].is_number()) throw FormatError(std::string(what) + " has a non-numeric entry");
    c[i] = j[i].get<double>();
    norm2 += c[i] * c[i];
  }
  if (!(std::abs(norm2 - 1.0) <= 1e-9)) {
    throw FormatError(std::string(what) + " is not a unit vector");
  }
  return SpherePoint(std::span<const double>(c.data(), static_cast<std::size_t>(d + 1)));
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string("field \"") + key + "\" has the wrong type");
  }
}

json domain_fields(const Domain& domain) {
  json j;
  j["d"] = dim(domain);
  j["alpha"] = scale(domain);
  j["center"] = point_json(frame(domain).center());
  if (const auto* c = std::get_if<Collar>(&domain)) j["beta"] = c->beta();
  return j;
}

Domain domain_from(const json& j) {
  const int d = field<int>(j, "d");
  if (d != 1 && d != 2) throw FormatError("d must be 1 or 2");
  const double alpha = field<double>(j, "alpha");
  const SpherePoint center = point_from(j.contains("center") ? j["center"] : point_json(SpherePoint::pole(d)), d, "center");
  try {
    if (j.contains("beta")) return Collar(center, alpha, field<double>(j, "beta"));
    return Cap(center, alpha);
  } catch (const std::exception& e) {
    throw FormatError(e.what());
  }
}

json stats_json(const RatioStats& s) {
  return {{"min", s.min}, {"max", s.max}, {"mean", s.mean}, {"count", s.count}};
}

json pairs_json(const std::vector<std::pair<std::string, double>>& v) {
  json j = json::object();
  for (const auto& [k, x] : v) j[k] = x;
  return j;
}

std::vector<std::pair<std::string, double>> pairs_from(const json& j) {
  std::vector<std::pair<std::string, double>> out;
  if (!j.is_object()) throw FormatError("expected an object of numbers");
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) throw FormatError("field \"" + k + "\" must be a number");
    out.emplace_back(k, v.get<double>());
  }
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

json to_json(const NodeSet& nodes) {
  json j = domain_fields(nodes.domain);
  j["version"] = kRuleVersion;
  j["degree"] = nodes.degree;
  j["delta"] = nodes.delta;
  json pts = json::array();
  for (const SpherePoint& x : nodes.points) pts.push_back(point_json(x));
  j["nodes"] = std::move(pts);
  j["generator"] = {{"seed", nodes.seed}, {"algorithm", "greedy-fps"}};
  return j;
}

json to_json(const CubatureRule& rule) {
  json j = to_json(rule.nodes);
  j["degree"] = rule.degree;
  j["weights"] = rule.weights;
  j["residual"] = rule.residual;
  j["generator"]["solver"] = "nnls-active-set";
  j["generator"]["back_offs"] = rule.meta.back_offs;
  j["generator"]["pruned"] = rule.meta.pruned;
  j["generator"]["iterations"] = rule.meta.iterations;
  return j;
}

NodeSet node_set_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("expected a JSON object");
  if (field<std::string>(j, "version") != kRuleVersion) {
    throw FormatError(std::string("version must be \"") + kRuleVersion + "\"");
  }
  const Domain domain = domain_from(j);
  const int d = dim(domain);
  const int degree = field<int>(j, "degree");
  const double delta = field<double>(j, "delta");
  if (degree < 0) throw FormatError("degree must be >= 0");
  if (!(delta > 0.0)) throw FormatError("delta must be positive");
  const json& pts = j.contains("nodes") ? j["nodes"] : json();
  if (!pts.is_array() || pts.empty()) throw FormatError("nodes must be a non-empty array");
  std::vector<SpherePoint> points;
  points.reserve(pts.size());
  for (const json& p : pts) {
    SpherePoint x = point_from(p, d, "node");
    if (!contains(domain, x)) throw FormatError("node outside the domain");
    points.push_back(x);
  }
  std::uint64_t seed = 0;
  if (j.contains("generator") && j["generator"].contains("seed")) {
    seed = field<std::uint64_t>(j["generator"], "seed");
  }
  return NodeSet{domain, std::move(points), delta / std::max(degree, 1), degree, delta, seed};
}

CubatureRule rule_from_json(const json& j) {
  NodeSet nodes = node_set_from_json(j);
  const auto weights = field<std::vector<double>>(j, "weights");
  if (weights.size() != nodes.points.size()) {
    throw FormatError("nodes and weights differ in length");
  }
  for (double w : weights) {
    if (!(w > 0.0)) throw FormatError("weights must be positive");
  }
  CubatureRule rule{std::move(nodes), weights, 0, field<double>(j, "residual"), {}};
  rule.degree = rule.nodes.degree;
  rule.meta.seed = rule.nodes.seed;
  const json& g = j.at("generator");
  if (g.contains("back_offs")) rule.meta.back_offs = field<int>(g, "back_offs");
  if (g.contains("pruned")) rule.meta.pruned = field<int>(g, "pruned");
  if (g.contains("iterations")) rule.meta.iterations = field<int>(g, "iterations");
  return rule;
}

json to_json(const VerificationReport& r) {
  json cells = json::array();
  for (const ReportCell& c : r.cells) {
    json stats = json::object();
    for (const auto& [k, s] : c.stats) stats[k] = stats_json(s);
    cells.push_back({{"params", pairs_json(c.params)},
                     {"stats", std::move(stats)},
                     {"values", pairs_json(c.values)}});
  }
  json j = {{"version", kReportVersion},
            {"inequality", r.inequality},
            {"grid", pairs_json(r.grid)},
            {"cells", std::move(cells)},
            {"trials", r.trials},
            {"seed", r.seed},
            {"notes", r.notes}};
  if (r.wall_time) j["wall_time"] = *r.wall_time;
  return j;
}

VerificationReport report_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("expected a JSON object");
  if (field<std::string>(j, "version") != kReportVersion) {
    throw FormatError(std::string("version must be \"") + kReportVersion + "\"");
  }
  VerificationReport r;
  r.inequality = field<std::string>(j, "inequality");
  r.grid = pairs_from(j.at("grid"));
  r.trials = field<int>(j, "trials");
  r.seed = field<std::uint64_t>(j, "seed");
  r.notes = field<std::vector<std::string>>(j, "notes");
  if (j.contains("wall_time")) r.wall_time = field<double>(j, "wall_time");
  for (const json& c : j.at("cells")) {
    ReportCell cell;
    cell.params = pairs_from(c.at("params"));
    cell.values = pairs_from(c.at("values"));
    for (const auto& [k, s] : c.at("stats").items()) {
      RatioStats st;
      st.min = field<double>(s, "min");
      st.max = field<double>(s, "max");
      st.mean = field<double>(s, "mean");
      st.count = field<int>(s, "count");
      cell.stats.emplace_back(k, st);
    }
    r.cells.push_back(std::move(cell));
  }
  return r;
}

std::string report_to_csv(const VerificationReport& report) {
  std::vector<std::string> columns;
  std::map<std::string, std::size_t> index;
  auto column = [&](const std::string& name) {
    if (index.emplace(name, columns.size()).second) columns.push_back(name);
  };
  for (const ReportCell& c : report.cells) {
    for (const auto& p : c.params) column(p.first);
  }
  for (const ReportCell& c : report.cells) {
    for (const auto& s : c.stats) {
      for (const char* suffix : {"_min", "_max", "_mean", "_count"}) column(s.first + suffix);
    }
  }
  for (const ReportCell& c : report.cells) {
    for (const auto& v : c.values) column(v.first);
  }

  std::ostringstream os;
  for (std::size_t k = 0; k < columns.size(); ++k) {
    os << (k ? "," : "") << csv_escape(columns[k]);
  }
  os << "\n";
  for (const ReportCell& c : report.cells) {
    std::vector<std::string> row(columns.size());
    for (const auto& [k, v] : c.params) row[index[k]] = format_double(v);
    for (const auto& [k, s] : c.stats) {
      row[index[k + "_min"]] = format_double(s.min);
      row[index[k + "_max"]] = format_double(s.max);
      row[index[k + "_mean"]] = format_double(s.mean);
      row[index[k + "_count"]] = std::to_string(s.count);
    }
    for (const auto& [k, v] : c.values) row[index[k]] = format_double(v);
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << row[k];
    os << "\n";
  }
  return os.str();
}

}  // namespace capquad::io
