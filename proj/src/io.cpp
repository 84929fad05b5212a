#include "segrega/io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "segrega/error.hpp"

namespace segrega {

namespace {

std::string number(double v) {
  if (!std::isfinite(v)) return "null";
  return fmt::format("{:.17g}", v);
}

bool flat(const Json& j) {
  for (const auto& e : j) {
    if (e.is_structured()) return false;
  }
  return true;
}

void emit(const Json& j, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  const char* colon = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (const auto& [key, val] : j.items()) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad;
        out += Json(key).dump();
        out += colon;
        emit(val, indent, depth + 1, out);
      }
      out += nl;
      out += close;
      out += "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      if (indent == 0 || flat(j)) {
        out += "[";
        bool first = true;
        for (const auto& e : j) {
          if (!first) out += indent > 0 ? ", " : ",";
          first = false;
          emit(e, indent, depth + 1, out);
        }
        out += "]";
        return;
      }
      out += "[";
      out += nl;
      bool first = true;
      for (const auto& e : j) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad;
        emit(e, indent, depth + 1, out);
      }
      out += nl;
      out += close;
      out += "]";
      return;
    }
    case Json::value_t::number_float:
      out += number(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

double get_double(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw Error(ErrorCode::ParseError, fmt::format("expected number field '{}'", key));
  }
  return j.at(key).get<double>();
}

int get_int(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    throw Error(ErrorCode::ParseError, fmt::format("expected integer field '{}'", key));
  }
  return j.at(key).get<int>();
}

Json point(Complex z) { return Json::array({z.real(), z.imag()}); }

Json named(const std::vector<NamedMoment>& v) {
  Json o = Json::object();
  for (const auto& m : v) o[m.name] = m.value;
  return o;
}

}  // namespace

std::string dump_json(const Json& value, int indent) {
  std::string out;
  emit(value, indent, 0, out);
  if (indent > 0) out += "\n";
  return out;
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

std::string config_hash(const Json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump_json(config, 0)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

Json OutputHeader::to_json() const { return {{"tool", "segrega"}, {"version", version}, {"config_hash", config_hash}}; }

std::string OutputHeader::csv_line() const { return fmt::format("# segrega {} config_hash={}", version, config_hash); }

Json datum_to_json(const AdmissibleDatum& datum) {
  Json arcs = Json::array();
  for (const auto& a : datum.arcs()) arcs.push_back({{"start", a.start}, {"end", a.end}});
  Json profiles = Json::array();
  for (const auto& p : datum.profiles()) {
    Json o = {{"shape", std::string(to_string(p.shape))}, {"amplitude", p.amplitude}};
    if (p.shape == ProfileShape::CustomSamples) o["samples"] = p.samples;
    profiles.push_back(o);
  }
  return {{"k", datum.k()}, {"arcs", arcs}, {"profiles", profiles}};
}

AdmissibleDatum datum_from_json(const Json& j, const DatumOptions& options) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "datum must be a JSON object");
  try {
    if (j.contains("symmetric")) {
      const Json& s = j.at("symmetric");
      const double phase = s.contains("phase") ? get_double(s, "phase") : 0.0;
      const double amp = s.contains("amplitude") ? get_double(s, "amplitude") : 1.0;
      const ProfileShape shape =
          s.contains("shape") ? profile_shape_from_string(s.at("shape").get<std::string>()) : ProfileShape::BumpSin;
      return AdmissibleDatum::symmetric(get_int(s, "k"), phase, amp, shape);
    }
    if (j.contains("cosine_mode")) {
      const Json& s = j.at("cosine_mode");
      const double amp = s.contains("amplitude") ? get_double(s, "amplitude") : 1.0;
      return AlternatingDatum::cosine_mode(get_int(s, "s"), amp).base();
    }
    const int k = get_int(j, "k");
    if (!j.contains("arcs") || !j.at("arcs").is_array()) throw Error(ErrorCode::ParseError, "missing 'arcs' array");
    if (!j.contains("profiles") || !j.at("profiles").is_array()) {
      throw Error(ErrorCode::ParseError, "missing 'profiles' array");
    }
    std::vector<Arc> arcs;
    for (const auto& a : j.at("arcs")) arcs.push_back({get_double(a, "start"), get_double(a, "end")});
    std::vector<BoundaryProfile> profiles;
    for (const auto& p : j.at("profiles")) {
      if (!p.contains("shape") || !p.at("shape").is_string()) throw Error(ErrorCode::ParseError, "profile needs 'shape'");
      BoundaryProfile prof;
      prof.shape = profile_shape_from_string(p.at("shape").get<std::string>());
      prof.amplitude = get_double(p, "amplitude");
      if (p.contains("samples")) prof.samples = p.at("samples").get<std::vector<double>>();
      profiles.push_back(std::move(prof));
    }
    return AdmissibleDatum::build(k, std::move(arcs), std::move(profiles), options);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

Json moments_to_json(const MomentReport& r) {
  Json cheb = Json::object();
  for (std::size_t j = 0; j < r.cheb_T.size(); ++j) cheb[fmt::format("T_{}", j)] = r.cheb_T[j];
  for (std::size_t j = 0; j < r.cheb_U.size(); ++j) cheb[fmt::format("U_{}", j + 1)] = r.cheb_U[j];
  Json out = {{"p", point(r.p.z())},
              {"s", r.s},
              {"moments", {{"chebyshev", cheb}, {"monomial", named(r.monomial)}}},
              {"max_abs", r.max_abs},
              {"tolerance", r.tolerance},
              {"chebyshev_verdict", r.cheb_verdict},
              {"monomial_verdict", r.monomial_verdict},
              {"verdict", r.verdict}};
  if (!r.conditions.empty()) out["moments"]["conditions"] = named(r.conditions);
  return out;
}

Json derivatives_to_json(const DerivativeReport& r) {
  return {{"p", point(r.p.z())},
          {"value", r.value},
          {"gradient", {r.gradient.x1, r.gradient.x2}},
          {"hessian", {r.hessian.h11, r.hessian.h12, r.hessian.h22}},
          {"tolerance", r.tolerance},
          {"verdict", r.verdict}};
}

Json stats_to_json(const SolveStats& s) {
  return {{"mu", s.mu},
          {"iterations", s.iterations},
          {"residual", s.residual},
          {"residual_raw", s.residual_raw},
          {"error_estimate", s.error_estimate},
          {"omega", s.omega},
          {"overlap", s.overlap},
          {"energy", s.energy},
          {"interface_width", s.interface_width},
          {"clamps", s.clamps},
          {"converged", s.converged}};
}

Json critical_points_to_json(const CriticalSearchResult& r) {
  Json pts = Json::array();
  for (const auto& c : r.points) {
    pts.push_back({{"x", point(c.location.z())},
                   {"order", c.order},
                   {"residual_value", c.residual_value},
                   {"residual_gradient", c.residual_gradient}});
  }
  return {{"points", pts}, {"seeds", r.seeds}, {"diverged_seeds", r.diverged_seeds}};
}

Json partition_to_json(const NodalPartition& p) {
  const int nregions = p.regions;
  std::vector<Json> runs(static_cast<std::size_t>(nregions), Json::array());
  for (std::size_t c = 0; c < p.labels.size();) {
    const int lab = p.labels[c];
    std::size_t e = c + 1;
    while (e < p.labels.size() && p.labels[e] == lab) ++e;
    if (lab != kUnassigned) runs[static_cast<std::size_t>(lab)].push_back({c, e - c});
    c = e;
  }
  Json regions = Json::array();
  for (int i = 0; i < nregions; ++i) {
    Json r = {{"id", i}, {"cells", p.region_cells[static_cast<std::size_t>(i)]}, {"runs", runs[static_cast<std::size_t>(i)]}};
    if (!p.region_sign.empty()) r["sign"] = p.region_sign[static_cast<std::size_t>(i)];
    regions.push_back(r);
  }
  auto mp_json = [](const MultiplePoint& m) {
    Json o = {{"x", point(m.location)}, {"multiplicity", m.multiplicity}, {"on_boundary", m.on_boundary}};
    if (m.on_boundary) o["zero_index"] = m.zero_index;
    if (m.phase) o["phase"] = *m.phase;
    if (m.fit_exponent) o["fit_exponent"] = *m.fit_exponent;
    return o;
  };
  Json mps = Json::array();
  for (const auto& m : p.multiple_points) mps.push_back(mp_json(m));
  Json bps = Json::array();
  for (const auto& m : p.boundary_points) bps.push_back(mp_json(m));
  Json itfs = Json::array();
  for (const auto& it : p.interfaces) {
    Json poly = Json::array();
    for (Complex z : it.polyline) poly.push_back(point(z));
    itfs.push_back({{"regions", {it.region_a, it.region_b}}, {"ends", it.ends}, {"edges", it.edges.size()}, {"polyline", poly}});
  }
  return {{"grid", {{"n_r", p.grid.n_r()}, {"n_theta", p.grid.n_theta()}}},
          {"k", p.k},
          {"source", p.source == PartitionSource::Densities ? "densities" : "signed_field"},
          {"amplitude", p.amplitude},
          {"threshold", p.threshold},
          {"threshold_rel", p.amplitude > 0.0 ? p.threshold / p.amplitude : 0.0},
          {"zeros", p.zeros},
          {"regions", regions},
          {"multiple_points", mps},
          {"boundary_points", bps},
          {"interfaces", itfs}};
}

StoredPartition partition_from_json(const Json& doc) {
  // Reports written by the CLI nest the partition under "partition".
  const Json& j = doc.contains("partition") && doc.at("partition").is_object() ? doc.at("partition") : doc;
  try {
    if (j.value("source", std::string("densities")) != "densities") {
      throw Error(ErrorCode::ParseError, "only density partitions can be reloaded");
    }
    if (!j.contains("grid")) throw Error(ErrorCode::ParseError, "missing 'grid'");
    StoredPartition s{PolarGrid(get_int(j.at("grid"), "n_r"), get_int(j.at("grid"), "n_theta")), get_int(j, "k"),
                      get_double(j, "amplitude"), get_double(j, "threshold_rel"),
                      j.at("zeros").get<std::vector<double>>(), {}};
    s.labels.assign(s.grid.cells(), kUnassigned);
    if (!j.contains("regions") || !j.at("regions").is_array()) throw Error(ErrorCode::ParseError, "missing 'regions'");
    for (const auto& r : j.at("regions")) {
      const int id = get_int(r, "id");
      for (const auto& run : r.at("runs")) {
        const auto first = run.at(0).get<std::size_t>();
        const auto len = run.at(1).get<std::size_t>();
        if (first + len > s.labels.size()) throw Error(ErrorCode::ParseError, "region run outside the grid");
        for (std::size_t c = first; c < first + len; ++c) s.labels[c] = id;
      }
    }
    return s;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
  out << text;
}

void write_csv(const std::filesystem::path& path, const OutputHeader& header, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::string text = header.csv_line() + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) text += (i ? "," : "") + columns[i];
  text += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) text += ',';
      text += number(row[i]);
    }
    text += '\n';
  }
  write_text(path, text);
}

void write_grid_dump(const std::filesystem::path& path, const OutputHeader& header, const DensityGrid& state) {
  const PolarGrid& g = state.grid;
  std::vector<std::string> cols = {"r", "theta"};
  for (int i = 1; i <= state.k; ++i) cols.push_back(fmt::format("u_{}", i));
  std::vector<std::vector<double>> rows;
  rows.reserve(g.cells());
  for (int m = 0; m < g.n_r(); ++m) {
    for (int l = 0; l < g.n_theta(); ++l) {
      std::vector<double> row = {g.r(m), g.theta(l)};
      for (int i = 0; i < state.k; ++i) row.push_back(state.at(g.index(m, l), i));
      rows.push_back(std::move(row));
    }
  }
  write_csv(path, header, cols, rows);
}

DensityGrid read_grid_dump(const std::filesystem::path& path, const AdmissibleDatum& datum) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open " + path.string());
  std::string line;
  std::vector<std::vector<double>> rows;
  bool seen_columns = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!seen_columns) {
      seen_columns = true;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "bad number '" + cell + "' in " + path.string());
      }
    }
    if (row.size() != static_cast<std::size_t>(datum.k()) + 2) {
      throw Error(ErrorCode::ParseError, fmt::format("grid dump row has {} columns, expected {}", row.size(), datum.k() + 2));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::ParseError, "empty grid dump " + path.string());
  std::size_t n_theta = 0;
  while (n_theta < rows.size() && rows[n_theta][0] == rows[0][0]) ++n_theta;
  if (rows.size() % n_theta != 0) throw Error(ErrorCode::ParseError, "grid dump is not a full polar grid");
  const PolarGrid grid(static_cast<int>(rows.size() / n_theta), static_cast<int>(n_theta));
  DensityGrid state = DensityGrid::from_datum(datum, grid);
  for (std::size_t c = 0; c < rows.size(); ++c) {
    for (int i = 0; i < datum.k(); ++i) state.at(c, i) = rows[c][static_cast<std::size_t>(i) + 2];
  }
  return state;
}

}  // namespace segrega
