#include "phasesep/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary raster io assumes a little-endian host");

namespace phasesep {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument(where + ": " + what);
}

json parse_or_diagnose(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is a 1-based offset into the input
    std::size_t line = 1;
    const std::size_t upto = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') ++line;
    }
    fail(where + ":" + std::to_string(line), e.what());
  }
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!j.is_object()) fail(where, "expected a json object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) fail(where, "unknown field '" + item.key() + "'");
  }
}

double get_number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) fail(where, std::string("missing field '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) fail(where, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

UnitSystem get_units(const json& j, const std::string& where) {
  if (!j.contains("units")) fail(where, "missing field 'units'");
  if (!j.at("units").is_string()) fail(where, "field 'units' must be a string");
  try {
    return unit_system_from_string(j.at("units").get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

GaussianState gaussian_from(const json& j, const std::string& where) {
  check_keys(j, {"modes", "units", "mean", "cov"}, where);
  const double modes_raw = get_number(j, "modes", where);
  const int modes = static_cast<int>(modes_raw);
  if (modes < 1 || modes_raw != modes) fail(where, "field 'modes' must be a positive integer");
  const int dim = 2 * modes;

  GaussianState s;
  s.units = get_units(j, where);
  if (!j.contains("mean") || !j.at("mean").is_array()) {
    fail(where, "field 'mean' must be an array");
  }
  const auto& mean = j.at("mean");
  if (static_cast<int>(mean.size()) != dim) {
    fail(where, "field 'mean' must hold 2 * modes numbers");
  }
  s.mean.resize(dim);
  for (int i = 0; i < dim; ++i) {
    if (!mean[i].is_number()) fail(where, "field 'mean' must hold numbers");
    s.mean(i) = mean[i].get<double>();
  }
  if (!j.contains("cov") || !j.at("cov").is_array()) {
    fail(where, "field 'cov' must be a nested array");
  }
  const auto& cov = j.at("cov");
  if (static_cast<int>(cov.size()) != dim) {
    fail(where, "field 'cov' must have 2 * modes rows");
  }
  s.cov.resize(dim, dim);
  for (int r = 0; r < dim; ++r) {
    if (!cov[r].is_array() || static_cast<int>(cov[r].size()) != dim) {
      fail(where, "field 'cov' row " + std::to_string(r) + " must hold 2 * modes numbers");
    }
    for (int c = 0; c < dim; ++c) {
      if (!cov[r][c].is_number()) fail(where, "field 'cov' must hold numbers");
      s.cov(r, c) = cov[r][c].get<double>();
    }
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
  return s;
}

FactoredBipartiteState factored_from(const json& j, const std::string& where) {
  check_keys(j, {"sK2", "sX2", "sP2", "sQ2", "units"}, where);
  FactoredBipartiteState s;
  s.sK2 = get_number(j, "sK2", where);
  s.sX2 = get_number(j, "sX2", where);
  s.sP2 = get_number(j, "sP2", where);
  s.sQ2 = get_number(j, "sQ2", where);
  s.units = get_units(j, where);
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
  return s;
}

json to_json_obj(const GaussianState& state) {
  state.validate();
  const int dim = 2 * state.modes();
  json j;
  j["modes"] = state.modes();
  j["units"] = to_string(state.units);
  j["mean"] = json::array();
  for (int i = 0; i < dim; ++i) j["mean"].push_back(state.mean(i));
  j["cov"] = json::array();
  for (int r = 0; r < dim; ++r) {
    json row = json::array();
    for (int c = 0; c < dim; ++c) row.push_back(state.cov(r, c));
    j["cov"].push_back(row);
  }
  return j;
}

json to_json_obj(const FactoredBipartiteState& state) {
  state.validate();
  return json{{"sK2", state.sK2},
              {"sX2", state.sX2},
              {"sP2", state.sP2},
              {"sQ2", state.sQ2},
              {"units", to_string(state.units)}};
}

json cov_obj(const CovarianceMatrix2& c) {
  return json{{"spp", c.spp}, {"sxx", c.sxx}, {"spx", c.spx}};
}

}  // namespace

std::string gaussian_state_to_json(const GaussianState& state) {
  return to_json_obj(state).dump(2);
}

GaussianState gaussian_state_from_json(const std::string& text) {
  return gaussian_from(parse_or_diagnose(text, "state"), "state");
}

std::string factored_state_to_json(const FactoredBipartiteState& state) {
  return to_json_obj(state).dump(2);
}

FactoredBipartiteState factored_state_from_json(const std::string& text) {
  return factored_from(parse_or_diagnose(text, "state"), "state");
}

StateVariant load_state_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open state file '" + path.string() + "'");
  }
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string where = path.string();
  const json j = parse_or_diagnose(text, where);
  if (!j.is_object()) fail(where, "expected a json object");
  if (j.contains("sK2") || j.contains("sX2") || j.contains("sP2") || j.contains("sQ2")) {
    return factored_from(j, where);
  }
  if (j.contains("mean") || j.contains("cov") || j.contains("modes")) {
    return gaussian_from(j, where);
  }
  fail(where, "unrecognized state layout: expected factored widths "
              "(sK2/sX2/sP2/sQ2) or a gaussian state (modes/mean/cov)");
}

std::string criterion_report_json(const CriterionReport& report) {
  json j{{"wigner_valid", report.wigner_valid},
         {"ph_separable", report.ph_separable},
         {"duan_lhs", report.duan_lhs},
         {"duan_mirror_lhs", report.duan_mirror_lhs}};
  return j.dump(2);
}

std::string threshold_report_json(const ThresholdResult& result,
                                  const std::string& parameter_name,
                                  const PhysicalParams& params) {
  json j;
  j["t_bar"] = result.t_bar;
  j["parameter"] = result.parameter;  // NaN serializes as null for "none"
  j["parameter_name"] = parameter_name;
  j["residual"] = result.residual;
  j["already_satisfied"] = result.already_satisfied;
  j["conversion_factor"] = result.conversion_factor();
  j["t_physical"] = result.t_physical(params);
  j["params"] = json{{"hbar", params.hbar},
                     {"mass", params.mass},
                     {"diffusion", params.diffusion}};
  return j.dump(2);
}

std::string certificate_json(const SeparationCertificate& cert) {
  json j;
  j["t_bar"] = cert.t_bar;
  j["s"] = cert.s;
  j["b"] = cov_obj(cert.b);
  j["det_b"] = cert.det_b;
  j["positive_definite"] = cert.positive_definite;
  j["valid"] = cert.valid;
  if (cert.smeared_cov) {
    j["smeared_cov"] = cov_obj(*cert.smeared_cov);
  }
  return j.dump(2);
}

void write_grid_csv(std::ostream& os, const WignerGrid& grid) {
  grid.validate();
  os << "p,x,w\n";
  for (int i = 0; i < grid.np(); ++i) {
    const std::string p = format_double(grid.p(i));
    for (int j = 0; j < grid.nx(); ++j) {
      os << p << ',' << format_double(grid.x(j)) << ','
         << format_double(grid.values(i, j)) << '\n';
    }
  }
}

void write_grid_raster(std::ostream& os, const WignerGrid& grid) {
  grid.validate();
  const char magic[4] = {'W', 'G', 'R', 'D'};
  const std::uint32_t np = static_cast<std::uint32_t>(grid.np());
  const std::uint32_t nx = static_cast<std::uint32_t>(grid.nx());
  const std::uint32_t reserved = 0;
  os.write(magic, 4);
  os.write(reinterpret_cast<const char*>(&np), 4);
  os.write(reinterpret_cast<const char*>(&nx), 4);
  os.write(reinterpret_cast<const char*>(&reserved), 4);
  os.write(reinterpret_cast<const char*>(&grid.p_max), 8);
  os.write(reinterpret_cast<const char*>(&grid.x_max), 8);
  os.write(reinterpret_cast<const char*>(grid.values.data()),
           static_cast<std::streamsize>(sizeof(double) * np * nx));
  if (!os) {
    throw std::runtime_error("failed to write grid raster");
  }
}

WignerGrid read_grid_raster(std::istream& is) {
  char magic[4] = {};
  std::uint32_t np = 0;
  std::uint32_t nx = 0;
  std::uint32_t reserved = 0;
  WignerGrid grid;
  is.read(magic, 4);
  is.read(reinterpret_cast<char*>(&np), 4);
  is.read(reinterpret_cast<char*>(&nx), 4);
  is.read(reinterpret_cast<char*>(&reserved), 4);
  is.read(reinterpret_cast<char*>(&grid.p_max), 8);
  is.read(reinterpret_cast<char*>(&grid.x_max), 8);
  if (!is || std::memcmp(magic, "WGRD", 4) != 0) {
    throw std::invalid_argument("not a grid raster: bad header");
  }
  if (np < 8 || nx < 8 || static_cast<std::uint64_t>(np) * nx > (1u << 28)) {
    throw std::invalid_argument("grid raster header holds implausible dimensions");
  }
  grid.values.resize(np, nx);
  is.read(reinterpret_cast<char*>(grid.values.data()),
          static_cast<std::streamsize>(sizeof(double) * np * nx));
  if (!is) {
    throw std::invalid_argument("grid raster truncated");
  }
  grid.validate();
  return grid;
}

}  // namespace phasesep
