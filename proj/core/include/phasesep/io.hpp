#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>

#include "phasesep/bipartite.hpp"
#include "phasesep/phase_space.hpp"
#include "phasesep/solver.hpp"
#include "phasesep/wigner_grid.hpp"

namespace phasesep {

/// Locale-independent full-precision decimal rendering (round-trips exactly).
std::string format_double(double v);

/// {"modes": n, "units": "...", "mean": [...], "cov": [[...], ...]}
/// with the covariance as a row-major nested array.
std::string gaussian_state_to_json(const GaussianState& state);
GaussianState gaussian_state_from_json(const std::string& text);

/// {"sK2": ..., "sX2": ..., "sP2": ..., "sQ2": ..., "units": "..."}
std::string factored_state_to_json(const FactoredBipartiteState& state);
FactoredBipartiteState factored_state_from_json(const std::string& text);

using StateVariant = std::variant<GaussianState, FactoredBipartiteState>;

/// Loads either state flavor, detected by its fields.  Malformed files throw
/// std::invalid_argument carrying the path, the offending line and field.
StateVariant load_state_file(const std::filesystem::path& path);

std::string criterion_report_json(const CriterionReport& report);

/// parameter_name is "s", "c" or "none", matching how the condition was built.
std::string threshold_report_json(const ThresholdResult& result,
                                  const std::string& parameter_name,
                                  const PhysicalParams& params);

std::string certificate_json(const SeparationCertificate& cert);

/// Plain-text samples, header "p,x,w", one node per row, full precision.
void write_grid_csv(std::ostream& os, const WignerGrid& grid);

/// Binary raster: 32-byte header (magic "WGRD", uint32 np, uint32 nx,
/// uint32 reserved, float64 p_max, float64 x_max), then np*nx float64
/// values row-major, all little-endian.
void write_grid_raster(std::ostream& os, const WignerGrid& grid);
WignerGrid read_grid_raster(std::istream& is);

}  // namespace phasesep
