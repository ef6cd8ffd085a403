#pragma once

#include <string>
#include <vector>

#include "core/assumptions.hpp"
#include "evolve/adjoint.hpp"
#include "evolve/ergodic.hpp"
#include "mather/measure.hpp"
#include "verify/comparison.hpp"

#include <json.hpp>

namespace wkam {

// Shortest round-trip decimal rendering; CSV artifacts stay bit-identical
// across runs on the same platform.
std::string fmt_double(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
void write_binary_file(const std::string& path, const std::vector<char>& bytes);
void ensure_directory(const std::string& path);

// CSV: x coords, q coords, component (1-based), weight; zero atoms omitted.
std::string measure_csv(const DiscreteMeasure& mu);
// CSV: node coords, component, value.
std::string grid_function_csv(const GridFunction& f);
// CSV: frame, t, node coords, component, value (one row per sample).
std::string slab_csv(const TimeSlab& slab);
std::string density_csv(const AdjointDensity& sigma);

// Compact frame container: magic "WKSL", then uint32 version, d, n, m,
// frame count (little-endian), then frames as float64 in node-major order
// (component fastest). Times are implied by the manifest (dt, stride).
std::vector<char> slab_binary(const TimeSlab& slab);
std::vector<char> density_binary(const AdjointDensity& sigma);
struct BinarySlabHeader {
  uint32_t version, d, n, m, frames;
};
BinarySlabHeader read_slab_header(const std::vector<char>& bytes);
std::vector<std::vector<double>> read_slab_frames(const std::vector<char>& bytes);

nlohmann::json assumptions_json(const AssumptionReport& rep);
nlohmann::json ergodic_json(const ErgodicSolution& sol);
nlohmann::json measure_summary_json(const DiscreteMeasure& mu, const HamiltonianSpec& spec,
                                    const CouplingMatrix& coupling);
nlohmann::json comparison_json(const ComparisonReport& rep);

}  // namespace wkam
