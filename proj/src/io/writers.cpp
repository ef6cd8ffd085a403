#include "io/writers.hpp"

#include <charconv>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace wkam {

std::string fmt_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_binary_file(const std::string& path, const std::vector<char>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path + "'");
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw IoError("cannot create directory '" + path + "': " + ec.message());
}

namespace {

void append_coords(std::string& out, const Vec& x, int d) {
  out += fmt_double(x[0]);
  if (d == 2) {
    out += ',';
    out += fmt_double(x[1]);
  }
}

std::string coord_header(int d, const char* base) {
  std::string out = std::string(base) + "0";
  if (d == 2) out += std::string(",") + base + "1";
  return out;
}

void push_u32(std::vector<char>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

uint32_t pull_u32(const std::vector<char>& in, size_t at) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

std::vector<char> frames_binary(const PeriodicGrid& g, const std::vector<GridFunction>& frames) {
  std::vector<char> out;
  out.reserve(20 + frames.size() * g.dofs() * 8);
  out.push_back('W');
  out.push_back('K');
  out.push_back('S');
  out.push_back('L');
  push_u32(out, 1);
  push_u32(out, static_cast<uint32_t>(g.d));
  push_u32(out, static_cast<uint32_t>(g.n));
  push_u32(out, static_cast<uint32_t>(g.m));
  push_u32(out, static_cast<uint32_t>(frames.size()));
  for (const GridFunction& f : frames) {
    for (double v : f.v) {
      uint64_t bits;
      std::memcpy(&bits, &v, 8);
      for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
    }
  }
  return out;
}

}  // namespace

std::string measure_csv(const DiscreteMeasure& mu) {
  std::string out = coord_header(mu.grid.d, "x") + "," + coord_header(mu.grid.d, "q") +
                    ",component,weight\n";
  for (int node = 0; node < mu.grid.nodes(); ++node) {
    const Vec x = mu.grid.coords(node);
    for (int qn = 0; qn < mu.vgrid.count(); ++qn) {
      const Vec q = mu.vgrid.qnode(qn);
      for (int i = 0; i < mu.grid.m; ++i) {
        const double w = mu.w[mu.index(node, qn, i)];
        if (w == 0.0) continue;
        append_coords(out, x, mu.grid.d);
        out += ',';
        append_coords(out, q, mu.grid.d);
        out += ',' + std::to_string(i + 1) + ',' + fmt_double(w) + '\n';
      }
    }
  }
  return out;
}

std::string grid_function_csv(const GridFunction& f) {
  std::string out = coord_header(f.grid.d, "x") + ",component,value\n";
  for (int node = 0; node < f.grid.nodes(); ++node) {
    const Vec x = f.grid.coords(node);
    for (int i = 0; i < f.grid.m; ++i) {
      append_coords(out, x, f.grid.d);
      out += ',' + std::to_string(i + 1) + ',' + fmt_double(f.at(node, i)) + '\n';
    }
  }
  return out;
}

namespace {

std::string frames_csv(const PeriodicGrid& g, const std::vector<double>& times,
                       const std::vector<GridFunction>& frames) {
  std::string out = "frame,t," + coord_header(g.d, "x") + ",component,value\n";
  for (size_t j = 0; j < frames.size(); ++j) {
    for (int node = 0; node < g.nodes(); ++node) {
      const Vec x = g.coords(node);
      for (int i = 0; i < g.m; ++i) {
        out += std::to_string(j) + ',' + fmt_double(times[j]) + ',';
        append_coords(out, x, g.d);
        out += ',' + std::to_string(i + 1) + ',' + fmt_double(frames[j].at(node, i)) + '\n';
      }
    }
  }
  return out;
}

}  // namespace

std::string slab_csv(const TimeSlab& slab) { return frames_csv(slab.grid, slab.times, slab.frames); }

std::string density_csv(const AdjointDensity& sigma) {
  return frames_csv(sigma.grid, sigma.times, sigma.frames);
}

std::vector<char> slab_binary(const TimeSlab& slab) { return frames_binary(slab.grid, slab.frames); }

std::vector<char> density_binary(const AdjointDensity& sigma) {
  return frames_binary(sigma.grid, sigma.frames);
}

BinarySlabHeader read_slab_header(const std::vector<char>& bytes) {
  if (bytes.size() < 24 || bytes[0] != 'W' || bytes[1] != 'K' || bytes[2] != 'S' ||
      bytes[3] != 'L')
    throw ParseError("slab binary: bad magic");
  return BinarySlabHeader{pull_u32(bytes, 4), pull_u32(bytes, 8), pull_u32(bytes, 12),
                          pull_u32(bytes, 16), pull_u32(bytes, 20)};
}

std::vector<std::vector<double>> read_slab_frames(const std::vector<char>& bytes) {
  const BinarySlabHeader h = read_slab_header(bytes);
  const size_t dofs = (h.d == 1 ? h.n : static_cast<size_t>(h.n) * h.n) * h.m;
  const size_t need = 24 + static_cast<size_t>(h.frames) * dofs * 8;
  if (bytes.size() != need) throw ParseError("slab binary: truncated payload");
  std::vector<std::vector<double>> out(h.frames, std::vector<double>(dofs));
  size_t at = 24;
  for (uint32_t f = 0; f < h.frames; ++f)
    for (size_t k = 0; k < dofs; ++k) {
      uint64_t bits = 0;
      for (int i = 0; i < 8; ++i)
        bits |= static_cast<uint64_t>(static_cast<unsigned char>(bytes[at + i])) << (8 * i);
      at += 8;
      double v;
      std::memcpy(&v, &bits, 8);
      out[f][k] = v;
    }
  return out;
}

nlohmann::json assumptions_json(const AssumptionReport& rep) {
  nlohmann::json out;
  out["sample_budget"] = rep.sample_budget;
  out["p_max"] = rep.p_max;
  out["all_pass"] = rep.all_pass();
  nlohmann::json entries = nlohmann::json::array();
  for (const AssumptionEntry& e : rep.entries) {
    entries.push_back({{"id", e.id}, {"pass", e.pass}, {"margin", e.margin}, {"note", e.note}});
  }
  out["assumptions"] = entries;
  return out;
}

nlohmann::json ergodic_json(const ErgodicSolution& sol) {
  return nlohmann::json{{"lambda", sol.lambda},
                        {"residual", sol.residual},
                        {"lambda_richardson", sol.lambda_richardson},
                        {"lambda_timeavg", sol.lambda_timeavg},
                        {"crosscheck_gap", sol.crosscheck_gap},
                        {"crosscheck_flagged", sol.crosscheck_flagged},
                        {"theta", sol.theta},
                        {"sweeps", sol.iterations}};
}

nlohmann::json measure_summary_json(const DiscreteMeasure& mu, const HamiltonianSpec& spec,
                                    const CouplingMatrix& coupling) {
  nlohmann::json out;
  out["mass"] = mu.mass();
  out["action"] = action(mu, spec);
  out["holonomy_residual"] = holonomy_residual(mu, coupling);
  out["support_size"] = mu.support_size();
  out["component_masses"] = mu.component_masses();
  return out;
}

nlohmann::json comparison_json(const ComparisonReport& rep) {
  return nlohmann::json{{"hypothesis_margin", rep.hypothesis_margin},
                        {"conclusion_margin", rep.conclusion_margin},
                        {"integrals_v1", rep.integrals_v1},
                        {"integrals_v2", rep.integrals_v2},
                        {"hypothesis_holds", rep.hypothesis_holds},
                        {"conclusion_holds", rep.conclusion_holds},
                        {"theorem_silent", rep.theorem_silent},
                        {"pass", rep.pass},
                        {"tol_hyp", rep.tol_hyp},
                        {"tol_con", rep.tol_con}};
}

}  // namespace wkam
