#include "io/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace wkam {

namespace {

struct Cursor {
  const std::string& text;
  size_t pos = 0;
  int line = 1;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("config line " + std::to_string(line) + ": " + what);
  }
  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  char take() {
    const char c = text[pos++];
    if (c == '\n') ++line;
    return c;
  }
  void skip_inline_ws() {
    while (!done() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos;
  }
  void skip_ws_and_comments() {
    for (;;) {
      skip_inline_ws();
      if (done()) return;
      if (peek() == '#') {
        while (!done() && peek() != '\n') ++pos;
        continue;
      }
      if (peek() == '\n') {
        take();
        continue;
      }
      return;
    }
  }
};

ConfigValue parse_value(Cursor& c);

ConfigValue parse_array(Cursor& c) {
  ConfigValue v;
  v.kind = ConfigValue::Kind::kArray;
  c.take();  // '['
  for (;;) {
    c.skip_ws_and_comments();
    if (c.done()) c.fail("unterminated array");
    if (c.peek() == ']') {
      c.take();
      return v;
    }
    v.arr.push_back(parse_value(c));
    c.skip_ws_and_comments();
    if (!c.done() && c.peek() == ',') {
      c.take();
      continue;
    }
    if (!c.done() && c.peek() == ']') {
      c.take();
      return v;
    }
    c.fail("expected ',' or ']' in array");
  }
}

ConfigValue parse_value(Cursor& c) {
  c.skip_inline_ws();
  if (c.done()) c.fail("missing value");
  const char ch = c.peek();
  if (ch == '[') return parse_array(c);
  ConfigValue v;
  if (ch == '"' || ch == '\'') {
    const char quote = c.take();
    v.kind = ConfigValue::Kind::kString;
    while (!c.done() && c.peek() != quote) v.str.push_back(c.take());
    if (c.done()) c.fail("unterminated string");
    c.take();
    return v;
  }
  std::string tok;
  while (!c.done() && c.peek() != '\n' && c.peek() != ',' && c.peek() != ']' &&
         c.peek() != '#' && c.peek() != ' ' && c.peek() != '\t' && c.peek() != '\r')
    tok.push_back(c.take());
  if (tok == "true" || tok == "false") {
    v.kind = ConfigValue::Kind::kBool;
    v.boolean = tok == "true";
    return v;
  }
  try {
    size_t used = 0;
    v.num = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    v.kind = ConfigValue::Kind::kNumber;
    return v;
  } catch (const std::exception&) {
    c.fail("cannot parse value '" + tok + "'");
  }
}

std::string parse_key(Cursor& c) {
  std::string key;
  while (!c.done() && (std::isalnum(static_cast<unsigned char>(c.peek())) || c.peek() == '_'))
    key.push_back(c.take());
  if (key.empty()) c.fail("expected a key");
  return key;
}

}  // namespace

std::map<std::string, ConfigValue> parse_config_text(const std::string& text) {
  std::map<std::string, ConfigValue> out;
  Cursor c{text};
  std::string section;
  for (;;) {
    c.skip_ws_and_comments();
    if (c.done()) return out;
    if (c.peek() == '[') {
      c.take();
      section = parse_key(c);
      c.skip_inline_ws();
      if (c.done() || c.peek() != ']') c.fail("unterminated section header");
      c.take();
      continue;
    }
    const std::string key = parse_key(c);
    c.skip_inline_ws();
    if (c.done() || c.peek() != '=') c.fail("expected '=' after key '" + key + "'");
    c.take();
    const std::string full = section.empty() ? key : section + "." + key;
    if (out.count(full)) c.fail("duplicate key '" + full + "'");
    out[full] = parse_value(c);
  }
}

namespace {

double as_number(const ConfigValue& v, const std::string& key) {
  if (v.kind != ConfigValue::Kind::kNumber)
    throw ParseError("config: '" + key + "' must be a number");
  return v.num;
}

std::string as_string(const ConfigValue& v, const std::string& key) {
  if (v.kind != ConfigValue::Kind::kString)
    throw ParseError("config: '" + key + "' must be a string");
  return v.str;
}

std::vector<double> as_number_list(const ConfigValue& v, const std::string& key) {
  if (v.kind != ConfigValue::Kind::kArray)
    throw ParseError("config: '" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const ConfigValue& e : v.arr) out.push_back(as_number(e, key));
  return out;
}

std::vector<std::vector<double>> as_matrix(const ConfigValue& v, const std::string& key) {
  if (v.kind != ConfigValue::Kind::kArray)
    throw ParseError("config: '" + key + "' must be an array of rows");
  std::vector<std::vector<double>> out;
  for (const ConfigValue& row : v.arr) out.push_back(as_number_list(row, key));
  return out;
}

std::vector<double> parse_number_list_text(const std::string& text, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ParseError("override '" + key + "': cannot parse number '" + item + "'");
    }
  }
  if (out.empty()) throw ParseError("override '" + key + "': empty list");
  return out;
}

}  // namespace

RunConfig RunConfig::from_text(const std::string& text) {
  const auto table = parse_config_text(text);
  RunConfig cfg;
  for (const auto& [key, v] : table) {
    if (key == "problem.family") cfg.family = as_string(v, key);
    else if (key == "problem.potential") cfg.potential = as_string(v, key);
    else if (key == "problem.potential_table") cfg.potential_table = as_string(v, key);
    else if (key == "problem.d") cfg.d = static_cast<int>(as_number(v, key));
    else if (key == "problem.m") cfg.m = static_cast<int>(as_number(v, key));
    else if (key == "problem.shift") cfg.shift = as_number(v, key);
    else if (key == "problem.coupling") cfg.coupling = as_matrix(v, key);
    else if (key == "problem.anisotropy") {
      if (v.kind != ConfigValue::Kind::kArray)
        throw ParseError("config: 'problem.anisotropy' must be an array of matrices");
      for (const ConfigValue& mat : v.arr) cfg.anisotropy.push_back(as_matrix(mat, key));
    } else if (key == "discretization.N") cfg.n = static_cast<int>(as_number(v, key));
    else if (key == "discretization.Nq") cfg.nq = static_cast<int>(as_number(v, key));
    else if (key == "discretization.Qmax") cfg.qmax = as_number(v, key);
    else if (key == "discretization.eps") cfg.eps = as_number_list(v, key);
    else if (key == "discretization.cfl_safety") cfg.cfl_safety = as_number(v, key);
    else if (key == "discretization.store_every") cfg.store_every = static_cast<int>(as_number(v, key));
    else if (key == "solver.tol") cfg.tol = as_number(v, key);
    else if (key == "solver.polish_tol") cfg.polish_tol = as_number(v, key);
    else if (key == "solver.max_sweeps") cfg.max_sweeps = static_cast<long>(as_number(v, key));
    else if (key == "solver.lp_max_iter") cfg.lp_max_iter = static_cast<long>(as_number(v, key));
    else if (key == "solver.atom_budget") cfg.atom_budget = static_cast<uint64_t>(as_number(v, key));
    else if (key == "solver.seed") cfg.seed = static_cast<uint64_t>(as_number(v, key));
    else if (key == "solver.dissipation") cfg.dissipation = as_string(v, key);
    else if (key == "solver.normalize_tol") cfg.normalize_tol = as_number(v, key);
    else if (key == "solver.face_samples") cfg.face_samples = static_cast<int>(as_number(v, key));
    else if (key == "solver.mass_threshold") cfg.mass_threshold = as_number(v, key);
    else if (key == "solver.crosscheck_horizon") cfg.crosscheck_horizon = as_number(v, key);
    else if (key == "solver.sample_budget") cfg.sample_budget = static_cast<int>(as_number(v, key));
    else if (key == "solver.adjoint_x0") cfg.adjoint_x0 = as_number_list(v, key);
    else if (key == "solver.adjoint_component") cfg.adjoint_component = static_cast<int>(as_number(v, key));
    else if (key == "compare.anchors1") cfg.anchors1 = as_number_list(v, key);
    else if (key == "compare.anchors2") cfg.anchors2 = as_number_list(v, key);
    else if (key == "compare.shift1") cfg.compare_shift1 = as_number(v, key);
    else if (key == "compare.shift2") cfg.compare_shift2 = as_number(v, key);
    else if (key == "compare.tol_hyp") cfg.tol_hyp = as_number(v, key);
    else if (key == "output.dir") cfg.out_dir = as_string(v, key);
    else if (key == "output.formats") {
      cfg.formats.clear();
      if (v.kind != ConfigValue::Kind::kArray)
        throw ParseError("config: 'output.formats' must be an array of strings");
      for (const ConfigValue& e : v.arr) cfg.formats.push_back(as_string(e, key));
    } else {
      throw ParseError("config: unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

void RunConfig::apply_override(const std::string& key, const std::string& value) {
  auto as_num = [&](const char* what) {
    try {
      return std::stod(value);
    } catch (const std::exception&) {
      throw ParseError(std::string("override ") + what + ": cannot parse '" + value + "'");
    }
  };
  if (key == "grid" || key == "discretization.N") n = static_cast<int>(as_num("grid"));
  else if (key == "eps" || key == "discretization.eps") eps = parse_number_list_text(value, key);
  else if (key == "tol" || key == "solver.tol") tol = as_num("tol");
  else if (key == "seed" || key == "solver.seed") seed = static_cast<uint64_t>(as_num("seed"));
  else if (key == "out" || key == "output.dir") out_dir = value;
  else if (key == "discretization.Nq") nq = static_cast<int>(as_num("Nq"));
  else if (key == "discretization.Qmax") qmax = as_num("Qmax");
  else if (key == "solver.face_samples") face_samples = static_cast<int>(as_num("face_samples"));
  else if (key == "solver.dissipation") dissipation = value;
  else throw ParseError("unknown override '" + key + "'");
  validate();
}

void RunConfig::validate() const {
  if (d < 1 || d > kMaxDim) throw ParseError("config: problem.d must be 1 or 2");
  if (m < 1) throw ParseError("config: problem.m must be positive");
  if (n < 8) throw ParseError("config: discretization.N must be at least 8");
  if (nq < 3 || nq % 2 == 0) throw ParseError("config: discretization.Nq must be odd and >= 3");
  if (eps.empty()) throw ParseError("config: discretization.eps must be nonempty");
  for (double e : eps)
    if (!(e > 0.0) || e > 1.0) throw ParseError("config: eps entries must lie in (0,1]");
  if (!(cfl_safety > 0.0) || cfl_safety > 0.95)
    throw ParseError("config: cfl_safety must lie in (0, 0.95]");
  if (family != "quadratic" && family != "anisotropic" && family != "quartic")
    throw ParseError("config: unknown family '" + family + "'");
  if (dissipation != "local" && dissipation != "global")
    throw ParseError("config: dissipation must be 'local' or 'global'");
  if (!coupling.empty()) {
    if (static_cast<int>(coupling.size()) != m)
      throw ParseError("config: coupling matrix rows must match m");
    for (const auto& row : coupling)
      if (static_cast<int>(row.size()) != m)
        throw ParseError("config: coupling matrix must be m x m");
  }
  if (adjoint_component < 1 || adjoint_component > m)
    throw ParseError("config: solver.adjoint_component out of range");
}

namespace {

Potential load_table_potential(const std::string& path, int d, int m) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open potential table '" + path + "'");
  std::vector<double> samples;
  std::string line;
  int rows = 0;
  std::vector<std::vector<double>> rowdata;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (static_cast<int>(row.size()) != m)
      throw ParseError("potential table: expected " + std::to_string(m) + " columns");
    rowdata.push_back(std::move(row));
    ++rows;
  }
  int nt = rows;
  if (d == 2) {
    nt = static_cast<int>(std::lround(std::sqrt(static_cast<double>(rows))));
    if (nt * nt != rows) throw ParseError("potential table: row count must be a square for d=2");
  }
  samples.resize(static_cast<size_t>(m) * rows);
  for (int r = 0; r < rows; ++r)
    for (int i = 0; i < m; ++i) samples[static_cast<size_t>(i) * rows + r] = rowdata[r][i];
  return Potential::from_table(std::move(samples), d, nt, m);
}

}  // namespace

HamiltonianSpec RunConfig::build_spec() const {
  HamiltonianSpec spec;
  spec.family = family_from_name(family);
  spec.d = d;
  spec.m = m;
  spec.shift = shift;
  spec.potential = potential_table.empty() ? Potential::from_expression(potential, d, m)
                                           : load_table_potential(potential_table, d, m);
  if (spec.family == Family::kAnisotropic) {
    if (static_cast<int>(anisotropy.size()) != m)
      throw ParseError("config: anisotropic family needs one matrix per component");
    for (const auto& mat : anisotropy) {
      SymMat a;
      if (static_cast<int>(mat.size()) != d)
        throw ParseError("config: anisotropy matrices must be d x d");
      a.a11 = mat[0][0];
      if (d == 2) {
        a.a12 = mat[0][1];
        a.a22 = mat[1][1];
        if (std::abs(mat[1][0] - mat[0][1]) > 0.0)
          throw ParseError("config: anisotropy matrices must be symmetric");
      }
      spec.anisotropy.push_back(a);
    }
  }
  spec.validate();
  return spec;
}

CouplingMatrix RunConfig::build_coupling() const {
  if (coupling.empty()) {
    auto c = CouplingMatrix::zero(m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (i != j) c.at(i, j) = 1.0;
    return c;
  }
  return CouplingMatrix::from_rows(coupling);
}

PeriodicGrid RunConfig::build_grid() const { return make_grid(d, n, m); }

bool RunConfig::wants_format(const std::string& fmt) const {
  for (const std::string& f : formats)
    if (f == fmt) return true;
  return false;
}

}  // namespace wkam
