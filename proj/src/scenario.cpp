#include "fams/scenario.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"

namespace fams {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw InputError("scenario field '" + path + "': " + what);
}

const json* child(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) field_error(path, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) field_error(path, "expected an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) field_error(path, "expected a string");
  return j.get<std::string>();
}

template <std::size_t N>
std::array<double, N> as_doubles(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != N) field_error(path, "expected an array of " + std::to_string(N) + " numbers");
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = as_double(j[i], path + "[" + std::to_string(i) + "]");
  return out;
}

template <std::size_t N>
std::array<int, N> as_ints(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != N) field_error(path, "expected an array of " + std::to_string(N) + " integers");
  std::array<int, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = as_int(j[i], path + "[" + std::to_string(i) + "]");
  return out;
}

std::array<int, 3> as_ratio(const json& j, const std::string& path) {
  if (j.is_string()) {
    try {
      return parse_ratio(j.get<std::string>());
    } catch (const InputError& e) {
      field_error(path, e.what());
    }
  }
  if (j.is_array() && j.size() == 2) {
    const auto r = as_ints<2>(j, path);
    return {r[0], r[1], 1};
  }
  return as_ints<3>(j, path);
}

int as_d_min(const json& j, const std::string& path) {
  if (j.is_string()) {
    try {
      return parse_d_min(j.get<std::string>());
    } catch (const InputError& e) {
      field_error(path, e.what());
    }
  }
  const int d = as_int(j, path);
  if (d < 1) field_error(path, "must be >= 1");
  return d;
}

const json& array_at(const json& j, const std::string& path) {
  if (!j.is_array()) field_error(path, "expected an array");
  return j;
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) field_error(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; }))
      field_error(path + "." + it.key(), "unknown field");
  }
}

PermSpec parse_perm(const json& j, const std::string& path, const std::filesystem::path& base) {
  PermSpec p;
  const auto type = as_string(j.value("type", json("uniform")), path + ".type");
  if (type == "uniform") {
    check_keys(j, path, {"type", "k"});
    if (const auto* k = child(j, "k")) {
      if (k->is_number()) {
        const double v = as_double(*k, path + ".k");
        p.uniform = {v, v, v};
      } else {
        const auto a = as_doubles<3>(*k, path + ".k");
        p.uniform = {a[0], a[1], a[2]};
      }
    }
    p.kind = PermSpec::Kind::Uniform;
  } else if (type == "values") {
    check_keys(j, path, {"type", "k"});
    const auto* k = child(j, "k");
    if (!k) field_error(path + ".k", "missing");
    for (std::size_t i = 0; i < array_at(*k, path + ".k").size(); ++i) {
      const auto& e = (*k)[i];
      const std::string ep = path + ".k[" + std::to_string(i) + "]";
      if (e.is_number()) {
        const double v = as_double(e, ep);
        p.values.push_back({v, v, v});
      } else {
        const auto a = as_doubles<3>(e, ep);
        p.values.push_back({a[0], a[1], a[2]});
      }
    }
    p.kind = PermSpec::Kind::Values;
  } else if (type == "file") {
    check_keys(j, path, {"type", "path", "components"});
    const auto* f = child(j, "path");
    if (!f) field_error(path + ".path", "missing");
    p.path = std::filesystem::path(as_string(*f, path + ".path"));
    if (p.path.is_relative()) p.path = base / p.path;
    if (const auto* c = child(j, "components")) p.components = as_int(*c, path + ".components");
    if (p.components != 1 && p.components != 3) field_error(path + ".components", "must be 1 or 3");
    p.kind = PermSpec::Kind::File;
  } else if (type == "patchy") {
    check_keys(j, path, {"type", "mean_log", "sigma_log", "block", "seed", "anisotropy"});
    if (const auto* v = child(j, "mean_log")) p.mean_log = as_double(*v, path + ".mean_log");
    if (const auto* v = child(j, "sigma_log")) p.sigma_log = as_double(*v, path + ".sigma_log");
    if (const auto* v = child(j, "block")) p.block = as_ints<3>(*v, path + ".block");
    if (const auto* v = child(j, "seed")) p.seed = static_cast<std::uint64_t>(as_int(*v, path + ".seed"));
    if (const auto* v = child(j, "anisotropy")) p.anisotropy = as_doubles<3>(*v, path + ".anisotropy");
    if (p.sigma_log < 0.0) field_error(path + ".sigma_log", "must be >= 0");
    for (int b : p.block)
      if (b < 1) field_error(path + ".block", "entries must be >= 1");
    for (double a : p.anisotropy)
      if (!(a > 0.0)) field_error(path + ".anisotropy", "entries must be positive");
    p.kind = PermSpec::Kind::Patchy;
  } else {
    field_error(path + ".type", "unknown permeability type '" + type + "' (uniform, values, file, patchy)");
  }
  return p;
}

FracturePlate parse_plate(const json& j, const std::string& path, double aperture, double perm) {
  check_keys(j, path, {"start", "end", "z", "aperture", "perm"});
  FracturePlate pl;
  const auto* s = child(j, "start");
  const auto* e = child(j, "end");
  if (!s) field_error(path + ".start", "missing");
  if (!e) field_error(path + ".end", "missing");
  const auto a = as_doubles<2>(*s, path + ".start");
  const auto b = as_doubles<2>(*e, path + ".end");
  pl.start = {a[0], a[1]};
  pl.end = {b[0], b[1]};
  if (const auto* z = child(j, "z")) {
    const auto zz = as_doubles<2>(*z, path + ".z");
    pl.z_bottom = zz[0];
    pl.z_top = zz[1];
  }
  pl.aperture = aperture;
  pl.perm = perm;
  if (const auto* v = child(j, "aperture")) pl.aperture = as_double(*v, path + ".aperture");
  if (const auto* v = child(j, "perm")) pl.perm = as_double(*v, path + ".perm");
  return pl;
}

WellSpec parse_well(const json& j, const std::string& path) {
  check_keys(j, path, {"name", "control", "value", "pi", "cells", "column", "points", "fracture"});
  WellSpec w;
  if (const auto* v = child(j, "name")) w.name = as_string(*v, path + ".name");
  if (const auto* v = child(j, "control")) {
    const auto c = as_string(*v, path + ".control");
    if (c == "pressure") w.control = WellControl::Pressure;
    else if (c == "rate") w.control = WellControl::Rate;
    else field_error(path + ".control", "expected 'pressure' or 'rate'");
  }
  const auto* val = child(j, "value");
  if (!val) field_error(path + ".value", "missing");
  w.value = as_double(*val, path + ".value");
  if (const auto* v = child(j, "pi")) w.pi = as_double(*v, path + ".pi");
  if (const auto* v = child(j, "cells")) {
    for (std::size_t i = 0; i < array_at(*v, path + ".cells").size(); ++i) {
      const std::string ep = path + ".cells[" + std::to_string(i) + "]";
      if ((*v)[i].is_array() && (*v)[i].size() == 2) {
        const auto c = as_ints<2>((*v)[i], ep);
        w.cells.push_back({c[0], c[1], 0});
      } else {
        w.cells.push_back(as_ints<3>((*v)[i], ep));
      }
    }
  }
  if (const auto* v = child(j, "column")) {
    const auto c = as_ints<2>(*v, path + ".column");
    w.cells.push_back({c[0], c[1], -1});  // expanded over all layers in build_problem
  }
  if (const auto* v = child(j, "points")) {
    for (std::size_t i = 0; i < array_at(*v, path + ".points").size(); ++i) {
      const std::string ep = path + ".points[" + std::to_string(i) + "]";
      if ((*v)[i].is_array() && (*v)[i].size() == 2) {
        const auto c = as_doubles<2>((*v)[i], ep);
        w.points.push_back({c[0], c[1], -1.0});
      } else {
        const auto c = as_doubles<3>((*v)[i], ep);
        w.points.push_back({c[0], c[1], c[2]});
      }
    }
  }
  if (const auto* v = child(j, "fracture")) {
    for (std::size_t i = 0; i < array_at(*v, path + ".fracture").size(); ++i)
      w.fracture_cells.push_back(as_ints<2>((*v)[i], path + ".fracture[" + std::to_string(i) + "]"));
  }
  if (w.cells.empty() && w.points.empty() && w.fracture_cells.empty())
    field_error(path, "well has no perforations (cells, column, points or fracture)");
  return w;
}

SolverConfig parse_solver(const json& j, const std::string& path) {
  check_keys(j, path,
             {"strategy", "restriction", "alpha", "ratio", "dmin", "d_min", "ratio_z", "mode", "tol", "max_it",
              "smoother_sweeps", "merge_cap", "gmres_restart", "stagnation_window"});
  SolverConfig c;
  try {
    if (const auto* v = child(j, "strategy")) c.strategy = parse_strategy(as_string(*v, path + ".strategy"));
    if (const auto* v = child(j, "restriction"))
      c.restriction = parse_restriction(as_string(*v, path + ".restriction"));
    if (const auto* v = child(j, "mode")) c.mode = parse_mode(as_string(*v, path + ".mode"));
  } catch (const InputError& e) {
    field_error(path, e.what());
  }
  if (const auto* v = child(j, "alpha")) c.alpha = as_double(*v, path + ".alpha");
  if (const auto* v = child(j, "ratio")) c.ratio = as_ratio(*v, path + ".ratio");
  if (const auto* v = child(j, "dmin")) c.d_min = as_d_min(*v, path + ".dmin");
  if (const auto* v = child(j, "d_min")) c.d_min = as_d_min(*v, path + ".d_min");
  if (const auto* v = child(j, "ratio_z")) c.ratio_z = as_int(*v, path + ".ratio_z");
  if (const auto* v = child(j, "tol")) c.tol = as_double(*v, path + ".tol");
  if (const auto* v = child(j, "max_it")) c.max_it = as_int(*v, path + ".max_it");
  if (const auto* v = child(j, "smoother_sweeps")) c.smoother_sweeps = as_int(*v, path + ".smoother_sweeps");
  if (const auto* v = child(j, "merge_cap")) c.merge_cap = as_int(*v, path + ".merge_cap");
  if (const auto* v = child(j, "gmres_restart")) c.gmres_restart = as_int(*v, path + ".gmres_restart");
  if (const auto* v = child(j, "stagnation_window"))
    c.stagnation_window = as_int(*v, path + ".stagnation_window");
  try {
    c.validate();
  } catch (const InputError& e) {
    field_error(path, e.what());
  }
  return c;
}

SweepAxes parse_sweep(const json& j, const std::string& path) {
  check_keys(j, path, {"alpha", "t_ratio", "ratio", "d_min", "dmin", "scale", "density"});
  SweepAxes s;
  auto each = [&](const char* key, auto&& fn) {
    if (const auto* v = child(j, key)) {
      const std::string p = path + "." + key;
      for (std::size_t i = 0; i < array_at(*v, p).size(); ++i) fn((*v)[i], p + "[" + std::to_string(i) + "]");
    }
  };
  each("alpha", [&](const json& e, const std::string& p) { s.alpha.push_back(as_double(e, p)); });
  each("t_ratio", [&](const json& e, const std::string& p) { s.t_ratio.push_back(as_double(e, p)); });
  each("ratio", [&](const json& e, const std::string& p) { s.ratio.push_back(as_ratio(e, p)); });
  each("d_min", [&](const json& e, const std::string& p) { s.d_min.push_back(as_d_min(e, p)); });
  each("dmin", [&](const json& e, const std::string& p) { s.d_min.push_back(as_d_min(e, p)); });
  each("density", [&](const json& e, const std::string& p) { s.density.push_back(as_int(e, p)); });
  each("scale", [&](const json& e, const std::string& p) {
    ScaleEntry se;
    if (e.is_object()) {
      check_keys(e, p, {"factor", "ratio"});
      const auto* f = child(e, "factor");
      if (!f) field_error(p + ".factor", "missing");
      se.factor = as_double(*f, p + ".factor");
      if (const auto* r = child(e, "ratio")) se.ratio = as_ratio(*r, p + ".ratio");
    } else {
      se.factor = as_double(e, p);
    }
    s.scale.push_back(se);
  });
  return s;
}

int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

int cell_of_coordinate(double x, double h, int n) {
  return std::clamp(static_cast<int>(std::floor(x / h)), 0, n - 1);
}

}  // namespace

int parse_d_min(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return kInfiniteDistance;
  try {
    std::size_t pos = 0;
    const int d = std::stoi(text, &pos);
    if (pos != text.size() || d < 1) throw InputError("");
    return d;
  } catch (const std::exception&) {
    throw InputError("invalid d_min '" + text + "' (positive integer or inf)");
  }
}

std::array<int, 3> parse_ratio(const std::string& text) {
  std::array<int, 3> r{1, 1, 1};
  std::stringstream ss(text);
  std::string part;
  int k = 0;
  while (std::getline(ss, part, 'x')) {
    if (k == 3) throw InputError("invalid ratio '" + text + "' (expected NxNxN)");
    try {
      std::size_t pos = 0;
      r[k] = std::stoi(part, &pos);
      if (pos != part.size() || r[k] < 1) throw InputError("");
    } catch (const std::exception&) {
      throw InputError("invalid ratio '" + text + "' (expected NxNxN)");
    }
    ++k;
  }
  if (k < 2) throw InputError("invalid ratio '" + text + "' (expected NxNxN)");
  return r;
}

std::vector<Permeability> patchy_permeability(int nx, int ny, int nz, const PermSpec& spec) {
  const int bx = (nx + spec.block[0] - 1) / spec.block[0];
  const int by = (ny + spec.block[1] - 1) / spec.block[1];
  const int bz = (nz + spec.block[2] - 1) / spec.block[2];
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(spec.mean_log, spec.sigma_log);
  std::vector<double> block_k(static_cast<std::size_t>(bx) * by * bz);
  for (auto& k : block_k) k = std::exp(spec.sigma_log > 0.0 ? normal(rng) : spec.mean_log);
  std::vector<Permeability> out(static_cast<std::size_t>(nx) * ny * nz);
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double v =
            block_k[i / spec.block[0] + bx * (j / spec.block[1] + by * (k / spec.block[2]))];
        out[i + nx * (j + ny * k)] = {v * spec.anisotropy[0], v * spec.anisotropy[1], v * spec.anisotropy[2]};
      }
  return out;
}

std::vector<Permeability> read_permeability_file(const std::filesystem::path& path, int cells, int components) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open permeability file '" + path.string() + "'");
  const std::size_t count = static_cast<std::size_t>(cells) * components;
  std::vector<double> raw(count);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count * sizeof(double)));
  if (static_cast<std::size_t>(in.gcount()) != count * sizeof(double))
    throw InputError("permeability file '" + path.string() + "' holds fewer than " + std::to_string(count) +
                     " float64 values");
  if constexpr (std::endian::native == std::endian::big) {
    for (auto& v : raw) {
      auto bits = std::bit_cast<std::uint64_t>(v);
      bits = __builtin_bswap64(bits);
      v = std::bit_cast<double>(bits);
    }
  }
  std::vector<Permeability> out(static_cast<std::size_t>(cells));
  for (int c = 0; c < cells; ++c) {
    if (components == 1) out[c] = {raw[c], raw[c], raw[c]};
    else out[c] = {raw[c], raw[static_cast<std::size_t>(cells) + c], raw[2 * static_cast<std::size_t>(cells) + c]};
  }
  return out;
}

std::vector<FracturePlate> generate_plates(const Vec3& ext, const FractureGenerator& gen, double aperture,
                                           double perm) {
  if (gen.count < 0) throw InputError("fracture generator: negative count");
  if (!(gen.min_length > 0.0) || gen.max_length < gen.min_length)
    throw InputError("fracture generator: invalid length range");
  std::mt19937_64 rng(gen.seed);
  std::uniform_real_distribution<double> ux(0.0, ext.x), uy(0.0, ext.y), ua(0.0, std::numbers::pi),
      ul(gen.min_length, gen.max_length);
  // Keep endpoints slightly inside the domain so plates never run along the boundary.
  const double eps_x = 1e-6 * ext.x, eps_y = 1e-6 * ext.y;
  std::vector<FracturePlate> plates;
  while (static_cast<int>(plates.size()) < gen.count) {
    const double cx = ux(rng), cy = uy(rng), ang = ua(rng), len = ul(rng);
    const double dx = 0.5 * len * std::cos(ang), dy = 0.5 * len * std::sin(ang);
    FracturePlate pl;
    pl.start = {std::clamp(cx - dx, eps_x, ext.x - eps_x), std::clamp(cy - dy, eps_y, ext.y - eps_y)};
    pl.end = {std::clamp(cx + dx, eps_x, ext.x - eps_x), std::clamp(cy + dy, eps_y, ext.y - eps_y)};
    if (std::hypot(pl.end.x - pl.start.x, pl.end.y - pl.start.y) < 0.5 * gen.min_length) continue;
    pl.aperture = aperture;
    pl.perm = perm;
    plates.push_back(pl);
  }
  return plates;
}

Scenario parse_scenario(std::istream& in, const std::filesystem::path& base_dir) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("scenario syntax error at line " + std::to_string(line_of_offset(text, e.byte)) + ": " +
                     e.what());
  }
  check_keys(j, "", {"grid", "fluid", "fractures", "wells", "solver", "sweep", "description"});
  Scenario s;
  const auto* g = child(j, "grid");
  if (!g) field_error("grid", "missing");
  check_keys(*g, "grid", {"n", "h", "perm"});
  const auto* n = child(*g, "n");
  if (!n) field_error("grid.n", "missing");
  if (n->is_array() && n->size() == 2) {
    const auto a = as_ints<2>(*n, "grid.n");
    s.nx = a[0];
    s.ny = a[1];
  } else {
    const auto a = as_ints<3>(*n, "grid.n");
    s.nx = a[0];
    s.ny = a[1];
    s.nz = a[2];
  }
  if (s.nx < 1 || s.ny < 1 || s.nz < 1) field_error("grid.n", "cell counts must be >= 1");
  if (const auto* h = child(*g, "h")) {
    if (h->is_number()) {
      s.hx = s.hy = s.hz = as_double(*h, "grid.h");
    } else {
      const auto a = as_doubles<3>(*h, "grid.h");
      s.hx = a[0];
      s.hy = a[1];
      s.hz = a[2];
    }
  }
  if (!(s.hx > 0.0 && s.hy > 0.0 && s.hz > 0.0)) field_error("grid.h", "spacings must be positive");
  if (const auto* p = child(*g, "perm")) s.perm = parse_perm(*p, "grid.perm", base_dir);
  if (s.perm.kind == PermSpec::Kind::Values &&
      s.perm.values.size() != static_cast<std::size_t>(s.nx) * s.ny * s.nz)
    field_error("grid.perm.k", "expected one entry per cell");
  if (s.perm.kind == PermSpec::Kind::File && !std::filesystem::exists(s.perm.path))
    field_error("grid.perm.path", "file '" + s.perm.path.string() + "' does not exist");

  if (const auto* f = child(j, "fluid")) {
    check_keys(*f, "fluid", {"mu"});
    if (const auto* v = child(*f, "mu")) s.mu = as_double(*v, "fluid.mu");
    if (!(s.mu > 0.0)) field_error("fluid.mu", "must be positive");
  }

  if (const auto* f = child(j, "fractures")) {
    check_keys(*f, "fractures", {"cell_size", "aperture", "perm", "t_ratio", "plates", "generator"});
    if (const auto* v = child(*f, "cell_size")) s.frac_cell_size = as_double(*v, "fractures.cell_size");
    if (const auto* v = child(*f, "aperture")) s.frac_aperture = as_double(*v, "fractures.aperture");
    if (const auto* v = child(*f, "perm")) s.frac_perm = as_double(*v, "fractures.perm");
    if (const auto* v = child(*f, "t_ratio")) {
      s.t_ratio = as_double(*v, "fractures.t_ratio");
      if (!(*s.t_ratio > 0.0)) field_error("fractures.t_ratio", "must be positive");
    }
    if (const auto* v = child(*f, "plates")) {
      for (std::size_t i = 0; i < array_at(*v, "fractures.plates").size(); ++i)
        s.plates.push_back(
            parse_plate((*v)[i], "fractures.plates[" + std::to_string(i) + "]", s.frac_aperture, s.frac_perm));
    }
    if (const auto* v = child(*f, "generator")) {
      check_keys(*v, "fractures.generator", {"count", "length", "seed"});
      FractureGenerator gen;
      const auto* c = child(*v, "count");
      if (!c) field_error("fractures.generator.count", "missing");
      gen.count = as_int(*c, "fractures.generator.count");
      if (const auto* l = child(*v, "length")) {
        const auto a = as_doubles<2>(*l, "fractures.generator.length");
        gen.min_length = a[0];
        gen.max_length = a[1];
      }
      if (const auto* sd = child(*v, "seed")) gen.seed = static_cast<std::uint64_t>(as_int(*sd, "fractures.generator.seed"));
      s.generator = gen;
    }
  }

  if (const auto* w = child(j, "wells")) {
    for (std::size_t i = 0; i < array_at(*w, "wells").size(); ++i) {
      s.wells.push_back(parse_well((*w)[i], "wells[" + std::to_string(i) + "]"));
      if (s.wells.back().name.empty()) s.wells.back().name = "w" + std::to_string(i);
    }
  }
  if (const auto* v = child(j, "solver")) s.solver = parse_solver(*v, "solver");
  if (const auto* v = child(j, "sweep")) s.sweep = parse_sweep(*v, "sweep");
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scenario file '" + path.string() + "'");
  try {
    return parse_scenario(in, path.parent_path());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

Scenario scaled_scenario(const Scenario& s, double factor) {
  if (!(factor > 0.0)) throw InputError("scale factor must be positive");
  if (factor == 1.0) return s;
  auto scale_count = [&](int n, const char* what) {
    const double v = n * factor;
    if (std::abs(v - std::round(v)) > 1e-9 || std::round(v) < 1)
      throw InputError(std::string("scale factor does not map ") + what + " to an integer cell count");
    return static_cast<int>(std::round(v));
  };
  Scenario out = s;
  out.nx = scale_count(s.nx, "nx");
  out.ny = scale_count(s.ny, "ny");
  out.nz = s.nz == 1 ? 1 : scale_count(s.nz, "nz");
  out.hx = s.hx * s.nx / out.nx;
  out.hy = s.hy * s.ny / out.ny;
  out.hz = s.hz * s.nz / out.nz;
  if (s.frac_cell_size > 0.0) out.frac_cell_size = s.frac_cell_size / factor;
  switch (s.perm.kind) {
    case PermSpec::Kind::Uniform: break;
    case PermSpec::Kind::Patchy:
      out.perm.block = {std::max(1, static_cast<int>(std::lround(s.perm.block[0] * factor))),
                        std::max(1, static_cast<int>(std::lround(s.perm.block[1] * factor))),
                        s.nz == 1 ? s.perm.block[2]
                                  : std::max(1, static_cast<int>(std::lround(s.perm.block[2] * factor)))};
      break;
    default: throw InputError("only uniform and patchy permeability fields can be rescaled");
  }
  for (auto& w : out.wells) {
    if (!w.fracture_cells.empty()) throw InputError("wells perforating fracture cells cannot be rescaled");
    for (auto& c : w.cells) {
      c[0] = static_cast<int>(std::floor((c[0] + 0.5) * factor));
      c[1] = static_cast<int>(std::floor((c[1] + 0.5) * factor));
      if (c[2] >= 0 && s.nz > 1) c[2] = static_cast<int>(std::floor((c[2] + 0.5) * factor));
    }
  }
  return out;
}

Problem build_problem(const Scenario& s) {
  GridSpec gs;
  gs.nx = s.nx;
  gs.ny = s.ny;
  gs.nz = s.nz;
  gs.hx = s.hx;
  gs.hy = s.hy;
  gs.hz = s.hz;
  const int cells = s.nx * s.ny * s.nz;
  switch (s.perm.kind) {
    case PermSpec::Kind::Uniform: gs.perm.assign(static_cast<std::size_t>(cells), s.perm.uniform); break;
    case PermSpec::Kind::Values: gs.perm = s.perm.values; break;
    case PermSpec::Kind::File: gs.perm = read_permeability_file(s.perm.path, cells, s.perm.components); break;
    case PermSpec::Kind::Patchy: gs.perm = patchy_permeability(s.nx, s.ny, s.nz, s.perm); break;
  }
  Problem pb;
  pb.grid = build_grid(gs);
  const auto ext = pb.grid.extent();

  auto plates = s.plates;
  if (s.generator) {
    auto gen = generate_plates(ext, *s.generator, s.frac_aperture, s.frac_perm);
    plates.insert(plates.end(), gen.begin(), gen.end());
  }
  const double cell_size = s.frac_cell_size > 0.0 ? s.frac_cell_size : std::min(s.hx, s.hy);

  for (const auto& ws : s.wells) {
    Well w;
    w.name = ws.name;
    w.control = ws.control;
    w.value = ws.value;
    auto add_cell = [&](int i, int j, int k) {
      if (i < 0 || i >= s.nx || j < 0 || j >= s.ny || k < 0 || k >= s.nz)
        throw InputError("well '" + ws.name + "' perforates a cell outside the grid");
      w.perforations.push_back({Medium::Matrix, -1, pb.grid.index(i, j, k), ws.pi});
    };
    for (const auto& c : ws.cells) {
      if (c[2] < 0) {
        for (int k = 0; k < s.nz; ++k) add_cell(c[0], c[1], k);
      } else {
        add_cell(c[0], c[1], c[2]);
      }
    }
    for (const auto& p : ws.points) {
      if (p.x < 0 || p.x > ext.x || p.y < 0 || p.y > ext.y || p.z > ext.z)
        throw InputError("well '" + ws.name + "' point lies outside the domain");
      const int i = cell_of_coordinate(p.x, s.hx, s.nx), j = cell_of_coordinate(p.y, s.hy, s.ny);
      if (p.z < 0.0) {
        for (int k = 0; k < s.nz; ++k) add_cell(i, j, k);
      } else {
        add_cell(i, j, cell_of_coordinate(p.z, s.hz, s.nz));
      }
    }
    for (const auto& f : ws.fracture_cells) w.perforations.push_back({Medium::Fracture, f[0], f[1], ws.pi});
    pb.wells.push_back(std::move(w));
  }

  AssemblyOptions opt;
  opt.mu = s.mu;
  const auto t0 = std::chrono::steady_clock::now();
  pb.fractures = embed_fractures(pb.grid, plates, cell_size);
  pb.system = assemble(pb.grid, pb.fractures.networks, pb.fractures.overlaps, pb.wells, opt);
  if (s.t_ratio && !plates.empty()) {
    // Fracture-fracture transmissibilities are linear in the fracture permeability.
    const double factor = *s.t_ratio / t_ratio(pb.system).ratio;
    for (auto& pl : plates) pl.perm *= factor;
    pb.fractures = embed_fractures(pb.grid, plates, cell_size);
    pb.system = assemble(pb.grid, pb.fractures.networks, pb.fractures.overlaps, pb.wells, opt);
  }
  pb.assembly_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return pb;
}

}  // namespace fams
