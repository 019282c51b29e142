#include "fams/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

namespace fams {

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string format_ratio(const std::array<int, 3>& r) {
  return std::to_string(r[0]) + "x" + std::to_string(r[1]) + "x" + std::to_string(r[2]);
}

std::string format_d_min(int d) { return d == kInfiniteDistance ? "inf" : std::to_string(d); }

double parse_number(const std::string& text) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw InputError("");
    return v;
  } catch (const std::exception&) {
    throw InputError("invalid number '" + text + "'");
  }
}

int parse_integer(const std::string& text) {
  const double v = parse_number(text);
  if (v != std::floor(v)) throw InputError("expected an integer, got '" + text + "'");
  return static_cast<int>(v);
}

}  // namespace

SweepAxis parse_axis(const std::string& name) {
  if (name == "alpha") return SweepAxis::Alpha;
  if (name == "t_ratio") return SweepAxis::TRatio;
  if (name == "ratio") return SweepAxis::Ratio;
  if (name == "d_min" || name == "dmin") return SweepAxis::DMin;
  if (name == "scale") return SweepAxis::Scale;
  if (name == "density") return SweepAxis::Density;
  throw InputError("unknown sweep axis '" + name + "' (alpha, t_ratio, ratio, d_min, scale, density)");
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Alpha: return "alpha";
    case SweepAxis::TRatio: return "t_ratio";
    case SweepAxis::Ratio: return "ratio";
    case SweepAxis::DMin: return "d_min";
    case SweepAxis::Scale: return "scale";
    case SweepAxis::Density: return "density";
  }
  return "?";
}

std::vector<SweepPoint> sweep_points(const Scenario& base, SweepAxis axis, const std::vector<std::string>& values) {
  std::vector<SweepPoint> pts;
  auto add = [&](std::string label, Scenario s) { pts.push_back({std::move(label), std::move(s)}); };
  const bool override = !values.empty();
  switch (axis) {
    case SweepAxis::Alpha: {
      std::vector<double> v = base.sweep.alpha;
      if (override) {
        v.clear();
        for (const auto& t : values) v.push_back(parse_number(t));
      }
      for (double a : v) {
        Scenario s = base;
        s.solver.alpha = a;
        s.solver.validate();
        add(format_double(a), s);
      }
      break;
    }
    case SweepAxis::TRatio: {
      std::vector<double> v = base.sweep.t_ratio;
      if (override) {
        v.clear();
        for (const auto& t : values) v.push_back(parse_number(t));
      }
      for (double r : v) {
        if (!(r > 0.0)) throw InputError("t_ratio values must be positive");
        Scenario s = base;
        s.t_ratio = r;
        add(format_double(r), s);
      }
      break;
    }
    case SweepAxis::Ratio: {
      auto v = base.sweep.ratio;
      if (override) {
        v.clear();
        for (const auto& t : values) v.push_back(parse_ratio(t));
      }
      for (const auto& r : v) {
        Scenario s = base;
        s.solver.ratio = r;
        add(format_ratio(r), s);
      }
      break;
    }
    case SweepAxis::DMin: {
      auto v = base.sweep.d_min;
      if (override) {
        v.clear();
        for (const auto& t : values) v.push_back(parse_d_min(t));
      }
      for (int d : v) {
        Scenario s = base;
        s.solver.d_min = d;
        add(format_d_min(d), s);
      }
      break;
    }
    case SweepAxis::Scale: {
      auto v = base.sweep.scale;
      if (override) {
        v.clear();
        for (const auto& t : values) v.push_back({parse_number(t), std::nullopt});
      }
      for (const auto& e : v) {
        Scenario s = scaled_scenario(base, e.factor);
        if (e.ratio) s.solver.ratio = *e.ratio;
        add(format_double(e.factor), s);
      }
      break;
    }
    case SweepAxis::Density: {
      if (!base.generator) throw InputError("density sweep needs fractures.generator in the scenario");
      auto v = base.sweep.density;
      if (override) {
        v.clear();
        for (const auto& t : values) v.push_back(parse_integer(t));
      }
      for (int d : v) {
        if (d < 0) throw InputError("density values must be >= 0");
        Scenario s = base;
        s.generator->count = d;
        add(std::to_string(d), s);
      }
      break;
    }
  }
  if (pts.empty()) throw InputError("sweep axis '" + to_string(axis) + "' has no values");
  return pts;
}

int thread_cap() {
  const char* env = std::getenv("FAMS_THREADS");
  if (!env) return 1;
  try {
    return std::max(1, std::stoi(env));
  } catch (const std::exception&) {
    return 1;
  }
}

std::vector<SweepRow> run_sweep(const std::vector<SweepPoint>& points, int jobs) {
  std::vector<SweepRow> rows(points.size());
  auto run_one = [&](std::size_t k) {
    const auto pb = build_problem(points[k].scenario);
    auto res = fams_solve(pb.grid, pb.fractures.networks, pb.system, points[k].scenario.solver);
    auto& r = rows[k];
    r.label = points[k].label;
    r.n_fine = pb.system.size();
    r.n_fracture = pb.system.layout.n_fracture;
    r.n_coarse = res.report.coarse_size;
    r.p_nnz = res.report.prolongation_nnz;
    r.t_ratio = r.n_fracture > 0 ? t_ratio(pb.system).ratio : 0.0;
    r.iterations = res.report.iterations;
    r.converged = res.report.converged;
    r.stagnated = res.report.stagnated;
    r.final_residual = res.report.final_residual;
    r.times = res.report.times;
    r.times.fine_system += pb.assembly_time;
    r.total_time = res.report.total_time + pb.assembly_time;
  };
  jobs = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(1, points.size())));
  if (jobs == 1) {
    for (std::size_t k = 0; k < points.size(); ++k) run_one(k);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  for (int t = 0; t < jobs; ++t) {
    workers.emplace_back([&] {
      for (std::size_t k = next++; k < points.size(); k = next++) {
        try {
          run_one(k);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool with_time) {
  out << std::setprecision(17);
  out << "value,n_fine,n_fracture,n_coarse,p_nnz,t_ratio,iterations,converged,stagnated,final_residual";
  if (with_time) {
    for (const char* l : StageTimes::labels) out << ",\"" << l << '"';
    out << ",total_s";
  }
  out << '\n';
  for (const auto& r : rows) {
    out << r.label << ',' << r.n_fine << ',' << r.n_fracture << ',' << r.n_coarse << ',' << r.p_nnz << ','
        << r.t_ratio << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ',' << (r.stagnated ? 1 : 0) << ','
        << r.final_residual;
    if (with_time) {
      for (double v : r.times.values()) out << ',' << v;
      out << ',' << r.total_time;
    }
    out << '\n';
  }
}

Baseline parse_baseline(const std::string& name) {
  if (name == "ilu0-gmres") return Baseline::Ilu0Gmres;
  if (name == "none") return Baseline::None;
  throw InputError("unknown baseline '" + name + "' (ilu0-gmres, none)");
}

std::vector<BenchColumn> run_bench(const Scenario& s, Baseline baseline) {
  const auto pb = build_problem(s);
  std::vector<BenchColumn> cols;
  SolverConfig cfg = s.solver;
  cfg.mode = SolveMode::Gmres;
  auto res = fams_solve(pb.grid, pb.fractures.networks, pb.system, cfg);
  BenchColumn f;
  f.name = "fams-gmres";
  f.iterations = res.report.iterations;
  f.converged = res.report.converged;
  f.final_residual = norm2(residual(pb.system.a, res.p, pb.system.q));
  const auto& t = res.report.times;
  f.setup_time = t.initialization + t.operators + t.coarse_system + pb.assembly_time;
  f.solve_time = res.report.total_time - (t.initialization + t.operators + t.coarse_system);
  cols.push_back(f);
  if (baseline == Baseline::Ilu0Gmres) {
    auto b = ilu0_gmres(pb.system, cfg.tol, cfg.max_it, cfg.gmres_restart);
    BenchColumn c;
    c.name = "ilu0-gmres";
    c.iterations = b.iterations;
    c.converged = b.converged;
    c.final_residual = norm2(residual(pb.system.a, b.p, pb.system.q));
    c.setup_time = b.setup_time + pb.assembly_time;
    c.solve_time = b.solve_time;
    cols.push_back(c);
  }
  return cols;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchColumn>& cols, bool with_time) {
  out << std::setprecision(17) << "metric";
  for (const auto& c : cols) out << ',' << c.name;
  out << "\niterations";
  for (const auto& c : cols) out << ',' << c.iterations;
  out << "\nconverged";
  for (const auto& c : cols) out << ',' << (c.converged ? 1 : 0);
  out << "\nfinal_residual";
  for (const auto& c : cols) out << ',' << c.final_residual;
  if (with_time) {
    out << "\nsetup_s";
    for (const auto& c : cols) out << ',' << c.setup_time;
    out << "\nsolve_s";
    for (const auto& c : cols) out << ',' << c.solve_time;
  }
  out << '\n';
}

}  // namespace fams
