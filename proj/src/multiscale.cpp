#include "fams/multiscale.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <string>

namespace fams {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Decoupled: return "decoupled";
    case Strategy::Frac: return "frac";
    case Strategy::Rock: return "rock";
    case Strategy::Coupled: return "coupled";
  }
  return "?";
}

std::string_view to_string(RestrictionKind k) {
  switch (k) {
    case RestrictionKind::FV: return "fv";
    case RestrictionKind::FE: return "fe";
    case RestrictionKind::MIX: return "mix";
  }
  return "?";
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

enum class Link { Known, Local, Neglected };

struct Stage {
  bool matrix;
  bool fracture;
  CellClass cls;
};

std::vector<Stage> stages_for(Strategy s) {
  constexpr auto E = CellClass::Edge, F = CellClass::Face, I = CellClass::Interior;
  switch (s) {
    case Strategy::Decoupled:
    case Strategy::Frac:
      return {{false, true, E}, {false, true, F}, {true, false, E}, {true, false, F}, {true, false, I}};
    case Strategy::Rock:
      return {{true, false, E}, {true, false, F}, {true, false, I}, {false, true, E}, {false, true, F}};
    case Strategy::Coupled:
      return {{true, true, E}, {true, true, F}, {true, true, I}};
  }
  return {};
}

}  // namespace

Strategy parse_strategy(std::string_view name) {
  const auto n = lower(name);
  for (auto s : {Strategy::Decoupled, Strategy::Frac, Strategy::Rock, Strategy::Coupled})
    if (n == to_string(s)) return s;
  throw InputError("unknown strategy '" + std::string(name) + "' (decoupled, frac, rock, coupled)");
}

RestrictionKind parse_restriction(std::string_view name) {
  const auto n = lower(name);
  for (auto k : {RestrictionKind::FV, RestrictionKind::FE, RestrictionKind::MIX})
    if (n == to_string(k)) return k;
  throw InputError("unknown restriction '" + std::string(name) + "' (fv, fe, mix)");
}

Prolongation build_prolongation(const FineSystem& system, const CoarseHierarchy& h, Strategy strategy,
                                const MergedDuals* merged) {
  const int n = system.size();
  if (h.n_fine() != n) throw InputError("hierarchy does not match the fine system");
  MergedDuals own;
  if (strategy == Strategy::Coupled && merged == nullptr) {
    own = merge_duals(h, system);
    merged = &own;
  }
  const std::vector<int>& block_of = strategy == Strategy::Coupled ? merged->block_of : h.dual_block_of;
  const auto& a = system.a;

  auto link = [&](int i, int j) {
    const Medium mi = h.medium_of[i], mj = h.medium_of[j];
    if (mj == Medium::Well) return Link::Known;
    if (mi != mj && strategy != Strategy::Coupled) {
      switch (strategy) {
        case Strategy::Frac: return mi == Medium::Matrix ? Link::Known : Link::Neglected;
        case Strategy::Rock: return mi == Medium::Fracture ? Link::Known : Link::Neglected;
        default: return Link::Neglected;
      }
    }
    const int ri = rank(h.class_of[i]), rj = rank(h.class_of[j]);
    if (rj > ri) return Link::Known;
    if (rj == ri && block_of[i] == block_of[j]) return Link::Local;
    return Link::Neglected;
  };

  std::vector<std::vector<std::pair<int, double>>> prow(n);
  for (int i = 0; i < n; ++i)
    if (h.coarse_of_node[i] >= 0) prow[i].emplace_back(h.coarse_of_node[i], 1.0);

  std::vector<int> loc(n, -1);
  std::vector<int> colpos(h.n_coarse(), -1);
  std::vector<std::pair<int, int>> members;  // (block, dof)
  std::vector<Triplet> trip;
  std::vector<int> cols;
  std::vector<double> rhs;

  for (const auto& st : stages_for(strategy)) {
    members.clear();
    for (int i = 0; i < n; ++i) {
      const Medium m = h.medium_of[i];
      if (h.class_of[i] != st.cls || h.coarse_of_node[i] >= 0) continue;
      if ((m == Medium::Matrix && st.matrix) || (m == Medium::Fracture && st.fracture))
        members.emplace_back(block_of[i], i);
    }
    std::sort(members.begin(), members.end());
    for (std::size_t begin = 0; begin < members.size();) {
      std::size_t end = begin;
      while (end < members.size() && members[end].first == members[begin].first) ++end;
      const int m = static_cast<int>(end - begin);
      for (int k = 0; k < m; ++k) loc[members[begin + k].second] = k;

      cols.clear();
      for (int k = 0; k < m; ++k) {
        const int i = members[begin + k].second;
        for (int j : a.row_cols(i)) {
          if (j == i || link(i, j) != Link::Known) continue;
          for (const auto& [c, v] : prow[j]) {
            if (colpos[c] < 0) {
              colpos[c] = 0;
              cols.push_back(c);
            }
          }
        }
      }
      std::sort(cols.begin(), cols.end());
      for (std::size_t q = 0; q < cols.size(); ++q) colpos[cols[q]] = static_cast<int>(q);
      rhs.assign(static_cast<std::size_t>(m) * cols.size(), 0.0);

      trip.clear();
      for (int k = 0; k < m; ++k) {
        const int i = members[begin + k].second;
        const auto rc = a.row_cols(i);
        const auto rv = a.row_values(i);
        double diag = 0.0;
        for (std::size_t e = 0; e < rc.size(); ++e) {
          const int j = rc[e];
          const double aij = rv[e];
          if (j == i) {
            diag += aij;
            continue;
          }
          switch (link(i, j)) {
            case Link::Local: trip.push_back({k, loc[j], aij}); break;
            case Link::Neglected: diag += aij; break;
            case Link::Known:
              for (const auto& [c, v] : prow[j]) rhs[k + static_cast<std::size_t>(m) * colpos[c]] -= aij * v;
              break;
          }
        }
        trip.push_back({k, k, diag});
      }

      if (!cols.empty()) {
        try {
          SparseLu lu(SparseMatrix::from_triplets(m, m, trip));
          lu.solve_in_place(rhs, static_cast<int>(cols.size()));
        } catch (const SingularMatrixError&) {
          throw SingularMatrixError("singular local basis problem in " + std::string(to_string(st.cls)) +
                                    " dual block " + std::to_string(members[begin].first) + " (" +
                                    std::to_string(m) + " cells)");
        }
        for (int k = 0; k < m; ++k) {
          auto& row = prow[members[begin + k].second];
          for (std::size_t q = 0; q < cols.size(); ++q) {
            const double v = rhs[k + static_cast<std::size_t>(m) * q];
            if (v != 0.0) row.emplace_back(cols[q], v);
          }
        }
      }
      for (int c : cols) colpos[c] = -1;
      for (int k = 0; k < m; ++k) loc[members[begin + k].second] = -1;
      begin = end;
    }
  }

  std::vector<int> row_ptr(n + 1, 0), col_idx;
  std::vector<double> values;
  for (int i = 0; i < n; ++i) {
    for (const auto& [c, v] : prow[i]) {
      col_idx.push_back(c);
      values.push_back(v);
    }
    row_ptr[i + 1] = static_cast<int>(col_idx.size());
  }
  Prolongation out;
  out.p = SparseMatrix(n, h.n_coarse(), std::move(row_ptr), std::move(col_idx), std::move(values));
  out.strategy = strategy;
  out.column_node = h.node_dof;
  out.column_medium = h.coarse_medium;
  return out;
}

Prolongation truncate_rescale(const Prolongation& p, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InputError("truncation threshold must lie in [0, 1)");
  if (alpha == 0.0) return p;
  const auto& m = p.p;
  std::vector<int> row_ptr(m.rows() + 1, 0), col_idx;
  std::vector<double> values;
  col_idx.reserve(m.nnz());
  values.reserve(m.nnz());
  for (int i = 0; i < m.rows(); ++i) {
    const auto rc = m.row_cols(i);
    const auto rv = m.row_values(i);
    const std::size_t first = values.size();
    double sum = 0.0;
    bool dropped = false;
    for (std::size_t e = 0; e < rc.size(); ++e) {
      if (std::abs(rv[e]) < alpha) {
        dropped = true;
        continue;
      }
      col_idx.push_back(rc[e]);
      values.push_back(rv[e]);
      sum += rv[e];
    }
    if (values.size() == first)
      throw InputError("truncation at alpha = " + std::to_string(alpha) + " empties row " + std::to_string(i));
    if (dropped)
      for (std::size_t e = first; e < values.size(); ++e) values[e] /= sum;
    row_ptr[i + 1] = static_cast<int>(col_idx.size());
  }
  Prolongation out = p;
  out.p = SparseMatrix(m.rows(), m.cols(), std::move(row_ptr), std::move(col_idx), std::move(values));
  return out;
}

Restriction build_restriction(const CoarseHierarchy& h, RestrictionKind kind, const Prolongation& p,
                              const std::set<Medium>& fv_media) {
  const int nf = h.n_fine(), nc = h.n_coarse();
  if (p.p.rows() != nf || p.p.cols() != nc) throw InputError("prolongation does not match the hierarchy");
  Restriction r;
  r.kind = kind;
  if (kind == RestrictionKind::FE) {
    r.r = p.p.transpose();
    return r;
  }
  std::vector<Triplet> t;
  if (kind == RestrictionKind::FV) {
    for (int i = 0; i < nf; ++i) t.push_back({h.primal_of[i], i, 1.0});
  } else {
    std::vector<char> fv(nc);
    for (int c = 0; c < nc; ++c) fv[c] = fv_media.count(h.coarse_medium[c]) ? 1 : 0;
    for (int i = 0; i < nf; ++i)
      if (fv[h.primal_of[i]]) t.push_back({h.primal_of[i], i, 1.0});
    for (int i = 0; i < nf; ++i) {
      const auto rc = p.p.row_cols(i);
      const auto rv = p.p.row_values(i);
      for (std::size_t e = 0; e < rc.size(); ++e)
        if (!fv[rc[e]]) t.push_back({rc[e], i, rv[e]});
    }
  }
  r.r = SparseMatrix::from_triplets(nc, nf, std::move(t));
  return r;
}

CoarseSystem::CoarseSystem(const SparseMatrix& a, const Prolongation& p, const Restriction& r)
    : ac_(spgemm(spgemm(r.r, a), p.p)), lu_(factor(ac_)) {}

SparseLu CoarseSystem::factor(const SparseMatrix& ac) {
  try {
    return SparseLu(ac);
  } catch (const SingularMatrixError& e) {
    throw SingularMatrixError("coarse system (" + std::to_string(ac.rows()) + " unknowns) is singular: " + e.what());
  }
}

}  // namespace fams
