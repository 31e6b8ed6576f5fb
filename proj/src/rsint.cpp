#include "rsfield/rsint.hpp"

#include <cmath>
#include <stdexcept>

#include "rsfield/rng.hpp"

namespace rsfield {

namespace detail {

std::vector<GridPartition> dyadic_ladder(const Box& box, int refinements, int base_cells) {
  if (refinements < 1) throw std::invalid_argument("refinements must be >= 1");
  if (base_cells < 1) throw std::invalid_argument("base_cells must be >= 1");
  std::vector<GridPartition> out;
  out.reserve(refinements);
  int n = base_cells;
  for (int k = 0; k < refinements; ++k, n *= 2)
    out.push_back(GridPartition::uniform(box.lo, box.hi, n));
  return out;
}

IntegralResult ladder_result(std::vector<std::pair<double, double>> levels) {
  IntegralResult r;
  r.levels = std::move(levels);
  if (r.levels.empty()) throw std::logic_error("ladder_result: no levels");
  r.value = r.levels.back().second;
  r.error_estimate = r.levels.size() >= 2
                         ? std::abs(r.value - r.levels[r.levels.size() - 2].second)
                         : 0.0;
  if (!std::isfinite(r.value)) throw std::runtime_error("integral is not finite");
  return r;
}

namespace {

// Tag coordinate along one axis for cell i, for the per-axis policies.
double axis_tag(const std::vector<double>& ax, int i, TagPolicy::Kind kind) {
  switch (kind) {
    case TagPolicy::Kind::LowerCorner: return ax[i];
    case TagPolicy::Kind::UpperCorner: return ax[i + 1];
    case TagPolicy::Kind::Midpoint: return 0.5 * (ax[i] + ax[i + 1]);
    default: return 0.5 * (ax[i] + ax[i + 1]);
  }
}

double cell_bracket_direct(const ScalarFn& F, std::uint32_t rs_mask, int N,
                           const std::vector<const std::vector<double>*>& axes,
                           const std::vector<int>& cell, const Point& tag) {
  Accum acc;
  Point p(tag);
  const int nrs = popcount32(rs_mask);
  std::vector<int> rs_axes;
  rs_axes.reserve(nrs);
  for (int m = 0; m < N; ++m)
    if ((rs_mask >> m) & 1u) rs_axes.push_back(m);
  for (std::uint32_t c = 0; c < (1u << nrs); ++c) {
    int par = 0;
    for (int j = 0; j < nrs; ++j) {
      const int m = rs_axes[j];
      const bool low = (c >> j) & 1u;
      p[m] = (*axes[m])[cell[m] + (low ? 0 : 1)];
      par += low ? 1 : 0;
    }
    const double v = F(p);
    acc.add((par % 2 == 0) ? v : -v);
  }
  return acc.get();
}

}  // namespace

double mixed_sum(const ScalarFn& w, const ScalarFn& F, std::uint32_t rs_mask,
                 const GridPartition& P, const TagPolicy& tags) {
  const int N = P.dim();
  std::vector<int> cell_extents(N);
  std::vector<const std::vector<double>*> axes(N);
  for (int m = 0; m < N; ++m) {
    cell_extents[m] = P.cells(m);
    axes[m] = &P.axis(m);
  }

  Accum total;

  if (tags.kind == TagPolicy::Kind::Randomized) {
    Point tag(N);
    std::size_t cell_lin = 0;
    for_each_index(cell_extents, [&](const std::vector<int>& cell) {
      for (int m = 0; m < N; ++m) {
        const auto& ax = *axes[m];
        const double u = rng::uniform01(tags.seed, std::uint64_t(m), cell_lin);
        tag[m] = ax[cell[m]] + u * (ax[cell[m] + 1] - ax[cell[m]]);
      }
      double vol = 1.0;
      for (int m = 0; m < N; ++m)
        if (!((rs_mask >> m) & 1u)) vol *= (*axes[m])[cell[m] + 1] - (*axes[m])[cell[m]];
      const double inc = rs_mask == 0 ? F(tag) : cell_bracket_direct(F, rs_mask, N, axes, cell, tag);
      total.add((long double)w(tag) * inc * vol);
      ++cell_lin;
    });
    return total.get();
  }

  // Deterministic tags: F is sampled once on the mixed lattice whose axes use
  // node positions on RS axes and tag positions elsewhere, so corner values
  // are shared between neighbouring cells.
  std::vector<std::vector<double>> tagpos(N);
  std::vector<std::vector<double>> latpos(N);
  std::vector<int> lat_extents(N);
  for (int m = 0; m < N; ++m) {
    const auto& ax = *axes[m];
    tagpos[m].resize(cell_extents[m]);
    for (int i = 0; i < cell_extents[m]; ++i) tagpos[m][i] = axis_tag(ax, i, tags.kind);
    if ((rs_mask >> m) & 1u)
      latpos[m] = ax;
    else
      latpos[m] = tagpos[m];
    lat_extents[m] = int(latpos[m].size());
  }

  std::size_t lat_size = 1;
  for (int m = 0; m < N; ++m) lat_size *= std::size_t(lat_extents[m]);
  std::vector<double> lattice(lat_size);
  {
    Point p(N);
    std::size_t k = 0;
    for_each_index(lat_extents, [&](const std::vector<int>& idx) {
      for (int m = 0; m < N; ++m) p[m] = latpos[m][idx[m]];
      lattice[k++] = F(p);
    });
  }

  std::vector<int> rs_axes;
  for (int m = 0; m < N; ++m)
    if ((rs_mask >> m) & 1u) rs_axes.push_back(m);
  const int nrs = int(rs_axes.size());

  Point tag(N);
  std::vector<int> lat_idx(N);
  for_each_index(cell_extents, [&](const std::vector<int>& cell) {
    double vol = 1.0;
    for (int m = 0; m < N; ++m) {
      tag[m] = tagpos[m][cell[m]];
      lat_idx[m] = cell[m];
      if (!((rs_mask >> m) & 1u)) vol *= (*axes[m])[cell[m] + 1] - (*axes[m])[cell[m]];
    }
    Accum bracket;
    for (std::uint32_t c = 0; c < (1u << nrs); ++c) {
      int par = 0;
      for (int j = 0; j < nrs; ++j) {
        const bool low = (c >> j) & 1u;
        lat_idx[rs_axes[j]] = cell[rs_axes[j]] + (low ? 0 : 1);
        par += low ? 1 : 0;
      }
      const double v = lattice[linear_index(lat_extents, lat_idx)];
      bracket.add((par % 2 == 0) ? v : -v);
    }
    for (int j = 0; j < nrs; ++j) lat_idx[rs_axes[j]] = cell[rs_axes[j]];
    total.add((long double)w(tag) * (long double)(bracket.sum + bracket.comp) * vol);
  });
  return total.get();
}

}  // namespace detail

SmoothFn smooth_from_fd(ScalarFn f, double step) {
  auto fd = [f, step](std::uint32_t mask, const Point& p) -> double {
    if (mask == 0) return f(p);
    const int N = int(p.size());
    std::vector<int> axes;
    for (int m = 0; m < N; ++m)
      if ((mask >> m) & 1u) axes.push_back(m);
    const int k = int(axes.size());
    detail::Accum acc;
    Point q(p);
    for (std::uint32_t c = 0; c < (1u << k); ++c) {
      int par = 0;
      for (int j = 0; j < k; ++j) {
        const bool minus = (c >> j) & 1u;
        q[axes[j]] = p[axes[j]] + (minus ? -step : step);
        par += minus ? 1 : 0;
      }
      const double v = f(q);
      acc.add((par % 2 == 0) ? v : -v);
    }
    double denom = 1.0;
    for (int j = 0; j < k; ++j) denom *= 2.0 * step;
    return acc.get() / denom;
  };
  SmoothFn s;
  s.value = f;
  s.partial = fd;
  return s;
}

SmoothFn exp_dot(const std::vector<double>& alpha) {
  auto val = [alpha](const Point& p) {
    double dot = 0.0;
    for (std::size_t m = 0; m < alpha.size(); ++m) dot += alpha[m] * p[m];
    return std::exp(dot);
  };
  auto part = [alpha, val](std::uint32_t mask, const Point& p) {
    double coef = 1.0;
    for (std::size_t m = 0; m < alpha.size(); ++m)
      if ((mask >> m) & 1u) coef *= alpha[m];
    return coef * val(p);
  };
  return SmoothFn{val, part};
}

SmoothFn coordinate_product(int dim) {
  auto val = [dim](const Point& p) {
    double prod = 1.0;
    for (int m = 0; m < dim; ++m) prod *= p[m];
    return prod;
  };
  auto part = [dim](std::uint32_t mask, const Point& p) {
    double prod = 1.0;
    for (int m = 0; m < dim; ++m)
      if (!((mask >> m) & 1u)) prod *= p[m];
    return prod;
  };
  return SmoothFn{val, part};
}

namespace {

void require_proper_box(const Box& box, const char* what) {
  if (box.lo.size() != box.hi.size() || box.lo.empty())
    throw std::invalid_argument(std::string(what) + ": bad box");
  for (int m = 0; m < box.dim(); ++m)
    if (!(box.lo[m] < box.hi[m]))
      throw std::invalid_argument(std::string(what) + ": empty box");
}

std::uint32_t full_mask(int N) { return (N == 32) ? ~0u : ((1u << N) - 1u); }

}  // namespace

IntegralResult rs_integral(const ScalarFn& g, const ScalarFn& f, const Box& box, TagPolicy tags,
                           int refinements, int base_cells) {
  require_proper_box(box, "rs_integral");
  const auto ladder = detail::dyadic_ladder(box, refinements, base_cells);
  std::vector<std::pair<double, double>> levels;
  levels.reserve(ladder.size());
  for (const auto& P : ladder)
    levels.emplace_back(P.norm(), detail::mixed_sum(g, f, full_mask(box.dim()), P, tags));
  return detail::ladder_result(std::move(levels));
}

IntegralResult rs_integral(const ScalarFn& g, const GridField& f, const Box& box, TagPolicy tags,
                           int levels) {
  require_proper_box(box, "rs_integral");
  if (levels < 1) throw std::invalid_argument("rs_integral: levels must be >= 1");
  const GridPartition native = f.partition().clipped(box);
  std::vector<GridPartition> ladder{native};
  for (int k = 1; k < levels; ++k) {
    GridPartition c = ladder.front().coarsened();
    if (c.cell_count() == ladder.front().cell_count()) break;
    ladder.insert(ladder.begin(), std::move(c));
  }
  auto f_eval = [&f](const Point& p) { return f(p); };
  std::vector<std::pair<double, double>> lv;
  lv.reserve(ladder.size());
  for (const auto& P : ladder)
    lv.emplace_back(P.norm(), detail::mixed_sum(g, f_eval, full_mask(box.dim()), P, tags));
  return detail::ladder_result(std::move(lv));
}

IntegralResult mixed_integral(const ScalarFn& g, const ScalarFn& f, const MultiIndexSet& v,
                              const Box& box, TagPolicy tags, int refinements, int base_cells) {
  const int N = box.dim();
  if (v.ambient_dim() != N) throw std::invalid_argument("mixed_integral: dimension mismatch");
  if (v.is_empty()) throw std::invalid_argument("mixed_integral: v must be nonempty");

  const auto vm = v.members();
  const auto wm = v.complement().members();

  // A degenerate -v coordinate collapses the outer bracket to exactly zero.
  for (int l : wm)
    if (box.lo[l - 1] == box.hi[l - 1])
      return IntegralResult{0.0, 0.0, {{0.0, 0.0}}};

  Box sub;
  for (int j : vm) {
    sub.lo.push_back(box.lo[j - 1]);
    sub.hi.push_back(box.hi[j - 1]);
  }
  require_proper_box(sub, "mixed_integral");
  const auto ladder = detail::dyadic_ladder(sub, refinements, base_cells);

  std::vector<std::pair<double, double>> levels(ladder.size());
  for (auto& l : levels) l = {0.0, 0.0};
  for (std::size_t k = 0; k < ladder.size(); ++k) levels[k].first = ladder[k].norm();

  const int nw = int(wm.size());
  for (std::uint32_t wbits = 0; wbits < (1u << nw); ++wbits) {
    Point fixed(N, 0.0);
    int par = 0;
    for (int j = 0; j < nw; ++j) {
      const bool from_lo = (wbits >> j) & 1u;
      fixed[wm[j] - 1] = from_lo ? box.lo[wm[j] - 1] : box.hi[wm[j] - 1];
      par += from_lo ? 1 : 0;
    }
    const double sign = (par % 2 == 0) ? 1.0 : -1.0;
    auto lift = [&](const Point& x) {
      Point p(fixed);
      for (std::size_t j = 0; j < vm.size(); ++j) p[vm[j] - 1] = x[j];
      return p;
    };
    ScalarFn g_sub = [&g, lift](const Point& x) { return g(lift(x)); };
    ScalarFn f_sub = [&f, lift](const Point& x) { return f(lift(x)); };
    for (std::size_t k = 0; k < ladder.size(); ++k)
      levels[k].second +=
          sign * detail::mixed_sum(g_sub, f_sub, full_mask(int(vm.size())), ladder[k], tags);
  }
  return detail::ladder_result(std::move(levels));
}

IntegralResult ibp_rhs(const ScalarFn& f, const ScalarFn& g, const Box& box, TagPolicy tags,
                       int refinements, int base_cells) {
  const int N = box.dim();
  require_proper_box(box, "ibp_rhs");
  ScalarFn fg = [&f, &g](const Point& p) { return f(p) * g(p); };
  const double bracket = rect_increment(fg, box.lo, box.hi);

  std::vector<std::pair<double, double>> levels;
  for (const auto& v : subsets(N)) {
    if (v.is_empty()) continue;
    IntegralResult term = mixed_integral(g, f, v, box, tags, refinements, base_cells);
    if (levels.empty()) {
      levels.assign(term.levels.size(), {0.0, bracket});
      for (std::size_t k = 0; k < levels.size(); ++k) levels[k].first = term.levels[k].first;
    }
    for (std::size_t k = 0; k < levels.size(); ++k)
      levels[k].second += v.sign() * term.levels[k].second;
  }
  return detail::ladder_result(std::move(levels));
}

IntegralResult substitute_derivative(const ScalarFn& g, const ScalarFn& f_t, const Box& box,
                                     int refinements, int base_cells) {
  require_proper_box(box, "substitute_derivative");
  const auto ladder = detail::dyadic_ladder(box, refinements, base_cells);
  std::vector<std::pair<double, double>> levels;
  for (const auto& P : ladder)
    levels.emplace_back(P.norm(), detail::mixed_sum(g, f_t, 0u, P, TagPolicy::midpoint()));
  return detail::ladder_result(std::move(levels));
}

IntegralResult substitute_partial(const ScalarFn& g, const SmoothFn& f, const MultiIndexSet& v,
                                  const Box& box, TagPolicy tags, int refinements,
                                  int base_cells) {
  const int N = box.dim();
  if (v.ambient_dim() != N) throw std::invalid_argument("substitute_partial: dimension mismatch");
  require_proper_box(box, "substitute_partial");
  const std::uint32_t vmask = v.bits();
  const std::uint32_t rs = full_mask(N) & ~vmask;
  ScalarFn ftv = [&f, vmask](const Point& p) { return f.partial(vmask, p); };
  const auto ladder = detail::dyadic_ladder(box, refinements, base_cells);
  std::vector<std::pair<double, double>> levels;
  for (const auto& P : ladder)
    levels.emplace_back(P.norm(), detail::mixed_sum(g, ftv, rs, P, tags));
  return detail::ladder_result(std::move(levels));
}

std::pair<IntegralResult, IntegralResult> product_rule_check(const SmoothFn& h, const SmoothFn& f,
                                                             const ScalarFn& g, const Box& box,
                                                             int refinements, int base_cells) {
  const int N = box.dim();
  require_proper_box(box, "product_rule_check");
  const auto ladder = detail::dyadic_ladder(box, refinements, base_cells);

  ScalarFn fg = [&f, &g](const Point& p) { return f.value(p) * g(p); };
  std::vector<std::pair<double, double>> lhs_levels;
  for (const auto& P : ladder)
    lhs_levels.emplace_back(P.norm(),
                            detail::mixed_sum(h.value, fg, full_mask(N), P, TagPolicy::midpoint()));

  std::vector<std::pair<double, double>> rhs_levels(ladder.size());
  for (std::size_t k = 0; k < ladder.size(); ++k) rhs_levels[k] = {ladder[k].norm(), 0.0};
  for (std::uint32_t umask = 0; umask < (1u << N); ++umask) {
    ScalarFn weight = [&h, &f, umask](const Point& p) {
      return h.value(p) * f.partial(umask, p);
    };
    const std::uint32_t rs = full_mask(N) & ~umask;
    for (std::size_t k = 0; k < ladder.size(); ++k)
      rhs_levels[k].second += detail::mixed_sum(weight, g, rs, ladder[k], TagPolicy::midpoint());
  }
  return {detail::ladder_result(std::move(lhs_levels)),
          detail::ladder_result(std::move(rhs_levels))};
}

std::pair<double, double> fundamental_lemma_check(const ScalarFn& f, const MultiIndexSet& v,
                                                  const Box& box, int refinements,
                                                  int base_cells) {
  const int N = box.dim();
  if (v.ambient_dim() != N)
    throw std::invalid_argument("fundamental_lemma_check: dimension mismatch");
  if (v.is_empty()) throw std::invalid_argument("fundamental_lemma_check: v must be nonempty");
  require_proper_box(box, "fundamental_lemma_check");

  int n = base_cells;
  for (int k = 1; k < refinements; ++k) n *= 2;
  const GridPartition P = GridPartition::uniform(box.lo, box.hi, n);

  const auto vm = v.members();
  const auto wm = v.complement().members();
  const std::uint32_t vmask = v.bits();

  // Sample F_v(t) on the nodes of P. For each fixed t_{-v} the inner
  // |v|-dimensional integral is accumulated cumulatively over the v-cells,
  // each split once more per axis for the inner midpoint rule.
  std::vector<int> node_extents(N), cell_extents_v;
  for (int m = 0; m < N; ++m) node_extents[m] = P.nodes(m);
  for (int j : vm) cell_extents_v.push_back(P.cells(j - 1));

  GridField Fv = GridField::zeros(P);

  std::vector<int> outer_extents;
  for (int l : wm) outer_extents.push_back(P.nodes(l - 1));
  if (outer_extents.empty()) outer_extents.push_back(1);

  detail::for_each_index(outer_extents, [&](const std::vector<int>& oidx) {
    Point t(N, 0.0);
    for (std::size_t j = 0; j < wm.size(); ++j) t[wm[j] - 1] = P.axis(wm[j] - 1)[oidx[j]];

    // bracket of f over [s_{-v}, t_{-v}] at inner point r_v
    auto bracket_at = [&](const Point& rv) {
      detail::Accum acc;
      Point p(t);
      for (std::size_t j = 0; j < vm.size(); ++j) p[vm[j] - 1] = rv[j];
      const int nw = int(wm.size());
      for (std::uint32_t c = 0; c < (1u << nw); ++c) {
        int par = 0;
        for (int j = 0; j < nw; ++j) {
          const bool low = (c >> j) & 1u;
          p[wm[j] - 1] = low ? box.lo[wm[j] - 1] : t[wm[j] - 1];
          par += low ? 1 : 0;
        }
        const double val = f(p);
        acc.add((par % 2 == 0) ? val : -val);
      }
      return acc.get();
    };

    // cumulative integral over v-cells; value at v-node = sum over cells below
    std::size_t cum_size = 1;
    for (int e : cell_extents_v) cum_size *= std::size_t(e);
    std::vector<double> cellval(cum_size, 0.0);
    std::size_t ci = 0;
    detail::for_each_index(cell_extents_v, [&](const std::vector<int>& cidx) {
      // split each v-cell 2x per axis, midpoints
      const int k = int(vm.size());
      double total = 0.0;
      std::vector<int> sub(k, 0);
      std::vector<int> sub_ext(k, 2);
      detail::for_each_index(sub_ext, [&](const std::vector<int>& sidx) {
        Point rv(k);
        double vol = 1.0;
        for (int j = 0; j < k; ++j) {
          const auto& ax = P.axis(vm[j] - 1);
          const double a = ax[cidx[j]], b = ax[cidx[j] + 1];
          const double h = (b - a) / 2.0;
          rv[j] = a + (sidx[j] + 0.5) * h;
          vol *= h;
        }
        total += vol * bracket_at(rv);
      });
      cellval[ci++] = total;
    });

    // prefix-sum cellval along each v axis
    {
      std::vector<int>& ext = cell_extents_v;
      for (std::size_t axis = 0; axis < ext.size(); ++axis) {
        std::size_t stride = 1;
        for (std::size_t m = axis + 1; m < ext.size(); ++m) stride *= std::size_t(ext[m]);
        const std::size_t block = stride * std::size_t(ext[axis]);
        for (std::size_t start = 0; start < cellval.size(); ++start) {
          // walk positions whose axis-coordinate is >= 1
          const std::size_t pos_in_block = start % block;
          if (pos_in_block < stride) continue;
          cellval[start] += cellval[start - stride];
        }
      }
    }

    // write F_v at nodes: node k_v has integral = prefix at cell (k_v - 1)
    std::vector<int> vnode_extents;
    for (int j : vm) vnode_extents.push_back(P.nodes(j - 1));
    detail::for_each_index(vnode_extents, [&](const std::vector<int>& kv) {
      double val = 0.0;
      bool interior = true;
      std::vector<int> c(kv.size());
      for (std::size_t j = 0; j < kv.size(); ++j) {
        if (kv[j] == 0) { interior = false; break; }
        c[j] = kv[j] - 1;
      }
      if (interior) val = cellval[detail::linear_index(cell_extents_v, c)];
      std::vector<int> node(N, 0);
      for (std::size_t j = 0; j < wm.size(); ++j) node[wm[j] - 1] = oidx[j];
      for (std::size_t j = 0; j < vm.size(); ++j) node[vm[j] - 1] = kv[j];
      Fv.at(node) = val;
    });
  });

  ScalarFn g_test = [](const Point& p) {
    double dot = 0.0;
    for (double x : p) dot += 0.3 * x;
    return std::exp(dot);
  };

  const double lhs =
      rs_integral(g_test, Fv, box, TagPolicy::midpoint(), 1).value;
  const std::uint32_t rs = full_mask(N) & ~vmask;
  ScalarFn f_plain = f;
  const double rhs = detail::mixed_sum(g_test, f_plain, rs, P, TagPolicy::midpoint());
  return {lhs, rhs};
}

}  // namespace rsfield
