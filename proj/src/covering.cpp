#include "strongmax/covering.hpp"

#include "strongmax/maximal.hpp"

#include <algorithm>
#include <numeric>

namespace strongmax {

namespace {

Index flat(const Point& x, const Dims& dims) {
  Index k = 0;
  for (int l = 0; l < dims.rank(); ++l) k = k * dims[l] + x[l];
  return k;
}

void require_within(const std::vector<Rect>& rects, const Dims& dims) {
  for (const Rect& r : rects)
    if (!r.within(dims))
      throw std::domain_error("rectangle " + r.to_string() + " outside dims " + dims.to_string());
}

void stamp(Mask& m, const Rect& r, const Dims& dims) {
  for_each_point(r, [&](const Point& x) { m[static_cast<std::size_t>(flat(x, dims))] = 1; });
}

double weighted_mass(const GridFunctiond& omega, const Mask& m) {
  double total = 0.0;
  for (Index k = 0; k < omega.size(); ++k)
    if (m[static_cast<std::size_t>(k)]) total += omega[k];
  return total * omega.cell_measure();
}

}  // namespace

Mask rect_mask(const Rect& r, const Dims& dims) {
  require_within({r}, dims);
  Mask m(static_cast<std::size_t>(dims.cells()), 0);
  stamp(m, r, dims);
  return m;
}

Index mask_count(const Mask& m) { return std::count(m.begin(), m.end(), std::uint8_t{1}); }

Index overlap_count(const Mask& m, const Rect& r, const Dims& dims) {
  Index n = 0;
  for_each_point(r, [&](const Point& x) { n += m[static_cast<std::size_t>(flat(x, dims))]; });
  return n;
}

std::vector<std::size_t> order_by_longest_side(const std::vector<Rect>& rects) {
  std::vector<std::size_t> order(rects.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rects[a].longest_side() > rects[b].longest_side();
  });
  return order;
}

std::vector<std::size_t> SelectionResult::selected_original() const {
  std::vector<std::size_t> out;
  out.reserve(selected.size());
  for (std::size_t pos : selected) out.push_back(order[pos]);
  return out;
}

Mask SelectionResult::exhaustion_mask(std::size_t i) const {
  Mask m(exhaustion.size(), 0);
  for (std::size_t k = 0; k < exhaustion.size(); ++k)
    m[k] = exhaustion[k] == static_cast<int>(i) ? 1 : 0;
  return m;
}

Index SelectionResult::exhaustion_count(std::size_t i) const {
  return std::count(exhaustion.begin(), exhaustion.end(), static_cast<int>(i));
}

SelectionResult greedy_half_selection(const std::vector<Rect>& rects, const Dims& dims) {
  require_within(rects, dims);
  SelectionResult sel;
  sel.dims = dims;
  sel.order = order_by_longest_side(rects);
  sel.omega.assign(static_cast<std::size_t>(dims.cells()), 0);
  sel.exhaustion.assign(sel.omega.size(), -1);
  for (std::size_t pos = 0; pos < sel.order.size(); ++pos) {
    const Rect& r = rects[sel.order[pos]];
    const Index hit = overlap_count(sel.omega, r, dims);
    if (2 * hit >= r.cells()) continue;
    const int label = static_cast<int>(sel.selected.size());
    sel.selected.push_back(pos);
    sel.overlap.push_back(hit);
    for_each_point(r, [&](const Point& x) {
      const auto k = static_cast<std::size_t>(flat(x, dims));
      if (!sel.omega[k]) {
        sel.omega[k] = 1;
        sel.exhaustion[k] = label;
      }
    });
  }
  return sel;
}

std::vector<std::size_t> scattered_selection(const std::vector<Rect>& rects, double lambda,
                                             const Dims& dims) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw ConfigError("scattered selection needs 0 < lambda < 1");
  require_within(rects, dims);
  Mask kept_union(static_cast<std::size_t>(dims.cells()), 0);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < rects.size(); ++i) {
    const Index hit = overlap_count(kept_union, rects[i], dims);
    if (static_cast<double>(hit) <= lambda * static_cast<double>(rects[i].cells())) {
      kept.push_back(i);
      stamp(kept_union, rects[i], dims);
    }
  }
  return kept;
}

bool is_scattered(const std::vector<Rect>& rects, double alpha, const Dims& dims) {
  require_within(rects, dims);
  Mask seen(static_cast<std::size_t>(dims.cells()), 0);
  for (const Rect& r : rects) {
    if (static_cast<double>(overlap_count(seen, r, dims)) > alpha * static_cast<double>(r.cells()))
      return false;
    stamp(seen, r, dims);
  }
  return true;
}

CoveringReport verify_covering_claim(const SelectionResult& sel, const std::vector<Rect>& original,
                                     int c) {
  const Dims& dims = sel.dims;
  require_within(original, dims);
  GridFunctiond indicator(dims, 1.0);
  for (Index k = 0; k < indicator.size(); ++k)
    indicator[k] = sel.omega[static_cast<std::size_t>(k)];
  const auto m = multilinear_complexity(std::vector<GridFunctiond>{indicator, indicator}, c);

  CoveringReport report;
  report.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < original.size(); ++idx) {
    for_each_point(original[idx], [&](const Point& x) {
      const double v = m(x);
      if (v < report.min_value) {
        report.min_value = v;
        if (v <= 0.25) {
          report.witness = x;
          report.witness_rect = idx;
        }
      }
    });
  }
  if (original.empty()) report.min_value = 0.0;
  report.holds = original.empty() || report.min_value > 0.25;
  report.holds_nonstrict = original.empty() || report.min_value >= 0.25;
  return report;
}

SelectionAudit audit_selection(const SelectionResult& sel, const std::vector<Rect>& rects) {
  const Dims& dims = sel.dims;
  SelectionAudit audit;
  Mask running(static_cast<std::size_t>(dims.cells()), 0);
  for (std::size_t i = 0; i < sel.selected.size(); ++i) {
    const Rect& r = rects[sel.order[sel.selected[i]]];
    if (2 * overlap_count(running, r, dims) >= r.cells()) ++audit.overlap_violations;
    if (2 * sel.exhaustion_count(i) < r.cells()) ++audit.exhaustion_violations;
    // E(R~_i) must be R~_i minus the earlier selections.
    const Mask e = sel.exhaustion_mask(i);
    const Mask in_r = rect_mask(r, dims);
    for (std::size_t k = 0; k < e.size(); ++k)
      if (e[k] != (in_r[k] && !running[k])) audit.partition_ok = false;
    stamp(running, r, dims);
  }
  for (std::size_t k = 0; k < running.size(); ++k) {
    if (running[k] != sel.omega[k]) audit.partition_ok = false;
    if ((sel.exhaustion[k] >= 0) != (running[k] == 1)) audit.partition_ok = false;
  }
  return audit;
}

std::optional<double> verify_lemma32_prop3(const GridFunctiond& omega, const std::vector<Rect>& a,
                                           const std::vector<std::size_t>& kept, std::size_t i,
                                           std::size_t j) {
  if (i > j || j > a.size()) throw ConfigError("cuts must satisfy 0 <= i <= j <= size");
  const Dims& dims = omega.dims();
  require_within(a, dims);
  const auto cells = static_cast<std::size_t>(dims.cells());
  Mask all_before_j(cells, 0), before_i(cells, 0), kept_between(cells, 0);
  for (std::size_t s = 0; s < j; ++s) {
    stamp(all_before_j, a[s], dims);
    if (s < i) stamp(before_i, a[s], dims);
  }
  for (std::size_t s : kept)
    if (s >= i && s < j) stamp(kept_between, a[s], dims);
  const double denom = weighted_mass(omega, before_i) + weighted_mass(omega, kept_between);
  if (denom == 0.0) return std::nullopt;
  return weighted_mass(omega, all_before_j) / denom;
}

CutSweep sweep_lemma32_cuts(const GridFunctiond& omega, const std::vector<Rect>& a,
                            const std::vector<std::size_t>& kept) {
  CutSweep sweep;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j <= a.size(); ++j) {
      const auto ratio = verify_lemma32_prop3(omega, a, kept, i, j);
      if (!ratio) {
        ++sweep.skipped;
        continue;
      }
      ++sweep.evaluated;
      if (*ratio > sweep.max_ratio) sweep = {*ratio, i, j, sweep.evaluated, sweep.skipped};
    }
  }
  return sweep;
}

}  // namespace strongmax
