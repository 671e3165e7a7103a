#pragma once

#include "strongmax/grid.hpp"

#include <optional>
#include <vector>

namespace strongmax {

/// Boolean mask over a lattice, one byte per cell in row-major order.
using Mask = std::vector<std::uint8_t>;

Mask rect_mask(const Rect& r, const Dims& dims);
Index mask_count(const Mask& m);
/// Cells of r already set in m.
Index overlap_count(const Mask& m, const Rect& r, const Dims& dims);

/// Stable sort by longest side, decreasing; returns original indices.
std::vector<std::size_t> order_by_longest_side(const std::vector<Rect>& rects);

struct SelectionResult {
  Dims dims;
  std::vector<std::size_t> order;     // original indices after the longest-side sort
  std::vector<std::size_t> selected;  // positions in `order`, strictly increasing
  Mask omega;                         // union of the selected rectangles
  /// Cell labels: -1 outside omega, otherwise the index into `selected` whose
  /// exhaustion set E(R~_i) = R~_i minus earlier selections contains the cell.
  std::vector<int> exhaustion;
  std::vector<Index> overlap;         // |union of earlier selections cap R~_i|

  /// Original indices of the selected rectangles, in selection order.
  std::vector<std::size_t> selected_original() const;
  Mask exhaustion_mask(std::size_t i) const;
  Index exhaustion_count(std::size_t i) const;
};

/// Longest-side ordering followed by the greedy scan that keeps R_k iff
/// 2 |(union so far) cap R_k| < |R_k|. Integer cell counts throughout.
SelectionResult greedy_half_selection(const std::vector<Rect>& rects, const Dims& dims);

/// Greedy scan in the given order keeping R_i iff |R_i cap union kept| <= lambda |R_i|.
/// Returns the kept indices.
std::vector<std::size_t> scattered_selection(const std::vector<Rect>& rects, double lambda,
                                             const Dims& dims);

/// True when every rectangle meets the union of its predecessors in at most
/// alpha times its measure. Exact: compares integers against alpha |R|.
bool is_scattered(const std::vector<Rect>& rects, double alpha, const Dims& dims);

struct CoveringReport {
  bool holds = true;              // value > 1/4 at every point of every original rectangle
  bool holds_nonstrict = true;    // value >= 1/4 likewise
  double min_value = 0.0;
  std::optional<Point> witness;   // first point (row-major) attaining a value <= 1/4
  std::size_t witness_rect = 0;   // original index of a rectangle containing it
};

/// Checks that the union of the original rectangles lies in
/// {M^c(1_Omega, 1_Omega) > 1/4}. The guarantee is only claimed for dyadic
/// inputs; other families are exploratory.
CoveringReport verify_covering_claim(const SelectionResult& sel, const std::vector<Rect>& original,
                                     int c);

/// Recount checks of a selection: violations of the strict half-overlap
/// property and of |E(R~_i)| >= |R~_i| / 2, plus disjointness and the
/// E-union equalling Omega.
struct SelectionAudit {
  int overlap_violations = 0;
  int exhaustion_violations = 0;
  bool partition_ok = true;
  bool ok() const { return overlap_violations == 0 && exhaustion_violations == 0 && partition_ok; }
};
SelectionAudit audit_selection(const SelectionResult& sel, const std::vector<Rect>& rects);

/// omega(U_{s<j} A_s) / [omega(U_{s<i} A_s) + omega(U_{i<=s<j, s kept} A_s)]
/// with 0-based cuts 0 <= i <= j <= A.size(). nullopt when the denominator is 0.
std::optional<double> verify_lemma32_prop3(const GridFunctiond& omega, const std::vector<Rect>& a,
                                           const std::vector<std::size_t>& kept, std::size_t i,
                                           std::size_t j);

struct CutSweep {
  double max_ratio = 0.0;
  std::size_t best_i = 0, best_j = 0;
  int evaluated = 0;
  int skipped = 0;
};
/// Exhaustive sweep of verify_lemma32_prop3 over all cuts i < j.
CutSweep sweep_lemma32_cuts(const GridFunctiond& omega, const std::vector<Rect>& a,
                            const std::vector<std::size_t>& kept);

}  // namespace strongmax
