#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "specforge/error.hpp"
#include "specforge/generators.hpp"

namespace specforge {

GridLayout::GridLayout(std::vector<double> x_min, std::vector<double> x_max,
                       int beta)
    : x_min_(std::move(x_min)), x_max_(std::move(x_max)), beta_(beta) {
  if (beta < 1) throw std::invalid_argument("beta must be >= 1");
  if (x_min_.size() != x_max_.size() || x_min_.empty()) {
    throw std::invalid_argument("grid bounds must be non-empty and equal length");
  }
  for (std::size_t j = 0; j < x_min_.size(); ++j) {
    if (!(x_min_[j] <= x_max_[j]) || !std::isfinite(x_min_[j]) ||
        !std::isfinite(x_max_[j])) {
      throw std::invalid_argument("grid bounds must be finite with min <= max");
    }
    const double width = x_max_[j] - x_min_[j];
    cells_.push_back(width > 0.0 ? beta : 1);
    step_.push_back(width / beta);
  }
}

double GridLayout::cell_count() const {
  double n = 1.0;
  for (int c : cells_) n *= c;
  return n;
}

double GridLayout::edge(std::size_t axis, int p) const {
  if (p >= cells_[axis]) return x_max_[axis];
  return x_min_[axis] + p * step_[axis];
}

std::vector<int> GridLayout::cell_coords(std::uint64_t index) const {
  std::vector<int> coords(dim());
  for (std::size_t j = dim(); j-- > 0;) {
    coords[j] = static_cast<int>(index % static_cast<std::uint64_t>(cells_[j]));
    index /= static_cast<std::uint64_t>(cells_[j]);
  }
  return coords;
}

Hyperrectangle GridLayout::cell_box(std::uint64_t index) const {
  const auto coords = cell_coords(index);
  std::vector<double> lo(dim());
  std::vector<double> hi(dim());
  for (std::size_t j = 0; j < dim(); ++j) {
    lo[j] = edge(j, coords[j]);
    hi[j] = edge(j, coords[j] + 1);
  }
  return Hyperrectangle(std::move(lo), std::move(hi));
}

std::vector<std::uint64_t> GridLayout::cells_containing(
    std::span<const double> point) const {
  if (point.size() != dim()) {
    throw std::invalid_argument("point dimension differs from grid dimension");
  }
  // Per axis, at most two slabs can hold the coordinate (a shared face).
  std::vector<std::vector<int>> per_axis(dim());
  for (std::size_t j = 0; j < dim(); ++j) {
    const double x = point[j];
    int guess = 0;
    if (step_[j] > 0.0) {
      const double g = std::floor((x - x_min_[j]) / step_[j]);
      guess = static_cast<int>(std::clamp(g, 0.0, cells_[j] - 1.0));
    }
    for (int p = std::max(0, guess - 1); p <= std::min(cells_[j] - 1, guess + 1);
         ++p) {
      if (edge(j, p) <= x && x <= edge(j, p + 1)) per_axis[j].push_back(p);
    }
    if (per_axis[j].empty()) return {};
  }
  std::vector<std::uint64_t> out{0};
  for (std::size_t j = 0; j < dim(); ++j) {
    std::vector<std::uint64_t> next;
    for (std::uint64_t base : out) {
      for (int p : per_axis[j]) {
        next.push_back(base * static_cast<std::uint64_t>(cells_[j]) +
                       static_cast<std::uint64_t>(p));
      }
    }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::string cell_name(const GridLayout& grid, std::uint64_t index) {
  std::ostringstream out;
  out << "grid:cell";
  const auto coords = grid.cell_coords(index);
  for (std::size_t j = 0; j < coords.size(); ++j) {
    out << (j == 0 ? ':' : ',') << coords[j];
  }
  return out.str();
}

GridLayout checked_layout(const Dataset& gen, int beta, TaskKind task,
                          double cell_cap) {
  if (task != gen.task()) {
    throw std::invalid_argument("task kind differs from the dataset's");
  }
  if (beta < 1) throw std::invalid_argument("beta must be >= 1");
  const auto stats = compute_stats(gen);
  // Check the cap on the closed form first so huge k never allocates.
  double cells = 1.0;
  for (std::size_t j = 0; j < gen.cols(); ++j) {
    if (stats.x_max[j] > stats.x_min[j]) cells *= beta;
  }
  if (cells > cell_cap) {
    std::ostringstream msg;
    msg << "grid with beta=" << beta << " over " << gen.cols()
        << " features needs " << cells << " cells (beta^k), above the cap of "
        << cell_cap;
    throw CellCapExceeded(msg.str(), cells);
  }
  return GridLayout(stats.x_min, stats.x_max, beta);
}

SpecSet empty_grid_set(const Dataset& gen, int beta, TaskKind task,
                       double cell_cap) {
  SpecSet set;
  set.task = task;
  set.feature_dim = gen.cols();
  set.generator = "grid";
  set.params = {{"beta", beta}, {"cell_cap", cell_cap}};
  return set;
}

}  // namespace

SpecSet gen_grid(const Dataset& gen, int beta, TaskKind task, double cell_cap) {
  const GridLayout grid = checked_layout(gen, beta, task, cell_cap);
  const auto n = static_cast<std::ptrdiff_t>(gen.rows());

  std::vector<std::vector<std::uint64_t>> point_cells(gen.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    point_cells[static_cast<std::size_t>(i)] =
        grid.cells_containing(gen.row(static_cast<std::size_t>(i)));
  }

  std::map<std::uint64_t, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < gen.rows(); ++i) {
    for (std::uint64_t c : point_cells[i]) members[c].push_back(i);
  }
  std::vector<std::pair<std::uint64_t, std::vector<std::size_t>>> cells(
      members.begin(), members.end());

  std::vector<std::optional<Specification>> found(cells.size());
  const auto m = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t c = 0; c < m; ++c) {
    const auto& [index, rows] = cells[static_cast<std::size_t>(c)];
    if (auto output = extract_output(gen, rows)) {
      found[static_cast<std::size_t>(c)] =
          Specification{grid.cell_box(index), *output, cell_name(grid, index)};
    }
  }

  SpecSet set = empty_grid_set(gen, beta, task, cell_cap);
  for (auto& spec : found) {
    if (spec) set.specs.push_back(std::move(*spec));
  }
  return set;
}

SpecSet gen_grid_serial(const Dataset& gen, int beta, TaskKind task,
                        double cell_cap) {
  const GridLayout grid = checked_layout(gen, beta, task, cell_cap);
  SpecSet set = empty_grid_set(gen, beta, task, cell_cap);
  const auto total = static_cast<std::uint64_t>(grid.cell_count());
  for (std::uint64_t c = 0; c < total; ++c) {
    if (auto spec = extract_specification(grid.cell_box(c), gen, task)) {
      spec->provenance = cell_name(grid, c);
      set.specs.push_back(std::move(*spec));
    }
  }
  return set;
}

}  // namespace specforge
