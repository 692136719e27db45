#include "grower.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "windml/error.hpp"

namespace windml::trees::detail {

BinnedColumns::BinnedColumns(const SampleSet& samples) : n_rows_(samples.size()) {
  const std::size_t m = samples.n_features();
  values_.resize(m);
  bins_.resize(m);
  std::vector<double> column(n_rows_);
  for (std::size_t f = 0; f < m; ++f) {
    for (std::size_t r = 0; r < n_rows_; ++r) column[r] = samples.feature(r, f);
    auto& uniq = values_[f];
    uniq = column;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    auto& b = bins_[f];
    b.resize(n_rows_);
    for (std::size_t r = 0; r < n_rows_; ++r) {
      b[r] = static_cast<std::uint32_t>(std::lower_bound(uniq.begin(), uniq.end(), column[r]) - uniq.begin());
    }
  }
}

namespace {

double soft_threshold(double g, double alpha) {
  if (g > alpha) return g - alpha;
  if (g < -alpha) return g + alpha;
  return 0.0;
}

double midpoint(double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  // Adjacent doubles: the midpoint rounds onto lo, which would route lo right.
  return mid > lo ? mid : hi;
}

}  // namespace

SplitFinder::SplitFinder(const BinnedColumns& cols, std::span<const double> targets, const GrowParams& params)
    : cols_(cols), targets_(targets), params_(params) {}

double SplitFinder::score(double sum, double count) const {
  if (!params_.boosted) return sum * sum / count;
  const double g = soft_threshold(sum, params_.l1);
  return g * g / (count + params_.l2);
}

double SplitFinder::leaf_value(std::span<const std::uint32_t> rows) const {
  double sum = 0.0;
  double lo = targets_[rows[0]];
  double hi = lo;
  for (const auto r : rows) {
    sum += targets_[r];
    lo = std::min(lo, targets_[r]);
    hi = std::max(hi, targets_[r]);
  }
  const auto n = static_cast<double>(rows.size());
  if (!params_.boosted) return std::clamp(sum / n, lo, hi);
  return soft_threshold(sum, params_.l1) / (n + params_.l2);
}

std::optional<Split> SplitFinder::best(std::span<const std::uint32_t> rows, std::span<const std::size_t> features) {
  if (features.empty()) fail(ErrorKind::Argument, "split search needs at least one candidate feature");
  const std::size_t n = rows.size();
  const std::size_t min_leaf = std::max<std::size_t>(1, params_.min_samples_leaf);
  if (n < 2 || n < 2 * min_leaf) return std::nullopt;

  const double first = targets_[rows[0]];
  if (!params_.boosted &&
      std::all_of(rows.begin(), rows.end(), [&](std::uint32_t r) { return targets_[r] == first; })) {
    return std::nullopt;
  }

  // CART gains are shift-invariant, so sums run over centered targets.
  double shift = 0.0;
  if (!params_.boosted) {
    for (const auto r : rows) shift += targets_[r];
    shift /= static_cast<double>(n);
  }
  double total = 0.0;
  double sumsq = 0.0;
  for (const auto r : rows) {
    const double t = targets_[r] - shift;
    total += t;
    sumsq += t * t;
  }
  if (sumsq == 0.0) return std::nullopt;
  // Gains below this are rounding noise relative to the node's spread.
  const double floor = 1e-12 * sumsq;

  const double parent = score(total, static_cast<double>(n));
  std::optional<Split> best;
  for (const std::size_t f : features) scan_feature(rows, f, shift, parent, total, floor, best);
  return best;
}

void SplitFinder::scan_feature(std::span<const std::uint32_t> rows, std::size_t f, double shift, double parent_score,
                               double total_sum, double floor, std::optional<Split>& best) {
  const auto distinct = cols_.distinct(f);
  if (distinct.size() < 2) return;
  const auto bins = cols_.bins(f);
  const std::size_t n = rows.size();
  const std::size_t min_leaf = std::max<std::size_t>(1, params_.min_samples_leaf);
  const double half = params_.boosted ? 0.5 : 1.0;

  double left_sum = 0.0;
  std::size_t left_count = 0;
  double left_value = 0.0;
  bool have_left = false;

  auto consider = [&](double next_value) {
    const std::size_t right_count = n - left_count;
    if (left_count < min_leaf || right_count < min_leaf) return;
    double gain = half * (score(left_sum, static_cast<double>(left_count)) +
                          score(total_sum - left_sum, static_cast<double>(right_count)) - parent_score);
    if (params_.boosted) {
      if (!(gain > floor) || !(gain > 0.0) || !(gain > params_.gamma)) return;
    } else if (!(gain > floor)) {
      // CART still splits a non-constant node when no split helps (the
      // reference library does too); noise-level gains all count as zero.
      gain = 0.0;
    }
    if (!best || gain > best->gain) best = Split{f, midpoint(left_value, next_value), gain};
  };

  if (n * 8 < distinct.size()) {
    scratch_.clear();
    for (const auto r : rows) scratch_.emplace_back(bins[r], targets_[r] - shift);
    std::sort(scratch_.begin(), scratch_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < scratch_.size();) {
      const std::uint32_t bin = scratch_[i].first;
      if (have_left) consider(distinct[bin]);
      for (; i < scratch_.size() && scratch_[i].first == bin; ++i) {
        left_sum += scratch_[i].second;
        ++left_count;
      }
      left_value = distinct[bin];
      have_left = true;
    }
    return;
  }

  hist_.assign(distinct.size(), BinStat{});
  for (const auto r : rows) {
    auto& h = hist_[bins[r]];
    h.sum += targets_[r] - shift;
    ++h.count;
  }
  for (std::size_t b = 0; b < hist_.size(); ++b) {
    if (hist_[b].count == 0) continue;
    if (have_left) consider(distinct[b]);
    left_sum += hist_[b].sum;
    left_count += hist_[b].count;
    left_value = distinct[b];
    have_left = true;
  }
}

namespace {

struct Candidate {
  double gain;
  std::uint32_t node;
  std::size_t begin;
  std::size_t end;
  std::size_t depth;
  Split split;
};

struct CandidateOrder {
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.gain != b.gain) return a.gain < b.gain;
    return a.node > b.node;
  }
};

}  // namespace

TreeModel grow_tree(const BinnedColumns& cols, std::span<const double> targets, std::vector<std::uint32_t> rows,
                    const GrowParams& params, Rng* rng) {
  if (rows.empty()) fail(ErrorKind::EmptyInput, "cannot grow a tree on zero samples");
  const std::size_t m = cols.n_features();
  const std::size_t k = params.features_per_split == 0 ? m : params.features_per_split;
  if (k > m) fail(ErrorKind::Config, "features per split exceeds feature count");
  if (k < m && rng == nullptr) fail(ErrorKind::Argument, "feature subsampling needs a random stream");

  SplitFinder finder(cols, targets, params);
  std::vector<std::size_t> all_features(m);
  std::iota(all_features.begin(), all_features.end(), std::size_t{0});
  std::vector<std::size_t> pool(m);
  std::vector<std::size_t> drawn;

  auto candidates_for_node = [&]() -> std::span<const std::size_t> {
    if (k == m) return all_features;
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng->below(m - i));
      std::swap(pool[i], pool[j]);
    }
    drawn.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(drawn.begin(), drawn.end());
    return drawn;
  };

  std::vector<TreeNode> nodes;
  std::priority_queue<Candidate, std::vector<Candidate>, CandidateOrder> queue;
  const std::span<const std::uint32_t> all_rows(rows);

  auto make_leaf = [&](std::size_t begin, std::size_t end, std::size_t depth) {
    const auto id = static_cast<std::uint32_t>(nodes.size());
    const auto node_rows = all_rows.subspan(begin, end - begin);
    TreeNode node;
    node.value = finder.leaf_value(node_rows);
    nodes.push_back(node);
    if (depth < params.max_depth) {
      if (auto split = finder.best(node_rows, candidates_for_node())) {
        queue.push(Candidate{split->gain, id, begin, end, depth, *split});
      }
    }
    return id;
  };

  make_leaf(0, rows.size(), 0);
  std::size_t leaves = 1;
  while (!queue.empty() && leaves < params.max_leaves) {
    const Candidate c = queue.top();
    queue.pop();
    const auto f = c.split.feature;
    const double thr = c.split.threshold;
    const auto mid_it = std::partition(rows.begin() + static_cast<std::ptrdiff_t>(c.begin),
                                       rows.begin() + static_cast<std::ptrdiff_t>(c.end),
                                       [&](std::uint32_t r) { return cols.value(r, f) < thr; });
    const auto mid = static_cast<std::size_t>(mid_it - rows.begin());
    const auto left = make_leaf(c.begin, mid, c.depth + 1);
    const auto right = make_leaf(mid, c.end, c.depth + 1);
    auto& parent = nodes[c.node];
    parent.feature = static_cast<std::int32_t>(f);
    parent.threshold = thr;
    parent.left = left;
    parent.right = right;
    ++leaves;
  }
  return TreeModel(m, std::move(nodes));
}

}  // namespace windml::trees::detail
