#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wifipain/matrix.hpp"

namespace wifipain {

// A set of homes, one AP each, sharing `num_channels` non-overlapping
// channels. Index i of every matrix refers to home_ids()[i].
class Neighborhood {
 public:
  Neighborhood(std::vector<std::string> home_ids, int num_channels);

  [[nodiscard]] const std::vector<std::string>& home_ids() const noexcept {
    return home_ids_;
  }
  [[nodiscard]] std::size_t size() const noexcept { return home_ids_.size(); }
  [[nodiscard]] int num_channels() const noexcept { return num_channels_; }

  /// Index of `home_id`, or size() when absent.
  [[nodiscard]] std::size_t index_of(const std::string& home_id) const;

  [[nodiscard]] Neighborhood with_channels(int num_channels) const {
    return {home_ids_, num_channels};
  }

  friend bool operator==(const Neighborhood&, const Neighborhood&) = default;

 private:
  std::vector<std::string> home_ids_;
  int num_channels_;
};

// The same square-matrix shape carries four quantities with different
// invariants. Only the co-usage matrix may have a nonzero diagonal; the
// sensing matrix is binary.
enum class MatrixRole { potential_pain, co_usage, snr, sensing };

const char* to_string(MatrixRole role) noexcept;
MatrixRole matrix_role_from_string(const std::string& name);

class PainMatrix {
 public:
  PainMatrix(Neighborhood hood, Matrix values,
             MatrixRole role = MatrixRole::potential_pain);

  [[nodiscard]] const Neighborhood& neighborhood() const noexcept {
    return hood_;
  }
  [[nodiscard]] const Matrix& values() const noexcept { return values_; }
  [[nodiscard]] MatrixRole role() const noexcept { return role_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.rows(); }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return values_(i, j);
  }
  [[nodiscard]] double max_entry() const noexcept;

 private:
  Neighborhood hood_;
  Matrix values_;
  MatrixRole role_;
};

enum class AllocationMode { hard, soft };

// n x n_c matrix of per-home channel weights. Hard allocations are one-hot
// rows; soft allocations are row-stochastic.
class ChannelAllocation {
 public:
  ChannelAllocation(Matrix values, AllocationMode mode);

  static ChannelAllocation from_channels(const std::vector<int>& channel_of_home,
                                         int num_channels);

  [[nodiscard]] const Matrix& values() const noexcept { return values_; }
  [[nodiscard]] AllocationMode mode() const noexcept { return mode_; }
  [[nodiscard]] std::size_t homes() const noexcept { return values_.rows(); }
  [[nodiscard]] std::size_t channels() const noexcept { return values_.cols(); }
  double operator()(std::size_t i, std::size_t c) const noexcept {
    return values_(i, c);
  }

  /// Channel index of each home. Requires a hard allocation.
  [[nodiscard]] std::vector<int> channel_of_home() const;

  friend bool operator==(const ChannelAllocation&,
                         const ChannelAllocation&) = default;

 private:
  Matrix values_;
  AllocationMode mode_;
};

struct PainBreakdown {
  std::vector<double> per_home;
  double total = 0.0;
};

/// Tr(C^T P C) for hard or soft C. Invariant to channel relabeling bit for
/// bit: per pair the channel overlaps are summed in sorted order.
double total_pain(const PainMatrix& p, const ChannelAllocation& c);

PainBreakdown per_home_pain(const PainMatrix& p, const ChannelAllocation& c);

/// Row argmax to one-hot, ties to the lowest channel index.
ChannelAllocation harden(const ChannelAllocation& soft);

}  // namespace wifipain
