#include "wifipain/pain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "wifipain/error.hpp"

namespace wifipain {

namespace {

constexpr double kRowSumTolerance = 1e-9;

std::string dims(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

void check_compatible(const PainMatrix& p, const ChannelAllocation& c) {
  if (p.size() != c.homes()) {
    throw DimensionError("pain matrix is " + dims(p.size(), p.size()) +
                         " but allocation is " +
                         dims(c.homes(), c.channels()));
  }
}

// Sum_c C_ic C_jc with the products added in ascending order.
double channel_overlap(const ChannelAllocation& c, std::size_t i,
                       std::size_t j, std::vector<double>& scratch) {
  const std::size_t k = c.channels();
  scratch.resize(k);
  for (std::size_t ch = 0; ch < k; ++ch) scratch[ch] = c(i, ch) * c(j, ch);
  std::sort(scratch.begin(), scratch.end());
  double s = 0.0;
  for (double v : scratch) s += v;
  return s;
}

}  // namespace

Neighborhood::Neighborhood(std::vector<std::string> home_ids, int num_channels)
    : home_ids_(std::move(home_ids)), num_channels_(num_channels) {
  if (home_ids_.empty()) throw DataError("neighborhood needs at least one home");
  if (num_channels_ < 2) {
    throw DataError("neighborhood needs at least 2 channels, got " +
                    std::to_string(num_channels_));
  }
  std::set<std::string> seen;
  for (const auto& id : home_ids_) {
    if (!seen.insert(id).second) throw DataError("duplicate home id '" + id + "'");
  }
}

std::size_t Neighborhood::index_of(const std::string& home_id) const {
  auto it = std::find(home_ids_.begin(), home_ids_.end(), home_id);
  return static_cast<std::size_t>(it - home_ids_.begin());
}

const char* to_string(MatrixRole role) noexcept {
  switch (role) {
    case MatrixRole::potential_pain: return "P";
    case MatrixRole::co_usage: return "U";
    case MatrixRole::snr: return "S";
    case MatrixRole::sensing: return "Sb";
  }
  return "?";
}

MatrixRole matrix_role_from_string(const std::string& name) {
  if (name == "P") return MatrixRole::potential_pain;
  if (name == "U") return MatrixRole::co_usage;
  if (name == "S") return MatrixRole::snr;
  if (name == "Sb") return MatrixRole::sensing;
  throw DataError("unknown matrix role '" + name + "'");
}

PainMatrix::PainMatrix(Neighborhood hood, Matrix values, MatrixRole role)
    : hood_(std::move(hood)), values_(std::move(values)), role_(role) {
  const std::size_t n = hood_.size();
  if (values_.rows() != n || values_.cols() != n) {
    throw DimensionError("matrix is " + dims(values_.rows(), values_.cols()) +
                         " but neighborhood has " + std::to_string(n) +
                         " homes");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = values_(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        throw DataError(std::string(to_string(role_)) + "[" +
                        std::to_string(i) + "][" + std::to_string(j) +
                        "] must be finite and nonnegative");
      }
      if (role_ == MatrixRole::sensing && v != 0.0 && v != 1.0) {
        throw DataError("sensing matrix entries must be 0 or 1");
      }
    }
    if (role_ != MatrixRole::co_usage && values_(i, i) != 0.0) {
      throw DataError(std::string(to_string(role_)) + " diagonal entry " +
                      std::to_string(i) + " must be 0");
    }
  }
}

double PainMatrix::max_entry() const noexcept {
  auto d = values_.data();
  return d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
}

ChannelAllocation::ChannelAllocation(Matrix values, AllocationMode mode)
    : values_(std::move(values)), mode_(mode) {
  if (values_.rows() == 0) throw DataError("allocation has no homes");
  if (values_.cols() < 2) throw DataError("allocation needs at least 2 channels");
  for (std::size_t i = 0; i < values_.rows(); ++i) {
    auto r = values_.row(i);
    for (double v : r) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw DataError("allocation row " + std::to_string(i) +
                        " has an entry outside [0,1]");
      }
    }
    if (mode_ == AllocationMode::hard) {
      const auto ones = std::count(r.begin(), r.end(), 1.0);
      const auto zeros = std::count(r.begin(), r.end(), 0.0);
      if (ones != 1 || zeros + ones != static_cast<long>(r.size())) {
        throw DataError("hard allocation row " + std::to_string(i) +
                        " is not one-hot");
      }
    } else {
      const double s = std::accumulate(r.begin(), r.end(), 0.0);
      if (std::abs(s - 1.0) > kRowSumTolerance) {
        throw DataError("soft allocation row " + std::to_string(i) +
                        " sums to " + std::to_string(s));
      }
    }
  }
}

ChannelAllocation ChannelAllocation::from_channels(
    const std::vector<int>& channel_of_home, int num_channels) {
  Matrix m(channel_of_home.size(), static_cast<std::size_t>(num_channels));
  for (std::size_t i = 0; i < channel_of_home.size(); ++i) {
    const int ch = channel_of_home[i];
    if (ch < 0 || ch >= num_channels) {
      throw DataError("home " + std::to_string(i) + " assigned channel " +
                      std::to_string(ch) + " outside [0," +
                      std::to_string(num_channels) + ")");
    }
    m(i, static_cast<std::size_t>(ch)) = 1.0;
  }
  return {std::move(m), AllocationMode::hard};
}

std::vector<int> ChannelAllocation::channel_of_home() const {
  if (mode_ != AllocationMode::hard) {
    throw DataError("channel_of_home requires a hard allocation");
  }
  std::vector<int> out(homes());
  for (std::size_t i = 0; i < homes(); ++i) {
    auto r = values_.row(i);
    out[i] = static_cast<int>(std::find(r.begin(), r.end(), 1.0) - r.begin());
  }
  return out;
}

PainBreakdown per_home_pain(const PainMatrix& p, const ChannelAllocation& c) {
  check_compatible(p, c);
  const std::size_t n = p.size();
  PainBreakdown out;
  out.per_home.assign(n, 0.0);
  std::vector<double> scratch;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (p(i, j) == 0.0) continue;
      row += p(i, j) * channel_overlap(c, i, j, scratch);
    }
    out.per_home[i] = row;
    out.total += row;
  }
  return out;
}

double total_pain(const PainMatrix& p, const ChannelAllocation& c) {
  return per_home_pain(p, c).total;
}

ChannelAllocation harden(const ChannelAllocation& soft) {
  const std::size_t n = soft.homes();
  std::vector<int> channel(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = soft.values().row(i);
    // max_element returns the first maximum, giving lowest-index ties.
    channel[i] = static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
  }
  return ChannelAllocation::from_channels(channel,
                                          static_cast<int>(soft.channels()));
}

}  // namespace wifipain
