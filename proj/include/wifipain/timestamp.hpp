#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace wifipain {

// An RFC 3339 instant that remembers the UTC offset it was written with.
// "Local" time means the wall clock in that offset.
class Timestamp {
 public:
  using Millis = std::chrono::sys_time<std::chrono::milliseconds>;

  Timestamp() = default;
  Timestamp(Millis utc, int utc_offset_minutes);

  /// Accepts YYYY-MM-DDTHH:MM:SS[.fff](Z|+HH:MM|-HH:MM); 'T' may be a space.
  static Timestamp parse(std::string_view text);
  /// Local wall-clock fields plus offset, e.g. 2021-08-24T19:15:00-04:00.
  static Timestamp from_local(std::chrono::sys_days local_day, int hour,
                              int minute, int utc_offset_minutes);

  [[nodiscard]] Millis utc() const noexcept { return utc_; }
  [[nodiscard]] int utc_offset_minutes() const noexcept { return offset_min_; }
  [[nodiscard]] std::chrono::sys_days local_day() const noexcept;
  [[nodiscard]] int local_hour() const noexcept;

  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const Timestamp& a, const Timestamp& b) noexcept {
    return a.utc_ == b.utc_;
  }
  friend auto operator<=>(const Timestamp& a, const Timestamp& b) noexcept {
    return a.utc_ <=> b.utc_;
  }

 private:
  [[nodiscard]] Millis local_clock() const noexcept {
    return utc_ + std::chrono::minutes(offset_min_);
  }

  Millis utc_{};
  int offset_min_ = 0;
};

/// YYYY-MM-DD
std::chrono::sys_days parse_date(std::string_view text);
std::string format_date(std::chrono::sys_days day);

}  // namespace wifipain
