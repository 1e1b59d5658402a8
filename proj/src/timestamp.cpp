#include "wifipain/timestamp.hpp"

#include <charconv>
#include <cstdio>

#include "wifipain/error.hpp"

namespace wifipain {

namespace {

using namespace std::chrono;

class Cursor {
 public:
  explicit Cursor(std::string_view s, std::string_view whole)
      : s_(s), whole_(whole) {}

  int digits(std::size_t count) {
    if (s_.size() < count) fail();
    for (std::size_t k = 0; k < count; ++k) {
      if (s_[k] < '0' || s_[k] > '9') fail();
    }
    int value = 0;
    auto [ptr, ec] = std::from_chars(s_.data(), s_.data() + count, value);
    if (ec != std::errc{} || ptr != s_.data() + count) fail();
    s_.remove_prefix(count);
    return value;
  }

  void expect(char c) {
    if (s_.empty() || s_.front() != c) fail();
    s_.remove_prefix(1);
  }

  bool accept(char c) {
    if (!s_.empty() && s_.front() == c) {
      s_.remove_prefix(1);
      return true;
    }
    return false;
  }

  [[nodiscard]] bool done() const { return s_.empty(); }
  [[nodiscard]] char peek() const { return s_.empty() ? '\0' : s_.front(); }

  [[noreturn]] void fail() const {
    throw DataError("invalid timestamp '" + std::string(whole_) + "'");
  }

 private:
  std::string_view s_;
  std::string_view whole_;
};

sys_days read_date(Cursor& in) {
  const int y = in.digits(4);
  in.expect('-');
  const int m = in.digits(2);
  in.expect('-');
  const int d = in.digits(2);
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) in.fail();
  return sys_days{ymd};
}

}  // namespace

Timestamp::Timestamp(Millis utc, int utc_offset_minutes)
    : utc_(utc), offset_min_(utc_offset_minutes) {}

Timestamp Timestamp::parse(std::string_view text) {
  Cursor in(text, text);
  const sys_days date = read_date(in);
  if (!in.accept('T') && !in.accept('t')) in.expect(' ');
  const int hh = in.digits(2);
  in.expect(':');
  const int mm = in.digits(2);
  in.expect(':');
  const int ss = in.digits(2);
  if (hh > 23 || mm > 59 || ss > 59) in.fail();
  int millis = 0;
  if (in.accept('.')) {
    int scale = 100;
    bool any = false;
    while (in.peek() >= '0' && in.peek() <= '9') {
      millis += scale * in.digits(1);
      scale /= 10;
      any = true;
    }
    if (!any) in.fail();
  }
  int offset = 0;
  if (!in.accept('Z') && !in.accept('z')) {
    int sign = 1;
    if (in.accept('-')) {
      sign = -1;
    } else {
      in.expect('+');
    }
    const int oh = in.digits(2);
    in.expect(':');
    const int om = in.digits(2);
    if (oh > 23 || om > 59) in.fail();
    offset = sign * (oh * 60 + om);
  }
  if (!in.done()) in.fail();
  const Millis local = date + hours(hh) + minutes(mm) + seconds(ss) +
                       milliseconds(millis);
  return {local - minutes(offset), offset};
}

Timestamp Timestamp::from_local(sys_days local_day, int hour, int minute,
                                int utc_offset_minutes) {
  const Millis local = local_day + hours(hour) + minutes(minute);
  return {local - minutes(utc_offset_minutes), utc_offset_minutes};
}

sys_days Timestamp::local_day() const noexcept {
  return floor<days>(local_clock());
}

int Timestamp::local_hour() const noexcept {
  const auto since_midnight = local_clock() - local_day();
  return static_cast<int>(duration_cast<hours>(since_midnight).count());
}

std::string Timestamp::to_string() const {
  const Millis local = local_clock();
  const sys_days day = floor<days>(local);
  const hh_mm_ss tod{local - day};
  const year_month_day ymd{day};
  const int off = offset_min_ < 0 ? -offset_min_ : offset_min_;
  char buf[48];
  const auto ms = tod.subseconds().count();
  char frac[8] = "";
  if (ms != 0) std::snprintf(frac, sizeof frac, ".%03d", static_cast<int>(ms));
  char zone[16] = "Z";
  if (offset_min_ != 0) {
    std::snprintf(zone, sizeof zone, "%c%02d:%02d", offset_min_ < 0 ? '-' : '+',
                  off / 60, off % 60);
  }
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d%s%s",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<int>(tod.hours().count()),
                static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()), frac, zone);
  return buf;
}

sys_days parse_date(std::string_view text) {
  Cursor in(text, text);
  const sys_days d = read_date(in);
  if (!in.done()) throw DataError("invalid date '" + std::string(text) + "'");
  return d;
}

std::string format_date(sys_days d) {
  const year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

}  // namespace wifipain
