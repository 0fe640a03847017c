#include "seqmine/core.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace seqmine {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::UnknownPlatform: return "UnknownPlatform";
    case ErrorKind::DuplicateStudent: return "DuplicateStudent";
    case ErrorKind::EmptySession: return "EmptySession";
    case ErrorKind::NoSessions: return "NoSessions";
    case ErrorKind::EmptySessionList: return "EmptySessionList";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::UnknownStudent: return "UnknownStudent";
    case ErrorKind::EmptyGroup: return "EmptyGroup";
    case ErrorKind::EmptyStream: return "EmptyStream";
    case ErrorKind::InvalidProfile: return "InvalidProfile";
    case ErrorKind::UnwritableOutput: return "UnwritableOutput";
    case ErrorKind::BadPattern: return "BadPattern";
    case ErrorKind::BadConfig: return "BadConfig";
    case ErrorKind::IoError: return "IoError";
  }
  return "UnknownError";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

const char* to_string(Group g) {
  return g == Group::Distinction ? "Distinction" : "NonDistinction";
}

namespace {

// Days between 1970-01-01 and y-m-d in the proleptic Gregorian calendar.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

bool is_leap(std::int64_t y) {
  return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

unsigned days_in_month(std::int64_t y, unsigned m) {
  static const unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return lengths[m - 1];
}

bool parse_fixed_uint(const char* s, int n, unsigned& out) {
  out = 0;
  for (int i = 0; i < n; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    out = out * 10 + static_cast<unsigned>(s[i] - '0');
  }
  return true;
}

}  // namespace

std::optional<EpochSeconds> parse_rfc3339(const std::string& text) {
  // Minimum form: YYYY-MM-DDTHH:MM:SS
  if (text.size() < 19) return std::nullopt;
  const char* s = text.c_str();
  unsigned year, month, day, hour, minute, second;
  if (!parse_fixed_uint(s, 4, year)) return std::nullopt;
  if (s[4] != '-') return std::nullopt;
  if (!parse_fixed_uint(s + 5, 2, month)) return std::nullopt;
  if (s[7] != '-') return std::nullopt;
  if (!parse_fixed_uint(s + 8, 2, day)) return std::nullopt;
  if (s[10] != 'T' && s[10] != 't' && s[10] != ' ') return std::nullopt;
  if (!parse_fixed_uint(s + 11, 2, hour)) return std::nullopt;
  if (s[13] != ':') return std::nullopt;
  if (!parse_fixed_uint(s + 14, 2, minute)) return std::nullopt;
  if (s[16] != ':') return std::nullopt;
  if (!parse_fixed_uint(s + 17, 2, second)) return std::nullopt;

  if (month < 1 || month > 12) return std::nullopt;
  if (day < 1 || day > days_in_month(year, month)) return std::nullopt;
  if (hour > 23 || minute > 59 || second > 59) return std::nullopt;

  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    // fractional seconds are truncated
    ++pos;
    std::size_t digits = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      ++pos;
      ++digits;
    }
    if (digits == 0) return std::nullopt;
  }

  std::int64_t offset = 0;
  if (pos == text.size()) {
    // no designator: treat as UTC
  } else if (text[pos] == 'Z' || text[pos] == 'z') {
    if (pos + 1 != text.size()) return std::nullopt;
  } else if (text[pos] == '+' || text[pos] == '-') {
    if (pos + 6 != text.size() || text[pos + 3] != ':') return std::nullopt;
    unsigned oh, om;
    if (!parse_fixed_uint(s + pos + 1, 2, oh)) return std::nullopt;
    if (!parse_fixed_uint(s + pos + 4, 2, om)) return std::nullopt;
    if (oh > 23 || om > 59) return std::nullopt;
    offset = static_cast<std::int64_t>(oh) * 3600 + om * 60;
    if (text[pos] == '-') offset = -offset;
  } else {
    return std::nullopt;
  }

  const std::int64_t days = days_from_civil(year, month, day);
  return days * 86400 + hour * 3600 + minute * 60 + second - offset;
}

std::optional<EpochSeconds> parse_epoch(const std::string& text) {
  if (text.empty()) return std::nullopt;
  EpochSeconds value = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

std::string format_rfc3339(EpochSeconds t) {
  std::int64_t days = t / 86400;
  std::int64_t rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  std::int64_t year;
  unsigned month, day;
  civil_from_days(days, year, month, day);
  const unsigned hour = static_cast<unsigned>(rem / 3600);
  const unsigned minute = static_cast<unsigned>((rem % 3600) / 60);
  const unsigned second = static_cast<unsigned>(rem % 60);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02u:%02u:%02uZ",
                static_cast<long long>(year), month, day, hour, minute, second);
  return buf;
}

void TransactionStream::rebuild_index() {
  by_student.clear();
  for (std::size_t i = 0; i < events.size(); ++i) {
    by_student[events[i].student_id].push_back(i);
  }
}

}  // namespace seqmine
