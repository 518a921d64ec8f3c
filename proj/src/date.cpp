#include "proxycast/date.hpp"

#include "proxycast/error.hpp"

#include <charconv>
#include <cstdio>

namespace proxycast {

namespace {

bool parse_int(std::string_view text, int& out) {
    if (text.empty()) return false;
    for (char c : text) {
        if (c < '0' || c > '9') return false;
    }
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

Date parse_iso_date(std::string_view text) {
    int y = 0;
    int m = 0;
    int d = 0;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !parse_int(text.substr(0, 4), y) ||
        !parse_int(text.substr(5, 2), m) || !parse_int(text.substr(8, 2), d)) {
        throw DataError("invalid ISO-8601 date '" + std::string(text) + "'");
    }
    Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
              std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok()) throw DataError("invalid calendar date '" + std::string(text) + "'");
    return date;
}

std::string format_iso_date(const Date& date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

unsigned weekday_index(const Date& date) {
    return std::chrono::weekday{std::chrono::sys_days{date}}.c_encoding();
}

bool is_weekend(const Date& date) {
    const unsigned wd = weekday_index(date);
    return wd == 0 || wd == 6;
}

Date add_days(const Date& date, int days) {
    return Date{std::chrono::sys_days{date} + std::chrono::days{days}};
}

int year_of(const Date& date) { return static_cast<int>(date.year()); }

long long epoch_days(const Date& date) {
    return std::chrono::sys_days{date}.time_since_epoch().count();
}

Date from_epoch_days(long long days) {
    return Date{std::chrono::sys_days{std::chrono::days{days}}};
}

}  // namespace proxycast
