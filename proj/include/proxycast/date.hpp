#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace proxycast {

// Calendar day, timezone-free.
using Date = std::chrono::year_month_day;

// Parses YYYY-MM-DD. Throws DataError on anything else.
Date parse_iso_date(std::string_view text);
std::string format_iso_date(const Date& date);

// 0 = Sunday ... 6 = Saturday.
unsigned weekday_index(const Date& date);
bool is_weekend(const Date& date);

Date add_days(const Date& date, int days);
int year_of(const Date& date);

// Days since 1970-01-01.
long long epoch_days(const Date& date);
Date from_epoch_days(long long days);

}  // namespace proxycast
