#pragma once

#include "proxycast/date.hpp"
#include "proxycast/ingest.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace proxycast::remote {

/// Inclusive calendar range; empty when end precedes start.
struct DateRange {
    Date start;
    Date end;
    [[nodiscard]] bool empty() const { return end < start; }
};

struct EndpointConfig {
    // Placeholders: {instrument}, {start}/{end} (ISO dates), {period1}/{period2}
    // (unix seconds, end exclusive).
    std::string url_template =
        "http://127.0.0.1:8080/v8/finance/chart/{instrument}?period1={period1}&period2={period2}&interval=1d";
    std::filesystem::path cache_dir = "proxycast_cache";
    std::chrono::seconds ttl{24 * 3600};
    std::chrono::seconds timeout{10};
    bool offline = false;
    std::function<std::int64_t()> clock;  // unix seconds; system clock when empty
};

struct FetchInfo {
    bool from_cache = false;
    bool stale = false;               // served past its TTL
    std::size_t network_requests = 0;
    std::string warning;
};

/// Substitutes the placeholders of `url_template`.
std::string expand_url(const std::string& url_template, const std::string& instrument, const DateRange& range);

/// Parses a chart-endpoint payload:
/// {"chart":{"result":[{"timestamp":[...],"indicators":{"quote":[{"open":[...],
///   "high":[...],"low":[...],"close":[...],"volume":[...]}],"adjclose":[{"adjclose":[...]}]}}]}}
/// Nulls become missing fields. Output sorted ascending, one record per date
/// (the later duplicate wins).
std::vector<OhlcvRecord> parse_chart_json(std::string_view body);

/// Response cache: objects/<content hash>.json holds raw bodies and
/// index/<key hash>.json records (instrument, range, fetch time, object).
/// Every file is written to a temp name and renamed into place.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path dir);

    struct Entry {
        std::string body;
        std::int64_t fetched_at = 0;
    };

    [[nodiscard]] std::optional<Entry> lookup(const std::string& instrument, const DateRange& range) const;
    void store(const std::string& instrument, const DateRange& range, std::string_view body, std::int64_t fetched_at);

    static std::string key(const std::string& instrument, const DateRange& range);

private:
    std::filesystem::path dir_;
};

/// Daily records for `instrument` over `range`, served from the cache within
/// TTL. A stale entry is used when offline or when the network fails. With a
/// cold cache, offline mode raises OfflineError and network failures raise
/// DataError carrying the HTTP status.
std::vector<OhlcvRecord> fetch_remote_ohlcv(const std::string& instrument, const DateRange& range,
                                            const EndpointConfig& config, FetchInfo* info = nullptr);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(std::string_view data);

}  // namespace proxycast::remote
