#include "proxycast/remote.hpp"

#include "proxycast/csv.hpp"
#include "proxycast/error.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "httplib.h"
#include "json.hpp"

namespace proxycast::remote {

using nlohmann::json;

namespace {

std::string url_encode(std::string_view text) {
    std::string out;
    for (unsigned char c : text) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            char buf[4];
            std::snprintf(buf, sizeof buf, "%%%02X", c);
            out += buf;
        }
    }
    return out;
}

void replace_all(std::string& s, std::string_view from, const std::string& to) {
    for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
        s.replace(pos, from.size(), to);
    }
}

std::int64_t now_seconds(const EndpointConfig& config) {
    if (config.clock) return config.clock();
    return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
        .count();
}

std::optional<std::string> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct HttpResult {
    int status = 0;  // 0 when no response arrived
    std::string body;
    std::string error;
};

HttpResult http_get(const std::string& url, std::chrono::seconds timeout) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) return {0, {}, "URL has no scheme: " + url};
    const auto path_start = url.find('/', scheme_end + 3);
    const std::string origin = path_start == std::string::npos ? url : url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(origin);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_follow_location(true);
    auto res = client.Get(path);
    if (!res) return {0, {}, httplib::to_string(res.error())};
    return {res->status, res->body, {}};
}

std::optional<double> number_at(const json& array, std::size_t i, const char* field) {
    if (i >= array.size()) throw DataError(std::string("chart payload: field '") + field + "' is too short");
    const auto& v = array[i];
    if (v.is_null()) return std::nullopt;
    if (!v.is_number()) {
        throw DataError(std::string("chart payload: field '") + field + "' has a non-numeric entry at index " +
                        std::to_string(i));
    }
    return v.get<double>();
}

}  // namespace

std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string expand_url(const std::string& url_template, const std::string& instrument, const DateRange& range) {
    std::string url = url_template;
    replace_all(url, "{instrument}", url_encode(instrument));
    replace_all(url, "{start}", format_iso_date(range.start));
    replace_all(url, "{end}", format_iso_date(range.end));
    replace_all(url, "{period1}", std::to_string(epoch_days(range.start) * 86400));
    replace_all(url, "{period2}", std::to_string((epoch_days(range.end) + 1) * 86400));
    return url;
}

std::vector<OhlcvRecord> parse_chart_json(std::string_view body) {
    json doc;
    try {
        doc = json::parse(body);
    } catch (const json::exception& e) {
        throw DataError(std::string("chart payload is not JSON: ") + e.what());
    }
    auto require = [](const json& node, const char* key, const char* where) -> const json& {
        if (!node.is_object() || !node.contains(key)) {
            throw DataError(std::string("chart payload: missing field '") + where + "'");
        }
        return node.at(key);
    };
    const auto& chart = require(doc, "chart", "chart");
    const auto& results = require(chart, "result", "chart.result");
    if (!results.is_array() || results.empty()) throw DataError("chart payload: field 'chart.result' is empty");
    const auto& result = results.at(0);
    if (!result.contains("timestamp")) return {};  // no rows in range
    const auto& timestamps = result.at("timestamp");
    if (!timestamps.is_array()) throw DataError("chart payload: field 'timestamp' is not an array");
    const auto& indicators = require(result, "indicators", "indicators");
    const auto& quotes = require(indicators, "quote", "indicators.quote");
    if (!quotes.is_array() || quotes.empty()) throw DataError("chart payload: field 'indicators.quote' is empty");
    const auto& quote = quotes.at(0);
    const json empty = json::array();
    const json* adj = &empty;
    if (indicators.contains("adjclose") && indicators.at("adjclose").is_array() &&
        !indicators.at("adjclose").empty()) {
        adj = &indicators.at("adjclose").at(0).at("adjclose");
    }
    auto column = [&](const char* key) -> const json& {
        const auto& c = require(quote, key, key);
        if (!c.is_array()) throw DataError(std::string("chart payload: field '") + key + "' is not an array");
        return c;
    };
    const auto& open = column("open");
    const auto& high = column("high");
    const auto& low = column("low");
    const auto& close = column("close");
    const auto& volume = column("volume");

    std::vector<OhlcvRecord> records;
    for (std::size_t i = 0; i < timestamps.size(); ++i) {
        if (!timestamps[i].is_number_integer()) {
            throw DataError("chart payload: field 'timestamp' has a non-integer entry at index " + std::to_string(i));
        }
        const auto ts = timestamps[i].get<std::int64_t>();
        // floor division so pre-1970 timestamps land on the right day
        const std::int64_t day = ts >= 0 ? ts / 86400 : -((-ts + 86399) / 86400);
        OhlcvRecord r;
        r.date = from_epoch_days(day);
        r.open = number_at(open, i, "open");
        r.high = number_at(high, i, "high");
        r.low = number_at(low, i, "low");
        r.close = number_at(close, i, "close");
        r.volume = number_at(volume, i, "volume");
        r.adj_close = adj->empty() ? r.close : number_at(*adj, i, "adjclose");
        validate(r);
        records.push_back(r);
    }
    std::stable_sort(records.begin(), records.end(),
                     [](const OhlcvRecord& a, const OhlcvRecord& b) { return a.date < b.date; });
    std::vector<OhlcvRecord> unique;
    for (const auto& r : records) {
        if (!unique.empty() && unique.back().date == r.date) {
            unique.back() = r;
        } else {
            unique.push_back(r);
        }
    }
    return unique;
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::string ResponseCache::key(const std::string& instrument, const DateRange& range) {
    return instrument + "|" + format_iso_date(range.start) + "|" + format_iso_date(range.end);
}

std::optional<ResponseCache::Entry> ResponseCache::lookup(const std::string& instrument,
                                                          const DateRange& range) const {
    const auto meta_text = read_file(dir_ / "index" / (fnv1a_hex(key(instrument, range)) + ".json"));
    if (!meta_text) return std::nullopt;
    try {
        const auto meta = json::parse(*meta_text);
        if (meta.at("key").get<std::string>() != key(instrument, range)) return std::nullopt;
        auto body = read_file(dir_ / "objects" / meta.at("object").get<std::string>());
        if (!body || fnv1a_hex(*body) + ".json" != meta.at("object").get<std::string>()) return std::nullopt;
        return Entry{std::move(*body), meta.at("fetched_at").get<std::int64_t>()};
    } catch (const json::exception&) {
        return std::nullopt;  // unreadable index entry counts as a miss
    }
}

void ResponseCache::store(const std::string& instrument, const DateRange& range, std::string_view body,
                          std::int64_t fetched_at) {
    std::filesystem::create_directories(dir_ / "objects");
    std::filesystem::create_directories(dir_ / "index");
    const std::string object = fnv1a_hex(body) + ".json";
    csv::write_atomic(dir_ / "objects" / object, body);
    json meta;
    meta["key"] = key(instrument, range);
    meta["instrument"] = instrument;
    meta["start"] = format_iso_date(range.start);
    meta["end"] = format_iso_date(range.end);
    meta["fetched_at"] = fetched_at;
    meta["object"] = object;
    csv::write_atomic(dir_ / "index" / (fnv1a_hex(key(instrument, range)) + ".json"), meta.dump(1) + "\n");
}

std::vector<OhlcvRecord> fetch_remote_ohlcv(const std::string& instrument, const DateRange& range,
                                            const EndpointConfig& config, FetchInfo* info) {
    FetchInfo local;
    FetchInfo& out = info ? *info : local;
    out = {};
    if (range.empty()) return {};

    ResponseCache cache(config.cache_dir);
    const auto cached = cache.lookup(instrument, range);
    const std::int64_t now = now_seconds(config);
    const std::string what = instrument + " " + format_iso_date(range.start) + ".." + format_iso_date(range.end);

    if (cached && now - cached->fetched_at < config.ttl.count()) {
        out.from_cache = true;
        return parse_chart_json(cached->body);
    }
    if (config.offline) {
        if (!cached) throw OfflineError("offline mode forbids fetching " + what + " and the cache has no copy");
        out.from_cache = true;
        out.stale = true;
        out.warning = "serving stale cached response for " + what + " (offline)";
        return parse_chart_json(cached->body);
    }

    const std::string url = expand_url(config.url_template, instrument, range);
    ++out.network_requests;
    const auto response = http_get(url, config.timeout);
    if (response.status != 200) {
        const std::string reason = response.status == 0 ? response.error : "HTTP status " + std::to_string(response.status);
        if (cached) {
            out.from_cache = true;
            out.stale = true;
            out.warning = "fetch of " + what + " failed (" + reason + "); serving stale cached response";
            return parse_chart_json(cached->body);
        }
        throw DataError("fetch of " + what + " from " + url + " failed: " + reason);
    }
    auto records = parse_chart_json(response.body);
    cache.store(instrument, range, response.body, now);
    return records;
}

}  // namespace proxycast::remote
