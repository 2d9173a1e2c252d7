#include "syllagraph/linkcheck.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <thread>

#include <httplib.h>

namespace syllagraph {

std::string_view to_string(LinkOutcome outcome) {
  switch (outcome) {
    case LinkOutcome::Ok: return "ok";
    case LinkOutcome::Broken: return "broken";
    case LinkOutcome::Timeout: return "timeout";
    case LinkOutcome::InvalidUrl: return "invalid_url";
  }
  return "broken";
}

void CheckConfig::check() const {
  if (max_concurrent < 1) {
    throw std::invalid_argument("max_concurrent must be at least 1");
  }
  if (timeout_ms < 1) throw std::invalid_argument("timeout_ms must be at least 1");
  if (retries < 0) throw std::invalid_argument("retries must not be negative");
}

std::string ParsedUrl::origin() const {
  return scheme + "://" + host + ":" + std::to_string(port);
}

namespace {

bool host_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.';
}

}  // namespace

std::optional<ParsedUrl> parse_url(std::string_view url) {
  for (char c : url) {
    auto u = static_cast<unsigned char>(c);
    if (u <= 0x20 || u == 0x7F) return std::nullopt;
  }
  ParsedUrl out;
  if (url.starts_with("http://")) {
    out.scheme = "http";
    out.port = 80;
    url.remove_prefix(7);
  } else if (url.starts_with("https://")) {
    out.scheme = "https";
    out.port = 443;
    url.remove_prefix(8);
  } else {
    return std::nullopt;
  }
  auto end = url.find_first_of("/?#");
  std::string_view authority = url.substr(0, end);
  std::string_view rest = end == std::string_view::npos ? "" : url.substr(end);
  if (authority.find('@') != std::string_view::npos) return std::nullopt;

  std::string_view host = authority;
  std::string_view port;
  if (authority.starts_with("[")) {
    auto close = authority.find(']');
    if (close == std::string_view::npos) return std::nullopt;
    host = authority.substr(1, close - 1);
    auto after = authority.substr(close + 1);
    if (!after.empty()) {
      if (after.front() != ':') return std::nullopt;
      port = after.substr(1);
    }
    if (host.empty() || host.find_first_not_of("0123456789abcdefABCDEF:.") !=
                            std::string_view::npos) {
      return std::nullopt;
    }
  } else {
    auto colon = authority.rfind(':');
    if (colon != std::string_view::npos) {
      host = authority.substr(0, colon);
      port = authority.substr(colon + 1);
    }
    if (host.empty() || !std::all_of(host.begin(), host.end(), host_char) ||
        host.front() == '.' || host.front() == '-' ||
        host.find("..") != std::string_view::npos) {
      return std::nullopt;
    }
  }
  if (authority.find(':') != std::string_view::npos && !authority.starts_with("[") &&
      port.empty()) {
    return std::nullopt;
  }
  if (!port.empty()) {
    if (port.size() > 5 || !std::all_of(port.begin(), port.end(), [](char c) {
          return std::isdigit(static_cast<unsigned char>(c));
        })) {
      return std::nullopt;
    }
    out.port = std::stoi(std::string(port));
    if (out.port < 1 || out.port > 65535) return std::nullopt;
  }
  out.host = std::string(host);
  auto frag = rest.find('#');
  if (frag != std::string_view::npos) rest = rest.substr(0, frag);
  out.target = rest.empty() || rest.front() != '/' ? "/" + std::string(rest)
                                                   : std::string(rest);
  return out;
}

std::optional<ParsedUrl> resolve_redirect(const ParsedUrl& base,
                                          std::string_view location) {
  if (location.starts_with("http://") || location.starts_with("https://")) {
    return parse_url(location);
  }
  std::string host = base.host.find(':') != std::string::npos
                         ? "[" + base.host + "]"
                         : base.host;
  std::string prefix = base.scheme + "://" + host + ":" + std::to_string(base.port);
  if (location.starts_with("//")) {
    return parse_url(base.scheme + ":" + std::string(location));
  }
  if (location.starts_with("/")) return parse_url(prefix + std::string(location));
  std::string dir = base.target.substr(0, base.target.find('?'));
  dir = dir.substr(0, dir.rfind('/') + 1);
  return parse_url(prefix + dir + std::string(location));
}

namespace {

using Clock = std::chrono::steady_clock;

struct Probe {
  LinkOutcome outcome = LinkOutcome::Broken;
  std::optional<int> status;
  bool transport_failure = false;
};

std::string env(const char* name) {
  const char* v = std::getenv(name);
  return v ? v : "";
}

bool loopback(const std::string& host) {
  return host == "localhost" || host == "::1" || host.starts_with("127.");
}

bool bypass_proxy(const std::string& host) {
  if (loopback(host)) return true;
  std::string list = env("no_proxy");
  if (list.empty()) list = env("NO_PROXY");
  std::size_t start = 0;
  while (start <= list.size()) {
    auto comma = list.find(',', start);
    std::string item = list.substr(start, comma - start);
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (item == "*") return true;
    if (!item.empty()) {
      if (item.front() == '.') item.erase(0, 1);
      if (host == item ||
          (host.size() > item.size() && host.ends_with("." + item))) {
        return true;
      }
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return false;
}

void apply_proxy(httplib::Client& client, const ParsedUrl& url) {
  if (bypass_proxy(url.host)) return;
  std::string proxy = url.scheme == "https" ? env("https_proxy") : env("http_proxy");
  if (proxy.empty()) proxy = url.scheme == "https" ? env("HTTPS_PROXY") : env("HTTP_PROXY");
  if (proxy.empty()) return;
  if (proxy.find("://") == std::string::npos) proxy = "http://" + proxy;
  if (auto p = parse_url(proxy)) client.set_proxy(p->host, p->port);
}

// One HEAD (or ranged GET) exchange, no redirect handling.
Probe request_once(const ParsedUrl& url, const CheckConfig& cfg,
                   std::string& location) {
  httplib::Client client(url.origin());
  auto timeout = std::chrono::milliseconds(cfg.timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  client.set_follow_location(false);
  apply_proxy(client, url);
  httplib::Headers headers{{"User-Agent", cfg.user_agent}};

  Probe probe;
  auto started = Clock::now();
  auto finish = [&](httplib::Error err) {
    probe.transport_failure = true;
    auto elapsed = Clock::now() - started;
    probe.outcome = err == httplib::Error::ConnectionTimeout || elapsed >= timeout
                        ? LinkOutcome::Timeout
                        : LinkOutcome::Broken;
    return probe;
  };

  auto res = client.Head(url.target, headers);
  if (!res) return finish(res.error());
  int status = res->status;
  if (status == 405 || status == 501) {
    headers.emplace("Range", "bytes=0-0");
    std::optional<int> got;
    std::string loc;
    auto get = client.Get(
        url.target, headers,
        [&](const httplib::Response& r) {
          got = r.status;
          loc = r.get_header_value("Location");
          return false;  // headers are enough
        },
        [](const char*, std::size_t) { return false; });
    if (!got) return finish(get.error());
    status = *got;
    location = loc;
  } else {
    location = res->get_header_value("Location");
  }
  probe.status = status;
  probe.outcome = status >= 200 && status < 400 ? LinkOutcome::Ok
                                                : LinkOutcome::Broken;
  return probe;
}

Probe follow(ParsedUrl url, const CheckConfig& cfg) {
  constexpr int kMaxRedirects = 5;
  std::set<std::string> visited{url.origin() + url.target};
  for (int hop = 0;; ++hop) {
    std::string location;
    Probe probe = request_once(url, cfg, location);
    bool redirect = probe.status && *probe.status >= 300 &&
                    *probe.status < 400 && !location.empty();
    if (!redirect) return probe;
    if (hop == kMaxRedirects) {
      probe.outcome = LinkOutcome::Broken;  // too many hops
      return probe;
    }
    auto next = resolve_redirect(url, location);
    if (!next) {
      probe.outcome = LinkOutcome::Broken;
      return probe;
    }
    if (!visited.insert(next->origin() + next->target).second) {
      probe.outcome = LinkOutcome::Broken;  // redirect loop
      return probe;
    }
    url = std::move(*next);
  }
}

LinkEntry check_one(const LinkEntry& pending, const CheckConfig& cfg) {
  LinkEntry entry = pending;
  auto url = parse_url(entry.url);
  if (!url) {
    entry.outcome = LinkOutcome::InvalidUrl;
    return entry;
  }
  auto started = Clock::now();
  Probe probe;
  for (int attempt = 0; attempt <= cfg.retries; ++attempt) {
    probe = follow(*url, cfg);
    if (!probe.transport_failure) break;
  }
  entry.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         Clock::now() - started)
                         .count();
  entry.outcome = probe.outcome;
  entry.http_status = probe.status;
  return entry;
}

}  // namespace

LinkReport check_links(const CourseGraph& graph, const CheckConfig& config) {
  config.check();
  LinkReport report;
  for (const auto& node : graph.nodes()) {
    for (std::size_t i = 0; i < node.resources.size(); ++i) {
      LinkEntry e;
      e.node_id = node.id;
      e.resource_index = i;
      e.url = node.resources[i].url;
      report.entries.push_back(std::move(e));
    }
  }
  std::sort(report.entries.begin(), report.entries.end(),
            [](const LinkEntry& a, const LinkEntry& b) {
              return std::tie(a.node_id, a.resource_index) <
                     std::tie(b.node_id, b.resource_index);
            });

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      auto i = next.fetch_add(1);
      if (i >= report.entries.size()) return;
      report.entries[i] = check_one(report.entries[i], config);
    }
  };
  {
    auto count = std::min<std::size_t>(static_cast<std::size_t>(config.max_concurrent),
                                        report.entries.size());
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
  }

  for (const auto& e : report.entries) {
    switch (e.outcome) {
      case LinkOutcome::Ok: ++report.summary.ok; break;
      case LinkOutcome::Broken: ++report.summary.broken; break;
      case LinkOutcome::Timeout: ++report.summary.timeout; break;
      case LinkOutcome::InvalidUrl: ++report.summary.invalid_url; break;
    }
  }
  return report;
}

}  // namespace syllagraph
