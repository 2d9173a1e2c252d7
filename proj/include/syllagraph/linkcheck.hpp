#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "syllagraph/model.hpp"

namespace syllagraph {

enum class LinkOutcome { Ok, Broken, Timeout, InvalidUrl };

std::string_view to_string(LinkOutcome outcome);

struct LinkEntry {
  NodeId node_id;
  std::size_t resource_index = 0;
  std::string url;
  LinkOutcome outcome = LinkOutcome::Ok;
  std::optional<int> http_status;
  long long latency_ms = 0;
};

struct LinkSummary {
  std::size_t ok = 0;
  std::size_t broken = 0;
  std::size_t timeout = 0;
  std::size_t invalid_url = 0;

  friend bool operator==(const LinkSummary&, const LinkSummary&) = default;
};

struct LinkReport {
  std::vector<LinkEntry> entries;  // ordered by (node id, resource index)
  LinkSummary summary;
};

struct CheckConfig {
  int max_concurrent = 8;
  int timeout_ms = 10000;
  int retries = 1;
  std::string user_agent = "syllagraph-linkcheck/1";

  /// Throws std::invalid_argument on max_concurrent < 1, timeout_ms < 1 or
  /// retries < 0.
  void check() const;
};

struct ParsedUrl {
  std::string scheme;  // "http" or "https"
  std::string host;
  int port = 0;
  std::string target;  // path + query, never empty

  std::string origin() const;
};

/// Strict absolute-URL parser used to classify `invalid_url` before any
/// request is made.
std::optional<ParsedUrl> parse_url(std::string_view url);

/// Resolves a Location header against the URL that produced it.
std::optional<ParsedUrl> resolve_redirect(const ParsedUrl& base,
                                          std::string_view location);

/// Probes every resource URL with HEAD, falling back to a ranged GET when
/// HEAD is refused (405/501). Follows up to five redirects. Never more than
/// `max_concurrent` requests are in flight; the call blocks until every
/// entry has an outcome.
LinkReport check_links(const CourseGraph& graph, const CheckConfig& config = {});

}  // namespace syllagraph
