#include "polyguess/oeis.hpp"

#include <cstdio>

#include "polyguess/common.hpp"

#ifdef POLYGUESS_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>
#endif

namespace polyguess {

OeisResult oeis_lookup(const std::vector<Int>& values, bool enabled) {
  if (values.size() < 4) throw InputError("oeis lookup needs at least 4 values");
  if (!enabled) return {{}, "oeis disabled"};
#ifndef POLYGUESS_HAVE_OPENSSL
  return {{}, "oeis lookup unavailable (built without TLS support)"};
#else
  std::string q;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) q += ',';
    q += to_string(values[i]);
  }
  try {
    httplib::SSLClient cli("oeis.org");
    cli.set_connection_timeout(3, 0);
    cli.set_read_timeout(3, 0);
    cli.set_write_timeout(3, 0);
    auto res = cli.Get("/search?fmt=json&q=" + q);
    if (!res) return {{}, "oeis lookup failed: no response"};
    if (res->status != 200)
      return {{}, "oeis lookup failed: http " + std::to_string(res->status)};
    auto doc = nlohmann::json::parse(res->body, nullptr, false);
    if (doc.is_discarded()) return {{}, "oeis lookup failed: unparseable response"};
    const nlohmann::json* results = nullptr;
    if (doc.is_object() && doc.contains("results") && doc["results"].is_array()) {
      results = &doc["results"];
    } else if (doc.is_array()) {
      results = &doc;  // the endpoint has served both shapes over time
    }
    OeisResult out;
    if (results) {
      for (const auto& entry : *results) {
        if (!entry.is_object() || !entry.contains("number")) continue;
        char id[16];
        std::snprintf(id, sizeof id, "A%06ld", entry["number"].get<long>());
        out.matches.push_back({id, entry.value("name", std::string())});
        if (out.matches.size() >= 5) break;
      }
    }
    if (out.matches.empty()) out.diagnostic = "oeis: no matches";
    return out;
  } catch (const std::exception& e) {
    return {{}, std::string("oeis lookup failed: ") + e.what()};
  }
#endif
}

}  // namespace polyguess
