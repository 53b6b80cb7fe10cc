#include "http.hpp"

#include <algorithm>
#include <cctype>

#include "unanimity/errors.hpp"

namespace unanimity::tools {

elicit::Request to_request(const httplib::Request& req) {
  elicit::Request out;
  out.method = req.method;
  out.path = req.path;
  out.body = req.body;
  for (const auto& [name, value] : req.headers) {
    std::string key = name;
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char ch) { return std::tolower(ch); });
    out.headers.emplace(std::move(key), value);
  }
  for (const auto& [name, value] : req.params) out.query.emplace(name, value);
  return out;
}

void mount(httplib::Server& server, const elicit::Router& router, const std::string& static_dir) {
  const auto handler = [&router](const httplib::Request& req, httplib::Response& res) {
    const auto r = router.handle(to_request(req));
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  const std::string api = R"(/(sessions|admin)(/.*)?)";
  server.Get(api, handler);
  server.Post(api, handler);
  server.Put(api, handler);
  server.Delete(api, handler);
  server.Patch(api, handler);
  if (!static_dir.empty()) {
    require(server.set_mount_point("/", static_dir), ErrorCode::kInvalidArgument,
            "cannot serve static files from '" + static_dir + "'");
  }
}

}  // namespace unanimity::tools
