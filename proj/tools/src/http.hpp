#pragma once

// cpp-httplib transport for the elicitation router.

#include <string>

#include "httplib.h"
#include "unanimity/elicit.hpp"

namespace unanimity::tools {

elicit::Request to_request(const httplib::Request& req);

/// Sends /sessions and /admin requests to `router`. When `static_dir` is
/// non-empty its files are served from "/".
void mount(httplib::Server& server, const elicit::Router& router, const std::string& static_dir = {});

}  // namespace unanimity::tools
