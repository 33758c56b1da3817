/* Copyright 2026 The fokusz Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// fokusz_stub: local chat-completions stand-in for trying `fokusz run`
// without network access. Every request body is answered with a fixed reply;
// failures can be injected per identical body.

#include <iostream>

#include "CLI11.hpp"
#include "fokusz/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Chat-completions stub server"};
  fokusz::runner::StubOptions opt;
  int fail_first = 0;
  int fail_status = 429;
  app.add_option("--host", opt.host, "Bind address")->capture_default_str();
  app.add_option("--port", opt.port, "Port (0 picks a free one)")->capture_default_str();
  app.add_option("--path", opt.path, "Route")->capture_default_str();
  app.add_option("--key", opt.expected_key, "Require this bearer token");
  app.add_option("--reply", opt.reply, "Assistant message returned on success")
      ->capture_default_str();
  app.add_option("--fail-first", fail_first, "Fail the first N arrivals of each distinct body")
      ->capture_default_str();
  app.add_option("--fail-status", fail_status, "Status used for injected failures")
      ->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  if (fail_first > 0) {
    opt.plan = [fail_first, fail_status](const nlohmann::json&, int arrival) {
      return arrival <= fail_first ? fail_status : 200;
    };
  }
  fokusz::runner::StubServer server(opt);
  try {
    server.start();
  } catch (const std::exception& e) {
    std::cerr << "fokusz_stub: " << e.what() << "\n";
    return 1;
  }
  std::cout << server.url() << std::endl;
  server.serve_forever();
  return 0;
}
