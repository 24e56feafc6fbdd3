#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "svsp/dsl.hpp"

namespace svsp::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(SVSP_FIXTURE_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string read_fixture(const std::string& name) { return read_file(fixture_path(name)); }

inline Specification parse_or_throw(std::string_view text) {
  auto out = parse_spec(text);
  if (!out.ok()) {
    std::string msg = "parse failed:";
    for (const auto& d : out.errors) msg += "\n  " + format_diagnostic_line(d);
    throw std::runtime_error(msg);
  }
  return std::move(*out.spec);
}

inline Specification mini_gks() { return parse_or_throw(read_fixture("mini_gks.svsp")); }

}  // namespace svsp::testing
