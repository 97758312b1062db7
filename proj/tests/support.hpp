#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "fsrlab/fixtures.hpp"
#include "fsrlab/format.hpp"
#include "fsrlab/rule.hpp"

namespace testing {

inline std::string read_data(const std::string& name) {
  std::ifstream in(std::string(FSRLAB_TEST_DATA) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline fsrlab::RulePtr data_rule(const std::string& name) {
  return fsrlab::Rule::compile(fsrlab::parse_fsr(read_data(name)));
}

}  // namespace testing
