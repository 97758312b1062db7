#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fsrlab/model.hpp"
#include "fsrlab/rule.hpp"

namespace fsrlab {

class UnknownFixture : public std::runtime_error {
 public:
  explicit UnknownFixture(const std::string& name);
};

// Expected verdicts are keyed by property name (Esub, ..., BoundedValence).
struct Fixture {
  std::string name;
  std::string file;  // path relative to the source tree
  std::vector<std::pair<std::string, bool>> expected;
};

const std::vector<Fixture>& fixture_table();

// Names of the rules bundled into the library, in a fixed order.
std::vector<std::string> fixture_names();
std::string_view fixture_text(std::string_view name);
FsrSpec load_fixture(std::string_view name);
RulePtr load_fixture_rule(std::string_view name);

}  // namespace fsrlab
