#include "fsrlab/fixtures.hpp"

#include "fsrlab/format.hpp"

namespace fsrlab {
namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& bundled_fixtures();
}

namespace {

std::string available() {
  std::string out;
  for (const auto& [name, text] : detail::bundled_fixtures()) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

}  // namespace

const std::vector<Fixture>& fixture_table() {
  // Hand-derived from the level-1 subdivisions; the test suite replays each
  // entry against fresh analyzer output.
  static const std::vector<Fixture> table = [] {
    auto all = [](bool sep, bool valence) {
      return std::vector<std::pair<std::string, bool>>{{"Esub", sep},   {"Esep", sep},    {"Vsep", sep},
                                                       {"VEsep", sep},  {"M0comb", sep},  {"CombExp", sep},
                                                       {"BoundedValence", valence}};
    };
    std::vector<Fixture> t;
    t.push_back({"pillow2", "fixtures/pillow2.fsr", all(true, true)});
    t.push_back({"columns2", "fixtures/columns2.fsr", all(false, true)});
    t.push_back({"barycentric", "fixtures/barycentric.fsr", all(true, false)});
    t.push_back({"triangles3", "fixtures/triangles3.fsr", all(true, true)});
    return t;
  }();
  return table;
}

UnknownFixture::UnknownFixture(const std::string& name)
    : std::runtime_error("unknown fixture '" + name + "' (available: " + available() + ")") {}

std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (const auto& [name, text] : detail::bundled_fixtures()) out.emplace_back(name);
  return out;
}

std::string_view fixture_text(std::string_view name) {
  for (const auto& [n, text] : detail::bundled_fixtures()) {
    if (n == name) return text;
  }
  throw UnknownFixture(std::string(name));
}

FsrSpec load_fixture(std::string_view name) {
  FsrSpec spec = parse_fsr(fixture_text(name));
  ValidationReport report = validate_fsr(spec);
  if (!report.ok) throw InvalidSpec(std::move(report));
  return spec;
}

RulePtr load_fixture_rule(std::string_view name) { return Rule::compile(parse_fsr(fixture_text(name))); }

}  // namespace fsrlab
