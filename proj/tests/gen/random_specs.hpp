#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace testgen {

enum class Shape { Grid, Medial, Barycentric };

struct GeneratedSpec {
  std::string text;  // .fsr source
  Shape shape = Shape::Grid;
  int width = 0;  // grid only
  int height = 0;
  std::uint64_t seed = 0;
};

// A random valid rule on the square pillowcase (w x h grid subdivision) or the
// triangular pillowcase (medial or barycentric subdivision). Face images and
// rotations are chosen by randomized backtracking so that every shared edge,
// vertex and edge word agrees; the result always passes validation.
// Returns false when the search found no assignment within its node budget.
bool generate(std::uint64_t seed, GeneratedSpec& out);

// `count` specs from consecutive seeds starting at `first_seed`, skipping
// seeds whose search fails.
std::vector<GeneratedSpec> generate_many(std::uint64_t first_seed, int count);

}  // namespace testgen
