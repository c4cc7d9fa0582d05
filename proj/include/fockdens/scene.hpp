#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "fockdens/hypersurface.hpp"
#include "fockdens/sequences.hpp"
#include "fockdens/weights.hpp"

namespace fockdens {

struct SceneDefaults {
  int budget = 20000;
  std::uint64_t seed = 42;
};

/// Everything a CLI run analyses. Complex numbers are [re, im] pairs and
/// polynomial terms are [[α_1, ..., α_n], re, im].
///
///   {
///     "dimension": 2,
///     "weight": {"kind": "quadratic", "Q": [[[2,0],[1,0]], [[1,0],[1,0]]],
///                "h": [[[1,0], 0.5, 0]]},
///     "hypersurface": {"terms": [[[0,1], 1, 0]]} | {"factors": [[terms...], ...]},
///     "sequences": {"gamma": [[0,0], [1,0]]},
///     "product_sequence": {"gamma": [[0,0]], "lambdas": [[[0,0], [0,2]]]},
///     "defaults": {"budget": 20000, "seed": 42}
///   }
struct Scene {
  int dimension = 0;
  Weight weight = Weight::euclidean(1);
  std::optional<Hypersurface> hypersurface;
  std::map<std::string, Sequence1D> sequences;
  std::optional<ProductSequence> product_sequence;
  SceneDefaults defaults;
};

Scene parse_scene(const std::string& path);
Scene parse_scene_json(const nlohmann::json& j);
nlohmann::json scene_to_json(const Scene& s);

/// One complex number per line as "re im"; blank lines and '#' comments skipped.
Sequence1D read_sequence_file(const std::string& path);
/// Sectioned file: a "[gamma]" block, then one "[lambda]" block per gamma point.
ProductSequence read_product_sequence_file(const std::string& path);
/// One point per line, 2n reals: re_1 im_1 ... re_n im_n.
std::vector<cvec> read_points_file(const std::string& path, int n);

}  // namespace fockdens
