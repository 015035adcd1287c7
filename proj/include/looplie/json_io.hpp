#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "looplie/chen.hpp"
#include "looplie/dgla.hpp"
#include "looplie/goldman.hpp"
#include "looplie/surface.hpp"

namespace looplie::io {

using Json = nlohmann::ordered_json;

/// Rounds to 12 significant digits so dumps are stable and diffable.
double round12(double v);
/// Recursively rounds every floating-point number in j.
Json rounded(const Json& j);

Json to_json(const liealg::GroupSpec& spec);
liealg::GroupSpec group_from_json(const Json& j);
/// "GL_R:2", "O_pq:1,1", "Sp_pq:1,0".
liealg::GroupSpec parse_group(const std::string& text);

/// Row-major [[[re, im], …], …].
Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json to_json(const surface::Representation& rho);
/// Validates membership of every image; relator residual is left to the caller.
surface::Representation representation_from_json(const Json& j);

struct SurfaceInput {
  int genus = 1;
  std::vector<std::pair<std::string, surface::Word>> curves;
};
SurfaceInput surface_from_json(const Json& j);

chen::Perturbation perturbation_from_json(const Json& j, const surface::Presentation& pres);
Json to_json(const chen::Perturbation& theta);

Json to_json(const goldman::LoopSum& s);
goldman::LoopSum loopsum_from_json(const Json& j, const surface::Presentation& pres);

Json to_json(const dgla::CyclicDgla& L);
dgla::CyclicDgla dgla_from_json(const Json& j);

}  // namespace looplie::io
