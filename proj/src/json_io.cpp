#include "looplie/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace looplie::io {

namespace {

template <typename T>
T get(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("field '") + key + "': " + e.what());
  }
}

double number(const Json& j) {
  if (!j.is_number()) throw SchemaError("expected a number");
  return j.get<double>();
}

}  // namespace

double round12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

Json rounded(const Json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) return nullptr;
    return round12(v);
  }
  if (j.is_array() || j.is_object()) {
    Json out = j;
    for (auto it = out.begin(); it != out.end(); ++it) *it = rounded(*it);
    return out;
  }
  return j;
}

Json to_json(const liealg::GroupSpec& spec) {
  return Json{{"kind", liealg::to_string(spec.kind)}, {"n", spec.n}, {"p", spec.p}, {"q", spec.q}};
}

liealg::GroupSpec group_from_json(const Json& j) {
  liealg::GroupSpec spec;
  try {
    spec.kind = liealg::kind_from_string(get<std::string>(j, "kind"));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  spec.n = get<int>(j, "n");
  spec.p = j.contains("p") ? get<int>(j, "p") : spec.n;
  spec.q = j.contains("q") ? get<int>(j, "q") : 0;
  switch (spec.kind) {
    case liealg::GroupKind::O_pq:
    case liealg::GroupKind::U_pq:
    case liealg::GroupKind::Sp_pq:
      break;
    default:
      spec.p = spec.n;
      spec.q = 0;
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  return spec;
}

liealg::GroupSpec parse_group(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw SchemaError("group must look like KIND:n or KIND:p,q");
  const std::string kind = text.substr(0, colon);
  const std::string args = text.substr(colon + 1);
  std::vector<int> nums;
  std::stringstream ss(args);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      nums.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw SchemaError("bad group size '" + tok + "'");
    }
  }
  Json j{{"kind", kind}};
  if (nums.size() == 1) {
    j["n"] = nums[0];
  } else if (nums.size() == 2) {
    j["n"] = nums[0] + nums[1];
    j["p"] = nums[0];
    j["q"] = nums[1];
  } else {
    throw SchemaError("bad group size list '" + args + "'");
  }
  return group_from_json(j);
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(Json::array({m(i, k).real(), m(i, k).imag()}));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw SchemaError("matrix must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw SchemaError("matrix must be square");
    for (Eigen::Index k = 0; k < n; ++k) {
      const Json& e = row[static_cast<std::size_t>(k)];
      if (e.is_number()) {
        m(i, k) = Complex(number(e), 0.0);
      } else if (e.is_array() && e.size() == 2) {
        m(i, k) = Complex(number(e[0]), number(e[1]));
      } else {
        throw SchemaError("matrix entries must be numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

Json to_json(const surface::Representation& rho) {
  Json images = Json::object();
  for (std::size_t k = 0; k < rho.images.size(); ++k)
    images[surface::letter_name(static_cast<int>(k) + 1)] = to_json(rho.images[k].matrix());
  return Json{{"group", to_json(rho.spec)}, {"genus", rho.genus}, {"images", images}};
}

surface::Representation representation_from_json(const Json& j) {
  const auto spec = group_from_json(j.contains("group") ? j.at("group") : Json());
  if (!j.contains("images") || !j.at("images").is_object())
    throw SchemaError("representation needs an 'images' object");
  const Json& images = j.at("images");
  int genus = j.contains("genus") ? get<int>(j, "genus") : static_cast<int>(images.size()) / 2;
  if (genus < 1) throw SchemaError("genus must be at least 1");
  surface::Representation rho{spec, genus, {}};
  for (int k = 1; k <= 2 * genus; ++k) {
    const std::string name = surface::letter_name(k);
    if (!images.contains(name)) throw SchemaError("missing image for " + name);
    const Matrix m = matrix_from_json(images.at(name));
    if (m.rows() != spec.dim()) throw SchemaError("image " + name + " has the wrong size");
    try {
      rho.images.emplace_back(spec, m);
    } catch (const InvalidElement& e) {
      throw SchemaError("image " + name + ": " + e.what());
    }
  }
  if (static_cast<int>(images.size()) != 2 * genus)
    throw SchemaError("images do not match genus " + std::to_string(genus));
  return rho;
}

SurfaceInput surface_from_json(const Json& j) {
  SurfaceInput in;
  in.genus = get<int>(j, "genus");
  if (in.genus < 1) throw SchemaError("genus must be at least 1");
  const surface::Presentation pres(in.genus);
  if (!j.contains("curves") || !j.at("curves").is_object())
    throw SchemaError("input needs a 'curves' object");
  for (const auto& [name, value] : j.at("curves").items()) {
    if (!value.is_string()) throw SchemaError("curve '" + name + "' must be a string");
    in.curves.emplace_back(name, surface::parse_word(value.get<std::string>(), pres));
  }
  return in;
}

chen::Perturbation perturbation_from_json(const Json& j, const surface::Presentation& pres) {
  if (!j.is_object()) throw SchemaError("perturbation must be an object");
  chen::Perturbation theta;
  for (const auto& [name, value] : j.items()) {
    const auto w = surface::parse_word(name, pres);
    if (w.size() != 1 || w.letters[0] < 0)
      throw SchemaError("perturbation keys must be generators, got '" + name + "'");
    theta[w.letters[0]] = matrix_from_json(value);
  }
  return theta;
}

Json to_json(const chen::Perturbation& theta) {
  Json out = Json::object();
  for (const auto& [k, m] : theta) out[surface::letter_name(k)] = to_json(m);
  return out;
}

Json to_json(const goldman::LoopSum& s) {
  Json out = Json::array();
  for (const auto& t : s.terms())
    out.push_back(Json{{"coef", t.coef.str()}, {"word", surface::format_word(t.word)}});
  return out;
}

goldman::LoopSum loopsum_from_json(const Json& j, const surface::Presentation& pres) {
  if (!j.is_array()) throw SchemaError("loop sum must be an array");
  goldman::LoopSum s;
  for (const auto& t : j)
    s.add(goldman::Rational::parse(get<std::string>(t, "coef")),
          surface::parse_word(get<std::string>(t, "word"), pres));
  return s;
}

Json to_json(const dgla::CyclicDgla& L) {
  const int n = L.dim();
  auto mat = [n](const RealMatrix& m) {
    Json rows = Json::array();
    for (int i = 0; i < n; ++i) {
      Json row = Json::array();
      for (int k = 0; k < n; ++k) row.push_back(m(i, k));
      rows.push_back(row);
    }
    return rows;
  };
  Json bracket = Json::array();
  for (int i = 0; i < n; ++i) {
    Json bi = Json::array();
    for (int k = 0; k < n; ++k) {
      Json bij = Json::array();
      for (int z = 0; z < n; ++z) bij.push_back(L.c(i, k, z));
      bi.push_back(bij);
    }
    bracket.push_back(bi);
  }
  return Json{{"d0", L.d0()},
              {"d1", L.d1()},
              {"differential", mat(L.differential())},
              {"bracket", bracket},
              {"pairing", mat(L.pairing())}};
}

dgla::CyclicDgla dgla_from_json(const Json& j) {
  const int d0 = get<int>(j, "d0");
  const int d1 = get<int>(j, "d1");
  const int n = d0 + d1;
  if (d0 < 0 || d1 < 0 || n == 0) throw SchemaError("bad dimensions");
  auto mat = [n](const Json& m, const char* what) {
    if (!m.is_array() || static_cast<int>(m.size()) != n)
      throw SchemaError(std::string(what) + " must be " + std::to_string(n) + "x" + std::to_string(n));
    RealMatrix out(n, n);
    for (int i = 0; i < n; ++i) {
      const Json& row = m[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        throw SchemaError(std::string(what) + " has a bad row");
      for (int k = 0; k < n; ++k) out(i, k) = number(row[static_cast<std::size_t>(k)]);
    }
    return out;
  };
  if (!j.contains("differential") || !j.contains("bracket") || !j.contains("pairing"))
    throw SchemaError("DGLA needs differential, bracket and pairing");
  const RealMatrix d = mat(j.at("differential"), "differential");
  const RealMatrix w = mat(j.at("pairing"), "pairing");
  const Json& b = j.at("bracket");
  std::vector<double> structure(static_cast<std::size_t>(n) * n * n);
  if (!b.is_array() || static_cast<int>(b.size()) != n) throw SchemaError("bracket must be n x n x n");
  for (int i = 0; i < n; ++i) {
    const Json& bi = b[static_cast<std::size_t>(i)];
    if (!bi.is_array() || static_cast<int>(bi.size()) != n) throw SchemaError("bracket must be n x n x n");
    for (int k = 0; k < n; ++k) {
      const Json& bik = bi[static_cast<std::size_t>(k)];
      if (!bik.is_array() || static_cast<int>(bik.size()) != n)
        throw SchemaError("bracket must be n x n x n");
      for (int z = 0; z < n; ++z)
        structure[(static_cast<std::size_t>(i) * n + k) * n + z] = number(bik[static_cast<std::size_t>(z)]);
    }
  }
  try {
    return dgla::CyclicDgla(d0, d1, d, std::move(structure), w);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
}

}  // namespace looplie::io
