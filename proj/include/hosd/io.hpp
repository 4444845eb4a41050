// io.hpp
// JSON interchange.
//
//   tensor         {"shape": [d1, ..., dN], "data": [[re, im], ...]}
//                  row-major, last index fastest
//   verdict        {"decomposable": bool, "a": [...], "shape": [...],
//                   "vectors": {"0": [[[re, im], ...], ...], ...},
//                   "certificate": {...} | null, "residual": real | null}
//   decomposition  a verdict with "decomposable": true (planted ground truth
//                  uses the same layout)
//
// Doubles are written in shortest round-trip form (at most 17 significant
// digits), so a file re-read and re-written is byte-identical.

#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "hosd/multischmidt.hpp"
#include "hosd/tensor.hpp"

namespace hosd::io {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::ParseError, "complex entries must be [re, im] number pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v[i]));
  return out;
}

inline Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "vector must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
  return v;
}

inline Shape shape_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw Error(ErrorCode::ParseError, "\"shape\" must be a nonempty array");
  Shape shape;
  for (const auto& d : j) {
    if (!d.is_number_integer() || d.get<long long>() <= 0) {
      throw Error(ErrorCode::ParseError, "shape entries must be positive integers");
    }
    shape.push_back(d.get<std::size_t>());
  }
  return shape;
}

template <typename T>
Json optional_to_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace detail

inline Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << text;
}

/// Canonical text form: compact JSON plus a trailing newline.
inline std::string dump(const Json& j) { return j.dump() + "\n"; }

inline Json tensor_to_json(const ComplexTensor& t) {
  Json data = Json::array();
  for (const auto& z : t.data()) data.push_back(detail::complex_to_json(z));
  return Json{{"shape", t.shape()}, {"data", std::move(data)}};
}

inline ComplexTensor tensor_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("shape") || !j.contains("data")) {
    throw Error(ErrorCode::ParseError, "tensor JSON needs \"shape\" and \"data\"");
  }
  const Shape shape = detail::shape_from_json(j["shape"]);
  const Json& data = j["data"];
  if (!data.is_array()) throw Error(ErrorCode::ParseError, "\"data\" must be an array");
  if (data.size() != shape_volume(shape)) {
    throw Error(ErrorCode::ShapeMismatch, "data length " + std::to_string(data.size()) +
                                              " does not match shape volume " +
                                              std::to_string(shape_volume(shape)));
  }
  std::vector<Complex> values;
  values.reserve(data.size());
  for (const auto& z : data) values.push_back(detail::complex_from_json(z));
  return ComplexTensor(shape, std::move(values));
}

inline Json certificate_to_json(const Certificate& c) {
  return Json{{"kind", to_string(c.kind)},
              {"blockIndex", detail::optional_to_json(c.block_index)},
              {"muIndex", detail::optional_to_json(c.mu_index)},
              {"nuIndex", detail::optional_to_json(c.nu_index)},
              {"party", detail::optional_to_json(c.party)},
              {"measuredValue", c.measured_value},
              {"threshold", c.threshold}};
}

inline Json decomposition_to_json(const HigherDecomposition& d, std::optional<double> residual) {
  Json vectors = Json::object();
  for (std::size_t p = 0; p < d.vectors.size(); ++p) {
    Json family = Json::array();
    for (const auto& v : d.vectors[p]) family.push_back(detail::vector_to_json(v));
    vectors[std::to_string(p)] = std::move(family);
  }
  return Json{{"decomposable", true},
              {"a", d.a},
              {"shape", d.shape},
              {"vectors", std::move(vectors)},
              {"certificate", nullptr},
              {"residual", detail::optional_to_json(residual)}};
}

inline Json verdict_to_json(const Verdict& v) {
  if (v.decomposition) return decomposition_to_json(*v.decomposition, v.residual);
  return Json{{"decomposable", false},
              {"a", v.schmidt_coefficients},
              {"shape", Json::array()},
              {"vectors", Json::object()},
              {"certificate", v.certificate ? certificate_to_json(*v.certificate) : Json(nullptr)},
              {"residual", detail::optional_to_json(v.residual)}};
}

inline HigherDecomposition decomposition_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("a") || !j.contains("vectors") || !j.contains("shape")) {
    throw Error(ErrorCode::ParseError, "decomposition JSON needs \"a\", \"shape\" and \"vectors\"");
  }
  if (j.contains("decomposable") && j["decomposable"] == false) {
    throw Error(ErrorCode::ParseError, "file holds a NotDecomposable verdict");
  }
  HigherDecomposition d;
  d.shape = detail::shape_from_json(j["shape"]);
  if (!j["a"].is_array()) throw Error(ErrorCode::ParseError, "\"a\" must be an array");
  for (const auto& x : j["a"]) {
    if (!x.is_number()) throw Error(ErrorCode::ParseError, "coefficients must be numbers");
    d.a.push_back(x.get<double>());
  }
  const Json& vectors = j["vectors"];
  if (!vectors.is_object()) throw Error(ErrorCode::ParseError, "\"vectors\" must be an object");
  for (std::size_t p = 0; p < d.shape.size(); ++p) {
    const auto key = std::to_string(p);
    if (!vectors.contains(key)) throw Error(ErrorCode::ParseError, "missing vectors for party " + key);
    const Json& family = vectors[key];
    if (!family.is_array() || family.size() != d.a.size()) {
      throw Error(ErrorCode::ShapeMismatch, "party " + key + " needs one vector per coefficient");
    }
    std::vector<Vector> fam;
    for (const auto& v : family) {
      Vector x = detail::vector_from_json(v);
      if (static_cast<std::size_t>(x.size()) != d.shape[p]) {
        throw Error(ErrorCode::ShapeMismatch, "vector length differs from party " + key + " dimension");
      }
      fam.push_back(std::move(x));
    }
    d.vectors.push_back(std::move(fam));
  }
  return d;
}

}  // namespace hosd::io
