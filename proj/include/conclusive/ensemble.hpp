// Copyright 2026 The Conclusive Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "conclusive/error.hpp"
#include "conclusive/numerics.hpp"

namespace conclusive {

/// Amplitude norm deviation accepted for a pure state.
inline constexpr double kNormTol = 1e-6;

/// Deviation of the prior sum from 1 accepted for an ensemble.
inline constexpr double kPriorSumTol = 1e-9;

/// Unit-norm amplitude vector. Amplitudes (including global phase) are kept
/// exactly as given; a state that is not normalized is rejected, never
/// rescaled.
class PureState {
 public:
  explicit PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) throw InputError("dimension mismatch");
    if (std::abs(amplitudes_.norm() - 1.0) > kNormTol) throw InputError("state not normalized");
  }

  const ComplexVector& amplitudes() const { return amplitudes_; }
  Eigen::Index dim() const { return amplitudes_.size(); }

 private:
  ComplexVector amplitudes_;
};

struct Member {
  PureState state;
  double prior;
  int class_label;  // 1-based
};

/// N pure states with priors, partitioned into n >= 2 disjoint nonempty
/// classes labelled 1..n. Immutable once constructed.
class ClassifiedEnsemble {
 public:
  ClassifiedEnsemble(Eigen::Index dim, int classes, std::vector<Member> members)
      : dim_(dim), classes_(classes), members_(std::move(members)) {
    if (classes_ < 2) throw InputError("n ≥ 2 required");
    if (dim_ < 1) throw InputError("dimension mismatch");
    class_sizes_.assign(static_cast<std::size_t>(classes_), 0);
    double prior_sum = 0.0;
    for (const auto& m : members_) {
      if (m.state.dim() != dim_) throw InputError("dimension mismatch");
      if (!(m.prior > 0.0 && m.prior <= 1.0)) throw InputError("prior out of range (0,1]");
      if (m.class_label < 1 || m.class_label > classes_) throw InputError("class label out of range");
      ++class_sizes_[static_cast<std::size_t>(m.class_label - 1)];
      prior_sum += m.prior;
    }
    for (auto size : class_sizes_) {
      if (size == 0) throw InputError("empty class");
    }
    if (std::abs(prior_sum - 1.0) > kPriorSumTol) throw InputError("priors do not sum to 1");
  }

  Eigen::Index dim() const { return dim_; }
  int class_count() const { return classes_; }
  std::size_t size() const { return members_.size(); }
  const std::vector<Member>& members() const { return members_; }
  const Member& member(std::size_t a) const { return members_.at(a); }
  const ComplexVector& state(std::size_t a) const { return members_.at(a).state.amplitudes(); }
  double prior(std::size_t a) const { return members_.at(a).prior; }
  int label(std::size_t a) const { return members_.at(a).class_label; }

  /// m_i, the number of members with the given 1-based label.
  std::size_t class_size(int label) const {
    return class_sizes_.at(static_cast<std::size_t>(label - 1));
  }

  /// Indices of members whose label differs from `label`.
  std::vector<std::size_t> indices_outside(int label) const {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < members_.size(); ++a) {
      if (members_[a].class_label != label) out.push_back(a);
    }
    return out;
  }

  std::vector<ComplexVector> states_outside(int label) const {
    std::vector<ComplexVector> out;
    for (auto a : indices_outside(label)) out.push_back(state(a));
    return out;
  }

  std::vector<ComplexVector> states_inside(int label) const {
    std::vector<ComplexVector> out;
    for (const auto& m : members_) {
      if (m.class_label == label) out.push_back(m.state.amplitudes());
    }
    return out;
  }

  std::vector<ComplexVector> all_states() const {
    std::vector<ComplexVector> out;
    for (const auto& m : members_) out.push_back(m.state.amplitudes());
    return out;
  }

 private:
  Eigen::Index dim_;
  int classes_;
  std::vector<Member> members_;
  std::vector<std::size_t> class_sizes_;
};

/// G[a][b] = <psi_a|psi_b>.
using GramMatrix = ComplexMatrix;

/// Gram matrix of the ensemble. Hermitian by construction: only the upper
/// triangle is computed and the lower one is its conjugate.
inline GramMatrix gram_matrix(const ClassifiedEnsemble& e) {
  const auto n = static_cast<Eigen::Index>(e.size());
  GramMatrix g(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a; b < n; ++b) {
      const Complex v = e.state(static_cast<std::size_t>(a)).dot(e.state(static_cast<std::size_t>(b)));
      g(a, b) = v;
      g(b, a) = std::conj(v);
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// JSON file format
//
//   {"dim": 2, "classes": 2,
//    "states": [{"amplitudes": [[re, im], ...], "prior": 0.25, "class": 1}, ...]}
//
// Field names are exact and unknown fields are rejected.

namespace detail {

[[noreturn]] inline void schema_error(const std::string& what) {
  throw InputError("parse error: " + what);
}

inline void require_only_fields(const nlohmann::json& obj,
                                std::initializer_list<std::string_view> allowed,
                                const std::string& where) {
  if (!obj.is_object()) schema_error(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (auto name : allowed) known = known || key == name;
    if (!known) schema_error("unknown field '" + key + "' in " + where);
  }
  for (auto name : allowed) {
    if (!obj.contains(std::string(name))) {
      schema_error("missing field '" + std::string(name) + "' in " + where);
    }
  }
}

inline Complex parse_complex(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    schema_error(where + " must be a [real, imaginary] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline nlohmann::json complex_to_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline std::size_t line_of_offset(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1;
  for (std::size_t i = 0; i + 1 < byte; ++i) line += text[i] == '\n';
  return line;
}

inline nlohmann::json parse_json(std::string_view text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw InputError("parse error at line " + std::to_string(line_of_offset(text, ex.byte)) +
                     ": " + ex.what());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("file not found: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace detail

inline ClassifiedEnsemble parse_ensemble(std::string_view text) {
  const auto root = detail::parse_json(text);
  detail::require_only_fields(root, {"dim", "classes", "states"}, "ensemble");
  if (!root["dim"].is_number_integer() || root["dim"].get<long long>() < 1) {
    detail::schema_error("'dim' must be a positive integer");
  }
  if (!root["classes"].is_number_integer()) detail::schema_error("'classes' must be an integer");
  if (!root["states"].is_array()) detail::schema_error("'states' must be an array");

  const auto dim = static_cast<Eigen::Index>(root["dim"].get<long long>());
  std::vector<Member> members;
  std::size_t index = 0;
  for (const auto& s : root["states"]) {
    const std::string where = "states[" + std::to_string(index++) + "]";
    detail::require_only_fields(s, {"amplitudes", "prior", "class"}, where);
    const auto& amps = s["amplitudes"];
    if (!amps.is_array()) detail::schema_error(where + ".amplitudes must be an array");
    if (static_cast<Eigen::Index>(amps.size()) != dim) throw InputError("dimension mismatch in " + where);
    ComplexVector v(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
      v(k) = detail::parse_complex(amps[static_cast<std::size_t>(k)], where + ".amplitudes");
    }
    if (!s["prior"].is_number()) detail::schema_error(where + ".prior must be a number");
    if (!s["class"].is_number_integer()) detail::schema_error(where + ".class must be an integer");
    members.push_back({PureState(std::move(v)), s["prior"].get<double>(), s["class"].get<int>()});
  }
  return ClassifiedEnsemble(dim, root["classes"].get<int>(), std::move(members));
}

inline ClassifiedEnsemble load_ensemble(const std::filesystem::path& path) {
  return parse_ensemble(detail::read_file(path));
}

inline nlohmann::json ensemble_to_json(const ClassifiedEnsemble& e) {
  nlohmann::json states = nlohmann::json::array();
  for (const auto& m : e.members()) {
    nlohmann::json amps = nlohmann::json::array();
    for (Eigen::Index k = 0; k < m.state.dim(); ++k) amps.push_back(detail::complex_to_json(m.state.amplitudes()(k)));
    states.push_back({{"amplitudes", amps}, {"prior", m.prior}, {"class", m.class_label}});
  }
  return {{"dim", e.dim()}, {"classes", e.class_count()}, {"states", states}};
}

inline std::string serialize_ensemble(const ClassifiedEnsemble& e) { return ensemble_to_json(e).dump(2); }

}  // namespace conclusive
