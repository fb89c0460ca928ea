#pragma once

#include "generators.hpp"
#include "liesynth/commands.hpp"

#include <doctest.h>

#include <string>
#include <vector>

namespace ts {

using namespace liesynth;

inline Expr P(const std::string& s) { return parse(s); }

inline VectorField F(const std::vector<std::string>& vars, const std::vector<std::string>& coords) {
  std::vector<Expr> c;
  for (const auto& s : coords) c.push_back(parse(s));
  return VectorField(vars, std::move(c));
}

inline bool zero(const Expr& e, const SamplerConfig& cfg = {}, const UFuncTable* t = nullptr) {
  return is_zero(e, cfg, t).zero();
}

inline bool field_zero(const VectorField& v, const SamplerConfig& cfg = {}) {
  return field_is_zero(v, cfg).zero;
}

inline Point pt(std::initializer_list<std::pair<const std::string, double>> l) { return Point(l); }

}  // namespace ts
