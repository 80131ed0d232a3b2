// Shared fixtures for the unit tests.
#pragma once

#include <string>

#include "deco/parser.hpp"

namespace deco::testing {

inline Signature nat_signature(Family f) {
  Signature s;
  s.name = "nat";
  s.family = f;
  s.types = {Type{"N"}};
  s.param = Type{"N"};
  s.ops = {{"s", Type{"N"}, Type{"N"}, kPure},
           {"p", Type{"N"}, Type{"N"}, kPure},
           {"two", Type::unit(), Type{"N"}, kPure},
           {"three", Type::unit(), Type{"N"}, kPure}};
  return s;
}

/// Naturals observed modulo `n`.
inline FiniteModel nat_model(Family f, int n = 4) {
  FiniteModel m;
  m.family = f;
  m.param = Type{"N"};
  for (int i = 0; i < n; ++i) m.elements["N"].push_back(std::to_string(i));
  for (int i = 0; i < n; ++i) {
    m.tables["s"].push_back((i + 1) % n);
    m.tables["p"].push_back((i + n - 1) % n);
  }
  m.tables["two"] = {2 % n};
  m.tables["three"] = {3 % n};
  return m;
}

/// One type P, one pure endo-generator f and a constant c.
inline Signature small_signature(Family f) { return builtin_signature(f); }

inline Term T(const std::string& s, const Signature& sig) { return parse_term(s, sig); }
inline Equation E(const std::string& s, const Signature& sig) { return parse_equation(s, sig); }

}  // namespace deco::testing
