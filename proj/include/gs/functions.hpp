#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>

#include "gs/graph.hpp"

namespace gs {

// Finitely supported function, keyed by vertex.
using FiniteFunction = std::map<Vertex, Complex>;

enum class Tri { False, True, Unknown };

const char* to_string(Tri t);

/// A complex function on X: either finitely supported or given pointwise.
class VertexFunction {
 public:
  VertexFunction(FiniteFunction values);  // NOLINT(google-explicit-constructor)
  explicit VertexFunction(std::function<Complex(Vertex)> fn);

  Complex operator()(Vertex x) const;
  bool finitely_supported() const { return finite_ != nullptr; }
  // Only valid when finitely_supported().
  const FiniteFunction& support() const;

 private:
  std::shared_ptr<const FiniteFunction> finite_;
  std::shared_ptr<const std::function<Complex(Vertex)>> fn_;
};

FiniteFunction delta(Vertex x, Complex value = 1.0);
FiniteFunction modulus(const FiniteFunction& f);

}  // namespace gs
