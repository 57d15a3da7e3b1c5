#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gs/graph.hpp"

namespace gs {

/// Real potential on the vertices, held as a shared pure function.
class Potential {
 public:
  using Fn = std::function<double(Vertex)>;

  Potential();  // identically zero
  explicit Potential(Fn fn, std::string label = "custom");

  static Potential constant(double c);
  // values[x] for 0 <= x < values.size(), `outside` elsewhere.
  static Potential from_values(std::vector<double> values, double outside = 0.0);

  double operator()(Vertex x) const { return (*fn_)(x); }
  const std::string& label() const { return label_; }

  Potential plus() const;   // max(V, 0)
  Potential minus() const;  // max(-V, 0)

  Potential operator+(const Potential& other) const;
  Potential operator-(const Potential& other) const;
  Potential shifted(double c) const;

  std::vector<double> values(const std::vector<Vertex>& vertices) const;

 private:
  std::shared_ptr<const Fn> fn_;
  std::string label_;
};

}  // namespace gs
