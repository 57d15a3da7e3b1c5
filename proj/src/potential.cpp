#include "gs/potential.hpp"

#include <algorithm>

namespace gs {

Potential::Potential() : Potential([](Vertex) { return 0.0; }, "zero") {}

Potential::Potential(Fn fn, std::string label)
    : fn_(std::make_shared<const Fn>(std::move(fn))), label_(std::move(label)) {}

Potential Potential::constant(double c) {
  return Potential([c](Vertex) { return c; }, "const");
}

Potential Potential::from_values(std::vector<double> values, double outside) {
  auto data = std::make_shared<const std::vector<double>>(std::move(values));
  return Potential(
      [data, outside](Vertex x) {
        return (x >= 0 && static_cast<std::size_t>(x) < data->size()) ? (*data)[x] : outside;
      },
      "values");
}

Potential Potential::plus() const {
  auto f = fn_;
  return Potential([f](Vertex x) { return std::max((*f)(x), 0.0); }, label_ + "+");
}

Potential Potential::minus() const {
  auto f = fn_;
  return Potential([f](Vertex x) { return std::max(-(*f)(x), 0.0); }, label_ + "-");
}

Potential Potential::operator+(const Potential& other) const {
  auto f = fn_;
  auto g = other.fn_;
  return Potential([f, g](Vertex x) { return (*f)(x) + (*g)(x); }, label_ + "+" + other.label_);
}

Potential Potential::operator-(const Potential& other) const {
  auto f = fn_;
  auto g = other.fn_;
  return Potential([f, g](Vertex x) { return (*f)(x) - (*g)(x); }, label_ + "-" + other.label_);
}

Potential Potential::shifted(double c) const {
  auto f = fn_;
  return Potential([f, c](Vertex x) { return (*f)(x) + c; }, label_);
}

std::vector<double> Potential::values(const std::vector<Vertex>& vertices) const {
  std::vector<double> out;
  out.reserve(vertices.size());
  for (Vertex x : vertices) out.push_back((*fn_)(x));
  return out;
}

}  // namespace gs
