#include "gs/functions.hpp"

#include <cmath>

#include "gs/error.hpp"

namespace gs {

const char* to_string(Tri t) {
  switch (t) {
    case Tri::False: return "false";
    case Tri::True: return "true";
    case Tri::Unknown: return "unknown";
  }
  return "unknown";
}

VertexFunction::VertexFunction(FiniteFunction values)
    : finite_(std::make_shared<const FiniteFunction>(std::move(values))) {}

VertexFunction::VertexFunction(std::function<Complex(Vertex)> fn)
    : fn_(std::make_shared<const std::function<Complex(Vertex)>>(std::move(fn))) {}

Complex VertexFunction::operator()(Vertex x) const {
  if (finite_) {
    auto it = finite_->find(x);
    return it == finite_->end() ? Complex{} : it->second;
  }
  return (*fn_)(x);
}

const FiniteFunction& VertexFunction::support() const {
  if (!finite_) throw Error(ErrorCode::InvalidArgument, "function is not finitely supported");
  return *finite_;
}

FiniteFunction delta(Vertex x, Complex value) { return FiniteFunction{{x, value}}; }

FiniteFunction modulus(const FiniteFunction& f) {
  FiniteFunction out;
  for (const auto& [x, v] : f) out.emplace(x, std::abs(v));
  return out;
}

}  // namespace gs
