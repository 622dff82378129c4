#include "hik/multivector.hpp"

namespace hik {

std::string Blade::name() const {
  if (mask_ == 0) return "1";
  std::string out;
  for (int i = 0; i < kDim; ++i) {
    if (!contains(i)) continue;
    if (!out.empty()) out += "^";
    out += "dx" + std::to_string(i);
  }
  return out;
}

}  // namespace hik
