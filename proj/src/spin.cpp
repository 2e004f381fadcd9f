#include "spinsim/spin.hpp"

namespace spinsim {

std::string to_string(SpinValue s) {
  if (s.is_integer()) return std::to_string(s.twice_s() / 2);
  return std::to_string(s.twice_s()) + "/2";
}

} // namespace spinsim
