#include "sievesdp/config.hpp"

#include <cstdlib>
#include <string>

#include "sievesdp/error.hpp"

namespace sievesdp {

std::size_t max_dim() {
  if (const char* env = std::getenv("SIEVESDP_MAX_DIM")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultMaxDim;
}

void check_dim(std::size_t n, std::string_view what) {
  const std::size_t cap = max_dim();
  if (n > cap) {
    throw SieveError(ErrorCode::ResourceLimit, std::string(what) + ": dimension " + std::to_string(n) +
                                                   " exceeds the dense cap " + std::to_string(cap) +
                                                   " (set SIEVESDP_MAX_DIM to raise it)");
  }
}

}  // namespace sievesdp
