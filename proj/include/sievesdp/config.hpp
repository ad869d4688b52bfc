#pragma once

#include <cstddef>
#include <string_view>

namespace sievesdp {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr std::size_t kDefaultMaxDim = 512;

/// Dense-matrix cap on |Z|; SIEVESDP_MAX_DIM overrides the default.
std::size_t max_dim();

/// Throws ResourceLimit when n exceeds max_dim().
void check_dim(std::size_t n, std::string_view what);

}  // namespace sievesdp
