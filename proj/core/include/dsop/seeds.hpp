#pragma once

#include <cstdint>
#include <string_view>

namespace dsop {

/// Named sub-seed so generation, search, and sampling draw from independent
/// streams that all follow from one top-level seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag);

}  // namespace dsop
