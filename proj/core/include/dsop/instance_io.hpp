#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "dsop/model.hpp"

namespace dsop {

// Instance files are JSON documents:
//
//   {
//     "vertices": [{"reward": 10, "penalty": 0}, ...],
//     "edges": [{"from": 0, "to": 1,
//                "bands": [{"start": 0, "dist": {"type": "gamma", "shape": 3, "scale": 2}},
//                          {"start": 24, "dist": {"type": "discrete",
//                                                 "outcomes": [{"time": 2, "prob": 0.5}, ...]}}]}],
//     "start": 0,
//     "exit": 31
//   }
//
// Loading throws ParseError on malformed text and ValidationError when the
// instance violates the model invariants.

Instance load_instance(std::string_view text);
std::string save_instance(const Instance& instance);

Instance read_instance_file(const std::filesystem::path& file);
void write_instance_file(const std::filesystem::path& file, const Instance& instance);

}  // namespace dsop
