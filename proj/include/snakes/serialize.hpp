#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snakes/plane_tree.hpp"
#include "snakes/spatial_snake.hpp"

namespace snakes {

/// Trees travel as CSV of depth-first degrees, one integer per line, header `degree`.
void write_tree_csv(const PlaneTree& tree, const std::string& path);
PlaneTree read_tree_csv(const std::string& path);

/// Processes as CSV `index,value`.
void write_process_csv(const std::vector<std::int64_t>& values, const std::string& path);
void write_process_csv(const std::vector<std::int32_t>& values, const std::string& path);
void write_process_csv(const std::vector<double>& values, const std::string& path);
std::vector<double> read_process_csv(const std::string& path);

/// Compact binary dump for large integer processes: a little-endian int64
/// count followed by that many little-endian int64 values.
void write_i64_dump(const std::vector<std::int64_t>& values, const std::string& path);
std::vector<std::int64_t> read_i64_dump(const std::string& path);

/// Snake as CSV `lex_index,depth,position`, and the contour variant
/// `contour_index,depth,position`.
void write_snake_csv(const SpatialSnake& snake, const std::string& path);
void write_snake_contour_csv(const SpatialSnake& snake, const std::string& path);

/// Atomic file replace: write to `path`.tmp then rename.
void write_file_atomic(const std::string& path, const std::string& contents);

} // namespace snakes
