#pragma once

#include <filesystem>
#include <string>

#include "aqa/alignment.hpp"

namespace aqa {

// CSV layout: header "i,j,value", one row per cell, row-major, 0-based indices.
std::string matrix_to_csv(const Matrix<double>& m);
std::string matrix_to_csv(const Matrix<int>& m);
std::string matrix_to_json(const Matrix<double>& m);
/// JSON list of [i, j] pairs.
std::string path_to_json(const WarpingPath& path);

/// Writes cost.csv, score.csv, P.csv, Q.csv and path.json into `dir`,
/// creating it if needed. Throws std::runtime_error if the directory is not writable.
void export_alignment(const AlignmentResult& result, const std::filesystem::path& dir);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace aqa
