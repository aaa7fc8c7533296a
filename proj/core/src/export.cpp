#include "aqa/export.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace aqa {

namespace {

template <typename T>
std::string to_csv(const Matrix<T>& m, auto&& fmt) {
  std::string out = "i,j,value\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      out += std::to_string(i) + ',' + std::to_string(j) + ',' + fmt(m(i, j)) + '\n';
    }
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string matrix_to_csv(const Matrix<double>& m) {
  return to_csv(m, [](double v) { return format_double(v); });
}

std::string matrix_to_csv(const Matrix<int>& m) {
  return to_csv(m, [](int v) { return std::to_string(v); });
}

std::string matrix_to_json(const Matrix<double>& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (double v : m.row(i)) row.push_back(std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr));
    rows.push_back(std::move(row));
  }
  return rows.dump();
}

std::string path_to_json(const WarpingPath& path) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : path) arr.push_back({p.i, p.j});
  return arr.dump();
}

void export_alignment(const AlignmentResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory " + dir.string());
  }
  write_file(dir / "cost.csv", matrix_to_csv(result.cost));
  write_file(dir / "score.csv", matrix_to_csv(result.score));
  write_file(dir / "P.csv", matrix_to_csv(result.P));
  write_file(dir / "Q.csv", matrix_to_csv(result.Q));
  write_file(dir / "path.json", path_to_json(result.path) + "\n");
}

}  // namespace aqa
