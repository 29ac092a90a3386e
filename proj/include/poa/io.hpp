#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace poa {

// Writes via a temp file in the same directory followed by a rename, so
// readers never observe a partially written output.
void atomic_write(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

std::vector<std::string> read_lines(const std::filesystem::path& path);

void log_warn(const std::string& message);

std::string base64_encode(const uint8_t* data, size_t size);

// FNV-1a over the raw little-endian bytes of the values.
uint64_t checksum_doubles(const double* data, size_t count);
uint64_t checksum_matrix(const Eigen::MatrixXd& m);

// Versioned binary tensor container (.pot): "POAT" magic, u32 version,
// u32 ndim, u64 dims, then float64 payload, all little-endian.
void write_tensor(const std::filesystem::path& path, const std::vector<size_t>& dims,
                  const Eigen::VectorXd& data);
std::pair<std::vector<size_t>, Eigen::VectorXd> read_tensor(const std::filesystem::path& path);

// 8-bit PPM dump of up to three channels of a (c, h, w) tensor, min-max
// normalized per channel. Smoke-check output only.
void write_ppm(const std::filesystem::path& path, int channels, int height, int width,
               const Eigen::VectorXd& data);

}  // namespace poa
