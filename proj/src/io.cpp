#include "poa/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include "poa/errors.hpp"

namespace poa {

namespace fs = std::filesystem;

void atomic_write(const fs::path& path, std::string_view content) {
    fs::path dir = path.parent_path();
    if (!dir.empty()) fs::create_directories(dir);
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::IoError, "cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error(ErrorKind::IoError, "short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> read_lines(const fs::path& path) {
    std::string content = read_file(path);
    std::vector<std::string> lines;
    size_t start = 0;
    while (start <= content.size()) {
        size_t end = content.find('\n', start);
        if (end == std::string::npos) {
            if (start < content.size()) lines.push_back(content.substr(start));
            break;
        }
        std::string line = content.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = end + 1;
    }
    return lines;
}

void log_warn(const std::string& message) { std::cerr << "warning: " << message << "\n"; }

std::string base64_encode(const uint8_t* data, size_t size) {
    static const char table[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((size + 2) / 3 * 4);
    for (size_t i = 0; i < size; i += 3) {
        uint32_t chunk = static_cast<uint32_t>(data[i]) << 16;
        size_t n = std::min<size_t>(3, size - i);
        if (n > 1) chunk |= static_cast<uint32_t>(data[i + 1]) << 8;
        if (n > 2) chunk |= static_cast<uint32_t>(data[i + 2]);
        out += table[(chunk >> 18) & 63];
        out += table[(chunk >> 12) & 63];
        out += n > 1 ? table[(chunk >> 6) & 63] : '=';
        out += n > 2 ? table[chunk & 63] : '=';
    }
    return out;
}

uint64_t checksum_doubles(const double* data, size_t count) {
    uint64_t h = 0xcbf29ce484222325ull;
    const unsigned char* bytes = reinterpret_cast<const unsigned char*>(data);
    for (size_t i = 0; i < count * sizeof(double); ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

uint64_t checksum_matrix(const Eigen::MatrixXd& m) {
    return checksum_doubles(m.data(), static_cast<size_t>(m.size()));
}

namespace {

constexpr char kTensorMagic[4] = {'P', 'O', 'A', 'T'};
constexpr uint32_t kTensorVersion = 1;

template <typename T>
void put(std::string& buf, T value) {
    char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    buf.append(bytes, sizeof(T));
}

template <typename T>
T take(const std::string& buf, size_t& pos) {
    if (pos + sizeof(T) > buf.size()) throw Error(ErrorKind::MalformedDocument, "truncated tensor file");
    T value;
    std::memcpy(&value, buf.data() + pos, sizeof(T));
    pos += sizeof(T);
    return value;
}

}  // namespace

void write_tensor(const fs::path& path, const std::vector<size_t>& dims,
                  const Eigen::VectorXd& data) {
    size_t total = 1;
    for (size_t d : dims) total *= d;
    if (static_cast<size_t>(data.size()) != total)
        throw Error(ErrorKind::ShapeMismatch, "tensor data does not match dims");
    std::string buf;
    buf.append(kTensorMagic, 4);
    put<uint32_t>(buf, kTensorVersion);
    put<uint32_t>(buf, static_cast<uint32_t>(dims.size()));
    for (size_t d : dims) put<uint64_t>(buf, static_cast<uint64_t>(d));
    buf.append(reinterpret_cast<const char*>(data.data()), total * sizeof(double));
    atomic_write(path, buf);
}

std::pair<std::vector<size_t>, Eigen::VectorXd> read_tensor(const fs::path& path) {
    std::string buf = read_file(path);
    if (buf.size() < 12 || std::memcmp(buf.data(), kTensorMagic, 4) != 0)
        throw Error(ErrorKind::MalformedDocument, "not a tensor file: " + path.string());
    size_t pos = 4;
    uint32_t version = take<uint32_t>(buf, pos);
    if (version != kTensorVersion)
        throw Error(ErrorKind::MalformedDocument, "unsupported tensor version");
    uint32_t ndim = take<uint32_t>(buf, pos);
    std::vector<size_t> dims;
    size_t total = 1;
    for (uint32_t i = 0; i < ndim; ++i) {
        dims.push_back(static_cast<size_t>(take<uint64_t>(buf, pos)));
        total *= dims.back();
    }
    if (buf.size() - pos != total * sizeof(double))
        throw Error(ErrorKind::MalformedDocument, "tensor payload size mismatch");
    Eigen::VectorXd data(static_cast<Eigen::Index>(total));
    std::memcpy(data.data(), buf.data() + pos, total * sizeof(double));
    return {dims, data};
}

void write_ppm(const fs::path& path, int channels, int height, int width,
               const Eigen::VectorXd& data) {
    std::string buf = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    auto at = [&](int c, int y, int x) { return data[(c * height + y) * width + x]; };
    std::vector<double> lo(3, 0.0), hi(3, 1.0);
    for (int c = 0; c < 3; ++c) {
        int src = std::min(c, channels - 1);
        double mn = at(src, 0, 0), mx = at(src, 0, 0);
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x) {
                mn = std::min(mn, at(src, y, x));
                mx = std::max(mx, at(src, y, x));
            }
        lo[c] = mn;
        hi[c] = mx > mn ? mx : mn + 1.0;
    }
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            for (int c = 0; c < 3; ++c) {
                int src = std::min(c, channels - 1);
                double v = (at(src, y, x) - lo[c]) / (hi[c] - lo[c]);
                buf += static_cast<char>(static_cast<int>(v * 255.0 + 0.5));
            }
        }
    }
    atomic_write(path, buf);
}

}  // namespace poa
