// SPDX-License-Identifier: Apache-2.0
#include "selo/map_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <regex>

#include <opencv2/imgcodecs.hpp>

namespace selo {

static_assert(std::endian::native == std::endian::little, "npy writer assumes a little-endian host");

namespace {

constexpr char kMagic[] = "\x93NUMPY";

}  // namespace

void write_npy(const std::filesystem::path& path, const ProbabilityMap& map) {
  std::string header = "{'descr': '<f4', 'fortran_order': False, 'shape': (" + std::to_string(map.height()) +
                       ", " + std::to_string(map.width()) + "), }";
  // magic(6) + version(2) + length(2) + header, padded to 64 bytes with a trailing newline.
  const std::size_t unpadded = 10 + header.size() + 1;
  header.append((64 - unpadded % 64) % 64, ' ');
  header.push_back('\n');
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out.write(kMagic, 6);
  const char version[2] = {1, 0};
  out.write(version, 2);
  const auto len = static_cast<std::uint16_t>(header.size());
  const char len_bytes[2] = {static_cast<char>(len & 0xff), static_cast<char>(len >> 8)};
  out.write(len_bytes, 2);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(map.data()), static_cast<std::streamsize>(map.size() * sizeof(float)));
  if (!out) throw Error(Errc::Io, "short write to " + path.string());
}

ProbabilityMap read_npy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::FileMissing, "cannot open " + path.string());
  char prefix[10];
  if (!in.read(prefix, 10) || std::memcmp(prefix, kMagic, 6) != 0) {
    throw Error(Errc::Io, path.string() + " is not an .npy file");
  }
  std::size_t header_len = 0;
  if (prefix[6] == 1) {
    header_len = static_cast<unsigned char>(prefix[8]) | (static_cast<unsigned char>(prefix[9]) << 8);
  } else if (prefix[6] == 2 || prefix[6] == 3) {
    char extra[2];
    if (!in.read(extra, 2)) throw Error(Errc::Io, path.string() + ": truncated header");
    header_len = static_cast<unsigned char>(prefix[8]) | (static_cast<unsigned char>(prefix[9]) << 8) |
                 (static_cast<unsigned char>(extra[0]) << 16) |
                 (static_cast<std::size_t>(static_cast<unsigned char>(extra[1])) << 24);
  } else {
    throw Error(Errc::Io, path.string() + ": unsupported .npy version");
  }
  std::string header(header_len, '\0');
  if (!in.read(header.data(), static_cast<std::streamsize>(header_len))) {
    throw Error(Errc::Io, path.string() + ": truncated header");
  }
  static const std::regex descr(R"('descr'\s*:\s*'([^']*)')");
  static const std::regex order(R"('fortran_order'\s*:\s*(True|False))");
  static const std::regex shape(R"('shape'\s*:\s*\(\s*(\d+)\s*,\s*(\d+)\s*,?\s*\))");
  std::smatch m;
  if (!std::regex_search(header, m, descr) || (m[1] != "<f4" && m[1] != "|f4")) {
    throw Error(Errc::Io, path.string() + ": expected little-endian float32 data");
  }
  if (!std::regex_search(header, m, order) || m[1] != "False") {
    throw Error(Errc::Io, path.string() + ": Fortran-ordered arrays are not supported");
  }
  if (!std::regex_search(header, m, shape)) throw Error(Errc::Io, path.string() + ": expected a 2-D shape");
  const int h = std::stoi(m[1]);
  const int w = std::stoi(m[2]);
  ProbabilityMap map(h, w);
  if (!in.read(reinterpret_cast<char*>(map.data()), static_cast<std::streamsize>(map.size() * sizeof(float)))) {
    throw Error(Errc::Io, path.string() + ": truncated data");
  }
  return map;
}

void write_map_png(const std::filesystem::path& path, const ProbabilityMap& map) {
  cv::Mat img(map.height(), map.width(), CV_16UC1);
  for (int r = 0; r < map.height(); ++r) {
    auto* dst = img.ptr<std::uint16_t>(r);
    for (int c = 0; c < map.width(); ++c) {
      const double p = std::clamp(static_cast<double>(map(r, c)), 0.0, 1.0);
      dst[c] = static_cast<std::uint16_t>(std::lround(p * 65535.0));
    }
  }
  if (!cv::imwrite(path.string(), img)) throw Error(Errc::Io, "cannot write " + path.string());
}

ProbabilityMap read_map_png(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(Errc::FileMissing, "no such file " + path.string());
  const cv::Mat img = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (img.empty()) throw Error(Errc::Io, "cannot decode " + path.string());
  if (img.type() != CV_16UC1 && img.type() != CV_8UC1) {
    throw Error(Errc::Io, path.string() + ": expected a single-channel PNG");
  }
  const double scale = img.type() == CV_16UC1 ? 65535.0 : 255.0;
  ProbabilityMap map(img.rows, img.cols);
  for (int r = 0; r < img.rows; ++r) {
    for (int c = 0; c < img.cols; ++c) {
      const double v = img.type() == CV_16UC1 ? img.at<std::uint16_t>(r, c) : img.at<std::uint8_t>(r, c);
      map(r, c) = static_cast<float>(v / scale);
    }
  }
  return map;
}

ProbabilityMap read_map(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".npy") return read_npy(path);
  if (ext == ".png") return read_map_png(path);
  throw Error(Errc::InvalidArgument, "unsupported map format '" + ext + "'");
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw Error(Errc::Io, "short write to " + path.string());
}

}  // namespace selo
