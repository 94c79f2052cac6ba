// SPDX-License-Identifier: Apache-2.0
#include "selo/image_io.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "selo/error.hpp"

namespace selo {

namespace {

cv::Mat to_bgr_mat(const RgbImage& image) {
  cv::Mat rgb(image.height, image.width, CV_8UC3, const_cast<std::uint8_t*>(image.pixels.data()));
  cv::Mat bgr;
  cv::cvtColor(rgb, bgr, cv::COLOR_RGB2BGR);
  return bgr;
}

}  // namespace

RgbImage read_rgb_image(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(Errc::FileMissing, "image not found: " + path.string());
  }
  cv::Mat raw = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (raw.empty()) throw Error(Errc::Io, "cannot decode image " + path.string());
  if (raw.depth() == CV_16U) raw.convertTo(raw, CV_8U, 1.0 / 257.0);
  if (raw.depth() != CV_8U) throw Error(Errc::Io, "unsupported sample type in " + path.string());

  cv::Mat rgb;
  switch (raw.channels()) {
    case 1: cv::cvtColor(raw, rgb, cv::COLOR_GRAY2RGB); break;
    case 3: cv::cvtColor(raw, rgb, cv::COLOR_BGR2RGB); break;
    case 4: cv::cvtColor(raw, rgb, cv::COLOR_BGRA2RGB); break;
    default: throw Error(Errc::Io, "unsupported channel count in " + path.string());
  }
  RgbImage out;
  out.height = rgb.rows;
  out.width = rgb.cols;
  out.pixels.resize(static_cast<std::size_t>(rgb.rows) * rgb.cols * 3);
  for (int r = 0; r < rgb.rows; ++r) {
    std::copy_n(rgb.ptr<std::uint8_t>(r), static_cast<std::size_t>(rgb.cols) * 3, out.at(r, 0));
  }
  return out;
}

std::vector<std::uint8_t> encode_rgb_png(const RgbImage& image) {
  std::vector<std::uint8_t> bytes;
  if (!cv::imencode(".png", to_bgr_mat(image), bytes)) throw Error(Errc::Io, "PNG encoding failed");
  return bytes;
}

void write_rgb_png(const std::filesystem::path& path, const RgbImage& image) {
  if (!cv::imwrite(path.string(), to_bgr_mat(image))) throw Error(Errc::Io, "cannot write " + path.string());
}

RgbImage crop(const RgbImage& image, int x0, int y0, int width, int height) {
  if (x0 < 0 || y0 < 0 || width <= 0 || height <= 0 || x0 + width > image.width || y0 + height > image.height) {
    throw Error(Errc::InvalidArgument, "crop rectangle outside the image");
  }
  RgbImage out{height, width, std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height * 3)};
  for (int r = 0; r < height; ++r) std::copy_n(image.at(y0 + r, x0), static_cast<std::size_t>(width) * 3, out.at(r, 0));
  return out;
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  static constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  if (const std::size_t rest = bytes.size() - i; rest > 0) {
    std::uint32_t v = bytes[i] << 16;
    if (rest == 2) v |= bytes[i + 1] << 8;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += rest == 2 ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

}  // namespace selo
