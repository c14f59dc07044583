#pragma once

// Small shared conveniences for the test binaries: scratch directories,
// whole-file IO, and a grayscale-image builder.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mosaiclink/image.hpp"

namespace testutil {

// Creates a unique directory under the system temp root and removes it
// (recursively) on destruction.
class ScratchDir {
 public:
  ScratchDir() {
    auto base = std::filesystem::temp_directory_path();
    std::random_device rd;
    for (int attempt = 0; attempt < 64; ++attempt) {
      auto candidate = base / ("mosaiclink-test-" + std::to_string(rd()));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("could not create scratch directory");
  }

  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }

  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

  std::filesystem::path file(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

inline mosaiclink::GrayImage make_gray(int width, int height,
                                       const std::vector<double>& pixels) {
  mosaiclink::GrayImage img;
  img.width = width;
  img.height = height;
  img.pixels = pixels;
  return img;
}

// Serializes a grayscale grid as a binary PGM (values rounded to [0,255]).
inline std::string to_pgm(const mosaiclink::GrayImage& img) {
  std::string out = "P5\n" + std::to_string(img.width) + " " +
                    std::to_string(img.height) + "\n255\n";
  for (double v : img.pixels) {
    double clamped = v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v);
    out.push_back(static_cast<char>(static_cast<unsigned char>(clamped + 0.5)));
  }
  return out;
}

inline std::filesystem::path fixture_root() {
  return std::filesystem::path(TEST_DATA_DIR);
}

}  // namespace testutil
