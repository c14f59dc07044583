#pragma once

#include <filesystem>
#include <vector>

namespace mosaiclink {

/// Grayscale pixel grid. Values are luma in [0, 255] stored as doubles so
/// that resampling keeps full precision.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;  ///< row-major, size == width * height

    double at(int row, int col) const {
        return pixels[static_cast<std::size_t>(row) * width + col];
    }
    double& at(int row, int col) {
        return pixels[static_cast<std::size_t>(row) * width + col];
    }
};

/// Loads an image as grayscale luma. PNM (P2/P3/P5/P6, 8-bit) is always
/// supported; PNG/JPEG decode through OpenCV when the build enables it.
/// Color inputs convert with luma = 0.299 R + 0.587 G + 0.114 B.
/// Throws ImageDecodeError on unreadable or unsupported files.
GrayImage load_gray_image(const std::filesystem::path& path);

/// Parses a PNM byte buffer (P2/P3/P5/P6, maxval <= 255).
GrayImage decode_pnm(const std::vector<unsigned char>& data);

/// True when the build can decode formats beyond PNM (PNG, JPEG, ...).
bool supports_extended_formats();

/// Exact area-average resampling: every output pixel is the mean of the
/// source region it covers, with fractional pixels weighted by coverage.
/// When the dimensions already match, the grid passes through unchanged.
GrayImage resample_area(const GrayImage& in, int out_width, int out_height);

}  // namespace mosaiclink
