#include "mosaiclink/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <string>

#include "mosaiclink/errors.hpp"

#ifdef MOSAICLINK_HAVE_OPENCV
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#endif

namespace mosaiclink {

namespace {

constexpr double kLumaR = 0.299;
constexpr double kLumaG = 0.587;
constexpr double kLumaB = 0.114;

class PnmScanner {
public:
    PnmScanner(const std::vector<unsigned char>& data, std::size_t pos)
        : data_(data), pos_(pos) {}

    // Next whitespace-separated token, skipping '#' comments.
    int next_int() {
        skip_space_and_comments();
        if (pos_ >= data_.size() || !std::isdigit(data_[pos_])) {
            throw ImageDecodeError("PNM header: expected integer");
        }
        long v = 0;
        while (pos_ < data_.size() && std::isdigit(data_[pos_])) {
            v = v * 10 + (data_[pos_] - '0');
            if (v > 1'000'000'000) throw ImageDecodeError("PNM header: integer out of range");
            ++pos_;
        }
        return static_cast<int>(v);
    }

    // Raw sections start after exactly one whitespace byte.
    std::size_t raw_start() const { return pos_ + 1; }

    std::size_t pos() const { return pos_; }

private:
    void skip_space_and_comments() {
        while (pos_ < data_.size()) {
            if (std::isspace(data_[pos_])) {
                ++pos_;
            } else if (data_[pos_] == '#') {
                while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    const std::vector<unsigned char>& data_;
    std::size_t pos_;
};

GrayImage from_channels(int width, int height, int channels, int maxval,
                        const std::vector<double>& raw) {
    GrayImage img;
    img.width = width;
    img.height = height;
    img.pixels.resize(static_cast<std::size_t>(width) * height);
    const double scale = 255.0 / maxval;
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        if (channels == 1) {
            img.pixels[i] = raw[i] * scale;
        } else {
            const double r = raw[i * 3] * scale;
            const double g = raw[i * 3 + 1] * scale;
            const double b = raw[i * 3 + 2] * scale;
            img.pixels[i] = kLumaR * r + kLumaG * g + kLumaB * b;
        }
    }
    return img;
}

}  // namespace

GrayImage decode_pnm(const std::vector<unsigned char>& data) {
    if (data.size() < 2 || data[0] != 'P') {
        throw ImageDecodeError("not a PNM file (missing P? magic)");
    }
    const char kind = static_cast<char>(data[1]);
    if (kind != '2' && kind != '3' && kind != '5' && kind != '6') {
        throw ImageDecodeError(std::string("unsupported PNM variant P") + kind);
    }
    const bool color = (kind == '3' || kind == '6');
    const bool binary = (kind == '5' || kind == '6');
    const int channels = color ? 3 : 1;

    PnmScanner scan(data, 2);
    const int width = scan.next_int();
    const int height = scan.next_int();
    const int maxval = scan.next_int();
    if (width <= 0 || height <= 0) {
        throw ImageDecodeError("PNM with zero dimension");
    }
    if (maxval <= 0 || maxval > 255) {
        throw ImageDecodeError("unsupported PNM maxval " + std::to_string(maxval) +
                               " (only 8-bit images are handled)");
    }

    const std::size_t count = static_cast<std::size_t>(width) * height * channels;
    std::vector<double> raw(count);
    if (binary) {
        const std::size_t start = scan.raw_start();
        if (data.size() < start + count) {
            throw ImageDecodeError("PNM pixel data truncated");
        }
        for (std::size_t i = 0; i < count; ++i) {
            raw[i] = static_cast<double>(data[start + i]);
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            const int v = scan.next_int();
            if (v > maxval) throw ImageDecodeError("PNM sample exceeds maxval");
            raw[i] = static_cast<double>(v);
        }
    }
    return from_channels(width, height, channels, maxval, raw);
}

GrayImage load_gray_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ImageDecodeError("cannot open image file: " + path.string());
    }
    std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (data.size() >= 2 && data[0] == 'P' && data[1] >= '1' && data[1] <= '6') {
        return decode_pnm(data);
    }

#ifdef MOSAICLINK_HAVE_OPENCV
    cv::Mat mat = cv::imdecode(cv::Mat(1, static_cast<int>(data.size()), CV_8UC1, data.data()),
                               cv::IMREAD_COLOR);
    if (mat.empty()) {
        throw ImageDecodeError("cannot decode image: " + path.string());
    }
    GrayImage img;
    img.width = mat.cols;
    img.height = mat.rows;
    img.pixels.resize(static_cast<std::size_t>(mat.cols) * mat.rows);
    for (int r = 0; r < mat.rows; ++r) {
        const cv::Vec3b* row = mat.ptr<cv::Vec3b>(r);
        for (int c = 0; c < mat.cols; ++c) {
            // OpenCV decodes to BGR order.
            img.at(r, c) = kLumaB * row[c][0] + kLumaG * row[c][1] + kLumaR * row[c][2];
        }
    }
    return img;
#else
    throw ImageDecodeError("unsupported image format (built without OpenCV): " + path.string());
#endif
}

bool supports_extended_formats() {
#ifdef MOSAICLINK_HAVE_OPENCV
    return true;
#else
    return false;
#endif
}

GrayImage resample_area(const GrayImage& in, int out_width, int out_height) {
    if (in.width <= 0 || in.height <= 0 || in.pixels.empty()) {
        throw ImageDecodeError("cannot resample an empty image");
    }
    if (in.width == out_width && in.height == out_height) {
        return in;
    }
    GrayImage out;
    out.width = out_width;
    out.height = out_height;
    out.pixels.resize(static_cast<std::size_t>(out_width) * out_height);

    const double sx = static_cast<double>(in.width) / out_width;
    const double sy = static_cast<double>(in.height) / out_height;
    for (int oy = 0; oy < out_height; ++oy) {
        const double y0 = oy * sy;
        const double y1 = (oy + 1) * sy;
        for (int ox = 0; ox < out_width; ++ox) {
            const double x0 = ox * sx;
            const double x1 = (ox + 1) * sx;
            double sum = 0.0;
            for (int iy = static_cast<int>(std::floor(y0)); iy < static_cast<int>(std::ceil(y1)); ++iy) {
                const double wy = std::min<double>(y1, iy + 1) - std::max<double>(y0, iy);
                if (wy <= 0.0) continue;
                for (int ix = static_cast<int>(std::floor(x0)); ix < static_cast<int>(std::ceil(x1)); ++ix) {
                    const double wx = std::min<double>(x1, ix + 1) - std::max<double>(x0, ix);
                    if (wx <= 0.0) continue;
                    sum += in.at(std::min(iy, in.height - 1), std::min(ix, in.width - 1)) * wx * wy;
                }
            }
            out.at(oy, ox) = sum / ((x1 - x0) * (y1 - y0));
        }
    }
    return out;
}

}  // namespace mosaiclink
