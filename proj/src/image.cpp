#include "wbsdf/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace wbsdf {

SpectralImage::SpectralImage(std::size_t width, std::size_t height, std::size_t bins)
    : width_(width), height_(height), bins_(bins) {
    if (width == 0 || height == 0 || bins == 0)
        throw ArgumentError("SpectralImage: zero dimension");
    sums_.assign(width * height * bins, 0.0);
    counts_.assign(width * height, 0);
}

void SpectralImage::add(std::size_t px, std::size_t py, std::size_t bin, double value) {
    sums_[(py * width_ + px) * bins_ + bin] += value;
}

void SpectralImage::add_count(std::size_t px, std::size_t py, std::uint64_t n) {
    counts_[py * width_ + px] += n;
}

double SpectralImage::sum(std::size_t px, std::size_t py, std::size_t bin) const {
    return sums_[(py * width_ + px) * bins_ + bin];
}

std::uint64_t SpectralImage::count(std::size_t px, std::size_t py) const {
    return counts_[py * width_ + px];
}

double SpectralImage::mean(std::size_t px, std::size_t py, std::size_t bin) const {
    const std::uint64_t n = counts_[py * width_ + px];
    return n == 0 ? 0.0 : sums_[(py * width_ + px) * bins_ + bin] / static_cast<double>(n);
}

void SpectralImage::accumulate(const SpectralImage& other) {
    if (other.width_ != width_ || other.height_ != height_ || other.bins_ != bins_)
        throw ArgumentError("SpectralImage::accumulate: layout mismatch");
    for (std::size_t i = 0; i < sums_.size(); ++i) sums_[i] += other.sums_[i];
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

SpectralImage::Finalized SpectralImage::finalize() const {
    Finalized out;
    out.width = width_;
    out.height = height_;
    out.bins = bins_;
    out.values.assign(sums_.size(), 0.0);
    for (std::size_t p = 0; p < width_ * height_; ++p) {
        const std::uint64_t n = counts_[p];
        for (std::size_t b = 0; b < bins_; ++b) {
            const double v = n == 0 ? 0.0 : sums_[p * bins_ + b] / static_cast<double>(n);
            out.min_before_clamp = std::min(out.min_before_clamp, v);
            out.max_value = std::max(out.max_value, v);
            out.values[p * bins_ + b] = std::max(v, 0.0);
        }
    }
    return out;
}

SpectralImage::Finalized incoherent_sum(const std::vector<SpectralImage::Finalized>& images) {
    if (images.empty()) throw ArgumentError("incoherent_sum: no images");
    SpectralImage::Finalized out = images.front();
    for (std::size_t i = 1; i < images.size(); ++i) {
        const auto& im = images[i];
        if (im.width != out.width || im.height != out.height || im.bins != out.bins)
            throw ArgumentError("incoherent_sum: layout mismatch");
        for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] += im.values[k];
        out.min_before_clamp = std::min(out.min_before_clamp, im.min_before_clamp);
        out.max_value = std::max(out.max_value, im.max_value);
    }
    return out;
}

RgbImage to_rgb(const SpectralImage::Finalized& img) {
    RgbImage out;
    out.width = img.width;
    out.height = img.height;
    out.rgb.assign(img.width * img.height * 3, 0.0f);
    for (std::size_t p = 0; p < img.width * img.height; ++p) {
        double rgb[3] = {0, 0, 0};
        if (img.bins == 3) {
            // bins stored blue..red; RGB wants red first
            rgb[0] = img.values[p * 3 + 2];
            rgb[1] = img.values[p * 3 + 1];
            rgb[2] = img.values[p * 3 + 0];
        } else {
            for (std::size_t b = 0; b < img.bins; ++b) {
                const std::size_t band = std::min<std::size_t>(b * 3 / img.bins, 2);
                rgb[2 - band] += img.values[p * img.bins + b];
            }
        }
        for (int c = 0; c < 3; ++c) out.rgb[p * 3 + c] = static_cast<float>(rgb[c]);
    }
    return out;
}

void write_pfm(const RgbImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("write_pfm: cannot open " + path);
    out << "PF\n" << img.width << " " << img.height << "\n-1.0\n";
    // bottom-to-top row order
    for (std::size_t row = img.height; row-- > 0;) {
        out.write(reinterpret_cast<const char*>(&img.rgb[row * img.width * 3]),
                  static_cast<std::streamsize>(img.width * 3 * sizeof(float)));
    }
}

RgbImage read_pfm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("read_pfm: cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "PF") throw DataError("read_pfm: expected color PF file");
    std::size_t w, h;
    double scale;
    in >> w >> h >> scale;
    in.get();  // single whitespace after the header
    if (scale >= 0.0) throw DataError("read_pfm: big-endian PFM unsupported");
    RgbImage img;
    img.width = w;
    img.height = h;
    img.rgb.assign(w * h * 3, 0.0f);
    for (std::size_t row = h; row-- > 0;) {
        in.read(reinterpret_cast<char*>(&img.rgb[row * w * 3]),
                static_cast<std::streamsize>(w * 3 * sizeof(float)));
        if (!in) throw DataError("read_pfm: truncated data");
    }
    return img;
}

void write_pfm_gray(const std::vector<float>& data, std::size_t width, std::size_t height,
                    const std::string& path) {
    if (data.size() != width * height) throw ArgumentError("write_pfm_gray: size mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("write_pfm_gray: cannot open " + path);
    out << "Pf\n" << width << " " << height << "\n-1.0\n";
    for (std::size_t row = height; row-- > 0;)
        out.write(reinterpret_cast<const char*>(&data[row * width]),
                  static_cast<std::streamsize>(width * sizeof(float)));
}

std::vector<float> read_pfm_gray(const std::string& path, std::size_t& width,
                                 std::size_t& height) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("read_pfm_gray: cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "Pf") throw DataError("read_pfm_gray: expected grayscale Pf file");
    double scale;
    in >> width >> height >> scale;
    in.get();
    if (scale >= 0.0) throw DataError("read_pfm_gray: big-endian PFM unsupported");
    std::vector<float> data(width * height);
    for (std::size_t row = height; row-- > 0;) {
        in.read(reinterpret_cast<char*>(&data[row * width]),
                static_cast<std::streamsize>(width * sizeof(float)));
        if (!in) throw DataError("read_pfm_gray: truncated data");
    }
    return data;
}

void write_ppm(const RgbImage& img, const std::string& path, double exposure) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("write_ppm: cannot open " + path);
    double peak = exposure;
    if (peak <= 0.0) {
        for (float v : img.rgb) peak = std::max(peak, static_cast<double>(v));
        if (peak <= 0.0) peak = 1.0;
    }
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    std::vector<unsigned char> row(img.width * 3);
    for (std::size_t y = 0; y < img.height; ++y) {
        for (std::size_t i = 0; i < img.width * 3; ++i) {
            const double lin = std::clamp(static_cast<double>(img.rgb[y * img.width * 3 + i]) / peak, 0.0, 1.0);
            row[i] = static_cast<unsigned char>(std::lround(255.0 * std::pow(lin, 1.0 / 2.2)));
        }
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
}

}  // namespace wbsdf
