#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wbsdf/errors.hpp"

namespace wbsdf {

// Spectral accumulation buffer: per-pixel per-bin signed sums and sample
// counts. Finalization averages, records the most negative pixel (the
// aperture-integration nonnegativity diagnostic), clamps at zero, and
// converts to RGB.
class SpectralImage {
  public:
    SpectralImage() = default;
    SpectralImage(std::size_t width, std::size_t height, std::size_t bins);

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::size_t bins() const { return bins_; }

    void add(std::size_t px, std::size_t py, std::size_t bin, double value);
    void add_count(std::size_t px, std::size_t py, std::uint64_t n);

    double sum(std::size_t px, std::size_t py, std::size_t bin) const;
    std::uint64_t count(std::size_t px, std::size_t py) const;

    // mean signed radiance per bin (0 when no samples)
    double mean(std::size_t px, std::size_t py, std::size_t bin) const;

    // a += b elementwise; layouts must match
    void accumulate(const SpectralImage& other);

    struct Finalized {
        std::size_t width = 0, height = 0, bins = 0;
        std::vector<double> values;        // clamped means, bin-major per pixel
        double min_before_clamp = 0.0;
        double max_value = 0.0;
    };
    Finalized finalize() const;

  private:
    std::size_t width_ = 0, height_ = 0, bins_ = 0;
    std::vector<double> sums_;
    std::vector<std::uint64_t> counts_;
};

// Finalized intensity image addition (incoherent superposition).
SpectralImage::Finalized incoherent_sum(const std::vector<SpectralImage::Finalized>& images);

// Spectral-to-RGB: 3 bins map directly (bins ordered blue..red); other counts
// box-sum into thirds.
struct RgbImage {
    std::size_t width = 0, height = 0;
    std::vector<float> rgb;  // 3 floats per pixel, row-major, top row first
};
RgbImage to_rgb(const SpectralImage::Finalized& img);

// PFM color image: header "PF", width height, scale -1.0 (little-endian),
// rows written bottom-to-top.
void write_pfm(const RgbImage& img, const std::string& path);
RgbImage read_pfm(const std::string& path);

// grayscale PFM ("Pf"), used for depth maps
void write_pfm_gray(const std::vector<float>& data, std::size_t width, std::size_t height,
                    const std::string& path);
std::vector<float> read_pfm_gray(const std::string& path, std::size_t& width, std::size_t& height);

// 8-bit PPM (P6), gamma 2.2, values scaled so the brightest pixel maps to 255
// unless a positive exposure is given.
void write_ppm(const RgbImage& img, const std::string& path, double exposure = 0.0);

}  // namespace wbsdf
