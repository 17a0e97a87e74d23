#pragma once

#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"

namespace cacrypt {

struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels; // row-major, one byte per pixel

    std::uint8_t at(int x, int y) const { return pixels[std::size_t(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return pixels[std::size_t(y) * width + x]; }
};

namespace detail {

struct PgmCursor {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;

    // Header tokens are separated by whitespace; '#' starts a comment that
    // runs to end of line.
    std::string token() {
        while (pos < bytes.size()) {
            const char c = char(bytes[pos]);
            if (c == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
            } else {
                break;
            }
        }
        std::string tok;
        while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos])) &&
               bytes[pos] != '#')
            tok += char(bytes[pos++]);
        if (tok.empty()) throw FormatError("pgm: unexpected end of header");
        return tok;
    }

    int number(const char* what) {
        const std::string tok = token();
        int value = 0;
        for (char c : tok) {
            if (c < '0' || c > '9')
                throw FormatError(std::string("pgm: bad ") + what + " value \"" + tok + "\"");
            value = value * 10 + (c - '0');
            if (value > 1 << 20)
                throw FormatError(std::string("pgm: ") + what + " out of range");
        }
        return value;
    }
};

} // namespace detail

// Binary PGM (P5) with maxval 255. The ASCII variant (P2) is rejected.
inline GrayImage load_pgm(std::span<const std::uint8_t> bytes) {
    detail::PgmCursor in{bytes};
    const std::string magic = in.token();
    if (magic == "P2")
        throw FormatError("pgm: ASCII (P2) images are not supported, use binary P5");
    if (magic != "P5")
        throw FormatError("pgm: bad magic \"" + magic + "\"");

    GrayImage img;
    img.width = in.number("width");
    img.height = in.number("height");
    const int maxval = in.number("maxval");
    if (img.width < 1 || img.height < 1)
        throw FormatError("pgm: dimensions must be positive");
    if (maxval != 255)
        throw FormatError("pgm: only maxval 255 is supported, got " + std::to_string(maxval));

    // exactly one whitespace byte between the header and the payload
    if (in.pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[in.pos])))
        throw FormatError("pgm: missing separator before pixel data");
    ++in.pos;

    const std::size_t need = std::size_t(img.width) * std::size_t(img.height);
    if (bytes.size() - in.pos < need)
        throw FormatError("pgm: truncated pixel payload");
    img.pixels.assign(bytes.begin() + std::ptrdiff_t(in.pos),
                      bytes.begin() + std::ptrdiff_t(in.pos + need));
    return img;
}

inline std::vector<std::uint8_t> save_pgm(const GrayImage& img) {
    if (img.width < 1 || img.height < 1 ||
        img.pixels.size() != std::size_t(img.width) * std::size_t(img.height))
        throw std::invalid_argument("save_pgm: inconsistent image");
    const std::string header =
        "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), img.pixels.begin(), img.pixels.end());
    return out;
}

inline std::array<std::uint64_t, 256> histogram(const GrayImage& img) {
    std::array<std::uint64_t, 256> counts{};
    for (std::uint8_t p : img.pixels) counts[p]++;
    return counts;
}

namespace detail {

// Iterative radix-2 decimation-in-time FFT, forward (e^{-2 pi i k n / N}),
// unnormalized. n must be a power of two.
inline void fft_in_place(std::complex<double>* a, std::size_t n) {
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = -2.0 * std::numbers::pi / double(len);
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> w = std::polar(1.0, angle * double(k));
                const std::complex<double> u = a[start + k];
                const std::complex<double> v = a[start + k + len / 2] * w;
                a[start + k] = u + v;
                a[start + k + len / 2] = u - v;
            }
        }
    }
}

} // namespace detail

// Power spectrum, DC-centered: squared magnitudes of the unnormalized 2D
// DFT of the mean-subtracted pixels, quadrant-swapped so the zero frequency
// sits at (height/2, width/2). With this convention the magnitudes sum to
// width*height times the pixel variance sum (Parseval).
struct Spectrum {
    int width = 0;
    int height = 0;
    std::vector<double> magnitudes; // row-major
};

inline Spectrum power_spectrum(const GrayImage& img) {
    if (img.width < 1 || img.height < 1 ||
        img.pixels.size() != std::size_t(img.width) * std::size_t(img.height))
        throw std::invalid_argument("power_spectrum: inconsistent image");
    if (!std::has_single_bit(unsigned(img.width)) || !std::has_single_bit(unsigned(img.height)))
        throw std::invalid_argument("power_spectrum: dimensions must be powers of two (crop_to_pow2 helps)");

    const std::size_t w = std::size_t(img.width), h = std::size_t(img.height);
    double mean = 0.0;
    for (std::uint8_t p : img.pixels) mean += p;
    mean /= double(w * h);

    std::vector<std::complex<double>> data(w * h);
    for (std::size_t k = 0; k < w * h; ++k) data[k] = double(img.pixels[k]) - mean;

    for (std::size_t y = 0; y < h; ++y) detail::fft_in_place(&data[y * w], w);
    std::vector<std::complex<double>> column(h);
    for (std::size_t x = 0; x < w; ++x) {
        for (std::size_t y = 0; y < h; ++y) column[y] = data[y * w + x];
        detail::fft_in_place(column.data(), h);
        for (std::size_t y = 0; y < h; ++y) data[y * w + x] = column[y];
    }

    Spectrum spec;
    spec.width = img.width;
    spec.height = img.height;
    spec.magnitudes.resize(w * h);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) {
            const std::size_t sy = (y + h / 2) % h;
            const std::size_t sx = (x + w / 2) % w;
            spec.magnitudes[sy * w + sx] = std::norm(data[y * w + x]);
        }
    return spec;
}

struct SpectrumFlatness {
    double value = 0.0;     // geometric mean / arithmetic mean over non-DC bins
    bool degenerate = false; // set when every non-DC bin is zero
};

// 1.0 means a perfectly flat (white-noise) spectrum. The DC bin is
// excluded; any exactly-zero bin drives the geometric mean to zero.
inline SpectrumFlatness spectrum_flatness(const Spectrum& spec) {
    const std::size_t w = std::size_t(spec.width), h = std::size_t(spec.height);
    if (w < 1 || h < 1 || spec.magnitudes.size() != w * h)
        throw std::invalid_argument("spectrum_flatness: inconsistent spectrum");
    const std::size_t dc = (h / 2) * w + (w / 2);

    double arith = 0.0;
    double log_sum = 0.0;
    bool has_zero = false;
    std::size_t bins = 0;
    for (std::size_t k = 0; k < spec.magnitudes.size(); ++k) {
        if (k == dc) continue;
        const double m = spec.magnitudes[k];
        arith += m;
        if (m == 0.0)
            has_zero = true;
        else
            log_sum += std::log(m);
        ++bins;
    }
    if (bins == 0 || arith == 0.0) return {0.0, true};
    arith /= double(bins);
    const double geo = has_zero ? 0.0 : std::exp(log_sum / double(bins));
    return {geo / arith, false};
}

// Centered crop to the largest power-of-two dimensions that fit.
inline GrayImage crop_to_pow2(const GrayImage& img) {
    if (img.width < 1 || img.height < 1)
        throw std::invalid_argument("crop_to_pow2: empty image");
    const int pw = int(std::bit_floor(unsigned(img.width)));
    const int ph = int(std::bit_floor(unsigned(img.height)));
    if (pw == img.width && ph == img.height) return img;
    GrayImage out;
    out.width = pw;
    out.height = ph;
    out.pixels.resize(std::size_t(pw) * ph);
    const int x0 = (img.width - pw) / 2;
    const int y0 = (img.height - ph) / 2;
    for (int y = 0; y < ph; ++y)
        for (int x = 0; x < pw; ++x)
            out.at(x, y) = img.at(x0 + x, y0 + y);
    return out;
}

} // namespace cacrypt
