#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "geom.hpp"
#include "rng.hpp"

namespace gac {

// row-major grayscale image with intensities in [0, 1]
struct RasterImage {
    int width = 0, height = 0;
    std::vector<double> pix;

    double at(int x, int y) const { return pix[std::size_t(y) * width + x]; }
    double& at(int x, int y) { return pix[std::size_t(y) * width + x]; }
};

// row-major segment ids; 0 marks watershed-line pixels, basins are 1..basins
struct LabelMap {
    int width = 0, height = 0;
    std::vector<int> labels;
    int basins = 0;

    int at(int x, int y) const { return labels[std::size_t(y) * width + x]; }
    int& at(int x, int y) { return labels[std::size_t(y) * width + x]; }
};

namespace detail {

inline const int off8x[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
inline const int off8y[8] = {-1, -1, -1, 0, 0, 1, 1, 1};

// header tokens of a PGM file, skipping whitespace and # comments
struct PgmTokenizer {
    const std::string& data;
    std::size_t pos = 0;

    explicit PgmTokenizer(const std::string& d) : data(d) {}

    std::string next() {
        while (pos < data.size()) {
            const char c = data[pos];
            if (c == '#') {
                while (pos < data.size() && data[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
            } else {
                break;
            }
        }
        const std::size_t start = pos;
        while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos])) &&
               data[pos] != '#')
            ++pos;
        if (start == pos) throw std::runtime_error("pgm: truncated header");
        return data.substr(start, pos - start);
    }

    long next_int(const char* what) {
        const std::string tok = next();
        try {
            std::size_t used = 0;
            const long v = std::stol(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw std::runtime_error(std::string("pgm: malformed ") + what + " '" + tok + "'");
        }
    }
};

} // namespace detail

inline RasterImage load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("pgm: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string data = ss.str();

    detail::PgmTokenizer tok(data);
    const std::string magic = tok.next();
    if (magic != "P2" && magic != "P5")
        throw std::runtime_error("pgm: unsupported magic '" + magic + "' in " + path);
    const long w = tok.next_int("width");
    const long h = tok.next_int("height");
    const long maxval = tok.next_int("maxval");
    if (w <= 0 || h <= 0) throw std::runtime_error("pgm: bad dimensions in " + path);
    if (maxval <= 0 || maxval > 65535) throw std::runtime_error("pgm: bad maxval in " + path);

    RasterImage img;
    img.width = int(w);
    img.height = int(h);
    img.pix.resize(std::size_t(w) * h);
    const std::size_t count = img.pix.size();

    if (magic == "P2") {
        for (std::size_t i = 0; i < count; ++i) {
            const long v = tok.next_int("pixel");
            if (v < 0 || v > maxval) throw std::runtime_error("pgm: pixel out of range in " + path);
            img.pix[i] = double(v) / double(maxval);
        }
    } else {
        std::size_t pos = tok.pos;
        if (pos >= data.size()) throw std::runtime_error("pgm: truncated payload in " + path);
        ++pos; // single whitespace byte after maxval
        const int bytes = maxval > 255 ? 2 : 1;
        if (data.size() - pos < count * bytes)
            throw std::runtime_error("pgm: truncated payload in " + path);
        for (std::size_t i = 0; i < count; ++i) {
            unsigned v = static_cast<unsigned char>(data[pos + i * bytes]);
            if (bytes == 2) // 16-bit samples are big endian
                v = (v << 8) | static_cast<unsigned char>(data[pos + i * bytes + 1]);
            img.pix[i] = double(v) / double(maxval);
        }
    }
    return img;
}

inline void save_pgm(const RasterImage& img, const std::string& path, int maxval = 255,
                     bool binary = true) {
    if (maxval <= 0 || maxval > 255)
        throw std::invalid_argument("save_pgm: maxval must be in 1..255");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_pgm: cannot open " + path);
    out << (binary ? "P5" : "P2") << "\n" << img.width << " " << img.height << "\n" << maxval << "\n";
    for (std::size_t i = 0; i < img.pix.size(); ++i) {
        const double clamped = std::clamp(img.pix[i], 0.0, 1.0);
        const int q = int(std::lround(clamped * maxval));
        if (binary)
            out.put(static_cast<char>(q));
        else
            out << q << (i % 16 == 15 ? "\n" : " ");
    }
    if (!binary) out << "\n";
    if (!out) throw std::runtime_error("save_pgm: write failed for " + path);
}

// 3x3 Sobel magnitude with edge replication, rescaled by the global max
inline RasterImage sobel_gradient_magnitude(const RasterImage& img) {
    if (img.width < 3 || img.height < 3)
        throw std::invalid_argument("sobel_gradient_magnitude: image too small, need 3x3");
    RasterImage out;
    out.width = img.width;
    out.height = img.height;
    out.pix.assign(img.pix.size(), 0.0);
    auto clamped = [&](int x, int y) {
        x = std::clamp(x, 0, img.width - 1);
        y = std::clamp(y, 0, img.height - 1);
        return img.at(x, y);
    };
    double maxmag = 0.0;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            // each direction as (sum of one side) - (sum of the other): the two
            // sides are accumulated in the same order, so flat regions cancel
            // exactly instead of leaving rounding residue for the rescale to blow up
            const double right =
                clamped(x + 1, y - 1) + 2.0 * clamped(x + 1, y) + clamped(x + 1, y + 1);
            const double left =
                clamped(x - 1, y - 1) + 2.0 * clamped(x - 1, y) + clamped(x - 1, y + 1);
            const double below =
                clamped(x - 1, y + 1) + 2.0 * clamped(x, y + 1) + clamped(x + 1, y + 1);
            const double above =
                clamped(x - 1, y - 1) + 2.0 * clamped(x, y - 1) + clamped(x + 1, y - 1);
            const double gx = right - left;
            const double gy = below - above;
            const double m = std::hypot(gx, gy);
            out.at(x, y) = m;
            maxmag = std::max(maxmag, m);
        }
    }
    if (maxmag > 0.0)
        for (double& p : out.pix) p /= maxmag;
    return out;
}

// immersion watershed: label plateau regional minima, then flood in gray
// order with a FIFO tiebreak; pixels reached by two basins become lines (0)
inline LabelMap watershed_segments(const RasterImage& gradmag) {
    const int W = gradmag.width, H = gradmag.height;
    LabelMap lm;
    lm.width = W;
    lm.height = H;
    lm.labels.assign(std::size_t(W) * H, -1);

    // plateau-merged regional minima
    std::vector<std::uint8_t> visited(lm.labels.size(), 0);
    std::vector<std::int64_t> plateau;
    int next_label = 0;
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            const std::size_t s = std::size_t(y) * W + x;
            if (visited[s]) continue;
            const double level = gradmag.pix[s];
            plateau.clear();
            plateau.push_back(std::int64_t(s));
            visited[s] = 1;
            bool is_min = true;
            for (std::size_t head = 0; head < plateau.size(); ++head) {
                const int px = int(plateau[head] % W), py = int(plateau[head] / W);
                for (int k = 0; k < 8; ++k) {
                    const int nx = px + detail::off8x[k], ny = py + detail::off8y[k];
                    if (nx < 0 || ny < 0 || nx >= W || ny >= H) continue;
                    const std::size_t q = std::size_t(ny) * W + nx;
                    const double qv = gradmag.pix[q];
                    if (qv < level) {
                        is_min = false;
                    } else if (qv == level && !visited[q]) {
                        visited[q] = 1;
                        plateau.push_back(std::int64_t(q));
                    }
                }
            }
            if (is_min) {
                ++next_label;
                for (const std::int64_t q : plateau) lm.labels[std::size_t(q)] = next_label;
            } else {
                // plateau pixels stay unlabeled; reset visited is not needed
                // since each plateau is visited exactly once
            }
        }
    }
    lm.basins = next_label;

    // priority flood from the minima
    using Entry = std::tuple<double, std::uint64_t, std::int64_t>; // value, fifo seq, pixel
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> pq;
    std::vector<std::uint8_t> queued(lm.labels.size(), 0);
    std::uint64_t seq = 0;
    auto push_far_neighbors = [&](std::size_t s) {
        const int px = int(s % W), py = int(s / W);
        for (int k = 0; k < 8; ++k) {
            const int nx = px + detail::off8x[k], ny = py + detail::off8y[k];
            if (nx < 0 || ny < 0 || nx >= W || ny >= H) continue;
            const std::size_t q = std::size_t(ny) * W + nx;
            if (lm.labels[q] == -1 && !queued[q]) {
                queued[q] = 1;
                pq.emplace(gradmag.pix[q], seq++, std::int64_t(q));
            }
        }
    };
    for (std::size_t s = 0; s < lm.labels.size(); ++s)
        if (lm.labels[s] > 0) push_far_neighbors(s);

    while (!pq.empty()) {
        const auto [val, sq, sp] = pq.top();
        pq.pop();
        const std::size_t s = std::size_t(sp);
        const int px = int(s % W), py = int(s / W);
        int label = 0; // stays 0 when basins disagree or only lines surround it
        for (int k = 0; k < 8; ++k) {
            const int nx = px + detail::off8x[k], ny = py + detail::off8y[k];
            if (nx < 0 || ny < 0 || nx >= W || ny >= H) continue;
            const int l = lm.labels[std::size_t(ny) * W + nx];
            if (l > 0) {
                if (label == 0)
                    label = l;
                else if (label != l)
                    label = -2; // conflicting claims
            }
        }
        lm.labels[s] = label == -2 ? 0 : label;
        push_far_neighbors(s);
    }
    return lm;
}

// reassigns line pixels (label 0) to the neighboring basin whose pixel has
// the lowest topography value, so basins tile the image before centroiding
inline LabelMap absorb_watershed_lines(const LabelMap& lm, const RasterImage& gradmag) {
    if (lm.width != gradmag.width || lm.height != gradmag.height)
        throw std::invalid_argument("absorb_watershed_lines: dimension mismatch");
    LabelMap out = lm;
    const int W = lm.width, H = lm.height;
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<std::pair<std::size_t, int>> assign;
        for (int y = 0; y < H; ++y) {
            for (int x = 0; x < W; ++x) {
                const std::size_t s = std::size_t(y) * W + x;
                if (out.labels[s] != 0) continue;
                int best = 0;
                double best_val = 0.0;
                for (int k = 0; k < 8; ++k) {
                    const int nx = x + detail::off8x[k], ny = y + detail::off8y[k];
                    if (nx < 0 || ny < 0 || nx >= W || ny >= H) continue;
                    const int l = out.at(nx, ny);
                    if (l <= 0) continue;
                    const double v = gradmag.at(nx, ny);
                    if (best == 0 || v < best_val || (v == best_val && l < best)) {
                        best = l;
                        best_val = v;
                    }
                }
                if (best > 0) assign.emplace_back(s, best);
            }
        }
        for (const auto& [s, l] : assign) {
            out.labels[s] = l;
            changed = true;
        }
        if (!changed) break;
    }
    return out;
}

// one entry per basin: mean pixel-center position normalized to the unit
// square, and the mean intensity over the basin; ordered by label
inline std::vector<std::pair<Point2, double>> segment_centroids(const LabelMap& lm,
                                                                const RasterImage& img) {
    if (lm.width != img.width || lm.height != img.height)
        throw std::invalid_argument("segment_centroids: dimension mismatch");
    if (lm.basins <= 0) throw std::invalid_argument("segment_centroids: empty label map");
    std::vector<double> sx(lm.basins + 1, 0.0), sy(lm.basins + 1, 0.0), si(lm.basins + 1, 0.0);
    std::vector<std::int64_t> cnt(lm.basins + 1, 0);
    for (int y = 0; y < lm.height; ++y) {
        for (int x = 0; x < lm.width; ++x) {
            const int l = lm.at(x, y);
            if (l <= 0) continue;
            sx[l] += x + 0.5;
            sy[l] += y + 0.5;
            si[l] += img.at(x, y);
            cnt[l]++;
        }
    }
    std::vector<std::pair<Point2, double>> out;
    out.reserve(lm.basins);
    for (int l = 1; l <= lm.basins; ++l) {
        if (cnt[l] == 0) continue; // basin fully absorbed elsewhere (cannot happen for watershed output)
        const double c = double(cnt[l]);
        out.push_back({Point2{sx[l] / c / lm.width, sy[l] / c / lm.height}, si[l] / c});
    }
    return out;
}

// n distinct pixels uniformly at random, reported at their normalized centers
inline std::vector<std::pair<Point2, double>> sample_image_random(const RasterImage& img,
                                                                  std::size_t n,
                                                                  std::uint64_t seed) {
    const std::size_t total = img.pix.size();
    if (n == 0) throw std::invalid_argument("sample_image_random: n must be at least 1");
    if (n > total)
        throw std::invalid_argument("sample_image_random: n exceeds pixel count " +
                                    std::to_string(total));
    std::vector<std::uint32_t> idx(total);
    for (std::size_t i = 0; i < total; ++i) idx[i] = std::uint32_t(i);
    Rng rng(seed);
    std::vector<std::pair<Point2, double>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) { // partial Fisher-Yates
        const std::size_t j = i + std::size_t(rng.below(total - i));
        std::swap(idx[i], idx[j]);
        const std::uint32_t s = idx[i];
        const int x = int(s % img.width), y = int(s / img.width);
        out.push_back({Point2{(x + 0.5) / img.width, (y + 0.5) / img.height}, img.pix[s]});
    }
    return out;
}

} // namespace gac
