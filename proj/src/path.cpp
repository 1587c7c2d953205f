#include "nhqhe/path.hpp"

#include "nhqhe/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nhqhe {

namespace {

bool same_point(const CurveSample& a, const CurveSample& b) {
    const double scale = std::max({1.0, std::abs(a.J), std::abs(a.phi)});
    return std::abs(a.J - b.J) <= 1e-12 * scale && std::abs(a.phi - b.phi) <= 1e-12 * scale;
}

}  // namespace

ControlPath::ControlPath(std::vector<PathSegment> segments, bool closed)
    : segments_(std::move(segments)), closed_(closed) {
    if (segments_.empty()) {
        throw DomainError("control path needs at least one segment");
    }
    for (std::size_t k = 1; k < segments_.size(); ++k) {
        if (!same_point(segments_[k - 1].at(1.0), segments_[k].at(0.0))) {
            throw DomainError("control path segments " + std::to_string(k - 1) + " and " + std::to_string(k) +
                              " do not join");
        }
    }
    if (closed_ && !same_point(segments_.back().at(1.0), segments_.front().at(0.0))) {
        throw DomainError("closed control path does not return to its start");
    }
}

PlanePoint ControlPath::start() const {
    const CurveSample c = segments_.front().at(0.0);
    return {c.J, c.phi};
}

PlanePoint ControlPath::end() const {
    const CurveSample c = segments_.back().at(1.0);
    return {c.J, c.phi};
}

double ControlPath::max_J() const {
    double m = 0.0;
    for (const auto& seg : segments_) {
        for (int k = 0; k <= 16; ++k) {
            m = std::max(m, std::abs(seg.at(k / 16.0).J));
        }
    }
    return m;
}

PathSegment line_segment(PlanePoint from, PlanePoint to, std::string label) {
    const double dJ = to.J - from.J;
    const double dphi = to.phi - from.phi;
    return PathSegment{[from, dJ, dphi](double s) {
                           return CurveSample{from.J + s * dJ, from.phi + s * dphi, dJ, dphi};
                       },
                       true, std::move(label)};
}

ControlPath polyline(std::span<const PlanePoint> vertices, bool closed) {
    if (vertices.size() < 2) {
        throw DomainError("polyline needs at least two vertices");
    }
    std::vector<PathSegment> segs;
    for (std::size_t k = 0; k + 1 < vertices.size(); ++k) {
        segs.push_back(line_segment(vertices[k], vertices[k + 1]));
    }
    if (closed) {
        segs.push_back(line_segment(vertices.back(), vertices.front()));
    }
    return ControlPath(std::move(segs), closed);
}

ControlPath otto_rectangle(double J1, double J2, double phi1, double phi2) {
    const PlanePoint a{J1, phi1}, b{J1, phi2}, c{J2, phi2}, d{J2, phi1};
    std::vector<PathSegment> segs{line_segment(a, b, "A->B"), line_segment(b, c, "B->C"),
                                  line_segment(c, d, "C->D"), line_segment(d, a, "D->A")};
    return ControlPath(std::move(segs), true);
}

ControlPath ellipse(PlanePoint center, double a, double b, int pieces, double start_angle) {
    if (pieces < 1) {
        throw DomainError("ellipse needs at least one piece");
    }
    std::vector<PathSegment> segs;
    const double sweep = 2.0 * std::numbers::pi / pieces;
    for (int k = 0; k < pieces; ++k) {
        const double t0 = start_angle + k * sweep;
        segs.push_back(PathSegment{[center, a, b, t0, sweep](double s) {
                                       const double t = t0 + sweep * s;
                                       return CurveSample{center.J + a * std::cos(t), center.phi + b * std::sin(t),
                                                          -a * sweep * std::sin(t), b * sweep * std::cos(t)};
                                   },
                                   true, "arc" + std::to_string(k)});
    }
    return ControlPath(std::move(segs), true);
}

ControlPath fourier_loop(PlanePoint center, std::vector<LoopHarmonic> harmonics, int pieces) {
    if (pieces < 1) {
        throw DomainError("loop needs at least one piece");
    }
    auto eval = [center, harmonics = std::move(harmonics)](double u) {
        CurveSample c{center.J, center.phi, 0.0, 0.0};
        for (std::size_t k = 0; k < harmonics.size(); ++k) {
            const LoopHarmonic& h = harmonics[k];
            const double w = 2.0 * std::numbers::pi * static_cast<double>(k + 1);
            const double cs = std::cos(w * u), sn = std::sin(w * u);
            c.J += h.J_cos * cs + h.J_sin * sn;
            c.phi += h.phi_cos * cs + h.phi_sin * sn;
            c.dJ += w * (h.J_sin * cs - h.J_cos * sn);
            c.dphi += w * (h.phi_sin * cs - h.phi_cos * sn);
        }
        return c;
    };
    std::vector<PathSegment> segs;
    const double width = 1.0 / pieces;
    for (int k = 0; k < pieces; ++k) {
        const double u0 = k * width;
        segs.push_back(PathSegment{[eval, u0, width](double s) {
                                       CurveSample c = eval(u0 + width * s);
                                       c.dJ *= width;
                                       c.dphi *= width;
                                       return c;
                                   },
                                   true, "piece" + std::to_string(k)});
        for (int j = 0; j <= 64; ++j) {
            if (!(segs.back().at(j / 64.0).J > 0.0)) {
                throw DomainError("loop leaves the J > 0 half-plane");
            }
        }
    }
    return ControlPath(std::move(segs), true);
}

}  // namespace nhqhe
