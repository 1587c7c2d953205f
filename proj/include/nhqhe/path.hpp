// path.hpp: piecewise-parametrized curves in the (J, phi) control plane.

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace nhqhe {

// Position and tangent of a curve at parameter s in [0, 1].
struct CurveSample {
    double J;
    double phi;
    double dJ;    // dJ/ds
    double dphi;  // dphi/ds
};

struct PathSegment {
    std::function<CurveSample(double)> at;
    bool smooth = true;
    std::string label;
};

struct PlanePoint {
    double J;
    double phi;
};

class ControlPath {
public:
    ControlPath() = default;
    // Validates that closed paths have matching endpoints within 1e-12 and
    // that consecutive segments join.
    ControlPath(std::vector<PathSegment> segments, bool closed);

    const std::vector<PathSegment>& segments() const noexcept { return segments_; }
    bool closed() const noexcept { return closed_; }

    PlanePoint start() const;
    PlanePoint end() const;
    // Largest J over the segment endpoints and a coarse sample of each segment.
    double max_J() const;

private:
    std::vector<PathSegment> segments_;
    bool closed_ = false;
};

PathSegment line_segment(PlanePoint from, PlanePoint to, std::string label = {});

// Straight legs through the vertices; closed adds the edge back to the first vertex.
ControlPath polyline(std::span<const PlanePoint> vertices, bool closed);

// Rectangle A(J1, phi1) -> B(J1, phi2) -> C(J2, phi2) -> D(J2, phi1) -> A.
ControlPath otto_rectangle(double J1, double J2, double phi1, double phi2);

// Ellipse J = J_c + a cos(2 pi s + start), phi = phi_c + b sin(2 pi s + start),
// split into `pieces` smooth segments. Counterclockwise in (J, phi) for a, b > 0.
ControlPath ellipse(PlanePoint center, double a, double b, int pieces = 4, double start_angle = 0.0);

// Coefficients of harmonic k (starting at 1) of a trigonometric loop:
// J(s) += J_cos cos(2 pi k s) + J_sin sin(2 pi k s), same for phi.
struct LoopHarmonic {
    double J_cos = 0.0;
    double J_sin = 0.0;
    double phi_cos = 0.0;
    double phi_sin = 0.0;
};

// Smooth closed loop given by a truncated Fourier series around `center`.
// Throws DomainError if J is not positive at the sampled points.
ControlPath fourier_loop(PlanePoint center, std::vector<LoopHarmonic> harmonics, int pieces = 4);

}  // namespace nhqhe
