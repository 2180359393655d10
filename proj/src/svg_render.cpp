#include "qcp/svg_render.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qcp {

TripleLayout layout_triple(const std::array<double, 3>& radii, const std::array<double, 3>& phi) {
    for (double r : radii) {
        if (!(r > 0.0)) {
            throw Error(ErrorKind::Domain, "radii must be positive");
        }
    }
    for (double p : phi) {
        if (!(p >= 0.0 && p < 3.14159265358979323846)) {
            throw Error(ErrorKind::Domain, "intersection angles must lie in [0, pi)");
        }
    }
    if (!(euclidean_E(radii[0], radii[1], radii[2], phi[0], phi[1], phi[2]) > 0.0)) {
        throw Error(ErrorKind::Domain,
                    "degenerate configuration: euclidean_E <= 0 (no triangle of centers)");
    }

    TripleLayout layout;
    layout.radii = radii;
    // lengths[s]: distance between the two centers other than s.
    layout.lengths[0] = edge_length(radii[1], radii[2], phi[0], Background::Euclidean);
    layout.lengths[1] = edge_length(radii[0], radii[2], phi[1], Background::Euclidean);
    layout.lengths[2] = edge_length(radii[0], radii[1], phi[2], Background::Euclidean);

    const double li = layout.lengths[0];
    const double lj = layout.lengths[1];
    const double lk = layout.lengths[2];
    layout.centers[0] = {0.0, 0.0};
    layout.centers[1] = {lk, 0.0};
    const double x = (lj * lj + lk * lk - li * li) / (2.0 * lk);
    const double y2 = lj * lj - x * x;
    if (!(y2 > 0.0)) {
        throw Error(ErrorKind::Domain, "degenerate configuration: centers are collinear");
    }
    layout.centers[2] = {x, std::sqrt(y2)};

    for (int s = 0; s < 3; ++s) {
        const auto& a = layout.centers[s];
        const auto& b = layout.centers[(s + 1) % 3];
        const auto& c = layout.centers[(s + 2) % 3];
        const double ux = b[0] - a[0];
        const double uy = b[1] - a[1];
        const double vx = c[0] - a[0];
        const double vy = c[1] - a[1];
        layout.angles[s] = std::acos(
            std::clamp((ux * vx + uy * vy) /
                           (std::hypot(ux, uy) * std::hypot(vx, vy)),
                       -1.0, 1.0));
    }
    return layout;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(8);
    os << v;
    return os.str();
}

} // namespace

std::string render_triple_svg(const std::array<double, 3>& radii,
                              const std::array<double, 3>& phi) {
    const TripleLayout layout = layout_triple(radii, phi);

    double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
    for (int s = 0; s < 3; ++s) {
        min_x = std::min(min_x, layout.centers[s][0] - layout.radii[s]);
        max_x = std::max(max_x, layout.centers[s][0] + layout.radii[s]);
        min_y = std::min(min_y, layout.centers[s][1] - layout.radii[s]);
        max_y = std::max(max_y, layout.centers[s][1] + layout.radii[s]);
    }
    const double pad = 0.08 * std::max(max_x - min_x, max_y - min_y);
    min_x -= pad;
    min_y -= pad;
    max_x += pad;
    max_y += pad;
    const double stroke = 0.006 * std::max(max_x - min_x, max_y - min_y);
    const double font = 0.045 * std::max(max_x - min_x, max_y - min_y);

    // SVG y grows downward; flip via a group transform.
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" viewBox=\"" << fmt(min_x)
       << ' ' << fmt(-max_y) << ' ' << fmt(max_x - min_x) << ' ' << fmt(max_y - min_y)
       << "\">\n"
       << "<g transform=\"scale(1,-1)\">\n";
    static const char* kColors[3] = {"#1f77b4", "#d62728", "#2ca02c"};
    for (int s = 0; s < 3; ++s) {
        os << "  <circle cx=\"" << fmt(layout.centers[s][0]) << "\" cy=\""
           << fmt(layout.centers[s][1]) << "\" r=\"" << fmt(layout.radii[s])
           << "\" fill=\"none\" stroke=\"" << kColors[s] << "\" stroke-width=\"" << fmt(stroke)
           << "\"/>\n";
    }
    os << "  <path d=\"M " << fmt(layout.centers[0][0]) << ' ' << fmt(layout.centers[0][1])
       << " L " << fmt(layout.centers[1][0]) << ' ' << fmt(layout.centers[1][1]) << " L "
       << fmt(layout.centers[2][0]) << ' ' << fmt(layout.centers[2][1])
       << " Z\" fill=\"none\" stroke=\"#444444\" stroke-width=\"" << fmt(stroke)
       << "\" stroke-dasharray=\"" << fmt(3 * stroke) << ' ' << fmt(2 * stroke) << "\"/>\n";
    static const char* kThetaNames[3] = {"theta_i", "theta_j", "theta_k"};
    static const char* kPhiNames[3] = {"Phi_i", "Phi_j", "Phi_k"};
    for (int s = 0; s < 3; ++s) {
        os << "  <g transform=\"translate(" << fmt(layout.centers[s][0]) << ','
           << fmt(layout.centers[s][1]) << ") scale(1,-1)\"><text font-size=\"" << fmt(font)
           << "\" fill=\"#000000\">" << kThetaNames[s] << '=' << fmt(layout.angles[s])
           << "</text></g>\n";
        // Phi_s sits on the segment opposite center s.
        const auto& a = layout.centers[(s + 1) % 3];
        const auto& b = layout.centers[(s + 2) % 3];
        const double mx = 0.5 * (a[0] + b[0]);
        const double my = 0.5 * (a[1] + b[1]);
        os << "  <g transform=\"translate(" << fmt(mx) << ',' << fmt(my)
           << ") scale(1,-1)\"><text font-size=\"" << fmt(font)
           << "\" fill=\"#555555\">" << kPhiNames[s] << '=' << fmt(phi[s]) << "</text></g>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

} // namespace qcp
