#include <cmath>
#include <cstdio>
#include <string>

#include "pentagram/cli.hpp"

namespace pentagram::cli {

namespace {

constexpr double kSize = 1000.0;
constexpr double kMargin = 40.0;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string render_svg(const std::vector<VertexChain>& orbit, int stride, bool* imaginary_parts_dropped) {
    if (stride < 1) throw Error(ErrorKind::InvalidInput, "stride must be positive");
    bool dropped = false;
    // Affine points (w = 1) of vertices 0..n of every rendered step; the extra
    // vertex n = M vertex 0 closes the picture of a twisted polygon.
    std::vector<std::vector<std::array<double, 2>>> polys;
    std::vector<int> step_of;
    for (size_t t = 0; t < orbit.size(); ++t) {
        if (t % stride != 0 && t + 1 != orbit.size()) continue;
        const VertexChain& c = orbit[t];
        std::vector<std::array<double, 2>> pts;
        for (long i = 0; i <= c.n(); ++i) {
            Vec3 v = c.vertex(i);
            Complex px = v(0) / v(2), py = v(1) / v(2);
            if (!std::isfinite(std::abs(px)) || !std::isfinite(std::abs(py))) continue;
            double scale = 1.0 + std::abs(px) + std::abs(py);
            if (std::abs(px.imag()) + std::abs(py.imag()) > 1e-9 * scale) dropped = true;
            pts.push_back({px.real(), py.real()});
        }
        polys.push_back(std::move(pts));
        step_of.push_back(static_cast<int>(t));
    }

    double lo_x = INFINITY, hi_x = -INFINITY, lo_y = INFINITY, hi_y = -INFINITY;
    for (const auto& pts : polys)
        for (const auto& p : pts) {
            lo_x = std::min(lo_x, p[0]);
            hi_x = std::max(hi_x, p[0]);
            lo_y = std::min(lo_y, p[1]);
            hi_y = std::max(hi_y, p[1]);
        }
    double span = std::max(hi_x - lo_x, hi_y - lo_y);
    if (!(span > 0.0)) span = 1.0;
    const double scale = (kSize - 2.0 * kMargin) / span;
    const double cx = std::isfinite(lo_x) ? 0.5 * (lo_x + hi_x) : 0.0;
    const double cy = std::isfinite(lo_y) ? 0.5 * (lo_y + hi_y) : 0.0;
    auto sx = [&](double x) { return fmt(kSize / 2 + (x - cx) * scale); };
    auto sy = [&](double y) { return fmt(kSize / 2 - (y - cy) * scale); };  // y axis up

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"1000\" height=\"1000\" "
           "viewBox=\"0 0 1000 1000\">\n";
    out += "<rect width=\"1000\" height=\"1000\" fill=\"white\"/>\n";
    const size_t m = polys.size();
    for (size_t k = 0; k < m; ++k) {
        double opacity = m > 1 ? 0.15 + 0.85 * static_cast<double>(k) / static_cast<double>(m - 1) : 1.0;
        out += "<g id=\"step-" + std::to_string(step_of[k]) + "\" opacity=\"" + fmt(opacity) + "\">\n";
        out += "<polyline fill=\"none\" stroke=\"#1f4e8c\" stroke-width=\"1.5\" points=\"";
        for (size_t i = 0; i < polys[k].size(); ++i) {
            if (i) out += ' ';
            out += sx(polys[k][i][0]) + "," + sy(polys[k][i][1]);
        }
        out += "\"/>\n";
        for (const auto& p : polys[k])
            out += "<circle cx=\"" + sx(p[0]) + "\" cy=\"" + sy(p[1]) + "\" r=\"3\" fill=\"#c0392b\"/>\n";
        out += "</g>\n";
    }
    out += "</svg>\n";
    if (imaginary_parts_dropped) *imaginary_parts_dropped = dropped;
    return out;
}

}  // namespace pentagram::cli
