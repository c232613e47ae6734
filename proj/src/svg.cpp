#include "coverage/svg.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace coverage {

namespace {

// Slack for times that land a rounding error past the last record.
constexpr double kTimeSlack = 1e-9;

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string polyline(const AnnularRegion& region, const PolarCurve& curve, int samples,
                     double scale) {
  std::string pts;
  for (int k = 0; k < samples; ++k) {
    const double th = kTwoPi * k / samples;
    const Vec2 q = region.point(curve(th), th) * scale;
    pts += num(q.x()) + "," + num(-q.y()) + " ";
  }
  return "<polygon points=\"" + pts + "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
}

// Five-pointed star centred on c.
std::string star(const Vec2& c, double radius, const char* colour) {
  std::string pts;
  for (int k = 0; k < 10; ++k) {
    const double a = std::numbers::pi / 2 + k * std::numbers::pi / 5;
    const double r = k % 2 == 0 ? radius : 0.4 * radius;
    pts += num(c.x() + r * std::cos(a)) + "," + num(c.y() - r * std::sin(a)) + " ";
  }
  return std::string("<polygon points=\"") + pts + "\" fill=\"" + colour +
         "\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
}

}  // namespace

std::vector<std::size_t> select_snapshots(const TrajectoryLog& log,
                                          const std::vector<double>& times) {
  std::vector<std::size_t> picked;
  if (times.empty()) return picked;
  if (log.records.empty()) throw SnapshotRangeError("snapshot time out of range: empty log");
  const double first = log.records.front().t;
  const double last = log.records.back().t;
  for (double t : times) {
    if (t < first - kTimeSlack || t > last + kTimeSlack) {
      throw SnapshotRangeError("snapshot time out of range: t=" + num(t) + " outside [" +
                               num(first) + ", " + num(last) + "]");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < log.records.size(); ++i) {
      if (std::abs(log.records[i].t - t) < std::abs(log.records[best].t - t)) best = i;
    }
    picked.push_back(best);
  }
  return picked;
}

std::string render_snapshot(const AnnularRegion& region, const TrajectoryRecord& record,
                            const SvgStyle& style) {
  const double half = 0.5 * style.pixels;
  const double scale = 0.92 * half / region.max_outer_radius();
  const Vec2 o = region.origin() * scale;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(style.pixels)
      << "\" height=\"" << num(style.pixels) << "\" viewBox=\"" << num(o.x() - half) << ' '
      << num(-o.y() - half) << ' ' << num(style.pixels) << ' ' << num(style.pixels) << "\">\n";
  svg << "<rect x=\"" << num(o.x() - half) << "\" y=\"" << num(-o.y() - half)
      << "\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << num(o.x() - half + 10) << "\" y=\"" << num(-o.y() - half + 20)
      << "\" font-family=\"sans-serif\" font-size=\"14\">t = " << num(record.t) << "</text>\n";

  svg << polyline(region, region.outer(), style.outline_samples, scale);
  svg << polyline(region, region.inner(), style.outline_samples, scale);

  for (double phi : record.phi_wrapped) {
    const Vec2 a = region.point(region.r_in(phi), phi) * scale;
    const Vec2 b = region.point(region.r_out(phi), phi) * scale;
    svg << "<line x1=\"" << num(a.x()) << "\" y1=\"" << num(-a.y()) << "\" x2=\"" << num(b.x())
        << "\" y2=\"" << num(-b.y()) << "\" stroke=\"#444444\" stroke-width=\"2\"/>\n";
  }

  const std::size_t palette = sizeof kPalette / sizeof kPalette[0];
  for (std::size_t i = 0; i < record.centroids.size(); ++i) {
    const Vec2 c = record.centroids[i] * scale;
    svg << star(Vec2(c.x(), -c.y()), 9.0, kPalette[i % palette]);
  }
  for (std::size_t i = 0; i < record.p.size(); ++i) {
    const Vec2 p = record.p[i] * scale;
    svg << "<circle cx=\"" << num(p.x()) << "\" cy=\"" << num(-p.y())
        << "\" r=\"5\" fill=\"" << kPalette[i % palette] << "\" stroke=\"black\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string snapshot_name(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_t%g.svg", t);
  return buf;
}

}  // namespace coverage
