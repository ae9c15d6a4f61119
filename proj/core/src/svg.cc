// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#include "biaslens/svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace biaslens::svg {

namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 420;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 90;
constexpr const char* kProfileColor = "#4c72b0";
constexpr const char* kRecColor = "#dd8452";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

class Canvas {
 public:
  Canvas(double width, double height) : width_(width), height_(height) {
    out_ = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
           num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) +
           "\" font-family=\"sans-serif\" font-size=\"12\">\n"
           "<rect x=\"0\" y=\"0\" width=\"" + num(width) + "\" height=\"" + num(height) +
           "\" fill=\"white\"/>\n";
  }

  void line(double x1, double y1, double x2, double y2, std::string_view stroke,
            std::string_view extra = "") {
    out_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" +
            num(y2) + "\" stroke=\"" + std::string(stroke) + "\"" + std::string(extra) + "/>\n";
  }

  void rect(double x, double y, double w, double h, std::string_view fill) {
    out_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) +
            "\" height=\"" + num(h) + "\" fill=\"" + std::string(fill) + "\"/>\n";
  }

  void circle(double cx, double cy, double r, std::string_view fill) {
    out_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) +
            "\" fill=\"" + std::string(fill) + "\" fill-opacity=\"0.5\"/>\n";
  }

  void text(double x, double y, std::string_view s, std::string_view anchor = "middle",
            double rotate = 0.0, std::string_view extra = "") {
    out_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" +
            std::string(anchor) + "\"";
    if (rotate != 0.0) {
      out_ += " transform=\"rotate(" + num(rotate) + " " + num(x) + " " + num(y) + ")\"";
    }
    out_ += std::string(extra) + ">" + escape(s) + "</text>\n";
  }

  std::string finish() { return out_ + "</svg>\n"; }

  double width() const { return width_; }
  double height() const { return height_; }

 private:
  double width_;
  double height_;
  std::string out_;
};

// Maps [lo, hi] onto the plot's vertical extent.
struct YAxis {
  double lo;
  double hi;
  double top;
  double bottom;
  double operator()(double v) const { return bottom - (v - lo) / (hi - lo) * (bottom - top); }
};

// Round tick step giving about five intervals.
double tick_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

void draw_y_axis(Canvas& c, const YAxis& y, double left, double right, std::string_view label) {
  const double step = tick_step(y.hi - y.lo);
  for (double v = std::ceil(y.lo / step) * step; v <= y.hi + 1e-9 * step; v += step) {
    const double py = y(v);
    c.line(left, py, right, py, "#dddddd");
    c.text(left - 6, py + 4, num(std::abs(v) < 1e-12 ? 0.0 : v), "end");
  }
  c.line(left, y.top, left, y.bottom, "black");
  c.text(18, (y.top + y.bottom) / 2, label, "middle", -90);
}

void title(Canvas& c, std::string_view s) { c.text(c.width() / 2, 22, s, "middle", 0, " font-size=\"15\""); }

}  // namespace

std::string escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string ratio_bars(const std::vector<audit::AuditReport>& reports, std::string_view target) {
  Canvas c(kWidth, kHeight);
  title(c, "Share of " + std::string(target) + "-authored items: profile vs recommendations");
  const double left = kLeft, right = kWidth - kRight, bottom = kHeight - kBottom;
  const YAxis y{0.0, 1.0, kTop, bottom};
  draw_y_axis(c, y, left, right, "average ratio");

  const double slot = (right - left) / std::max<std::size_t>(1, reports.size());
  const double bar = slot * 0.35;
  for (std::size_t a = 0; a < reports.size(); ++a) {
    const auto& r = reports[a];
    const double x0 = left + slot * a + slot * 0.15;
    if (r.avg_profile_ratio) {
      c.rect(x0, y(*r.avg_profile_ratio), bar, bottom - y(*r.avg_profile_ratio), kProfileColor);
    }
    if (r.avg_rec_ratio) {
      c.rect(x0 + bar, y(*r.avg_rec_ratio), bar, bottom - y(*r.avg_rec_ratio), kRecColor);
    }
    c.text(left + slot * (a + 0.5), bottom + 14, r.algorithm, "end", -35);
  }
  c.line(left, bottom, right, bottom, "black");

  c.rect(right - 150, kTop, 12, 12, kProfileColor);
  c.text(right - 132, kTop + 10, "profile", "start");
  c.rect(right - 150, kTop + 18, 12, 12, kRecColor);
  c.text(right - 132, kTop + 28, "recommendations", "start");
  return c.finish();
}

std::string delta_gap_bars(const std::vector<audit::AuditReport>& reports) {
  Canvas c(kWidth, kHeight);
  title(c, "Relative increase in average popularity (%ΔGAP)");
  const double left = kLeft, right = kWidth - kRight, bottom = kHeight - kBottom;
  double lo = 0.0, hi = 0.0;
  for (const auto& r : reports) {
    lo = std::min(lo, r.delta_gap_pct);
    hi = std::max(hi, r.delta_gap_pct);
  }
  if (hi - lo < 1e-9) hi = lo + 1.0;
  const double pad = 0.05 * (hi - lo);
  const YAxis y{lo < 0.0 ? lo - pad : 0.0, hi + pad, kTop, bottom};
  draw_y_axis(c, y, left, right, "%ΔGAP");

  const double slot = (right - left) / std::max<std::size_t>(1, reports.size());
  const double zero = y(0.0);
  for (std::size_t a = 0; a < reports.size(); ++a) {
    const double v = reports[a].delta_gap_pct;
    const double top = std::min(zero, y(v));
    c.rect(left + slot * a + slot * 0.2, top, slot * 0.6, std::abs(y(v) - zero),
           v >= 0.0 ? kRecColor : kProfileColor);
    c.text(left + slot * (a + 0.5), bottom + 14, reports[a].algorithm, "end", -35);
  }
  c.line(left, zero, right, zero, "black");
  return c.finish();
}

std::string user_scatter(const audit::AuditReport& report, std::string_view target) {
  const double size = 420;
  Canvas c(size + kLeft + kRight, size + kTop + 50);
  title(c, report.algorithm + ": " + std::string(target) + " ratio per user");
  const double left = kLeft, right = kLeft + size, top = kTop, bottom = kTop + size - 20;
  const YAxis y{0.0, 1.0, top, bottom};
  draw_y_axis(c, y, left, right, "ratio in recommendations");
  const auto x = [&](double v) { return left + v * (right - left); };
  for (double v = 0.0; v <= 1.0 + 1e-9; v += 0.2) {
    c.text(x(v), bottom + 16, num(v));
  }
  c.line(left, bottom, right, bottom, "black");
  c.line(x(0.0), y(0.0), x(1.0), y(1.0), "#999999", " stroke-dasharray=\"4 4\"");
  c.text((left + right) / 2, bottom + 34, "ratio in profile");
  for (const auto& row : report.per_user) {
    if (row.profile_ratio && row.rec_ratio) {
      c.circle(x(*row.profile_ratio), y(*row.rec_ratio), 3, kProfileColor);
    }
  }
  return c.finish();
}

}  // namespace biaslens::svg
