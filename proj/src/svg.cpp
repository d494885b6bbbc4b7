#include "crcond/svg.hpp"

#include "crcond/io.hpp"

#include <array>
#include <limits>
#include <stdexcept>
#include <string>

namespace crcond {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMargin = 0.05;
constexpr double kInstanceRadius = 3.0;
constexpr double kCenterRadius = 7.0;

constexpr std::array<const char*, 10> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

const char* color_for(int label) {
  return kPalette[static_cast<std::size_t>(label) % kPalette.size()];
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (lo > hi) {  // nothing plotted at all
      lo = 0.0;
      hi = 1.0;
    }
    double span = hi - lo;
    if (span == 0.0) span = 1.0;
    lo -= kMargin * span;
    hi += kMargin * span;
  }
  double span() const { return hi - lo; }
};

void append_circle(std::string& out, double cx, double cy, double r,
                   const char* fill, bool outlined) {
  out += "<circle cx=\"" + format_double(cx) + "\" cy=\"" + format_double(cy) +
         "\" r=\"" + format_double(r) + "\" fill=\"" + fill + "\"";
  if (outlined) out += " stroke=\"#000000\" stroke-width=\"1.5\"";
  out += "/>\n";
}

}  // namespace

std::string render_scatter_svg(const Matrix& points, const IntVector& labels,
                               const Matrix* centers,
                               const IntVector* center_labels) {
  if (points.rows() != labels.size()) {
    throw std::invalid_argument("svg: point/label count mismatch");
  }
  if (points.rows() > 0 && points.cols() < 2) {
    throw std::invalid_argument("svg: at least two feature columns required");
  }
  if ((centers == nullptr) != (center_labels == nullptr)) {
    throw std::invalid_argument("svg: centers and center labels must come together");
  }
  if (centers != nullptr) {
    if (centers->rows() != center_labels->size()) {
      throw std::invalid_argument("svg: center/label count mismatch");
    }
    if (centers->rows() > 0 && centers->cols() < 2) {
      throw std::invalid_argument("svg: at least two feature columns required");
    }
  }

  Range rx, ry;
  for (Index i = 0; i < points.rows(); ++i) {
    rx.include(points(i, 0));
    ry.include(points(i, 1));
  }
  if (centers != nullptr) {
    for (Index i = 0; i < centers->rows(); ++i) {
      rx.include((*centers)(i, 0));
      ry.include((*centers)(i, 1));
    }
  }
  rx.pad();
  ry.pad();

  const auto sx = [&](double x) { return (x - rx.lo) / rx.span() * kWidth; };
  const auto sy = [&](double y) { return kHeight - (y - ry.lo) / ry.span() * kHeight; };

  std::string out;
  out +=
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
      "viewBox=\"0 0 800 600\">\n";
  out += "<rect width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n";
  for (Index i = 0; i < points.rows(); ++i) {
    append_circle(out, sx(points(i, 0)), sy(points(i, 1)), kInstanceRadius,
                  color_for(labels[i]), false);
  }
  if (centers != nullptr) {
    for (Index i = 0; i < centers->rows(); ++i) {
      append_circle(out, sx((*centers)(i, 0)), sy((*centers)(i, 1)), kCenterRadius,
                    color_for((*center_labels)[i]), true);
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace crcond
