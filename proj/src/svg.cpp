#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "kreinframes/analysis.hpp"

namespace kf {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;

struct View {
  double x0, y0, scale;  // complex-plane origin of the viewport and pixels per unit
  double px(double x) const { return (x - x0) * scale; }
  double py(double y) const { return kHeight - (y - y0) * scale; }
};

const EnclosureRegion* find(const EnclosureSet& set, EnclosureSource s) {
  for (const EnclosureRegion& g : set.regions)
    if (g.source == s) return &g;
  return nullptr;
}

double param(const EnclosureRegion* g, const char* key) {
  if (!g) return NAN;
  auto it = g->parameters.find(key);
  return it == g->parameters.end() ? NAN : it->second;
}

}  // namespace

std::string render_enclosure_svg(const EnclosureSet& set) {
  const EnclosureRegion* bounds = find(set, EnclosureSource::FrameBounds);

  // bounding box of everything drawn
  double x_lo = 0.0, x_hi = 1.0, y_hi = 0.5;
  for (const EnclosureRegion& g : set.regions) {
    for (const Disk& k : g.disks) {
      x_hi = std::max(x_hi, k.center + k.radius);
      y_hi = std::max(y_hi, k.radius);
    }
    if (g.real_interval) x_hi = std::max(x_hi, g.real_interval->second);
  }
  for (const cplx& z : set.spectrum.eigenvalues) {
    x_lo = std::min(x_lo, z.real());
    x_hi = std::max(x_hi, z.real());
    y_hi = std::max(y_hi, std::abs(z.imag()));
  }
  const double w = (x_hi - x_lo) * 1.2;
  const double h = 2.0 * y_hi * 1.2;
  const double scale = std::min(kWidth / w, kHeight / h);
  const View v{0.5 * (x_lo + x_hi) - 0.5 * kWidth / scale, -0.5 * kHeight / scale, scale};

  std::ostringstream o;
  o << std::fixed << std::setprecision(2);
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n"
    << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n<defs>\n";

  // clip primitives of the non-real enclosure
  int clips = 0;
  for (const EnclosureRegion& g : set.regions) {
    for (const Disk& k : g.disks)
      o << "<clipPath id=\"clip" << clips++ << "\"><circle cx=\"" << v.px(k.center) << "\" cy=\""
        << v.py(0.0) << "\" r=\"" << k.radius * scale << "\"/></clipPath>\n";
    if (g.halfplane_re_gt) {
      const double x = std::clamp(v.px(*g.halfplane_re_gt), -1.0, kWidth + 1.0);
      o << "<clipPath id=\"clip" << clips++ << "\"><rect x=\"" << x << "\" y=\"0\" width=\""
        << std::max(0.0, kWidth - x) << "\" height=\"600\"/></clipPath>\n";
    }
    if (g.imag_abs_max) {
      const double y = std::clamp(v.py(*g.imag_abs_max), -1.0, kHeight + 1.0);
      o << "<clipPath id=\"clip" << clips++ << "\"><rect x=\"0\" y=\"" << y << "\" width=\"800\" height=\""
        << std::max(0.0, 2.0 * (v.py(0.0) - y)) << "\"/></clipPath>\n";
    }
  }
  o << "</defs>\n";

  o << "<g id=\"enclosure\">";
  for (int i = 0; i < clips; ++i) o << "<g clip-path=\"url(#clip" << i << ")\">";
  o << "<rect width=\"800\" height=\"600\" fill=\"#9ecae1\" fill-opacity=\"0.55\"/>";
  for (int i = 0; i < clips; ++i) o << "</g>";
  o << "</g>\n";

  // axes
  o << "<line x1=\"0\" y1=\"" << v.py(0) << "\" x2=\"800\" y2=\"" << v.py(0)
    << "\" stroke=\"black\" stroke-width=\"1\"/>\n"
    << "<line x1=\"" << v.px(0) << "\" y1=\"0\" x2=\"" << v.px(0)
    << "\" y2=\"600\" stroke=\"black\" stroke-width=\"1\"/>\n";

  // dashed disk outlines
  for (const EnclosureRegion& g : set.regions)
    for (const Disk& k : g.disks)
      o << "<circle class=\"disk\" data-source=\"" << to_string(g.source) << "\" cx=\"" << v.px(k.center)
        << "\" cy=\"" << v.py(0) << "\" r=\"" << k.radius * scale
        << "\" fill=\"none\" stroke=\"#08519c\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>\n";

  auto vline = [&](double x, const std::string& label, const char* color) {
    if (!std::isfinite(x)) return;
    o << "<line class=\"threshold\" x1=\"" << v.px(x) << "\" y1=\"0\" x2=\"" << v.px(x)
      << "\" y2=\"600\" stroke=\"" << color << "\" stroke-width=\"1.2\" stroke-dasharray=\"4,4\"/>\n"
      << "<text x=\"" << v.px(x) + 4 << "\" y=\"18\" font-family=\"serif\" font-size=\"15\">" << label
      << "</text>\n";
  };
  const double alpha = param(bounds, "alpha");
  vline(alpha / 2.0, "α/2", "#a50f15");
  vline(param(bounds, "alpha_minus") / 2.0, "α₋/2", "#636363");
  vline(param(bounds, "alpha_plus") / 2.0, "α₊/2", "#636363");

  const double gamma = param(bounds, "gamma");
  if (std::isfinite(gamma))
    o << "<line x1=\"" << v.px(1.0 / gamma) << "\" y1=\"" << v.py(0) - 5 << "\" x2=\"" << v.px(1.0 / gamma)
      << "\" y2=\"" << v.py(0) + 5 << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << v.px(1.0 / gamma) - 8 << "\" y=\"" << v.py(0) + 36
      << "\" font-family=\"serif\" font-size=\"15\">γ⁻¹</text>\n";

  if (bounds && bounds->real_interval) {
    const auto [lo, hi] = *bounds->real_interval;
    o << "<line class=\"real-interval\" x1=\"" << v.px(lo) << "\" y1=\"" << v.py(0) << "\" x2=\""
      << v.px(hi) << "\" y2=\"" << v.py(0) << "\" stroke=\"#238b45\" stroke-width=\"6\"/>\n"
      << "<text x=\"" << v.px(lo) - 6 << "\" y=\"" << v.py(0) + 20
      << "\" font-family=\"serif\" font-size=\"14\">ε₋</text>\n"
      << "<text x=\"" << v.px(hi) - 6 << "\" y=\"" << v.py(0) + 20
      << "\" font-family=\"serif\" font-size=\"14\">ε₊</text>\n";
  }

  for (std::size_t i = 0; i < set.spectrum.eigenvalues.size(); ++i) {
    const cplx z = set.spectrum.eigenvalues[i];
    const double x = v.px(z.real());
    const double y = v.py(z.imag());
    if (set.spectrum.is_real[i]) {
      o << "<circle class=\"eigenvalue real\" cx=\"" << x << "\" cy=\"" << v.py(0)
        << "\" r=\"4\" fill=\"black\"/>\n";
    } else {
      o << "<path class=\"eigenvalue nonreal\" d=\"M" << x - 4 << ' ' << y - 4 << " L" << x + 4 << ' '
        << y + 4 << " M" << x - 4 << ' ' << y + 4 << " L" << x + 4 << ' ' << y - 4
        << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace kf
