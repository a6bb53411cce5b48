#include "berry_ring/frenet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "berry_ring/error.hpp"

namespace berry_ring {

namespace {

// Cubic Lagrange through the four samples around interval [i, i+1], evaluated
// at local parameter t in [0, 1].
struct LocalCubic {
  std::array<Vec3, 4> p;
  double offset;  // node abscissae are offset, offset+1, offset+2, offset+3 relative to i

  static LocalCubic around(std::span<const Vec3> pts, std::size_t i) {
    const std::size_t n = pts.size();
    std::size_t first = i == 0 ? 0 : i - 1;
    if (first + 3 >= n) first = n - 4;
    LocalCubic c;
    for (std::size_t k = 0; k < 4; ++k) c.p[k] = pts[first + k];
    c.offset = static_cast<double>(first) - static_cast<double>(i);
    return c;
  }

  Vec3 value(double t) const {
    Vec3 out{};
    for (int k = 0; k < 4; ++k) {
      double w = 1.0;
      for (int j = 0; j < 4; ++j) {
        if (j != k) w *= (t - (offset + j)) / static_cast<double>(k - j);
      }
      out += p[k] * w;
    }
    return out;
  }

  Vec3 derivative(double t) const {
    Vec3 out{};
    for (int k = 0; k < 4; ++k) {
      double dw = 0.0;
      for (int m = 0; m < 4; ++m) {
        if (m == k) continue;
        double term = 1.0 / static_cast<double>(k - m);
        for (int j = 0; j < 4; ++j) {
          if (j != k && j != m) term *= (t - (offset + j)) / static_cast<double>(k - j);
        }
        dw += term;
      }
      out += p[k] * dw;
    }
    return out;
  }
};

constexpr std::array<double, 8> gl_x{-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                     -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                     0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> gl_w{0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                     0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                     0.2223810344533745, 0.1012285362903763};

double arc(const LocalCubic& c, double t) {
  double sum = 0.0;
  for (std::size_t k = 0; k < gl_x.size(); ++k) {
    const double u = 0.5 * t * (gl_x[k] + 1.0);
    sum += gl_w[k] * norm(c.derivative(u));
  }
  return 0.5 * t * sum;
}

// Fritsch-Carlson slopes for a monotone cubic through (x_i, y_i).
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> d(n - 1), m(n);
  for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
  m[0] = d[0];
  m[n - 1] = d[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0) {
      m[i] = 0.0;
    } else {
      const double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
      const double w1 = 2.0 * h1 + h0, w2 = h1 + 2.0 * h0;
      m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
  }
  return m;
}

double pchip_eval(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& m,
                  std::size_t i, double xq) {
  const double h = x[i + 1] - x[i];
  const double t = (xq - x[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y[i] + (t3 - 2 * t2 + t) * h * m[i] + (-2 * t3 + 3 * t2) * y[i + 1] +
         (t3 - t2) * h * m[i + 1];
}

}  // namespace

SpaceCurve SpaceCurve::from_samples(std::span<const Vec3> points, std::size_t n_out) {
  require(points.size() >= 8, ErrorCode::invalid_argument, "space curve needs at least 8 samples");
  for (const Vec3& p : points) require(is_finite(p), ErrorCode::invalid_argument, "curve samples must be finite");
  const std::size_t n = points.size();
  if (n_out == 0) n_out = n;
  require(n_out >= 8, ErrorCode::invalid_argument, "resampled curve needs at least 8 points");

  std::vector<LocalCubic> cubics(n - 1);
  std::vector<double> s(n, 0.0), idx(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    require(norm(points[i + 1] - points[i]) > 0.0, ErrorCode::invalid_argument,
            "consecutive curve samples coincide");
    cubics[i] = LocalCubic::around(points, i);
    s[i + 1] = s[i] + arc(cubics[i], 1.0);
  }
  std::iota(idx.begin(), idx.end(), 0.0);
  const std::vector<double> slopes = pchip_slopes(s, idx);

  const double total = s.back();
  const double h = total / static_cast<double>(n_out - 1);
  std::vector<Vec3> out(n_out);
  out.front() = points.front();
  out.back() = points.back();
  std::size_t seg = 0;
  for (std::size_t k = 1; k + 1 < n_out; ++k) {
    const double target = h * static_cast<double>(k);
    while (seg + 2 < n && s[seg + 1] <= target) ++seg;
    // Monotone-cubic guess for the fractional index, polished by Newton on
    // the arc length of the local cubic.
    double t = std::clamp(pchip_eval(s, idx, slopes, seg, target) - static_cast<double>(seg), 0.0, 1.0);
    const LocalCubic& c = cubics[seg];
    const double want = target - s[seg];
    for (int it = 0; it < 20; ++it) {
      const double speed = norm(c.derivative(t));
      const double step = (arc(c, t) - want) / speed;
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    out[k] = c.value(t);
  }
  return SpaceCurve(std::move(out), h);
}

SpaceCurve SpaceCurve::from_arc_length(std::vector<Vec3> points, double h) {
  require(points.size() >= 8, ErrorCode::invalid_argument, "space curve needs at least 8 samples");
  require(std::isfinite(h) && h > 0.0, ErrorCode::invalid_argument, "arc-length spacing must be positive");
  return SpaceCurve(std::move(points), h);
}

std::vector<FrenetFrame> frenet_frames(const SpaceCurve& curve) {
  const auto r = curve.points();
  const double h = curve.spacing();
  const std::size_t n = r.size();
  std::vector<FrenetFrame> frames;
  frames.reserve(n - 6);
  double bad_lo = 0.0, bad_hi = 0.0;
  bool bad = false;
  for (std::size_t i = 3; i + 3 < n; ++i) {
    const Vec3 d1 = (r[i - 2] - r[i - 1] * 8.0 + r[i + 1] * 8.0 - r[i + 2]) / (12.0 * h);
    const Vec3 d2 = (-r[i - 2] + r[i - 1] * 16.0 - r[i] * 30.0 + r[i + 1] * 16.0 - r[i + 2]) / (12.0 * h * h);
    const Vec3 d3 = (r[i - 3] - r[i - 2] * 8.0 + r[i - 1] * 13.0 - r[i + 1] * 13.0 + r[i + 2] * 8.0 - r[i + 3]) /
                    (8.0 * h * h * h);
    const Vec3 c = cross(d1, d2);
    const double speed = norm(d1);
    const double cn = norm(c);
    const double s = h * static_cast<double>(i);
    const double curvature = cn / (speed * speed * speed);
    if (!(curvature > 1e-8)) {
      if (!bad) bad_lo = s;
      bad = true;
      bad_hi = s;
      continue;
    }
    FrenetFrame f;
    f.s = s;
    f.tangent = d1 / speed;
    f.binormal = c / cn;
    f.normal = cross(f.binormal, f.tangent);
    f.curvature = curvature;
    f.torsion = dot(c, d3) / (cn * cn);
    frames.push_back(f);
  }
  if (bad) {
    std::ostringstream os;
    os << "frenet_frames: curvature vanishes (straight segment) for s in [" << bad_lo << ", " << bad_hi
       << "]; normal undefined";
    fail(ErrorCode::degeneracy, os.str());
  }
  return frames;
}

BirefringenceSample rytov_birefringence(double tau) {
  require_finite(tau, "torsion");
  return {0.0, {0.0, tau, 0.0}};
}

std::vector<Vec3> load_curve_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open curve file " + path.string());
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::stringstream ss(l);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t\r");
      const auto e = cell.find_last_not_of(" \t\r");
      cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    return cells;
  };
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    header = split(line);
    break;
  }
  auto column = [&](const char* name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) fail(ErrorCode::invalid_argument, std::string("curve file lacks column ") + name);
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t ci = column("s_index"), cx = column("x"), cy = column("y"), cz = column("z");
  const std::size_t need = std::max({ci, cx, cy, cz});

  std::vector<std::pair<double, Vec3>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    auto num = [&](std::size_t c) {
      if (c >= cells.size()) fail(ErrorCode::invalid_argument, "curve file line " + std::to_string(lineno) + " is short");
      char* end = nullptr;
      const double v = std::strtod(cells[c].c_str(), &end);
      if (cells[c].empty() || *end != '\0' || !std::isfinite(v)) {
        fail(ErrorCode::invalid_argument, "curve file line " + std::to_string(lineno) + ": bad number");
      }
      return v;
    };
    if (cells.size() <= need) num(need);
    rows.push_back({num(ci), {num(cx), num(cy), num(cz)}});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Vec3> pts;
  pts.reserve(rows.size());
  for (const auto& r : rows) pts.push_back(r.second);
  return pts;
}

}  // namespace berry_ring
