#include "berry_ring/paths.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "berry_ring/error.hpp"

namespace berry_ring {

namespace {

double clamp_to(const Interval& d, double s, const char* what) {
  const double tol = 1e-12 * std::max({1.0, std::abs(d.begin), std::abs(d.end)});
  if (!std::isfinite(s) || s < d.begin - tol || s > d.end + tol) {
    std::ostringstream os;
    os << what << ": s = " << s << " outside [" << d.begin << ", " << d.end << "]";
    fail(ErrorCode::domain, os.str());
  }
  return std::clamp(s, d.begin, d.end);
}

void require_positive(double v, const char* what) {
  if (!(std::isfinite(v) && v > 0.0)) fail(ErrorCode::invalid_argument, std::string(what) + " must be positive");
}

void require_non_negative(double v, const char* what) {
  if (!(std::isfinite(v) && v >= 0.0)) {
    fail(ErrorCode::invalid_argument, std::string(what) + " must be non-negative");
  }
}

}  // namespace

HalfCirclePath::HalfCirclePath(double lambda, double gamma, double k0)
    : lambda_(lambda), gamma_(gamma), k0_(k0) {
  require_non_negative(lambda, "half circle Lambda");
  require_positive(gamma, "half circle gamma");
  require_finite(k0, "k0");
}

BirefringenceSample HalfCirclePath::kappa_at(double s) const {
  s = clamp_to(domain(), s, "half circle");
  const double gs = gamma_ * s;
  const double radial = std::sqrt(std::max(lambda_ * lambda_ - gs * gs, 0.0));
  return {k0_, {gamma_ * radial, 0.0, gamma_ * gs}};
}

StraightLinePath::StraightLinePath(double delta, double gamma, Interval domain, double k0)
    : delta_(delta), gamma_(gamma), domain_(domain), k0_(k0) {
  require_non_negative(delta, "straight line Delta");
  require_positive(gamma, "straight line gamma");
  require_finite(domain.begin, "straight line domain");
  require_finite(domain.end, "straight line domain");
  require(domain.begin <= domain.end, ErrorCode::invalid_argument, "straight line domain is reversed");
  require_finite(k0, "k0");
}

StraightLinePath StraightLinePath::symmetric(double delta, double gamma, double reach) {
  require_positive(gamma, "straight line gamma");
  require_positive(reach, "straight line reach");
  return StraightLinePath(delta, gamma, {-reach / gamma, reach / gamma});
}

BirefringenceSample StraightLinePath::kappa_at(double s) const {
  s = clamp_to(domain_, s, "straight line");
  return {k0_, {0.0, delta_, delta_ * gamma_ * s}};
}

FermiStepPerturbation::FermiStepPerturbation(double alpha, double a_sharp, double b_width, double beta,
                                             double gamma)
    : alpha_(alpha), a_sharp_(a_sharp), b_width_(b_width), beta_(beta), gamma_(gamma) {
  require_finite(alpha, "perturbation alpha");
  require_non_negative(a_sharp, "perturbation A");
  require_non_negative(b_width, "perturbation B");
  require_positive(beta, "perturbation beta");
  require_positive(gamma, "perturbation gamma");
}

double FermiStepPerturbation::profile(double s) const {
  const double x = gamma_ * s / beta_;
  return 1.0 / (1.0 + std::exp(a_sharp_ * (x * x - b_width_ * b_width_)));
}

DiameterPath::DiameterPath(double beta, double lambda1, double gamma,
                           std::optional<FermiStepPerturbation> perturbation, double k0)
    : beta_(beta), lambda1_(lambda1), gamma_(gamma), perturbation_(perturbation), k0_(k0) {
  require_positive(beta, "diameter beta");
  require_non_negative(lambda1, "diameter Lambda1");
  require_positive(gamma, "diameter gamma");
  require_finite(k0, "k0");
}

BirefringenceSample DiameterPath::kappa_at(double s) const {
  s = clamp_to(domain(), s, "diameter");
  Vec3 k{0.0, 0.0, -lambda1_ * gamma_ * gamma_ * s / beta_};
  if (perturbation_) k += perturbation_->kappa_at(s);
  return {k0_, k};
}

TabulatedPath::TabulatedPath(std::vector<double> s, std::vector<Vec3> kappa, double k0)
    : s_(std::move(s)), kappa_(std::move(kappa)), k0_(k0) {
  require(s_.size() >= 2 && s_.size() == kappa_.size(), ErrorCode::invalid_argument,
          "tabulated path needs at least two nodes with matching kappa samples");
  for (std::size_t i = 0; i < s_.size(); ++i) {
    require_finite(s_[i], "tabulated node");
    require(is_finite(kappa_[i]), ErrorCode::invalid_argument, "tabulated kappa must be finite");
    if (i > 0) require(s_[i] > s_[i - 1], ErrorCode::invalid_argument, "tabulated nodes must increase");
  }
  require_finite(k0, "k0");
}

BirefringenceSample TabulatedPath::kappa_at(double s) const {
  s = clamp_to(domain(), s, "tabulated path");
  auto it = std::upper_bound(s_.begin(), s_.end(), s);
  std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - s_.begin()), s_.size() - 1);
  std::size_t lo = hi - 1;
  const double w = (s - s_[lo]) / (s_[hi] - s_[lo]);
  return {k0_, kappa_[lo] * (1.0 - w) + kappa_[hi] * w};
}

ConstantPath::ConstantPath(BirefringenceSample sample, Interval domain) : sample_(sample), domain_(domain) {
  require_finite(sample.k0, "k0");
  require(is_finite(sample.kappa), ErrorCode::invalid_argument, "kappa must be finite");
  require(domain.begin <= domain.end, ErrorCode::invalid_argument, "domain is reversed");
}

BirefringenceSample ConstantPath::kappa_at(double s) const {
  clamp_to(domain_, s, "constant path");
  return sample_;
}

CustomPath::CustomPath(Function f, Interval domain) : f_(std::move(f)), domain_(domain) {
  require(static_cast<bool>(f_), ErrorCode::invalid_argument, "custom path needs a function");
  require(domain.begin <= domain.end, ErrorCode::invalid_argument, "domain is reversed");
}

BirefringenceSample CustomPath::kappa_at(double s) const { return f_(clamp_to(domain_, s, "custom path")); }

Interval domain_of(const PathSegment& segment) {
  return std::visit([](const auto& p) { return p.domain(); }, segment);
}

BirefringenceSample kappa_at(const PathSegment& segment, double s) {
  return std::visit([s](const auto& p) { return p.kappa_at(s); }, segment);
}

RingPath::RingPath(std::vector<PathSegment> segments, double closure_tolerance)
    : segments_(std::move(segments)) {
  require(!segments_.empty(), ErrorCode::invalid_argument, "ring needs at least one segment");
  offsets_.reserve(segments_.size() + 1);
  offsets_.push_back(0.0);
  for (const auto& seg : segments_) offsets_.push_back(offsets_.back() + domain_of(seg).length());

  auto gap = [&](const PathSegment& a, const PathSegment& b) {
    const Vec3 end = berry_ring::kappa_at(a, domain_of(a).end).kappa;
    const Vec3 start = berry_ring::kappa_at(b, domain_of(b).begin).kappa;
    return norm(end - start) / std::max(1.0, norm(start));
  };
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& next = segments_[(i + 1) % segments_.size()];
    const double g = gap(segments_[i], next);
    if (!(g <= closure_tolerance)) {
      std::ostringstream os;
      os << "ring is not continuous in kappa-space after segment " << i << " (gap " << g << ")";
      fail(ErrorCode::invalid_argument, os.str());
    }
  }
}

RingPath::Location RingPath::locate(double u) const {
  const double total = total_length();
  u = clamp_to({0.0, total}, u, "ring");
  auto it = std::upper_bound(offsets_.begin() + 1, offsets_.end(), u);
  std::size_t idx = static_cast<std::size_t>(it - offsets_.begin()) - 1;
  if (idx >= segments_.size()) idx = segments_.size() - 1;
  const Interval d = domain_of(segments_[idx]);
  return {idx, std::min(d.begin + (u - offsets_[idx]), d.end)};
}

BirefringenceSample RingPath::kappa_at(double u) const {
  const auto loc = locate(u);
  return berry_ring::kappa_at(segments_[loc.index], loc.local_s);
}

void validate(const RingParams& p) {
  require_positive(p.beta, "ring.beta");
  require_positive(p.gamma, "ring.gamma");
  require_positive(p.lambda1, "ring.lambda1");
  require_non_negative(p.a_sharp, "ring.a_sharp");
  require_non_negative(p.b_width, "ring.b_width");
  require_finite(p.k0, "ring.k0");
}

RingPath standard_ring(double alpha, const RingParams& p) {
  validate(p);
  require_finite(alpha, "alpha");
  std::vector<PathSegment> segments;
  segments.emplace_back(HalfCirclePath(p.lambda1, p.gamma, p.k0));
  segments.emplace_back(DiameterPath(p.beta, p.lambda1, p.gamma,
                                     FermiStepPerturbation(alpha, p.a_sharp, p.b_width, p.beta, p.gamma), p.k0));
  return RingPath(std::move(segments));
}

}  // namespace berry_ring
