#include "segrega/boundary_datum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "segrega/error.hpp"

namespace segrega {

namespace {

// Signed angular difference reduced to (-pi, pi].
double signed_angle(double delta) {
  double d = normalize_angle(delta);
  if (d > kPi) d -= kTwoPi;
  return d;
}

void validate_profile(const BoundaryProfile& profile, const Arc& arc, int index, const DatumOptions& options) {
  const std::string where = "profile " + std::to_string(index);
  if (!(profile.amplitude > 0.0) || !std::isfinite(profile.amplitude)) {
    throw Error(ErrorCode::InvalidProfile, where + " needs a positive finite amplitude");
  }
  if (profile.shape != ProfileShape::CustomSamples) return;

  const auto& s = profile.samples;
  if (s.size() < 3) throw Error(ErrorCode::InvalidProfile, where + " needs at least 3 samples");
  for (double v : s) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidProfile, where + " has a non-finite sample");
    if (v < 0.0) throw Error(ErrorCode::NegativeProfile, where + " has a negative sample");
  }
  if (s.front() != 0.0 || s.back() != 0.0) {
    throw Error(ErrorCode::InvalidProfile, where + " must vanish at both arc endpoints");
  }
  for (std::size_t j = 1; j + 1 < s.size(); ++j) {
    if (!(s[j] > 0.0)) throw Error(ErrorCode::InvalidProfile, where + " must be strictly positive inside its arc");
  }
  const double dtheta = arc.length() / static_cast<double>(s.size() - 1);
  const double bound = options.lipschitz_factor * profile.amplitude;
  for (std::size_t j = 0; j + 1 < s.size(); ++j) {
    const double slope = profile.amplitude * std::abs(s[j + 1] - s[j]) / dtheta;
    if (slope > bound) {
      throw Error(ErrorCode::NonLipschitzProfile,
                  where + " slope " + std::to_string(slope) + " exceeds bound " + std::to_string(bound));
    }
  }
}

}  // namespace

std::string_view to_string(ProfileShape shape) {
  switch (shape) {
    case ProfileShape::BumpSin: return "bump_sin";
    case ProfileShape::BumpPoly: return "bump_poly";
    case ProfileShape::CustomSamples: return "custom_samples";
  }
  return "bump_sin";
}

ProfileShape profile_shape_from_string(std::string_view name) {
  if (name == "bump_sin") return ProfileShape::BumpSin;
  if (name == "bump_poly") return ProfileShape::BumpPoly;
  if (name == "custom_samples") return ProfileShape::CustomSamples;
  throw Error(ErrorCode::InvalidProfile, "unknown profile shape '" + std::string(name) + "'");
}

double BoundaryProfile::eval(double t) const {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  switch (shape) {
    case ProfileShape::BumpSin:
      return amplitude * std::sin(kPi * t);
    case ProfileShape::BumpPoly:
      return amplitude * 4.0 * t * (1.0 - t);
    case ProfileShape::CustomSamples: {
      const double x = t * static_cast<double>(samples.size() - 1);
      const auto j = std::min(static_cast<std::size_t>(x), samples.size() - 2);
      const double w = x - static_cast<double>(j);
      return amplitude * ((1.0 - w) * samples[j] + w * samples[j + 1]);
    }
  }
  return 0.0;
}

double BoundaryProfile::peak() const {
  if (shape != ProfileShape::CustomSamples) return amplitude;
  return amplitude * *std::max_element(samples.begin(), samples.end());
}

AdmissibleDatum AdmissibleDatum::build(int k, std::vector<Arc> arcs, std::vector<BoundaryProfile> profiles,
                                       const DatumOptions& options) {
  if (k < 2) throw Error(ErrorCode::InvalidArc, "species count must be at least 2, got " + std::to_string(k));
  if (arcs.size() != static_cast<std::size_t>(k) || profiles.size() != static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::InvalidArc, "expected " + std::to_string(k) + " arcs and profiles");
  }

  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    Arc& a = arcs[static_cast<std::size_t>(i)];
    if (!std::isfinite(a.start) || !std::isfinite(a.end)) {
      throw Error(ErrorCode::InvalidArc, "arc " + std::to_string(i) + " has non-finite endpoints");
    }
    const double len = a.end - a.start;
    if (!(len > 0.0) || !(len < kTwoPi)) {
      throw Error(ErrorCode::InvalidArc, "arc " + std::to_string(i) + " length must lie in (0, 2pi)");
    }
    total += len;
  }

  for (int i = 0; i < k; ++i) {
    const Arc& cur = arcs[static_cast<std::size_t>(i)];
    const Arc& next = arcs[static_cast<std::size_t>((i + 1) % k)];
    const double gap = signed_angle(next.start - cur.end);
    if (gap < -options.tiling_tol) {
      throw Error(ErrorCode::OverlappingSupports,
                  "arcs " + std::to_string(i) + " and " + std::to_string((i + 1) % k) + " overlap");
    }
    if (gap > options.tiling_tol) {
      throw Error(ErrorCode::GapOnCircle,
                  "gap between arcs " + std::to_string(i) + " and " + std::to_string((i + 1) % k));
    }
  }
  if (total > kTwoPi + k * options.tiling_tol) {
    throw Error(ErrorCode::OverlappingSupports, "arcs wind around the circle more than once");
  }
  if (total < kTwoPi - k * options.tiling_tol) {
    throw Error(ErrorCode::GapOnCircle, "arcs do not cover the circle");
  }

  for (int i = 0; i < k; ++i) {
    validate_profile(profiles[static_cast<std::size_t>(i)], arcs[static_cast<std::size_t>(i)], i, options);
  }

  AdmissibleDatum d;
  d.arcs_ = std::move(arcs);
  d.profiles_ = std::move(profiles);
  d.zeros_.reserve(d.arcs_.size());
  d.offsets_.reserve(d.arcs_.size());
  for (const Arc& a : d.arcs_) d.zeros_.push_back(normalize_angle(a.start));
  for (double z : d.zeros_) d.offsets_.push_back(normalize_angle(z - d.zeros_.front()));
  d.offsets_.front() = 0.0;
  if (!std::is_sorted(d.offsets_.begin(), d.offsets_.end())) {
    throw Error(ErrorCode::OverlappingSupports, "arcs are not listed in counterclockwise order");
  }
  return d;
}

AdmissibleDatum AdmissibleDatum::symmetric(int k, double phase, double amplitude, ProfileShape shape) {
  if (shape == ProfileShape::CustomSamples) {
    throw Error(ErrorCode::InvalidProfile, "symmetric datum needs a closed-form profile");
  }
  std::vector<Arc> arcs;
  std::vector<BoundaryProfile> profiles;
  const double width = kTwoPi / static_cast<double>(k);
  const double start0 = normalize_angle(phase);
  for (int i = 0; i < k; ++i) {
    const double a = start0 + width * static_cast<double>(i);
    arcs.push_back({a, a + width});
    profiles.push_back({shape, amplitude, {}});
  }
  return build(k, std::move(arcs), std::move(profiles));
}

int AdmissibleDatum::species_at(double theta) const {
  const double t = normalize_angle(theta - zeros_.front());
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), t);
  return static_cast<int>(std::distance(offsets_.begin(), it)) - 1;
}

double AdmissibleDatum::species(int i, double theta) const {
  if (species_at(theta) != i) return 0.0;
  const auto idx = static_cast<std::size_t>(i);
  return profiles_[idx].eval(arcs_[idx].param(theta));
}

double AdmissibleDatum::eval(double theta) const {
  const int i = species_at(theta);
  const auto idx = static_cast<std::size_t>(i);
  return profiles_[idx].eval(arcs_[idx].param(theta));
}

double AdmissibleDatum::max_amplitude() const {
  double m = 0.0;
  for (const auto& p : profiles_) m = std::max(m, p.peak());
  return m;
}

AlternatingDatum::AlternatingDatum(AdmissibleDatum base) : base_(std::move(base)) {
  if (base_.k() % 2 != 0) {
    throw Error(ErrorCode::OddSpeciesCount,
                "alternating datum needs an even species count, got " + std::to_string(base_.k()));
  }
}

AlternatingDatum AlternatingDatum::cosine_mode(int s, double amplitude) {
  if (s < 1) throw Error(ErrorCode::InvalidArc, "cosine mode needs s >= 1");
  const int k = 2 * s;
  return AlternatingDatum(AdmissibleDatum::symmetric(k, kPi / static_cast<double>(k), amplitude));
}

double AlternatingDatum::eval(double theta) const {
  const int i = base_.species_at(theta);
  const auto idx = static_cast<std::size_t>(i);
  return sign(i) * base_.profiles()[idx].eval(base_.arcs()[idx].param(theta));
}

BoundaryFunction AlternatingDatum::function() const {
  return [copy = *this](double theta) { return copy.eval(theta); };
}

double eval_alternating(const AdmissibleDatum& datum, double theta) {
  if (datum.k() % 2 != 0) {
    throw Error(ErrorCode::OddSpeciesCount,
                "alternating datum needs an even species count, got " + std::to_string(datum.k()));
  }
  const int i = datum.species_at(theta);
  return AlternatingDatum::sign(i) * datum.species(i, theta);
}

}  // namespace segrega
